#include "risim/bench/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <set>

#include "risim/errors.hpp"

namespace risim::bench {

namespace {

constexpr double kSpeedOfLight = 2.99792458e8;  // m/s

std::string trimmed(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) {
        ++begin;
    }
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) {
        --end;
    }
    return s.substr(begin, end - begin);
}

struct Entry {
    std::string value;
    std::size_t line;
};

using Section = std::map<std::string, Entry>;

struct RawConfig {
    std::map<std::string, Section> sections;
};

RawConfig read_sections(std::istream& in) {
    static const std::set<std::string> known_sections{"scenario", "geometry", "methods", "run",
                                                      "output"};
    RawConfig raw;
    std::string line;
    std::size_t line_no = 0;
    std::string current;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t comment = line.find('#');
        if (comment != std::string::npos) {
            line.erase(comment);
        }
        const std::string body = trimmed(line);
        if (body.empty()) {
            continue;
        }
        if (body.front() == '[') {
            if (body.back() != ']') {
                throw ParseError("unterminated section header", line_no);
            }
            current = trimmed(body.substr(1, body.size() - 2));
            if (!known_sections.count(current)) {
                throw ParseError("unknown section [" + current + "]", line_no);
            }
            raw.sections[current];  // mark as seen
            continue;
        }
        const std::size_t eq = body.find('=');
        if (eq == std::string::npos) {
            throw ParseError("expected 'key = value'", line_no);
        }
        if (current.empty()) {
            throw ParseError("key outside of any section", line_no);
        }
        const std::string key = trimmed(body.substr(0, eq));
        const std::string value = trimmed(body.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ParseError("empty key or value", line_no);
        }
        if (!raw.sections[current].emplace(key, Entry{value, line_no}).second) {
            throw ParseError("duplicate key '" + key + "' in [" + current + "]", line_no);
        }
    }
    return raw;
}

// Pops a key from the section; leftovers are reported as unknown at the end.
const Entry* take(Section& section, const std::string& key, std::optional<Entry>& storage) {
    const auto it = section.find(key);
    if (it == section.end()) {
        return nullptr;
    }
    storage = it->second;
    section.erase(it);
    return &*storage;
}

double parse_double_value(const Entry& e, const std::string& what) {
    std::string v = e.value;
    if (v == "-inf") {
        return -std::numeric_limits<double>::infinity();
    }
    if (v == "inf" || v == "+inf") {
        return std::numeric_limits<double>::infinity();
    }
    char* end = nullptr;
    const double value = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size()) {
        throw ParseError(what + ": malformed number '" + v + "'", e.line);
    }
    return value;
}

std::uint64_t parse_unsigned_value(const Entry& e, const std::string& what) {
    if (e.value.empty() || e.value[0] == '-') {
        throw ParseError(what + ": malformed count '" + e.value + "'", e.line);
    }
    char* end = nullptr;
    const unsigned long long value = std::strtoull(e.value.c_str(), &end, 10);
    if (end != e.value.c_str() + e.value.size()) {
        throw ParseError(what + ": malformed count '" + e.value + "'", e.line);
    }
    return value;
}

bool parse_bool_value(const Entry& e, const std::string& what) {
    if (e.value == "true") {
        return true;
    }
    if (e.value == "false") {
        return false;
    }
    throw ParseError(what + ": expected true or false, got '" + e.value + "'", e.line);
}

void reject_leftovers(const Section& section, const std::string& name) {
    if (!section.empty()) {
        const auto& [key, entry] = *section.begin();
        throw ParseError("unknown key '" + key + "' in [" + name + "]", entry.line);
    }
}

}  // namespace

std::string method_key(Method m) {
    switch (m) {
        case Method::NoRis: return "no_ris";
        case Method::BeamFocus: return "beam_focus";
        case Method::FixedPhase: return "fixed_phase";
        case Method::CopperSheet: return "copper_sheet";
    }
    throw ValidationError("unreachable method");
}

std::string method_display_name(Method m) {
    switch (m) {
        case Method::NoRis: return "w/o RIS";
        case Method::BeamFocus: return "Passive Beam Focusing";
        case Method::FixedPhase: return "Fixed Phase";
        case Method::CopperSheet: return "Copper Sheet";
    }
    throw ValidationError("unreachable method");
}

Method method_from_key(const std::string& key) {
    for (Method m : {Method::NoRis, Method::BeamFocus, Method::FixedPhase, Method::CopperSheet}) {
        if (method_key(m) == key) {
            return m;
        }
    }
    throw ValidationError("unknown method '" + key + "'");
}

std::string regime_key(Regime regime) {
    return regime == Regime::LowRank ? "low" : "medium";
}

void ExperimentConfig::validate() const {
    scenario.validate();
    geometry.validate();
    if (methods.empty()) {
        throw ValidationError("methods: at least one method must be selected");
    }
    std::set<Method> seen;
    for (Method m : methods) {
        if (!seen.insert(m).second) {
            throw ValidationError("methods: duplicate entry '" + method_key(m) + "'");
        }
    }
}

ExperimentConfig ExperimentConfig::defaults(Regime regime, std::size_t modules,
                                            std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.scenario = ScenarioSpec::defaults_for(regime, seed);
    cfg.geometry.modules = modules;
    cfg.methods = {Method::NoRis, Method::BeamFocus, Method::FixedPhase, Method::CopperSheet};
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_experiment_config(std::istream& in) {
    RawConfig raw = read_sections(in);
    ExperimentConfig cfg;
    std::optional<Entry> slot;

    // [scenario]
    {
        Section& s = raw.sections["scenario"];
        const Entry* regime = take(s, "regime", slot);
        if (!regime) {
            throw ParseError("[scenario] requires a 'regime' key (low | medium)");
        }
        Regime r;
        if (regime->value == "low") {
            r = Regime::LowRank;
        } else if (regime->value == "medium") {
            r = Regime::MediumRank;
        } else {
            throw ParseError("regime: expected low or medium, got '" + regime->value + "'",
                             regime->line);
        }
        std::uint64_t seed = 1;
        if (const Entry* e = take(s, "seed", slot)) {
            seed = parse_unsigned_value(*e, "seed");
        }
        std::uint32_t realizations = 100;
        if (const Entry* e = take(s, "realizations", slot)) {
            const std::uint64_t v = parse_unsigned_value(*e, "realizations");
            if (v < 1 || v > std::numeric_limits<std::uint32_t>::max()) {
                throw ParseError("realizations: out of range", e->line);
            }
            realizations = static_cast<std::uint32_t>(v);
        }
        cfg.scenario = ScenarioSpec::defaults_for(r, seed, realizations);
        if (const Entry* e = take(s, "scatter_power_db", slot)) {
            cfg.scenario.scatter_power_db = parse_double_value(*e, "scatter_power_db");
        }
        if (const Entry* e = take(s, "rician_k_db", slot)) {
            cfg.scenario.rician_k_db = parse_double_value(*e, "rician_k_db");
        }
        if (const Entry* e = take(s, "direct_dominant_gain", slot)) {
            cfg.scenario.direct_dominant_gain = parse_double_value(*e, "direct_dominant_gain");
        }
        reject_leftovers(s, "scenario");
    }

    // [geometry]
    {
        Section& s = raw.sections["geometry"];
        const Entry* wavelength = take(s, "wavelength_m", slot);
        std::optional<Entry> carrier_slot;
        const Entry* carrier = take(s, "carrier_frequency_ghz", carrier_slot);
        if (wavelength && carrier) {
            throw ParseError("give either wavelength_m or carrier_frequency_ghz, not both",
                             carrier->line);
        }
        if (wavelength) {
            cfg.geometry.wavelength = parse_double_value(*wavelength, "wavelength_m");
        } else if (carrier) {
            const double ghz = parse_double_value(*carrier, "carrier_frequency_ghz");
            if (!(ghz > 0.0) || !std::isfinite(ghz)) {
                throw ParseError("carrier_frequency_ghz must be positive", carrier->line);
            }
            cfg.geometry.wavelength = kSpeedOfLight / (ghz * 1e9);
        }
        if (const Entry* e = take(s, "modules", slot)) {
            cfg.geometry.modules = parse_unsigned_value(*e, "modules");
        }
        if (const Entry* e = take(s, "elements_per_side", slot)) {
            cfg.geometry.elements_per_side = parse_unsigned_value(*e, "elements_per_side");
        }
        if (const Entry* e = take(s, "tx_ris_distance_m", slot)) {
            cfg.geometry.tx_ris_distance = parse_double_value(*e, "tx_ris_distance_m");
        }
        if (const Entry* e = take(s, "rx_ris_distance_m", slot)) {
            cfg.geometry.rx_ris_distance = parse_double_value(*e, "rx_ris_distance_m");
        }
        if (const Entry* e = take(s, "tx_antennas", slot)) {
            cfg.geometry.tx_antennas = parse_unsigned_value(*e, "tx_antennas");
        }
        if (const Entry* e = take(s, "rx_antennas", slot)) {
            cfg.geometry.rx_antennas = parse_unsigned_value(*e, "rx_antennas");
        }
        reject_leftovers(s, "geometry");
    }

    // [methods]
    {
        Section& s = raw.sections["methods"];
        if (const Entry* e = take(s, "list", slot)) {
            cfg.methods.clear();
            std::string rest = e->value;
            while (!rest.empty()) {
                const std::size_t comma = rest.find(',');
                const std::string token = trimmed(rest.substr(0, comma));
                if (token.empty()) {
                    throw ParseError("methods list contains an empty entry", e->line);
                }
                try {
                    cfg.methods.push_back(method_from_key(token));
                } catch (const ValidationError& err) {
                    throw ParseError(err.what(), e->line);
                }
                rest = comma == std::string::npos ? std::string{} : rest.substr(comma + 1);
            }
        } else {
            cfg.methods = {Method::NoRis, Method::BeamFocus, Method::FixedPhase,
                           Method::CopperSheet};
        }
        reject_leftovers(s, "methods");
    }

    // [run]
    {
        Section& s = raw.sections["run"];
        if (const Entry* e = take(s, "mode", slot)) {
            if (e->value == "constructive") {
                cfg.mode = FocusMode::Constructive;
            } else if (e->value == "destructive") {
                cfg.mode = FocusMode::Destructive;
            } else {
                throw ParseError("mode: expected constructive or destructive, got '" + e->value +
                                     "'",
                                 e->line);
            }
        }
        if (const Entry* e = take(s, "reoptimize_per_realization", slot)) {
            cfg.reoptimize_per_realization = parse_bool_value(*e, "reoptimize_per_realization");
        }
        reject_leftovers(s, "run");
    }

    // [output]
    {
        Section& s = raw.sections["output"];
        if (const Entry* e = take(s, "csv", slot)) {
            cfg.output.csv = e->value;
        }
        if (const Entry* e = take(s, "table", slot)) {
            cfg.output.table = e->value;
        }
        if (const Entry* e = take(s, "records", slot)) {
            cfg.output.records = e->value;
        }
        if (const Entry* e = take(s, "focus_log", slot)) {
            cfg.output.focus_log = e->value;
        }
        reject_leftovers(s, "output");
    }

    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file '" + path + "'");
    }
    return parse_experiment_config(in);
}

}  // namespace risim::bench
