#include "risim/bench/experiment.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "risim/errors.hpp"
#include "risim/focuser.hpp"
#include "risim/metrics.hpp"
#include "risim/ris.hpp"

namespace risim::bench {

namespace {

void hash_matrix(std::uint64_t& h, const ComplexMatrix& m) {
    constexpr std::uint64_t kPrime = 0x100000001B3ULL;
    const auto mix_double = [&](double v) {
        const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
        for (int shift = 0; shift < 64; shift += 8) {
            h ^= (bits >> shift) & 0xFF;
            h *= kPrime;
        }
    };
    for (const Complex& v : m.entries()) {
        mix_double(v.real());
        mix_double(v.imag());
    }
}

// Everything one realization produces, keyed by its index so aggregation is
// independent of evaluation order.
struct RealizationOutcome {
    double no_ris = 0.0;
    double fixed_zero = 0.0;
    double fixed_pi = 0.0;
    double beam = 0.0;
    double copper = 0.0;
    std::uint64_t hash = 0;
    std::string beam_bits;
    std::string fixed_zero_bits;
    std::string fixed_pi_bits;
    std::string focus_text;
};

bool wants(const ExperimentConfig& cfg, Method m) {
    return std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end();
}

std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double mean_of(const std::vector<RealizationOutcome>& outcomes,
               double RealizationOutcome::*field) {
    double sum = 0.0;
    for (const RealizationOutcome& o : outcomes) {
        sum += o.*field;
    }
    return sum / static_cast<double>(outcomes.size());
}

}  // namespace

std::uint64_t channel_set_hash(const ChannelSet& ch) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    hash_matrix(h, ch.h_direct);
    if (ch.h_tx_ris) {
        hash_matrix(h, *ch.h_tx_ris);
        hash_matrix(h, *ch.h_ris_rx);
    }
    return h;
}

std::vector<MethodSummary> run_experiment(const ExperimentConfig& cfg, unsigned workers) {
    cfg.validate();

    const SceneGeometry geom = make_scene_geometry(cfg.geometry);
    const std::size_t n = geom.ris_elements.size();
    const std::uint32_t realizations = cfg.scenario.realizations;

    const bool need_surface = wants(cfg, Method::BeamFocus) || wants(cfg, Method::FixedPhase);
    if (need_surface && n == 0) {
        throw ValidationError("surface methods require a geometry with elements");
    }

    // The reference reflector is deterministic in the geometry.
    std::optional<ComplexMatrix> copper;
    if (wants(cfg, Method::CopperSheet)) {
        Vec3 sheet_center{0.0, 0.0, 0.0};
        if (!geom.ris_elements.empty()) {
            Vec3 sum{};
            for (const Vec3& p : geom.ris_elements) {
                sum = sum + p;
            }
            sheet_center = (1.0 / static_cast<double>(geom.ris_elements.size())) * sum;
        }
        copper = copper_sheet_channel(geom, sheet_center, copper_sheet_halfwidths(cfg.geometry));
    }

    // Hold-fixed option: optimize on realization 0 and reuse that
    // configuration everywhere.
    std::optional<RisConfig> frozen;
    if (wants(cfg, Method::BeamFocus) && !cfg.reoptimize_per_realization) {
        OpCounters counters;
        frozen = passive_beam_focus(synthesize(geom, cfg.scenario, 0), cfg.mode, counters)
                     .best_config;
    }

    std::vector<RealizationOutcome> outcomes(realizations);
    const auto evaluate = [&](std::uint32_t k) {
        const ChannelSet ch = synthesize(geom, cfg.scenario, k);
        RealizationOutcome& out = outcomes[k];
        out.hash = channel_set_hash(ch);

        const ComplexMatrix direct = compose_channel(ch);
        out.no_ris = rank_report(direct).effective_rank;

        if (wants(cfg, Method::FixedPhase)) {
            const auto [all_zero, all_pi] = fixed_phase_configs(n);
            out.fixed_zero = rank_report(compose_channel(ch, all_zero)).effective_rank;
            out.fixed_pi = rank_report(compose_channel(ch, all_pi)).effective_rank;
            out.fixed_zero_bits = to_bit_string(all_zero);
            out.fixed_pi_bits = to_bit_string(all_pi);
        }
        if (wants(cfg, Method::BeamFocus)) {
            if (frozen) {
                out.beam = rank_report(compose_channel(ch, *frozen)).effective_rank;
                out.beam_bits = to_bit_string(*frozen);
            } else {
                OpCounters counters;
                const FocusResult focus = passive_beam_focus(ch, cfg.mode, counters);
                out.beam = focus.best_effective_rank;
                out.beam_bits = to_bit_string(focus.best_config);
                out.focus_text = format_focus_result(focus, counters);
            }
        }
        if (copper) {
            out.copper = rank_report(add(direct, *copper)).effective_rank;
        }
    };

    unsigned worker_count = workers == 0 ? std::thread::hardware_concurrency() : workers;
    worker_count = std::max(1u, std::min<unsigned>(worker_count, realizations));
    if (worker_count == 1) {
        for (std::uint32_t k = 0; k < realizations; ++k) {
            evaluate(k);
        }
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> failures(worker_count);
        for (unsigned w = 0; w < worker_count; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::uint32_t k = w; k < realizations; k += worker_count) {
                        evaluate(k);
                    }
                } catch (...) {
                    failures[w] = std::current_exception();
                }
            });
        }
        for (std::thread& t : pool) {
            t.join();
        }
        for (const std::exception_ptr& failure : failures) {
            if (failure) {
                std::rethrow_exception(failure);
            }
        }
    }

    const double baseline = mean_of(outcomes, &RealizationOutcome::no_ris);

    const auto build = [&](Method m, double RealizationOutcome::*field,
                           std::string RealizationOutcome::*bits) {
        MethodSummary summary;
        summary.method = m;
        summary.mean_effective_rank = mean_of(outcomes, field);
        summary.difference_pct =
            m == Method::NoRis ? 0.0 : difference_pct(summary.mean_effective_rank, baseline);
        summary.realizations = realizations;
        summary.records.reserve(realizations);
        for (std::uint32_t k = 0; k < realizations; ++k) {
            RealizationRecord rec;
            rec.realization = k;
            rec.effective_rank = outcomes[k].*field;
            rec.channel_hash = outcomes[k].hash;
            if (bits) {
                rec.ris_bits = outcomes[k].*bits;
            }
            if (m == Method::BeamFocus) {
                rec.focus_text = outcomes[k].focus_text;
            }
            summary.records.push_back(std::move(rec));
        }
        return summary;
    };

    std::vector<MethodSummary> summaries;
    for (Method m : cfg.methods) {
        switch (m) {
            case Method::NoRis:
                summaries.push_back(build(m, &RealizationOutcome::no_ris, nullptr));
                break;
            case Method::BeamFocus:
                summaries.push_back(build(m, &RealizationOutcome::beam,
                                          &RealizationOutcome::beam_bits));
                break;
            case Method::FixedPhase: {
                const double mean_zero = mean_of(outcomes, &RealizationOutcome::fixed_zero);
                const double mean_pi = mean_of(outcomes, &RealizationOutcome::fixed_pi);
                const bool zero_wins = mean_zero >= mean_pi;
                MethodSummary summary =
                    zero_wins ? build(m, &RealizationOutcome::fixed_zero,
                                      &RealizationOutcome::fixed_zero_bits)
                              : build(m, &RealizationOutcome::fixed_pi,
                                      &RealizationOutcome::fixed_pi_bits);
                summary.fixed_phase_alternate_mean = zero_wins ? mean_pi : mean_zero;
                summaries.push_back(std::move(summary));
                break;
            }
            case Method::CopperSheet:
                summaries.push_back(build(m, &RealizationOutcome::copper, nullptr));
                break;
        }
    }
    return summaries;
}

void emit_table(const std::vector<MethodSummary>& summaries, const ExperimentConfig& cfg,
                std::ostream& csv_out, std::ostream& table_out) {
    if (summaries.empty()) {
        throw ValidationError("cannot emit a table from an empty summary list");
    }

    const std::string scenario = regime_key(cfg.scenario.regime);

    // CSV, full precision.
    csv_out << "scenario,modules,method,mean_Re,diff_pct,realizations,seed\n";
    static constexpr Method kRowOrder[] = {Method::NoRis, Method::BeamFocus, Method::FixedPhase,
                                           Method::CopperSheet};
    for (Method m : kRowOrder) {
        for (const MethodSummary& s : summaries) {
            if (s.method != m) {
                continue;
            }
            csv_out << scenario << ',' << cfg.geometry.modules << ',' << method_key(s.method)
                    << ',' << format_double(s.mean_effective_rank) << ','
                    << format_double(s.difference_pct) << ',' << s.realizations << ','
                    << cfg.scenario.seed << "\n";
            if (s.fixed_phase_alternate_mean) {
                csv_out << "# fixed_phase alternate mean "
                        << format_double(*s.fixed_phase_alternate_mean) << "\n";
            }
        }
    }

    // Aligned text table in the same row order.
    table_out << "Scenario: " << scenario << " rank, " << cfg.geometry.modules
              << " module(s), " << cfg.scenario.realizations << " realization(s), seed "
              << cfg.scenario.seed << "\n";
    table_out << std::left << std::setw(24) << "Method" << std::right << std::setw(12)
              << "Mean R_e" << std::setw(16) << "Difference %" << "\n";
    for (Method m : kRowOrder) {
        for (const MethodSummary& s : summaries) {
            if (s.method != m) {
                continue;
            }
            char mean_buf[32];
            std::snprintf(mean_buf, sizeof(mean_buf), "%.4f", s.mean_effective_rank);
            table_out << std::left << std::setw(24) << method_display_name(s.method) << std::right
                      << std::setw(12) << mean_buf;
            if (s.method == Method::NoRis) {
                table_out << std::setw(16) << "-";
            } else {
                char diff_buf[32];
                std::snprintf(diff_buf, sizeof(diff_buf), "%.4f", s.difference_pct);
                table_out << std::setw(16) << diff_buf;
            }
            table_out << "\n";
            if (s.fixed_phase_alternate_mean) {
                char alt_buf[32];
                std::snprintf(alt_buf, sizeof(alt_buf), "%.4f", *s.fixed_phase_alternate_mean);
                table_out << "  (other fixed-phase level: mean R_e " << alt_buf << ")\n";
            }
        }
    }
}

void write_reports(const std::vector<MethodSummary>& summaries, const ExperimentConfig& cfg) {
    const auto open = [](const std::string& path) {
        std::filesystem::path p(path);
        if (p.has_parent_path()) {
            std::filesystem::create_directories(p.parent_path());
        }
        std::ofstream out(path);
        if (!out) {
            throw IoError("cannot write '" + path + "'");
        }
        return out;
    };

    if (!cfg.output.csv.empty() || !cfg.output.table.empty()) {
        std::ostringstream csv;
        std::ostringstream table;
        emit_table(summaries, cfg, csv, table);
        if (!cfg.output.csv.empty()) {
            open(cfg.output.csv) << csv.str();
        }
        if (!cfg.output.table.empty()) {
            open(cfg.output.table) << table.str();
        }
    }

    if (!cfg.output.records.empty()) {
        std::ofstream out = open(cfg.output.records);
        out << "scenario,modules,method,realization,effective_rank,channel_hash,ris_bits\n";
        for (const MethodSummary& s : summaries) {
            for (const RealizationRecord& r : s.records) {
                out << regime_key(cfg.scenario.regime) << ',' << cfg.geometry.modules << ','
                    << method_key(s.method) << ',' << r.realization << ','
                    << format_double(r.effective_rank) << ',' << std::hex << r.channel_hash
                    << std::dec << ',' << r.ris_bits << "\n";
            }
        }
    }

    if (!cfg.output.focus_log.empty()) {
        std::ofstream out = open(cfg.output.focus_log);
        for (const MethodSummary& s : summaries) {
            if (s.method != Method::BeamFocus) {
                continue;
            }
            for (const RealizationRecord& r : s.records) {
                if (!r.focus_text.empty()) {
                    out << "realization " << r.realization << "\n" << r.focus_text << "\n";
                }
            }
        }
    }
}

std::vector<SummaryCsvRow> parse_summary_csv(std::istream& in) {
    std::vector<SummaryCsvRow> rows;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!saw_header) {
            if (line != "scenario,modules,method,mean_Re,diff_pct,realizations,seed") {
                throw ParseError("unexpected summary CSV header", line_no);
            }
            saw_header = true;
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        if (fields.size() != 7) {
            throw ParseError("expected 7 CSV fields", line_no);
        }
        const auto to_double = [&](const std::string& s) {
            char* end = nullptr;
            const double v = std::strtod(s.c_str(), &end);
            if (end != s.c_str() + s.size()) {
                throw ParseError("malformed number '" + s + "'", line_no);
            }
            return v;
        };
        const auto to_unsigned = [&](const std::string& s) {
            char* end = nullptr;
            const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
            if (end != s.c_str() + s.size() || s.empty()) {
                throw ParseError("malformed count '" + s + "'", line_no);
            }
            return v;
        };
        SummaryCsvRow row;
        row.scenario = fields[0];
        row.modules = static_cast<std::size_t>(to_unsigned(fields[1]));
        row.method = fields[2];
        row.mean_re = to_double(fields[3]);
        row.diff_pct = to_double(fields[4]);
        row.realizations = static_cast<std::uint32_t>(to_unsigned(fields[5]));
        row.seed = to_unsigned(fields[6]);
        rows.push_back(std::move(row));
    }
    return rows;
}

void run_default_grid(std::uint64_t master_seed, const std::string& out_dir, unsigned workers) {
    std::filesystem::create_directories(out_dir);
    std::ostringstream combined_csv;
    bool first = true;
    for (Regime regime : {Regime::LowRank, Regime::MediumRank}) {
        for (std::size_t modules : {std::size_t{1}, std::size_t{4}}) {
            ExperimentConfig cfg = ExperimentConfig::defaults(regime, modules, master_seed);
            const std::vector<MethodSummary> summaries = run_experiment(cfg, workers);

            std::ostringstream csv;
            std::ostringstream table;
            emit_table(summaries, cfg, csv, table);

            // One shared header, then rows from every combination.
            std::istringstream csv_lines(csv.str());
            std::string line;
            bool header = true;
            while (std::getline(csv_lines, line)) {
                if (header) {
                    if (first) {
                        combined_csv << line << "\n";
                    }
                    header = false;
                    continue;
                }
                combined_csv << line << "\n";
            }
            first = false;

            const std::string table_path = out_dir + "/table_" + regime_key(regime) + "_" +
                                           std::to_string(modules) + "ris.txt";
            std::ofstream table_out(table_path);
            if (!table_out) {
                throw IoError("cannot write '" + table_path + "'");
            }
            table_out << table.str();
        }
    }
    const std::string csv_path = out_dir + "/summary.csv";
    std::ofstream csv_out(csv_path);
    if (!csv_out) {
        throw IoError("cannot write '" + csv_path + "'");
    }
    csv_out << combined_csv.str();
}

}  // namespace risim::bench
