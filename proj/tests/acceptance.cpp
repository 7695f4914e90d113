// Acceptance suite: each criterion prints exactly one [PASS]/[FAIL] line.
// Returns the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "risim/bench/csi.hpp"
#include "risim/bench/experiment.hpp"
#include "risim/focuser.hpp"
#include "risim/metrics.hpp"
#include "risim/ris.hpp"
#include "risim/scene.hpp"
#include "risim/svd.hpp"

using namespace risim;

namespace {

struct Check {
    std::vector<std::string> failures;
    std::string note;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            failures.push_back(what);
        }
    }
};

double orthonormality_error(const ComplexMatrix& m) {
    double worst = 0.0;
    for (std::size_t i = 0; i < m.cols(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            Complex dot{0.0, 0.0};
            for (std::size_t r = 0; r < m.rows(); ++r) {
                dot += std::conj(m(r, i)) * m(r, j);
            }
            worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

double reconstruction_error(const ComplexMatrix& h, const SvdResult& s) {
    double sum = 0.0;
    for (std::size_t r = 0; r < h.rows(); ++r) {
        for (std::size_t c = 0; c < h.cols(); ++c) {
            Complex rebuilt{0.0, 0.0};
            for (std::size_t k = 0; k < s.singular_values.size(); ++k) {
                rebuilt += s.left_vectors(r, k) * s.singular_values[k] *
                           std::conj(s.right_vectors(c, k));
            }
            sum += std::norm(h(r, c) - rebuilt);
        }
    }
    return std::sqrt(sum);
}

void criterion_effective_rank(Check& check) {
    check.require(std::abs(effective_rank({1.0, 1.0, 1.0}) - 3.0) <= 1e-9, "R_e([1,1,1]) != 3");
    check.require(std::abs(effective_rank({5.0, 0.0, 0.0}) - 1.0) <= 1e-9, "R_e([5,0,0]) != 1");
    check.require(std::abs(effective_rank({2.0, 1.0, 1.0}) - std::pow(2.0, 1.5)) <= 1e-9,
                  "R_e([2,1,1]) != 2^1.5");

    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> value(0.0, 10.0);
    std::uniform_int_distribution<int> count(1, 6);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> q(count(rng));
        for (double& v : q) {
            v = value(rng);
        }
        q[0] += 1e-3;
        const double base = effective_rank(q);

        std::vector<double> scaled = q;
        const double c = 0.01 + value(rng);
        for (double& v : scaled) {
            v *= c;
        }
        if (std::abs(effective_rank(scaled) - base) > 1e-12 * base) {
            check.require(false, "scale invariance violated at trial " + std::to_string(trial));
            break;
        }
        std::vector<double> shuffled = q;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        if (effective_rank(shuffled) != base) {
            check.require(false,
                          "permutation invariance violated at trial " + std::to_string(trial));
            break;
        }
    }
}

void criterion_svd(Check& check) {
    constexpr std::pair<std::size_t, std::size_t> shapes[] = {{1, 1}, {2, 3}, {3, 3}, {3, 2}};
    std::mt19937_64 rng(202);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto [rows, cols] = shapes[trial % 4];
        const ComplexMatrix h = testutil::random_matrix(rng, rows, cols);
        const SvdResult s = svd(h);

        const double norm_h = frobenius_norm(h);
        if (reconstruction_error(h, s) > 1e-10 * std::max(1.0, norm_h)) {
            check.require(false, "reconstruction failed at trial " + std::to_string(trial));
            return;
        }
        if (orthonormality_error(s.left_vectors) > 1e-10 ||
            orthonormality_error(s.right_vectors) > 1e-10) {
            check.require(false, "orthonormality failed at trial " + std::to_string(trial));
            return;
        }
        double energy = 0.0;
        for (double q : s.singular_values) {
            energy += q * q;
        }
        if (std::abs(energy - norm_h * norm_h) > 1e-10 * std::max(1.0, norm_h * norm_h)) {
            check.require(false, "energy identity failed at trial " + std::to_string(trial));
            return;
        }
        for (std::size_t i = 0; i + 1 < s.singular_values.size(); ++i) {
            if (s.singular_values[i] < s.singular_values[i + 1]) {
                check.require(false, "ordering failed at trial " + std::to_string(trial));
                return;
            }
        }
    }
}

void criterion_algorithm_fidelity(Check& check) {
    // Hand traces.
    {
        const std::vector<Complex> h2{Complex{1.0, 0.0}, Complex{1.0, 0.0}};
        const std::vector<Complex> split{Complex{1.0, 0.0}, Complex{-1.0, 0.0}};
        const GreedySweep a = greedy_flip_pair(split, h2, FocusMode::Constructive);
        check.require(a.config.phase_bits == std::vector<std::uint8_t>{1, 0} &&
                          a.gain_trace.back() == 4.0,
                      "hand trace [1,-1] mismatch");

        const std::vector<Complex> quarter{Complex{1.0, 0.0}, Complex{0.0, 1.0}};
        const GreedySweep b = greedy_flip_pair(quarter, h2, FocusMode::Constructive);
        check.require(b.config.phase_bits == std::vector<std::uint8_t>{1, 1} &&
                          b.gain_trace.back() == 2.0,
                      "hand trace [1,j] mismatch");
    }

    // Monotone accepted-gain traces.
    std::mt19937_64 rng(303);
    std::uniform_int_distribution<std::size_t> size(1, 64);
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t n = size(rng);
        const std::vector<Complex> h1 = testutil::random_vector(rng, n);
        const std::vector<Complex> h2 = testutil::random_vector(rng, n);
        const FocusMode mode =
            (trial % 2 == 0) ? FocusMode::Constructive : FocusMode::Destructive;
        const GreedySweep sweep = greedy_flip_pair(h1, h2, mode);
        for (std::size_t i = 0; i + 1 < sweep.gain_trace.size(); ++i) {
            const bool ok = mode == FocusMode::Constructive
                                ? sweep.gain_trace[i + 1] >= sweep.gain_trace[i]
                                : sweep.gain_trace[i + 1] <= sweep.gain_trace[i];
            if (!ok) {
                check.require(false, "trace not monotone at trial " + std::to_string(trial));
                return;
            }
        }
    }

    // Greedy vs exhaustive bound, 500 instances per mode at N = 10.
    for (int trial = 0; trial < 500; ++trial) {
        const std::vector<Complex> h1 = testutil::random_vector(rng, 10);
        const std::vector<Complex> h2 = testutil::random_vector(rng, 10);
        const double up = greedy_flip_pair(h1, h2, FocusMode::Constructive).gain_trace.back();
        const double up_best = exhaustive_pair_optimum(h1, h2, FocusMode::Constructive).gain;
        if (up > up_best * (1.0 + 1e-12) + 1e-300) {
            check.require(false, "constructive bound violated at trial " + std::to_string(trial));
            return;
        }
        const double down = greedy_flip_pair(h1, h2, FocusMode::Destructive).gain_trace.back();
        const double down_best = exhaustive_pair_optimum(h1, h2, FocusMode::Destructive).gain;
        if (down < down_best * (1.0 - 1e-12) - 1e-300) {
            check.require(false, "destructive bound violated at trial " + std::to_string(trial));
            return;
        }
    }
}

void criterion_counter_law(Check& check) {
    struct Case {
        std::size_t n_t;
        std::size_t n_r;
        std::size_t n;
    };
    const Case cases[] = {{3, 3, 256}, {3, 3, 1024}, {2, 2, 8}};
    for (const Case& c : cases) {
        ChannelSet ch = [&] {
            if (c.n == 256 || c.n == 1024) {
                GeometryParams params;
                params.modules = c.n == 1024 ? 4 : 1;
                params.tx_antennas = c.n_t;
                params.rx_antennas = c.n_r;
                return synthesize(make_scene_geometry(params),
                                  ScenarioSpec::defaults_for(Regime::LowRank, 5), 0);
            }
            // Hand-built 8-element line for the small case.
            SceneGeometry geom;
            geom.wavelength = 0.0573;
            for (std::size_t i = 0; i < c.n; ++i) {
                geom.ris_elements.push_back({0.02865 * static_cast<double>(i), 0.0, 0.0});
            }
            for (std::size_t i = 0; i < c.n_t; ++i) {
                geom.tx_positions.push_back({0.0, 0.02865 * static_cast<double>(i), 0.6});
            }
            for (std::size_t i = 0; i < c.n_r; ++i) {
                geom.rx_positions.push_back({0.1, 0.02865 * static_cast<double>(i), 2.0});
            }
            return synthesize(geom, ScenarioSpec::defaults_for(Regime::LowRank, 5), 0);
        }();

        OpCounters counters;
        passive_beam_focus(ch, FocusMode::Constructive, counters);
        const std::uint64_t expected_gain =
            static_cast<std::uint64_t>(c.n_t) * c.n_r * (c.n + 1);
        const std::uint64_t expected_svd = static_cast<std::uint64_t>(c.n_t) * c.n_r;
        check.require(counters.gain_evaluations == expected_gain,
                      "gain counter mismatch for N=" + std::to_string(c.n));
        check.require(counters.svd_evaluations == expected_svd,
                      "svd counter mismatch for N=" + std::to_string(c.n));
    }
}

struct GridMeans {
    double no_ris = 0.0;
    double beam_1 = 0.0;
    double beam_4 = 0.0;
};

GridMeans beam_focus_means(Regime regime) {
    GridMeans means;
    for (std::size_t modules : {std::size_t{1}, std::size_t{4}}) {
        bench::ExperimentConfig cfg = bench::ExperimentConfig::defaults(regime, modules, 1);
        cfg.methods = {bench::Method::NoRis, bench::Method::BeamFocus};
        const auto summaries = bench::run_experiment(cfg, 0);
        means.no_ris = summaries[0].mean_effective_rank;
        (modules == 1 ? means.beam_1 : means.beam_4) = summaries[1].mean_effective_rank;
    }
    return means;
}

void criterion_low_rank_ordering(Check& check, GridMeans& low) {
    low = beam_focus_means(Regime::LowRank);
    char note[160];
    std::snprintf(note, sizeof(note), "no_ris %.4f, beam(1) %.4f, beam(4) %.4f", low.no_ris,
                  low.beam_1, low.beam_4);
    check.note = note;
    check.require(low.no_ris >= 1.1 && low.no_ris <= 1.5,
                  "baseline mean outside [1.1, 1.5]");
    check.require(low.beam_4 - low.no_ris >= 0.8, "4-module gain below 0.8");
    check.require(low.beam_4 > low.beam_1, "4-module mean not above 1-module mean");
    check.require(low.beam_1 > low.no_ris, "1-module mean not above baseline");
}

void criterion_medium_rank_ordering(Check& check, const GridMeans& low) {
    // Recompute the low-rank reference if the earlier criterion never ran.
    const GridMeans base = low.no_ris > 0.0 ? low : beam_focus_means(Regime::LowRank);
    const GridMeans medium = beam_focus_means(Regime::MediumRank);
    char note[160];
    std::snprintf(note, sizeof(note), "no_ris %.4f, beam(4) %.4f", medium.no_ris, medium.beam_4);
    check.note = note;
    check.require(medium.beam_4 > medium.no_ris, "medium-rank improvement not positive");
    const double relative_low = (base.beam_4 - base.no_ris) / base.no_ris;
    const double relative_medium = (medium.beam_4 - medium.no_ris) / medium.no_ris;
    check.require(relative_medium < relative_low,
                  "medium-rank relative improvement not below the low-rank one");
}

void criterion_copper_concentration(Check& check) {
    const GeometryParams params;
    const SceneGeometry geom = make_scene_geometry(params);
    const ComplexMatrix sheet =
        copper_sheet_channel(geom, Vec3{}, copper_sheet_halfwidths(params));
    const double rank = rank_report(sheet).effective_rank;
    char note[64];
    std::snprintf(note, sizeof(note), "copper-only R_e %.4f", rank);
    check.note = note;
    check.require(rank <= 1.3, "copper contribution spreads over more than 1.3 modes");
}

void criterion_determinism(Check& check) {
    namespace fs = std::filesystem;
    const std::string dir_a = "acceptance_out/grid_w1";
    const std::string dir_b = "acceptance_out/grid_w4";
    bench::run_default_grid(1, dir_a, 1);
    bench::run_default_grid(1, dir_b, 4);

    const auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    const std::string a = slurp(dir_a + "/summary.csv");
    const std::string b = slurp(dir_b + "/summary.csv");
    check.require(!a.empty(), "summary.csv missing or empty");
    check.require(a == b, "worker count changed the output bytes");

    // Per-combination tables, filenames suffixed by regime and module count.
    for (const char* name : {"table_low_1ris.txt", "table_low_4ris.txt",
                             "table_medium_1ris.txt", "table_medium_4ris.txt"}) {
        check.require(fs::exists(dir_a + "/" + name) && fs::file_size(dir_a + "/" + name) > 0,
                      std::string("missing table file ") + name);
    }

    // Same seed, rerun: still identical.
    const std::string dir_c = "acceptance_out/grid_rerun";
    bench::run_default_grid(1, dir_c, 1);
    check.require(slurp(dir_c + "/summary.csv") == a, "rerun changed the output bytes");
}

void criterion_csi_round_trip(Check& check) {
    std::mt19937_64 rng(909);
    std::vector<bench::CsiRecord> records;
    for (std::uint32_t i = 0; i < 100; ++i) {
        records.push_back(
            bench::CsiRecord{i, testutil::random_matrix(rng, 3, 3), "t" + std::to_string(i)});
    }
    std::filesystem::create_directories("acceptance_out");
    const std::string path = "acceptance_out/capture.csi";
    bench::write_csi(path, records);
    const std::vector<bench::CsiRecord> parsed = bench::ingest_csi(path);

    check.require(parsed.size() == records.size(), "record count changed");
    for (std::size_t i = 0; i < records.size() && i < parsed.size(); ++i) {
        if (parsed[i].entries.entries() != records[i].entries.entries()) {
            check.require(false, "entries not lossless at record " + std::to_string(i));
            return;
        }
        const double direct = rank_report(records[i].entries).effective_rank;
        const double reread = rank_report(parsed[i].entries).effective_rank;
        if (std::abs(direct - reread) > 1e-12) {
            check.require(false, "rank mismatch at record " + std::to_string(i));
            return;
        }
    }
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        double budget_seconds;  // 0 = no stated budget
        std::function<void(Check&)> body;
    };

    GridMeans low_means;
    const std::vector<Criterion> criteria{
        {1, "effective-rank analytic suite", 1.0, criterion_effective_rank},
        {2, "SVD reconstruction/orthonormality/energy suite", 5.0, criterion_svd},
        {3, "greedy search fidelity and oracle bounds", 30.0, criterion_algorithm_fidelity},
        {4, "search operation counter law", 0.0, criterion_counter_law},
        {5, "low-rank ordering and 4-module gain", 300.0,
         [&](Check& c) { criterion_low_rank_ordering(c, low_means); }},
        {6, "medium-rank ordering vs low-rank", 300.0,
         [&](Check& c) { criterion_medium_rank_ordering(c, low_means); }},
        {7, "copper sheet mode concentration", 0.0, criterion_copper_concentration},
        {8, "byte-identical outputs across workers and reruns", 0.0, criterion_determinism},
        {9, "CSI capture round trip", 0.0, criterion_csi_round_trip},
    };

    int failed = 0;
    for (const Criterion& criterion : criteria) {
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            criterion.body(check);
        } catch (const std::exception& e) {
            check.require(false, std::string("exception: ") + e.what());
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (criterion.budget_seconds > 0.0 && elapsed > criterion.budget_seconds) {
            check.require(false, "runtime budget exceeded");
        }

        const bool ok = check.failures.empty();
        failed += ok ? 0 : 1;
        std::printf("[%s] criterion %d: %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", criterion.id,
                    criterion.title, elapsed, check.note.empty() ? "" : " -- ",
                    check.note.c_str());
        for (const std::string& reason : check.failures) {
            std::printf("       %s\n", reason.c_str());
        }
    }
    return failed;
}
