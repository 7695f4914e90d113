// Command-line front end: experiment runs, one-shot CSI rank analysis, and
// the greedy-vs-exhaustive search validation report.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "risim/bench/csi.hpp"
#include "risim/bench/experiment.hpp"
#include "risim/errors.hpp"
#include "risim/focuser.hpp"
#include "risim/metrics.hpp"

namespace {

// Exit codes: 0 success, 2 validation/config, 3 input parse, 4 numerical,
// 5 I/O. CLI11 reports its own usage errors.
constexpr int kExitValidation = 2;
constexpr int kExitParse = 3;
constexpr int kExitNumerical = 4;
constexpr int kExitIo = 5;

int run_command(const std::string& config_path, bool seed_given, std::uint64_t seed,
                const std::string& out_dir, unsigned workers) {
    if (config_path.empty()) {
        const std::uint64_t master = seed_given ? seed : 1;
        risim::bench::run_default_grid(master, out_dir, workers);
        std::cout << "default grid written to " << out_dir << "/summary.csv\n";
        for (risim::Regime regime : {risim::Regime::LowRank, risim::Regime::MediumRank}) {
            for (std::size_t modules : {std::size_t{1}, std::size_t{4}}) {
                const std::string path = out_dir + "/table_" +
                                         risim::bench::regime_key(regime) + "_" +
                                         std::to_string(modules) + "ris.txt";
                std::ifstream table(path);
                std::cout << "\n" << table.rdbuf();
            }
        }
        return 0;
    }

    risim::bench::ExperimentConfig cfg = risim::bench::load_experiment_config(config_path);
    if (seed_given) {
        cfg.scenario.seed = seed;
    }
    if (cfg.output.csv.empty()) {
        cfg.output.csv = out_dir + "/summary.csv";
    }
    if (cfg.output.table.empty()) {
        cfg.output.table = out_dir + "/table.txt";
    }
    const auto summaries = risim::bench::run_experiment(cfg, workers);
    risim::bench::write_reports(summaries, cfg);

    std::ostringstream csv;
    std::ostringstream table;
    risim::bench::emit_table(summaries, cfg, csv, table);
    std::cout << table.str();
    std::cout << "\nwritten: " << cfg.output.csv << ", " << cfg.output.table << "\n";
    return 0;
}

int rank_command(const std::string& csi_path, const std::string& out_path) {
    const std::vector<risim::bench::CsiRecord> records = risim::bench::ingest_csi(csi_path);
    if (records.empty()) {
        std::cout << "empty capture\n";
        return 0;
    }
    std::vector<risim::RankReport> reports;
    reports.reserve(records.size());
    std::ostringstream csv;
    csv << "record,subcarrier,effective_rank,condition_number,timestamp\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const risim::RankReport report = risim::rank_report(records[i].entries);
        reports.push_back(report);
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%zu,%u,%.17g,%.17g,", i, records[i].subcarrier,
                      report.effective_rank, report.condition_number);
        csv << buf << records[i].timestamp << "\n";
        std::printf("record %zu subcarrier %u R_e=%.6f cond=%.4g\n", i, records[i].subcarrier,
                    report.effective_rank, report.condition_number);
    }
    std::printf("mean R_e over %zu record(s): %.6f\n", records.size(),
                risim::mean_effective_rank(reports));
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) {
            throw risim::IoError("cannot write '" + out_path + "'");
        }
        out << csv.str();
    }
    return 0;
}

int oracle_command(std::size_t n, std::size_t trials, std::uint64_t seed, bool destructive) {
    const risim::FocusMode mode =
        destructive ? risim::FocusMode::Destructive : risim::FocusMode::Constructive;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);

    std::size_t optimal_hits = 0;
    double worst_ratio = 1.0;
    double ratio_sum = 0.0;
    std::size_t violations = 0;

    for (std::size_t trial = 0; trial < trials; ++trial) {
        std::vector<risim::Complex> h1(n);
        std::vector<risim::Complex> h2(n);
        for (std::size_t i = 0; i < n; ++i) {
            h1[i] = {dist(rng), dist(rng)};
            h2[i] = {dist(rng), dist(rng)};
        }
        const risim::GreedySweep sweep = risim::greedy_flip_pair(h1, h2, mode);
        const double greedy = sweep.gain_trace.back();
        const double optimal = risim::exhaustive_pair_optimum(h1, h2, mode).gain;

        const bool bound_ok = destructive ? greedy >= optimal * (1.0 - 1e-12) - 1e-300
                                          : greedy <= optimal * (1.0 + 1e-12) + 1e-300;
        if (!bound_ok) {
            ++violations;
        }
        const double ratio = optimal > 0.0 ? greedy / optimal : 1.0;
        ratio_sum += ratio;
        if (std::abs(greedy - optimal) <= 1e-9 * std::max(1.0, optimal)) {
            ++optimal_hits;
        }
        worst_ratio = destructive ? std::max(worst_ratio, ratio) : std::min(worst_ratio, ratio);
    }

    std::printf("oracle report: mode=%s n=%zu trials=%zu\n",
                destructive ? "destructive" : "constructive", n, trials);
    std::printf("  greedy attained the optimum in %zu/%zu trials\n", optimal_hits, trials);
    std::printf("  mean greedy/optimal ratio: %.6f, worst: %.6f\n",
                ratio_sum / static_cast<double>(trials), worst_ratio);
    if (violations != 0) {
        std::printf("  BOUND VIOLATIONS: %zu\n", violations);
        return kExitNumerical;
    }
    std::printf("  bound held in every trial\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS-assisted MIMO rank enhancement simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    unsigned workers = 0;
    auto* run = app.add_subcommand("run", "Run a rank-enhancement experiment");
    run->add_option("--config", config_path,
                    "Experiment config file; omit to run the default grid");
    auto* seed_opt = run->add_option("--seed", seed, "Master seed override");
    run->add_option("--out", out_dir, "Output directory")->capture_default_str();
    run->add_option("--workers", workers, "Realization worker threads (0 = hardware)")
        ->capture_default_str();

    std::string csi_path;
    std::string rank_out;
    auto* rank = app.add_subcommand("rank", "Effective-rank analysis of a CSI capture");
    rank->add_option("--in", csi_path, "CSI capture file")->required();
    rank->add_option("--out", rank_out, "Optional per-record CSV report");

    std::size_t oracle_n = 10;
    std::size_t oracle_trials = 500;
    std::uint64_t oracle_seed = 1;
    bool oracle_destructive = false;
    auto* oracle = app.add_subcommand("oracle", "Greedy vs exhaustive search validation");
    oracle->add_option("--n", oracle_n, "Elements per trial (max 20)")->capture_default_str();
    oracle->add_option("--trials", oracle_trials, "Number of random trials")
        ->capture_default_str();
    oracle->add_option("--seed", oracle_seed, "Trial generator seed")->capture_default_str();
    oracle->add_flag("--destructive", oracle_destructive, "Validate the destructive mode");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return run_command(config_path, seed_opt->count() > 0, seed, out_dir, workers);
        }
        if (rank->parsed()) {
            return rank_command(csi_path, rank_out);
        }
        return oracle_command(oracle_n, oracle_trials, oracle_seed, oracle_destructive);
    } catch (const risim::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const risim::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const risim::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const risim::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}
