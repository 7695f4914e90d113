#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "risim/bench/config.hpp"
#include "risim/scene.hpp"

namespace risim::bench {

/// One realization's outcome for one method. channel_hash fingerprints the
/// ChannelSet so paired-comparison discipline can be audited: within a
/// realization every method must log the same hash.
struct RealizationRecord {
    std::uint32_t realization = 0;
    double effective_rank = 0.0;
    std::uint64_t channel_hash = 0;
    std::string ris_bits;     // empty for methods without a configured surface
    std::string focus_text;   // per-run focus record, beam-focus only
};

struct MethodSummary {
    Method method = Method::NoRis;
    double mean_effective_rank = 0.0;
    double difference_pct = 0.0;   // vs the no-RIS mean; exactly 0 for the no-RIS row
    std::uint32_t realizations = 0;
    std::vector<RealizationRecord> records;
    // Mean of the losing fixed-phase variant (the harness evaluates both the
    // all-0 and all-pi configurations and reports the better one).
    std::optional<double> fixed_phase_alternate_mean;
};

/// FNV-1a over the bit patterns of all channel entries.
std::uint64_t channel_set_hash(const ChannelSet& ch);

/// Runs every requested method over the configured realizations. Within a
/// realization all methods see the identical ChannelSet. The no-RIS baseline
/// is always computed internally (the difference column needs it) but only
/// reported when requested. Realizations are distributed over `workers`
/// threads (0 = hardware concurrency); results do not depend on the worker
/// count.
std::vector<MethodSummary> run_experiment(const ExperimentConfig& cfg, unsigned workers = 1);

/// Summary rows as CSV (schema: scenario,modules,method,mean_Re,diff_pct,
/// realizations,seed; numeric fields at full round-trip precision) and as
/// an aligned text table with rows ordered no-RIS, beam focusing, fixed
/// phase, copper sheet.
void emit_table(const std::vector<MethodSummary>& summaries, const ExperimentConfig& cfg,
                std::ostream& csv_out, std::ostream& table_out);

/// Writes the outputs configured in cfg.output (csv, table, optional
/// per-realization records and focus log). Missing paths are skipped.
void write_reports(const std::vector<MethodSummary>& summaries, const ExperimentConfig& cfg);

struct SummaryCsvRow {
    std::string scenario;
    std::size_t modules = 0;
    std::string method;
    double mean_re = 0.0;
    double diff_pct = 0.0;
    std::uint32_t realizations = 0;
    std::uint64_t seed = 0;
};

std::vector<SummaryCsvRow> parse_summary_csv(std::istream& in);

/// The default grid: both regimes x {1, 4} modules x all methods, one
/// combined summary.csv plus one text table per combination under out_dir.
void run_default_grid(std::uint64_t master_seed, const std::string& out_dir, unsigned workers);

}  // namespace risim::bench
