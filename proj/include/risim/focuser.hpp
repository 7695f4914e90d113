#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "risim/complex_matrix.hpp"
#include "risim/ris.hpp"
#include "risim/scene.hpp"

namespace risim {

/// Constructive alignment maximizes the per-pair cascade gain; destructive
/// minimizes it (the accept test's inequality is reversed).
enum class FocusMode { Constructive, Destructive };

/// Exact event counts for one search run.
struct OpCounters {
    std::uint64_t gain_evaluations = 0;
    std::uint64_t svd_evaluations = 0;

    void reset() { *this = OpCounters{}; }
};

/// |sum_n amplitude_n * (+-1)_n * h2[n] * h1[n]|^2 for one antenna pair.
double cascade_gain(const std::vector<Complex>& h1_col, const std::vector<Complex>& h2_col,
                    const RisConfig& cfg);

/// One greedy sweep over the elements of a single antenna pair. Starts from
/// the all-zero configuration, visits elements in index order, tentatively
/// flips each bit and keeps the flip unless it worsens the objective (ties
/// commit). gain_trace holds the accepted objective after each visit, with
/// the starting value at index 0 (length N + 1).
struct GreedySweep {
    RisConfig config;
    std::vector<double> gain_trace;
};

GreedySweep greedy_flip_pair(const std::vector<Complex>& h1_col,
                             const std::vector<Complex>& h2_col, FocusMode mode,
                             OpCounters* counters = nullptr);

/// Full per-pair search: greedy sweep for every (tx, rx) pair, effective rank
/// of the composed channel under that pair's final configuration, argmax pair
/// selection (first pair wins ties in tx-major, rx-minor scan order).
/// Indices are 0-based. Per pair this costs N + 1 gain evaluations and one
/// SVD, all counted.
struct FocusResult {
    std::size_t best_tx = 0;
    std::size_t best_rx = 0;
    RisConfig best_config;
    std::vector<std::vector<double>> per_pair_rank;               // [tx][rx]
    double best_effective_rank = 0.0;
    std::vector<std::vector<std::vector<double>>> gain_traces;    // [tx][rx]
};

FocusResult passive_beam_focus(const ChannelSet& ch, FocusMode mode, OpCounters& counters);

/// Brute-force reference over all 2^N bit vectors (N <= 20). Ties pick the
/// bit vector with the smallest value when read as a binary integer, most
/// significant digit first.
struct ExhaustiveOptimum {
    RisConfig config;
    double gain;
};

ExhaustiveOptimum exhaustive_pair_optimum(const std::vector<Complex>& h1_col,
                                          const std::vector<Complex>& h2_col, FocusMode mode);

/// Dominant-term operation count of the search:
/// n_t * n_r * n + n_t * n_r * min(n_t, n_r)^2 * max(n_t, n_r).
std::uint64_t complexity_estimate(std::size_t n_t, std::size_t n_r, std::size_t n);

/// Structured text record: best pair, bit string, per-pair rank grid,
/// counters. One block per run, suitable for harness logs.
std::string format_focus_result(const FocusResult& result, const OpCounters& counters);

}  // namespace risim
