#pragma once

#include <optional>
#include <vector>

#include "risim/complex_matrix.hpp"

namespace risim {

/// Rank diagnostics of one channel matrix. difference_pct is present exactly
/// when a baseline was supplied and equals 100 * (R_e - baseline) / baseline.
struct RankReport {
    std::vector<double> singular_values;   // descending
    double effective_rank = 1.0;
    double condition_number = 1.0;         // +inf when the positive spectrum is rank-deficient
    std::optional<double> baseline_effective_rank;
    std::optional<double> difference_pct;
};

/// exp of the Shannon entropy of the amplitude-normalized singular values.
/// Values below 1e-12 of the largest are treated as exact zeros first; the
/// input may arrive in any order. Rejects an all-zero spectrum.
double effective_rank(const std::vector<double>& singular_values);

/// 100 * (effective_rank - baseline) / baseline.
double difference_pct(double effective_rank, double baseline);

RankReport rank_report(const ComplexMatrix& h, std::optional<double> baseline = std::nullopt);

double mean_effective_rank(const std::vector<RankReport>& reports);

}  // namespace risim
