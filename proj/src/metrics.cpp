#include "risim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "risim/errors.hpp"
#include "risim/svd.hpp"

namespace risim {

namespace {

constexpr double kZeroThreshold = 1e-12;  // relative to the largest singular value

// Sorted copy with sub-threshold values snapped to exact zero. Sorting makes
// the summation order, and therefore the result, permutation-invariant.
std::vector<double> cleaned_spectrum(const std::vector<double>& singular_values) {
    if (singular_values.empty()) {
        throw ValidationError("effective rank needs at least one singular value");
    }
    double q_max = 0.0;
    for (double q : singular_values) {
        if (!std::isfinite(q) || q < 0.0) {
            throw ValidationError("singular values must be finite and non-negative");
        }
        q_max = std::max(q_max, q);
    }
    if (q_max == 0.0) {
        throw ValidationError("effective rank of an all-zero spectrum is undefined");
    }
    std::vector<double> cleaned = singular_values;
    const double floor = kZeroThreshold * q_max;
    for (double& q : cleaned) {
        if (q < floor) {
            q = 0.0;
        }
    }
    std::sort(cleaned.begin(), cleaned.end(), std::greater<>());
    return cleaned;
}

}  // namespace

double effective_rank(const std::vector<double>& singular_values) {
    const std::vector<double> q = cleaned_spectrum(singular_values);
    double total = 0.0;
    for (double v : q) {
        total += v;
    }
    double entropy = 0.0;
    for (double v : q) {
        if (v > 0.0) {
            const double p = v / total;
            entropy -= p * std::log(p);
        }
    }
    return std::exp(entropy);
}

double difference_pct(double effective_rank, double baseline) {
    if (!(baseline > 0.0) || !std::isfinite(baseline)) {
        throw ValidationError("baseline effective rank must be positive and finite");
    }
    return 100.0 * (effective_rank - baseline) / baseline;
}

RankReport rank_report(const ComplexMatrix& h, std::optional<double> baseline) {
    if (frobenius_norm(h) == 0.0) {
        throw ValidationError("rank report of an all-zero channel is undefined");
    }
    const SvdResult decomposition = svd(h);

    RankReport report;
    report.singular_values = decomposition.singular_values;
    report.effective_rank = effective_rank(report.singular_values);

    const std::vector<double> q = cleaned_spectrum(report.singular_values);
    const double q_min_positive = *std::find_if(q.rbegin(), q.rend(),
                                                [](double v) { return v > 0.0; });
    report.condition_number = (q.back() == 0.0)
                                  ? std::numeric_limits<double>::infinity()
                                  : q.front() / q_min_positive;

    if (baseline) {
        report.baseline_effective_rank = *baseline;
        report.difference_pct = difference_pct(report.effective_rank, *baseline);
    }
    return report;
}

double mean_effective_rank(const std::vector<RankReport>& reports) {
    if (reports.empty()) {
        throw ValidationError("mean effective rank of an empty report list is undefined");
    }
    double sum = 0.0;
    for (const RankReport& r : reports) {
        sum += r.effective_rank;
    }
    return sum / static_cast<double>(reports.size());
}

}  // namespace risim
