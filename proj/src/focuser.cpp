#include "risim/focuser.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "risim/errors.hpp"
#include "risim/metrics.hpp"
#include "risim/svd.hpp"

namespace risim {

namespace {

std::vector<Complex> element_products(const std::vector<Complex>& h1_col,
                                      const std::vector<Complex>& h2_col) {
    if (h1_col.size() != h2_col.size()) {
        throw ValidationError("antenna-pair channel vectors must have equal length");
    }
    std::vector<Complex> products(h1_col.size());
    for (std::size_t i = 0; i < h1_col.size(); ++i) {
        products[i] = h2_col[i] * h1_col[i];
    }
    return products;
}

}  // namespace

double cascade_gain(const std::vector<Complex>& h1_col, const std::vector<Complex>& h2_col,
                    const RisConfig& cfg) {
    cfg.validate();
    if (cfg.size() != h1_col.size()) {
        throw ValidationError("ris config length does not match the channel vectors");
    }
    const std::vector<Complex> products = element_products(h1_col, h2_col);
    Complex sum{0.0, 0.0};
    for (std::size_t i = 0; i < products.size(); ++i) {
        const double reflect = cfg.phase_bits[i] ? -cfg.amplitudes[i] : cfg.amplitudes[i];
        sum += reflect * products[i];
    }
    return std::norm(sum);
}

GreedySweep greedy_flip_pair(const std::vector<Complex>& h1_col,
                             const std::vector<Complex>& h2_col, FocusMode mode,
                             OpCounters* counters) {
    const std::vector<Complex> products = element_products(h1_col, h2_col);
    const std::size_t n = products.size();
    if (n == 0) {
        throw ValidationError("greedy sweep needs at least one element");
    }

    GreedySweep sweep{RisConfig::uniform(n, 0), {}};
    sweep.gain_trace.reserve(n + 1);

    Complex running{0.0, 0.0};
    for (const Complex& p : products) {
        running += p;
    }
    double accepted = std::norm(running);
    if (counters) {
        ++counters->gain_evaluations;
    }
    sweep.gain_trace.push_back(accepted);

    const bool constructive = (mode == FocusMode::Constructive);
    for (std::size_t i = 0; i < n; ++i) {
        // Tentative flip of an untouched element: its term enters with +1 and
        // leaves with -1, so the running sum moves by -2 * products[i].
        const Complex candidate = running - 2.0 * products[i];
        const double gain = std::norm(candidate);
        if (counters) {
            ++counters->gain_evaluations;
        }
        const bool revert = constructive ? (gain < accepted) : (gain > accepted);
        if (!revert) {
            sweep.config.phase_bits[i] = 1;
            running = candidate;
            accepted = gain;
        }
        sweep.gain_trace.push_back(accepted);
    }
    return sweep;
}

FocusResult passive_beam_focus(const ChannelSet& ch, FocusMode mode, OpCounters& counters) {
    ch.validate();
    const std::size_t n = ch.ris_element_count();
    if (n == 0) {
        throw ValidationError("passive beam focusing requires at least one surface element");
    }
    const std::size_t n_t = ch.tx_count();
    const std::size_t n_r = ch.rx_count();

    std::vector<std::vector<Complex>> tx_cols(n_t);
    for (std::size_t t = 0; t < n_t; ++t) {
        tx_cols[t] = ch.h_tx_ris->column(t);
    }
    std::vector<std::vector<Complex>> rx_cols(n_r);
    for (std::size_t r = 0; r < n_r; ++r) {
        rx_cols[r] = ch.h_ris_rx->column(r);
    }

    FocusResult result;
    result.per_pair_rank.assign(n_t, std::vector<double>(n_r, 0.0));
    result.gain_traces.assign(n_t, std::vector<std::vector<double>>(n_r));
    double best = -std::numeric_limits<double>::infinity();

    for (std::size_t t = 0; t < n_t; ++t) {
        for (std::size_t r = 0; r < n_r; ++r) {
            GreedySweep sweep = greedy_flip_pair(tx_cols[t], rx_cols[r], mode, &counters);
            const ComplexMatrix h = compose_channel(ch, sweep.config);
            const SvdResult decomposition = svd(h);
            ++counters.svd_evaluations;
            const double rank = effective_rank(decomposition.singular_values);

            result.per_pair_rank[t][r] = rank;
            result.gain_traces[t][r] = std::move(sweep.gain_trace);
            if (rank > best) {
                best = rank;
                result.best_tx = t;
                result.best_rx = r;
                result.best_config = std::move(sweep.config);
            }
        }
    }
    result.best_effective_rank = best;
    return result;
}

ExhaustiveOptimum exhaustive_pair_optimum(const std::vector<Complex>& h1_col,
                                          const std::vector<Complex>& h2_col, FocusMode mode) {
    const std::vector<Complex> products = element_products(h1_col, h2_col);
    const std::size_t n = products.size();
    if (n == 0) {
        throw ValidationError("exhaustive search needs at least one element");
    }
    if (n > 20) {
        throw ValidationError("exhaustive search is limited to 20 elements");
    }

    const bool constructive = (mode == FocusMode::Constructive);
    std::uint64_t best_code = 0;
    double best_gain = constructive ? -1.0 : std::numeric_limits<double>::infinity();

    // Ascending code order with a strict comparison realizes the tie rule:
    // the code reads the bit vector most-significant-digit first.
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t code = 0; code < count; ++code) {
        Complex sum{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            const bool flipped = (code >> (n - 1 - i)) & 1u;
            sum += flipped ? -products[i] : products[i];
        }
        const double gain = std::norm(sum);
        if (constructive ? (gain > best_gain) : (gain < best_gain)) {
            best_gain = gain;
            best_code = code;
        }
    }

    RisConfig cfg = RisConfig::uniform(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        cfg.phase_bits[i] = (best_code >> (n - 1 - i)) & 1u;
    }
    return ExhaustiveOptimum{std::move(cfg), best_gain};
}

std::uint64_t complexity_estimate(std::size_t n_t, std::size_t n_r, std::size_t n) {
    if (n_t < 1 || n_r < 1 || n < 1) {
        throw ValidationError("complexity estimate needs positive dimensions");
    }
    const std::uint64_t pairs = static_cast<std::uint64_t>(n_t) * n_r;
    const std::uint64_t lo = std::min(n_t, n_r);
    const std::uint64_t hi = std::max(n_t, n_r);
    return pairs * n + pairs * lo * lo * hi;
}

std::string format_focus_result(const FocusResult& result, const OpCounters& counters) {
    char line[160];
    std::string out;
    std::snprintf(line, sizeof(line), "focus best_tx=%zu best_rx=%zu best_Re=%.17g\n",
                  result.best_tx, result.best_rx, result.best_effective_rank);
    out += line;
    out += "bits=" + to_bit_string(result.best_config) + "\n";
    for (std::size_t t = 0; t < result.per_pair_rank.size(); ++t) {
        for (std::size_t r = 0; r < result.per_pair_rank[t].size(); ++r) {
            std::snprintf(line, sizeof(line), "rank tx=%zu rx=%zu Re=%.17g\n", t, r,
                          result.per_pair_rank[t][r]);
            out += line;
        }
    }
    std::snprintf(line, sizeof(line), "counters gain_evaluations=%llu svd_evaluations=%llu\n",
                  static_cast<unsigned long long>(counters.gain_evaluations),
                  static_cast<unsigned long long>(counters.svd_evaluations));
    out += line;
    return out;
}

}  // namespace risim
