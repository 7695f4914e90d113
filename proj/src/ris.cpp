#include "risim/ris.hpp"

#include <cmath>

#include "risim/errors.hpp"

namespace risim {

RisConfig RisConfig::uniform(std::size_t n, std::uint8_t bit) {
    return RisConfig{std::vector<std::uint8_t>(n, bit), std::vector<double>(n, 1.0)};
}

void RisConfig::validate() const {
    if (phase_bits.size() != amplitudes.size()) {
        throw ValidationError("ris config: bit and amplitude counts differ");
    }
    for (std::uint8_t b : phase_bits) {
        if (b > 1) {
            throw ValidationError("ris config: phase bits must be 0 or 1");
        }
    }
    for (double a : amplitudes) {
        if (!(a >= 0.0 && a <= 1.0)) {
            throw ValidationError("ris config: amplitudes must lie in [0, 1]");
        }
    }
}

RisConfig complement(const RisConfig& cfg) {
    RisConfig out = cfg;
    for (std::uint8_t& b : out.phase_bits) {
        b = b ? 0 : 1;
    }
    return out;
}

ComplexMatrix phase_matrix(const RisConfig& cfg) {
    cfg.validate();
    const std::size_t n = cfg.size();
    if (n == 0) {
        throw ValidationError("ris config: phase matrix needs at least one element");
    }
    ComplexMatrix psi(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        psi(i, i) = cfg.phase_bits[i] ? -cfg.amplitudes[i] : cfg.amplitudes[i];
    }
    return psi;
}

ComplexMatrix compose_channel(const ChannelSet& ch) {
    ch.validate();
    return ch.h_direct;
}

ComplexMatrix compose_channel(const ChannelSet& ch, const RisConfig& cfg) {
    ch.validate();
    cfg.validate();
    if (cfg.size() != ch.ris_element_count()) {
        throw ValidationError("ris config length does not match the channel's element count");
    }
    if (cfg.size() == 0) {
        return ch.h_direct;
    }

    const ComplexMatrix& h1 = *ch.h_tx_ris;
    const ComplexMatrix& h2 = *ch.h_ris_rx;
    const std::size_t n = cfg.size();
    const std::size_t n_t = ch.tx_count();
    const std::size_t n_r = ch.rx_count();

    ComplexMatrix out = ch.h_direct;
    for (std::size_t e = 0; e < n; ++e) {
        const double reflect = cfg.phase_bits[e] ? -cfg.amplitudes[e] : cfg.amplitudes[e];
        if (reflect == 0.0) {
            continue;
        }
        for (std::size_t r = 0; r < n_r; ++r) {
            const Complex w = reflect * h2(e, r);
            for (std::size_t t = 0; t < n_t; ++t) {
                out(r, t) += w * h1(e, t);
            }
        }
    }
    return out;
}

std::pair<RisConfig, RisConfig> fixed_phase_configs(std::size_t n) {
    if (n < 1) {
        throw ValidationError("fixed phase configs need at least one element");
    }
    return {RisConfig::uniform(n, 0), RisConfig::uniform(n, 1)};
}

std::string to_bit_string(const RisConfig& cfg) {
    std::string out;
    out.reserve(cfg.phase_bits.size());
    for (std::uint8_t b : cfg.phase_bits) {
        out.push_back(b ? '1' : '0');
    }
    return out;
}

RisConfig ris_config_from_bit_string(const std::string& bits) {
    RisConfig cfg;
    cfg.phase_bits.reserve(bits.size());
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw ParseError("ris bit string may contain only '0' and '1'");
        }
        cfg.phase_bits.push_back(c == '1' ? 1 : 0);
    }
    cfg.amplitudes.assign(bits.size(), 1.0);
    return cfg;
}

}  // namespace risim
