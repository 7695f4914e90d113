#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "risim/complex_matrix.hpp"
#include "risim/scene.hpp"

namespace risim {

/// Per-element 1-bit reflection state: bit 0 applies phase 0, bit 1 applies
/// phase pi. Amplitudes are reflection losses in [0, 1] (1 = lossless).
struct RisConfig {
    std::vector<std::uint8_t> phase_bits;
    std::vector<double> amplitudes;

    static RisConfig uniform(std::size_t n, std::uint8_t bit = 0);

    std::size_t size() const { return phase_bits.size(); }
    void validate() const;
};

/// Same amplitudes, every phase bit flipped.
RisConfig complement(const RisConfig& cfg);

/// Diagonal N x N reflection matrix with entries amplitude * (+1 or -1);
/// off-diagonal entries are exactly zero.
ComplexMatrix phase_matrix(const RisConfig& cfg);

/// End-to-end channel without a surface contribution: the direct matrix.
ComplexMatrix compose_channel(const ChannelSet& ch);

/// End-to-end channel h_ris_rx^T * Psi * h_tx_ris + h_direct (plain
/// transpose, no conjugation).
ComplexMatrix compose_channel(const ChannelSet& ch, const RisConfig& cfg);

std::pair<RisConfig, RisConfig> fixed_phase_configs(std::size_t n);

/// '0'/'1' text line, element-index order. The parse direction assumes unit
/// amplitudes.
std::string to_bit_string(const RisConfig& cfg);
RisConfig ris_config_from_bit_string(const std::string& bits);

}  // namespace risim
