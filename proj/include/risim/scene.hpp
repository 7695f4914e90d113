#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "risim/complex_matrix.hpp"

namespace risim {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

Vec3 operator+(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a, const Vec3& b);
Vec3 operator*(double s, const Vec3& v);
double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& v);
Vec3 normalized(const Vec3& v);

/// Free-space narrowband response between two points:
/// (lambda / (4 pi d)) * exp(-j 2 pi d / lambda). Coincident points are
/// rejected (the model is singular there).
Complex los_gain(const Vec3& a, const Vec3& b, double wavelength);

/// Near-field boundary for a square aperture, computed from the per-side
/// element count: side^2 * lambda / 2.
double rayleigh_distance(std::size_t elements_per_side, double wavelength);

/// 3-D placement of every radiating element in the scene. An empty element
/// list means no reflecting surface is present.
struct SceneGeometry {
    double wavelength = 0.0;
    std::vector<Vec3> tx_positions;
    std::vector<Vec3> rx_positions;
    std::vector<Vec3> ris_elements;         // flattened over modules
    Vec3 ris_plane_normal{0.0, 0.0, 1.0};   // unit vector

    void validate() const;
};

enum class Regime { LowRank, MediumRank };

/// Statistical knobs for one experiment scenario. scatter_power_db may be
/// -inf (diffuse term disabled) and rician_k_db may be +inf (surface-link
/// scatter disabled); NaN and the opposite infinities are rejected.
struct ScenarioSpec {
    Regime regime = Regime::LowRank;
    double direct_dominant_gain = 4.5e-3;
    double scatter_power_db = -20.0;   // diffuse power relative to the dominant direct path
    double rician_k_db = 20.0;         // per-entry LoS-to-scatter ratio on the surface links
    std::uint64_t seed = 1;
    std::uint32_t realizations = 100;

    void validate() const;
    static ScenarioSpec defaults_for(Regime regime, std::uint64_t seed,
                                     std::uint32_t realizations = 100);
};

/// One channel realization. The surface-link matrices are absent when the
/// scene has no reflecting elements.
struct ChannelSet {
    ComplexMatrix h_direct;                  // N_R x N_T
    std::optional<ComplexMatrix> h_tx_ris;   // N x N_T
    std::optional<ComplexMatrix> h_ris_rx;   // N x N_R

    std::size_t tx_count() const { return h_direct.cols(); }
    std::size_t rx_count() const { return h_direct.rows(); }
    std::size_t ris_element_count() const { return h_tx_ris ? h_tx_ris->rows() : 0; }

    void validate() const;
};

/// Draws one realization. Pure function of (geom, spec, realization_index):
/// repeated calls are bit-identical, independent of call order.
ChannelSet synthesize(const SceneGeometry& geom, const ScenarioSpec& spec,
                      std::uint32_t realization_index);

/// Single-bounce image-method response of a flat perfect reflector lying in a
/// plane parallel to the element plane. Entries whose specular point falls
/// outside the sheet extent are zero; retained entries are
/// -los_gain(mirror(tx), rx). Antennas on the sheet plane are rejected.
ComplexMatrix copper_sheet_channel(const SceneGeometry& geom, const Vec3& sheet_center,
                                   std::pair<double, double> sheet_halfwidths);

/// y = h * precoder * x + noise, noise i.i.d. circularly symmetric Gaussian
/// with per-entry variance noise_std^2, deterministic given the seed.
std::vector<Complex> transmit(const ComplexMatrix& h, const ComplexMatrix& precoder,
                              const std::vector<Complex>& x, double noise_std,
                              std::uint64_t seed);

/// Desk-scale default layout: element grid in the z = 0 plane at half-lambda
/// pitch (modules tiled 2x2 when modules == 4), vertical half-lambda antenna
/// arrays in front of it.
struct GeometryParams {
    double wavelength = 0.0573;
    std::size_t modules = 1;            // 1 or 4
    std::size_t elements_per_side = 16; // per module
    double tx_ris_distance = 0.6;
    double rx_ris_distance = 2.0;
    std::size_t tx_antennas = 3;
    std::size_t rx_antennas = 3;
    double tx_offset_angle_deg = 20.0;  // boresight offsets on opposite sides
    double rx_offset_angle_deg = 25.0;

    void validate() const;
};

SceneGeometry make_scene_geometry(const GeometryParams& params);

/// Sheet extent covering 9x the area of one module (3 module-widths per
/// side), matching the reference-reflector setup.
std::pair<double, double> copper_sheet_halfwidths(const GeometryParams& params);

}  // namespace risim
