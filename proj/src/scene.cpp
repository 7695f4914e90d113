#include "risim/scene.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "risim/errors.hpp"
#include "risim/rng.hpp"

namespace risim {

namespace {

constexpr double kPi = std::numbers::pi;

// Stream tags keying the independent random substreams of one realization.
enum class LinkTag : std::uint64_t { Direct = 1, TxRis = 2, RisRx = 3, Noise = 4 };

std::uint64_t tag(LinkTag t) { return static_cast<std::uint64_t>(t); }

bool finite(const Vec3& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

Vec3 centroid(const std::vector<Vec3>& points) {
    Vec3 sum{};
    for (const Vec3& p : points) {
        sum = sum + p;
    }
    return (1.0 / static_cast<double>(points.size())) * sum;
}

// Fixed dominant bounce point for the direct channel: displaced from the
// Tx-Rx midpoint both laterally and along the surface normal so the rank-1
// steering term is non-degenerate. Deterministic in the geometry.
Vec3 dominant_bounce_point(const SceneGeometry& geom) {
    const Vec3 tx_c = centroid(geom.tx_positions);
    const Vec3 rx_c = centroid(geom.rx_positions);
    const Vec3 mid = 0.5 * (tx_c + rx_c);
    const Vec3 span_vec = rx_c - tx_c;
    const double span = std::max(norm(span_vec), geom.wavelength);

    Vec3 along = span_vec - dot(span_vec, geom.ris_plane_normal) * geom.ris_plane_normal;
    if (norm(along) < 1e-9 * span) {
        const Vec3 seed{1.0, 0.0, 0.0};
        along = seed - dot(seed, geom.ris_plane_normal) * geom.ris_plane_normal;
        if (norm(along) < 1e-9) {
            along = Vec3{0.0, 1.0, 0.0} -
                    dot(Vec3{0.0, 1.0, 0.0}, geom.ris_plane_normal) * geom.ris_plane_normal;
        }
    }
    along = normalized(along);
    const Vec3 up = cross(geom.ris_plane_normal, along);
    return mid + (0.25 * span) * up + (0.35 * span) * geom.ris_plane_normal;
}

// In-plane orthonormal basis for a plane with the given unit normal.
std::pair<Vec3, Vec3> plane_basis(const Vec3& n) {
    const Vec3 seed = std::abs(n.x) <= 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
    const Vec3 e1 = normalized(seed - dot(seed, n) * n);
    return {e1, cross(n, e1)};
}

double db_to_amplitude(double db) {
    // -inf maps to exactly 0, +inf to +inf; callers reject the bad direction.
    return std::pow(10.0, db / 20.0);
}

}  // namespace

Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    if (n == 0.0) {
        throw ValidationError("cannot normalize the zero vector");
    }
    return (1.0 / n) * v;
}

Complex los_gain(const Vec3& a, const Vec3& b, double wavelength) {
    if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
        throw ValidationError("wavelength must be positive and finite");
    }
    const double d = norm(a - b);
    if (d == 0.0) {
        throw ValidationError("coincident points have no free-space response");
    }
    return std::polar(wavelength / (4.0 * kPi * d), -2.0 * kPi * d / wavelength);
}

double rayleigh_distance(std::size_t elements_per_side, double wavelength) {
    if (elements_per_side == 0) {
        throw ValidationError("elements_per_side must be at least 1");
    }
    if (!(wavelength > 0.0)) {
        throw ValidationError("wavelength must be positive");
    }
    const double side = static_cast<double>(elements_per_side);
    return side * side * wavelength / 2.0;
}

void SceneGeometry::validate() const {
    if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
        throw ValidationError("geometry: wavelength must be positive and finite");
    }
    if (tx_positions.empty() || rx_positions.empty()) {
        throw ValidationError("geometry: at least one tx and one rx antenna required");
    }
    for (const auto* list : {&tx_positions, &rx_positions, &ris_elements}) {
        for (const Vec3& p : *list) {
            if (!finite(p)) {
                throw ValidationError("geometry: positions must be finite");
            }
        }
    }
    if (!finite(ris_plane_normal) || std::abs(norm(ris_plane_normal) - 1.0) > 1e-12) {
        throw ValidationError("geometry: ris_plane_normal must be a unit vector");
    }
}

void ScenarioSpec::validate() const {
    if (realizations < 1) {
        throw ValidationError("scenario: realizations must be at least 1");
    }
    if (!std::isfinite(direct_dominant_gain) || !(direct_dominant_gain > 0.0)) {
        throw ValidationError("scenario: direct_dominant_gain must be positive and finite");
    }
    if (std::isnan(scatter_power_db) || scatter_power_db == std::numeric_limits<double>::infinity()) {
        throw ValidationError("scenario: scatter_power_db must be finite or -inf");
    }
    if (std::isnan(rician_k_db) || rician_k_db == -std::numeric_limits<double>::infinity()) {
        throw ValidationError("scenario: rician_k_db must be finite or +inf");
    }
}

ScenarioSpec ScenarioSpec::defaults_for(Regime regime, std::uint64_t seed,
                                        std::uint32_t realizations) {
    ScenarioSpec spec;
    spec.regime = regime;
    spec.seed = seed;
    spec.realizations = realizations;
    if (regime == Regime::LowRank) {
        spec.scatter_power_db = -20.0;
        spec.rician_k_db = 20.0;
    } else {
        spec.scatter_power_db = -6.0;
        spec.rician_k_db = 6.0;
    }
    return spec;
}

void ChannelSet::validate() const {
    if (h_tx_ris.has_value() != h_ris_rx.has_value()) {
        throw ValidationError("channel set: surface links must both be present or both absent");
    }
    if (h_tx_ris) {
        if (h_tx_ris->cols() != h_direct.cols()) {
            throw ValidationError("channel set: tx-surface link has wrong antenna count");
        }
        if (h_ris_rx->cols() != h_direct.rows()) {
            throw ValidationError("channel set: surface-rx link has wrong antenna count");
        }
        if (h_tx_ris->rows() != h_ris_rx->rows()) {
            throw ValidationError("channel set: surface links disagree on element count");
        }
    }
}

ChannelSet synthesize(const SceneGeometry& geom, const ScenarioSpec& spec,
                      std::uint32_t realization_index) {
    geom.validate();
    spec.validate();
    if (realization_index >= spec.realizations) {
        throw ValidationError("realization_index exceeds the configured realization count");
    }

    const std::size_t n_t = geom.tx_positions.size();
    const std::size_t n_r = geom.rx_positions.size();
    const std::size_t n = geom.ris_elements.size();

    // Direct channel: rank-1 bounce via a fixed dominant point plus i.i.d.
    // diffuse scatter relative to it.
    const Vec3 p0 = dominant_bounce_point(geom);
    const double g = spec.direct_dominant_gain;
    const double diffuse_std = g * db_to_amplitude(spec.scatter_power_db);
    const CounterRng direct_rng(spec.seed, realization_index, tag(LinkTag::Direct));
    ComplexMatrix h_direct(n_r, n_t);
    for (std::size_t r = 0; r < n_r; ++r) {
        const double d_rx = norm(geom.rx_positions[r] - p0);
        for (std::size_t t = 0; t < n_t; ++t) {
            const double d_tx = norm(geom.tx_positions[t] - p0);
            const Complex dominant = std::polar(g, -2.0 * kPi * (d_tx + d_rx) / geom.wavelength);
            const Complex diffuse =
                diffuse_std * direct_rng.standard_complex_gaussian(r * n_t + t);
            h_direct(r, t) = dominant + diffuse;
        }
    }

    ChannelSet set{std::move(h_direct), std::nullopt, std::nullopt};
    if (n > 0) {
        // Surface links: per-entry Rician mix of the spherical-wave response
        // and scatter at 1/K of its power.
        const double inv_sqrt_k = db_to_amplitude(-spec.rician_k_db);
        const CounterRng tx_rng(spec.seed, realization_index, tag(LinkTag::TxRis));
        const CounterRng rx_rng(spec.seed, realization_index, tag(LinkTag::RisRx));

        ComplexMatrix h1(n, n_t);
        for (std::size_t e = 0; e < n; ++e) {
            for (std::size_t t = 0; t < n_t; ++t) {
                const Complex los = los_gain(geom.ris_elements[e], geom.tx_positions[t],
                                             geom.wavelength);
                h1(e, t) = los + std::abs(los) * inv_sqrt_k *
                                     tx_rng.standard_complex_gaussian(e * n_t + t);
            }
        }
        ComplexMatrix h2(n, n_r);
        for (std::size_t e = 0; e < n; ++e) {
            for (std::size_t r = 0; r < n_r; ++r) {
                const Complex los = los_gain(geom.ris_elements[e], geom.rx_positions[r],
                                             geom.wavelength);
                h2(e, r) = los + std::abs(los) * inv_sqrt_k *
                                     rx_rng.standard_complex_gaussian(e * n_r + r);
            }
        }
        set.h_tx_ris = std::move(h1);
        set.h_ris_rx = std::move(h2);
    }
    set.validate();
    return set;
}

ComplexMatrix copper_sheet_channel(const SceneGeometry& geom, const Vec3& sheet_center,
                                   std::pair<double, double> sheet_halfwidths) {
    geom.validate();
    if (!finite(sheet_center)) {
        throw ValidationError("sheet center must be finite");
    }
    if (!(sheet_halfwidths.first >= 0.0) || !(sheet_halfwidths.second >= 0.0)) {
        throw ValidationError("sheet halfwidths must be non-negative");
    }

    const Vec3 n = geom.ris_plane_normal;
    const auto [e1, e2] = plane_basis(n);
    const std::size_t n_t = geom.tx_positions.size();
    const std::size_t n_r = geom.rx_positions.size();

    std::vector<double> tx_height(n_t);
    for (std::size_t t = 0; t < n_t; ++t) {
        tx_height[t] = dot(geom.tx_positions[t] - sheet_center, n);
        if (tx_height[t] == 0.0) {
            throw ValidationError("a tx antenna lies on the sheet plane");
        }
    }
    std::vector<double> rx_height(n_r);
    for (std::size_t r = 0; r < n_r; ++r) {
        rx_height[r] = dot(geom.rx_positions[r] - sheet_center, n);
        if (rx_height[r] == 0.0) {
            throw ValidationError("an rx antenna lies on the sheet plane");
        }
    }

    ComplexMatrix out(n_r, n_t);
    for (std::size_t r = 0; r < n_r; ++r) {
        for (std::size_t t = 0; t < n_t; ++t) {
            if (tx_height[t] * rx_height[r] < 0.0) {
                continue;  // opposite sides: no specular bounce
            }
            const Vec3 image = geom.tx_positions[t] - (2.0 * tx_height[t]) * n;
            const double split = tx_height[t] / (tx_height[t] + rx_height[r]);
            const Vec3 specular = image + split * (geom.rx_positions[r] - image);
            const double u = dot(specular - sheet_center, e1);
            const double v = dot(specular - sheet_center, e2);
            if (std::abs(u) <= sheet_halfwidths.first && std::abs(v) <= sheet_halfwidths.second) {
                out(r, t) = -los_gain(image, geom.rx_positions[r], geom.wavelength);
            }
        }
    }
    return out;
}

std::vector<Complex> transmit(const ComplexMatrix& h, const ComplexMatrix& precoder,
                              const std::vector<Complex>& x, double noise_std,
                              std::uint64_t seed) {
    if (precoder.rows() != h.cols() || precoder.cols() != h.cols()) {
        throw ValidationError("transmit: precoder must be N_T x N_T");
    }
    if (x.size() != h.cols()) {
        throw ValidationError("transmit: signal vector length must equal N_T");
    }
    if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) {
        throw ValidationError("transmit: noise_std must be non-negative and finite");
    }

    std::vector<Complex> precoded(precoder.rows(), Complex{0.0, 0.0});
    for (std::size_t r = 0; r < precoder.rows(); ++r) {
        for (std::size_t c = 0; c < precoder.cols(); ++c) {
            precoded[r] += precoder(r, c) * x[c];
        }
    }
    std::vector<Complex> y(h.rows(), Complex{0.0, 0.0});
    for (std::size_t r = 0; r < h.rows(); ++r) {
        for (std::size_t c = 0; c < h.cols(); ++c) {
            y[r] += h(r, c) * precoded[c];
        }
    }
    if (noise_std > 0.0) {
        const CounterRng rng(seed, 0, tag(LinkTag::Noise));
        for (std::size_t r = 0; r < y.size(); ++r) {
            y[r] += noise_std * rng.standard_complex_gaussian(r);
        }
    }
    return y;
}

void GeometryParams::validate() const {
    if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
        throw ValidationError("geometry: wavelength must be positive and finite");
    }
    if (modules != 1 && modules != 4) {
        throw ValidationError("geometry: modules must be 1 or 4");
    }
    if (elements_per_side < 1) {
        throw ValidationError("geometry: elements_per_side must be at least 1");
    }
    if (!(tx_ris_distance > 0.0) || !(rx_ris_distance > 0.0)) {
        throw ValidationError("geometry: antenna distances must be positive");
    }
    if (tx_antennas < 1 || rx_antennas < 1) {
        throw ValidationError("geometry: antenna counts must be at least 1");
    }
    if (!std::isfinite(tx_offset_angle_deg) || !std::isfinite(rx_offset_angle_deg)) {
        throw ValidationError("geometry: offset angles must be finite");
    }
}

SceneGeometry make_scene_geometry(const GeometryParams& params) {
    params.validate();

    SceneGeometry geom;
    geom.wavelength = params.wavelength;
    geom.ris_plane_normal = {0.0, 0.0, 1.0};

    const double pitch = params.wavelength / 2.0;
    const std::size_t side = params.elements_per_side * (params.modules == 4 ? 2 : 1);
    geom.ris_elements.reserve(side * side);
    const double offset = (static_cast<double>(side) - 1.0) / 2.0;
    for (std::size_t j = 0; j < side; ++j) {
        for (std::size_t i = 0; i < side; ++i) {
            geom.ris_elements.push_back(
                {(static_cast<double>(i) - offset) * pitch,
                 (static_cast<double>(j) - offset) * pitch, 0.0});
        }
    }

    const auto vertical_array = [&](const Vec3& center, std::size_t count) {
        std::vector<Vec3> antennas;
        antennas.reserve(count);
        const double mid = (static_cast<double>(count) - 1.0) / 2.0;
        for (std::size_t k = 0; k < count; ++k) {
            antennas.push_back(center + Vec3{0.0, (static_cast<double>(k) - mid) * pitch, 0.0});
        }
        return antennas;
    };

    const double at = params.tx_offset_angle_deg * kPi / 180.0;
    const double ar = params.rx_offset_angle_deg * kPi / 180.0;
    const Vec3 tx_center{-params.tx_ris_distance * std::sin(at), 0.0,
                         params.tx_ris_distance * std::cos(at)};
    const Vec3 rx_center{params.rx_ris_distance * std::sin(ar), 0.0,
                         params.rx_ris_distance * std::cos(ar)};
    geom.tx_positions = vertical_array(tx_center, params.tx_antennas);
    geom.rx_positions = vertical_array(rx_center, params.rx_antennas);

    geom.validate();
    return geom;
}

std::pair<double, double> copper_sheet_halfwidths(const GeometryParams& params) {
    params.validate();
    const double module_width =
        static_cast<double>(params.elements_per_side) * params.wavelength / 2.0;
    return {1.5 * module_width, 1.5 * module_width};
}

}  // namespace risim
