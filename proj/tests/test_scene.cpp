#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "risim/errors.hpp"
#include "risim/metrics.hpp"
#include "risim/ris.hpp"
#include "risim/scene.hpp"

using namespace risim;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ScenarioSpec scatter_free_spec() {
    ScenarioSpec spec = ScenarioSpec::defaults_for(Regime::LowRank, 42, 3);
    spec.scatter_power_db = -kInf;
    spec.rician_k_db = kInf;
    return spec;
}

GeometryParams small_geometry() {
    GeometryParams params;
    params.elements_per_side = 4;  // keep unit tests quick
    return params;
}

}  // namespace

TEST_CASE("los gain at reference separations") {
    const double lambda = 0.0573;
    const Vec3 origin{0.0, 0.0, 0.0};

    const Complex at_lambda = los_gain(origin, Vec3{lambda, 0.0, 0.0}, lambda);
    CHECK(std::abs(at_lambda) == doctest::Approx(1.0 / (4.0 * std::numbers::pi)));
    CHECK(std::abs(std::arg(at_lambda)) <= 1e-9);  // -2*pi wraps to 0

    const Complex at_half = los_gain(origin, Vec3{0.0, lambda / 2.0, 0.0}, lambda);
    CHECK(std::abs(std::abs(std::arg(at_half)) - std::numbers::pi) <= 1e-9);

    const Complex at_two_m = los_gain(origin, Vec3{0.0, 0.0, 2.0}, lambda);
    CHECK(std::abs(at_two_m) == doctest::Approx(lambda / (8.0 * std::numbers::pi)));
    const double wrapped = -2.0 * std::numbers::pi * std::fmod(2.0 / lambda, 1.0);
    const double expected =
        wrapped <= -std::numbers::pi ? wrapped + 2.0 * std::numbers::pi : wrapped;
    CHECK(std::abs(std::arg(at_two_m) - expected) <= 1e-9);
}

TEST_CASE("los gain is reciprocal and decays with distance") {
    const Vec3 a{0.1, -0.4, 1.2};
    const Vec3 b{-0.7, 0.9, 0.3};
    CHECK(los_gain(a, b, 0.0573) == los_gain(b, a, 0.0573));

    double previous = std::abs(los_gain(Vec3{}, Vec3{0.0, 0.0, 0.5}, 0.0573));
    for (double d = 0.6; d < 3.0; d += 0.1) {
        const double current = std::abs(los_gain(Vec3{}, Vec3{0.0, 0.0, d}, 0.0573));
        CHECK(current < previous);
        previous = current;
    }
}

TEST_CASE("los gain rejects coincident points and bad wavelengths") {
    CHECK_THROWS_AS(los_gain(Vec3{1.0, 2.0, 3.0}, Vec3{1.0, 2.0, 3.0}, 0.05), ValidationError);
    CHECK_THROWS_AS(los_gain(Vec3{}, Vec3{1.0, 0.0, 0.0}, 0.0), ValidationError);
    CHECK_THROWS_AS(los_gain(Vec3{}, Vec3{1.0, 0.0, 0.0}, -1.0), ValidationError);
}

TEST_CASE("rayleigh distance per-side formula") {
    CHECK(rayleigh_distance(1, 2.0) == 1.0);
    CHECK(rayleigh_distance(16, 0.0573) == doctest::Approx(7.3344).epsilon(1e-12));
    CHECK(rayleigh_distance(32, 0.0573) == doctest::Approx(29.3376).epsilon(1e-12));
    CHECK_THROWS_AS(rayleigh_distance(0, 1.0), ValidationError);
}

TEST_CASE("default geometry construction") {
    GeometryParams params;
    const SceneGeometry geom = make_scene_geometry(params);
    CHECK(geom.ris_elements.size() == 256);
    CHECK(geom.tx_positions.size() == 3);
    CHECK(geom.rx_positions.size() == 3);

    // Half-wavelength vertical antenna spacing.
    const double spacing = norm(geom.tx_positions[1] - geom.tx_positions[0]);
    CHECK(spacing == doctest::Approx(params.wavelength / 2.0).epsilon(1e-12));

    // Array centers sit at the configured standoff distances.
    Vec3 tx_center{};
    for (const Vec3& p : geom.tx_positions) {
        tx_center = tx_center + p;
    }
    tx_center = (1.0 / 3.0) * tx_center;
    CHECK(norm(tx_center) == doctest::Approx(params.tx_ris_distance).epsilon(1e-12));

    // Both terminals are deep inside the near field of the full aperture.
    const double boundary = rayleigh_distance(16, params.wavelength);
    CHECK(params.tx_ris_distance < boundary);
    CHECK(params.rx_ris_distance < boundary);

    GeometryParams four = params;
    four.modules = 4;
    CHECK(make_scene_geometry(four).ris_elements.size() == 1024);

    GeometryParams bad = params;
    bad.modules = 2;
    CHECK_THROWS_AS(make_scene_geometry(bad), ValidationError);
}

TEST_CASE("geometry validation") {
    SceneGeometry geom = make_scene_geometry(small_geometry());
    geom.ris_plane_normal = {0.0, 0.0, 1.0 + 1e-6};
    CHECK_THROWS_AS(geom.validate(), ValidationError);
    geom.ris_plane_normal = {0.0, 0.0, 1.0};
    geom.wavelength = 0.0;
    CHECK_THROWS_AS(geom.validate(), ValidationError);
}

TEST_CASE("scenario validation permits only the disabling infinities") {
    ScenarioSpec spec = ScenarioSpec::defaults_for(Regime::LowRank, 1);
    spec.scatter_power_db = -kInf;
    spec.rician_k_db = kInf;
    CHECK_NOTHROW(spec.validate());
    spec.scatter_power_db = kInf;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec = ScenarioSpec::defaults_for(Regime::LowRank, 1);
    spec.rician_k_db = -kInf;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec = ScenarioSpec::defaults_for(Regime::LowRank, 1);
    spec.realizations = 0;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
}

TEST_CASE("scatter-free synthesis is exactly the deterministic model") {
    const SceneGeometry geom = make_scene_geometry(small_geometry());
    const ScenarioSpec spec = scatter_free_spec();
    const ChannelSet ch = synthesize(geom, spec, 0);

    // Direct channel is exactly rank 1.
    CHECK(std::abs(rank_report(ch.h_direct).effective_rank - 1.0) <= 1e-9);

    // Surface links coincide with the spherical-wave response per entry.
    REQUIRE(ch.h_tx_ris.has_value());
    for (std::size_t e = 0; e < geom.ris_elements.size(); ++e) {
        for (std::size_t t = 0; t < geom.tx_positions.size(); ++t) {
            const Complex expected =
                los_gain(geom.ris_elements[e], geom.tx_positions[t], geom.wavelength);
            CHECK(std::abs((*ch.h_tx_ris)(e, t) - expected) <= 1e-12);
        }
    }
}

TEST_CASE("synthesis is a pure function of seed and realization") {
    const SceneGeometry geom = make_scene_geometry(small_geometry());
    const ScenarioSpec spec = ScenarioSpec::defaults_for(Regime::MediumRank, 99, 5);
    const ChannelSet first = synthesize(geom, spec, 3);
    const ChannelSet second = synthesize(geom, spec, 3);
    CHECK(first.h_direct.entries() == second.h_direct.entries());
    CHECK(first.h_tx_ris->entries() == second.h_tx_ris->entries());
    CHECK(first.h_ris_rx->entries() == second.h_ris_rx->entries());

    const ChannelSet other = synthesize(geom, spec, 4);
    CHECK(first.h_direct.entries() != other.h_direct.entries());
}

TEST_CASE("synthesis rejects out-of-range realization indices") {
    const SceneGeometry geom = make_scene_geometry(small_geometry());
    const ScenarioSpec spec = ScenarioSpec::defaults_for(Regime::LowRank, 1, 2);
    CHECK_THROWS_AS(synthesize(geom, spec, 2), ValidationError);
}

TEST_CASE("a scene without surface elements yields a direct-only channel") {
    SceneGeometry geom = make_scene_geometry(small_geometry());
    geom.ris_elements.clear();
    const ChannelSet ch = synthesize(geom, ScenarioSpec::defaults_for(Regime::LowRank, 4), 0);
    CHECK(ch.ris_element_count() == 0);
    CHECK_FALSE(ch.h_tx_ris.has_value());
    CHECK(compose_channel(ch).entries() == ch.h_direct.entries());
    const RisConfig empty;
    CHECK(compose_channel(ch, empty).entries() == ch.h_direct.entries());
}

TEST_CASE("low-rank defaults land near the intended baseline rank") {
    const SceneGeometry geom = make_scene_geometry(GeometryParams{});
    const ScenarioSpec spec = ScenarioSpec::defaults_for(Regime::LowRank, 1, 100);
    double sum = 0.0;
    for (std::uint32_t k = 0; k < spec.realizations; ++k) {
        sum += rank_report(synthesize(geom, spec, k).h_direct).effective_rank;
    }
    const double mean = sum / spec.realizations;
    CHECK(mean >= 1.1);
    CHECK(mean <= 1.5);
}

TEST_CASE("copper sheet with a degenerate extent vanishes") {
    const SceneGeometry geom = make_scene_geometry(small_geometry());
    const ComplexMatrix sheet = copper_sheet_channel(geom, Vec3{}, {0.0, 0.0});
    CHECK(frobenius_norm(sheet) == 0.0);
}

TEST_CASE("copper sheet single-pair image path by hand geometry") {
    SceneGeometry geom;
    geom.wavelength = 0.0573;
    geom.tx_positions = {Vec3{-0.5, 0.0, 1.0}};
    geom.rx_positions = {Vec3{0.5, 0.0, 1.0}};
    geom.ris_plane_normal = {0.0, 0.0, 1.0};

    const ComplexMatrix sheet = copper_sheet_channel(geom, Vec3{}, {1.0, 1.0});
    // Image of the tx sits at (-0.5, 0, -1); the path to the rx has length
    // sqrt(1 + 4) and bounces at the sheet center.
    const double d_img = std::sqrt(5.0);
    CHECK(std::abs(sheet(0, 0)) ==
          doctest::Approx(geom.wavelength / (4.0 * std::numbers::pi * d_img)).epsilon(1e-12));
    const Complex expected = -los_gain(Vec3{-0.5, 0.0, -1.0}, Vec3{0.5, 0.0, 1.0},
                                       geom.wavelength);
    CHECK(std::abs(sheet(0, 0) - expected) <= 1e-15);
}

TEST_CASE("copper sheet clipping only removes entries") {
    const SceneGeometry geom = make_scene_geometry(small_geometry());
    const double inf = std::numeric_limits<double>::infinity();
    const ComplexMatrix unclipped = copper_sheet_channel(geom, Vec3{}, {inf, inf});
    const ComplexMatrix clipped =
        copper_sheet_channel(geom, Vec3{}, copper_sheet_halfwidths(small_geometry()));
    for (std::size_t r = 0; r < unclipped.rows(); ++r) {
        for (std::size_t c = 0; c < unclipped.cols(); ++c) {
            const bool kept = clipped(r, c) != Complex{0.0, 0.0};
            if (kept) {
                CHECK(clipped(r, c) == unclipped(r, c));
            }
        }
    }
}

TEST_CASE("copper sheet concentrates energy into one mode") {
    const GeometryParams params;
    const SceneGeometry geom = make_scene_geometry(params);
    const ComplexMatrix sheet = copper_sheet_channel(geom, Vec3{}, copper_sheet_halfwidths(params));
    CHECK(rank_report(sheet).effective_rank <= 1.3);
}

TEST_CASE("copper sheet rejects antennas on the plane") {
    SceneGeometry geom = make_scene_geometry(small_geometry());
    geom.tx_positions[0].z = 0.0;
    CHECK_THROWS_AS(copper_sheet_channel(geom, Vec3{}, {1.0, 1.0}), ValidationError);
}

TEST_CASE("transmit without noise is the exact matrix chain") {
    const ComplexMatrix h = ComplexMatrix::identity(3);
    const std::vector<Complex> x{Complex{1.0, 0.0}, Complex{0.0, 0.0}, Complex{0.0, 0.0}};
    const std::vector<Complex> y = transmit(h, ComplexMatrix::identity(3), x, 0.0, 7);
    CHECK(y == x);

    ComplexMatrix g(2, 2);
    g(0, 0) = {0.5, -0.5};
    g(0, 1) = {1.0, 2.0};
    g(1, 0) = {-0.25, 0.0};
    g(1, 1) = {0.0, 1.0};
    ComplexMatrix v(2, 2);
    v(0, 0) = {0.0, 1.0};
    v(1, 1) = {2.0, 0.0};
    const std::vector<Complex> x2{Complex{1.0, 1.0}, Complex{-0.5, 0.25}};
    const std::vector<Complex> expected = {
        g(0, 0) * (v(0, 0) * x2[0]) + g(0, 1) * (v(1, 1) * x2[1]),
        g(1, 0) * (v(0, 0) * x2[0]) + g(1, 1) * (v(1, 1) * x2[1])};
    const std::vector<Complex> y2 = transmit(g, v, x2, 0.0, 0);
    CHECK(std::abs(y2[0] - expected[0]) <= 1e-15);
    CHECK(std::abs(y2[1] - expected[1]) <= 1e-15);
}

TEST_CASE("transmit noise has the configured variance") {
    const ComplexMatrix h = ComplexMatrix::identity(2);
    const std::vector<Complex> x{Complex{0.0, 0.0}, Complex{0.0, 0.0}};
    double sum_sq[2] = {0.0, 0.0};
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const std::vector<Complex> y =
            transmit(h, ComplexMatrix::identity(2), x, 1.0, static_cast<std::uint64_t>(i));
        sum_sq[0] += std::norm(y[0]);
        sum_sq[1] += std::norm(y[1]);
    }
    CHECK(std::abs(sum_sq[0] / draws - 1.0) <= 0.05);
    CHECK(std::abs(sum_sq[1] / draws - 1.0) <= 0.05);
}

TEST_CASE("transmit rejects shape mismatches") {
    const ComplexMatrix h = ComplexMatrix::identity(3);
    const std::vector<Complex> x(3, Complex{});
    CHECK_THROWS_AS(transmit(h, ComplexMatrix::identity(2), x, 0.0, 0), ValidationError);
    CHECK_THROWS_AS(transmit(h, ComplexMatrix::identity(3), std::vector<Complex>(2), 0.0, 0),
                    ValidationError);
    CHECK_THROWS_AS(transmit(h, ComplexMatrix::identity(3), x, -1.0, 0), ValidationError);
}
