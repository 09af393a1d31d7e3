#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <phs3/common.hpp>
#include <phs3/geom.hpp>
#include <phs3/invariants.hpp>

using namespace phs3;

namespace {

std::vector<std::array<double, 2>> lagrangian_polyline(const SampledCurve& curve) {
    const std::vector<Vec3> hp = heisenberg_projection(curve);
    std::vector<std::array<double, 2>> planar(hp.size());
    for (std::size_t j = 0; j < hp.size(); ++j) planar[j] = {hp[j][0], hp[j][1]};
    return planar;
}

}  // namespace

TEST_CASE("rational detection accepts convergents within tolerance") {
    auto hit = [](double x) { return detect_rational({x, 64, 1e-9}); };
    auto r = hit(0.8333333333);
    REQUIRE(r.has_value());
    CHECK(r->first == 5);
    CHECK(r->second == 6);
    r = hit(0.5000000004);
    REQUIRE(r.has_value());
    CHECK(r->first == 1);
    CHECK(r->second == 2);
    r = hit(-0.25);
    REQUIRE(r.has_value());
    CHECK(r->first == -1);
    CHECK(r->second == 4);
    r = hit(3.0);
    REQUIRE(r.has_value());
    CHECK(r->first == 3);
    CHECK(r->second == 1);
    r = hit(0.0);
    REQUIRE(r.has_value());
    CHECK(r->first == 0);
    CHECK(r->second == 1);
}

TEST_CASE("rational detection rejects irrationals and out-of-range denominators") {
    CHECK_FALSE(detect_rational({pi, 64, 1e-9}).has_value());
    CHECK_FALSE(detect_rational({std::sqrt(2.0), 64, 1e-9}).has_value());
    CHECK_FALSE(detect_rational({1.0 / 97.0, 64, 1e-9}).has_value());
    CHECK_FALSE(detect_rational({0.3333, 64, 1e-9}).has_value());
    // same values clear once the constraints are relaxed
    auto r = detect_rational({1.0 / 97.0, 128, 1e-9});
    REQUIRE(r.has_value());
    CHECK(r->second == 97);
    r = detect_rational({0.3333, 64, 1e-3});
    REQUIRE(r.has_value());
    CHECK(r->first == 1);
    CHECK(r->second == 3);
}

TEST_CASE("phase degree is total curvature over two pi") {
    CurvatureProfile flat;
    flat.period_L = 2.0 * pi;
    flat.values.assign(256, 0.0);
    CHECK(maslov_index(flat) == 0);

    CurvatureProfile knot;
    knot.period_L = 2.0 * pi * std::sqrt(15.0);
    knot.values.assign(256, -2.0 / std::sqrt(15.0));
    CHECK(maslov_index(knot) == -2);

    CHECK(maslov_index(curvature_of(torus_knot_curve(3, 5, 1024))) == -2);
    CHECK(maslov_index(curvature_of(torus_knot_curve(2, 3, 1024))) == -1);
    CHECK(maslov_index(curvature_of(torus_knot_curve(1, 1, 512))) == 0);

    CurvatureProfile open_phase;
    open_phase.period_L = 2.0 * pi;
    open_phase.values.assign(256, 0.3);
    CHECK_THROWS_AS(maslov_index(open_phase), validation_error);
}

TEST_CASE("tangent winding of explicit planar loops") {
    const std::size_t n = 128;
    std::vector<std::array<double, 2>> ccw(n), cw(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double t = 2.0 * pi * static_cast<double>(j) / static_cast<double>(n);
        ccw[j] = {std::cos(t), std::sin(t)};
        cw[j] = {std::cos(t), -std::sin(t)};
    }
    CHECK(turning_number(ccw) == 1);
    CHECK(turning_number(cw) == -1);

    std::vector<std::array<double, 2>> doubled(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double t = 4.0 * pi * static_cast<double>(j) / static_cast<double>(n);
        doubled[j] = {std::cos(t), std::sin(t)};
    }
    CHECK(turning_number(doubled) == 2);

    std::vector<std::array<double, 2>> pinched = ccw;
    pinched[5] = pinched[4];
    CHECK_THROWS_AS(turning_number(pinched), validation_error);
    CHECK_THROWS_AS(turning_number(std::vector<std::array<double, 2>>{{0, 0}, {1, 0}}), validation_error);
}

TEST_CASE("planar turning of the projected curve matches the phase degree") {
    for (auto [m, n, N] : {std::array<int, 3>{1, 1, 512}, {2, 3, 1024}, {3, 5, 2048}}) {
        const SampledCurve curve = torus_knot_curve(m, n, static_cast<std::size_t>(N));
        const int turning = turning_number(lagrangian_polyline(curve));
        CHECK(turning == m - n);
        CHECK(turning == maslov_index(curvature_of(curve)));
    }
    // reported magnitude for the (3,5) projection is 2
    CHECK(std::abs(turning_number(lagrangian_polyline(torus_knot_curve(3, 5, 2048)))) == 2);
}

TEST_CASE("crossing-sign sum of the projected diagram") {
    CHECK(bennequin_number(torus_knot_curve(1, 1, 512)) == -1);
    CHECK(bennequin_number(torus_knot_curve(2, 3, 1024)) == -6);
    CHECK(bennequin_number(torus_knot_curve(3, 5, 2048)) == -15);
}

TEST_CASE("crossing-sign sum is stable under unitary phase rotations") {
    SampledCurve curve = torus_knot_curve(2, 3, 1024);
    const complexd p1 = std::polar(1.0, 0.7);
    const complexd p2 = std::polar(1.0, -0.3);
    for (auto& w : curve.samples) {
        w.z1 *= p1;
        w.z2 *= p2;
    }
    CHECK(bennequin_number(curve) == -6);
}

TEST_CASE("period ratio against the projected image and frame-lift closure sign") {
    auto cs = clifford_index_and_spin(torus_knot_curve(1, 1, 512));
    CHECK(cs.first == 2);
    CHECK_FALSE(cs.second.whole);
    CHECK(cs.second.value() == 0.5);

    cs = clifford_index_and_spin(torus_knot_curve(2, 3, 1024));
    CHECK(cs.first == 5);
    CHECK_FALSE(cs.second.whole);

    cs = clifford_index_and_spin(torus_knot_curve(3, 5, 2048));
    CHECK(cs.first == 8);
    CHECK_FALSE(cs.second.whole);

    cs = clifford_index_and_spin(torus_knot_curve(4, 7, 2048));
    CHECK(cs.first == 11);
    CHECK_FALSE(cs.second.whole);
}

TEST_CASE("composite report for one closed curve") {
    const InvariantReport report = invariant_report(torus_knot_curve(2, 3, 1024));
    CHECK(report.maslov == -1);
    CHECK(report.clifford_index == 5);
    CHECK_FALSE(report.spin.whole);
    CHECK(report.spin.value() == 0.5);
    REQUIRE(report.bennequin.has_value());
    CHECK(*report.bennequin == -6);
    CHECK(report.turning_number == -1);
    CHECK(report.turning_number == report.maslov);
}
