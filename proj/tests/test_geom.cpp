#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "phs3/fourier.hpp"
#include "phs3/geom.hpp"

using namespace phs3;

namespace {

struct MiniRng {
    unsigned long long state = 0x9e3779b97f4a7c15ull;
    double next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return static_cast<double>(state % 1000000007ull) / 1000000007.0;
    }
    double symmetric() { return 2.0 * next() - 1.0; }
};

ComplexPair random_unit_pair(MiniRng& rng) {
    ComplexPair w{complexd(rng.symmetric(), rng.symmetric()), complexd(rng.symmetric(), rng.symmetric())};
    const double len = std::sqrt(hermitian(w, w).real());
    return {w.z1 / len, w.z2 / len};
}

// circle at first coordinate h, sampled at speed 2 over its least period
struct CirclePatch {
    std::vector<Vec3> eta;
    CurvatureProfile k_half;
};

CirclePatch latitude_circle(double h, std::size_t n) {
    const double ell = std::sqrt(1.0 - h * h);
    CirclePatch patch;
    patch.k_half.period_L = pi * ell;
    patch.k_half.values.assign(n, h / ell);
    patch.eta.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = patch.k_half.period_L * static_cast<double>(j) / static_cast<double>(n);
        patch.eta[j] = {h, ell * std::cos(2.0 * x / ell), ell * std::sin(2.0 * x / ell)};
    }
    return patch;
}

double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross3(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace

TEST_CASE("spectral derivatives match analytic derivatives of band-limited data") {
    const std::size_t n = 64;
    const double L = 2.0 * pi;
    std::vector<double> f(n);
    std::vector<complexd> g(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double s = L * static_cast<double>(j) / static_cast<double>(n);
        f[j] = std::sin(s) + 0.5 * std::cos(3.0 * s);
        g[j] = std::exp(complexd(0.0, 2.0 * s));
    }
    const std::vector<double> d1 = spectral_derivative(f, L);
    const std::vector<double> d2 = spectral_derivative(f, L, 2);
    const std::vector<complexd> dg = spectral_derivative(g, L);
    for (std::size_t j = 0; j < n; ++j) {
        const double s = L * static_cast<double>(j) / static_cast<double>(n);
        CHECK(std::fabs(d1[j] - (std::cos(s) - 1.5 * std::sin(3.0 * s))) <= 1e-11);
        CHECK(std::fabs(d2[j] - (-std::sin(s) - 4.5 * std::cos(3.0 * s))) <= 1e-10);
        CHECK(std::abs(dg[j] - complexd(0.0, 2.0) * g[j]) <= 1e-11);
    }
    CHECK_THROWS_AS(spectral_derivative(f, -1.0), validation_error);
}

TEST_CASE("spectral antiderivative carries the mean as a linear term") {
    const std::size_t n = 128;
    const double L = 2.0 * pi;
    std::vector<double> f(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double s = L * static_cast<double>(j) / static_cast<double>(n);
        f[j] = 0.75 + std::cos(s);
    }
    const std::vector<double> big_f = spectral_antiderivative(f, L);
    for (std::size_t j = 0; j < n; ++j) {
        const double s = L * static_cast<double>(j) / static_cast<double>(n);
        CHECK(std::fabs(big_f[j] - (0.75 * s + std::sin(s))) <= 1e-11);
    }
    // antiderivative of the derivative recovers f up to its value at 0
    const std::vector<double> round = spectral_antiderivative(spectral_derivative(f, L), L);
    for (std::size_t j = 0; j < n; ++j) CHECK(std::fabs(round[j] - (f[j] - f[0])) <= 1e-11);
}

TEST_CASE("spectral resampling and fractional shifts interpolate exactly") {
    const std::size_t n = 32;
    const double L = 2.0 * pi;
    std::vector<double> f(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double s = L * static_cast<double>(j) / static_cast<double>(n);
        f[j] = std::sin(s) + 0.3 * std::cos(4.0 * s);
    }
    const std::vector<double> up = spectral_resample(f, 128);
    for (std::size_t j = 0; j < 128; ++j) {
        const double s = L * static_cast<double>(j) / 128.0;
        CHECK(std::fabs(up[j] - (std::sin(s) + 0.3 * std::cos(4.0 * s))) <= 1e-12);
    }
    const std::vector<double> down = spectral_resample(up, n);
    for (std::size_t j = 0; j < n; ++j) CHECK(std::fabs(down[j] - f[j]) <= 1e-12);

    const double delta = 0.3;
    const std::vector<double> moved = spectral_shift(f, L, delta);
    for (std::size_t j = 0; j < n; ++j) {
        const double s = L * static_cast<double>(j) / static_cast<double>(n) + delta;
        CHECK(std::fabs(moved[j] - (std::sin(s) + 0.3 * std::cos(4.0 * s))) <= 1e-12);
    }
}

TEST_CASE("torus knot curves are unit-norm Legendrian with constant curvature") {
    const SampledCurve flat = torus_knot_curve(1, 1, 256);
    CHECK(flat.period_L == doctest::Approx(2.0 * pi).epsilon(1e-14));
    const CurvatureProfile k_flat = curvature_of(flat);
    for (double v : k_flat.values) CHECK(std::fabs(v) <= 1e-10);

    const SampledCurve knot = torus_knot_curve(3, 5, 1024);
    CHECK(knot.period_L == doctest::Approx(2.0 * pi * std::sqrt(15.0)).epsilon(1e-14));
    CHECK(knot.legendrian_residual() <= 1e-8);
    const CurvatureProfile k_knot = curvature_of(knot);
    for (double v : k_knot.values) CHECK(std::fabs(v - (-2.0 / std::sqrt(15.0))) <= 1e-10);

    const SampledCurve mid = torus_knot_curve(2, 3, 512);
    for (const ComplexPair& p : mid.samples) {
        CHECK(std::fabs(std::norm(p.z1) - 0.4) <= 1e-12);
        CHECK(std::fabs(std::norm(p.z1) + std::norm(p.z2) - 1.0) <= 1e-12);
    }

    CHECK_THROWS_AS(torus_knot_curve(2, 4, 256), validation_error);
    CHECK_THROWS_AS(torus_knot_curve(0, 1, 256), validation_error);
    CHECK_THROWS_AS(torus_knot_curve(1, 2, 4), validation_error);
}

TEST_CASE("curvature extraction rejects degenerate speed") {
    SampledCurve frozen;
    frozen.period_L = 1.0;
    frozen.samples.assign(64, ComplexPair{complexd(1.0, 0.0), complexd(0.0, 0.0)});
    CHECK_THROWS_AS(curvature_of(frozen), validation_error);
}

TEST_CASE("frenet reconstruction reproduces closed-form curves") {
    CurvatureProfile zero;
    zero.period_L = 2.0 * pi;
    zero.values.assign(1024, 0.0);
    Frame id;
    id.gamma = {complexd(1.0, 0.0), complexd(0.0, 0.0)};
    id.gamma_s = {complexd(0.0, 0.0), complexd(1.0, 0.0)};
    const SampledCurve circle = frenet_reconstruct(zero, id);
    for (std::size_t j = 0; j < circle.size(); ++j) {
        const double s = zero.period_L * static_cast<double>(j) / static_cast<double>(circle.size());
        CHECK(std::abs(circle.samples[j].z1 - complexd(std::cos(s), 0.0)) <= 1e-9);
        CHECK(std::abs(circle.samples[j].z2 - complexd(std::sin(s), 0.0)) <= 1e-9);
    }

    const SampledCurve knot = torus_knot_curve(3, 5, 2048);
    CurvatureProfile k_knot;
    k_knot.period_L = knot.period_L;
    k_knot.values.assign(2048, -2.0 / std::sqrt(15.0));
    const double root15 = std::sqrt(15.0);
    Frame start;
    start.gamma = knot.samples[0];
    start.gamma_s = {complexd(0.0, -5.0 / root15) * knot.samples[0].z1,
                     complexd(0.0, 3.0 / root15) * knot.samples[0].z2};
    const SampledCurve rebuilt = frenet_reconstruct(k_knot, start);
    double worst = 0.0;
    for (std::size_t j = 0; j < rebuilt.size(); ++j) {
        worst = std::max(worst, std::abs(rebuilt.samples[j].z1 - knot.samples[j].z1));
        worst = std::max(worst, std::abs(rebuilt.samples[j].z2 - knot.samples[j].z2));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("frenet reconstruction is unitary-equivariant") {
    const std::size_t n = 512;
    CurvatureProfile k;
    k.period_L = 5.0;
    k.values.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double s = k.period_L * static_cast<double>(j) / static_cast<double>(n);
        k.values[j] = 0.7 + 0.2 * std::cos(2.0 * pi * s / k.period_L) - 0.1 * std::sin(4.0 * pi * s / k.period_L);
    }
    Frame id;
    id.gamma = {complexd(1.0, 0.0), complexd(0.0, 0.0)};
    id.gamma_s = {complexd(0.0, 0.0), complexd(1.0, 0.0)};

    ComplexPair u{complexd(0.6, 0.0), complexd(0.0, 0.8)};
    const complexd det_phase = std::exp(complexd(0.0, 0.4));
    ComplexPair u2 = contact_normal(u);
    u2 = {det_phase * u2.z1, det_phase * u2.z2};
    Frame rotated;
    rotated.gamma = u;
    rotated.gamma_s = u2;
    CHECK(rotated.unitarity_defect() <= 1e-12);

    const SampledCurve base = frenet_reconstruct(k, id);
    const SampledCurve moved = frenet_reconstruct(k, rotated);
    for (std::size_t j = 0; j < n; ++j) {
        const complexd a = u.z1 * base.samples[j].z1 + u2.z1 * base.samples[j].z2;
        const complexd b = u.z2 * base.samples[j].z1 + u2.z2 * base.samples[j].z2;
        CHECK(std::abs(moved.samples[j].z1 - a) <= 1e-9);
        CHECK(std::abs(moved.samples[j].z2 - b) <= 1e-9);
        CHECK(std::fabs(hermitian(moved.samples[j], moved.samples[j]).real() - 1.0) <= 1e-9);
    }

    CurvatureProfile bad = k;
    bad.values[3] = std::nan("");
    CHECK_THROWS_AS(frenet_reconstruct(bad, id), numerical_error);
}

TEST_CASE("clifford projection lands on latitude circles and ignores the fiber") {
    const SampledCurve flat = torus_knot_curve(1, 1, 256);
    for (const Vec3& p : clifford_projection(flat)) CHECK(std::fabs(p[0]) <= 1e-12);

    const SampledCurve knot = torus_knot_curve(3, 5, 512);
    SampledCurve spun = knot;
    const complexd phase = std::exp(complexd(0.0, 1.1));
    for (ComplexPair& p : spun.samples) p = {phase * p.z1, phase * p.z2};
    const std::vector<Vec3> proj = clifford_projection(knot);
    const std::vector<Vec3> proj_spun = clifford_projection(spun);
    for (std::size_t j = 0; j < proj.size(); ++j) {
        CHECK(std::fabs(proj[j][0] + 0.25) <= 1e-12);
        CHECK(std::fabs(std::sqrt(dot3(proj[j], proj[j])) - 1.0) <= 1e-12);
        for (int c = 0; c < 3; ++c) CHECK(std::fabs(proj[j][c] - proj_spun[j][c]) <= 1e-12);
    }
}

TEST_CASE("clifford projection of a unit-speed curve has speed 2 and half curvature") {
    const std::size_t n = 1024;
    const SampledCurve knot = torus_knot_curve(2, 3, n);
    const std::vector<Vec3> eta = clifford_projection(knot);
    std::vector<double> cx(n), cy(n), cz(n);
    for (std::size_t j = 0; j < n; ++j) {
        cx[j] = eta[j][0];
        cy[j] = eta[j][1];
        cz[j] = eta[j][2];
    }
    const double L = knot.period_L;
    const std::vector<double> dx = spectral_derivative(cx, L), dy = spectral_derivative(cy, L),
                              dz = spectral_derivative(cz, L);
    const std::vector<double> ddx = spectral_derivative(dx, L), ddy = spectral_derivative(dy, L),
                              ddz = spectral_derivative(dz, L);
    const double expected_half_k = 0.5 * (2.0 - 3.0) / std::sqrt(6.0);
    for (std::size_t j = 0; j < n; ++j) {
        const Vec3 vel{dx[j], dy[j], dz[j]};
        CHECK(std::fabs(std::sqrt(dot3(vel, vel)) - 2.0) <= 1e-7);
        // Frenet curvature in the projection's own arclength: <T', nu> / speed
        const Vec3 t_hat{vel[0] / 2.0, vel[1] / 2.0, vel[2] / 2.0};
        const Vec3 t_prime{ddx[j] / 2.0, ddy[j] / 2.0, ddz[j] / 2.0};
        const Vec3 nu = cross3(Vec3{cx[j], cy[j], cz[j]}, t_hat);
        CHECK(std::fabs(dot3(t_prime, nu) / 2.0 - expected_half_k) <= 1e-6);
    }
}

TEST_CASE("heisenberg projection evaluates the contactomorphism") {
    const Vec3 base = heisenberg_point({complexd(1.0, 0.0), complexd(0.0, 0.0)});
    CHECK(std::fabs(base[0]) <= 1e-15);
    CHECK(std::fabs(base[1]) <= 1e-15);
    CHECK(std::fabs(base[2]) <= 1e-15);
    const Vec3 top = heisenberg_point({complexd(0.0, 1.0), complexd(0.0, 0.0)});
    CHECK(std::fabs(top[0]) <= 1e-15);
    CHECK(std::fabs(top[1]) <= 1e-15);
    CHECK(std::fabs(top[2] - 1.0) <= 1e-15);
    CHECK_THROWS_AS(heisenberg_point({complexd(-1.0 + 1e-7, 0.0), complexd(4.5e-4, 0.0)}), numerical_error);
}

TEST_CASE("planar part of the projected torus knot is the closed-form trochoid") {
    const std::size_t n = 512;
    const SampledCurve knot = torus_knot_curve(3, 5, n);
    const std::vector<Vec3> hp = heisenberg_projection(knot);
    const double c = std::sqrt(2.0 * 5.0 * 8.0);
    const double d = std::sqrt(2.0 * 3.0 * 5.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double s = knot.period_L * static_cast<double>(j) / static_cast<double>(n);
        const double u = std::sqrt(3.0 / 5.0) * s;
        const double rho = 11.0 + 2.0 * std::sqrt(24.0) * std::cos(5.0 * u / 3.0);
        const double ref_x = (-c * std::sin(u) - d * std::sin(8.0 * u / 3.0)) / rho;
        const double ref_y = (c * std::cos(u) + d * std::cos(8.0 * u / 3.0)) / rho;
        CHECK(std::fabs(hp[j][0] - ref_x) <= 1e-9);
        CHECK(std::fabs(hp[j][1] - ref_y) <= 1e-9);
    }
}

TEST_CASE("projected Legendrian polylines annihilate the contact form quadratically") {
    auto residual = [](std::size_t n) {
        const SampledCurve knot = torus_knot_curve(2, 3, n);
        const std::vector<Vec3> hp = heisenberg_projection(knot);
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const Vec3& a = hp[j];
            const Vec3& b = hp[(j + 1) % n];
            const double mx = 0.5 * (a[0] + b[0]);
            const double my = 0.5 * (a[1] + b[1]);
            total += std::fabs((b[2] - a[2]) - my * (b[0] - a[0]) + mx * (b[1] - a[1]));
        }
        return total;
    };
    const double coarse = residual(256);
    const double mid = residual(512);
    const double fine = residual(1024);
    CHECK(coarse / mid >= 3.5);
    CHECK(mid / fine >= 3.5);
    CHECK(fine <= 1e-2);
}

TEST_CASE("spin covering produces rotations with the documented fiber action") {
    MiniRng rng;
    for (int trial = 0; trial < 50; ++trial) {
        const ComplexPair w = random_unit_pair(rng);
        const std::array<Vec3, 3> cols = spin_covering_columns(w);
        for (int c = 0; c < 3; ++c)
            for (int c2 = 0; c2 < 3; ++c2)
                CHECK(std::fabs(dot3(cols[c], cols[c2]) - (c == c2 ? 1.0 : 0.0)) <= 1e-12);
        const Vec3 handed = cross3(cols[0], cols[1]);
        for (int r = 0; r < 3; ++r) CHECK(std::fabs(handed[r] - cols[2][r]) <= 1e-12);

        const double phi = rng.symmetric() * 3.0;
        const complexd phase = std::exp(complexd(0.0, phi));
        const std::array<Vec3, 3> spun = spin_covering_columns({phase * w.z1, phase * w.z2});
        for (int r = 0; r < 3; ++r) {
            CHECK(std::fabs(spun[0][r] - cols[0][r]) <= 1e-12);
            CHECK(std::fabs(spun[1][r] - (std::cos(2 * phi) * cols[1][r] - std::sin(2 * phi) * cols[2][r])) <= 1e-11);
            CHECK(std::fabs(spun[2][r] - (std::sin(2 * phi) * cols[1][r] + std::cos(2 * phi) * cols[2][r])) <= 1e-11);
        }
    }
}

TEST_CASE("rotation-to-pair inversion round-trips including near the poles") {
    MiniRng rng;
    for (int trial = 0; trial < 200; ++trial) {
        ComplexPair w = random_unit_pair(rng);
        if (trial % 3 == 1) w.z1 *= 1e-6;
        if (trial % 3 == 2) w.z2 *= 1e-6;
        const double len = std::sqrt(hermitian(w, w).real());
        w = {w.z1 / len, w.z2 / len};
        const std::array<Vec3, 3> cols = spin_covering_columns(w);
        const ComplexPair back = pair_from_rotation(cols);
        const std::array<Vec3, 3> again = spin_covering_columns(back);
        for (int c = 0; c < 3; ++c)
            for (int r = 0; r < 3; ++r) CHECK(std::fabs(again[c][r] - cols[c][r]) <= 1e-10);
    }
}

TEST_CASE("zero phase lift tracks latitude circles and flips over one period") {
    for (double h : {0.0, -0.25}) {
        const CirclePatch patch = latitude_circle(h, 256);
        std::vector<double> k(256);
        for (std::size_t j = 0; j < 256; ++j) k[j] = 2.0 * patch.k_half.values[j];
        const ZeroPhaseLift lift = zero_phase_lift(patch.eta, k, patch.k_half.period_L);
        CHECK(lift.endpoint_sign == -1);
        for (std::size_t j = 0; j < 256; j += 37) {
            const Vec3 proj = spin_covering_columns(lift.tilde[j])[0];
            for (int r = 0; r < 3; ++r) CHECK(std::fabs(proj[r] - patch.eta[j][r]) <= 1e-8);
        }
    }
}

TEST_CASE("legendrian lift rebuilds constant-curvature knots from circles") {
    const CirclePatch patch = latitude_circle(-0.25, 512);
    const LegendrianLiftResult lift = legendrian_lift(patch.eta, patch.k_half);
    CHECK(lift.closed);
    CHECK(lift.period_multiple == 8);
    CHECK(std::fabs(lift.total_curvature + 0.25) <= 1e-12);
    CHECK(lift.curve.period_L == doctest::Approx(2.0 * pi * std::sqrt(15.0)).epsilon(1e-12));
    CHECK(lift.curve.legendrian_residual() <= 1e-8);
    const CurvatureProfile k = curvature_of(lift.curve);
    for (double v : k.values) CHECK(std::fabs(v - (-2.0 / std::sqrt(15.0))) <= 1e-7);
    const std::vector<Vec3> proj = clifford_projection(lift.curve);
    for (std::size_t j = 0; j < 512; ++j)
        for (int r = 0; r < 3; ++r) CHECK(std::fabs(proj[j][r] - patch.eta[j][r]) <= 1e-7);
    for (const Vec3& p : proj) CHECK(std::fabs(p[0] + 0.25) <= 1e-7);
}

TEST_CASE("legendrian lift of the equator closes after two fiber periods") {
    const CirclePatch patch = latitude_circle(0.0, 256);
    const LegendrianLiftResult lift = legendrian_lift(patch.eta, patch.k_half);
    CHECK(lift.closed);
    CHECK(lift.period_multiple == 2);
    CHECK(std::fabs(lift.total_curvature) <= 1e-12);
    const CurvatureProfile k = curvature_of(lift.curve);
    for (double v : k.values) CHECK(std::fabs(v) <= 1e-8);
    CHECK(lift.curve.legendrian_residual() <= 1e-8);
}

TEST_CASE("legendrian lift reports non-closure for irrational total curvature") {
    const CirclePatch patch = latitude_circle(1.0 / pi, 256);
    const LegendrianLiftResult lift = legendrian_lift(patch.eta, patch.k_half);
    CHECK_FALSE(lift.closed);
    CHECK(lift.period_multiple == 0);
    CHECK(std::fabs(lift.total_curvature - 1.0 / pi) <= 1e-10);
    CHECK(lift.curve.samples.size() == 256);
}

TEST_CASE("legendrian lift validates its input data") {
    CirclePatch patch = latitude_circle(-0.25, 256);
    CirclePatch off_sphere = patch;
    for (Vec3& p : off_sphere.eta) p[1] *= 1.001;
    CHECK_THROWS_AS(legendrian_lift(off_sphere.eta, off_sphere.k_half), validation_error);

    CirclePatch bad_speed = patch;
    bad_speed.k_half.period_L *= 1.01;  // stated period no longer matches speed 2
    CHECK_THROWS_AS(legendrian_lift(bad_speed.eta, bad_speed.k_half), validation_error);

    CirclePatch short_k = patch;
    short_k.k_half.values.pop_back();
    CHECK_THROWS_AS(legendrian_lift(short_k.eta, short_k.k_half), validation_error);
}
