#include "phs3/geom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include "phs3/fourier.hpp"
#include "phs3/invariants.hpp"

namespace phs3 {

namespace {

double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross3(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }

Vec3 scale3(const Vec3& a, double c) { return {c * a[0], c * a[1], c * a[2]}; }

ComplexPair axpy(const ComplexPair& x, const ComplexPair& y, complexd a) {
    return {y.z1 + a * x.z1, y.z2 + a * x.z2};
}

void split_components(const SampledCurve& curve, std::vector<complexd>& z1, std::vector<complexd>& z2) {
    const std::size_t n = curve.size();
    z1.resize(n);
    z2.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        z1[j] = curve.samples[j].z1;
        z2[j] = curve.samples[j].z2;
    }
}

// 2x2 complex matrix with rows (a b; c d)
struct Mat2 {
    complexd a, b, c, d;
};

Mat2 mul(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Mat2 add_scaled(const Mat2& x, const Mat2& y, double s) {
    return {x.a + s * y.a, x.b + s * y.b, x.c + s * y.c, x.d + s * y.d};
}

Mat2 inverse_adjoint(const Mat2& x) {
    // (X^*)^{-1} via the adjugate of X^*
    const Mat2 adj{std::conj(x.a), std::conj(x.c), std::conj(x.b), std::conj(x.d)};
    const complexd det = adj.a * adj.d - adj.b * adj.c;
    if (std::abs(det) < 1e-14) throw numerical_error("frame integration: singular frame");
    return {adj.d / det, -adj.b / det, -adj.c / det, adj.a / det};
}

// one Newton step toward the unitary polar factor
Mat2 unitarize(Mat2 x) {
    for (int it = 0; it < 2; ++it) x = add_scaled(add_scaled({0, 0, 0, 0}, x, 0.5), inverse_adjoint(x), 0.5);
    return x;
}

void check_finite(const std::vector<double>& values, const char* what) {
    for (double v : values)
        if (!std::isfinite(v)) throw numerical_error(std::string(what) + ": non-finite value");
}

}  // namespace

complexd hermitian(const ComplexPair& a, const ComplexPair& b) {
    return a.z1 * std::conj(b.z1) + a.z2 * std::conj(b.z2);
}

ComplexPair contact_normal(const ComplexPair& w) { return {-std::conj(w.z2), std::conj(w.z1)}; }

double Frame::unitarity_defect() const {
    const double e11 = std::abs(hermitian(gamma, gamma) - 1.0);
    const double e22 = std::abs(hermitian(gamma_s, gamma_s) - 1.0);
    const double e12 = std::abs(hermitian(gamma_s, gamma));
    return std::max({e11, e22, e12});
}

double SampledCurve::legendrian_residual() const {
    if (samples.size() < 4 || !(period_L > 0.0)) throw validation_error("curve: too few samples or bad period");
    std::vector<complexd> z1, z2;
    split_components(*this, z1, z2);
    const std::vector<complexd> d1 = spectral_derivative(z1, period_L);
    const std::vector<complexd> d2 = spectral_derivative(z2, period_L);
    double worst = 0.0;
    for (std::size_t j = 0; j < samples.size(); ++j) {
        const ComplexPair deriv{d1[j], d2[j]};
        worst = std::max(worst, std::abs(hermitian(deriv, samples[j])));
    }
    return worst;
}

std::array<Vec3, 3> spin_covering_columns(const ComplexPair& w) {
    const complexd w1 = w.z1, w2 = w.z2;
    const complexd cross_conj = w1 * std::conj(w2);
    const complexd prod = w1 * w2;
    const complexd diff_sq = w1 * w1 - w2 * w2;
    const complexd sum_sq = w1 * w1 + w2 * w2;
    const Vec3 c1{std::norm(w1) - std::norm(w2), 2.0 * cross_conj.real(), -2.0 * cross_conj.imag()};
    const Vec3 c2{-2.0 * prod.real(), diff_sq.real(), -sum_sq.imag()};
    const Vec3 c3{-2.0 * prod.imag(), diff_sq.imag(), sum_sq.real()};
    return {c1, c2, c3};
}

ComplexPair pair_from_rotation(const std::array<Vec3, 3>& columns) {
    const double r11 = columns[0][0], r21 = columns[0][1], r31 = columns[0][2];
    const double r12 = columns[1][0], r22 = columns[1][1], r32 = columns[1][2];
    const double r13 = columns[2][0], r23 = columns[2][1], r33 = columns[2][2];
    const complexd w1_conj_w2(0.5 * r21, -0.5 * r31);
    ComplexPair w;
    if (1.0 + r11 >= 1.0 - r11) {
        w.z1 = std::sqrt(complexd(0.5 * (r22 + r33), 0.5 * (r23 - r32)));
        w.z2 = std::conj(w1_conj_w2 / w.z1);
    } else {
        w.z2 = std::sqrt(complexd(0.5 * (r33 - r22), -0.5 * (r32 + r23)));
        w.z1 = w1_conj_w2 / std::conj(w.z2);
    }
    const std::array<Vec3, 3> img = spin_covering_columns(w);
    double defect = 0.0;
    for (int c = 0; c < 3; ++c)
        for (int r = 0; r < 3; ++r) defect = std::max(defect, std::abs(img[c][r] - columns[c][r]));
    if (defect > 1e-8) throw std::logic_error("pair_from_rotation: inversion check failed");
    return w;
}

CurvatureProfile curvature_of(const SampledCurve& curve) {
    const std::size_t n = curve.size();
    if (n < 8 || !(curve.period_L > 0.0)) throw validation_error("curvature_of: too few samples or bad period");
    std::vector<complexd> z1, z2;
    split_components(curve, z1, z2);
    const std::vector<complexd> d1_1 = spectral_derivative(z1, curve.period_L);
    const std::vector<complexd> d1_2 = spectral_derivative(z2, curve.period_L);
    const std::vector<complexd> d2_1 = spectral_derivative(z1, curve.period_L, 2);
    const std::vector<complexd> d2_2 = spectral_derivative(z2, curve.period_L, 2);
    CurvatureProfile k;
    k.period_L = curve.period_L;
    k.values.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const ComplexPair v{d1_1[j], d1_2[j]};
        const ComplexPair acc{d2_1[j], d2_2[j]};
        const double speed_sq = hermitian(v, v).real();
        if (speed_sq < 1e-12) throw validation_error("curvature_of: degenerate speed");
        k.values[j] = hermitian(acc, v).imag() / (speed_sq * std::sqrt(speed_sq));
    }
    return k;
}

std::vector<Frame> frenet_frame_field(const CurvatureProfile& k, const Frame& frame0) {
    const std::size_t n = k.values.size();
    if (n < 8 || !(k.period_L > 0.0)) throw validation_error("frenet_frame_field: too few samples or bad period");
    check_finite(k.values, "frenet_frame_field");
    if (frame0.unitarity_defect() > 1e-6) throw validation_error("frenet_frame_field: initial frame not unitary");

    const std::vector<double> up = spectral_resample(k.values, 4 * n);
    const double h = k.period_L / static_cast<double>(2 * n);
    Mat2 frame{frame0.gamma.z1, frame0.gamma_s.z1, frame0.gamma.z2, frame0.gamma_s.z2};
    frame = unitarize(frame);

    std::vector<Frame> field(n);
    auto coefficient = [&](std::size_t quarter_idx) {
        const double kv = up[quarter_idx % (4 * n)];
        return Mat2{0.0, -1.0, 1.0, complexd(0.0, kv)};
    };
    for (std::size_t step = 0; step < 2 * n; ++step) {
        if (step % 2 == 0) {
            const std::size_t j = step / 2;
            field[j].gamma = {frame.a, frame.c};
            field[j].gamma_s = {frame.b, frame.d};
        }
        const Mat2 u0 = coefficient(2 * step);
        const Mat2 uh = coefficient(2 * step + 1);
        const Mat2 u1 = coefficient(2 * step + 2);
        const Mat2 k1 = mul(frame, u0);
        const Mat2 k2 = mul(add_scaled(frame, k1, 0.5 * h), uh);
        const Mat2 k3 = mul(add_scaled(frame, k2, 0.5 * h), uh);
        const Mat2 k4 = mul(add_scaled(frame, k3, h), u1);
        Mat2 next = add_scaled(frame, k1, h / 6.0);
        next = add_scaled(next, k2, h / 3.0);
        next = add_scaled(next, k3, h / 3.0);
        next = add_scaled(next, k4, h / 6.0);
        frame = unitarize(next);
    }
    return field;
}

SampledCurve frenet_reconstruct(const CurvatureProfile& k, const Frame& frame0) {
    const std::vector<Frame> field = frenet_frame_field(k, frame0);
    SampledCurve curve;
    curve.period_L = k.period_L;
    curve.samples.resize(field.size());
    for (std::size_t j = 0; j < field.size(); ++j) curve.samples[j] = field[j].gamma;
    return curve;
}

std::vector<Vec3> clifford_projection(const SampledCurve& curve) {
    std::vector<Vec3> out(curve.size());
    for (std::size_t j = 0; j < curve.size(); ++j) out[j] = spin_covering_columns(curve.samples[j])[0];
    return out;
}

ZeroPhaseLift zero_phase_lift(const std::vector<Vec3>& eta, const std::vector<double>& k, double period_x) {
    const std::size_t n = eta.size();
    if (n < 16 || k.size() != n) throw validation_error("zero_phase_lift: bad sample counts");
    if (!(period_x > 0.0)) throw validation_error("zero_phase_lift: period must be positive");
    check_finite(k, "zero_phase_lift");

    std::vector<double> cx(n), cy(n), cz(n);
    for (std::size_t j = 0; j < n; ++j) {
        cx[j] = eta[j][0];
        cy[j] = eta[j][1];
        cz[j] = eta[j][2];
    }
    const std::vector<double> dx = spectral_derivative(cx, period_x);
    const std::vector<double> dy = spectral_derivative(cy, period_x);
    const std::vector<double> dz = spectral_derivative(cz, period_x);

    const double r0 = norm3(eta[0]);
    if (std::fabs(r0 - 1.0) > 1e-6) throw validation_error("zero_phase_lift: curve must lie on the unit sphere");
    const Vec3 point = scale3(eta[0], 1.0 / r0);
    Vec3 tangent{dx[0], dy[0], dz[0]};
    const double radial = dot3(tangent, point);
    tangent = {tangent[0] - radial * point[0], tangent[1] - radial * point[1], tangent[2] - radial * point[2]};
    const double tn = norm3(tangent);
    if (tn < 1e-6) throw validation_error("zero_phase_lift: degenerate tangent");
    const Vec3 t_hat = scale3(tangent, 1.0 / tn);
    const Vec3 nu = cross3(point, t_hat);
    ComplexPair w = pair_from_rotation({point, t_hat, nu});

    const std::vector<double> up = spectral_resample(k, 4 * n);
    const double h = period_x / static_cast<double>(2 * n);
    ZeroPhaseLift out;
    out.tilde.resize(n);
    auto rhs = [](const ComplexPair& v, double kv) {
        const complexd factor(0.0, -0.5 * kv);
        const ComplexPair star = contact_normal(v);
        return ComplexPair{factor * v.z1 + star.z1, factor * v.z2 + star.z2};
    };
    const ComplexPair w0 = w;
    for (std::size_t step = 0; step < 2 * n; ++step) {
        if (step % 2 == 0) out.tilde[step / 2] = w;
        const double k0 = up[(2 * step) % (4 * n)];
        const double kh = up[(2 * step + 1) % (4 * n)];
        const double k1v = up[(2 * step + 2) % (4 * n)];
        const ComplexPair a1 = rhs(w, k0);
        const ComplexPair a2 = rhs(axpy(a1, w, 0.5 * h), kh);
        const ComplexPair a3 = rhs(axpy(a2, w, 0.5 * h), kh);
        const ComplexPair a4 = rhs(axpy(a3, w, h), k1v);
        w = {w.z1 + h / 6.0 * (a1.z1 + 2.0 * a2.z1 + 2.0 * a3.z1 + a4.z1),
             w.z2 + h / 6.0 * (a1.z2 + 2.0 * a2.z2 + 2.0 * a3.z2 + a4.z2)};
        const double len = std::sqrt(hermitian(w, w).real());
        w = {w.z1 / len, w.z2 / len};
    }
    const complexd overlap = hermitian(w, w0);
    if (std::fabs(std::abs(overlap) - 1.0) > 1e-5 || std::fabs(overlap.imag()) > 1e-5)
        throw numerical_error("zero_phase_lift: frame does not return over the stated period");
    out.endpoint_sign = overlap.real() > 0.0 ? 1 : -1;

    // distribute the endpoint defect along the interval so the lift is
    // exactly periodic up to the sign; the SU(2) correction from the
    // integrated endpoint to sign * start is slerped across the nodes
    {
        const double sign = static_cast<double>(out.endpoint_sign);
        const complexd alpha_d = sign * hermitian(w0, w);
        const complexd beta_d = sign * hermitian(w0, contact_normal(w));
        const double cos_t = std::clamp(alpha_d.real(), -1.0, 1.0);
        const double theta = std::acos(cos_t);
        const double sin_t = std::sin(theta);
        if (sin_t > 1e-300) {
            const double ai = alpha_d.imag() / sin_t;
            const complexd bu = beta_d / sin_t;
            for (std::size_t j = 0; j < n; ++j) {
                const double t = theta * static_cast<double>(j) / static_cast<double>(n);
                const complexd at(std::cos(t), std::sin(t) * ai);
                const complexd bt = std::sin(t) * bu;
                const ComplexPair star = contact_normal(out.tilde[j]);
                out.tilde[j] = {at * out.tilde[j].z1 + bt * star.z1, at * out.tilde[j].z2 + bt * star.z2};
            }
        }
    }

    for (std::size_t j : {std::size_t(0), n / 4, n / 2, 3 * n / 4}) {
        const Vec3 proj = spin_covering_columns(out.tilde[j])[0];
        Vec3 diff{proj[0] - eta[j][0], proj[1] - eta[j][1], proj[2] - eta[j][2]};
        if (norm3(diff) > 1e-6)
            throw numerical_error("zero_phase_lift: lift drifts from the input curve; data inconsistent");
    }
    return out;
}

LegendrianLiftResult legendrian_lift(const std::vector<Vec3>& eta, const CurvatureProfile& k_half) {
    const std::size_t n = eta.size();
    const double period_x = k_half.period_L;
    if (k_half.values.size() != n) throw validation_error("legendrian_lift: sample counts disagree");
    if (n < 16 || !(period_x > 0.0)) throw validation_error("legendrian_lift: too few samples or bad period");

    std::vector<double> cx(n), cy(n), cz(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (std::fabs(norm3(eta[j]) - 1.0) > 1e-6)
            throw validation_error("legendrian_lift: curve must lie on the unit sphere");
        cx[j] = eta[j][0];
        cy[j] = eta[j][1];
        cz[j] = eta[j][2];
    }
    const std::vector<double> dx = spectral_derivative(cx, period_x);
    const std::vector<double> dy = spectral_derivative(cy, period_x);
    const std::vector<double> dz = spectral_derivative(cz, period_x);
    for (std::size_t j = 0; j < n; ++j) {
        const double speed = std::sqrt(dx[j] * dx[j] + dy[j] * dy[j] + dz[j] * dz[j]);
        if (std::fabs(speed - 2.0) > 1e-3) throw validation_error("legendrian_lift: curve must have speed 2");
    }

    std::vector<double> k(n);
    for (std::size_t j = 0; j < n; ++j) k[j] = 2.0 * k_half.values[j];
    const ZeroPhaseLift lift = zero_phase_lift(eta, k, period_x);

    LegendrianLiftResult result;
    result.total_curvature = periodic_mean(k) * period_x / (2.0 * pi);
    const std::vector<double> alpha = spectral_antiderivative(k, period_x);

    std::vector<ComplexPair> base(n);
    for (std::size_t j = 0; j < n; ++j) {
        const complexd phase = std::exp(complexd(0.0, 0.5 * alpha[j]));
        base[j] = {phase * lift.tilde[j].z1, phase * lift.tilde[j].z2};
    }

    const auto rat = detect_rational({result.total_curvature, 64, 1e-9});
    if (!rat) {
        result.closed = false;
        result.period_multiple = 0;
        result.curve.samples = std::move(base);
        result.curve.period_L = period_x;
        return result;
    }
    const std::int64_t a = rat->first, b = rat->second;
    const std::int64_t numer = a + (lift.endpoint_sign < 0 ? b : 0);
    const std::int64_t g = std::gcd(std::abs(numer), 2 * b);
    const std::int64_t copies = 2 * b / g;

    result.closed = true;
    result.period_multiple = static_cast<int>(copies);
    result.curve.period_L = static_cast<double>(copies) * period_x;
    result.curve.samples.resize(static_cast<std::size_t>(copies) * n);
    for (std::int64_t p = 0; p < copies; ++p) {
        const complexd mult = std::exp(complexd(0.0, pi * static_cast<double>(numer * p) / static_cast<double>(b)));
        for (std::size_t j = 0; j < n; ++j) {
            result.curve.samples[static_cast<std::size_t>(p) * n + j] = {mult * base[j].z1, mult * base[j].z2};
        }
    }
    return result;
}

Vec3 heisenberg_point(const ComplexPair& p) {
    const complexd den = 1.0 + p.z1;
    if (std::abs(den) < 1e-6) throw numerical_error("heisenberg projection: sample at the pole");
    const complexd horizontal = complexd(0.0, std::sqrt(2.0)) * p.z2 / den;
    const complexd vertical = complexd(0.0, 1.0) * (1.0 - p.z1) / den;
    return {horizontal.real(), horizontal.imag(), vertical.real()};
}

std::vector<Vec3> heisenberg_projection(const SampledCurve& curve) {
    std::vector<Vec3> out(curve.size());
    for (std::size_t j = 0; j < curve.size(); ++j) out[j] = heisenberg_point(curve.samples[j]);
    return out;
}

SampledCurve torus_knot_curve(int m, int n, std::size_t sample_count) {
    if (m < 1 || n < 1) throw validation_error("torus_knot_curve: indices must be positive");
    if (std::gcd(m, n) != 1) throw validation_error("torus_knot_curve: indices must be coprime");
    if (sample_count < 8) throw validation_error("torus_knot_curve: too few samples");
    const double root_mn = std::sqrt(static_cast<double>(m) * static_cast<double>(n));
    const double amp = 1.0 / std::sqrt(static_cast<double>(m + n));
    SampledCurve curve;
    curve.period_L = 2.0 * pi * root_mn;
    curve.samples.resize(sample_count);
    for (std::size_t j = 0; j < sample_count; ++j) {
        const double s = curve.period_L * static_cast<double>(j) / static_cast<double>(sample_count);
        curve.samples[j] = {amp * std::sqrt(static_cast<double>(m)) *
                                std::exp(complexd(0.0, -static_cast<double>(n) * s / root_mn)),
                            amp * std::sqrt(static_cast<double>(n)) *
                                std::exp(complexd(0.0, static_cast<double>(m) * s / root_mn))};
    }
    return curve;
}

}  // namespace phs3
