#include "phs3/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "phs3/ellip.hpp"
#include "phs3/fourier.hpp"

namespace phs3 {

namespace {

std::string fmt(double x) { return std::to_string(x); }

// P(x) = x^4/4 + a x^2 + b x + c
double quartic_value(double x, double a, double b, double c) {
    return 0.25 * x * x * x * x + a * x * x + b * x + c;
}

// k'' = -(k^3/2 + a k + b/2)
double accel(double k, double a, double b) { return -(0.5 * k * k * k + a * k + 0.5 * b); }

double beta_sq(const Modulus& mod) { return mod.e1 * mod.e1 + mod.e3 * mod.e3; }

// branch discriminant for the regularized quantum; equals (|beta|^2 - 16)/4
// on the symmetric family
double branch_discriminant(double e2, double a) { return 0.5 * e2 * e2 + a - 4.0; }

std::int64_t gcd64(std::int64_t x, std::int64_t y) { return std::gcd(x, y); }

struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;
    void reduce() {
        if (den < 0) { num = -num; den = -den; }
        std::int64_t g = gcd64(std::llabs(num), den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }
};

Fraction make_fraction(std::int64_t n, std::int64_t d) {
    Fraction f{n, d};
    f.reduce();
    return f;
}

complexd unit_phase_of(const Fraction& f) {
    // exp(2 pi i num/den) with the argument reduced exactly first
    std::int64_t r = f.num % f.den;
    if (r < 0) r += f.den;
    double ang = 2.0 * pi * static_cast<double>(r) / static_cast<double>(f.den);
    return complexd(std::cos(ang), std::sin(ang));
}

}  // namespace

Modulus Modulus::dnoidal(double e1, double e2, double e3) {
    Modulus m{ModulusCase::dnoidal, e1, e2, e3};
    m.validate();
    return m;
}

Modulus Modulus::cnoidal(double e1, double e2, double e3) {
    Modulus m{ModulusCase::cnoidal, e1, e2, e3};
    m.validate();
    return m;
}

Modulus Modulus::symmetric(double e1, double e3) {
    Modulus m{ModulusCase::symmetric_cnoidal, e1, -e1, e3};
    m.validate();
    return m;
}

void Modulus::validate() const {
    switch (kind) {
        case ModulusCase::dnoidal: {
            double e4 = -(e1 + e2 + e3);
            if (!(e1 > e2 && e2 > e3 && e3 > e4))
                throw validation_error("dnoidal roots must satisfy e1 > e2 > e3 > -(e1+e2+e3)");
            break;
        }
        case ModulusCase::cnoidal:
            if (!(e1 > e2)) throw validation_error("cnoidal roots must satisfy e1 > e2");
            if (!(e3 > 0.0)) throw validation_error("cnoidal imaginary part e3 must be positive");
            break;
        case ModulusCase::symmetric_cnoidal:
            if (!(e1 > 0.0 && e3 > 0.0))
                throw validation_error("symmetric moduli need e1 > 0 and e3 > 0");
            if (e2 != -e1) throw validation_error("symmetric moduli fix e2 = -e1");
            break;
    }
}

QuarticData quartic_from_modulus(const Modulus& mod) {
    mod.validate();
    QuarticData q;
    switch (mod.kind) {
        case ModulusCase::dnoidal: {
            double e1 = mod.e1, e2 = mod.e2, e3 = mod.e3, e4 = -(e1 + e2 + e3);
            double s2 = e1 * e2 + e1 * e3 + e1 * e4 + e2 * e3 + e2 * e4 + e3 * e4;
            double s3 = e1 * e2 * e3 + e1 * e2 * e4 + e1 * e3 * e4 + e2 * e3 * e4;
            double s4 = e1 * e2 * e3 * e4;
            q.a = s2 / 4.0;
            q.b = -s3 / 4.0;
            q.c = s4 / 4.0;
            q.m = ((e1 - e2) * (e3 - e4)) / ((e1 - e3) * (e2 - e4));
            q.arg_scale = std::sqrt((e1 - e3) * (e2 - e4)) / 4.0;
            break;
        }
        case ModulusCase::cnoidal:
        case ModulusCase::symmetric_cnoidal: {
            double e1 = mod.e1, e2 = mod.e2, e3 = mod.e3;
            double p = e1 + e2, prod = e1 * e2, w = 0.25 * p * p + e3 * e3;
            q.a = (w - p * p + prod) / 4.0;
            q.b = p * (prod - w) / 4.0;
            q.c = prod * w / 4.0;
            double A = std::sqrt(sq(0.5 * (3.0 * e1 + e2)) + e3 * e3);
            double B = std::sqrt(sq(0.5 * (e1 + 3.0 * e2)) + e3 * e3);
            q.m = (sq(e1 - e2) - sq(A - B)) / (4.0 * A * B);
            q.arg_scale = std::sqrt(A * B) / 2.0;
            break;
        }
    }
    q.lambda = 0.25 * std::sqrt(16.0 * sq(q.a - 4.0) + q.b * q.b - 16.0 * q.c);
    if (!(q.lambda > 0.0)) throw validation_error("momentum eigenvalue must be positive");
    if (!(q.m > 1e-12 && q.m < 1.0 - 1e-12))
        throw validation_error("degenerate quartic: elliptic parameter m = " + fmt(q.m));
    double periods = (mod.kind == ModulusCase::dnoidal) ? 2.0 : 4.0;
    q.omega = periods * complete_K(q.m) / q.arg_scale;
    return q;
}

CurvatureProfile curvature_profile(const Modulus& mod, std::size_t samples) {
    if (samples < 16) throw validation_error("curvature profile needs at least 16 samples");
    QuarticData q = quartic_from_modulus(mod);
    CurvatureProfile out;
    out.period_L = q.omega;
    out.values.resize(samples);

    if (mod.kind == ModulusCase::symmetric_cnoidal) {
        double h = q.omega / static_cast<double>(samples);
        for (std::size_t j = 0; j < samples; ++j)
            out.values[j] = -mod.e1 * jacobi_cn_dn_sn(q.arg_scale * (h * static_cast<double>(j)), q.m).cn;
        return out;
    }

    // planar ODE from the turning point, first integral as drift monitor
    double kmax = std::max(std::fabs(mod.e1), std::fabs(mod.e2));
    double scale = std::max(1.0, 0.25 * kmax * kmax * kmax * kmax +
                                     std::fabs(q.a) * kmax * kmax + std::fabs(q.b) * kmax +
                                     std::fabs(q.c));
    std::size_t per = (16384 + samples - 1) / samples;
    for (int attempt = 0; attempt < 3; ++attempt) {
        double h = q.omega / static_cast<double>(samples * per);
        double k = mod.e2, v = 0.0, drift = 0.0;
        bool ok = true;
        for (std::size_t j = 0; j < samples && ok; ++j) {
            out.values[j] = k;
            for (std::size_t i = 0; i < per; ++i) {
                double k1 = v, v1 = accel(k, q.a, q.b);
                double k2 = v + 0.5 * h * v1, v2 = accel(k + 0.5 * h * k1, q.a, q.b);
                double k3 = v + 0.5 * h * v2, v3 = accel(k + 0.5 * h * k2, q.a, q.b);
                double k4 = v + h * v3, v4 = accel(k + h * k3, q.a, q.b);
                k += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                v += h / 6.0 * (v1 + 2.0 * v2 + 2.0 * v3 + v4);
                drift = std::max(drift, std::fabs(v * v + quartic_value(k, q.a, q.b, q.c)));
                if (drift > 1e-9 * scale) { ok = false; break; }
            }
        }
        if (ok) {
            // landing back on the turning point certifies the wavelength data
            if (std::fabs(k - mod.e2) > 1e-7 * std::max(1.0, std::fabs(mod.e2)) ||
                std::fabs(v) > 1e-6 * std::sqrt(scale))
                throw numerical_error("profile did not return to the turning point: k(omega) = " +
                                      fmt(k) + ", k'(omega) = " + fmt(v));
            return out;
        }
        per *= 4;
    }
    throw numerical_error("first-integral drift of the curvature profile exceeded 1e-9");
}

double MomentumField::eigenvalue_drift() const {
    double worst = 0.0;
    for (std::size_t j = 0; j < h11.size(); ++j)
        worst = std::max(worst, std::fabs(std::sqrt(h11[j] * h11[j] + std::norm(h12[j])) - lambda));
    return worst;
}

double MomentumField::conservation_residual() const {
    std::vector<double> k(h11.size());
    for (std::size_t j = 0; j < h11.size(); ++j) k[j] = 0.5 * (h11[j] - quarter_b);
    std::vector<double> dh11 = spectral_derivative(h11, period_L, 1);
    std::vector<complexd> dh12 = spectral_derivative(h12, period_L, 1);
    double worst = 0.0;
    for (std::size_t j = 0; j < h11.size(); ++j) {
        double r11 = dh11[j] - 2.0 * h12[j].real();
        complexd r12 = dh12[j] + 2.0 * h11[j] - complexd(0.0, k[j]) * h12[j];
        worst = std::max({worst, std::fabs(r11), std::abs(r12)});
    }
    return worst;
}

MomentumField momentum_field(const Modulus& mod, const CurvatureProfile& k) {
    QuarticData q = quartic_from_modulus(mod);
    if (k.values.empty()) throw validation_error("momentum field needs a sampled profile");
    MomentumField f;
    f.lambda = q.lambda;
    f.period_L = k.period_L;
    f.quarter_b = 0.25 * q.b;
    std::vector<double> kp = spectral_derivative(k.values, k.period_L, 1);
    f.h11.resize(k.values.size());
    f.h12.resize(k.values.size());
    for (std::size_t j = 0; j < k.values.size(); ++j) {
        f.h11[j] = 2.0 * k.values[j] + 0.25 * q.b;
        f.h12[j] = complexd(kp[j], 0.5 * k.values[j] * k.values[j] + q.a - 4.0);
    }
    if (f.eigenvalue_drift() > 1e-7)
        throw numerical_error("momentum eigenvalues drift beyond 1e-7 along the profile");
    return f;
}

bool is_exceptional(const Modulus& mod) {
    QuarticData q = quartic_from_modulus(mod);
    return std::fabs(8.0 * mod.e2 + q.b + 4.0 * q.lambda) <= 1e-3 * (1.0 + 4.0 * q.lambda);
}

QuadratureFrame reconstruct_frame_by_quadrature(const Modulus& mod, std::size_t samples) {
    QuarticData q = quartic_from_modulus(mod);
    CurvatureProfile prof = curvature_profile(mod, samples);
    MomentumField H = momentum_field(mod, prof);

    QuadratureFrame out;
    out.period_L = prof.period_L;
    out.exceptional = is_exceptional(mod);
    out.v_minus.resize(samples);
    out.v_plus.resize(samples);
    for (std::size_t j = 0; j < samples; ++j) {
        out.v_minus[j] = ComplexPair{H.h12[j], complexd(-H.h11[j] - q.lambda, 0.0)};
        out.v_plus[j] = ComplexPair{complexd(H.h11[j] + q.lambda, 0.0), std::conj(H.h12[j])};
    }

    if (out.exceptional) {
        // V fields vanish at the turning points; transport the frame directly.
        // H(0) = diag(-lambda, lambda) there, so Gamma(0) = diag(-i, i) already
        // diagonalizes the momentum and has theta(0) = 0.
        Frame start;
        start.gamma = ComplexPair{complexd(0.0, -1.0), complexd(0.0, 0.0)};
        start.gamma_s = ComplexPair{complexd(0.0, 0.0), complexd(0.0, 1.0)};
        out.frames = frenet_frame_field(prof, start);
        return out;
    }

    std::vector<double> lam_term(samples), i1(samples), i2(samples);
    for (std::size_t j = 0; j < samples; ++j) {
        double denom = 8.0 * prof.values[j] + 4.0 * q.lambda + q.b;
        double norm_sq = 0.5 * q.lambda * denom;  // |V|^2 for both eigenvectors
        if (norm_sq < 1e-16)
            throw numerical_error("eigenvector field degenerates away from the exceptional set");
        lam_term[j] = (16.0 * (4.0 - q.a) + (q.b + 4.0 * q.lambda) * prof.values[j]) / (4.0 * denom);
        i1[j] = 0.75 * prof.values[j] + lam_term[j];
        i2[j] = 0.25 * prof.values[j] - lam_term[j];
    }
    std::vector<double> ph1 = spectral_antiderivative(i1, prof.period_L);
    std::vector<double> ph2 = spectral_antiderivative(i2, prof.period_L);

    out.frames.resize(samples);
    for (std::size_t j = 0; j < samples; ++j) {
        double denom = 8.0 * prof.values[j] + 4.0 * q.lambda + q.b;
        double det = 0.5 * q.lambda * denom;  // det V = |V^1|^2 = |V^2|^2
        double pref = std::sqrt(0.5 * q.lambda) * std::sqrt(denom);
        complexd d1 = std::polar(pref / det, ph1[j]);
        complexd d2 = std::polar(pref / det, ph2[j]);
        complexd h12 = H.h12[j];
        double hl = H.h11[j] + q.lambda;
        // rows of V^-1 scaled by the diagonal phases
        Frame F;
        F.gamma = ComplexPair{d1 * std::conj(h12), d2 * hl};
        F.gamma_s = ComplexPair{-d1 * hl, d2 * h12};
        out.frames[j] = F;
    }
    return out;
}

double Mat2::unitarity_defect() const {
    // entries of M* M - Id
    complexd g11 = std::conj(a11) * a11 + std::conj(a21) * a21 - 1.0;
    complexd g12 = std::conj(a11) * a12 + std::conj(a21) * a22;
    complexd g22 = std::conj(a12) * a12 + std::conj(a22) * a22 - 1.0;
    return std::max({std::abs(g11), std::abs(g12), std::abs(g22)});
}

double phi2_symmetric_closed_form(double e1, double e3) {
    if (!(e1 >= 0.0) || !(e3 > 0.0))
        throw validation_error("the closed form needs e1 >= 0 and e3 > 0");
    double b2 = e1 * e1 + e3 * e3;
    if (std::fabs(b2 - 16.0) < 1e-8)
        return (e1 / (4.0 * pi)) * complete_K(e1 * e1 / 16.0);
    // remains finite down to the axis, where the full modulus degenerates
    double lambda = 0.25 * std::sqrt(sq(b2 - 16.0) + 64.0 * e1 * e1);
    double m = e1 * e1 / b2;
    double characteristic = -64.0 * e1 * e1 / sq(b2 - 16.0);
    double val = complete_K(m) - ((b2 + 16.0) / (b2 - 16.0)) * complete_Pi(characteristic, m);
    return lambda / (2.0 * pi * std::sqrt(b2)) * val;
}

double phi2_symmetric_regularized(double e1, double e3) {
    double b2 = e1 * e1 + e3 * e3;
    double shift = (std::fabs(b2 - 16.0) < 1e-8) ? 0.5 : (b2 > 16.0 ? 1.0 : 0.0);
    return phi2_symmetric_closed_form(e1, e3) + shift;
}

ClosureReport closure_quanta(const Modulus& mod, const RationalDetect& detect_template,
                             std::size_t quad_samples) {
    QuarticData q = quartic_from_modulus(mod);
    ClosureReport rep;
    rep.lambda = q.lambda;
    rep.omega = q.omega;
    rep.exceptional = is_exceptional(mod);

    CurvatureProfile prof = curvature_profile(mod, quad_samples);
    rep.phi1 = periodic_mean(prof.values) * q.omega / (2.0 * pi);

    if (mod.kind == ModulusCase::symmetric_cnoidal) {
        rep.phi2 = phi2_symmetric_closed_form(mod.e1, mod.e3);
        rep.phi2_regularized = phi2_symmetric_regularized(mod.e1, mod.e3);
    } else {
        std::vector<double> lam_term(quad_samples);
        for (std::size_t j = 0; j < quad_samples; ++j) {
            double denom = 8.0 * prof.values[j] + 4.0 * q.lambda + q.b;
            lam_term[j] =
                (16.0 * (4.0 - q.a) + (q.b + 4.0 * q.lambda) * prof.values[j]) / (4.0 * denom);
        }
        rep.phi2 = periodic_mean(lam_term) * q.omega / (2.0 * pi);
        // the half shift lives on the measure-zero locus itself, which only the
        // symmetric branch can hit exactly
        rep.phi2_regularized = rep.phi2 + (branch_discriminant(mod.e2, q.a) > 0.0 ? 1.0 : 0.0);
    }

    RationalDetect d1 = detect_template, d2 = detect_template;
    d1.value = rep.phi1;
    d2.value = rep.phi2_regularized;
    auto r1 = detect_rational(d1);
    auto r2 = detect_rational(d2);
    rep.closed = r1.has_value() && r2.has_value();

    if (rep.closed) {
        rep.rational_pair = std::make_pair(*r1, *r2);
        // per-wavelength holonomy exponents 3 phi1/4 + phi2r and phi1/4 - phi2r
        Fraction x1 = make_fraction(3 * r1->first * r2->second + 4 * r2->first * r1->second,
                                    4 * r1->second * r2->second);
        Fraction x2 = make_fraction(r1->first * r2->second - 4 * r2->first * r1->second,
                                    4 * r1->second * r2->second);
        rep.monodromy = Mat2{unit_phase_of(x1), 0.0, 0.0, unit_phase_of(x2)};
        std::int64_t order = std::lcm(x1.den, x2.den);
        if (order <= 128) rep.wave_number = static_cast<int>(order);
    } else {
        double x1 = 0.75 * rep.phi1 + rep.phi2_regularized;
        double x2 = 0.25 * rep.phi1 - rep.phi2_regularized;
        rep.monodromy = Mat2{std::polar(1.0, 2.0 * pi * x1), 0.0, 0.0, std::polar(1.0, 2.0 * pi * x2)};
    }
    return rep;
}

PhiLoop standard_phi_loop(const Modulus& mod, std::size_t samples_per_wavelength,
                          RationalDetect detect_template) {
    if (mod.kind != ModulusCase::symmetric_cnoidal)
        throw validation_error("standard loops are defined for symmetric moduli");
    PhiLoop loop;
    loop.report = closure_quanta(mod, detect_template,
                                 std::max<std::size_t>(samples_per_wavelength, 2048));
    if (!loop.report.closed)
        throw validation_error("loop does not close: quanta are not rational under the detector");
    if (!loop.report.wave_number)
        throw validation_error("loop does not close within the monodromy order bound");
    loop.copies = static_cast<std::size_t>(*loop.report.wave_number);
    loop.monodromy = loop.report.monodromy;

    QuadratureFrame qf = reconstruct_frame_by_quadrature(mod, samples_per_wavelength);
    double sigma = (qf.exceptional || beta_sq(mod) > 16.0) ? 1.0 : -1.0;

    // exact powers of the snapped per-wavelength holonomy
    auto& pr = *loop.report.rational_pair;
    Fraction x1 = make_fraction(3 * pr.first.first * pr.second.second +
                                    4 * pr.second.first * pr.first.second,
                                4 * pr.first.second * pr.second.second);
    Fraction x2 = make_fraction(pr.first.first * pr.second.second -
                                    4 * pr.second.first * pr.first.second,
                                4 * pr.first.second * pr.second.second);

    loop.curve.period_L = static_cast<double>(loop.copies) * qf.period_L;
    loop.curve.samples.resize(loop.copies * samples_per_wavelength);
    for (std::size_t copy = 0; copy < loop.copies; ++copy) {
        auto cf = static_cast<std::int64_t>(copy);
        complexd m1 = unit_phase_of(make_fraction(x1.num * cf, x1.den));
        complexd m2 = unit_phase_of(make_fraction(x2.num * cf, x2.den));
        for (std::size_t j = 0; j < samples_per_wavelength; ++j) {
            const ComplexPair& g = qf.frames[j].gamma;
            loop.curve.samples[copy * samples_per_wavelength + j] =
                ComplexPair{sigma * m1 * g.z1, sigma * m2 * g.z2};
        }
    }
    return loop;
}

SampledCurve time_evolution(const SampledCurve& loop, const Modulus& mod, double t) {
    QuarticData q = quartic_from_modulus(mod);
    if (loop.samples.empty()) throw validation_error("time evolution needs a sampled loop");
    std::size_t n = loop.samples.size();
    std::vector<complexd> z1(n), z2(n);
    for (std::size_t j = 0; j < n; ++j) {
        z1[j] = loop.samples[j].z1;
        z2[j] = loop.samples[j].z2;
    }
    // translation by the wave speed a, then the diagonal rotation
    double shift = -q.a * t;
    z1 = spectral_shift(z1, loop.period_L, shift);
    z2 = spectral_shift(z2, loop.period_L, shift);
    complexd r1 = std::polar(1.0, (-q.lambda - 0.25 * q.b) * t);
    complexd r2 = std::polar(1.0, (q.lambda - 0.25 * q.b) * t);
    SampledCurve out;
    out.period_L = loop.period_L;
    out.samples.resize(n);
    for (std::size_t j = 0; j < n; ++j) out.samples[j] = ComplexPair{r1 * z1[j], r2 * z2[j]};
    return out;
}

double time_periodicity_function(const Modulus& mod) {
    if (mod.kind != ModulusCase::symmetric_cnoidal)
        throw validation_error("the wave ratio is defined for symmetric moduli");
    QuarticData q = quartic_from_modulus(mod);
    double beta = std::sqrt(beta_sq(mod));
    return pi * (mod.e3 * mod.e3 - mod.e1 * mod.e1) * beta / (16.0 * q.lambda * complete_K(q.m));
}

namespace {

struct PlanePoint {
    double e1 = 0.0;
    double e3 = 0.0;
};

double scan_level(const PlanePoint& p, double q) {
    // the quantum is even in e1, so differencing across the axis may reflect
    return phi2_symmetric_regularized(std::max(std::fabs(p.e1), 1e-12), p.e3) - q;
}

PlanePoint scan_gradient(const PlanePoint& p, double q) {
    const double h = 1e-6;
    double ge1 = (scan_level({p.e1 + h, p.e3}, q) - scan_level({p.e1 - h, p.e3}, q)) / (2.0 * h);
    double ge3 = (scan_level({p.e1, p.e3 + h}, q) - scan_level({p.e1, p.e3 - h}, q)) / (2.0 * h);
    return {ge1, ge3};
}

bool scan_correct(PlanePoint& p, double q, double tol) {
    for (int it = 0; it < 16; ++it) {
        double f = scan_level(p, q);
        if (std::fabs(f) <= tol) return true;
        PlanePoint g = scan_gradient(p, q);
        double gsq = g.e1 * g.e1 + g.e3 * g.e3;
        if (!(gsq > 1e-20)) return false;
        p.e1 -= f * g.e1 / gsq;
        p.e3 -= f * g.e3 / gsq;
        if (!(p.e1 > 1e-7)) p.e1 = 1e-7;
        if (!(p.e3 > 1e-7)) return false;
    }
    return false;
}

// 1D solve for the axis limit: e3 with level(margin, e3) = 0 near guess
double scan_axis_solve(double q, double margin, double guess, double tol) {
    double e3 = guess;
    for (int it = 0; it < 60; ++it) {
        double f = scan_level({margin, e3}, q);
        if (std::fabs(f) <= tol) return e3;
        const double h = 1e-7 * std::max(1.0, std::fabs(e3));
        double fp = (scan_level({margin, e3 + h}, q) - scan_level({margin, e3 - h}, q)) / (2.0 * h);
        if (!(std::fabs(fp) > 1e-20)) break;
        e3 -= f / fp;
        if (!(e3 > 1e-7)) e3 = 1e-7;
    }
    throw numerical_error("axis solve for the level set failed near e3 = " + fmt(guess));
}

ScanPoint scan_point_data(const PlanePoint& p) {
    Modulus mod = Modulus::symmetric(p.e1, p.e3);
    QuarticData qd = quartic_from_modulus(mod);
    ScanPoint out;
    out.e1 = p.e1;
    out.e3 = p.e3;
    out.phi2_regularized = phi2_symmetric_regularized(p.e1, p.e3);
    out.lambda = qd.lambda;
    out.omega = qd.omega;
    out.wave_ratio = time_periodicity_function(mod);
    return out;
}

}  // namespace

ScanResult scan_modular_curve(double q, const ScanOptions& opts) {
    if (!(q > 0.5)) throw validation_error("the regularized quantum only takes values above 1/2");
    ScanResult res;
    PlanePoint x{opts.axis_margin, scan_axis_solve(q, opts.axis_margin, 2.0 / q, opts.newton_tol)};
    res.points.push_back(scan_point_data(x));
    res.axis_limits.push_back({x.e1, x.e3});

    PlanePoint tangent{1.0, 0.0};
    double step = opts.initial_step;
    int fails = 0;
    while (res.points.size() < opts.max_points) {
        PlanePoint g = scan_gradient(x, q);
        double gn = std::hypot(g.e1, g.e3);
        if (!(gn > 1e-20)) throw numerical_error("level-set gradient vanished during the scan");
        PlanePoint t{-g.e3 / gn, g.e1 / gn};
        if (t.e1 * tangent.e1 + t.e3 * tangent.e3 < 0.0) { t.e1 = -t.e1; t.e3 = -t.e3; }
        PlanePoint cand{x.e1 + step * t.e1, x.e3 + step * t.e3};
        if (!scan_correct(cand, q, opts.newton_tol)) {
            step *= 0.5;
            if (++fails >= 5) throw numerical_error("scan corrector stalled for 5 predictor steps");
            continue;
        }
        fails = 0;

        // exceptional crossing between x and cand
        double s0 = beta_sq(Modulus::symmetric(x.e1, x.e3)) - 16.0;
        double s1 = beta_sq(Modulus::symmetric(cand.e1, cand.e3)) - 16.0;
        if (!res.exceptional_crossing && s0 * s1 < 0.0) {
            PlanePoint lo = x, hi = cand;
            for (int it = 0; it < 60; ++it) {
                PlanePoint mid{0.5 * (lo.e1 + hi.e1), 0.5 * (lo.e3 + hi.e3)};
                if (!scan_correct(mid, q, opts.newton_tol)) break;
                double sm = mid.e1 * mid.e1 + mid.e3 * mid.e3 - 16.0;
                if (sm * s0 < 0.0) hi = mid; else lo = mid;
            }
            res.exceptional_crossing = {{0.5 * (lo.e1 + hi.e1), 0.5 * (lo.e3 + hi.e3)}};
        }

        if (cand.e1 <= opts.axis_margin && t.e1 < 0.0 && res.points.size() > 10) {
            double e3 = scan_axis_solve(q, opts.axis_margin, cand.e3, opts.newton_tol);
            res.points.push_back(scan_point_data({opts.axis_margin, e3}));
            res.axis_limits.push_back({opts.axis_margin, e3});
            return res;
        }
        x = cand;
        tangent = t;
        res.points.push_back(scan_point_data(x));
        if (x.e1 >= opts.e1_limit) {
            res.reached_e1_limit = true;
            return res;
        }
        step = std::min(opts.initial_step, step * 2.0);
    }
    return res;
}

}  // namespace phs3
