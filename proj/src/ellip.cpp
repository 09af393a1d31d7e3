#include "phs3/ellip.hpp"

#include <algorithm>
#include <cmath>

namespace phs3 {

namespace {

void check_parameter(double m) {
    if (!(m >= 0.0) || !(m < 1.0))
        throw validation_error("elliptic parameter m must satisfy 0 <= m < 1, got m = " +
                               std::to_string(m));
}

// Carlson degenerate symmetric integral R_C(x, y), x >= 0, y > 0
double carlson_RC(double x, double y) {
    constexpr double ERRTOL = 6.0e-4;  // error ~ ERRTOL^6
    double mu, s;
    do {
        double lam = 2.0 * std::sqrt(x) * std::sqrt(y) + y;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        mu = (x + 2.0 * y) / 3.0;
        s = (y - mu) / mu;
    } while (std::fabs(s) > ERRTOL);
    double w = s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)));
    return (1.0 + w) / std::sqrt(mu);
}

// Carlson symmetric integral of the first kind R_F(x, y, z)
double carlson_RF(double x, double y, double z) {
    constexpr double ERRTOL = 2.5e-3;
    double ave, dx, dy, dz;
    do {
        double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        double lam = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        ave = (x + y + z) / 3.0;
        dx = (ave - x) / ave;
        dy = (ave - y) / ave;
        dz = (ave - z) / ave;
    } while (std::fabs(dx) > ERRTOL || std::fabs(dy) > ERRTOL || std::fabs(dz) > ERRTOL);
    double e2 = dx * dy - dz * dz;
    double e3 = dx * dy * dz;
    return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / std::sqrt(ave);
}

// Carlson symmetric integral of the third kind R_J(x, y, z, p), p > 0
double carlson_RJ(double x, double y, double z, double p) {
    constexpr double ERRTOL = 1.5e-3;
    constexpr double C1 = 3.0 / 14.0, C2 = 1.0 / 3.0, C3 = 3.0 / 22.0, C4 = 3.0 / 26.0;
    constexpr double C5 = 0.75 * C3, C6 = 1.5 * C4, C7 = 0.5 * C2, C8 = C3 + C3;
    double sum = 0.0, fac = 1.0;
    double ave, dx, dy, dz, dp;
    do {
        double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        double lam = sx * (sy + sz) + sy * sz;
        double alpha = sq(p * (sx + sy + sz) + sx * sy * sz);
        double beta = p * sq(p + lam);
        sum += fac * carlson_RC(alpha, beta);
        fac *= 0.25;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        p = 0.25 * (p + lam);
        ave = 0.2 * (x + y + z + 2.0 * p);
        dx = (ave - x) / ave;
        dy = (ave - y) / ave;
        dz = (ave - z) / ave;
        dp = (ave - p) / ave;
    } while (std::fabs(dx) > ERRTOL || std::fabs(dy) > ERRTOL || std::fabs(dz) > ERRTOL ||
             std::fabs(dp) > ERRTOL);
    double ea = dx * (dy + dz) + dy * dz;
    double eb = dx * dy * dz;
    double ec = dp * dp;
    double ed = ea - 3.0 * ec;
    double ee = eb + 2.0 * dp * (ea - ec);
    double series = 1.0 + ed * (-C1 + C5 * ed - C6 * ee) + eb * (C7 + dp * (-C8 + dp * C4)) +
                    dp * ea * (C2 - dp * C3) - C2 * dp * ec;
    return 3.0 * sum + fac * series / (ave * std::sqrt(ave));
}

}  // namespace

double complete_K(double m) {
    check_parameter(m);
    double a = 1.0, b = std::sqrt(1.0 - m);
    for (int it = 0; it < 40 && std::fabs(a - b) > 2e-16 * a; ++it) {
        double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return pi / (2.0 * a);
}

double complete_Pi(double n, double m) {
    check_parameter(m);
    if (!(n < 1.0))
        throw validation_error("elliptic characteristic must satisfy n < 1, got n = " +
                               std::to_string(n));
    double rf = carlson_RF(0.0, 1.0 - m, 1.0);
    if (n == 0.0) return rf;
    return rf + (n / 3.0) * carlson_RJ(0.0, 1.0 - m, 1.0, 1.0 - n);
}

JacobiTriple jacobi_cn_dn_sn(double u, double m) {
    check_parameter(m);
    if (m == 0.0) return {std::cos(u), 1.0, std::sin(u)};

    // reduce modulo the full period 4K in extended precision
    const double K = complete_K(m);
    const long double period = 4.0L * static_cast<long double>(K);
    long double ur = static_cast<long double>(u);
    ur -= period * floorl(ur / period + 0.5L);
    const double ured = static_cast<double>(ur);

    // descending AGM ladder (c_i -> 0 quadratically)
    constexpr int MAXIT = 32;
    double a[MAXIT], c[MAXIT];
    double an = 1.0, bn = std::sqrt(1.0 - m);
    int N = 0;
    for (;; ++N) {
        a[N] = an;
        c[N] = 0.5 * (an - bn);
        if (std::fabs(c[N]) < 1e-17 * an || N + 1 == MAXIT) break;
        double next_a = 0.5 * (an + bn);
        bn = std::sqrt(an * bn);
        an = next_a;
    }
    // amplitude back-recursion; the principal arcsin branch is correct because
    // |2 phi_{i-1} - phi_i| stays below pi/2 along the continuous branch
    double phi = std::ldexp(a[N] * ured, N);
    for (int i = N; i > 0; --i) {
        double s = std::clamp(c[i - 1] / a[i] * std::sin(phi), -1.0, 1.0);
        phi = 0.5 * (phi + std::asin(s));
    }
    const double sn = std::sin(phi);
    const double cn = std::cos(phi);
    const double dn = std::sqrt(std::fmax(1.0 - m * sn * sn, 0.0));
    return {cn, dn, sn};
}

}  // namespace phs3
