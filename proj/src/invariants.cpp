#include "phs3/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "phs3/fourier.hpp"

namespace phs3 {

namespace {

struct crossing_degeneracy : numerical_error {
    using numerical_error::numerical_error;
};

double cross2(const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return a[0] * b[1] - a[1] * b[0];
}

// crossing-sign sum of the closed polyline (x, y) with depth z deciding the
// over strand; throws crossing_degeneracy when an intersection is too close
// to a node or the strands are near-parallel
long crossing_sum(const std::vector<Vec3>& pts) {
    const std::size_t n = pts.size();
    long total = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t j1 = (j + 1) % n;
        const std::array<double, 2> p{pts[j][0], pts[j][1]};
        const std::array<double, 2> u{pts[j1][0] - pts[j][0], pts[j1][1] - pts[j][1]};
        for (std::size_t l = j + 2; l < n; ++l) {
            const std::size_t l1 = (l + 1) % n;
            if (l1 == j) continue;  // adjacent segments share a node
            const std::array<double, 2> q{pts[l][0], pts[l][1]};
            const std::array<double, 2> v{pts[l1][0] - pts[l][0], pts[l1][1] - pts[l][1]};
            const std::array<double, 2> w{q[0] - p[0], q[1] - p[1]};
            const double den = cross2(u, v);
            const double ulen = std::hypot(u[0], u[1]);
            const double vlen = std::hypot(v[0], v[1]);
            if (ulen == 0.0 || vlen == 0.0) throw validation_error("crossing sum: degenerate segment");
            const double t = cross2(w, v) / den;
            const double s = cross2(w, u) / den;
            if (std::fabs(den) < 1e-3 * ulen * vlen) {
                // parallel or a genuine near-tangency; flag only if the
                // segments come close to touching
                if (std::isfinite(t) && std::isfinite(s) && t > -0.5 && t < 1.5 && s > -0.5 && s < 1.5)
                    throw crossing_degeneracy("crossing sum: near-tangential intersection");
                continue;
            }
            if (t <= 0.0 || t >= 1.0 || s <= 0.0 || s >= 1.0) {
                // near-node intersections are sampling artifacts: retry shifted
                const double margin = 1e-7;
                if (t > -margin && t < 1.0 + margin && s > -margin && s < 1.0 + margin &&
                    (std::fabs(t) < margin || std::fabs(t - 1.0) < margin || std::fabs(s) < margin ||
                     std::fabs(s - 1.0) < margin))
                    throw crossing_degeneracy("crossing sum: intersection at a node");
                continue;
            }
            if (std::min({t, 1.0 - t, s, 1.0 - s}) < 1e-7)
                throw crossing_degeneracy("crossing sum: intersection at a node");
            const double z_j = pts[j][2] + t * (pts[j1][2] - pts[j][2]);
            const double z_l = pts[l][2] + s * (pts[l1][2] - pts[l][2]);
            if (std::fabs(z_j - z_l) < 1e-9) throw crossing_degeneracy("crossing sum: strands at equal depth");
            const bool first_over = z_j > z_l;
            const auto& over = first_over ? u : v;
            const auto& under = first_over ? v : u;
            const double orient = cross2(over, under);
            total += orient > 0.0 ? 1 : -1;
        }
    }
    return total;
}

SampledCurve shifted_curve(const SampledCurve& curve, double shift) {
    const std::size_t n = curve.size();
    std::vector<complexd> z1(n), z2(n);
    for (std::size_t j = 0; j < n; ++j) {
        z1[j] = curve.samples[j].z1;
        z2[j] = curve.samples[j].z2;
    }
    z1 = spectral_shift(z1, curve.period_L, shift);
    z2 = spectral_shift(z2, curve.period_L, shift);
    SampledCurve out;
    out.period_L = curve.period_L;
    out.samples.resize(n);
    for (std::size_t j = 0; j < n; ++j) out.samples[j] = {z1[j], z2[j]};
    return out;
}

}  // namespace

std::optional<std::pair<std::int64_t, std::int64_t>> detect_rational(const RationalDetect& cfg) {
    if (cfg.max_denominator < 1) throw validation_error("detect_rational: denominator bound must be positive");
    if (!(cfg.tolerance >= 0.0)) throw validation_error("detect_rational: tolerance must be nonnegative");
    if (!std::isfinite(cfg.value)) return std::nullopt;
    const double x = cfg.value;
    std::int64_t h_prev = 1, k_prev = 0;
    std::int64_t h = static_cast<std::int64_t>(std::floor(x)), k = 1;
    double rem = x - std::floor(x);
    for (int it = 0; it < 64 && rem > 1e-13; ++it) {
        const double inv = 1.0 / rem;
        const double af = std::floor(inv);
        if (af > 9e15) break;
        const std::int64_t a = static_cast<std::int64_t>(af);
        const std::int64_t h_next = a * h + h_prev;
        const std::int64_t k_next = a * k + k_prev;
        if (k_next > cfg.max_denominator) break;
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
        rem = inv - af;
    }
    const double err = std::fabs(x - static_cast<double>(h) / static_cast<double>(k));
    if (err <= cfg.tolerance) return std::make_pair(h, k);
    return std::nullopt;
}

int maslov_index(const CurvatureProfile& k) {
    if (k.values.empty() || !(k.period_L > 0.0)) throw validation_error("maslov_index: empty profile or bad period");
    const double total = periodic_mean(k.values) * k.period_L / (2.0 * pi);
    const double rounded = std::round(total);
    if (std::fabs(total - rounded) > 1e-4)
        throw validation_error("maslov_index: total curvature is not an integer multiple of 2 pi");
    return static_cast<int>(rounded);
}

long bennequin_number(const SampledCurve& curve) {
    // shifted re-runs dodge sampling-phase degeneracies; a tangency that
    // survives every phase is treated as genuine
    const double h = curve.period_L / static_cast<double>(curve.size());
    const double phases[] = {0.0, 0.37 * h, 0.61 * h, 0.13 * h};
    std::string last;
    for (double phase : phases) {
        try {
            const SampledCurve probe = phase == 0.0 ? curve : shifted_curve(curve, phase);
            return crossing_sum(heisenberg_projection(probe));
        } catch (const crossing_degeneracy& e) {
            last = e.what();
        }
    }
    throw numerical_error("bennequin_number: persistent tangency: " + last);
}

int turning_number(const std::vector<std::array<double, 2>>& planar) {
    const std::size_t n = planar.size();
    if (n < 3) throw validation_error("turning_number: need at least 3 points");
    std::vector<std::array<double, 2>> tangents(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t j1 = (j + 1) % n;
        tangents[j] = {planar[j1][0] - planar[j][0], planar[j1][1] - planar[j][1]};
        if (std::hypot(tangents[j][0], tangents[j][1]) == 0.0)
            throw validation_error("turning_number: degenerate segment");
    }
    double angle = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t j1 = (j + 1) % n;
        angle += std::atan2(cross2(tangents[j], tangents[j1]),
                            tangents[j][0] * tangents[j1][0] + tangents[j][1] * tangents[j1][1]);
    }
    return static_cast<int>(std::lround(angle / (2.0 * pi)));
}

std::pair<int, Spin> clifford_index_and_spin(const SampledCurve& curve) {
    const std::size_t n = curve.size();
    if (n < 64 || !(curve.period_L > 0.0))
        throw validation_error("clifford_index_and_spin: too few samples or bad period");
    const std::vector<Vec3> eta = clifford_projection(curve);
    std::vector<double> cx(n), cy(n), cz(n);
    for (std::size_t j = 0; j < n; ++j) {
        cx[j] = eta[j][0];
        cy[j] = eta[j][1];
        cz[j] = eta[j][2];
    }
    // least period of the projection is period_L / r for an integer r; find
    // the largest r whose fractional-shift autocorrelation vanishes
    int ratio = 0;
    constexpr int MAX_RATIO = 256;
    for (int r = 1; r <= MAX_RATIO; ++r) {
        const double shift = curve.period_L / static_cast<double>(r);
        const std::vector<double> sx = spectral_shift(cx, curve.period_L, shift);
        const std::vector<double> sy = spectral_shift(cy, curve.period_L, shift);
        const std::vector<double> sz = spectral_shift(cz, curve.period_L, shift);
        double worst = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            worst = std::max(worst,
                             std::fabs(sx[j] - cx[j]) + std::fabs(sy[j] - cy[j]) + std::fabs(sz[j] - cz[j]));
        if (worst <= 1e-6) ratio = r;
    }
    if (ratio == 0) throw numerical_error("clifford_index_and_spin: period detection failed");

    // frame-lift sign over the least period decides the spin
    const CurvatureProfile k_full = curvature_of(curve);
    const std::size_t m = ((n + static_cast<std::size_t>(ratio) - 1) / static_cast<std::size_t>(ratio)) *
                          static_cast<std::size_t>(ratio);
    const std::size_t m_sub = std::max<std::size_t>(m / static_cast<std::size_t>(ratio), 64);
    const std::size_t m_tot = m_sub * static_cast<std::size_t>(ratio);
    const std::vector<double> rx = spectral_resample(cx, m_tot);
    const std::vector<double> ry = spectral_resample(cy, m_tot);
    const std::vector<double> rz = spectral_resample(cz, m_tot);
    const std::vector<double> rk = spectral_resample(k_full.values, m_tot);
    std::vector<Vec3> eta_sub(m_sub);
    std::vector<double> k_sub(m_sub);
    for (std::size_t j = 0; j < m_sub; ++j) {
        eta_sub[j] = {rx[j], ry[j], rz[j]};
        k_sub[j] = rk[j];
    }
    const double least_period = curve.period_L / static_cast<double>(ratio);
    const ZeroPhaseLift lift = zero_phase_lift(eta_sub, k_sub, least_period);
    Spin spin;
    spin.whole = lift.endpoint_sign > 0;
    return {ratio, spin};
}

InvariantReport invariant_report(const SampledCurve& curve, bool with_bennequin) {
    InvariantReport report;
    report.maslov = maslov_index(curvature_of(curve));
    const auto cs = clifford_index_and_spin(curve);
    report.clifford_index = cs.first;
    report.spin = cs.second;
    const std::vector<Vec3> hp = heisenberg_projection(curve);
    std::vector<std::array<double, 2>> planar(hp.size());
    for (std::size_t j = 0; j < hp.size(); ++j) planar[j] = {hp[j][0], hp[j][1]};
    report.turning_number = turning_number(planar);
    if (with_bennequin) {
        try {
            report.bennequin = bennequin_number(curve);
        } catch (const numerical_error&) {
            report.bennequin.reset();
        }
    }
    return report;
}

}  // namespace phs3
