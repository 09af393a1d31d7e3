#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "phs3/common.hpp"
#include "phs3/geom.hpp"
#include "phs3/invariants.hpp"

namespace phs3 {

// Curves whose curvature is stationary under the third-order flow solve
// k'' + k^3/2 + a k + b/2 = 0 with first integral (k')^2 + P(k) = 0 for the
// quartic P(x) = x^4/4 + a x^2 + b x + c. Everything in this module is
// parametrized by the root data of P.

enum class ModulusCase { dnoidal, cnoidal, symmetric_cnoidal };

// root data of the quartic phase polynomial
//  - dnoidal: four real roots e1 > e2 > e3 > e4 = -(e1+e2+e3)
//  - cnoidal: real roots e1 > e2, complex pair -(e1+e2)/2 +/- i e3, e3 > 0
//  - symmetric_cnoidal: cnoidal with e2 = -e1 (e1 > 0, e3 > 0)
// k oscillates over [e2, e1] in every case
struct Modulus {
    ModulusCase kind = ModulusCase::symmetric_cnoidal;
    double e1 = 0.0;
    double e2 = 0.0;
    double e3 = 0.0;

    static Modulus dnoidal(double e1, double e2, double e3);
    static Modulus cnoidal(double e1, double e2, double e3);
    static Modulus symmetric(double e1, double e3);

    // throws validation_error when the root ordering constraints fail
    void validate() const;
};

// quartic coefficients plus the derived elliptic data of one curvature wave
struct QuarticData {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double lambda = 0.0;     // momentum eigenvalue, sqrt(16(a-4)^2 + b^2 - 16c)/4
    double m = 0.0;          // elliptic parameter (modulus squared)
    double arg_scale = 0.0;  // u = arg_scale * s in the elliptic argument
    double omega = 0.0;      // curvature wavelength
};

// Vieta coefficients, lambda, and the wavelength data; throws
// validation_error for invalid or degenerate (m near 0 or 1) moduli
QuarticData quartic_from_modulus(const Modulus& mod);

// One wavelength of k at N uniform nodes, k(0) = e2. The symmetric case uses
// k = -e1 cn(l s, m) exactly; otherwise the planar ODE is integrated with the
// first integral monitored to 1e-9 relative drift (numerical_error beyond).
CurvatureProfile curvature_profile(const Modulus& mod, std::size_t samples);

// traceless Hermitian field H with constant eigenvalues -lambda, lambda:
// H11 = 2k + b/4, H12 = k' + i(k^2/2 + a - 4)
struct MomentumField {
    std::vector<double> h11;
    std::vector<complexd> h12;
    double lambda = 0.0;
    double period_L = 0.0;
    double quarter_b = 0.0;  // b/4, lets the residual recover k from H11
    // max_s | sqrt(H11^2 + |H12|^2) - lambda |
    double eigenvalue_drift() const;
    // max-abs entry of H' + [U, H] with the spectral derivative
    double conservation_residual() const;
};

// throws numerical_error when the eigenvalue drift exceeds 1e-7
MomentumField momentum_field(const Modulus& mod, const CurvatureProfile& k);

// the V fields vanish somewhere iff 8 e2 + b + 4 lambda = 0; in the
// symmetric family that is exactly |(e1,e3)| = 4
bool is_exceptional(const Modulus& mod);

// frame field over one wavelength from the eigenvector quadrature
// Gamma = sqrt(lambda/2) sqrt(8k+4l+b) diag(e^{i I1}, e^{i I2}) V^-1,
// I1 = int 3k/4 + Lambda, I2 = int k/4 - Lambda; exceptional moduli fall
// back to direct Frenet transport seeded with Gamma(0) = [[-i,0],[0,i]]
struct QuadratureFrame {
    std::vector<Frame> frames;
    std::vector<ComplexPair> v_minus;  // eigenvector field for -lambda
    std::vector<ComplexPair> v_plus;   // eigenvector field for +lambda
    double period_L = 0.0;
    bool exceptional = false;
};

QuadratureFrame reconstruct_frame_by_quadrature(const Modulus& mod, std::size_t samples);

struct Mat2 {
    complexd a11{0.0, 0.0}, a12{0.0, 0.0};
    complexd a21{0.0, 0.0}, a22{0.0, 0.0};
    double unitarity_defect() const;
};

using RationalPair = std::pair<std::int64_t, std::int64_t>;

// per-wavelength phase quanta and the resulting closure data.
// phi1 = (1/2pi) int k; phi2 = (1/2pi) int Lambda with
// Lambda = (16(4-a) + (b+4l)k) / (4(8k+4l+b)); phi2_regularized adds the
// branch shift {0, 1/2, 1} that makes the quantum continuous across the
// exceptional set. closed iff phi1 and phi2_regularized are both rational
// under the supplied detector; monodromy is the per-wavelength holonomy
// diag(e^{2pi i (3 phi1/4 + phi2r)}, e^{2pi i (phi1/4 - phi2r)}), built from
// the snapped rationals when closed; wave_number is its exact order.
struct ClosureReport {
    double phi1 = 0.0;
    double phi2 = 0.0;
    double phi2_regularized = 0.0;
    std::optional<std::pair<RationalPair, RationalPair>> rational_pair;
    bool closed = false;
    std::optional<int> wave_number;
    Mat2 monodromy;
    bool exceptional = false;
    double lambda = 0.0;
    double omega = 0.0;
};

ClosureReport closure_quanta(const Modulus& mod, const RationalDetect& detect_template = {},
                             std::size_t quad_samples = 2048);

// closed forms for the symmetric family (elliptic K and Pi); the generic
// branch needs |e1^2 + e3^2 - 16| > 1e-8, the locus branch (e1/4pi) K(e1^2/16)
// is used inside that band
double phi2_symmetric_closed_form(double e1, double e3);
double phi2_symmetric_regularized(double e1, double e3);

// closed loop assembled from wavelength copies of the reconstructed frame,
// tied together by the snapped monodromy; copies = denominator of the snapped
// regularized quantum. The overall sign is fixed so the initial point is
// (-4i(2 e1 + lambda), |(e1,e3)|^2 - 16) normalized.
struct PhiLoop {
    SampledCurve curve;
    std::size_t copies = 0;
    Mat2 monodromy;
    ClosureReport report;
};

// symmetric moduli only; throws validation_error when the quanta do not snap
// to rationals under the detector (default tolerance 1e-4: published moduli
// are quoted to six digits)
PhiLoop standard_phi_loop(const Modulus& mod, std::size_t samples_per_wavelength = 512,
                          RationalDetect detect_template = {0.0, 64, 1e-4});

// rigid-motion evolution of a stationary loop:
// gamma(s, t) = diag(e^{i(-l - b/4)t}, e^{i(l - b/4)t}) gamma(s - a t, 0)
SampledCurve time_evolution(const SampledCurve& loop, const Modulus& mod, double t);

// ratio of the rotation period to the wavelength travel time,
// pi (e3^2 - e1^2) |(e1,e3)| / (16 lambda K(m)); symmetric moduli only
double time_periodicity_function(const Modulus& mod);

struct ScanOptions {
    double initial_step = 1e-2;   // predictor arclength in the (e1,e3) plane
    double newton_tol = 1e-10;    // corrector residual target
    double axis_margin = 1e-3;    // e1 at which the trace starts and ends
    double e1_limit = 8.0;        // stop for unbounded fibers
    std::size_t max_points = 40000;
};

struct ScanPoint {
    double e1 = 0.0;
    double e3 = 0.0;
    double phi2_regularized = 0.0;
    double lambda = 0.0;
    double omega = 0.0;
    double wave_ratio = 0.0;  // time_periodicity_function at this point
};

struct ScanResult {
    std::vector<ScanPoint> points;
    // trace endpoints on the e3 axis (evaluated at e1 = axis_margin)
    std::vector<std::array<double, 2>> axis_limits;
    // crossing of |(e1,e3)| = 4, when the trace passes through it
    std::optional<std::array<double, 2>> exceptional_crossing;
    bool reached_e1_limit = false;
};

// predictor-corrector trace of the level set phi2_regularized = q in the
// (e1, e3) quadrant, started on the e3 axis near e3 = 2/q; q > 1/2. The
// corrector projects along the level-function gradient; the step is halved
// on corrector failure and a stall after 5 consecutive failures throws
// numerical_error.
ScanResult scan_modular_curve(double q, const ScanOptions& opts = {});

}  // namespace phs3
