#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "phs3/common.hpp"

namespace phs3 {

using Vec3 = std::array<double, 3>;

// point or tangent in C^2
struct ComplexPair {
    complexd z1{0.0, 0.0};
    complexd z2{0.0, 0.0};
};

// hermitian pairing <a, b> = a1 conj(b1) + a2 conj(b2)
complexd hermitian(const ComplexPair& a, const ComplexPair& b);

// contact normal w* = (-conj(w2), conj(w1)); (w*, i w*) spans the contact
// plane at w
ComplexPair contact_normal(const ComplexPair& w);

// U(2) frame with columns (gamma, gamma_s)
struct Frame {
    ComplexPair gamma;
    ComplexPair gamma_s;
    // max-abs entry of F* F - Id
    double unitarity_defect() const;
};

// closed curve sampled at uniform arclength nodes s_j = j period_L / size()
struct SampledCurve {
    std::vector<ComplexPair> samples;
    double period_L = 0.0;
    std::size_t size() const { return samples.size(); }
    // max_j |<gamma', gamma>| with a spectral derivative
    double legendrian_residual() const;
};

// curvature values at uniform arclength nodes over one period
struct CurvatureProfile {
    std::vector<double> values;
    double period_L = 0.0;
};

// SO(3) image of w under the double covering of the sphere onto the space of
// oriented circles; columns are the projected point, the projected tangent
// direction, and their cross product
std::array<Vec3, 3> spin_covering_columns(const ComplexPair& w);

// inverse of spin_covering_columns up to overall sign; throws logic_error if
// the input is not close to a rotation in the image
ComplexPair pair_from_rotation(const std::array<Vec3, 3>& columns);

// SU(2)-valued lift of the Frenet frame of a closed spherical curve sampled
// at speed 2 over one least period; tilde[j] is the first column at node j
struct ZeroPhaseLift {
    std::vector<ComplexPair> tilde;
    int endpoint_sign = 1;  // lift(X) = endpoint_sign * lift(0)
};
ZeroPhaseLift zero_phase_lift(const std::vector<Vec3>& eta, const std::vector<double>& k, double period_x);

// closed unit-speed lift assembled from copies of one base period of the
// spherical curve; period_multiple counts the copies (0 when no closed lift
// exists within the rational-detection bound)
struct LegendrianLiftResult {
    SampledCurve curve;
    int period_multiple = 0;
    bool closed = false;
    double total_curvature = 0.0;  // of the spherical base, divided by 2 pi
};

CurvatureProfile curvature_of(const SampledCurve& curve);
SampledCurve frenet_reconstruct(const CurvatureProfile& k, const Frame& frame0);

// frame transport along s from frame0, one frame per sample node of k
std::vector<Frame> frenet_frame_field(const CurvatureProfile& k, const Frame& frame0);
std::vector<Vec3> clifford_projection(const SampledCurve& curve);
LegendrianLiftResult legendrian_lift(const std::vector<Vec3>& eta, const CurvatureProfile& k_half);
Vec3 heisenberg_point(const ComplexPair& p);
std::vector<Vec3> heisenberg_projection(const SampledCurve& curve);
SampledCurve torus_knot_curve(int m, int n, std::size_t sample_count);

}  // namespace phs3
