#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "phs3/common.hpp"
#include "phs3/diffalg.hpp"
#include "phs3/geom.hpp"

namespace phs3 {

struct FlowState {
    CurvatureProfile k;
    double t = 0.0;
    // frame at s = 0; carried so the curve can be rebuilt at any time
    std::optional<Frame> frame0;
};

// time-transport coefficient of the frame under the first unit-speed flow,
// sampled on the nodes of the profile; entries row-major, u(2)-valued
struct PMatrixField {
    std::vector<std::array<complexd, 4>> entries;
    double period_L = 0.0;
    // max entry norm of P + P^dagger over the grid
    double hermiticity_defect() const;
};

PMatrixField z1_p_matrix(const CurvatureProfile& k);

// pointwise value of a jet polynomial along a sampled periodic profile,
// jets supplied by spectral differentiation
std::vector<double> evaluate_field(const DiffPoly& poly, const CurvatureProfile& k);

// integrals over one period of the first three conserved densities
std::array<double, 3> conserved_integrals(const CurvatureProfile& k);

// advance k by k_t = rhs(k, k_s, ...): integrating factor in Fourier space
// for the full linear part, explicit RK4 for the rest, 2/3-rule dealiasing.
// The leading linear term must be of odd order so the factor is unitary.
FlowState evolve_by_polynomial(const FlowState& state, const DiffPoly& rhs, double t_end);

// n-th flow of the hierarchy acting on curvature: k_t = M_{n+1}
FlowState evolve_curvature(const FlowState& state, int n, double t_end);

// evolve the whole frame field under the first flow (curvature obeying
// k_t = M_2) and return the curve at t_end; the mixed-partials residual
// U_t - P_s - [U, P] is monitored every step and must stay below 1e-6
SampledCurve z1_frame_evolution(const FlowState& state, double t_end);

// integral of L_m D(L_j) over one period, evaluated on the jet of k
double symplectic_pairing(int m_index, int j_index, const CurvatureProfile& k);

// (q, r) = (k_s, 2k): normal and fiber components of the vector field whose
// Hamiltonian is total arclength; r_s = 2q holds spectrally
std::pair<std::vector<double>, std::vector<double>> hamiltonian_length_field(const CurvatureProfile& k);

}  // namespace phs3
