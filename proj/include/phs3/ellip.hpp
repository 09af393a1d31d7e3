#pragma once

#include "phs3/common.hpp"

namespace phs3 {

// Complete elliptic integral of the first kind K(m); m is the SQUARE of the
// Jacobi modulus. AGM iteration, relative error <= 1e-13. Domain 0 <= m < 1.
double complete_K(double m);

// Complete elliptic integral of the third kind
// Pi(n, m) = \int_0^{pi/2} dt / ((1 - n sin^2 t) sqrt(1 - m sin^2 t)),
// via Carlson symmetric forms R_F and R_J. Domain n < 1, 0 <= m < 1.
double complete_Pi(double n, double m);

struct JacobiTriple {
    double cn;
    double dn;
    double sn;
};

// Jacobi elliptic functions at argument u, parameter m (= modulus squared).
// Argument reduced modulo 4K(m) before the descending-Landen/AGM evaluation,
// so the error stays flat for |u| up to 1e4. Domain 0 <= m < 1.
JacobiTriple jacobi_cn_dn_sn(double u, double m);

}  // namespace phs3
