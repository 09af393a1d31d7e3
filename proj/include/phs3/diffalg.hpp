#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <string>
#include <vector>

#include "phs3/common.hpp"

namespace phs3 {

// Polynomial in the jet variables u0, u1, u2, ... with exact rational
// coefficients. Keys are exponent vectors with trailing zeros trimmed; the
// empty vector is the constant monomial. Immutable value semantics.
class DiffPoly {
  public:
    using Rational = boost::multiprecision::cpp_rational;
    using Exponents = std::vector<unsigned>;
    using TermMap = std::map<Exponents, Rational>;

    DiffPoly() = default;

    static DiffPoly constant(const Rational& c);
    static DiffPoly variable(unsigned jet_index);
    static DiffPoly monomial(const Rational& c, Exponents e);

    DiffPoly operator+(const DiffPoly& o) const;
    DiffPoly operator-(const DiffPoly& o) const;
    DiffPoly operator*(const DiffPoly& o) const;
    DiffPoly operator*(const Rational& c) const;
    DiffPoly operator-() const;
    bool operator==(const DiffPoly& o) const { return terms_ == o.terms_; }

    bool is_zero() const { return terms_.empty(); }
    // largest jet index appearing, or -1 for constants and zero
    int max_jet_order() const;
    const TermMap& terms() const { return terms_; }

    // partial derivative with respect to u_{jet_index}
    DiffPoly partial(unsigned jet_index) const;

    // substitution u_k -> -u_k for every k
    DiffPoly negate_variables() const;

    // numeric evaluation; jet must supply u_0..u_{max_jet_order}
    double evaluate(const std::vector<double>& jet) const;

    // canonical serialization: terms sorted by (total degree, exponent vector),
    // each written "c * u0^a0 u1^a1 ..."; the zero polynomial prints "0"
    std::string to_string() const;

  private:
    void add_term(Exponents e, const Rational& c);
    TermMap terms_;
};

// total derivative D P = sum_j u_{j+1} dP/du_j
DiffPoly total_derivative(const DiffPoly& P);

// Euler operator (variational derivative) E P = sum_j (-D)^j dP/du_j
DiffPoly euler_operator(const DiffPoly& P);

// Formal antiderivative, defined only on the image of D (checked via a prior
// euler_operator(P) == 0 test plus absence of a constant term). Throws
// std::logic_error if the operand is not an exact derivative.
DiffPoly antiderivative_exact(const DiffPoly& P);

struct HierarchyLevel {
    int j = 1;
    DiffPoly rho;  // conserved density (canonical homotopy representative)
    DiffPoly M;    // flow polynomial, M = D(E rho)
    DiffPoly L;    // L = 2 E rho
    DiffPoly N;    // antiderivative with D N = u0 * M
};

HierarchyLevel first_hierarchy_level();
HierarchyLevel recursion_step(const HierarchyLevel& level);

// levels 1..n_max; n_max in [1, 8], above 8 -> resource_error
std::vector<HierarchyLevel> generate_hierarchy(int n_max);

}  // namespace phs3
