#include "phs3/diffalg.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace phs3 {

namespace {

void trim(DiffPoly::Exponents& e) {
    while (!e.empty() && e.back() == 0) e.pop_back();
}

unsigned degree_of(const DiffPoly::Exponents& e) {
    return std::accumulate(e.begin(), e.end(), 0u);
}

}  // namespace

void DiffPoly::add_term(Exponents e, const Rational& c) {
    if (c == 0) return;
    trim(e);
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(std::move(e), c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

DiffPoly DiffPoly::constant(const Rational& c) {
    DiffPoly p;
    p.add_term({}, c);
    return p;
}

DiffPoly DiffPoly::variable(unsigned jet_index) {
    Exponents e(jet_index + 1, 0);
    e[jet_index] = 1;
    DiffPoly p;
    p.add_term(std::move(e), 1);
    return p;
}

DiffPoly DiffPoly::monomial(const Rational& c, Exponents e) {
    DiffPoly p;
    p.add_term(std::move(e), c);
    return p;
}

DiffPoly DiffPoly::operator+(const DiffPoly& o) const {
    DiffPoly out = *this;
    for (const auto& [e, c] : o.terms_) out.add_term(e, c);
    return out;
}

DiffPoly DiffPoly::operator-(const DiffPoly& o) const {
    DiffPoly out = *this;
    for (const auto& [e, c] : o.terms_) out.add_term(e, -c);
    return out;
}

DiffPoly DiffPoly::operator-() const {
    DiffPoly out;
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
    return out;
}

DiffPoly DiffPoly::operator*(const DiffPoly& o) const {
    DiffPoly out;
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            Exponents e(std::max(ea.size(), eb.size()), 0);
            for (size_t i = 0; i < ea.size(); ++i) e[i] += ea[i];
            for (size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
            out.add_term(std::move(e), ca * cb);
        }
    }
    return out;
}

DiffPoly DiffPoly::operator*(const Rational& c) const {
    DiffPoly out;
    if (c == 0) return out;
    for (const auto& [e, k] : terms_) out.terms_.emplace(e, k * c);
    return out;
}

int DiffPoly::max_jet_order() const {
    int mx = -1;
    for (const auto& [e, c] : terms_) mx = std::max(mx, static_cast<int>(e.size()) - 1);
    return mx;
}

DiffPoly DiffPoly::partial(unsigned j) const {
    DiffPoly out;
    for (const auto& [e, c] : terms_) {
        if (j >= e.size() || e[j] == 0) continue;
        Exponents d = e;
        d[j] -= 1;
        out.add_term(std::move(d), c * e[j]);
    }
    return out;
}

DiffPoly DiffPoly::negate_variables() const {
    DiffPoly out;
    for (const auto& [e, c] : terms_)
        out.terms_.emplace(e, degree_of(e) % 2 == 0 ? c : -c);
    return out;
}

double DiffPoly::evaluate(const std::vector<double>& jet) const {
    const int need = max_jet_order();
    if (static_cast<int>(jet.size()) < need + 1)
        throw validation_error("jet supplies " + std::to_string(jet.size()) +
                               " values but the polynomial needs u_0..u_" + std::to_string(need));
    double acc = 0.0;
    for (const auto& [e, c] : terms_) {
        double t = static_cast<double>(c);
        for (size_t i = 0; i < e.size(); ++i)
            for (unsigned p = 0; p < e[i]; ++p) t *= jet[i];
        acc += t;
    }
    return acc;
}

std::string DiffPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<unsigned, const std::pair<const Exponents, Rational>*>> order;
    order.reserve(terms_.size());
    for (const auto& term : terms_) order.emplace_back(degree_of(term.first), &term);
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second->first < b.second->first;
    });
    std::ostringstream os;
    bool first = true;
    for (const auto& [deg, term] : order) {
        if (!first) os << " + ";
        first = false;
        os << term->second;
        bool any = false;
        for (size_t i = 0; i < term->first.size(); ++i) {
            if (term->first[i] == 0) continue;
            os << (any ? " " : " * ") << "u" << i << "^" << term->first[i];
            any = true;
        }
    }
    return os.str();
}

DiffPoly total_derivative(const DiffPoly& P) {
    DiffPoly out;
    const int n = P.max_jet_order();
    for (int j = 0; j <= n; ++j) {
        DiffPoly pj = P.partial(static_cast<unsigned>(j));
        if (pj.is_zero()) continue;
        out = out + pj * DiffPoly::variable(static_cast<unsigned>(j) + 1);
    }
    return out;
}

DiffPoly euler_operator(const DiffPoly& P) {
    DiffPoly out;
    const int n = P.max_jet_order();
    for (int j = 0; j <= n; ++j) {
        DiffPoly t = P.partial(static_cast<unsigned>(j));
        if (t.is_zero()) continue;
        for (int r = 0; r < j; ++r) t = total_derivative(t);
        out = out + (j % 2 == 0 ? t : -t);
    }
    return out;
}

DiffPoly antiderivative_exact(const DiffPoly& P) {
    if (P.is_zero()) return {};
    if (P.terms().count({}))
        throw std::logic_error("antiderivative: operand has a constant term");
    if (!euler_operator(P).is_zero())
        throw std::logic_error("antiderivative: operand is not an exact derivative");
    DiffPoly rest = P, result;
    for (int guard = 0; guard < 4096; ++guard) {
        const int n1 = rest.max_jet_order();
        if (n1 <= 0) {
            // depends on u0 alone with zero Euler image: must vanish
            if (!rest.is_zero())
                throw std::logic_error("antiderivative: nonzero u0-only remainder");
            return result;
        }
        // rest = A * u_{n1} + B with A free of u_{n1}
        DiffPoly A;
        for (const auto& [e, c] : rest.terms()) {
            const unsigned top = static_cast<unsigned>(n1);
            unsigned exp_top = top < e.size() ? e[top] : 0;
            if (exp_top == 0) continue;
            if (exp_top > 1)
                throw std::logic_error("antiderivative: nonlinear in the top jet variable");
            DiffPoly::Exponents d = e;
            d[top] = 0;
            A = A + DiffPoly::monomial(c, std::move(d));
        }
        // integrate A with respect to u_{n1-1}
        DiffPoly r0;
        const unsigned lower = static_cast<unsigned>(n1 - 1);
        for (const auto& [e, c] : A.terms()) {
            DiffPoly::Exponents d = e;
            if (d.size() <= lower) d.resize(lower + 1, 0);
            const unsigned enew = d[lower] + 1;
            d[lower] = enew;
            r0 = r0 + DiffPoly::monomial(c / enew, std::move(d));
        }
        result = result + r0;
        rest = rest - total_derivative(r0);
    }
    throw std::logic_error("antiderivative: descent failed to terminate");
}

namespace {

// degree-weighted homotopy: inverts the Euler operator on its image for
// polynomials without constant term
DiffPoly homotopy_inverse(const DiffPoly& G) {
    DiffPoly out;
    const DiffPoly u0 = DiffPoly::variable(0);
    for (const auto& [e, c] : G.terms()) {
        const unsigned deg = std::accumulate(e.begin(), e.end(), 0u);
        out = out + u0 * DiffPoly::monomial(c / (deg + 1), e);
    }
    if (!(euler_operator(out) == G))
        throw std::logic_error("homotopy inversion failed to reproduce the Euler image");
    return out;
}

}  // namespace

HierarchyLevel first_hierarchy_level() {
    HierarchyLevel lv;
    lv.j = 1;
    const DiffPoly u0 = DiffPoly::variable(0);
    lv.rho = u0 * u0 * DiffPoly::Rational(1, 2);
    lv.M = DiffPoly::variable(1);
    lv.L = u0 * 2;
    lv.N = antiderivative_exact(u0 * lv.M);
    return lv;
}

HierarchyLevel recursion_step(const HierarchyLevel& level) {
    const DiffPoly u0 = DiffPoly::variable(0);
    // G = D(M_j) + u0 N_j equals E(rho_{j+1}) by the recursion identity
    const DiffPoly G = total_derivative(level.M) + u0 * level.N;
    HierarchyLevel next;
    next.j = level.j + 1;
    next.M = total_derivative(G);
    next.rho = homotopy_inverse(G);
    next.L = G * 2;
    next.N = antiderivative_exact(u0 * next.M);
    return next;
}

std::vector<HierarchyLevel> generate_hierarchy(int n_max) {
    if (n_max < 1) throw validation_error("hierarchy depth must be at least 1");
    if (n_max > 8) throw resource_error("hierarchy depth capped at 8");
    std::vector<HierarchyLevel> levels;
    levels.push_back(first_hierarchy_level());
    while (static_cast<int>(levels.size()) < n_max)
        levels.push_back(recursion_step(levels.back()));
    return levels;
}

}  // namespace phs3
