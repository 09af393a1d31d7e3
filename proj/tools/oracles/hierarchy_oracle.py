#!/usr/bin/env python3
"""Independent generation of the integrable-hierarchy polynomials with sympy.

Implements the total derivative D, the Euler operator E, the formal
antiderivative on the image of D, and the degree-weighted homotopy inversion
of E, then runs the recursion
    G_{j+1} = D(M_j) + u0 * N_j,   M_{j+1} = D(G_{j+1}),
    rho_{j+1} = Hom(G_{j+1}),      N_{j+1} = Dinv(u0 * M_{j+1})
and prints canonical serializations frozen into tests/test_diffalg.cpp.
"""
import sympy as sp

NV = 16
U = sp.symbols(" ".join(f"u{i}" for i in range(NV)))


def D(P):
    return sp.expand(sum(U[i + 1] * sp.diff(P, U[i]) for i in range(NV - 1)))


def E(P):
    out = 0
    for i in range(NV):
        t = sp.diff(P, U[i])
        for _ in range(i):
            t = -D(t)
        out += t
    return sp.expand(out)


def max_jet(P):
    idx = [i for i in range(NV) if P.has(U[i])]
    return max(idx) if idx else -1


def Dinv(P):
    P = sp.expand(P)
    assert sp.simplify(E(P)) == 0, "not an exact derivative"
    R = 0
    while True:
        n = max_jet(P)
        if n <= 0:
            assert P == 0, P
            return sp.expand(R)
        A = sp.Poly(P, U[n])
        assert A.degree() <= 1, "nonlinear in top jet variable"
        lead = A.coeff_monomial(U[n])
        r0 = sp.integrate(lead, U[n - 1])
        R += r0
        P = sp.expand(P - D(r0))


def Hom(P):
    # monomial c*M -> c*u0*M/(deg M + 1); inverts E on its image for
    # constant-free polynomials
    P = sp.expand(P)
    out = 0
    for coeff, mono in zip(sp.Poly(P, *U).coeffs(), sp.Poly(P, *U).monoms()):
        deg = sum(mono)
        term = coeff * sp.prod(U[i] ** e for i, e in enumerate(mono))
        out += U[0] * term / (deg + 1)
    out = sp.expand(out)
    assert sp.expand(E(out) - P) == 0, "homotopy inversion failed"
    return out


def canon(P):
    poly = sp.Poly(sp.expand(P), *U)
    items = []
    for coeff, mono in zip(poly.coeffs(), poly.monoms()):
        items.append((sum(mono), tuple(mono), sp.Rational(coeff)))
    items.sort(key=lambda t: (t[0], t[1]))
    parts = []
    for _, mono, coeff in items:
        vars_ = " ".join(f"u{i}^{e}" for i, e in enumerate(mono) if e)
        parts.append(f"{coeff} * {vars_}" if vars_ else f"{coeff}")
    return " + ".join(parts) if parts else "0"


if __name__ == "__main__":
    rho = sp.Rational(1, 2) * U[0] ** 2
    M = U[1]
    N = Dinv(U[0] * M)
    levels = [(rho, M, N)]
    for j in range(1, 5):
        G = sp.expand(D(M) + U[0] * N)
        M = D(G)
        rho = Hom(G)
        N = Dinv(sp.expand(U[0] * M))
        levels.append((rho, M, N))
        print(f"== level {j + 1} ==")
        print("M   :", canon(M))
        print("rho :", canon(rho))
        print("Erho:", canon(E(rho)))
        print("N   :", canon(N))

    # cross-checks against the displayed low-order polynomials
    rho2_display = -sp.Rational(1, 2) * U[1] ** 2 + sp.Rational(1, 8) * U[0] ** 4
    rho3_display = (
        sp.Rational(1, 2) * U[2] ** 2
        + sp.Rational(5, 6) * U[0] ** 3 * U[2]
        + sp.Rational(5, 4) * U[0] ** 2 * U[1] ** 2
        + sp.Rational(1, 16) * U[0] ** 6
    )
    assert sp.expand(E(levels[1][0]) - E(rho2_display)) == 0
    assert sp.expand(E(levels[2][0]) - E(rho3_display)) == 0
    M2_display = U[3] + sp.Rational(3, 2) * U[0] ** 2 * U[1]
    M3_display = (
        U[5]
        + sp.Rational(5, 2) * U[0] ** 2 * U[3]
        + 10 * U[0] * U[1] * U[2]
        + sp.Rational(5, 2) * U[1] ** 3
        + sp.Rational(15, 8) * U[1] * U[0] ** 4
    )
    assert sp.expand(levels[1][1] - M2_display) == 0
    assert sp.expand(levels[2][1] - M3_display) == 0
    print("displayed low-order polynomials reproduced exactly")
