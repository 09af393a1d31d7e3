#!/usr/bin/env python3
"""Reference values for the stationary-curve tests.

Everything here is computed from the quartic P(x) = x^4/4 + a x^2 + b x + c
and the planar ODE (k')^2 = -P(k) by direct quadrature / ODE integration,
independently of the closed-form catalogue formulas implemented in C++.
Printed values are frozen into tests/test_stationary.cpp.
"""
import mpmath as mp

mp.mp.dps = 40


def p17(x):
    return mp.nstr(mp.mpf(x), 17)


def coeffs_symmetric(e1, e3):
    # roots e1, -e1, -(0) +/- i e3 for the symmetric cnoidal family
    a = (e3 * e3 - e1 * e1) / 4
    b = mp.mpf(0)
    c = -(e1 * e1) * (e3 * e3) / 4
    return a, b, c


def coeffs_cnoidal(e1, e2, e3):
    # real roots e1 > e2, complex pair -(e1+e2)/2 +/- i e3
    br = -(e1 + e2) / 2
    # P = 1/4 (x-e1)(x-e2)((x-br)^2 + e3^2)
    import sympy as sp

    x = sp.symbols("x")
    e1s, e2s, brs, e3s = [sp.Rational(str(v)) if isinstance(v, str) else sp.nsimplify(float(v), rational=True) for v in (e1, e2, br, e3)]
    P = sp.expand((x - e1s) * (x - e2s) * ((x - brs) ** 2 + e3s**2)) / 4
    poly = sp.Poly(P, x)
    a = mp.mpf(str(sp.nsimplify(poly.coeff_monomial(x**2))))
    b = mp.mpf(str(sp.nsimplify(poly.coeff_monomial(x))))
    c = mp.mpf(str(sp.nsimplify(poly.coeff_monomial(1))))
    assert abs(poly.coeff_monomial(x**3)) < 1e-12
    return a, b, c


def coeffs_dnoidal(e1, e2, e3):
    e4 = -(e1 + e2 + e3)
    S2 = e1 * e2 + e1 * e3 + e1 * e4 + e2 * e3 + e2 * e4 + e3 * e4
    S3 = e1 * e2 * e3 + e1 * e2 * e4 + e1 * e3 * e4 + e2 * e3 * e4
    S4 = e1 * e2 * e3 * e4
    return S2 / 4, -S3 / 4, S4 / 4


def P_of(a, b, c):
    return lambda x: x**4 / 4 + a * x * x + b * x + c


def lam_of(a, b, c):
    return mp.sqrt(16 * (a - 4) ** 2 + b * b - 16 * c) / 4


def omega_quadrature(e1, e2, a, b, c):
    # substitution k = e2 + (e1-e2) t^2 (2-t^2)... use simple sin^2 map to kill
    # the sqrt endpoints: k = e2 + (e1-e2) sin^2(phi)
    P = P_of(a, b, c)

    def integrand(phi):
        k = e2 + (e1 - e2) * mp.sin(phi) ** 2
        dk = (e1 - e2) * 2 * mp.sin(phi) * mp.cos(phi)
        val = -P(k)
        return dk / mp.sqrt(val)

    return 2 * mp.quad(integrand, [mp.mpf("1e-12"), mp.pi / 2 - mp.mpf("1e-12")])


def Lambda_fn(a, b, lam, kfun):
    def f(s):
        k = kfun(s)
        return (16 * (4 - a) + (b + 4 * lam) * k) / (4 * (8 * k + 4 * lam + b))

    return f


def profile_symmetric(e1, e3):
    beta2 = e1 * e1 + e3 * e3
    ell = mp.sqrt(beta2) / 2
    m = e1 * e1 / beta2
    om = 4 * mp.ellipk(m) / ell
    return (lambda s: -e1 * mp.ellipfun("cn", ell * s, m)), om, m, ell


def phi2_closed_symmetric(e1, e3):
    beta2 = e1 * e1 + e3 * e3
    m = e1 * e1 / beta2
    a, b, c = coeffs_symmetric(e1, e3)
    lam = lam_of(a, b, c)
    beta = mp.sqrt(beta2)
    if abs(beta2 - 16) < 1e-9:
        return (e1 / (4 * mp.pi)) * mp.ellipk(e1 * e1 / 16)
    n = -64 * e1 * e1 / (beta2 - 16) ** 2
    val = mp.ellipk(m) - ((beta2 + 16) / (beta2 - 16)) * mp.ellippi(n, m)
    return (lam / (2 * mp.pi * beta)) * val


def report_symmetric(name, e1, e3, reg_shift):
    e1, e3 = mp.mpf(e1), mp.mpf(e3)
    a, b, c = coeffs_symmetric(e1, e3)
    lam = lam_of(a, b, c)
    kfun, om, m, ell = profile_symmetric(e1, e3)
    om_q = omega_quadrature(e1, -e1, a, b, c)
    Lf = Lambda_fn(a, b, lam, kfun)
    phi2_quad = mp.quad(Lf, [0, float(om)]) / (2 * mp.pi)
    phi2_cf = phi2_closed_symmetric(e1, e3)
    print(f"--- {name}: e1={p17(e1)} e3={p17(e3)}")
    print("  a =", p17(a), " c =", p17(c))
    print("  lambda =", p17(lam))
    print("  m =", p17(m), " omega =", p17(om), " omega_quad =", p17(om_q))
    print("  Phi2_closed =", p17(phi2_cf), " Phi2_quad =", p17(phi2_quad))
    print("  Phi2_reg =", p17(phi2_cf + reg_shift))
    return lam, om, m, phi2_cf


if __name__ == "__main__":
    print("== symmetric family ==")
    report_symmetric("inner branch member", "0.600642", "2.44722", 0)
    lam2, om2, m2, _ = report_symmetric("outer branch member", "3.245612", "10.568031", 1)
    report_symmetric("transition member", "2.39412", "3.2044", mp.mpf(1) / 2)

    # wave ratio at the outer member: pi (e3^2-e1^2) |beta| / (16 lam K(m))
    e1, e3 = mp.mpf("3.245612"), mp.mpf("10.568031")
    beta = mp.sqrt(e1 * e1 + e3 * e3)
    Pq = mp.pi * (e3 * e3 - e1 * e1) * beta / (16 * lam2 * mp.ellipk(m2))
    print("  wave ratio at outer member =", p17(Pq), " (expect ~5)")
    print("  2*pi/lambda =", p17(2 * mp.pi / lam2), " (expect ~0.229849)")

    print("== axis limits of regularized Phi2 (e1 -> 0) ==")
    for e3s, shift in (("2.0", 0), ("3.9", 0), ("6.0", 1)):
        e1 = mp.mpf("1e-5")
        e3 = mp.mpf(e3s)
        val = phi2_closed_symmetric(e1, e3) + shift
        tgt = 2 / e3 if e3 < 4 else 1 - 2 / e3
        print(f"  e3={e3s}: Phi2_reg={p17(val)}  target={p17(tgt)}")

    print("== general cnoidal modulus (e1,e2,e3)=(2.5,-1.0,1.5) ==")
    e1, e2, e3 = mp.mpf("2.5"), mp.mpf("-1.0"), mp.mpf("1.5")
    a, b, c = coeffs_cnoidal(e1, e2, e3)
    lam = lam_of(a, b, c)
    print("  a =", p17(a), " b =", p17(b), " c =", p17(c), " lambda =", p17(lam))
    A = mp.sqrt(((3 * e1 + e2) / 2) ** 2 + e3 * e3)
    B = mp.sqrt(((e1 + 3 * e2) / 2) ** 2 + e3 * e3)
    m = ((e1 - e2) ** 2 - (A - B) ** 2) / (4 * A * B)
    qs = mp.sqrt(A * B) / 2
    om = 4 * mp.ellipk(m) / qs
    om_q = omega_quadrature(e1, e2, a, b, c)
    print("  A =", p17(A), " B =", p17(B), " m =", p17(m))
    print("  omega_BF =", p17(om), " omega_quad =", p17(om_q))

    def kfun(s):
        cn = mp.ellipfun("cn", qs * s, m)
        return (e2 * A + e1 * B + (e2 * A - e1 * B) * cn) / ((A + B) + (A - B) * cn)

    # profile check against the planar ODE energy
    Pfun = P_of(a, b, c)
    res = max(
        abs((mp.diff(kfun, s)) ** 2 + Pfun(kfun(s)))
        for s in [mp.mpf("0.3"), mp.mpf("1.1"), mp.mpf("2.2")]
    )
    print("  profile energy residual =", p17(res))
    print("  k(0) =", p17(kfun(0)), " k(om/2) =", p17(kfun(om / 2)), " (expect e2, e1)")
    Lf = Lambda_fn(a, b, lam, kfun)
    phi2_quad = mp.quad(Lf, [0, float(om)]) / (2 * mp.pi)
    phi1_quad = mp.quad(kfun, [0, float(om)]) / (2 * mp.pi)
    print("  Phi1_quad =", p17(phi1_quad), " Phi2_quad =", p17(phi2_quad))

    print("== dnoidal modulus (e1,e2,e3)=(3,1,0.5) ==")
    e1, e2, e3 = mp.mpf(3), mp.mpf(1), mp.mpf("0.5")
    e4 = -(e1 + e2 + e3)
    a, b, c = coeffs_dnoidal(e1, e2, e3)
    lam = lam_of(a, b, c)
    print("  a =", p17(a), " b =", p17(b), " c =", p17(c), " lambda =", p17(lam))
    m = ((e1 - e2) * (e3 - e4)) / ((e1 - e3) * (e2 - e4))
    qt = mp.sqrt((e1 - e3) * (e2 - e4)) / 4
    om = 2 * mp.ellipk(m) / qt
    om_q = omega_quadrature(e1, e2, a, b, c)
    print("  m =", p17(m), " q =", p17(qt), " omega =", p17(om), " omega_quad =", p17(om_q))

    def kfun_dn(s):
        sn2 = mp.ellipfun("sn", qt * s, m) ** 2
        return (e2 * (e1 - e3) - e3 * (e1 - e2) * sn2) / ((e1 - e3) - (e1 - e2) * sn2)

    Pfun = P_of(a, b, c)
    res = max(
        abs((mp.diff(kfun_dn, s)) ** 2 + Pfun(kfun_dn(s)))
        for s in [mp.mpf("0.3"), mp.mpf("0.9"), mp.mpf("1.7")]
    )
    print("  profile energy residual =", p17(res))
    print("  k(0) =", p17(kfun_dn(0)), " k(om/2) =", p17(kfun_dn(om / 2)), " (expect e2, e1)")
    Lf = Lambda_fn(a, b, lam, kfun_dn)
    phi2_quad = mp.quad(Lf, [0, float(om)]) / (2 * mp.pi)
    phi1_quad = mp.quad(kfun_dn, [0, float(om)]) / (2 * mp.pi)
    print("  Phi1_quad =", p17(phi1_quad), " Phi2_quad =", p17(phi2_quad))

    print("== transition-locus branch of Phi2 ==")
    e1 = mp.mpf("2.39412")
    val = (e1 / (4 * mp.pi)) * mp.ellipk(e1 * e1 / 16) + mp.mpf(1) / 2
    print("  (e1/4pi) K(e1^2/16) + 1/2 at e1=2.39412 :", p17(val), " (expect ~5/6)")
    # one-sided limits of the generic closed form approaching |beta| = 4
    for eps in ("-1e-6", "1e-6"):
        b2 = 16 + mp.mpf(eps)
        e3 = mp.sqrt(b2 - e1 * e1)
        print(f"  generic form at |beta|^2 = 16 + ({eps}):", p17(phi2_closed_symmetric(e1, e3)))
