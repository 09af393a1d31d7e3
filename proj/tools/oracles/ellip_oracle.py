#!/usr/bin/env python3
"""Reference values for the elliptic kernel tests.

Computes the complete integrals by adaptive quadrature of their defining
integrals (mpmath, 50-digit working precision) and the Jacobi triple by
high-order ODE integration of the defining system, independently of any
closed-form elliptic library routine.  Values printed here are frozen into
tests/test_ellip.cpp.
"""
import mpmath as mp

mp.mp.dps = 50


def K_quad(m):
    return mp.quad(lambda t: 1 / mp.sqrt(1 - m * mp.sin(t) ** 2), [0, mp.pi / 2])


def Pi_quad(n, m):
    return mp.quad(
        lambda t: 1 / ((1 - n * mp.sin(t) ** 2) * mp.sqrt(1 - m * mp.sin(t) ** 2)),
        [0, mp.pi / 2],
    )


def jacobi_ode(u, m):
    # sn' = cn*dn, cn' = -sn*dn, dn' = -m*sn*cn with (sn,cn,dn)(0) = (0,1,1)
    f = mp.odefun(
        lambda x, y: [y[1] * y[2], -y[0] * y[2], -m * y[0] * y[1]],
        0,
        [mp.mpf(0), mp.mpf(1), mp.mpf(1)],
        tol=mp.mpf(10) ** (-30),
    )
    sn, cn, dn = f(u)
    return cn, dn, sn


def p17(x):
    return mp.nstr(x, 17)


if __name__ == "__main__":
    print("K(0.5)        =", p17(K_quad(mp.mpf("0.5"))))
    print("K(0.99)       =", p17(K_quad(mp.mpf("0.99"))))
    print("Pi(-0.7,0.6)  =", p17(Pi_quad(mp.mpf("-0.7"), mp.mpf("0.6"))))
    print("Pi(-1,0)      =", p17(Pi_quad(mp.mpf("-1"), mp.mpf("0"))), " expect pi/(2*sqrt(2)) =", p17(mp.pi / (2 * mp.sqrt(2))))
    cn, dn, sn = jacobi_ode(mp.mpf("1.3"), mp.mpf("0.81"))
    print("cn(1.3|0.81)  =", p17(cn))
    print("dn(1.3|0.81)  =", p17(dn))
    print("sn(1.3|0.81)  =", p17(sn))
    # cross-check the quarter-period identity used in the tests
    K04 = K_quad(mp.mpf("0.4"))
    print("K(0.4)        =", p17(K04))
    cn2, dn2, sn2 = jacobi_ode(K04, mp.mpf("0.4"))
    print("cn(K(0.4)|0.4)=", p17(cn2), " dn =", p17(dn2), " sn =", p17(sn2))
