#!/usr/bin/env python3
"""Convention pinning for the geometry module, all numerical.

Checks, on the constant-curvature family:
  1. unit speed and constant curvature of gamma_{m,n};
  2. the rotation-reduced representative's direction-frame identities
     (front eta, tangent T, normal nu) and the induced frame ODEs;
  3. the planar image of the plane-projection p of gamma_{m,n} against the
     closed epicycloid parametrization;
  4. crossing-sign calibration for the contact self-linking invariant
     (target values: (1,1) -> -1, (2,3) -> -6).
Findings are frozen into the C++ tests.
"""
import numpy as np


def torus_curve(m, n, s):
    f = 1 / np.sqrt(m + n)
    w = np.sqrt(m * n)
    z1 = f * np.sqrt(m) * np.exp(-1j * n * s / w)
    z2 = f * np.sqrt(n) * np.exp(1j * m * s / w)
    return np.stack([z1, z2], axis=-1)


def herm(a, b):
    return np.sum(a * np.conj(b), axis=-1)


def spectral_diff(f, L):
    N = f.shape[0]
    kv = 2j * np.pi * np.fft.fftfreq(N, d=L / N)
    return np.fft.ifft(np.fft.fft(f, axis=0) * kv[:, None], axis=0)


def sigma_cols(w):
    w1, w2 = w[..., 0], w[..., 1]
    c1 = np.stack(
        [abs(w1) ** 2 - abs(w2) ** 2, 2 * (w1 * np.conj(w2)).real, -2 * (w1 * np.conj(w2)).imag],
        axis=-1,
    )
    c2 = np.stack(
        [-2 * (w1 * w2).real, (w1**2 - w2**2).real, -((w1**2 + w2**2).imag)], axis=-1
    )
    c3 = np.stack(
        [-2 * (w1 * w2).imag, (w1**2 - w2**2).imag, (w1**2 + w2**2).real], axis=-1
    )
    return c1, c2, c3


def heis(z):
    z1, z2 = z[..., 0], z[..., 1]
    d = 1 + z1
    x = (1j * np.sqrt(2) * z2 / d).real
    y = (1j * np.sqrt(2) * z2 / d).imag
    zz = (1j * (1 - z1) / d).real
    return np.stack([x, y, zz], axis=-1)


def epicycloid(m, n, u):
    c = np.sqrt(2 * n * (m + n))
    d = np.sqrt(2 * m * n)
    rho = 2 * m + n + 2 * np.sqrt(m * (m + n)) * np.cos(n * u / m)
    x = (-c * np.sin(u) - d * np.sin((m + n) * u / m)) / rho
    y = (c * np.cos(u) + d * np.cos((m + n) * u / m)) / rho
    return np.stack([x, y], axis=-1)


def crossing_sum(pts, tans, zs):
    # signed sum over transverse double points of the planar polyline;
    # convention A: sign = sign(det[tan_over, tan_under])
    N = len(pts)
    P = pts
    Q = np.roll(pts, -1, axis=0)
    D = Q - P
    totalA = 0
    for i in range(N):
        js = np.arange(i + 2, N if i > 0 else N - 1)
        d2 = D[js]
        r = P[js] - P[i]
        den = D[i, 0] * d2[:, 1] - D[i, 1] * d2[:, 0]
        ok = np.abs(den) > 1e-14
        t = np.where(ok, (r[:, 0] * d2[:, 1] - r[:, 1] * d2[:, 0]) / np.where(ok, den, 1), -1)
        u = np.where(ok, (r[:, 0] * D[i, 1] - r[:, 1] * D[i, 0]) / np.where(ok, -den, 1), -1)
        hit = ok & (t >= 0) & (t < 1) & (u >= 0) & (u < 1)
        for jj in np.nonzero(hit)[0]:
            j = js[jj]
            zi = zs[i] + t[jj] * (zs[(i + 1) % N] - zs[i])
            zj = zs[j] + u[jj] * (zs[(j + 1) % N] - zs[j])
            ti, tj = tans[i], tans[j]
            over, under = (ti, tj) if zi > zj else (tj, ti)
            totalA += np.sign(over[0] * under[1] - over[1] * under[0])
    return totalA


def turning_number(pts):
    d = np.roll(pts, -1, axis=0) - pts
    ang = np.arctan2(d[:, 1], d[:, 0])
    ext = np.angle(np.exp(1j * (np.roll(ang, -1) - ang)))
    return ext.sum() / (2 * np.pi)


if __name__ == "__main__":
    m, n = 3, 5
    w = np.sqrt(m * n)
    L = 2 * np.pi * w
    N = 4096
    s = np.arange(N) * L / N
    g = torus_curve(m, n, s)
    gp = spectral_diff(g, L)
    gpp = spectral_diff(gp, L)
    speed = np.abs(np.sqrt(herm(gp, gp).real))
    k = herm(gpp, gp).imag / speed**3
    print("max|speed-1|           =", np.max(np.abs(speed - 1)))
    print("max|k - (m-n)/sqrt(mn)|=", np.max(np.abs(k - (m - n) / w)))

    # rotation-reduced representative
    det = g[:, 0] * gp[:, 1] - gp[:, 0] * g[:, 1]
    theta = np.unwrap(np.angle(det))
    gt = np.exp(-1j * theta / 2)[:, None] * g
    c1, c2, c3 = sigma_cols(gt)
    eta_p = spectral_diff(c1, L)
    print("max|eta' - 2*col2|     =", np.max(np.abs(eta_p - 2 * c2)))
    print("max|col3 - col1 x col2|=", np.max(np.abs(c3 - np.cross(c1, c2))))
    T_p = spectral_diff(c2, L)
    kk = (m - n) / w
    print("max|T' - (-2 eta + k nu)| =", np.max(np.abs(T_p - (-2 * c1 + kk * c3))))
    nu_p = spectral_diff(c3, L)
    print("max|nu' + k T|         =", np.max(np.abs(nu_p + kk * c2)))
    # two-column frame ODE for the reduced representative
    gtp = spectral_diff(gt, L)
    pred = -(1j * kk / 2) * gt + np.stack([-np.conj(gt[:, 1]), np.conj(gt[:, 0])], axis=-1)
    print("max|gt' - (-ik/2 gt + gt*)| =", np.max(np.abs(gtp - pred)))

    # plane projection versus epicycloid
    u = np.sqrt(m / n) * s
    alpha = epicycloid(m, n, u)
    xy = heis(g)[:, :2]
    errA = np.max(np.abs(alpha - xy))
    u2 = np.sqrt(n / m) * s
    errB = np.max(np.abs(epicycloid(m, n, u2) - xy))
    print("epicycloid match, u=sqrt(m/n)s :", errA, "  u=sqrt(n/m)s :", errB)
    print("turning number of planar image =", turning_number(xy))

    # crossing-sign calibration
    for (mm, nn, NN) in ((1, 1, 2048), (2, 3, 3072)):
        ww = np.sqrt(mm * nn)
        LL = 2 * np.pi * ww
        ss = np.arange(NN) * LL / NN + 0.001
        gg = torus_curve(mm, nn, ss)
        H = heis(gg)
        pts, zz = H[:, :2], H[:, 2]
        tans = np.roll(pts, -1, axis=0) - pts
        A = crossing_sum(pts, tans, zz)
        print(f"({mm},{nn}): convention-A crossing sum = {A}   target {-mm * nn}")
