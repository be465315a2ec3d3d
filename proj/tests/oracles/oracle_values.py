"""Independent numpy/mpmath oracles used to freeze expected values in the C++ tests.

Run with `python3 tests/oracles/oracle_values.py`; it shares no code with the
C++ implementation.
"""
import math

import mpmath as mp
import numpy as np

MU0 = 4e-7 * math.pi
SIGMA_CU = 5.8e7
D_WIRE = 0.137e-3
S_WIRE = 0.5e-3
PITCH = D_WIRE + S_WIRE


def outer_diameter(n, r_in):
    return 2 * r_in + 2 * n * PITCH


def current_sheet(n, r_in):
    di, do = 2 * r_in, outer_diameter(n, r_in)
    g = (do - di) / (do + di)
    return MU0 * n * n * ((do + di) / 2) / 2 * (math.log(2.46 / g) + 0.2 * g * g)


def wheeler(n, r_in):
    do = outer_diameter(n, r_in)
    a = do - n * PITCH
    return n * n * a * a / (16 * do + 28 * n * PITCH) * 39.37e-6


def skin_depth(f, sigma=SIGMA_CU):
    return 1 / math.sqrt(math.pi * f * sigma * MU0)


def ac_resistance(n, r_in, f, d=D_WIRE, s=S_WIRE, sigma=SIGMA_CU):
    do = 2 * r_in + 2 * n * (d + s)
    return math.sqrt(f * math.pi * MU0 / sigma) * n * (do - n * (d + s)) / d


def spiral(n, r_in, spt):
    if n == 1:
        th = np.linspace(0, 2 * np.pi, spt + 1)
        r = np.full_like(th, r_in)
    else:
        th = np.arange(n * spt + 1) * 2 * np.pi / spt
        r = r_in - PITCH / 2 + PITCH * th / (2 * np.pi)
    pts = np.stack([r * np.cos(th), r * np.sin(th), np.zeros_like(th)], axis=1)
    if n > 1:
        pts = np.vstack([pts, pts[:1]])  # closing lead
    return pts


def rot_y(deg):
    t = math.radians(deg)
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]])


def neumann(p1, p2):
    d1 = np.diff(p1, axis=0)
    m1 = 0.5 * (p1[1:] + p1[:-1])
    d2 = np.diff(p2, axis=0)
    m2 = 0.5 * (p2[1:] + p2[:-1])
    total = mp.mpf(0)
    for i in range(0, len(d1), 256):
        a, am = d1[i:i + 256], m1[i:i + 256]
        dist = np.linalg.norm(am[:, None, :] - m2[None, :, :], axis=2)
        dots = a @ d2.T
        total += mp.mpf(float(np.sum(dots / dist)))
    return float(total) * 1e-7


def refine(p):
    mid = 0.5 * (p[1:] + p[:-1])
    out = np.empty((2 * len(p) - 1, 3))
    out[0::2] = p
    out[1::2] = mid
    return out


def maxwell_coaxial(r1, r2, z):
    with mp.workdps(50):
        r1, r2, z = mp.mpf(r1), mp.mpf(r2), mp.mpf(z)
        k2 = 4 * r1 * r2 / ((r1 + r2) ** 2 + z * z)
        k = mp.sqrt(k2)
        K, E = mp.ellipk(k2), mp.ellipe(k2)
        return float(mp.mpf(4e-7) * mp.pi * mp.sqrt(r1 * r2) * ((2 / k - k) * K - 2 / k * E))


def nominal_coupling(x_eye=0.092, z_eye=0.150, angle=40.0, spt=720):
    tx = spiral(5, 0.060, spt) @ rot_y(angle).T
    rx = spiral(5, 0.004, spt) @ rot_y(90.0).T + np.array([x_eye, 0.0, z_eye])
    return neumann(refine(tx), refine(rx))


def transfer(f, ltx, lrx, m, rs, rl, ctx=None, crx=None, rtx=0.0, rrx=0.0):
    w = 2 * math.pi * f
    ztx = rs + rtx + 1j * w * ltx + (1 / (1j * w * ctx) if ctx else 0)
    zrx = rl + rrx + 1j * w * lrx + (1 / (1j * w * crx) if crx else 0)
    det = ztx * zrx + (w * m) ** 2
    i1 = zrx / det
    return 1j * w * m * rl / det, i1


if __name__ == "__main__":
    print("turn radii tx end", 0.060 + 4 * PITCH, "Do", outer_diameter(5, 0.060))
    print("current sheet rx", repr(current_sheet(5, 0.004)))
    print("current sheet tx", repr(current_sheet(5, 0.060)))
    print("wheeler rx", repr(wheeler(5, 0.004)), "wheeler tx", repr(wheeler(5, 0.060)))
    print("skin 26MHz", repr(skin_depth(26e6)), "skin 1Hz", repr(skin_depth(1.0)))
    print("R rx 26.8MHz", repr(ac_resistance(5, 0.004, 26.8e6)))
    print("R tx 26MHz", repr(ac_resistance(5, 0.060, 26e6)))
    print("Q 35uH 1ohm 26MHz", repr(2 * math.pi * 26e6 * 35e-6 / 1.0))
    ctx = 1 / ((2 * math.pi * 26e6) ** 2 * 35e-6)
    print("C tx", repr(ctx), "C rx(0.4uH)", repr(35e-6 * ctx / 0.4e-6))
    print("k example", repr(1e-6 / math.sqrt(35e-6 * 0.4e-6)))
    print("capacity", repr(1e6 * math.log2(1 + 10 ** (30 / 20))))
    for r2 in (0.05, 0.2, 1.0):
        for z in (0.5, 1.0, 5.0):
            print("maxwell", r2, z, repr(maxwell_coaxial(1.0, r2, z)))
    m = nominal_coupling()
    print("nominal M", repr(m))
    lrx = current_sheet(5, 0.004)
    f0 = 26e6
    crx = 35e-6 * ctx / lrx
    rtx0 = ac_resistance(5, 0.060, f0)
    rrx0 = ac_resistance(5, 0.004, f0)
    fs = np.linspace(20e6, 30e6, 1001)
    tuned = [transfer(f, 35e-6, lrx, m, 50, 1000, ctx, crx, rtx0 * math.sqrt(f / f0), rrx0 * math.sqrt(f / f0)) for f in fs]
    unt = [transfer(f, 35e-6, lrx, m, 50, 1000) for f in fs]
    hdb = np.array([20 * math.log10(abs(h)) for h, _ in tuned])
    udb = np.array([20 * math.log10(abs(h)) for h, _ in unt])
    i = int(np.argmax(hdb))
    print("tuned peak dB", hdb[i], "at", fs[i], "untuned range", udb.min(), udb.max())
    above = fs[hdb >= hdb[i] - 3]
    print("approx 3dB band", above[0], above[-1])
    h, i1 = transfer(f0, 35e-6, lrx, m, 50, 1000, ctx, crx, rtx0, rrx0)
    print("tx power f0", 0.5 * (i1.conjugate()).real)
    for ang in (0, 20, 30, 40, 50, 60, 80, 90):
        print("angle", ang, 20 * math.log10(abs(nominal_coupling(angle=ang, spt=180))))
    for z in (0.05, 0.1, 0.15, 0.2, 0.3):
        print("axial", z, nominal_coupling(z_eye=z, spt=180))
