"""Independent brute-force integrators used to pin expected values.

Everything here deliberately avoids the package's Gauss-Legendre
machinery: composite Simpson rules on uniform grids, assembled
entry-by-entry.  Slow but trustworthy.
"""

import numpy as np

_G0 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def simpson(n, a, b):
    if n % 2:
        n += 1
    h = (b - a) / n
    w = np.ones(n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return a + h * np.arange(n + 1), w * h / 3.0


def drum_pairing_entry(mode_j, mode_k, nx=800, nt=400):
    """<e_j|e_k> over the open triangle by iterated Simpson."""
    xs, wx = simpson(nx, -np.pi, np.pi)
    total = 0.0 + 0.0j
    for xi, wxi in zip(xs, wx):
        tmax = np.pi - abs(xi)
        if tmax <= 1e-12:
            continue
        ts, wt = simpson(nt, 0.0, tmax)
        pts = np.stack([ts, np.full_like(ts, xi)], axis=1)
        vj = mode_j.values(pts)
        vk = mode_k.values(pts)
        total += wxi * np.sum(wt * np.einsum("na,ab,nb->n", vj.conj(), _G0, vk))
    return total


def slab_pairing_entry(mode_j, mode_k, lifetime, nt=2000, nx=600):
    ts, wt = simpson(nt, 0.0, lifetime)
    xs, wx = simpson(nx, 0.0, 2 * np.pi)
    tt = np.repeat(ts, xs.size)
    xx = np.tile(xs, ts.size)
    ww = np.repeat(wt, xs.size) * np.tile(wx, ts.size)
    pts = np.stack([tt, xx], axis=1)
    vj = mode_j.values(pts)
    vk = mode_k.values(pts)
    return np.sum(ww * np.einsum("na,ab,nb->n", vj.conj(), _G0, vk))


def bump_mode_overlap(fn, mode, lifetime, nt=4000, nx=4000):
    """<fn|mode> for a separable slab bump, via two independent 1D rules."""
    (t0, x0), (wt_, wx_) = fn.center, fn.widths
    pol = np.asarray(fn.polarization, dtype=complex)
    k, _branch, u = mode.data
    omega = mode.frequency

    ts, wt = simpson(nt, t0 - wt_, t0 + wt_)
    rt = (ts - t0) / wt_
    bt = np.zeros_like(rt)
    inside = np.abs(rt) < 1.0
    bt[inside] = np.exp(-1.0 / (1.0 - rt[inside] ** 2))
    it = np.sum(wt * bt * np.exp(-1j * omega * ts))

    xs, wx = simpson(nx, x0 - wx_, x0 + wx_)
    rx = (xs - x0) / wx_
    bx = np.zeros_like(rx)
    inside = np.abs(rx) < 1.0
    bx[inside] = np.exp(-1.0 / (1.0 - rx[inside] ** 2))
    ix = np.sum(wx * bx * np.exp(1j * k * xs))

    return (pol.conj() @ _G0 @ u) * it * ix


def drum_analytic_pairing(basis):
    """Closed form: <L,n | R,k> = -i*pi/n * delta_{nk}, chirality-diagonal
    blocks vanish (established by brute-force quadrature before freezing)."""
    dim = basis.dim
    A = np.zeros((dim, dim), dtype=complex)
    for j, mj in enumerate(basis.modes):
        for k, mk in enumerate(basis.modes):
            cj, nj = mj.data
            ck, nk = mk.data
            if nj != nk:
                continue
            if cj == "L" and ck == "R":
                A[j, k] = -1j * np.pi / nj
            elif cj == "R" and ck == "L":
                A[j, k] = 1j * np.pi / nj
    return A


def slab_analytic_pairing(basis):
    """Closed form: same-k blocks only; diagonal 2*pi*T*(+-m/w), cross-branch
    2*pi*(u+^dag g0 u-) * (e^{i dw T} - 1)/(i dw)."""
    model = basis.model
    T = model.slab_lifetime
    dim = basis.dim
    A = np.zeros((dim, dim), dtype=complex)
    for j, mj in enumerate(basis.modes):
        kj, bj, uj = mj.data
        for l, ml in enumerate(basis.modes):
            kl, bl, ul = ml.data
            if kj != kl:
                continue
            if bj == bl:
                w = np.hypot(kj, model.mass)
                A[j, l] = 2 * np.pi * T * (bj * model.mass / w)
            else:
                dw = mj.frequency - ml.frequency
                A[j, l] = (
                    2 * np.pi * (uj.conj() @ _G0 @ ul) * (np.exp(1j * dw * T) - 1.0) / (1j * dw)
                )
    return A
