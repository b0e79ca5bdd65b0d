"""Explicit Dirac solution modes, truncated bases, and spinor algebra.

Mode conventions
----------------
Drum (massless):  ``psi_L^n = (1,0)^T e^{i n (x+t)}`` and
``psi_R^n = (0,1)^T e^{i n (x-t)}`` for integer ``n != 0``; both signs of
``n`` are kept so the span is parity invariant.  The frequency attribute
is the eigenvalue of ``H = -i g0 g1 d/dx``: ``-n`` for L, ``+n`` for R.

Slab (mass m):  for integer momentum ``k`` and branch ``+-``, the
amplitude solves ``(w g0 - k g1 - m) u = 0`` with ``w = +-sqrt(k^2+m^2)``
and unit norm ``u^dag u = 1``; the mode is ``u e^{-i w t + i k x}``.  The
massless zero mode ``k = 0`` is excluded (its frequency split is
degenerate).

The fiberwise spin scalar product is realized as ``psi^dag g0 phi`` and
the Cauchy-surface scalar product carries the conventional ``2 pi``:
``(psi|phi) = 2 pi * integral_N <psi | gamma(nu) phi> d mu_N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import models as geo
from .errors import (
    DegenerateModeError,
    DomainError,
    ModelMismatchError,
    RangeError,
)


def spin_product(rep: geo.DiracRep, psi: np.ndarray, phi: np.ndarray) -> complex:
    """Indefinite fiberwise product ``psi^dag g0 phi``."""
    return complex(np.conj(psi) @ rep.gamma0 @ phi)


@dataclass(frozen=True)
class SolutionMode:
    """A closed-form Dirac solution with a vectorized evaluator.

    ``data`` holds the construction parameters: ``("L"|"R", n)`` for the
    drum, ``(k, branch, u)`` for the slab.
    """

    label: str
    model: geo.SpacetimeModel
    frequency: float
    momentum: int
    data: tuple

    @property
    def resolution_bound(self) -> int:
        return abs(int(self.momentum))

    def values(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at ``points`` of shape (n, 2); returns (n, 2) spinors."""
        t = points[:, 0]
        x = points[:, 1]
        if self.model.kind == "drum":
            chir, n = self.data
            out = np.zeros((points.shape[0], 2), dtype=complex)
            if chir == "L":
                out[:, 0] = np.exp(1j * n * (x + t))
            else:
                out[:, 1] = np.exp(1j * n * (x - t))
            return out
        k, _branch, u = self.data
        phase = np.exp(-1j * self.frequency * t + 1j * k * x)
        return phase[:, None] * np.asarray(u)[None, :]

    def evaluate(self, t: float, x: float) -> np.ndarray:
        """Single-point evaluation restricted to the closed model domain."""
        if not geo.contains_closure(self.model, t, geo.reduce_x(self.model, x)):
            raise DomainError(f"point (t={t}, x={x}) outside the {self.model.kind} domain")
        return self.values(np.array([[t, x]], dtype=float))[0]


def evaluate_mode(mode: SolutionMode, t: float, x: float) -> np.ndarray:
    return mode.evaluate(t, x)


@dataclass(frozen=True)
class LinearCombination:
    """A finite linear combination of basis modes; behaves like a solution."""

    basis: "Basis"
    coeffs: np.ndarray

    @property
    def model(self) -> geo.SpacetimeModel:
        return self.basis.model

    @property
    def resolution_bound(self) -> int:
        return self.basis.bound

    def values(self, points: np.ndarray) -> np.ndarray:
        E = mode_matrix(self.basis.modes, points)
        return np.tensordot(E, np.asarray(self.coeffs, dtype=complex), axes=([1], [0]))


def mode_matrix(modes: tuple[SolutionMode, ...], points: np.ndarray) -> np.ndarray:
    """Stack mode values at the given points into shape (n_pts, n_modes, 2)."""
    return np.stack([m.values(points) for m in modes], axis=1)


def slab_amplitude(k: int, mass: float, branch: int) -> tuple[np.ndarray, float]:
    """Unit-norm null vector of ``w g0 - k g1 - m`` with ``w = branch*sqrt(k^2+m^2)``.

    Solved numerically as the smallest right singular vector, then phase
    fixed so the first nonvanishing component is real positive.
    """
    rep = geo.standard_rep()
    omega = branch * math.hypot(k, mass)
    M = omega * rep.gamma0 - k * rep.gamma1 - mass * np.eye(2)
    _, s, vh = np.linalg.svd(M)
    if s[0] < 1e-12:
        raise DegenerateModeError(
            f"amplitude system is identically zero for k={k}, mass={mass}"
        )
    u = vh[-1].conj()
    lead = int(np.argmax(np.abs(u) > 1e-12))
    u = u * np.exp(-1j * np.angle(u[lead]))
    if np.abs(M @ u).max() > 1e-10:
        raise DegenerateModeError(f"no null amplitude at k={k}, branch={branch}")
    return u, omega


class Basis:
    """An ordered, truncated family of modes with its Gram matrix.

    The Gram is assembled once on the model's canonical surface (drum
    tent ``s = 0`` as the continuous limit, slab slice ``c = T/2``);
    other surfaces are reserved for independence tests.
    """

    def __init__(
        self,
        model: geo.SpacetimeModel,
        modes: tuple[SolutionMode, ...],
        bound: int,
        spec: geo.QuadratureSpec,
    ):
        self.model = model
        self.modes = modes
        self.bound = bound
        self.spec = spec
        self.gram_param = 0.0 if model.kind == "drum" else model.slab_lifetime / 2.0
        self.gram = gram_matrix(self, spec, surface_param=self.gram_param)

    @property
    def dim(self) -> int:
        return len(self.modes)

    @property
    def labels(self) -> list[str]:
        return [m.label for m in self.modes]

    def index(self, label: str) -> int:
        return self.labels.index(label)


def drum_basis(N: int, spec: geo.QuadratureSpec | None = None) -> Basis:
    """Drum modes ``{psi_L^n, psi_R^n : n in +-1..+-N}``; dimension 4N."""
    if N < 1:
        raise RangeError(f"drum truncation must be >= 1, got {N}")
    model = geo.drum()
    if spec is None:
        spec = geo.recommended_spec(model, N)
    ns = [n for n in range(-N, N + 1) if n != 0]
    modes = []
    for chir in ("L", "R"):
        for n in ns:
            freq = -n if chir == "L" else n
            modes.append(
                SolutionMode(
                    label=f"{chir}{n:+d}",
                    model=model,
                    frequency=float(freq),
                    momentum=n,
                    data=(chir, n),
                )
            )
    return Basis(model=model, modes=tuple(modes), bound=N, spec=spec)


def slab_basis(K: int, model: geo.SpacetimeModel, spec: geo.QuadratureSpec | None = None) -> Basis:
    """Slab modes ``{(k, +), (k, -) : |k| <= K}``; k=0 dropped when massless."""
    if K < 1:
        raise RangeError(f"slab truncation must be >= 1, got {K}")
    if model.kind != "slab":
        raise ModelMismatchError("slab_basis requires a slab model")
    if spec is None:
        spec = geo.recommended_spec(model, K)
    modes = []
    for k in range(-K, K + 1):
        if k == 0 and model.mass == 0.0:
            continue
        for branch in (+1, -1):
            u, omega = slab_amplitude(k, model.mass, branch)
            modes.append(
                SolutionMode(
                    label=f"k{k:+d}:{'pos' if branch > 0 else 'neg'}",
                    model=model,
                    frequency=omega,
                    momentum=k,
                    data=(k, branch, u),
                )
            )
    return Basis(model=model, modes=tuple(modes), bound=K, spec=spec)


def surface_flux_pair(
    left: np.ndarray, right: np.ndarray, quad: geo.SurfaceQuadrature, rep: geo.DiracRep
) -> np.ndarray:
    """Surface scalar products ``2 pi * sum_n w <psi_j|gamma(nu) phi_k>``.

    ``left``/``right`` have shape (n_nodes, n_cols, 2); the result is the
    (n_left, n_right) matrix of pairings.  Clifford multiplication by the
    normal contracts with the index lowered, ``gamma(nu) = nu^0 g0 - nu^1 g1``,
    which is the conserved-current flux form (current conservation then makes
    the result independent of the surface).
    """
    nu = quad.normals
    # node-dependent 2x2 matrix g0 (nu^0 g0 - nu^1 g1)
    M = nu[:, 0, None, None] * (rep.gamma0 @ rep.gamma0)[None] - nu[:, 1, None, None] * (
        rep.gamma0 @ rep.gamma1
    )[None]
    P = np.einsum("nja,nab->njb", left.conj(), M)
    PW = P * quad.weights[:, None, None]
    return 2.0 * math.pi * np.tensordot(PW, right, axes=([0, 2], [0, 2]))


def surface_flux_matrix(
    values: np.ndarray, quad: geo.SurfaceQuadrature, rep: geo.DiracRep
) -> np.ndarray:
    """All-pairs version of :func:`surface_flux_pair`."""
    return surface_flux_pair(values, values, quad, rep)


def gram_matrix(
    basis: Basis, spec: geo.QuadratureSpec, surface_param: float | None = None
) -> np.ndarray:
    """Gram ``G_jk = (e_j|e_k)`` on the surface of the given parameter."""
    if surface_param is None:
        surface_param = basis.gram_param
    surface = geo.CauchySurface(basis.model, float(surface_param))
    geo.check_surface_resolution(surface, spec, basis.bound)
    quad = geo.surface_quadrature(surface, spec)
    E = mode_matrix(basis.modes, quad.points)
    return surface_flux_matrix(E, quad, basis.model.rep)


def _bump(r: np.ndarray) -> np.ndarray:
    """Compactly supported C-infinity profile exp(-1/(1-r^2)) on |r| < 1."""
    out = np.zeros_like(r)
    inside = np.abs(r) < 1.0
    with np.errstate(divide="ignore", over="ignore"):
        val = np.exp(-1.0 / (1.0 - r[inside] ** 2))
    out[inside] = np.where(np.isfinite(val), val, 0.0)
    return out


@dataclass(frozen=True)
class TestFunction:
    """A smooth spinor bump, compactly supported strictly inside the domain."""

    __test__ = False  # not a pytest class, despite the name

    model: geo.SpacetimeModel
    center: tuple[float, float]  # (t0, x0)
    widths: tuple[float, float]  # (wt, wx)
    polarization: tuple[complex, complex]

    def __post_init__(self):
        t0, x0 = self.center
        wt, wx = self.widths
        if wt <= 0 or wx <= 0:
            raise RangeError("test-function widths must be positive")
        if self.model.kind == "drum":
            if not (t0 - wt > 0 and t0 + wt < math.pi - (abs(x0) + wx)):
                raise RangeError("test-function support not strictly inside the drum")
        else:
            T = self.model.slab_lifetime
            assert T is not None
            if not (t0 - wt > 0 and t0 + wt < T):
                raise RangeError("test-function support not strictly inside the slab")
            if wx >= math.pi:
                raise RangeError("slab test-function width must be < pi")

    def values(self, points: np.ndarray) -> np.ndarray:
        t = points[:, 0]
        x = points[:, 1]
        t0, x0 = self.center
        wt, wx = self.widths
        if self.model.kind == "slab":
            dx = np.mod(x - x0 + math.pi, geo.TWO_PI) - math.pi
        else:
            dx = x - x0
        prof = _bump((t - t0) / wt) * _bump(dx / wx)
        pol = np.asarray(self.polarization, dtype=complex)
        return prof[:, None] * pol[None, :]


def dirac_residual(
    model: geo.SpacetimeModel,
    values_fn,
    points: np.ndarray,
    step: float = 5e-4,
) -> float:
    """Max norm of ``(i g^j d_j - m) psi`` by 4th-order central differences,
    relative to the largest spinor amplitude among the sampled points."""
    rep = model.rep
    c = np.array([1.0, -8.0, 8.0, -1.0]) / (12.0 * step)
    offs = np.array([-2.0, -1.0, 1.0, 2.0]) * step

    def deriv(axis: int) -> np.ndarray:
        acc = np.zeros((points.shape[0], 2), dtype=complex)
        for ci, oi in zip(c, offs):
            shifted = points.copy()
            shifted[:, axis] += oi
            acc += ci * values_fn(shifted)
        return acc

    dpsi_dt = deriv(0)
    dpsi_dx = deriv(1)
    psi = values_fn(points)
    resid = (
        1j * dpsi_dt @ rep.gamma0.T
        + 1j * dpsi_dx @ rep.gamma1.T
        - model.mass * psi
    )
    amp = float(np.abs(psi).max())
    return float(np.abs(resid).max()) / max(amp, 1e-30)
