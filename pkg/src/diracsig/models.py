"""Model space-times, Cauchy surfaces, and quadrature rules.

Two flat, globally hyperbolic 2D regions with metric signature (+,-):

* ``drum`` -- the open triangle ``0 < t < pi - |x|`` with massless Dirac
  dynamics.  Its Cauchy surfaces are the "tent" graphs
  ``t = s (pi - |x|)`` for ``s in [0, 1)``; every inextendible causal
  curve crosses each tent exactly once, and all tents share the corner
  points ``(0, +-pi)``, so current conservation makes surface integrals
  of solution currents independent of ``s``.

* ``slab`` -- the finite-lifetime cylinder ``(0, T) x S^1`` with the
  circle of circumference ``2 pi`` (so momenta are integers) and mass
  ``m >= 0``.  Cauchy surfaces are the flat slices ``t = c``.

The external potential is identically zero in both models and the time
orientation is the one in which ``d/dt`` is future-directed.

Surface data follows the standard Lorentzian graph formulas: for
``t = h(x)`` the future unit normal is ``nu = (1, h') / sqrt(1 - h'^2)``
and the induced measure is ``d mu = sqrt(1 - h'^2) dx``.  In the flux
pairing the index of the normal is lowered, and the two square roots
cancel exactly: ``gamma(nu) d mu = (g0 - h' g1) dx``, the conserved
current form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, RangeError, ResolutionError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class DiracRep:
    """A 2x2 representation of the Clifford algebra for signature (+,-).

    Invariants (validated by :func:`standard_rep` and the test suite):
    ``g^a g^b + g^b g^a = 2 eta^{ab}`` with ``eta = diag(+1,-1)``, and
    ``(g^a)^dag g^0 = g^0 g^a`` so that ``psi^dag g^0 g^a phi`` is the
    component of a conserved current.
    """

    gamma0: np.ndarray
    gamma1: np.ndarray

    def gamma(self, v0: float, v1: float) -> np.ndarray:
        """Clifford multiplication by the tangent vector ``(v0, v1)``."""
        return v0 * self.gamma0 + v1 * self.gamma1

    def anticommutator_defect(self) -> float:
        eta = np.diag([1.0, -1.0])
        gam = (self.gamma0, self.gamma1)
        worst = 0.0
        for a in range(2):
            for b in range(2):
                d = gam[a] @ gam[b] + gam[b] @ gam[a] - 2.0 * eta[a, b] * np.eye(2)
                worst = max(worst, float(np.abs(d).max()))
        return worst

    def spin_symmetry_defect(self) -> float:
        worst = 0.0
        for g in (self.gamma0, self.gamma1):
            d = g.conj().T @ self.gamma0 - self.gamma0 @ g
            worst = max(worst, float(np.abs(d).max()))
        return worst


def standard_rep() -> DiracRep:
    """The off-diagonal representation used throughout this package."""
    rep = DiracRep(
        gamma0=np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
        gamma1=np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex),
    )
    if rep.anticommutator_defect() > 1e-14 or rep.spin_symmetry_defect() > 1e-14:
        raise ConfigError("standard Dirac representation failed its identities")
    return rep


@dataclass(frozen=True)
class SpacetimeModel:
    """One of the two model regions, with its mass and Dirac matrices."""

    kind: str  # "drum" | "slab"
    mass: float
    slab_lifetime: float | None
    rep: DiracRep = field(default_factory=standard_rep, repr=False)

    @property
    def circumference(self) -> float:
        return TWO_PI

    @property
    def volume(self) -> float:
        if self.kind == "drum":
            return math.pi**2
        assert self.slab_lifetime is not None
        return self.slab_lifetime * TWO_PI

    def key(self) -> tuple:
        return (self.kind, self.mass, self.slab_lifetime)


def drum() -> SpacetimeModel:
    """The massless triangle model."""
    return SpacetimeModel(kind="drum", mass=0.0, slab_lifetime=None)


def slab(mass: float, lifetime: float) -> SpacetimeModel:
    """The periodic slab of the given mass and lifetime ``T > 0``."""
    if mass < 0:
        raise RangeError(f"slab mass must be >= 0, got {mass}")
    if lifetime <= 0:
        raise RangeError(f"slab lifetime must be > 0, got {lifetime}")
    return SpacetimeModel(kind="slab", mass=float(mass), slab_lifetime=float(lifetime))


def make_model(kind: str, mass: float = 0.0, slab_lifetime: float = 2.0) -> SpacetimeModel:
    if kind == "drum":
        if mass != 0.0:
            raise ConfigError("drum model is massless; set mass = 0")
        return drum()
    if kind == "slab":
        return slab(mass, slab_lifetime)
    raise ConfigError(f"unknown model kind {kind!r} (expected 'drum' or 'slab')")


def reduce_x(model: SpacetimeModel, x: np.ndarray | float):
    """Reduce spatial coordinates into the fundamental chart.

    Slab coordinates are periodic with period ``2 pi``; drum coordinates
    are returned unchanged.
    """
    if model.kind == "slab":
        return np.mod(x, TWO_PI)
    return x


def contains(model: SpacetimeModel, t, x) -> np.ndarray | bool:
    """Open-domain membership test; vectorized over ``t``, ``x``."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    if model.kind == "drum":
        out = (t > 0.0) & (t < math.pi - np.abs(x))
    else:
        assert model.slab_lifetime is not None
        out = (t > 0.0) & (t < model.slab_lifetime)
    return bool(out) if out.ndim == 0 else out


def contains_closure(model: SpacetimeModel, t, x) -> np.ndarray | bool:
    """Closed-domain membership; mode evaluators extend continuously here."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    if model.kind == "drum":
        out = (t >= 0.0) & (t <= math.pi - np.abs(x) + 1e-15)
    else:
        assert model.slab_lifetime is not None
        out = (t >= 0.0) & (t <= model.slab_lifetime)
    return bool(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class CauchySurface:
    """A spacelike graph surface ``t = h(x)`` of the owning model.

    ``param`` is the tent parameter ``s`` for the drum and the slice time
    ``c`` for the slab.
    """

    model: SpacetimeModel
    param: float

    def h(self, x):
        x = np.asarray(x, dtype=float)
        if self.model.kind == "drum":
            return self.param * (math.pi - np.abs(x))
        return np.full_like(x, self.param)

    def hprime(self, x):
        x = np.asarray(x, dtype=float)
        if self.model.kind == "drum":
            return -self.param * np.sign(x)
        return np.zeros_like(x)

    @property
    def panels(self) -> tuple[tuple[float, float], ...]:
        """Smooth spatial panels; the drum tent is split at its kink x=0."""
        if self.model.kind == "drum":
            return ((-math.pi, 0.0), (0.0, math.pi))
        return ((0.0, TWO_PI),)

    @property
    def measure(self) -> float:
        if self.model.kind == "drum":
            return TWO_PI * math.sqrt(1.0 - self.param**2)
        return TWO_PI


def cauchy_surface(model: SpacetimeModel, param: float) -> CauchySurface:
    """Surface from the model's family; raises RangeError outside it."""
    if model.kind == "drum":
        if not 0.0 <= param < 1.0:
            raise RangeError(f"drum tent parameter must lie in [0, 1), got {param}")
    else:
        assert model.slab_lifetime is not None
        if not 0.0 < param < model.slab_lifetime:
            raise RangeError(
                f"slab slice time must lie in (0, {model.slab_lifetime}), got {param}"
            )
    return CauchySurface(model=model, param=float(param))


@dataclass(frozen=True)
class QuadratureSpec:
    """Gauss-Legendre orders for surface (1D) and volume (per axis) rules.

    ``summation`` names the deterministic accumulation order used by all
    assembly routines; only grid-order reduction is implemented.
    """

    surface_order: int = 128
    volume_order: int = 160
    summation: str = "grid-order"

    def __post_init__(self):
        if self.surface_order < 2 or self.volume_order < 2:
            raise RangeError("quadrature orders must be >= 2")
        if self.summation != "grid-order":
            raise ConfigError(f"unknown summation order {self.summation!r}")

    def key(self) -> tuple:
        return (self.surface_order, self.volume_order, self.summation)


def _max_frequency(model: SpacetimeModel, n_max: int) -> tuple[float, float]:
    """Largest phase frequencies (time, space) among pair products of modes."""
    if model.kind == "drum":
        return (2.0 * n_max, 2.0 * n_max)
    return (2.0 * math.hypot(n_max, model.mass), 2.0 * n_max)


def required_volume_order(model: SpacetimeModel, n_max: int) -> int:
    """Resolution rule: >= 10 nodes per oscillation on each volume axis.

    On the drum both axes reduce to the plain ``10 * n_max`` rule; on the
    slab the time axis must resolve ``2 sqrt(k^2+m^2) T`` radians.
    """
    ft, fx = _max_frequency(model, n_max)
    if model.kind == "drum":
        cycles_t = ft * math.pi / TWO_PI
        cycles_x = fx * math.pi / TWO_PI  # per panel
    else:
        assert model.slab_lifetime is not None
        cycles_t = ft * model.slab_lifetime / TWO_PI
        cycles_x = fx  # full circle, 2 pi / (2 pi) = 1
    return max(2, math.ceil(10.0 * max(cycles_t, cycles_x)))


def required_surface_order(surface: CauchySurface, n_max: int) -> int:
    """Per-panel node requirement for the restriction of modes to a surface."""
    if surface.model.kind == "drum":
        # phase along the tent: n (x +- s(pi - |x|)), slope up to n (1 + s)
        cycles = 2.0 * n_max * (1.0 + abs(surface.param)) * math.pi / TWO_PI
    else:
        cycles = 2.0 * n_max
    return max(2, math.ceil(10.0 * cycles))


def check_surface_resolution(surface: CauchySurface, spec: QuadratureSpec, n_max: int) -> None:
    need = required_surface_order(surface, n_max)
    if spec.surface_order < need:
        raise ResolutionError(
            f"surface order {spec.surface_order} < required {need} for n_max={n_max}"
        )


def check_volume_resolution(model: SpacetimeModel, spec: QuadratureSpec, n_max: int) -> None:
    need = required_volume_order(model, n_max)
    if spec.volume_order < need:
        raise ResolutionError(
            f"volume order {spec.volume_order} < required {need} for n_max={n_max}"
        )


def recommended_spec(model: SpacetimeModel, n_max: int) -> QuadratureSpec:
    """A spec with ~25% margin over the resolution rule (worst-case surface)."""
    surf = required_surface_order(CauchySurface(model, 0.6 if model.kind == "drum" else 1.0), n_max)
    vol = required_volume_order(model, n_max)
    return QuadratureSpec(
        surface_order=max(64, math.ceil(1.25 * surf)),
        volume_order=max(64, math.ceil(1.25 * vol)),
    )


@dataclass(frozen=True)
class SurfaceQuadrature:
    """Nodes on a Cauchy surface with future unit normals and d-mu weights."""

    surface: CauchySurface
    points: np.ndarray  # (n, 2) columns (t, x)
    normals: np.ndarray  # (n, 2) future-directed unit normals
    weights: np.ndarray  # (n,) induced-measure weights


@dataclass(frozen=True)
class VolumeQuadrature:
    points: np.ndarray  # (n, 2)
    weights: np.ndarray  # (n,)


def _gl(order: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def surface_quadrature(surface: CauchySurface, spec: QuadratureSpec) -> SurfaceQuadrature:
    """Gauss-Legendre rule along the surface, one panel per smooth piece.

    Weights carry the induced measure ``sqrt(1-h'^2) dx`` and ``normals``
    the unit future normal vector, so the index-lowered flux combination
    ``gamma(nu) * w`` reproduces ``(g0 - h' g1) dx`` with the square
    roots cancelling.
    """
    xs, ws = [], []
    for a, b in surface.panels:
        x, w = _gl(spec.surface_order, a, b)
        xs.append(x)
        ws.append(w)
    x = np.concatenate(xs)
    wx = np.concatenate(ws)
    t = surface.h(x)
    hp = surface.hprime(x)
    root = np.sqrt(1.0 - hp**2)
    normals = np.stack([1.0 / root, hp / root], axis=1)
    weights = wx * root
    points = np.stack([t, x], axis=1)
    return SurfaceQuadrature(surface=surface, points=points, normals=normals, weights=weights)


def volume_quadrature(model: SpacetimeModel, spec: QuadratureSpec) -> VolumeQuadrature:
    """Iterated Gauss-Legendre rule over the model region.

    Drum: outer x over the two half-panels, inner t over (0, pi - |x|).
    Slab: tensor grid on (0, T) x (0, 2 pi).
    """
    n = spec.volume_order
    if model.kind == "drum":
        pts, wts = [], []
        for a, b in ((-math.pi, 0.0), (0.0, math.pi)):
            x, wx = _gl(n, a, b)
            for xi, wxi in zip(x, wx):
                tmax = math.pi - abs(xi)
                t, wt = _gl(n, 0.0, tmax)
                pts.append(np.stack([t, np.full(n, xi)], axis=1))
                wts.append(wt * wxi)
        return VolumeQuadrature(points=np.concatenate(pts), weights=np.concatenate(wts))
    assert model.slab_lifetime is not None
    t, wt = _gl(n, 0.0, model.slab_lifetime)
    x, wx = _gl(n, 0.0, TWO_PI)
    tt = np.repeat(t, n)
    xx = np.tile(x, n)
    ww = np.repeat(wt, n) * np.tile(wx, n)
    return VolumeQuadrature(points=np.stack([tt, xx], axis=1), weights=ww)
