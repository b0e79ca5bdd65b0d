"""Symmetry actions, their unitary matrices, and generators.

Every supported action is affine on coordinates, ``f(p) = J p + b`` with
a constant Jacobian ``J`` satisfying ``J^T eta J = eta``, and carries a
constant spinor matrix ``Phi`` intertwining the Clifford action,
``gamma(J u) = Phi gamma(u) Phi^{-1}``, together with the sign
``epsilon = +-1`` of ``Phi^dag g0 Phi = epsilon g0`` (``-1`` exactly when
the time orientation is reversed).

Lifts are hard-coded per model: parity is ``(t,x) -> (t,-x)`` with
``Phi = g0`` on both models, the slab time reflection is
``(t,x) -> (T-t,x)`` with ``Phi = g1`` (the 2D intertwiner playing the
role of the 4D ``g5 g0``; any other choice differs by a phase), and slab
translations ``(t,x) -> (t,x+a)`` carry ``Phi = Id``.  Note
``Phi_T^2 = -Id``: the time-reflection lift is projective, which drops
out of every identity quadratic in the unitaries.

Pushing a solution forward, ``((Phi)_* psi)(f(p)) = Phi psi(p)``, yields
another solution; on the truncated span this gives a Gram-unitary matrix
``U`` (columns are Gram projections of pushed-forward basis modes, and a
span-escape is an error, never a silent projection).  One-parameter
translation subgroups are differentiated by 2nd-order central
differences to produce the generator ``X = -i dU/dtau|_0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import models as geo
from .errors import (
    AxiomViolationError,
    ModelMismatchError,
    RangeError,
    SpanEscapeError,
    SupportEscapeError,
    UnsupportedSymmetryError,
)
from .sigop import OperatorMatrix
from .solutions import Basis, TestFunction, mode_matrix, surface_flux_pair

_ETA = np.diag([1.0, -1.0])
AXIOM_TOL = 1e-12
SPAN_TOL = 1e-8


@dataclass(frozen=True)
class SymmetryAction:
    """An affine isometry with spinor lift and time-orientation sign."""

    name: str
    model: geo.SpacetimeModel
    jacobian: np.ndarray  # (2,2) real
    offset: np.ndarray  # (2,)
    spinor_matrix: np.ndarray  # (2,2) complex
    epsilon: int
    group_tag: tuple

    def apply(self, points: np.ndarray) -> np.ndarray:
        return points @ self.jacobian.T + self.offset[None, :]

    def inverse_apply(self, points: np.ndarray) -> np.ndarray:
        jinv = np.linalg.inv(self.jacobian)
        return (points - self.offset[None, :]) @ jinv.T

    def isometry_defect(self) -> float:
        return float(np.abs(self.jacobian.T @ _ETA @ self.jacobian - _ETA).max())

    def clifford_defect(self) -> float:
        rep = self.model.rep
        phi_inv = np.linalg.inv(self.spinor_matrix)
        worst = 0.0
        for u in (np.array([1.0, 0.0]), np.array([0.0, 1.0])):
            ju = self.jacobian @ u
            d = rep.gamma(ju[0], ju[1]) - self.spinor_matrix @ rep.gamma(u[0], u[1]) @ phi_inv
            worst = max(worst, float(np.abs(d).max()))
        return worst

    def spin_sign_defect(self) -> float:
        rep = self.model.rep
        d = self.spinor_matrix.conj().T @ rep.gamma0 @ self.spinor_matrix - self.epsilon * rep.gamma0
        return float(np.abs(d).max())

    def validate(self) -> None:
        for label, defect in (
            ("isometry", self.isometry_defect()),
            ("clifford", self.clifford_defect()),
            ("spin-sign", self.spin_sign_defect()),
        ):
            if defect > AXIOM_TOL:
                raise AxiomViolationError(f"{self.name}: {label} identity fails by {defect:.3e}")


def make_action(model: geo.SpacetimeModel, name: str, parameter: float | None = None) -> SymmetryAction:
    """Construct a named action; name may embed a parameter as ``translate:<a>``."""
    rep = model.rep
    if ":" in name and parameter is None:
        name, raw = name.split(":", 1)
        parameter = float(raw)
    name = name.replace("_", "-")
    if name == "identity":
        act = SymmetryAction(
            name="identity",
            model=model,
            jacobian=np.eye(2),
            offset=np.zeros(2),
            spinor_matrix=np.eye(2, dtype=complex),
            epsilon=1,
            group_tag=("identity",),
        )
    elif name == "parity":
        act = SymmetryAction(
            name="parity",
            model=model,
            jacobian=np.diag([1.0, -1.0]),
            offset=np.zeros(2),
            spinor_matrix=rep.gamma0.copy(),
            epsilon=1,
            group_tag=("parity",),
        )
    elif name == "time-reflection":
        if model.kind != "slab":
            raise UnsupportedSymmetryError("time reflection is only defined on the slab")
        act = SymmetryAction(
            name="time-reflection",
            model=model,
            jacobian=np.diag([-1.0, 1.0]),
            offset=np.array([model.slab_lifetime, 0.0]),
            spinor_matrix=rep.gamma1.copy(),
            epsilon=-1,
            group_tag=("time-reflection",),
        )
    elif name == "translate":
        if model.kind != "slab":
            raise UnsupportedSymmetryError("translations are only defined on the slab")
        if parameter is None:
            raise UnsupportedSymmetryError("translate requires a parameter, e.g. translate:0.5")
        act = SymmetryAction(
            name=f"translate:{parameter:g}",
            model=model,
            jacobian=np.eye(2),
            offset=np.array([0.0, float(parameter)]),
            spinor_matrix=np.eye(2, dtype=complex),
            epsilon=1,
            group_tag=("translate", float(parameter)),
        )
    else:
        raise UnsupportedSymmetryError(f"unknown symmetry {name!r} for model {model.kind!r}")
    act.validate()
    return act


def compose(a: SymmetryAction, b: SymmetryAction) -> SymmetryAction:
    """The action with point map ``f_a o f_b`` and lift ``Phi_a Phi_b``."""
    if a.model.key() != b.model.key():
        raise ModelMismatchError("cannot compose actions of different models")
    return SymmetryAction(
        name=f"{a.name}*{b.name}",
        model=a.model,
        jacobian=a.jacobian @ b.jacobian,
        offset=a.jacobian @ b.offset + a.offset,
        spinor_matrix=a.spinor_matrix @ b.spinor_matrix,
        epsilon=a.epsilon * b.epsilon,
        group_tag=("compose", a.group_tag, b.group_tag),
    )


def epsilon_of(action: SymmetryAction) -> int:
    """Time-orientation sign read off the Jacobian; must match the stored one."""
    sign = 1 if (action.jacobian @ np.array([1.0, 0.0]))[0] > 0 else -1
    if sign != action.epsilon:
        raise AxiomViolationError(
            f"{action.name}: stored epsilon {action.epsilon} contradicts jacobian sign {sign}"
        )
    return sign


@dataclass(frozen=True)
class PushedField:
    """The pushforward ``p -> Phi psi(f^{-1}(p))`` of a solution or bump."""

    action: SymmetryAction
    source: object

    @property
    def model(self) -> geo.SpacetimeModel:
        return self.action.model

    @property
    def resolution_bound(self) -> int:
        return int(getattr(self.source, "resolution_bound", 1))

    def values(self, points: np.ndarray) -> np.ndarray:
        pre = self.action.inverse_apply(points)
        vals = self.source.values(pre)
        return vals @ self.action.spinor_matrix.T


def pushforward(action: SymmetryAction, psi) -> PushedField:
    if psi.model.key() != action.model.key():
        raise ModelMismatchError("solution belongs to a different model")
    return PushedField(action=action, source=psi)


def pushforward_test_function(action: SymmetryAction, fn: TestFunction) -> PushedField:
    """Pushforward of a compactly supported bump, with support-escape guard."""
    t0, x0 = fn.center
    wt, wx = fn.widths
    corners = np.array(
        [[t0 - wt, x0 - wx], [t0 - wt, x0 + wx], [t0 + wt, x0 - wx], [t0 + wt, x0 + wx]]
    )
    image = action.apply(corners)
    tlo, thi = image[:, 0].min(), image[:, 0].max()
    model = action.model
    if model.kind == "drum":
        xmax = np.abs(image[:, 1]).max()
        inside = tlo > 0 and thi < math.pi - xmax
    else:
        inside = tlo > 0 and thi < model.slab_lifetime  # x periodic, cannot escape
    if not inside:
        raise SupportEscapeError(f"{action.name}: transformed support leaves the domain")
    return PushedField(action=action, source=fn)


def unitary_matrix(
    action: SymmetryAction, basis: Basis, spec: geo.QuadratureSpec | None = None
) -> OperatorMatrix:
    """Matrix of the unitary implementing the action on the truncated span.

    Columns are Gram projections of the pushed-forward basis modes; if a
    pushed mode is not (numerically) in the span, this aborts with a
    span-escape error.
    """
    if basis.model.key() != action.model.key():
        raise ModelMismatchError("action and basis live on different models")
    if spec is None:
        spec = basis.spec
    surface = geo.CauchySurface(basis.model, basis.gram_param)
    geo.check_surface_resolution(surface, spec, basis.bound)
    quad = geo.surface_quadrature(surface, spec)
    E = mode_matrix(basis.modes, quad.points)
    pre = action.inverse_apply(quad.points)
    Epush = mode_matrix(basis.modes, pre) @ action.spinor_matrix.T
    B = surface_flux_pair(E, Epush, quad, basis.model.rep)
    pushed_norms = np.diag(surface_flux_pair(Epush, Epush, quad, basis.model.rep)).real
    U = np.linalg.solve(basis.gram, B)
    # residual field of the Gram projection, evaluated pointwise to avoid
    # the cancellation floor of subtracting two nearly equal norms
    recon = np.einsum("nac,aj->njc", E, U)
    resid_field = Epush - recon
    resid_sq = np.maximum(
        np.diag(surface_flux_pair(resid_field, resid_field, quad, basis.model.rep)).real, 0.0
    )
    rel = np.sqrt(resid_sq / np.maximum(pushed_norms, 1e-300))
    if rel.max() > SPAN_TOL:
        worst = int(np.argmax(rel))
        raise SpanEscapeError(
            f"{action.name}: pushforward of mode {basis.labels[worst]} leaves the span "
            f"(relative residual {rel.max():.3e})"
        )
    return OperatorMatrix(entries=U, basis=basis)


@dataclass(frozen=True)
class GeneratorSpec:
    """Finite-difference recipe for a one-parameter subgroup generator."""

    killing: str = "spatial-translation"
    delta: float = 1e-3
    scheme: str = "central-2"

    def __post_init__(self):
        if not 0.0 < self.delta <= 0.1:
            raise RangeError(f"generator step must lie in (0, 0.1], got {self.delta}")
        if self.scheme != "central-2":
            raise UnsupportedSymmetryError(f"unknown scheme {self.scheme!r}")
        if self.killing != "spatial-translation":
            raise UnsupportedSymmetryError(f"unknown Killing direction {self.killing!r}")


def generator_matrix(
    gen: GeneratorSpec, basis: Basis, spec: geo.QuadratureSpec | None = None
) -> OperatorMatrix:
    """Generator ``X = -i (U(d) - U(-d)) / (2 d)`` of slab translations."""
    if basis.model.kind != "slab":
        raise UnsupportedSymmetryError("only slab translations form a one-parameter subgroup")
    up = unitary_matrix(make_action(basis.model, "translate", gen.delta), basis, spec)
    um = unitary_matrix(make_action(basis.model, "translate", -gen.delta), basis, spec)
    entries = -1j * (up.entries - um.entries) / (2.0 * gen.delta)
    return OperatorMatrix(entries=entries, basis=basis)


def exact_translation_generator(basis: Basis) -> OperatorMatrix:
    """Closed-form generator diag(-k_j); finite differences converge to it
    at 2nd order."""
    if basis.model.kind != "slab":
        raise UnsupportedSymmetryError("translations are only defined on the slab")
    return OperatorMatrix(
        entries=np.diag([-float(m.momentum) for m in basis.modes]).astype(complex), basis=basis
    )


def hamiltonian_matrix(basis: Basis) -> OperatorMatrix:
    """Generator of drum time translations, diagonal on the chiral modes
    (eigenvalue -n on L, +n on R)."""
    if basis.model.kind != "drum" or basis.model.mass != 0.0:
        raise ModelMismatchError("the time-translation generator is built on the massless drum")
    return OperatorMatrix(
        entries=np.diag([m.frequency for m in basis.modes]).astype(complex), basis=basis
    )
