"""Assembly and spectral calculus of the signature operator.

The space-time inner product ``<psi|phi> = integral_M psi^dag g0 phi`` is
represented on a truncated basis by the Hermitian pairing matrix
``A_jk = <e_j|e_k>``.  Relative to the Cauchy-surface Gram matrix ``G``
the signature operator is the coefficient matrix ``S = G^{-1} A``; it is
self-adjoint for the Gram-induced product (``adjoint(M) = G^{-1} M^dag G``)
and diagonalized by the generalized Hermitian eigenproblem
``A v = lambda G v``.

The causal fundamental solution is never built from Green's operators.
Instead its basis projection uses the duality ``<phi|psi> = (k phi|psi)``
valid for every solution ``psi``: in coefficients, ``kappa = G^{-1} b``
with ``b_j = conj(<phi|e_j>)``.  Smearing a bounded Borel weight ``W``
then gives the two-point pairing
``<phi|P_W psi> = -(kappa_phi | W(S) kappa_psi)_G``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from . import models as geo
from .config import canonical_json, content_hash
from .errors import (
    ConditioningError,
    HermiticityError,
    ModelMismatchError,
    SchemaError,
)
from .solutions import Basis, mode_matrix, surface_flux_matrix

GRAM_CONDITION_LIMIT = 1e12
HERMITICITY_RTOL = 1e-8

# cap on complex entries held per evaluation chunk (~64 MB)
_CHUNK_ENTRIES = 4_000_000


@dataclass(frozen=True)
class OperatorMatrix:
    """A dense operator in basis coefficients, with Gram-aware adjoint."""

    entries: np.ndarray
    basis: Basis
    pairing: np.ndarray | None = None  # raw Hermitian matrix <e_j|e_k> when known

    @property
    def gram(self) -> np.ndarray:
        return self.basis.gram

    def adjoint_entries(self) -> np.ndarray:
        G = self.gram
        return np.linalg.solve(G, self.entries.conj().T @ G)


def gram_adjoint(entries: np.ndarray, gram: np.ndarray) -> np.ndarray:
    return np.linalg.solve(gram, entries.conj().T @ gram)


def hermiticity_defect(A: np.ndarray) -> float:
    """Relative Frobenius defect ``||A - A^dag|| / ||A||``."""
    scale = np.linalg.norm(A)
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(A - A.conj().T) / scale)


def require_well_conditioned(gram: np.ndarray) -> None:
    cond = float(np.linalg.cond(gram))
    if not np.isfinite(cond) or cond > GRAM_CONDITION_LIMIT:
        raise ConditioningError(f"Gram condition number {cond:.3e} exceeds {GRAM_CONDITION_LIMIT:.0e}")


def _solution_bound(psi) -> int:
    """Largest mode index a field can contain, for the resolution rule.

    Smooth compactly supported bumps carry no mode bound and count as 1.
    """
    return int(getattr(psi, "resolution_bound", 1))


def _require_same_model(psi, phi) -> geo.SpacetimeModel:
    if psi.model.key() != phi.model.key():
        raise ModelMismatchError(
            f"operands live on different models: {psi.model.key()} vs {phi.model.key()}"
        )
    return psi.model


def cauchy_inner(psi, phi, surface: geo.CauchySurface, spec: geo.QuadratureSpec) -> complex:
    """Scalar product ``2 pi * integral_N <psi|gamma(nu) phi> d mu`` on one surface."""
    model = _require_same_model(psi, phi)
    if surface.model.key() != model.key():
        raise ModelMismatchError("surface belongs to a different model")
    bound = max(_solution_bound(psi), _solution_bound(phi), 1)
    geo.check_surface_resolution(surface, spec, bound)
    quad = geo.surface_quadrature(surface, spec)
    vals = np.stack([psi.values(quad.points), phi.values(quad.points)], axis=1)
    return complex(surface_flux_matrix(vals, quad, model.rep)[0, 1])


def _volume_pairing(left_vals, right_vals, weights, gamma0) -> np.ndarray:
    P = np.einsum("nja,ab->njb", left_vals.conj(), gamma0)
    return np.tensordot(P * weights[:, None, None], right_vals, axes=([0, 2], [0, 2]))


def spacetime_inner(psi, phi, model: geo.SpacetimeModel, spec: geo.QuadratureSpec) -> complex:
    """Space-time inner product ``integral_M psi^dag g0 phi`` by volume quadrature."""
    _require_same_model(psi, phi)
    bound = max(_solution_bound(psi), _solution_bound(phi), 1)
    geo.check_volume_resolution(model, spec, bound)
    quad = geo.volume_quadrature(model, spec)
    lv = psi.values(quad.points)[:, None, :]
    rv = phi.values(quad.points)[:, None, :]
    return complex(_volume_pairing(lv, rv, quad.weights, model.rep.gamma0)[0, 0])


def assemble_pairing(basis: Basis, spec: geo.QuadratureSpec) -> np.ndarray:
    """The Hermitian matrix ``A_jk = <e_j|e_k>`` over the whole region."""
    geo.check_volume_resolution(basis.model, spec, basis.bound)
    quad = geo.volume_quadrature(basis.model, spec)
    gamma0 = basis.model.rep.gamma0
    dim = basis.dim
    A = np.zeros((dim, dim), dtype=complex)
    chunk = max(1, _CHUNK_ENTRIES // max(dim, 1))
    for start in range(0, quad.points.shape[0], chunk):
        pts = quad.points[start : start + chunk]
        w = quad.weights[start : start + chunk]
        E = mode_matrix(basis.modes, pts)
        A += _volume_pairing(E, E, w, gamma0)
    return A


def assemble_signature(
    basis: Basis, spec: geo.QuadratureSpec, pairing: np.ndarray | None = None
) -> OperatorMatrix:
    """Coefficient matrix ``G^{-1} A`` of the signature operator on the span."""
    require_well_conditioned(basis.gram)
    A = assemble_pairing(basis, spec) if pairing is None else pairing
    entries = np.linalg.solve(basis.gram, A)
    return OperatorMatrix(entries=entries, basis=basis, pairing=A)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Solution of ``A v = lambda G v`` with G-orthonormal eigenvectors."""

    eigenvalues: np.ndarray  # real, ascending
    vectors: np.ndarray  # columns v_i with v_i^dag G v_j = delta_ij
    basis: Basis


def spectral_decompose(op: OperatorMatrix) -> SpectralDecomposition:
    G = op.gram
    A = op.pairing if op.pairing is not None else G @ op.entries
    defect = hermiticity_defect(A)
    if defect > HERMITICITY_RTOL:
        raise HermiticityError(f"pairing matrix is not Hermitian (defect {defect:.3e})")
    A = 0.5 * (A + A.conj().T)
    w, v = scipy.linalg.eigh(A, G)
    return SpectralDecomposition(eigenvalues=w, vectors=v, basis=op.basis)


@dataclass(frozen=True)
class BorelFunction:
    """A named bounded Borel weight on the real line."""

    name: str
    fn: Callable[[np.ndarray], np.ndarray]

    def __call__(self, lam: np.ndarray) -> np.ndarray:
        return self.fn(np.asarray(lam, dtype=float))


def indicator_negative() -> BorelFunction:
    return BorelFunction("indicator_negative", lambda lam: (lam < 0.0).astype(float))


def constant_one() -> BorelFunction:
    return BorelFunction("constant_one", lambda lam: np.ones_like(lam))


def constant_zero() -> BorelFunction:
    return BorelFunction("constant_zero", lambda lam: np.zeros_like(lam))


def identity_weight() -> BorelFunction:
    return BorelFunction("identity", lambda lam: lam)


def smooth_step(beta: float = 10.0) -> BorelFunction:
    """Fermi-type step ``1 / (1 + e^{beta lambda})``; smooth stand-in for the
    negative-spectrum indicator."""
    return BorelFunction(f"smooth_step:{beta:g}", lambda lam: 1.0 / (1.0 + np.exp(beta * lam)))


def make_weight(name: str) -> BorelFunction:
    if name == "indicator_negative":
        return indicator_negative()
    if name == "constant_one":
        return constant_one()
    if name == "constant_zero":
        return constant_zero()
    if name == "identity":
        return identity_weight()
    if name.startswith("smooth_step"):
        beta = float(name.split(":", 1)[1]) if ":" in name else 10.0
        return smooth_step(beta)
    raise SchemaError(f"unknown Borel weight {name!r}")


def reflect_weight(W: BorelFunction, epsilon: int) -> BorelFunction:
    """The transformed weight ``lambda -> W(epsilon * lambda)``."""
    if epsilon == 1:
        return W
    return BorelFunction(f"{W.name}@reflected", lambda lam: W.fn(epsilon * np.asarray(lam, dtype=float)))


def functional_calculus(dec: SpectralDecomposition, W: BorelFunction) -> OperatorMatrix:
    """Coefficient matrix of ``W(S) = sum_i W(lambda_i) v_i (v_i|.)_G``."""
    V = dec.vectors
    wl = W(dec.eigenvalues)
    entries = (V * wl[None, :]) @ V.conj().T @ dec.basis.gram
    return OperatorMatrix(entries=entries, basis=dec.basis)


def k_project(phi, basis: Basis, spec: geo.QuadratureSpec) -> np.ndarray:
    """Coefficients of the span projection of the causal fundamental solution
    applied to ``phi``, via the duality ``<phi|psi> = (k phi|psi)``."""
    geo.check_volume_resolution(basis.model, spec, basis.bound)
    quad = geo.volume_quadrature(basis.model, spec)
    gamma0 = basis.model.rep.gamma0
    fv = phi.values(quad.points)[:, None, :]
    dim = basis.dim
    overlaps = np.zeros(dim, dtype=complex)
    chunk = max(1, _CHUNK_ENTRIES // max(dim, 1))
    for start in range(0, quad.points.shape[0], chunk):
        pts = quad.points[start : start + chunk]
        w = quad.weights[start : start + chunk]
        E = mode_matrix(basis.modes, pts)
        overlaps += _volume_pairing(fv[start : start + chunk], E, w, gamma0)[0]
    return np.linalg.solve(basis.gram, overlaps.conj())


def projector_smear(
    phi,
    psi,
    W: BorelFunction,
    dec: SpectralDecomposition,
    spec: geo.QuadratureSpec,
) -> complex:
    """Smeared two-point pairing ``<phi|P_W psi> = -(k phi | W(S) k psi)_G``."""
    basis = dec.basis
    kf = k_project(phi, basis, spec)
    kp = k_project(psi, basis, spec)
    return smear_coefficients(kf, kp, W, dec)


def smear_coefficients(
    kf: np.ndarray, kp: np.ndarray, W: BorelFunction, dec: SpectralDecomposition
) -> complex:
    G = dec.basis.gram
    y = dec.vectors.conj().T @ (G @ kp)
    q = dec.vectors @ (W(dec.eigenvalues) * y)
    return complex(-(kf.conj() @ G @ q))


# ---------------------------------------------------------------------------
# matrix document (schema sigop-matrix/1)
# ---------------------------------------------------------------------------


def _split(M: np.ndarray) -> dict:
    return {"re": M.real.tolist(), "im": M.imag.tolist()}


def _join(d: dict) -> np.ndarray:
    return np.asarray(d["re"], dtype=float) + 1j * np.asarray(d["im"], dtype=float)


def assembly_key(model: geo.SpacetimeModel, bound: int, spec: geo.QuadratureSpec) -> str:
    """Content hash of the assembly inputs; also the disk-cache key."""
    return content_hash(
        {
            "model": model.kind,
            "mass": model.mass,
            "slab_lifetime": model.slab_lifetime,
            "n_max": bound,
            "quad": {
                "surface_order": spec.surface_order,
                "volume_order": spec.volume_order,
                "summation": spec.summation,
            },
        }
    )


def build_document(basis: Basis, spec: geo.QuadratureSpec, pairing: np.ndarray) -> dict:
    model = basis.model
    return {
        "schema": "sigop-matrix/1",
        "model": model.kind,
        "mass": model.mass,
        "slab_lifetime": model.slab_lifetime,
        "basis_labels": basis.labels,
        "truncation": basis.bound,
        "model_hash": content_hash(
            {"model": model.kind, "mass": model.mass, "slab_lifetime": model.slab_lifetime}
        ),
        "gram": _split(basis.gram),
        "matrix": _split(pairing),
        "quad": {
            "surface_order": spec.surface_order,
            "volume_order": spec.volume_order,
            "summation": spec.summation,
        },
        "content_hash": assembly_key(model, basis.bound, spec),
    }


def render_document(doc: dict) -> str:
    return canonical_json(doc) + "\n"


def parse_document(doc: dict) -> tuple[np.ndarray, np.ndarray, dict]:
    """Return (gram, matrix, metadata) from a sigop-matrix/1 mapping."""
    if not isinstance(doc, dict) or doc.get("schema") != "sigop-matrix/1":
        raise SchemaError("not a sigop-matrix/1 document")
    try:
        gram = _join(doc["gram"])
        matrix = _join(doc["matrix"])
        meta = {k: doc[k] for k in ("model", "mass", "basis_labels", "truncation", "content_hash")}
        meta["slab_lifetime"] = doc.get("slab_lifetime")
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed sigop-matrix/1 document: {exc}") from exc
    if gram.shape != matrix.shape or gram.shape[0] != gram.shape[1]:
        raise SchemaError("gram/matrix shapes disagree or are not square")
    return gram, matrix, meta


def spectrum_of_document(doc: dict) -> tuple[np.ndarray, dict]:
    """Ascending eigenvalues of ``A v = lambda G v`` for an exported document."""
    gram, matrix, meta = parse_document(doc)
    if np.count_nonzero(matrix) == 0:
        return np.zeros(matrix.shape[0]), meta
    defect = hermiticity_defect(matrix)
    if defect > HERMITICITY_RTOL:
        raise HermiticityError(f"document matrix is not Hermitian (defect {defect:.3e})")
    require_well_conditioned(gram)
    matrixh = 0.5 * (matrix + matrix.conj().T)
    w = scipy.linalg.eigh(matrixh, gram, eigvals_only=True)
    return w, meta
