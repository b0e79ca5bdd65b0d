import math

import numpy as np
import pytest

from diracsig import models as geo
from diracsig import sigop, symmetry
from diracsig.errors import (
    AxiomViolationError,
    ModelMismatchError,
    RangeError,
    SpanEscapeError,
    UnsupportedSymmetryError,
)
from diracsig.solutions import Basis, dirac_residual

from conftest import interior_points


def test_parity_lift_relations():
    model = geo.drum()
    rep = model.rep
    act = symmetry.make_action(model, "parity")
    phi = act.spinor_matrix
    assert np.abs(phi.conj().T @ rep.gamma0 @ phi - rep.gamma0).max() < 1e-12
    assert np.abs(phi @ rep.gamma1 @ np.linalg.inv(phi) + rep.gamma1).max() < 1e-12
    assert act.epsilon == 1


def test_time_reflection_lift_relations(slab_model):
    rep = slab_model.rep
    act = symmetry.make_action(slab_model, "time-reflection")
    phi = act.spinor_matrix
    phi_inv = np.linalg.inv(phi)
    assert np.abs(phi @ rep.gamma0 @ phi_inv + rep.gamma0).max() < 1e-12
    assert np.abs(phi @ rep.gamma1 @ phi_inv - rep.gamma1).max() < 1e-12
    assert np.abs(phi.conj().T @ rep.gamma0 @ phi + rep.gamma0).max() < 1e-12
    assert act.epsilon == -1


def test_translation_action(slab_model):
    act = symmetry.make_action(slab_model, "translate", 0.5)
    assert np.array_equal(act.jacobian, np.eye(2))
    assert act.epsilon == 1
    parsed = symmetry.make_action(slab_model, "translate:0.5")
    assert parsed.name == act.name


def test_unsupported_symmetries(slab_model):
    drum = geo.drum()
    with pytest.raises(UnsupportedSymmetryError):
        symmetry.make_action(drum, "time-reflection")
    with pytest.raises(UnsupportedSymmetryError):
        symmetry.make_action(drum, "translate", 0.3)
    with pytest.raises(UnsupportedSymmetryError):
        symmetry.make_action(slab_model, "boost")
    with pytest.raises(UnsupportedSymmetryError):
        symmetry.make_action(slab_model, "translate")  # parameter required


def test_epsilon_of(slab_model):
    assert symmetry.epsilon_of(symmetry.make_action(slab_model, "parity")) == 1
    tr = symmetry.make_action(slab_model, "time-reflection")
    assert symmetry.epsilon_of(tr) == -1
    squared = symmetry.compose(tr, tr)
    assert symmetry.epsilon_of(squared) == 1
    # tampered sign is detected
    bad = symmetry.SymmetryAction(
        name="bad",
        model=slab_model,
        jacobian=np.diag([-1.0, 1.0]),
        offset=np.array([slab_model.slab_lifetime, 0.0]),
        spinor_matrix=tr.spinor_matrix,
        epsilon=+1,
        group_tag=("bad",),
    )
    with pytest.raises(AxiomViolationError):
        symmetry.epsilon_of(bad)


def test_axiom_suite_and_domain_preservation(slab_model, rng):
    drum = geo.drum()
    actions = [
        symmetry.make_action(drum, "parity"),
        symmetry.make_action(slab_model, "parity"),
        symmetry.make_action(slab_model, "time-reflection"),
        symmetry.make_action(slab_model, "translate", 0.7),
    ]
    for act in actions:
        assert act.isometry_defect() < 1e-12
        assert act.clifford_defect() < 1e-12
        assert act.spin_sign_defect() < 1e-12
        pts = interior_points(act.model, rng, count=50)
        image = act.apply(pts)
        x = geo.reduce_x(act.model, image[:, 1])
        assert geo.contains(act.model, image[:, 0], x).all()


def test_projective_time_reflection_square(slab_model):
    tr = symmetry.make_action(slab_model, "time-reflection")
    sq = symmetry.compose(tr, tr)
    # the point map is the identity but the lift squares to -Id (projective
    # sign of the 2D spinor lift); every quadratic identity is unaffected
    assert np.abs(sq.jacobian - np.eye(2)).max() == 0.0
    assert np.abs(sq.offset).max() == 0.0
    assert np.abs(sq.spinor_matrix + np.eye(2)).max() < 1e-15
    assert sq.epsilon == 1


def test_pushforward_closed_forms(drum4, slab4, rng):
    # drum parity maps (L, n) modes onto (R, -n) modes
    act = symmetry.make_action(drum4.model, "parity")
    pts = interior_points(drum4.model, rng, count=20)
    for n in (1, 2, -3):
        src = drum4.modes[drum4.index(f"L{n:+d}")]
        dst = drum4.modes[drum4.index(f"R{-n:+d}")]
        pushed = symmetry.pushforward(act, src)
        assert np.abs(pushed.values(pts) - dst.values(pts)).max() < 1e-12

    # slab translation multiplies momentum-k modes by a phase
    a = 0.8
    tact = symmetry.make_action(slab4.model, "translate", a)
    spts = interior_points(slab4.model, rng, count=20)
    for label in ("k+2:pos", "k-1:neg"):
        mode = slab4.modes[slab4.index(label)]
        pushed = symmetry.pushforward(tact, mode)
        phase = np.exp(-1j * mode.momentum * a)
        assert np.abs(pushed.values(spts) - phase * mode.values(spts)).max() < 1e-12

    ident = symmetry.make_action(slab4.model, "identity")
    mode = slab4.modes[0]
    assert np.abs(symmetry.pushforward(ident, mode).values(spts) - mode.values(spts)).max() == 0.0


def test_pushforward_is_solution(slab4, rng):
    act = symmetry.make_action(slab4.model, "time-reflection")
    pushed = symmetry.pushforward(act, slab4.modes[slab4.index("k+2:pos")])
    pts = interior_points(slab4.model, rng, count=60)
    assert dirac_residual(slab4.model, pushed.values, pts) < 1e-6


def test_pushforward_model_mismatch(drum4, slab_model):
    act = symmetry.make_action(slab_model, "parity")
    with pytest.raises(ModelMismatchError):
        symmetry.pushforward(act, drum4.modes[0])


def test_scalar_product_preservation(slab4, spec_full):
    """(pushforward psi | pushforward phi) = (psi|phi), including eps = -1."""
    surface = geo.cauchy_surface(slab4.model, slab4.model.slab_lifetime / 2)
    for name in ("parity", "time-reflection"):
        act = symmetry.make_action(slab4.model, name)
        for j in (0, 3):
            for k in (0, 3, 7):
                pa = symmetry.pushforward(act, slab4.modes[j])
                pb = symmetry.pushforward(act, slab4.modes[k])
                lhs = sigop.cauchy_inner(pa, pb, surface, spec_full)
                rhs = sigop.cauchy_inner(slab4.modes[j], slab4.modes[k], surface, spec_full)
                assert abs(lhs - rhs) < 1e-6 * (4 * math.pi**2)


def test_unitary_matrices(drum4, slab4):
    a = 0.7
    U = symmetry.unitary_matrix(symmetry.make_action(slab4.model, "translate", a), slab4)
    ideal = np.diag([np.exp(-1j * m.momentum * a) for m in slab4.modes])
    assert np.abs(U.entries - ideal).max() < 1e-10

    UP = symmetry.unitary_matrix(symmetry.make_action(drum4.model, "parity"), drum4)
    for j, m in enumerate(drum4.modes):
        chir, n = m.data
        target = drum4.index(f"{'R' if chir == 'L' else 'L'}{-n:+d}")
        col = UP.entries[:, j]
        assert abs(col[target] - 1.0) < 1e-10
        assert np.abs(np.delete(col, target)).max() < 1e-10

    ident = symmetry.unitary_matrix(symmetry.make_action(drum4.model, "identity"), drum4)
    assert np.abs(ident.entries - np.eye(drum4.dim)).max() < 1e-10

    G = slab4.gram
    gu = U.entries.conj().T @ G @ U.entries
    assert np.abs(gu - G).max() < 1e-8 * np.abs(G).max()


def test_unitary_group_compatibility(slab4):
    """U(a) U(b) = U(ab) for products, including the projective T square."""
    P = symmetry.make_action(slab4.model, "parity")
    T = symmetry.make_action(slab4.model, "time-reflection")
    for a, b in ((P, P), (T, T), (P, T)):
        Ua = symmetry.unitary_matrix(a, slab4).entries
        Ub = symmetry.unitary_matrix(b, slab4).entries
        Uab = symmetry.unitary_matrix(symmetry.compose(a, b), slab4).entries
        assert np.abs(Ua @ Ub - Uab).max() < 1e-10


def test_span_escape_aborts(slab_model, spec64):
    """A basis missing the -k partners is not parity invariant."""
    from diracsig.solutions import slab_basis

    full = slab_basis(2, slab_model, spec64)
    asym = tuple(m for m in full.modes if m.momentum >= 0)
    lopsided = Basis(model=slab_model, modes=asym, bound=2, spec=spec64)
    with pytest.raises(SpanEscapeError):
        symmetry.unitary_matrix(symmetry.make_action(slab_model, "parity"), lopsided)


def test_generator_matrix(slab4):
    delta = 1e-3
    X = symmetry.generator_matrix(symmetry.GeneratorSpec(delta=delta), slab4)
    Xex = symmetry.exact_translation_generator(slab4)
    kmax = max(abs(m.momentum) for m in slab4.modes)
    assert np.abs(X.entries - Xex.entries).max() < 1.5 * kmax**3 * delta**2 / 6
    # Gram-Hermitian at the quadrature floor
    assert np.abs(X.entries - X.adjoint_entries()).max() < 1e-8

    # 2nd-order convergence: error shrinks by 4 per halving
    e1 = np.linalg.norm(
        symmetry.generator_matrix(symmetry.GeneratorSpec(delta=1e-2), slab4).entries - Xex.entries
    )
    e2 = np.linalg.norm(
        symmetry.generator_matrix(symmetry.GeneratorSpec(delta=5e-3), slab4).entries - Xex.entries
    )
    assert 3.9 < e1 / e2 < 4.1

    with pytest.raises(RangeError):
        symmetry.GeneratorSpec(delta=0.5)
    with pytest.raises(UnsupportedSymmetryError):
        symmetry.GeneratorSpec(killing="boost")


def test_abelian_generators_commute(slab4):
    X1 = symmetry.generator_matrix(symmetry.GeneratorSpec(delta=1e-3), slab4).entries
    X2 = symmetry.generator_matrix(symmetry.GeneratorSpec(delta=2e-3), slab4).entries
    assert np.abs(X1 @ X2 - X2 @ X1).max() < 1e-12 * max(np.abs(X1).max(), 1.0)


def test_generator_requires_slab(drum4):
    with pytest.raises(UnsupportedSymmetryError):
        symmetry.generator_matrix(symmetry.GeneratorSpec(), drum4)


def test_hamiltonian_matrix(drum4, slab4):
    H = symmetry.hamiltonian_matrix(drum4)
    for j, m in enumerate(drum4.modes):
        chir, n = m.data
        expected = -n if chir == "L" else n
        assert H.entries[j, j] == expected
    off = H.entries - np.diag(np.diag(H.entries))
    assert np.abs(off).max() == 0.0
    assert np.abs(H.entries - H.adjoint_entries()).max() < 1e-12
    with pytest.raises(ModelMismatchError):
        symmetry.hamiltonian_matrix(slab4)


def test_strong_continuity_slopes(slab4):
    """|U(tau) psi - psi| is linear in tau with slope 2 pi |k|."""
    G = slab4.gram
    taus = (1e-2, 5e-3, 2.5e-3)
    for j, mode in enumerate(slab4.modes):
        slopes = []
        for tau in taus:
            U = symmetry.unitary_matrix(
                symmetry.make_action(slab4.model, "translate", tau), slab4
            )
            col = U.entries[:, j] - np.eye(slab4.dim)[:, j]
            slopes.append(math.sqrt(max((col.conj() @ G @ col).real, 0.0)) / tau)
        k = abs(mode.momentum)
        if k == 0:
            assert max(slopes) < 1e-8
            continue
        for s in slopes:
            assert abs(s - 2 * math.pi * k) / (2 * math.pi * k) < 0.01
        assert (max(slopes) - min(slopes)) / max(slopes) < 0.2


def test_translation_group_law(slab4):
    a, b = 0.7, 0.4
    Ua = symmetry.unitary_matrix(symmetry.make_action(slab4.model, "translate", a), slab4).entries
    Ub = symmetry.unitary_matrix(symmetry.make_action(slab4.model, "translate", b), slab4).entries
    Uab = symmetry.unitary_matrix(
        symmetry.make_action(slab4.model, "translate", a + b), slab4
    ).entries
    assert np.linalg.norm(Ua @ Ub - Uab) / np.linalg.norm(Uab) < 1e-10
    UP = symmetry.unitary_matrix(symmetry.make_action(slab4.model, "parity"), slab4).entries
    assert np.linalg.norm(UP @ UP - np.eye(slab4.dim)) / math.sqrt(slab4.dim) < 1e-10
