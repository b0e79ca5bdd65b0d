"""Signature-operator numerics on truncated Dirac solution spaces
of 2D model space-times, with a quantitative symmetry-verification suite."""

__version__ = "0.1.0"

from .models import (  # noqa: F401
    CauchySurface,
    DiracRep,
    QuadratureSpec,
    SpacetimeModel,
    cauchy_surface,
    contains,
    drum,
    make_model,
    slab,
    standard_rep,
    surface_quadrature,
    volume_quadrature,
)
from .solutions import (  # noqa: F401
    Basis,
    LinearCombination,
    SolutionMode,
    TestFunction,
    drum_basis,
    evaluate_mode,
    slab_basis,
    spin_product,
)
from .sigop import (  # noqa: F401
    BorelFunction,
    OperatorMatrix,
    SpectralDecomposition,
    assemble_signature,
    cauchy_inner,
    functional_calculus,
    k_project,
    projector_smear,
    spacetime_inner,
    spectral_decompose,
)
from .symmetry import (  # noqa: F401
    GeneratorSpec,
    SymmetryAction,
    epsilon_of,
    generator_matrix,
    hamiltonian_matrix,
    make_action,
    pushforward,
    unitary_matrix,
)
from .verify import CheckReport, run_suite  # noqa: F401
from .config import RunConfig  # noqa: F401
