import numpy as np
import pytest

from diracsig import models as geo
from diracsig import sigop
from diracsig.solutions import drum_basis, slab_basis


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("SIGOP_CACHE_DIR", str(tmp_path / "cache"))


@pytest.fixture(scope="session")
def spec64():
    return geo.QuadratureSpec(surface_order=64, volume_order=80)


@pytest.fixture(scope="session")
def spec_full():
    return geo.QuadratureSpec(surface_order=128, volume_order=160)


@pytest.fixture(scope="session")
def drum2(spec64):
    return drum_basis(2, spec64)


@pytest.fixture(scope="session")
def drum4(spec64):
    return drum_basis(4, spec64)


@pytest.fixture(scope="session")
def drum4_assembled(drum4, spec64):
    A = sigop.assemble_pairing(drum4, spec64)
    S = sigop.assemble_signature(drum4, spec64, pairing=A)
    return A, S, sigop.spectral_decompose(S)


@pytest.fixture(scope="session")
def slab_model():
    return geo.slab(mass=1.0, lifetime=2.0)


@pytest.fixture(scope="session")
def slab2(slab_model, spec64):
    return slab_basis(2, slab_model, spec64)


@pytest.fixture(scope="session")
def slab4(slab_model, spec_full):
    return slab_basis(4, slab_model, spec_full)


@pytest.fixture(scope="session")
def slab4_assembled(slab4, spec_full):
    A = sigop.assemble_pairing(slab4, spec_full)
    S = sigop.assemble_signature(slab4, spec_full, pairing=A)
    return A, S, sigop.spectral_decompose(S)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)


def interior_points(model, rng, count=100, margin=0.05):
    """Seeded random points strictly inside the model domain."""
    pts = []
    while len(pts) < count:
        if model.kind == "drum":
            x = rng.uniform(-np.pi + 2 * margin, np.pi - 2 * margin)
            tmax = np.pi - abs(x)
            t = rng.uniform(margin, tmax - margin)
        else:
            t = rng.uniform(margin, model.slab_lifetime - margin)
            x = rng.uniform(0.0, 2 * np.pi)
        pts.append((t, x))
    return np.array(pts)
