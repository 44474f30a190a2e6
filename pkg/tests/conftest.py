"""
Shared fixtures.
"""

import pytest

from hybridmc.config import get_settings
from hybridmc.models import TclParams, brownian_barrier_model, linear_model, tcl_model
from hybridmc.models.shs import ModeSemantics
from hybridmc.simulate import NoiseStream


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    """Keep every test away from the working directory's ledger and .env."""
    monkeypatch.setenv("HYBRIDMC_DATABASE_PATH", str(tmp_path / "ledger.db"))
    monkeypatch.setenv("HYBRIDMC_THREADS", "1")
    monkeypatch.setattr("hybridmc.database.models._store", None)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def tcl():
    return tcl_model()


@pytest.fixture
def tcl_projection():
    return tcl_model(semantics=ModeSemantics.PROJECTION)


@pytest.fixture
def tcl_deterministic():
    return tcl_model(TclParams(sigma_off=0.0, sigma_on=0.0))


@pytest.fixture
def brownian():
    return brownian_barrier_model(0.0, 1.0)


@pytest.fixture
def decay():
    """dz = -z dt from z0 = 1."""
    return linear_model(rate=-1.0, sigma=0.0, z0=1.0)


@pytest.fixture
def noise():
    return NoiseStream(2024)
