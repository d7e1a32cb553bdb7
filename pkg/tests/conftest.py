import pytest

from config.settings import Settings
from services.spec_service import load_spec_file, resolve_spec_path

_specs = {}


def bundled_spec(name):
    if name not in _specs:
        _specs[name] = load_spec_file(resolve_spec_path(name))
    return _specs[name]


@pytest.fixture(autouse=True)
def offline(monkeypatch, tmp_path):
    """No test touches the network or the user's cache."""
    monkeypatch.setattr(Settings, "ALLOW_NETWORK", False)
    monkeypatch.setattr(Settings, "CACHE_DIR", str(tmp_path / "cache"))


@pytest.fixture
def baxter_spec():
    return bundled_spec("baxter")


@pytest.fixture
def h_spec():
    return bundled_spec("h")


@pytest.fixture
def constant_spec():
    return bundled_spec("constant")


@pytest.fixture
def baxter(baxter_spec):
    return baxter_spec.sequence()


@pytest.fixture
def h(h_spec):
    return h_spec.sequence()


@pytest.fixture
def constant(constant_spec):
    return constant_spec.sequence()
