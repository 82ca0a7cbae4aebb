import pytest

from multsidon.family import build_family

SWEEP_SIZES = (56, 64, 100, 137, 255)


@pytest.fixture(scope="session")
def sweep_families():
    """Full-pipeline families over {1..s} for the standard size sweep."""
    return {s: build_family(range(1, s + 1)) for s in SWEEP_SIZES}
