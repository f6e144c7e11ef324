import pytest


@pytest.fixture(scope="session")
def client():
    from fastapi.testclient import TestClient

    from momentkit.service import create_app

    with TestClient(create_app(), raise_server_exceptions=False) as c:
        yield c


@pytest.fixture(scope="session")
def bump_seq():
    """Moments of the normalized density 30 x^2 (1-x)^2 on [0,1], degree 44."""
    from momentkit import DensitySpec, moments_from_density

    return moments_from_density(DensitySpec.named("square-bump"), 44, exact=True)
