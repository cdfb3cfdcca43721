import random
from typing import Optional

import pytest

from qcoord.algebra.coeff import cyclotomic
from qcoord.algebra.monomial import make_opposite_order
from qcoord.algebra.rewrite import AlgebraConfig, BasisFlavor, Element, Variant
from qcoord.core.config import settings


@pytest.fixture(scope="function")
def client():
    """
    Provide a test client for the FastAPI app.
    The rate limiter is reset so every test starts with a full budget.
    """
    from qcoord.main import app
    from fastapi.testclient import TestClient

    app.state.limiter.reset()

    with TestClient(app) as c:
        yield c


@pytest.fixture
def rng():
    return random.Random(settings.RANDOM_SEED)


@pytest.fixture
def create_config_fixture():
    def _create_config(
        n: int = 2,
        variant: Variant = Variant.M,
        ell: Optional[int] = None,
        opposite: bool = False,
    ) -> AlgebraConfig:
        if opposite:
            return AlgebraConfig(
                n=n,
                variant=variant,
                ell=ell,
                order=make_opposite_order(n),
                flavor=BasisFlavor.OPPOSITE,
            )
        return AlgebraConfig(n=n, variant=variant, ell=ell)

    return _create_config


@pytest.fixture
def create_word_fixture():
    def _create_word(config: AlgebraConfig, *indices, coeff=1) -> Element:
        return Element.from_word(config, list(indices), coeff)

    return _create_word


@pytest.fixture
def modulus():
    return cyclotomic(3)


@pytest.fixture
def small_grids(mocker):
    """Shrink the pairing grids so the Frobenius suites stay quick."""
    mocker.patch.object(settings, "PAIR_GRID_LIMIT", 400)
    mocker.patch.object(settings, "PAIR_SAMPLE_SIZE", 25)
    mocker.patch.object(settings, "RANDOM_SAMPLE_SIZE", 20)
