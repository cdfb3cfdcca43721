import random
from typing import Optional, Tuple

from qcoord.algebra.coeff import LaurentPoly
from qcoord.algebra.monomial import NormalMonomial
from qcoord.algebra.rewrite import AlgebraConfig, Element, Variant
from qcoord.core.config import settings


def make_rng(seed: Optional[int] = None) -> random.Random:
    """A private generator seeded from RANDOM_SEED unless told otherwise."""
    return random.Random(settings.RANDOM_SEED if seed is None else seed)


def random_exponents(rng: random.Random, size: int, bound: int) -> Tuple[int, ...]:
    return tuple(rng.randrange(bound) for _ in range(size))


def random_coefficient(rng: random.Random) -> LaurentPoly:
    terms = {rng.randint(-2, 2): rng.choice((-3, -2, -1, 1, 2, 3)) for _ in range(rng.randint(1, 2))}
    return LaurentPoly(terms)


def random_monomial(rng: random.Random, config: AlgebraConfig, bound: Optional[int] = None) -> NormalMonomial:
    """
    An ordered monomial with exponents below `bound` (2l for specialized
    configs, 3 otherwise); GL monomials also get a D-power in [-(l+1), l+1].
    """
    ell = config.ell or 2
    bound = bound or (2 * config.ell if config.ell else 3)
    exps = random_exponents(rng, config.n * config.n, bound)
    dpower = rng.randint(-(ell + 1), ell + 1) if config.variant == Variant.GL else 0
    return NormalMonomial(exps, dpower)


def random_element(
    rng: random.Random, config: AlgebraConfig, terms: int = 3, bound: Optional[int] = None
) -> Element:
    element = Element.zero(config)
    for _ in range(terms):
        monomial = random_monomial(rng, config, bound)
        element = element + Element.from_monomial(config, monomial, random_coefficient(rng))
    return element
