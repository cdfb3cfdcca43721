"""
The Frobenius-extension structure of O_eps over the classical coordinate ring:
the form Phi (coefficient of the top key t^(l-1) in the module expansion), the
pairing B(x, y) = Phi(x y), duality witnesses and the Nakayama automorphism.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Tuple

from qcoord.algebra.coeff import CycloElem, CyclotomicModulus, cyclotomic
from qcoord.algebra.monomial import GenIndex, GenOrder, NormalMonomial
from qcoord.algebra.rewrite import AlgebraConfig, Element, Variant
from qcoord.algebra.rootspec import (
    ClassicalMonomial,
    ClassicalPoly,
    check_frobenius_central,
    enumerate_basis,
    frobenius_image_poly,
    module_expand,
)
from qcoord.core.config import settings
from qcoord.core.exceptions import ConfigMismatchError, PreconditionError, UnsupportedVariantError
from qcoord.core.log_config import logging_settings
from qcoord.schemas.reports import CheckCase, CheckReport, merge_reports
from qcoord.utils.parallel import parallel_map
from qcoord.utils.sampling import make_rng, random_coefficient, random_element, random_exponents

logger = logging.getLogger(logging_settings.LOGGER_NAME)


@dataclass(frozen=True)
class FrobeniusContext:
    n: int
    ell: int
    variant: Variant = Variant.M
    order: Optional[GenOrder] = None
    config: AlgebraConfig = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if Variant(self.variant) == Variant.SL:
            raise UnsupportedVariantError("Phi is only defined for M and GL")
        config = AlgebraConfig(n=self.n, ell=self.ell, variant=self.variant, order=self.order)
        object.__setattr__(self, "config", config)

    @classmethod
    def of(cls, config: AlgebraConfig) -> FrobeniusContext:
        if config.ell is None:
            raise PreconditionError("Phi needs a specialized algebra (set ell)")
        return cls(config.n, config.ell, config.variant, config.order)

    @property
    def modulus(self) -> CyclotomicModulus:
        return cyclotomic(self.ell)

    @property
    def top(self) -> NormalMonomial:
        return NormalMonomial((self.ell - 1,) * (self.n * self.n))

    def monomial(self, monomial: NormalMonomial) -> Element:
        return Element.from_monomial(self.config, monomial)

    def basis(self) -> Iterator[NormalMonomial]:
        return enumerate_basis(self.n, self.ell, self.variant)


def _context(element: Element) -> FrobeniusContext:
    return FrobeniusContext.of(element.config)


def phi(element: Element) -> ClassicalPoly:
    """Coefficient of t^(l-1) in the module expansion."""
    ctx = _context(element)
    return module_expand(element).entries.get(ctx.top, ClassicalPoly.zero(ctx.modulus))


def bform(x: Element, y: Element) -> ClassicalPoly:
    if x.config != y.config:
        raise ConfigMismatchError("the pairing needs both arguments in the same algebra")
    return phi(x * y)


def dual_witness(monomial: NormalMonomial, ell: int) -> NormalMonomial:
    """The key whose product with `monomial` leads with t^(l-1)."""
    if monomial.dpower or any(not 0 <= e < ell for e in monomial.exps):
        raise PreconditionError(f"{monomial} is not a module basis key for l={ell}")
    return NormalMonomial(tuple(ell - 1 - e for e in monomial.exps))


def _signed_unit(value: ClassicalPoly, what: str) -> Tuple[int, int]:
    constant = value.constant_term()
    unit = constant.as_signed_root_power() if constant is not None else None
    if unit is None:
        raise PreconditionError(f"{what} = {value} is not a unit")
    return unit


def _unit_value(unit: Tuple[int, int], modulus: CyclotomicModulus) -> CycloElem:
    sign, k = unit
    return CycloElem.root_power(k, modulus) * sign


@dataclass(frozen=True)
class NondegeneracyWitness:
    """Phi(dual * a) = unit * coefficient, where coefficient is a's coefficient at key."""

    key: NormalMonomial
    dual: NormalMonomial
    unit: Tuple[int, int]
    coefficient: ClassicalPoly
    value: ClassicalPoly

    @property
    def holds(self) -> bool:
        return self.value == self.coefficient * _unit_value(self.unit, self.coefficient.modulus)


def check_nondegenerate(element: Element) -> NondegeneracyWitness:
    if element.is_zero():
        raise PreconditionError("the zero element has no non-degeneracy witness")
    ctx = _context(element)
    expansion = module_expand(element)
    key = max(expansion.entries, key=lambda m: m.sort_key())
    dual = dual_witness(key, ctx.ell)
    unit = _signed_unit(phi(ctx.monomial(dual) * ctx.monomial(key)), f"Phi({dual} {key})")
    witness = NondegeneracyWitness(
        key=key,
        dual=dual,
        unit=unit,
        coefficient=expansion.entries[key],
        value=phi(ctx.monomial(dual) * element),
    )
    if not witness.holds:
        raise PreconditionError(
            f"Phi({dual} * a) = {witness.value} is not the unit multiple of {witness.coefficient}"
        )
    return witness


############################################################################
# Nakayama automorphism
############################################################################
def nakayama_exponent(i: int, j: int, n: int) -> int:
    """nu(t[i,j]) = eps^(2(n + 1 - i - j)) t[i,j]."""
    return 2 * (n + 1 - i - j)


def _twist(element: Element, direction: int) -> Element:
    n = element.config.n
    ring = element.config.ring
    weights = [nakayama_exponent(*GenIndex.from_flat(k, n), n) for k in range(n * n)]

    def rescale(monomial: NormalMonomial, coeff):
        power = sum(w * e for w, e in zip(weights, monomial.exps))
        return coeff * ring.q_power(direction * power)

    return element.map_coefficients(rescale)


def nakayama(element: Element) -> Element:
    """Rescales each generator; D is fixed."""
    return _twist(element, 1)


def nakayama_inverse(element: Element) -> Element:
    return _twist(element, -1)


def leading_powers(i: int, j: int, ctx: FrobeniusContext) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    """
    Signed eps-powers of Phi(P t[i,j]) and Phi(t[i,j] P) for P = t^(l-1) / t[i,j].
    Their exponent difference is the Nakayama twist of t[i,j].
    """
    idx = GenIndex(i, j)
    exps = list(ctx.top.exps)
    exps[idx.flat(ctx.n)] -= 1
    rest = ctx.monomial(NormalMonomial(tuple(exps)))
    g = Element.generator(ctx.config, i, j)
    return (
        _signed_unit(phi(rest * g), f"Phi(P {idx})"),
        _signed_unit(phi(g * rest), f"Phi({idx} P)"),
    )


############################################################################
# check suites
############################################################################
def _index_pairs(rng: random.Random, left: int, right: int) -> List[Tuple[int, int]]:
    """Every (a, b) when the grid fits PAIR_GRID_LIMIT, else a seeded sample."""
    if left * right <= settings.PAIR_GRID_LIMIT:
        return [(a, b) for a in range(left) for b in range(right)]
    return [(rng.randrange(left), rng.randrange(right)) for _ in range(settings.PAIR_SAMPLE_SIZE)]


def _generators(n: int) -> List[GenIndex]:
    return [GenIndex.from_flat(k, n) for k in range(n * n)]


def check_nakayama(n: int, ell: int, variant: Variant = Variant.M, random_pairs: int = 100) -> CheckReport:
    ctx = FrobeniusContext(n, ell, variant)
    rng = make_rng()
    start = time.perf_counter()
    basis: Sequence[NormalMonomial] = list(ctx.basis())
    generators = _generators(n)
    cases: List[CheckCase] = []

    for idx in generators:
        left, right = leading_powers(idx.i, idx.j, ctx)
        expected = nakayama_exponent(idx.i, idx.j, n)
        cases.append(CheckCase(
            input=f"leading powers {idx}",
            residual=f"Phi(P t)={left}, Phi(t P)={right}, twist {expected}",
            passed=left[0] == right[0] and (left[1] - right[1] - expected) % ell == 0,
        ))

    def generator_case(pair: Tuple[int, int]) -> CheckCase:
        idx, key = generators[pair[0]], basis[pair[1]]
        g = Element.generator(ctx.config, *idx)
        b = ctx.monomial(key)
        lhs, rhs = phi(b * g), phi(nakayama(g) * b)
        return CheckCase(
            input=f"Phi({key} {idx}) = Phi(nu({idx}) {key})",
            residual=str(lhs - rhs),
            passed=lhs == rhs,
        )

    cases.extend(parallel_map(generator_case, _index_pairs(rng, len(generators), len(basis))))

    def symmetry_case(pair: Tuple[int, int]) -> CheckCase:
        x, y = ctx.monomial(basis[pair[0]]), ctx.monomial(basis[pair[1]])
        lhs, rhs = bform(x, y), bform(nakayama(y), x)
        return CheckCase(
            input=f"B({basis[pair[0]]}, {basis[pair[1]]})",
            residual=str(lhs - rhs),
            passed=lhs == rhs,
        )

    cases.extend(parallel_map(symmetry_case, _index_pairs(rng, len(basis), len(basis))))

    for _ in range(random_pairs):
        x, y = random_element(rng, ctx.config, terms=2), random_element(rng, ctx.config, terms=2)
        residual = nakayama(x * y) - nakayama(x) * nakayama(y)
        cases.append(CheckCase(input=f"nu(({x}) ({y}))", residual=str(residual), passed=residual.is_zero()))

    report = CheckReport(check="nakayama", n=n, ell=ell, cases=cases)
    logger.info(f"{report.summary()} in {time.perf_counter() - start:.2f}s")
    if not report.passed:
        logger.warning(f"Nakayama failures: {len(report.failures)}")
    return report


def _random_classical(rng: random.Random, ctx: FrobeniusContext) -> ClassicalPoly:
    terms = {}
    for _ in range(rng.randint(1, 2)):
        dpower = rng.randint(-1, 1) if ctx.variant == Variant.GL else 0
        terms[ClassicalMonomial(random_exponents(rng, ctx.n * ctx.n, 2), dpower)] = random_coefficient(rng)
    return ClassicalPoly(ctx.modulus, terms)


def check_phi_linear(ctx: FrobeniusContext, rng: random.Random, samples: Optional[int] = None) -> CheckReport:
    """Phi(Fr(c) e) = c Phi(e) on random classical c and random elements e."""
    samples = min(settings.RANDOM_SAMPLE_SIZE, 20) if samples is None else samples
    pairs = [(_random_classical(rng, ctx), random_element(rng, ctx.config, terms=2)) for _ in range(samples)]

    def run(pair: Tuple[ClassicalPoly, Element]) -> CheckCase:
        c, element = pair
        residual = phi(frobenius_image_poly(c, ctx.config) * element) - c * phi(element)
        return CheckCase(input=f"Phi(Fr({c}) ({element}))", residual=str(residual), passed=residual.is_zero())

    return CheckReport(check="phi-linear", n=ctx.n, ell=ctx.ell, cases=parallel_map(run, pairs))


def check_frobenius(n: int, ell: int, variant: Variant = Variant.M) -> CheckReport:
    """
    Centrality of the Frobenius image, then non-degeneracy over the key set:
    Phi(m' m) is a unit for the dual m' of m and vanishes when m is replaced
    by any key of smaller weight. Ends with the linearity of Phi over the
    Frobenius image.
    """
    ctx = FrobeniusContext(n, ell, variant)
    rng = make_rng()
    start = time.perf_counter()
    basis = sorted(ctx.basis(), key=lambda m: m.sort_key())

    if len(basis) <= settings.PAIR_GRID_LIMIT:
        keys = basis
    else:
        keys = rng.sample(basis, settings.PAIR_SAMPLE_SIZE)

    def unit_case(key: NormalMonomial) -> CheckCase:
        dual = dual_witness(key, ell)
        value = phi(ctx.monomial(dual) * ctx.monomial(key))
        constant = value.constant_term()
        unit = constant.as_signed_root_power() if constant is not None else None
        return CheckCase(input=f"Phi({dual} * {key})", residual=str(value), passed=unit is not None)

    def smaller_case(pair: Tuple[int, int]) -> Optional[CheckCase]:
        a, b = pair
        if b >= a:
            return None
        dual = dual_witness(basis[a], ell)
        value = phi(ctx.monomial(dual) * ctx.monomial(basis[b]))
        return CheckCase(input=f"Phi({dual} * {basis[b]})", residual=str(value), passed=value.is_zero())

    cases = parallel_map(unit_case, keys)
    cases.extend(
        case for case in parallel_map(smaller_case, _index_pairs(rng, len(basis), len(basis)))
        if case is not None
    )
    nondegenerate = CheckReport(check="nondegenerate", n=n, ell=ell, cases=cases)
    report = merge_reports(
        "frobenius", n, ell, check_frobenius_central(n, ell), nondegenerate, check_phi_linear(ctx, rng)
    )
    logger.info(f"{report.summary()} in {time.perf_counter() - start:.2f}s")
    if not report.passed:
        logger.warning(f"Frobenius failures: {len(report.failures)}")
    return report
