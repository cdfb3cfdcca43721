"""
Root-of-unity specialization, the quantum Frobenius map and the free-module
structure of O_eps over the classical coordinate ring.

Over Z_eps every t[i,j]^l is central, so an ordered monomial with exponents
l*a + r factors as Fr(Tbar^a) * t^r. Expanding an element in the finite key
set {t^r : 0 <= r < l} (one key per residue vector) is therefore a matter of
Euclidean division on exponents; GL terms first fold their residual D-power
into the generators.
"""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

from qcoord.algebra.coeff import CycloElem, CyclotomicModulus, cyclotomic, reduce_mod
from qcoord.algebra.monomial import GenIndex, NormalMonomial
from qcoord.algebra.rewrite import (
    AlgebraConfig,
    Element,
    RawTerms,
    Variant,
    _accumulate,
    format_combination,
    get_engine,
)
from qcoord.core.config import settings
from qcoord.core.exceptions import (
    ConfigMismatchError,
    PreconditionError,
    UnsupportedVariantError,
)
from qcoord.core.log_config import logging_settings
from qcoord.schemas.reports import CheckCase, CheckReport
from qcoord.utils.parallel import parallel_map
from qcoord.utils.sampling import make_rng, random_element, random_exponents

logger = logging.getLogger(logging_settings.LOGGER_NAME)


############################################################################
# specialization
############################################################################
def specialize(element: Element, ell: int) -> Element:
    """Reduce every coefficient mod phi_l; the basis keys are unchanged."""
    if element.config.ell is not None:
        if element.config.ell == ell:
            return element
        raise ConfigMismatchError(
            f"element is already specialized at l={element.config.ell}, not l={ell}"
        )
    target = element.config.specialized(ell)
    modulus = cyclotomic(ell)
    return element.map_coefficients(lambda _, c: reduce_mod(c, modulus), target)


def _require_frobenius_config(config: AlgebraConfig) -> int:
    if config.ell is None:
        raise PreconditionError("the Frobenius map needs a specialized algebra (set ell)")
    if config.variant == Variant.SL:
        raise UnsupportedVariantError("the module structure is only implemented for M and GL")
    return config.ell


############################################################################
# the classical coordinate ring
############################################################################
@dataclass(frozen=True)
class ClassicalMonomial:
    exps: Tuple[int, ...]
    dpower: int = 0

    @classmethod
    def one(cls, n: int) -> ClassicalMonomial:
        return cls((0,) * (n * n))

    @property
    def n(self) -> int:
        return NormalMonomial(self.exps).n

    def sort_key(self) -> Tuple:
        return (sum(self.exps), self.exps, self.dpower)

    def __mul__(self, other: ClassicalMonomial) -> ClassicalMonomial:
        return ClassicalMonomial(
            tuple(a + b for a, b in zip(self.exps, other.exps)), self.dpower + other.dpower
        )

    def format(self) -> str:
        n = self.n
        factors = []
        for k, e in enumerate(self.exps):
            if e:
                idx = GenIndex.from_flat(k, n)
                name = f"Tbar[{idx.i},{idx.j}]"
                factors.append(name if e == 1 else f"{name}^{e}")
        if self.dpower:
            factors.append("Dbar" if self.dpower == 1 else f"Dbar^{self.dpower}")
        return " ".join(factors) if factors else "1"

    def __str__(self) -> str:
        return self.format()


class ClassicalPoly:
    """A commutative polynomial in Tbar[i,j] (and Dbar^+-1) over Z_eps."""

    __slots__ = ("modulus", "_terms")

    def __init__(self, modulus: CyclotomicModulus, terms: Optional[Mapping[ClassicalMonomial, object]] = None):
        self.modulus = modulus
        self._terms: Dict[ClassicalMonomial, CycloElem] = {}
        for monomial, coeff in (terms or {}).items():
            coeff = coeff if isinstance(coeff, CycloElem) else reduce_mod(coeff, modulus)
            if coeff:
                self._terms[monomial] = coeff

    @classmethod
    def zero(cls, modulus: CyclotomicModulus) -> ClassicalPoly:
        return cls(modulus)

    @classmethod
    def constant(cls, modulus: CyclotomicModulus, n: int, value) -> ClassicalPoly:
        return cls(modulus, {ClassicalMonomial.one(n): value})

    @property
    def terms(self) -> Dict[ClassicalMonomial, CycloElem]:
        return dict(self._terms)

    def items(self) -> List[Tuple[ClassicalMonomial, CycloElem]]:
        return sorted(self._terms.items(), key=lambda item: item[0].sort_key(), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def constant_term(self) -> Optional[CycloElem]:
        """The coefficient of 1 when that is the only term."""
        if len(self._terms) != 1:
            return None
        ((monomial, coeff),) = self._terms.items()
        if any(monomial.exps) or monomial.dpower:
            return None
        return coeff

    def _check(self, other: ClassicalPoly) -> ClassicalPoly:
        if other.modulus != self.modulus:
            raise ConfigMismatchError("classical polynomials over different roots of unity")
        return other

    def __add__(self, other: ClassicalPoly) -> ClassicalPoly:
        terms = dict(self._terms)
        for m, c in self._check(other)._terms.items():
            _accumulate(terms, m, c)
        return ClassicalPoly(self.modulus, terms)

    def __neg__(self) -> ClassicalPoly:
        return ClassicalPoly(self.modulus, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: ClassicalPoly) -> ClassicalPoly:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, CycloElem)):
            return ClassicalPoly(self.modulus, {m: c * other for m, c in self._terms.items()})
        terms: Dict[ClassicalMonomial, CycloElem] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in self._check(other)._terms.items():
                _accumulate(terms, m1 * m2, c1 * c2)
        return ClassicalPoly(self.modulus, terms)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClassicalPoly):
            return NotImplemented
        return self.modulus == other.modulus and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.modulus.ell, frozenset(self._terms.items())))

    def __str__(self) -> str:
        return format_combination((m.format(), c) for m, c in self.items())

    def __repr__(self) -> str:
        return f"ClassicalPoly({self}; ell={self.modulus.ell})"


############################################################################
# quantum Frobenius
############################################################################
def frobenius_image(monomial: ClassicalMonomial, config: AlgebraConfig) -> Element:
    """Tbar[i,j] -> t[i,j]^l and Dbar^z -> D^(l z)."""
    ell = _require_frobenius_config(config)
    target = NormalMonomial(tuple(ell * e for e in monomial.exps), ell * monomial.dpower)
    return Element.from_monomial(config, target)


def frobenius_image_poly(poly: ClassicalPoly, config: AlgebraConfig) -> Element:
    result = Element.zero(config)
    for monomial, coeff in poly.terms.items():
        result = result + frobenius_image(monomial, config) * coeff
    return result


def check_frobenius_central(n: int, ell: int) -> CheckReport:
    config = AlgebraConfig(n=n, ell=ell)

    def run(pair: Tuple[int, int]) -> CheckCase:
        a, b = (GenIndex.from_flat(k, n) for k in pair)
        powered = frobenius_image(ClassicalMonomial(NormalMonomial.generator(a, n).exps), config)
        g = Element.generator(config, *b)
        residual = powered * g - g * powered
        return CheckCase(input=f"[{a}^{ell}, {b}]", residual=str(residual), passed=residual.is_zero())

    pairs = list(itertools.product(range(n * n), repeat=2))
    report = CheckReport(check="frobenius-central", n=n, ell=ell, cases=parallel_map(run, pairs))
    logger.info(report.summary())
    return report


############################################################################
# module expansion
############################################################################
@dataclass
class ModuleExpansion:
    """An element written as sum over keys t^r (0 <= r < l) of Fr(coefficient) * key."""

    config: AlgebraConfig
    entries: Dict[NormalMonomial, ClassicalPoly] = field(default_factory=dict)

    def items(self) -> List[Tuple[NormalMonomial, ClassicalPoly]]:
        return sorted(self.entries.items(), key=lambda item: item[0].sort_key(), reverse=True)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModuleExpansion):
            return NotImplemented
        return self.config == other.config and self.entries == other.entries

    def __str__(self) -> str:
        if not self.entries:
            return "0"
        return "\n".join(
            f"{key.format(self.config.order)}: {poly}" for key, poly in self.items()
        )


def _split(exps: Tuple[int, ...], ell: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    pairs = [divmod(e, ell) for e in exps]
    return tuple(a for a, _ in pairs), tuple(r for _, r in pairs)


def module_expand(element: Element) -> ModuleExpansion:
    config = element.config
    ell = _require_frobenius_config(config)
    modulus = cyclotomic(ell)
    engine = get_engine(config)
    raw: Dict[NormalMonomial, Dict[ClassicalMonomial, CycloElem]] = {}

    def add(exps, d_quotient, coeff):
        quotient, rest = _split(exps, ell)
        bucket = raw.setdefault(NormalMonomial(rest), {})
        _accumulate(bucket, ClassicalMonomial(quotient, d_quotient), coeff)

    for monomial, coeff in element.terms.items():
        if config.variant == Variant.M:
            add(monomial.exps, 0, coeff)
            continue
        d_quotient, d_rest = divmod(monomial.dpower, ell)
        folded = engine.multiply_terms({monomial.exps: engine.one}, engine.determinant_power(d_rest))
        for exps, value in folded.items():
            add(exps, d_quotient, coeff * value)

    entries = {}
    for key, bucket in raw.items():
        poly = ClassicalPoly(modulus, bucket)
        if poly:
            entries[key] = poly
    return ModuleExpansion(config, entries)


def recombine(expansion: ModuleExpansion) -> Element:
    """sum of Fr(coefficient) * key; the inverse of module_expand."""
    config = expansion.config
    ell = _require_frobenius_config(config)
    raw: RawTerms = {}
    for key, poly in expansion.entries.items():
        for classical, coeff in poly.terms.items():
            exps = tuple(ell * a + r for a, r in zip(classical.exps, key.exps))
            _accumulate(raw, (exps, ell * classical.dpower + key.dpower), coeff)
    return Element(config, get_engine(config).normalize_terms(raw))


def enumerate_basis(n: int, ell: int, variant: Variant = Variant.M) -> Iterator[NormalMonomial]:
    """The l^(n^2) keys t^r with 0 <= r < l, lazily and in lexicographic order."""
    if Variant(variant) == Variant.SL:
        raise UnsupportedVariantError("no module basis is provided for SL")
    cyclotomic(ell)
    return (NormalMonomial(exps) for exps in itertools.product(range(ell), repeat=n * n))


def check_module(n: int, ell: int, variant: Variant = Variant.M, samples: Optional[int] = None) -> CheckReport:
    """
    Basis count, expand/recombine round trip on random elements, key ranges,
    and multiplicativity of the Frobenius map on random classical monomials.
    """
    config = AlgebraConfig(n=n, ell=ell, variant=variant)
    samples = settings.RANDOM_SAMPLE_SIZE if samples is None else samples
    rng = make_rng()
    start = time.perf_counter()
    cases: List[CheckCase] = []

    count = sum(1 for _ in enumerate_basis(n, ell, variant))
    cases.append(CheckCase(
        input=f"rank of {config.describe()}",
        residual=f"{count} keys, expected {ell ** (n * n)}",
        passed=count == ell ** (n * n),
    ))

    elements = [random_element(rng, config) for _ in range(samples)]

    def round_trip(element: Element) -> CheckCase:
        expansion = module_expand(element)
        in_range = all(
            key.dpower == 0 and all(0 <= e < ell for e in key.exps) for key in expansion.entries
        )
        residual = recombine(expansion) - element
        return CheckCase(
            input=str(element),
            residual=str(residual) if in_range else "key outside the residue range",
            passed=in_range and residual.is_zero(),
        )

    cases.extend(parallel_map(round_trip, elements))

    for _ in range(min(samples, 20)):
        a = ClassicalMonomial(random_exponents(rng, n * n, 2), rng.randint(-1, 1) if variant == Variant.GL else 0)
        b = ClassicalMonomial(random_exponents(rng, n * n, 2), rng.randint(-1, 1) if variant == Variant.GL else 0)
        residual = frobenius_image(a * b, config) - frobenius_image(a, config) * frobenius_image(b, config)
        cases.append(CheckCase(input=f"Fr({a} * {b})", residual=str(residual), passed=residual.is_zero()))

    report = CheckReport(check="module", n=n, ell=ell, cases=cases)
    logger.info(f"{report.summary()} in {time.perf_counter() - start:.2f}s")
    if not report.passed:
        logger.warning(f"Module expansion failures: {len(report.failures)}")
    return report
