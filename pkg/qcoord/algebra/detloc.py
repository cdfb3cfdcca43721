"""
Quantum determinant, its localization (GL) and quotient (SL).

GL elements are kept in the "vee" basis: ordered monomials whose diagonal
(standard flavor) or antidiagonal (opposite flavor) exponents have minimum
zero, times an arbitrary power of D. The "wedge" form, where D only appears
with nonpositive powers, is derived on demand.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from qcoord.algebra.coeff import Coefficient, LaurentPoly
from qcoord.algebra.monomial import (
    GenIndex,
    NormalMonomial,
    Region,
    Word,
    antidiagonal_degree,
    make_opposite_order,
    region,
)
from qcoord.algebra.rewrite import (
    AlgebraConfig,
    BasisFlavor,
    Element,
    Exps,
    RawTerms,
    RewriteEngine,
    Variant,
    _accumulate,
    get_engine,
    normalize,
    swap_adjacent,
)
from qcoord.core.exceptions import (
    DimensionMismatchError,
    PreconditionError,
    UnsupportedVariantError,
)
from qcoord.core.log_config import logging_settings
from qcoord.schemas.reports import CheckCase, CheckReport
from qcoord.utils.parallel import parallel_map

logger = logging.getLogger(logging_settings.LOGGER_NAME)


@dataclass(frozen=True)
class Permutation:
    """A permutation of 1..n in one-line notation: images[a - 1] = sigma(a)."""

    images: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"{self.images} is not a permutation")

    @property
    def n(self) -> int:
        return len(self.images)

    @property
    def length(self) -> int:
        """Number of inversions."""
        return sum(
            1
            for a, b in itertools.combinations(range(self.n), 2)
            if self.images[a] > self.images[b]
        )

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def longest(cls, n: int) -> Permutation:
        return cls(tuple(range(n, 0, -1)))

    @classmethod
    def all(cls, n: int) -> Tuple[Permutation, ...]:
        return _all_permutations(n)

    def __call__(self, a: int) -> int:
        return self.images[a - 1]

    def word(self, reversed_rows: bool = False) -> Word:
        """t[1,s(1)] ... t[n,s(n)], or t[n,s(n)] ... t[1,s(1)]."""
        rows = range(self.n, 0, -1) if reversed_rows else range(1, self.n + 1)
        return tuple(GenIndex(a, self(a)) for a in rows)

    def letters(self, n: int, reversed_rows: bool = False) -> Tuple[int, ...]:
        return tuple(idx.flat(n) for idx in self.word(reversed_rows))


@lru_cache(maxsize=None)
def _all_permutations(n: int) -> Tuple[Permutation, ...]:
    return tuple(Permutation(p) for p in itertools.permutations(range(1, n + 1)))


def _signed_q_power(length: int) -> LaurentPoly:
    """(-q)^length, for any integer length."""
    return LaurentPoly.monomial(length, -1 if length % 2 else 1)


def _default_config(n: int, config: Optional[AlgebraConfig]) -> AlgebraConfig:
    config = config or AlgebraConfig(n=n)
    if config.n != n:
        raise DimensionMismatchError(f"asked for n={n} in an algebra with n={config.n}")
    return config


def quantum_determinant(n: int, config: Optional[AlgebraConfig] = None) -> Element:
    """sum over sigma of (-q)^l(sigma) t[1,s(1)] ... t[n,s(n)]."""
    config = _default_config(n, config)
    return normalize(
        {sigma.word(): _signed_q_power(sigma.length) for sigma in Permutation.all(n)},
        config,
    )


def quantum_determinant_reversed(n: int, config: Optional[AlgebraConfig] = None) -> Element:
    """sum over sigma of (-q)^-l(sigma) t[n,s(n)] ... t[1,s(1)]; equal to D_q."""
    config = _default_config(n, config)
    return normalize(
        {sigma.word(reversed_rows=True): _signed_q_power(-sigma.length) for sigma in Permutation.all(n)},
        config,
    )


############################################################################
# basis constraints
############################################################################
def pivot_letters(n: int, flavor: BasisFlavor) -> Tuple[int, ...]:
    """Flat indices of the diagonal (standard) or antidiagonal (opposite) generators."""
    if flavor == BasisFlavor.OPPOSITE:
        return tuple((i - 1) * n + (n - i) for i in range(1, n + 1))
    return tuple((i - 1) * (n + 1) for i in range(1, n + 1))


def in_basis(monomial: NormalMonomial, config: AlgebraConfig) -> bool:
    if config.variant == Variant.M:
        return monomial.dpower == 0
    pivots = pivot_letters(config.n, config.flavor)
    if min(monomial.exps[k] for k in pivots) != 0:
        return False
    return config.variant == Variant.GL or monomial.dpower == 0


def in_wedge_basis(monomial: NormalMonomial, config: AlgebraConfig) -> bool:
    """t * D^-N with N >= 0 and min(pivot exponents, N) = 0."""
    if monomial.dpower > 0:
        return False
    pivots = pivot_letters(config.n, config.flavor)
    return min([monomial.exps[k] for k in pivots] + [-monomial.dpower]) == 0


def _reduction_measure(engine: RewriteEngine):
    n = engine.n
    if engine.config.flavor == BasisFlavor.OPPOSITE:
        return lambda key: (antidiagonal_degree(key[0], n), sum(key[0]), key[0])
    return lambda key: (sum(key[0]), key[0])


############################################################################
# reduction identities
############################################################################
def _reduce_once(engine: RewriteEngine, exps: Exps, dpower: int) -> Optional[RawTerms]:
    config = engine.config
    n = engine.n
    pivots = pivot_letters(n, config.flavor)
    if any(exps[k] == 0 for k in pivots):
        return None
    t0 = tuple(e - 1 if k in pivots else e for k, e in enumerate(exps))
    d_key = (t0, 0 if config.variant == Variant.SL else dpower + 1)
    ring = engine.ring
    result: RawTerms = {}

    if config.flavor == BasisFlavor.STANDARD:
        top = engine.order_word(Permutation.identity(n).letters(n), start=t0)
        lead = top.get(exps)
        if lead is None or ring.signed_unit(lead) is None:
            raise PreconditionError(
                f"leading coefficient of {NormalMonomial(exps)} is not a unit"
            )
        lead_inv = ring.unit_inverse(lead)
        _accumulate(result, d_key, lead_inv)
        for other, value in top.items():
            if other != exps:
                _accumulate(result, (other, dpower), -lead_inv * value)
        for sigma in Permutation.all(n)[1:]:
            sign = ring.coerce(_signed_q_power(sigma.length))
            for other, value in engine.order_word(sigma.letters(n), start=t0).items():
                _accumulate(result, (other, dpower), -lead_inv * sign * value)
        return result

    # opposite flavor: t- t=0 (t[n,1] ... t[1,n]) t+ with the antidiagonal block abelian
    longest = Permutation.longest(n)
    head = tuple(
        e if region(GenIndex.from_flat(k, n), n) != Region.N_PLUS else 0
        for k, e in enumerate(t0)
    )
    tail = tuple(
        k for k in config.order.sequence
        if region(GenIndex.from_flat(k, n), n) == Region.N_PLUS
        for _ in range(t0[k])
    )
    _accumulate(result, d_key, ring.coerce(_signed_q_power(longest.length)))
    for sigma in Permutation.all(n):
        if sigma == longest:
            continue
        coeff = -ring.coerce(_signed_q_power(longest.length - sigma.length))
        letters = sigma.letters(n, reversed_rows=True) + tail
        for other, value in engine.order_word(letters, start=head).items():
            _accumulate(result, (other, dpower), coeff * value)
    return result


def diagonal_reduction(
    monomial: NormalMonomial, config: AlgebraConfig
) -> Optional[Dict[NormalMonomial, Coefficient]]:
    """
    One application of the determinant identity to an ordered monomial whose
    pivot exponents are all positive. The result is an unreduced combination
    of ordered monomials with D-powers; None when some pivot exponent is zero.
    """
    if config.variant == Variant.M:
        raise UnsupportedVariantError("determinant reduction needs GL or SL")
    step = _reduce_once(get_engine(config), monomial.exps, monomial.dpower)
    if step is None:
        return None
    return {NormalMonomial(exps, z): c for (exps, z), c in step.items()}


def reduce_to_basis(raw: Mapping[Tuple[Exps, int], Coefficient], engine: RewriteEngine) -> Dict[NormalMonomial, Coefficient]:
    """Apply the reduction identity until every key satisfies the basis constraint."""
    pending: RawTerms = {}
    for key, coeff in raw.items():
        _accumulate(pending, key, coeff)
    measure = _reduction_measure(engine)
    out: Dict[NormalMonomial, Coefficient] = {}
    while pending:
        key = max(pending, key=measure)
        coeff = pending.pop(key)
        step = _reduce_once(engine, *key)
        if step is None:
            _accumulate(out, NormalMonomial(*key), coeff)
            continue
        for other, value in step.items():
            _accumulate(pending, other, coeff * value)
    return out


############################################################################
# wedge / vee forms
############################################################################
def to_wedge_form(element: Element) -> Dict[NormalMonomial, Coefficient]:
    """Rewrite positive D-powers as polynomials in the generators."""
    if element.config.variant != Variant.GL:
        raise UnsupportedVariantError("the wedge basis only exists for GL")
    engine = get_engine(element.config)
    out: Dict[NormalMonomial, Coefficient] = {}
    for monomial, coeff in element.terms.items():
        if monomial.dpower <= 0:
            _accumulate(out, monomial, coeff)
            continue
        expanded = engine.multiply_terms({monomial.exps: engine.one}, engine.determinant_power(monomial.dpower))
        for exps, value in expanded.items():
            _accumulate(out, NormalMonomial(exps), coeff * value)
    return out


def from_wedge_form(terms: Mapping[NormalMonomial, Coefficient], config: AlgebraConfig) -> Element:
    engine = get_engine(config)
    return Element(config, engine.normalize_terms({(m.exps, m.dpower): c for m, c in terms.items()}))


############################################################################
# SL (x) R[x, x^-1] -> GL
############################################################################
def _first_row_count(exps: Sequence[int], n: int) -> int:
    return sum(exps[:n])


def sl_gl_iso(g: Mapping[int, Element], gl_config: Optional[AlgebraConfig] = None) -> Element:
    """
    Image of sum_z g[z] (x) x^z under t[i,j] (x) x^z -> D^-delta(i,1) t[i,j] D^z.
    Each g[z] is an SL element.
    """
    raw: RawTerms = {}
    for z, part in g.items():
        if part.config.variant != Variant.SL:
            raise UnsupportedVariantError("sl_gl_iso expects SL elements")
        if gl_config is None:
            gl_config = part.config.with_variant(Variant.GL)
        elif gl_config.n != part.config.n:
            raise DimensionMismatchError("SL and GL dimensions differ")
        for monomial, coeff in part.terms.items():
            key = (monomial.exps, z - _first_row_count(monomial.exps, part.config.n))
            _accumulate(raw, key, coeff)
    if gl_config is None:
        raise PreconditionError("cannot infer the target algebra of an empty tensor")
    return Element(gl_config, get_engine(gl_config).normalize_terms(raw))


def _word_image(engine: RewriteEngine, letters: Sequence[int], z: int, coeff: Coefficient) -> RawTerms:
    shift = z - sum(1 for k in letters if k < engine.n)
    return {(exps, shift): coeff * value for exps, value in engine.order_word(letters).items()}


############################################################################
# check suites
############################################################################
def check_central(n: int) -> CheckReport:
    config = AlgebraConfig(n=n)
    det = quantum_determinant(n, config)

    def run(idx: GenIndex) -> CheckCase:
        g = Element.generator(config, *idx)
        residual = det * g - g * det
        return CheckCase(input=f"[D, {idx}]", residual=str(residual), passed=residual.is_zero())

    indices = [GenIndex(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    report = CheckReport(check="central", n=n, cases=parallel_map(run, indices))
    logger.info(report.summary())
    return report


def check_iso(n: int) -> CheckReport:
    """
    Every defining relation of SL (x) R[x, x^-1] must map to zero in GL, and for
    n = 2 distinct basis monomials of degree <= 3 must have distinct images.
    """
    gl = AlgebraConfig(n=n, variant=Variant.GL)
    engine = get_engine(gl)
    one = engine.one
    cases: List[CheckCase] = []

    def image(raw: RawTerms) -> Element:
        return Element(gl, engine.normalize_terms(raw))

    for x, y in itertools.permutations(range(n * n), 2):
        u, v = GenIndex.from_flat(x, n), GenIndex.from_flat(y, n)
        raw = _word_image(engine, (x, y), 0, one)
        for (a, b), coeff in swap_adjacent(u, v):
            for key, value in _word_image(engine, (a.flat(n), b.flat(n)), 0, -engine.ring.coerce(coeff)).items():
                _accumulate(raw, key, value)
        residual = image(raw)
        cases.append(CheckCase(input=f"relation {u} {v}", residual=str(residual), passed=residual.is_zero()))

    raw: RawTerms = {}
    for sigma in Permutation.all(n):
        for key, value in _word_image(engine, sigma.letters(n), 0, engine.ring.coerce(_signed_q_power(sigma.length))).items():
            _accumulate(raw, key, value)
    _accumulate(raw, ((0,) * (n * n), 0), -one)
    residual = image(raw)
    cases.append(CheckCase(input="D_q - 1", residual=str(residual), passed=residual.is_zero()))

    if n == 2:
        sl = AlgebraConfig(n=n, variant=Variant.SL)
        seen: Dict[Element, str] = {}
        for degree in range(4):
            for exps in _exponent_vectors(n * n, degree):
                monomial = NormalMonomial(exps)
                if not in_basis(monomial, sl):
                    continue
                for z in (-1, 0, 1):
                    label = f"{monomial} (x) x^{z}"
                    img = sl_gl_iso({z: Element(sl, {monomial: 1})}, gl)
                    clash = seen.get(img)
                    seen.setdefault(img, label)
                    cases.append(CheckCase(
                        input=f"injective {label}",
                        residual="" if clash is None else f"same image as {clash}",
                        passed=clash is None and not img.is_zero(),
                    ))

    report = CheckReport(check="iso", n=n, cases=cases)
    logger.info(report.summary())
    return report


def _exponent_vectors(size: int, degree: int) -> Iterator[Tuple[int, ...]]:
    for combo in itertools.combinations_with_replacement(range(size), degree):
        exps = [0] * size
        for k in combo:
            exps[k] += 1
        yield tuple(exps)


def _reducible_monomials(n: int, flavor: BasisFlavor) -> List[NormalMonomial]:
    extra = 2 if n <= 2 else 1
    pivots = pivot_letters(n, flavor)
    found = []
    for degree in range(extra + 1):
        for exps in _exponent_vectors(n * n, degree):
            found.append(NormalMonomial(tuple(e + (1 if k in pivots else 0) for k, e in enumerate(exps))))
    return found


def _identity_cases(n: int, flavor: BasisFlavor) -> List[CheckCase]:
    order = make_opposite_order(n) if flavor == BasisFlavor.OPPOSITE else None
    gl = AlgebraConfig(n=n, variant=Variant.GL, order=order, flavor=flavor)
    sl = gl.with_variant(Variant.SL)
    engine = get_engine(gl)
    cases: List[CheckCase] = []
    for monomial in _reducible_monomials(n, flavor):
        label = f"{flavor.value} {monomial.format(gl.order)}"
        step = _reduce_once(engine, monomial.exps, 0)

        if flavor == BasisFlavor.OPPOSITE:
            before = antidiagonal_degree(monomial.exps, n)
            drops = all(antidiagonal_degree(exps, n) < before for exps, _ in step)
        else:
            drops = all((sum(exps), exps) < (monomial.degree, monomial.exps) for exps, _ in step)

        expanded: Dict[Exps, Coefficient] = {}
        for (exps, z), coeff in step.items():
            for other, value in engine.multiply_terms({exps: engine.one}, engine.determinant_power(z)).items():
                _accumulate(expanded, other, coeff * value)
        identity_holds = expanded == {monomial.exps: engine.one}

        reduced = Element.from_monomial(gl, monomial)
        constrained = all(in_basis(m, gl) for m, _ in reduced)
        round_trip = from_wedge_form(to_wedge_form(reduced), gl) == reduced
        wedge_ok = all(in_wedge_basis(m, gl) for m in to_wedge_form(reduced))

        folded: Dict[NormalMonomial, Coefficient] = {}
        for m, c in reduced:
            _accumulate(folded, NormalMonomial(m.exps), c)
        sl_ok = Element.from_monomial(sl, monomial) == Element(sl, folded)

        checks = {
            "measure": drops,
            "identity": identity_holds,
            "basis": constrained,
            "wedge": round_trip and wedge_ok,
            "sl": sl_ok,
        }
        failed = [name for name, ok in checks.items() if not ok]
        cases.append(CheckCase(input=label, residual=", ".join(failed), passed=not failed))
    return cases


def check_identities(n: int) -> CheckReport:
    cases = [
        CheckCase(
            input="reversed determinant",
            residual=str(quantum_determinant(n) - quantum_determinant_reversed(n)),
            passed=quantum_determinant(n) == quantum_determinant_reversed(n),
        )
    ]
    for flavor in (BasisFlavor.STANDARD, BasisFlavor.OPPOSITE):
        cases.extend(_identity_cases(n, flavor))
    report = CheckReport(check="identities", n=n, cases=cases)
    logger.info(report.summary())
    return report
