"""
Rewriting engine for the quantum matrix relations.

Every product of generators is rewritten into a linear combination of ordered
monomials (ordered with respect to the active `GenOrder`). The engine keeps
two paths to the same normal form:

* the memoized insertion path (`RewriteEngine.insert`): the rightmost letter
  is inserted into an already ordered prefix by repeatedly resolving the
  leftmost remaining inversion;
* the worklist path (`RewriteEngine.reduce_word`): one adjacent inversion is
  resolved per step, leftmost or rightmost, always on the largest unreduced
  word. It exposes single steps and is what the confluence suite compares.

For GL and SL the ordered result is then pushed into the determinant basis by
`qcoord.algebra.detloc.reduce_to_basis`.
"""

from __future__ import annotations

import itertools
import logging
import time
from enum import Enum
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, InstanceOf, field_validator, model_validator

from qcoord.algebra.coeff import (
    Coefficient,
    CoefficientRing,
    CycloElem,
    LaurentPoly,
    coefficient_ring,
    cyclotomic,
    format_q_terms,
    specialize_at_one,
)
from qcoord.algebra.monomial import (
    GenIndex,
    GenOrder,
    NormalMonomial,
    OrderKind,
    Word,
    check_index,
    format_word,
    make_opposite_order,
    row_major_order,
)
from qcoord.core.config import settings
from qcoord.core.exceptions import (
    ConfigMismatchError,
    ParameterError,
    PreconditionError,
    UnsupportedVariantError,
)
from qcoord.core.log_config import logging_settings
from qcoord.schemas.reports import CheckCase, CheckReport
from qcoord.utils.parallel import parallel_map

logger = logging.getLogger(logging_settings.LOGGER_NAME)

Exps = Tuple[int, ...]
Letters = Tuple[int, ...]
RawTerms = Dict[Tuple[Exps, int], Coefficient]


class Variant(str, Enum):
    M = "m"
    GL = "gl"
    SL = "sl"


class BasisFlavor(str, Enum):
    STANDARD = "standard"
    OPPOSITE = "opposite"


class Strategy(str, Enum):
    LEFTMOST = "leftmost"
    RIGHTMOST = "rightmost"


class AlgebraConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    variant: Variant = Variant.M
    order: Optional[InstanceOf[GenOrder]] = None
    ell: Optional[int] = None
    flavor: BasisFlavor = BasisFlavor.STANDARD

    @model_validator(mode="before")
    @classmethod
    def default_order(cls, data):
        if isinstance(data, dict) and data.get("order") is None:
            n = data.get("n")
            if isinstance(n, int) and n >= 1:
                flavor = data.get("flavor", BasisFlavor.STANDARD)
                if BasisFlavor(flavor) == BasisFlavor.OPPOSITE:
                    order = make_opposite_order(n)
                else:
                    order = row_major_order(n)
                data = {**data, "order": order}
        return data

    @field_validator("ell")
    @classmethod
    def odd_root_order(cls, ell: Optional[int]) -> Optional[int]:
        if ell is not None:
            cyclotomic(ell)
        return ell

    @model_validator(mode="after")
    def consistent_order(self):
        if self.order.n != self.n:
            raise ParameterError(
                f"order is for n={self.order.n} but the algebra has n={self.n}"
            )
        if self.flavor == BasisFlavor.OPPOSITE and self.order.kind != OrderKind.OPPOSITE:
            raise ParameterError("the opposite basis flavor needs an opposite-constrained order")
        return self

    @property
    def ring(self) -> CoefficientRing:
        return coefficient_ring(self.ell)

    def specialized(self, ell: Optional[int]) -> AlgebraConfig:
        return AlgebraConfig(
            n=self.n, variant=self.variant, order=self.order, ell=ell, flavor=self.flavor
        )

    def with_variant(self, variant: Variant) -> AlgebraConfig:
        return AlgebraConfig(
            n=self.n, variant=variant, order=self.order, ell=self.ell, flavor=self.flavor
        )

    def describe(self) -> str:
        ring = "Z[q,q^-1]" if self.ell is None else f"Z_eps(l={self.ell})"
        return f"{self.variant.value}{self.n} over {ring}, {self.order.name} order, {self.flavor.value} basis"


############################################################################
# relations
############################################################################
def _swap_rule(x: Tuple[int, int], y: Tuple[int, int]) -> Optional[List[Tuple[Word, LaurentPoly]]]:
    (a, b), (c, d) = x, y
    q = LaurentPoly.q()
    q_inv = LaurentPoly.monomial(-1)
    qdiff = q - q_inv
    swapped = (GenIndex(c, d), GenIndex(a, b))
    if (a, b) == (c, d):
        return None
    if a == c:
        return [(swapped, q if b < d else q_inv)]
    if b == d:
        return [(swapped, q if a < c else q_inv)]
    if (a < c) != (b < d):
        return [(swapped, LaurentPoly.constant(1))]
    if a < c:
        return [(swapped, LaurentPoly.constant(1)), ((GenIndex(a, d), GenIndex(c, b)), qdiff)]
    return [(swapped, LaurentPoly.constant(1)), ((GenIndex(c, b), GenIndex(a, d)), -qdiff)]


def swap_adjacent(x: Tuple[int, int], y: Tuple[int, int]) -> Optional[List[Tuple[Word, LaurentPoly]]]:
    """
    Rewrite the two-letter word x*y in terms of y*x (plus one correction word
    for the diagonal pairs). Identical letters return None.
    """
    return _swap_rule(tuple(x), tuple(y))


def _accumulate(target: Dict, key, value) -> None:
    total = target.get(key)
    total = value if total is None else total + value
    if total:
        target[key] = total
    else:
        target.pop(key, None)


def _remember(memo: Dict, key, value) -> None:
    # memos live as long as the engine; start over once one reaches MEMO_LIMIT
    if len(memo) >= settings.MEMO_LIMIT:
        logger.debug(f"Memo reached {len(memo)} entries, clearing")
        memo.clear()
    memo[key] = value


############################################################################
# engine
############################################################################
class RewriteEngine:
    def __init__(self, config: AlgebraConfig):
        self.config = config
        self.n = config.n
        self.order = config.order
        self.ring = config.ring
        self.rank = config.order.rank
        self.one = self.ring.one
        self.zero = self.ring.zero
        self._swaps: Dict[Tuple[int, int], Tuple[Tuple[Letters, Coefficient], ...]] = {}
        size = self.n * self.n
        for x, y in itertools.permutations(range(size), 2):
            if self.rank[x] > self.rank[y]:
                rule = _swap_rule(GenIndex.from_flat(x, self.n), GenIndex.from_flat(y, self.n))
                self._swaps[(x, y)] = tuple(
                    ((u.flat(self.n), v.flat(self.n)), self.ring.coerce(coeff))
                    for (u, v), coeff in rule
                )
        self._insert_memo: Dict[Tuple[Exps, int], Dict[Exps, Coefficient]] = {}
        self._product_memo: Dict[Tuple[Exps, Exps], Dict[Exps, Coefficient]] = {}
        self._det_powers: Dict[int, Dict[Exps, Coefficient]] = {}

    # letters and exponent vectors
    def _last_letter(self, exps: Exps) -> Optional[int]:
        for k in reversed(self.order.sequence):
            if exps[k]:
                return k
        return None

    def _bump(self, exps: Exps, letter: int, by: int = 1) -> Exps:
        out = list(exps)
        out[letter] += by
        return tuple(out)

    def exps_of(self, letters: Sequence[int]) -> Exps:
        out = [0] * (self.n * self.n)
        for k in letters:
            out[k] += 1
        return tuple(out)

    def letters_of(self, exps: Exps) -> Letters:
        return tuple(k for k in self.order.sequence for _ in range(exps[k]))

    def inversions(self, letters: Sequence[int]) -> int:
        rank = self.rank
        return sum(
            1
            for p in range(len(letters))
            for r in range(p + 1, len(letters))
            if rank[letters[p]] > rank[letters[r]]
        )

    def measure(self, letters: Sequence[int]) -> Tuple[Tuple[int, ...], int]:
        """(weight, inversion count): strictly decreases along every rewrite step."""
        exps = self.exps_of(letters)
        return (len(letters), *exps), self.inversions(letters)

    # memoized insertion
    def insert(self, exps: Exps, letter: int) -> Dict[Exps, Coefficient]:
        """Normal form of (ordered monomial `exps`) * letter."""
        key = (exps, letter)
        cached = self._insert_memo.get(key)
        if cached is not None:
            return cached
        last = self._last_letter(exps)
        if last is None or self.rank[last] <= self.rank[letter]:
            result = {self._bump(exps, letter): self.one}
        else:
            prefix = self._bump(exps, last, -1)
            result: Dict[Exps, Coefficient] = {}
            for (u, v), coeff in self._swaps[(last, letter)]:
                for e1, c1 in self.insert(prefix, u).items():
                    for e2, c2 in self.insert(e1, v).items():
                        _accumulate(result, e2, coeff * c1 * c2)
        _remember(self._insert_memo, key, result)
        return result

    def order_word(self, letters: Sequence[int], start: Optional[Exps] = None) -> Dict[Exps, Coefficient]:
        current: Dict[Exps, Coefficient] = {
            start if start is not None else (0,) * (self.n * self.n): self.one
        }
        for letter in letters:
            following: Dict[Exps, Coefficient] = {}
            for exps, coeff in current.items():
                for e2, c2 in self.insert(exps, letter).items():
                    _accumulate(following, e2, coeff * c2)
            current = following
        return current

    def multiply_exps(self, left: Exps, right: Exps) -> Dict[Exps, Coefficient]:
        key = (left, right)
        cached = self._product_memo.get(key)
        if cached is None:
            cached = self.order_word(self.letters_of(right), start=left)
            _remember(self._product_memo, key, cached)
        return cached

    def multiply_terms(self, left: Mapping[Exps, Coefficient], right: Mapping[Exps, Coefficient]) -> Dict[Exps, Coefficient]:
        out: Dict[Exps, Coefficient] = {}
        for e1, c1 in left.items():
            for e2, c2 in right.items():
                for e, c in self.multiply_exps(e1, e2).items():
                    _accumulate(out, e, c1 * c2 * c)
        return out

    # quantum determinant at the level of ordered monomials
    def determinant_power(self, power: int) -> Dict[Exps, Coefficient]:
        """D_q^power (power >= 0) expanded in ordered monomials of M_n."""
        if power < 0:
            raise PreconditionError("negative determinant powers do not exist in M_n")
        cached = self._det_powers.get(power)
        if cached is not None:
            return cached
        if power == 0:
            result = {(0,) * (self.n * self.n): self.one}
        elif power == 1:
            from qcoord.algebra.detloc import Permutation

            result = {}
            for sigma in Permutation.all(self.n):
                sign = self.ring.coerce(LaurentPoly.monomial(sigma.length, (-1) ** sigma.length))
                for exps, coeff in self.order_word(sigma.letters(self.n)).items():
                    _accumulate(result, exps, sign * coeff)
        else:
            result = self.multiply_terms(self.determinant_power(power - 1), self.determinant_power(1))
        _remember(self._det_powers, power, result)
        return result

    # worklist path
    def rewrite_step(
        self, letters: Sequence[int], strategy: Strategy = Strategy.LEFTMOST
    ) -> Optional[List[Tuple[Letters, Coefficient]]]:
        """Resolve one adjacent inversion; None when the word is already ordered."""
        letters = tuple(letters)
        positions = [
            p for p in range(len(letters) - 1)
            if self.rank[letters[p]] > self.rank[letters[p + 1]]
        ]
        if not positions:
            return None
        p = positions[0] if strategy == Strategy.LEFTMOST else positions[-1]
        head, tail = letters[:p], letters[p + 2:]
        return [
            (head + pair + tail, coeff)
            for pair, coeff in self._swaps[(letters[p], letters[p + 1])]
        ]

    def reduce_word(
        self, letters: Sequence[int], strategy: Strategy = Strategy.LEFTMOST
    ) -> Dict[Exps, Coefficient]:
        pending: Dict[Letters, Coefficient] = {tuple(letters): self.one}
        result: Dict[Exps, Coefficient] = {}
        while pending:
            word = max(pending, key=self.measure)
            coeff = pending.pop(word)
            step = self.rewrite_step(word, strategy)
            if step is None:
                _accumulate(result, self.exps_of(word), coeff)
                continue
            for new_word, c in step:
                _accumulate(pending, new_word, coeff * c)
        return result

    # whole elements
    def normalize_terms(self, raw: Mapping[Tuple[Exps, int], Coefficient]) -> Dict[NormalMonomial, Coefficient]:
        variant = self.config.variant
        if variant == Variant.M:
            out: Dict[NormalMonomial, Coefficient] = {}
            for (exps, dpower), coeff in raw.items():
                if dpower:
                    raise UnsupportedVariantError("M_n has no inverse of the determinant")
                _accumulate(out, NormalMonomial(exps), coeff)
            return out
        from qcoord.algebra.detloc import reduce_to_basis

        if variant == Variant.SL:
            folded: RawTerms = {}
            for (exps, _), coeff in raw.items():
                _accumulate(folded, (exps, 0), coeff)
            raw = folded
        return reduce_to_basis(raw, self)

    def word_terms(self, letters: Sequence[int], strategy: Optional[Strategy] = None) -> Dict[Exps, Coefficient]:
        if strategy is None:
            return self.order_word(letters)
        return self.reduce_word(letters, strategy)

    def multiply(self, left: Element, right: Element) -> Element:
        if left.config != right.config or left.config != self.config:
            raise ConfigMismatchError(
                f"cannot multiply elements of {left.config.describe()} and {right.config.describe()}"
            )
        raw: RawTerms = {}
        for m1, c1 in left.terms.items():
            for m2, c2 in right.terms.items():
                z = m1.dpower + m2.dpower
                for exps, c in self.multiply_exps(m1.exps, m2.exps).items():
                    _accumulate(raw, (exps, z), c1 * c2 * c)
        return Element(self.config, self.normalize_terms(raw))


@lru_cache(maxsize=settings.ENGINE_CACHE_SIZE)
def get_engine(config: AlgebraConfig) -> RewriteEngine:
    return RewriteEngine(config)


############################################################################
# elements
############################################################################
Scalar = Union[int, LaurentPoly, CycloElem]


class Element:
    """A reduced element: ordered monomials (with a D-power) mapped to nonzero coefficients."""

    __slots__ = ("config", "_terms")

    def __init__(self, config: AlgebraConfig, terms: Optional[Mapping[NormalMonomial, Scalar]] = None):
        ring = config.ring
        self.config = config
        self._terms: Dict[NormalMonomial, Coefficient] = {}
        for monomial, coeff in (terms or {}).items():
            coeff = ring.coerce(coeff)
            if coeff:
                self._terms[monomial] = coeff

    # constructors
    @classmethod
    def zero(cls, config: AlgebraConfig) -> Element:
        return cls(config)

    @classmethod
    def scalar(cls, config: AlgebraConfig, value: Scalar) -> Element:
        return cls(config, {NormalMonomial.one(config.n): value})

    @classmethod
    def one(cls, config: AlgebraConfig) -> Element:
        return cls.scalar(config, 1)

    @classmethod
    def generator(cls, config: AlgebraConfig, i: int, j: int) -> Element:
        check_index((i, j), config.n)
        return cls.from_word(config, [(i, j)])

    @classmethod
    def from_word(
        cls,
        config: AlgebraConfig,
        word: Sequence[Tuple[int, int]],
        coeff: Scalar = 1,
        strategy: Optional[Strategy] = None,
    ) -> Element:
        engine = get_engine(config)
        letters = [check_index(idx, config.n).flat(config.n) for idx in word]
        c = config.ring.coerce(coeff)
        raw = {(exps, 0): c * value for exps, value in engine.word_terms(letters, strategy).items()}
        return cls(config, engine.normalize_terms(raw))

    @classmethod
    def from_monomial(cls, config: AlgebraConfig, monomial: NormalMonomial, coeff: Scalar = 1) -> Element:
        """An ordered monomial, pushed into the basis of the variant if needed."""
        engine = get_engine(config)
        return cls(config, engine.normalize_terms({(monomial.exps, monomial.dpower): config.ring.coerce(coeff)}))

    @classmethod
    def det_power(cls, config: AlgebraConfig, power: int) -> Element:
        """D_q^power; negative powers need GL."""
        if config.variant == Variant.SL:
            return cls.one(config)
        if config.variant == Variant.GL:
            return cls.from_monomial(config, NormalMonomial((0,) * (config.n * config.n), power))
        engine = get_engine(config)
        raw = {(exps, 0): c for exps, c in engine.determinant_power(power).items()}
        return cls(config, engine.normalize_terms(raw))

    # access
    @property
    def terms(self) -> Dict[NormalMonomial, Coefficient]:
        return dict(self._terms)

    def items(self) -> List[Tuple[NormalMonomial, Coefficient]]:
        """Terms in canonical order: largest (degree, exponents, dpower) first."""
        return sorted(self._terms.items(), key=lambda item: item[0].sort_key(), reverse=True)

    def __iter__(self) -> Iterator[Tuple[NormalMonomial, Coefficient]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def coefficient(self, monomial: NormalMonomial) -> Coefficient:
        return self._terms.get(monomial, self.config.ring.zero)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def leading_term(self) -> Optional[Tuple[NormalMonomial, Coefficient]]:
        items = self.items()
        return items[0] if items else None

    def map_coefficients(self, fn, config: Optional[AlgebraConfig] = None) -> Element:
        return Element(config or self.config, {m: fn(m, c) for m, c in self._terms.items()})

    # arithmetic
    def _lift(self, other) -> Optional[Element]:
        if isinstance(other, Element):
            if other.config != self.config:
                raise ConfigMismatchError(
                    f"cannot combine elements of {self.config.describe()} and {other.config.describe()}"
                )
            return other
        if isinstance(other, (int, LaurentPoly, CycloElem)):
            return Element.scalar(self.config, other)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for m, c in other._terms.items():
            _accumulate(terms, m, c)
        return Element(self.config, terms)

    __radd__ = __add__

    def __neg__(self) -> Element:
        return Element(self.config, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, LaurentPoly, CycloElem)):
            c = self.config.ring.coerce(other)
            return Element(self.config, {m: v * c for m, v in self._terms.items()})
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return get_engine(self.config).multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, LaurentPoly, CycloElem)):
            return self * other
        return NotImplemented

    def __pow__(self, exponent: int) -> Element:
        if exponent < 0:
            return self._unit_inverse() ** (-exponent)
        result = Element.one(self.config)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def _unit_inverse(self) -> Element:
        if len(self._terms) == 1:
            ((monomial, coeff),) = self._terms.items()
            if monomial.degree == 0 and self.config.ring.signed_unit(coeff) is not None:
                inverse = NormalMonomial(monomial.exps, -monomial.dpower)
                return Element.from_monomial(self.config, inverse, self.config.ring.unit_inverse(coeff))
        raise PreconditionError(f"{self} is not invertible (only units times powers of D are)")

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, LaurentPoly, CycloElem)):
            other = Element.scalar(self.config, other)
        if not isinstance(other, Element):
            return NotImplemented
        return self.config == other.config and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.config, frozenset(self._terms.items())))

    # printing
    def format(self) -> str:
        return format_combination(
            (monomial.format(self.config.order), coeff) for monomial, coeff in self.items()
        )

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Element({self.format()}; {self.config.describe()})"


def format_combination(items: Iterable[Tuple[str, Coefficient]]) -> str:
    """
    Print (body, coeff) pairs as a signed sum. Single-term coefficients print
    as a signed scalar, anything else in parentheses; "1" bodies are dropped.
    """
    parts: List[str] = []
    for body, coeff in items:
        single = coeff.single_term()
        if single is not None:
            exp, c = single
            sign = 1 if c > 0 else -1
            scalar = format_q_terms([(exp, abs(c))])
            if body == "1":
                text = scalar
            elif scalar == "1":
                text = body
            else:
                text = f"{scalar} {body}"
        else:
            sign = 1
            text = f"({coeff})" if body == "1" else f"({coeff}) {body}"
        if not parts:
            parts.append(text if sign > 0 else f"-{text}")
        else:
            parts.append(f"{'+' if sign > 0 else '-'} {text}")
    return " ".join(parts) if parts else "0"


def normalize(
    combination: Mapping[Sequence[Tuple[int, int]], Scalar],
    config: AlgebraConfig,
    strategy: Optional[Strategy] = None,
) -> Element:
    """Reduce a linear combination of arbitrary words to the basis of `config`."""
    engine = get_engine(config)
    raw: RawTerms = {}
    for word, coeff in combination.items():
        letters = [check_index(idx, config.n).flat(config.n) for idx in word]
        c = config.ring.coerce(coeff)
        for exps, value in engine.word_terms(letters, strategy).items():
            _accumulate(raw, (exps, 0), c * value)
    return Element(config, engine.normalize_terms(raw))


def multiply(a: Element, b: Element) -> Element:
    return a * b


############################################################################
# confluence suite
############################################################################
def _words(n: int, max_length: int) -> Iterator[Letters]:
    for length in range(max_length + 1):
        yield from itertools.product(range(n * n), repeat=length)


def check_confluence(n: int, max_length: int, ell: Optional[int] = None) -> CheckReport:
    """
    Leftmost and rightmost worklist reduction and the memoized insertion path
    must agree on every word of length <= max_length. Over Z[q,q^-1] the
    normal form must also collapse to the commutative monomial at q = 1.
    """
    config = AlgebraConfig(n=n, ell=ell)
    engine = get_engine(config)
    start = time.perf_counter()

    def run(letters: Letters) -> CheckCase:
        left = engine.reduce_word(letters, Strategy.LEFTMOST)
        right = engine.reduce_word(letters, Strategy.RIGHTMOST)
        fast = engine.order_word(letters)
        residual = {}
        for exps in set(left) | set(right) | set(fast):
            a = left.get(exps, config.ring.zero)
            if a != right.get(exps, config.ring.zero) or a != fast.get(exps, config.ring.zero):
                b = right.get(exps, config.ring.zero)
                residual[exps] = a - b if a != b else a - fast.get(exps, config.ring.zero)
        ok = not residual
        if ok and ell is None:
            classical: Dict[Exps, int] = {}
            for exps, coeff in left.items():
                _accumulate(classical, exps, specialize_at_one(coeff))
            ok = classical == {engine.exps_of(letters): 1}
        word = format_word([GenIndex.from_flat(k, n) for k in letters])
        shown = Element(config, {NormalMonomial(e): c for e, c in residual.items()})
        return CheckCase(input=word, residual=str(shown), passed=ok)

    cases = parallel_map(run, _words(n, max_length))
    report = CheckReport(check="pbw-confluence", n=n, ell=ell, cases=cases)
    logger.info(
        f"Confluence over {len(cases)} words (n={n}, length<={max_length}) "
        f"finished in {time.perf_counter() - start:.2f}s",
    )
    if not report.passed:
        logger.warning(f"Confluence failures: {len(report.failures)}")
    return report
