"""
Exact coefficient arithmetic.

Two coefficient rings are supported: the Laurent polynomial ring Z[q, q^-1]
(`LaurentPoly`, sparse) and its quotient by the l-th cyclotomic polynomial
(`CycloElem`, dense residues of degree < deg phi_l). No floating point is
used anywhere; all integers are Python ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from qcoord.core.exceptions import ConfigMismatchError, ParameterError, PreconditionError


############################################################################
# dense integer polynomials (ascending coefficient lists)
############################################################################
def _trim(coeffs: List[int]) -> List[int]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _dense_mul(a: Sequence[int], b: Sequence[int]) -> List[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] += x * y
    return out


def _dense_divmod_monic(
    numerator: Sequence[int], divisor: Sequence[int]
) -> Tuple[List[int], List[int]]:
    d = len(divisor) - 1
    rem = list(numerator)
    if len(rem) <= d:
        return [], rem + [0] * (d - len(rem))
    quot = [0] * (len(rem) - d)
    for k in range(len(rem) - 1 - d, -1, -1):
        c = rem[k + d]
        if c:
            quot[k] = c
            for i, x in enumerate(divisor):
                rem[k + i] -= c * x
    return quot, rem[:d]


def _q_power_text(exp: int) -> str:
    if exp == 0:
        return ""
    if exp == 1:
        return "q"
    return f"q^{exp}"


def format_q_terms(pairs: Iterable[Tuple[int, int]]) -> str:
    """Render (exponent, coefficient) pairs as `q^-1 + 2 - q^3`."""
    parts: List[str] = []
    for exp, coeff in pairs:
        body = _q_power_text(exp)
        mag = abs(coeff)
        if not body:
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{mag} {body}"
        if not parts:
            parts.append(text if coeff > 0 else f"-{text}")
        else:
            parts.append(f"{'+' if coeff > 0 else '-'} {text}")
    return " ".join(parts) if parts else "0"


############################################################################
# Laurent polynomials
############################################################################
class LaurentPoly:
    """Sparse Laurent polynomial in q with integer coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[int, int]] = None):
        self._terms: Dict[int, int] = {
            int(e): int(c) for e, c in (terms or {}).items() if c
        }

    @classmethod
    def constant(cls, value: int) -> LaurentPoly:
        return cls({0: value})

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> LaurentPoly:
        return cls({exp: coeff})

    @classmethod
    def q(cls) -> LaurentPoly:
        return cls({1: 1})

    @property
    def terms(self) -> Dict[int, int]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[int, int]]:
        for exp in sorted(self._terms):
            yield exp, self._terms[exp]

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def min_exponent(self) -> Optional[int]:
        return min(self._terms) if self._terms else None

    def max_exponent(self) -> Optional[int]:
        return max(self._terms) if self._terms else None

    def single_term(self) -> Optional[Tuple[int, int]]:
        if len(self._terms) != 1:
            return None
        ((exp, coeff),) = self._terms.items()
        return exp, coeff

    def as_signed_unit(self) -> Optional[Tuple[int, int]]:
        """Return (sign, k) when self == sign * q^k."""
        term = self.single_term()
        if term is None or abs(term[1]) != 1:
            return None
        return term[1], term[0]

    def inverse(self) -> LaurentPoly:
        unit = self.as_signed_unit()
        if unit is None:
            raise PreconditionError(f"{self} is not a unit of Z[q,q^-1]")
        sign, exp = unit
        return LaurentPoly({-exp: sign})

    def _coerce(self, other) -> Optional[LaurentPoly]:
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for exp, coeff in other._terms.items():
            total = terms.get(exp, 0) + coeff
            if total:
                terms[exp] = total
            else:
                terms.pop(exp, None)
        return LaurentPoly(terms)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms: Dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                terms[e1 + e2] = terms.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> LaurentPoly:
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = LaurentPoly.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if not self._terms:
            return hash(0)
        if set(self._terms) == {0}:
            return hash(self._terms[0])
        return hash(frozenset(self._terms.items()))

    def __str__(self) -> str:
        return format_q_terms(self.items())

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


def specialize_at_one(p: Union[LaurentPoly, int]) -> int:
    """Evaluate at q = 1."""
    if isinstance(p, int):
        return p
    return sum(p.terms.values())


############################################################################
# cyclotomic quotient
############################################################################
@dataclass(frozen=True)
class CyclotomicModulus:
    ell: int
    phi: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.phi) - 1

    def as_laurent(self) -> LaurentPoly:
        return LaurentPoly(dict(enumerate(self.phi)))

    def __str__(self) -> str:
        return str(self.as_laurent())


@lru_cache(maxsize=None)
def cyclotomic(ell: int) -> CyclotomicModulus:
    """
    phi_l = (q^l - 1) / prod(phi_d for d | l, d < l), computed by exact division.
    """
    if not isinstance(ell, int) or ell < 1 or ell % 2 == 0:
        raise ParameterError(f"root order must be an odd positive integer, got {ell}")
    numerator = [-1] + [0] * (ell - 1) + [1]
    for d in range(1, ell):
        if ell % d:
            continue
        numerator, rem = _dense_divmod_monic(numerator, cyclotomic(d).phi)
        if any(rem):
            raise ArithmeticError(f"phi_{d} does not divide q^{ell} - 1")
    return CyclotomicModulus(ell=ell, phi=tuple(_trim(numerator)))


class CycloElem:
    """Element of Z[q]/(phi_l(q)); the class of q is the root of unity eps."""

    __slots__ = ("residue", "modulus")

    def __init__(self, coeffs: Sequence[int], modulus: CyclotomicModulus):
        degree = modulus.degree
        coeffs = list(coeffs)
        if len(coeffs) > degree:
            _, coeffs = _dense_divmod_monic(coeffs, modulus.phi)
        self.residue: Tuple[int, ...] = tuple(coeffs) + (0,) * (degree - len(coeffs))
        self.modulus = modulus

    @classmethod
    def root_power(cls, k: int, modulus: CyclotomicModulus) -> CycloElem:
        """eps^k."""
        return _root_power_table(modulus.ell)[k % modulus.ell]

    def _coerce(self, other) -> Optional[CycloElem]:
        if isinstance(other, CycloElem):
            if other.modulus != self.modulus:
                raise ConfigMismatchError(
                    f"cannot combine residues mod phi_{self.modulus.ell} "
                    f"and phi_{other.modulus.ell}"
                )
            return other
        if isinstance(other, (int, LaurentPoly)):
            return reduce_mod(other, self.modulus)
        return None

    def is_zero(self) -> bool:
        return not any(self.residue)

    def __bool__(self) -> bool:
        return any(self.residue)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CycloElem([a + b for a, b in zip(self.residue, other.residue)], self.modulus)

    __radd__ = __add__

    def __neg__(self) -> CycloElem:
        return CycloElem([-a for a in self.residue], self.modulus)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CycloElem([a - b for a, b in zip(self.residue, other.residue)], self.modulus)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        _, rem = _dense_divmod_monic(
            _dense_mul(self.residue, other.residue), self.modulus.phi
        )
        return CycloElem(rem, self.modulus)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> CycloElem:
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = reduce_mod(1, self.modulus)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def as_signed_root_power(self) -> Optional[Tuple[int, int]]:
        """Return (sign, k) with 0 <= k < l when self == sign * eps^k."""
        negated = tuple(-a for a in self.residue)
        for k, power in enumerate(_root_power_table(self.modulus.ell)):
            if power.residue == self.residue:
                return 1, k
            if power.residue == negated:
                return -1, k
        return None

    def inverse(self) -> CycloElem:
        unit = self.as_signed_root_power()
        if unit is None:
            raise PreconditionError(f"{self} is not of the form +-eps^k")
        sign, k = unit
        return CycloElem.root_power(-k, self.modulus) * sign

    def lift(self) -> LaurentPoly:
        return LaurentPoly(dict(enumerate(self.residue)))

    def single_term(self) -> Optional[Tuple[int, int]]:
        return self.lift().single_term()

    def __eq__(self, other) -> bool:
        if isinstance(other, CycloElem) and other.modulus != self.modulus:
            return False
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.residue == other.residue

    def __hash__(self) -> int:
        return hash((self.modulus.ell, self.residue))

    def __str__(self) -> str:
        return str(self.lift())

    def __repr__(self) -> str:
        return f"CycloElem({self}; ell={self.modulus.ell})"


def reduce_mod(p: Union[LaurentPoly, int], modulus: CyclotomicModulus) -> CycloElem:
    """Canonical residue of p in Z[q]/(phi_l); negative powers use eps^-1 = eps^(l-1)."""
    if isinstance(p, int):
        p = LaurentPoly.constant(p)
    folded = [0] * modulus.ell
    for exp, coeff in p.items():
        folded[exp % modulus.ell] += coeff
    return CycloElem(folded, modulus)


@lru_cache(maxsize=None)
def _root_power_table(ell: int) -> Tuple[CycloElem, ...]:
    modulus = cyclotomic(ell)
    return tuple(
        reduce_mod(LaurentPoly.monomial(k), modulus) for k in range(ell)
    )


############################################################################
# coefficient rings
############################################################################
Coefficient = Union[LaurentPoly, CycloElem]


class LaurentRing:
    """Z[q, q^-1]."""

    ell: Optional[int] = None

    def __init__(self):
        self.zero = LaurentPoly()
        self.one = LaurentPoly.constant(1)

    def q_power(self, k: int) -> LaurentPoly:
        return LaurentPoly.monomial(k)

    def coerce(self, value) -> LaurentPoly:
        if isinstance(value, LaurentPoly):
            return value
        if isinstance(value, int):
            return LaurentPoly.constant(value)
        raise ParameterError(f"cannot use {value!r} as a coefficient in Z[q,q^-1]")

    def signed_unit(self, value: LaurentPoly) -> Optional[Tuple[int, int]]:
        return value.as_signed_unit()

    def unit_inverse(self, value: LaurentPoly) -> LaurentPoly:
        return value.inverse()

    def __str__(self) -> str:
        return "Z[q,q^-1]"


class CyclotomicRing:
    """Z[q]/(phi_l(q))."""

    def __init__(self, modulus: CyclotomicModulus):
        self.modulus = modulus
        self.ell: Optional[int] = modulus.ell
        self.zero = reduce_mod(0, modulus)
        self.one = reduce_mod(1, modulus)

    def q_power(self, k: int) -> CycloElem:
        return CycloElem.root_power(k, self.modulus)

    def coerce(self, value) -> CycloElem:
        if isinstance(value, CycloElem):
            if value.modulus != self.modulus:
                raise ConfigMismatchError(
                    f"residue mod phi_{value.modulus.ell} used in Z_eps for l={self.ell}"
                )
            return value
        if isinstance(value, (int, LaurentPoly)):
            return reduce_mod(value, self.modulus)
        raise ParameterError(f"cannot use {value!r} as a coefficient in Z_eps")

    def signed_unit(self, value: CycloElem) -> Optional[Tuple[int, int]]:
        return value.as_signed_root_power()

    def unit_inverse(self, value: CycloElem) -> CycloElem:
        return value.inverse()

    def __str__(self) -> str:
        return f"Z[q]/(phi_{self.ell})"


CoefficientRing = Union[LaurentRing, CyclotomicRing]


@lru_cache(maxsize=None)
def coefficient_ring(ell: Optional[int] = None) -> CoefficientRing:
    if ell is None:
        return LaurentRing()
    return CyclotomicRing(cyclotomic(ell))
