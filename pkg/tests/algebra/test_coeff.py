import pytest
import sympy

from qcoord.algebra.coeff import (
    CycloElem,
    CyclotomicRing,
    LaurentPoly,
    LaurentRing,
    coefficient_ring,
    cyclotomic,
    reduce_mod,
    specialize_at_one,
)
from qcoord.core.exceptions import ConfigMismatchError, ParameterError, PreconditionError
from qcoord.utils.sampling import random_coefficient

q = LaurentPoly.q()
q_inv = LaurentPoly.monomial(-1)


def test_laurent_arithmetic():
    assert (q + q_inv) ** 2 == LaurentPoly({-2: 1, 0: 2, 2: 1})
    assert (q - q_inv) * (q + q_inv) == LaurentPoly({2: 1, -2: -1})
    assert q * q_inv == 1
    assert (q - q).is_zero()
    assert 3 - q == LaurentPoly({0: 3, 1: -1})


def test_laurent_printing():
    assert str(LaurentPoly({-1: 1, 0: 2, 3: -1})) == "q^-1 + 2 - q^3"
    assert str(q_inv - q) == "q^-1 - q"
    assert str(LaurentPoly.monomial(3, -2)) == "-2 q^3"
    assert str(LaurentPoly()) == "0"


def test_laurent_units():
    assert LaurentPoly.monomial(2, -1).inverse() == LaurentPoly.monomial(-2, -1)
    assert q ** -3 == LaurentPoly.monomial(-3)
    assert LaurentPoly.monomial(4, -1).as_signed_unit() == (-1, 4)
    with pytest.raises(PreconditionError):
        (q + 1).inverse()
    with pytest.raises(PreconditionError):
        LaurentPoly.constant(2) ** -1


def test_constant_hash_matches_int():
    assert hash(LaurentPoly.constant(5)) == hash(5)
    assert len({LaurentPoly.constant(1), LaurentPoly.constant(1)}) == 1


def test_specialize_at_one():
    assert specialize_at_one(q - q_inv) == 0
    assert specialize_at_one(LaurentPoly({-4: 2, 7: 3})) == 5
    assert specialize_at_one(7) == 7


@pytest.mark.parametrize("ell", [1, 3, 5, 7, 9, 15, 21])
def test_cyclotomic_matches_sympy(ell):
    x = sympy.Symbol("x")
    expected = [int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(ell, x), x).all_coeffs())]
    assert list(cyclotomic(ell).phi) == expected
    assert cyclotomic(ell).degree == sympy.totient(ell)


@pytest.mark.parametrize("ell", [0, -3, 2, 4, 10])
def test_cyclotomic_rejects_even_or_nonpositive(ell):
    with pytest.raises(ParameterError):
        cyclotomic(ell)


def test_root_of_unity_residues(modulus):
    one = reduce_mod(1, modulus)
    assert CycloElem.root_power(3, modulus) == one
    assert reduce_mod(q ** 3, modulus) == one
    assert reduce_mod(q - q_inv, modulus).residue == (1, 2)
    assert reduce_mod(q_inv, modulus).residue == (-1, -1)
    assert reduce_mod(1 + q + q * q, modulus).is_zero()


def test_signed_root_powers(modulus):
    assert reduce_mod(-q_inv, modulus).as_signed_root_power() == (-1, 2)
    assert reduce_mod(q ** 4, modulus).as_signed_root_power() == (1, 1)
    assert reduce_mod(2 * q, modulus).as_signed_root_power() is None
    assert reduce_mod(q, modulus).inverse() == reduce_mod(q_inv, modulus)
    with pytest.raises(PreconditionError):
        reduce_mod(2, modulus).inverse()


def test_mixed_moduli_are_rejected():
    with pytest.raises(ConfigMismatchError):
        reduce_mod(1, cyclotomic(3)) + reduce_mod(1, cyclotomic(5))


def test_cyclo_arithmetic_matches_laurent(modulus):
    a = LaurentPoly({-2: 3, 1: -1, 4: 2})
    b = LaurentPoly({0: 1, 5: -2})
    assert reduce_mod(a, modulus) * reduce_mod(b, modulus) == reduce_mod(a * b, modulus)
    assert reduce_mod(a, modulus) - b == reduce_mod(a - b, modulus)


def test_coefficient_ring():
    assert isinstance(coefficient_ring(), LaurentRing)
    ring = coefficient_ring(5)
    assert isinstance(ring, CyclotomicRing)
    assert ring.q_power(7) == ring.q_power(2)
    assert ring.coerce(q_inv) == ring.q_power(4)
    assert ring.unit_inverse(ring.q_power(1)) == ring.q_power(4)
    with pytest.raises(ConfigMismatchError):
        ring.coerce(reduce_mod(1, cyclotomic(3)))
    with pytest.raises(ParameterError):
        coefficient_ring().coerce(1.5)


@pytest.mark.parametrize("ell", [None, 3, 5])
def test_ring_axioms_on_random_triples(rng, ell):
    ring = coefficient_ring(ell)
    for _ in range(60):
        a, b, c = (ring.coerce(random_coefficient(rng)) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert a + ring.zero == a
        assert a * ring.one == a
        assert (a - a).is_zero()


@pytest.mark.parametrize("ell", [3, 5, 7])
def test_reduce_mod_is_a_homomorphism(rng, ell):
    modulus = cyclotomic(ell)
    for _ in range(60):
        a, b = random_coefficient(rng), random_coefficient(rng)
        assert reduce_mod(a + b, modulus) == reduce_mod(a, modulus) + reduce_mod(b, modulus)
        assert reduce_mod(a * b, modulus) == reduce_mod(a, modulus) * reduce_mod(b, modulus)
