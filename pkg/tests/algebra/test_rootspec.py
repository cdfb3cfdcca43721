import pytest

from qcoord.algebra.coeff import CycloElem, LaurentPoly, cyclotomic
from qcoord.algebra.monomial import NormalMonomial
from qcoord.algebra.rewrite import Element, Variant
from qcoord.algebra.rootspec import (
    ClassicalMonomial,
    ClassicalPoly,
    ModuleExpansion,
    check_frobenius_central,
    check_module,
    enumerate_basis,
    frobenius_image,
    frobenius_image_poly,
    module_expand,
    recombine,
    specialize,
)
from qcoord.core.config import settings
from qcoord.core.exceptions import (
    ConfigMismatchError,
    ParameterError,
    PreconditionError,
    UnsupportedVariantError,
)
from qcoord.utils.sampling import random_element


def test_specialize(create_config_fixture, create_word_fixture):
    generic = create_word_fixture(create_config_fixture(), (2, 2), (1, 1))
    special = specialize(generic, 3)
    assert special.config.ell == 3
    assert special == create_word_fixture(create_config_fixture(ell=3), (2, 2), (1, 1))
    assert specialize(special, 3) is special
    with pytest.raises(ConfigMismatchError):
        specialize(special, 5)


def test_classical_monomial_format():
    assert ClassicalMonomial((1, 0, 0, 2), -1).format() == "Tbar[1,1] Tbar[2,2]^2 Dbar^-1"
    assert str(ClassicalMonomial.one(2)) == "1"
    product = ClassicalMonomial((1, 0, 0, 0)) * ClassicalMonomial((1, 1, 0, 0), 1)
    assert product == ClassicalMonomial((2, 1, 0, 0), 1)


def test_classical_poly_arithmetic(modulus):
    tbar = ClassicalPoly(modulus, {ClassicalMonomial((1, 0, 0, 0)): 1})
    two = ClassicalPoly.constant(modulus, 2, 2)
    assert str(tbar + two) == "Tbar[1,1] + 2"
    assert (tbar - tbar).is_zero()
    assert two.constant_term() == 2
    assert (tbar + two).constant_term() is None
    square = (tbar + two) * (tbar - two)
    assert square == ClassicalPoly(modulus, {ClassicalMonomial((2, 0, 0, 0)): 1, ClassicalMonomial.one(2): -4})
    assert tbar * CycloElem.root_power(1, modulus) == ClassicalPoly(
        modulus, {ClassicalMonomial((1, 0, 0, 0)): LaurentPoly.q()}
    )
    with pytest.raises(ConfigMismatchError):
        tbar + ClassicalPoly.constant(cyclotomic(5), 2, 1)


def test_frobenius_image_is_a_power(create_config_fixture):
    config = create_config_fixture(ell=3)
    t11 = Element.generator(config, 1, 1)
    assert frobenius_image(ClassicalMonomial((1, 0, 0, 0)), config) == t11 ** 3
    poly = ClassicalPoly(cyclotomic(3), {ClassicalMonomial((0, 0, 0, 1)): 2, ClassicalMonomial.one(2): 1})
    assert frobenius_image_poly(poly, config) == Element.generator(config, 2, 2) ** 3 * 2 + 1


def test_frobenius_needs_root_of_unity(create_config_fixture):
    with pytest.raises(PreconditionError):
        frobenius_image(ClassicalMonomial.one(2), create_config_fixture())
    with pytest.raises(UnsupportedVariantError):
        frobenius_image(ClassicalMonomial.one(2), create_config_fixture(variant=Variant.SL, ell=3))


def test_frobenius_powers_are_central():
    report = check_frobenius_central(2, 3)
    assert report.passed
    assert len(report.cases) == 16


def test_module_expand_power(create_config_fixture):
    config = create_config_fixture(ell=3)
    expansion = module_expand(Element.generator(config, 1, 1) ** 4)
    assert str(expansion) == "t[1,1]: Tbar[1,1]"
    assert str(module_expand(Element.zero(config))) == "0"


def test_module_expand_folds_determinant(create_config_fixture):
    config = create_config_fixture(variant=Variant.GL, ell=3)
    d = Element.det_power(config, 1)
    expansion = module_expand(d)
    modulus = cyclotomic(3)
    assert expansion == ModuleExpansion(
        config,
        {
            NormalMonomial((1, 0, 0, 1)): ClassicalPoly.constant(modulus, 2, 1),
            NormalMonomial((0, 1, 1, 0)): ClassicalPoly.constant(modulus, 2, -LaurentPoly.q()),
        },
    )
    assert recombine(expansion) == d
    cube = module_expand(Element.det_power(config, -3))
    assert str(cube) == "1: Dbar^-1"


def test_module_round_trip(create_config_fixture, rng):
    for variant in (Variant.M, Variant.GL):
        config = create_config_fixture(variant=variant, ell=3)
        for _ in range(3):
            element = random_element(rng, config)
            expansion = module_expand(element)
            assert all(all(0 <= e < 3 for e in key.exps) for key in expansion.entries)
            assert recombine(expansion) == element


def test_enumerate_basis():
    keys = list(enumerate_basis(2, 3))
    assert len(keys) == 81
    assert [str(k) for k in keys[:2]] == ["1", "t[2,2]"]
    assert len(set(keys)) == 81


def test_enumerate_basis_validates_eagerly():
    with pytest.raises(UnsupportedVariantError):
        enumerate_basis(2, 3, Variant.SL)
    with pytest.raises(ParameterError):
        enumerate_basis(2, 4)


def test_module_suite(small_grids):
    report = check_module(2, 3, samples=4)
    assert report.passed, [(case.input, case.residual) for case in report.failures]
    assert report.cases[0].residual == "81 keys, expected 81"


def test_module_suite_gl(small_grids):
    report = check_module(2, 3, Variant.GL, samples=3)
    assert report.passed, [(case.input, case.residual) for case in report.failures]


@pytest.mark.parametrize("n, ell", [(2, 5), (3, 3)])
def test_frobenius_image_is_central(n, ell):
    report = check_frobenius_central(n, ell)
    assert report.passed, [(case.input, case.residual) for case in report.failures]
    assert len(report.cases) == n ** 4
    assert report.ell == ell


def test_module_suite_default_samples():
    report = check_module(2, 3)
    assert report.passed, [(case.input, case.residual) for case in report.failures]
    assert len(report.cases) == 1 + settings.RANDOM_SAMPLE_SIZE + 20
