import json

import pytest

from qcoord.algebra.coeff import LaurentPoly
from qcoord.algebra.monomial import GenIndex, NormalMonomial
from qcoord.algebra.rewrite import (
    AlgebraConfig,
    BasisFlavor,
    Element,
    RewriteEngine,
    Strategy,
    Variant,
    check_confluence,
    format_combination,
    get_engine,
    normalize,
    swap_adjacent,
)
from qcoord.core.config import settings
from qcoord.core.exceptions import ConfigMismatchError, PreconditionError, UnsupportedVariantError
from tests.utils.random_data import generate_random_word

q = LaurentPoly.q()
q_inv = LaurentPoly.monomial(-1)


def test_swap_same_row():
    ((word, coeff),) = swap_adjacent((1, 2), (1, 1))
    assert word == (GenIndex(1, 1), GenIndex(1, 2))
    assert coeff == q_inv


def test_swap_antidiagonal_pair_commutes():
    ((word, coeff),) = swap_adjacent((2, 1), (1, 2))
    assert word == (GenIndex(1, 2), GenIndex(2, 1))
    assert coeff == 1


def test_swap_diagonal_pair_has_correction():
    rules = swap_adjacent((2, 2), (1, 1))
    assert rules == [
        ((GenIndex(1, 1), GenIndex(2, 2)), LaurentPoly.constant(1)),
        ((GenIndex(1, 2), GenIndex(2, 1)), q_inv - q),
    ]
    assert swap_adjacent((1, 1), (1, 1)) is None


def test_normal_form_of_reversed_diagonal(create_config_fixture, create_word_fixture):
    config = create_config_fixture()
    element = create_word_fixture(config, (2, 2), (1, 1))
    assert str(element) == "t[1,1] t[2,2] + (q^-1 - q) t[1,2] t[2,1]"


def test_normal_form_of_row_swap(create_config_fixture, create_word_fixture):
    config = create_config_fixture()
    assert str(create_word_fixture(config, (1, 2), (1, 1))) == "q^-1 t[1,1] t[1,2]"
    assert str(create_word_fixture(config, (1, 2), (1, 1), coeff=-2)) == "-2 q^-1 t[1,1] t[1,2]"


def test_normal_form_in_opposite_order(create_config_fixture, create_word_fixture):
    config = create_config_fixture(opposite=True)
    element = create_word_fixture(config, (1, 1), (2, 2))
    assert str(element) == "t[2,2] t[1,1] + (-q^-1 + q) t[1,2] t[2,1]"


def test_normal_form_over_root_of_unity(create_config_fixture, create_word_fixture):
    config = create_config_fixture(ell=3)
    element = create_word_fixture(config, (2, 2), (1, 1))
    assert str(element) == "t[1,1] t[2,2] + (-1 - 2 q) t[1,2] t[2,1]"


def test_normalize_linear_combination(create_config_fixture):
    config = create_config_fixture()
    commutator = normalize({((2, 2), (1, 1)): 1, ((1, 1), (2, 2)): -1}, config)
    assert commutator == Element.from_monomial(config, NormalMonomial((0, 1, 1, 0)), q_inv - q)


@pytest.mark.parametrize("strategy", [Strategy.LEFTMOST, Strategy.RIGHTMOST])
def test_worklist_strategies_agree_with_insertion(create_config_fixture, rng, strategy):
    config = create_config_fixture(n=3)
    for _ in range(10):
        word = generate_random_word(3, 5, rng)
        assert Element.from_word(config, word, strategy=strategy) == Element.from_word(config, word)


def test_multiplication_is_associative(create_config_fixture, rng):
    config = create_config_fixture(n=2)
    a, b, c = (Element.from_word(config, generate_random_word(2, 3, rng)) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


def test_element_powers(create_config_fixture):
    config = create_config_fixture()
    t11 = Element.generator(config, 1, 1)
    assert (t11 ** 3).items() == [(NormalMonomial((3, 0, 0, 0)), LaurentPoly.constant(1))]
    assert Element.scalar(config, q) ** -2 == Element.scalar(config, q ** -2)
    with pytest.raises(PreconditionError):
        t11 ** -1


def test_determinant_inverse_in_gl(create_config_fixture):
    config = create_config_fixture(variant=Variant.GL)
    d = Element.det_power(config, 1)
    assert str(d) == "D"
    assert d * Element.det_power(config, -1) == 1
    assert d ** -1 == Element.det_power(config, -1)


def test_negative_determinant_power_needs_gl(create_config_fixture):
    with pytest.raises(PreconditionError):
        Element.det_power(create_config_fixture(), -1)
    with pytest.raises(UnsupportedVariantError):
        Element.from_monomial(create_config_fixture(), NormalMonomial((0, 0, 0, 0), -1))


def test_mixed_configs_are_rejected(create_config_fixture):
    a = Element.generator(create_config_fixture(n=2), 1, 1)
    b = Element.generator(create_config_fixture(n=3), 1, 1)
    with pytest.raises(ConfigMismatchError):
        a + b
    with pytest.raises(ConfigMismatchError):
        a * Element.generator(create_config_fixture(n=2, ell=3), 1, 1)


def test_config_validation():
    with pytest.raises(ValueError):
        AlgebraConfig(n=2, ell=4)
    with pytest.raises(ValueError):
        AlgebraConfig(n=0)
    config = AlgebraConfig(n=2, flavor=BasisFlavor.OPPOSITE)
    assert config.order.name == "opposite"
    assert config.describe() == "m2 over Z[q,q^-1], opposite order, opposite basis"
    assert config.specialized(5).ring.ell == 5
    assert config.with_variant(Variant.GL).variant == Variant.GL


def test_engine_is_shared_per_config(create_config_fixture):
    assert get_engine(create_config_fixture()) is get_engine(create_config_fixture())


def test_format_combination():
    assert format_combination([]) == "0"
    assert format_combination([("1", LaurentPoly.constant(-2))]) == "-2"
    assert format_combination([("t[1,1]", q), ("1", 1 + q)]) == "q t[1,1] + (1 + q)"
    assert format_combination([("t[1,1]", LaurentPoly.constant(1))]) == "t[1,1]"


def test_confluence_short_words():
    report = check_confluence(2, 3)
    assert report.passed
    assert len(report.cases) == 1 + 4 + 16 + 64
    payload = json.loads(report.to_json())
    assert payload["schema"] == 1
    assert payload["check"] == "pbw-confluence"


def test_confluence_over_root_of_unity():
    assert check_confluence(2, 3, ell=3).passed


@pytest.mark.slow
def test_confluence_n3_length5():
    report = check_confluence(3, 5)
    assert report.passed, report.summary()


@pytest.mark.parametrize("n, opposite", [(2, False), (2, True), (3, False), (3, True)])
@pytest.mark.parametrize("strategy", [Strategy.LEFTMOST, Strategy.RIGHTMOST])
def test_rewrite_step_lowers_measure(rng, create_config_fixture, n, opposite, strategy):
    engine = get_engine(create_config_fixture(n=n, opposite=opposite))
    for _ in range(20):
        word = tuple(GenIndex(i, j).flat(n) for i, j in generate_random_word(n, rng.randint(2, 4), rng))
        pending = [word]
        while pending:
            current = pending.pop()
            step = engine.rewrite_step(current, strategy)
            if step is None:
                continue
            for new_word, _ in step:
                assert engine.measure(new_word) < engine.measure(current)
                pending.append(new_word)


def test_engine_memo_is_bounded(create_config_fixture, mocker):
    mocker.patch.object(settings, "MEMO_LIMIT", 5)
    engine = RewriteEngine(create_config_fixture())
    t11, t22 = GenIndex(1, 1).flat(2), GenIndex(2, 2).flat(2)
    word = [t22, t11, t22, t11, t22]
    assert engine.order_word(word) == engine.reduce_word(word)
    assert len(engine._insert_memo) <= 5
    assert get_engine.cache_info().maxsize == settings.ENGINE_CACHE_SIZE
