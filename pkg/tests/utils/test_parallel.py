from qcoord.core.config import settings
from qcoord.utils.parallel import parallel_map, worker_count
from qcoord.utils.sampling import make_rng, random_element, random_monomial


def test_parallel_map_preserves_order():
    assert parallel_map(lambda x: x * x, range(50)) == [x * x for x in range(50)]
    assert parallel_map(str, []) == []


def test_single_worker_runs_inline(mocker):
    mocker.patch.object(settings, "QCOORD_THREADS", 1)
    executor = mocker.patch("qcoord.utils.parallel.ThreadPoolExecutor")

    assert parallel_map(lambda x: x + 1, [1, 2, 3]) == [2, 3, 4]
    assert worker_count() == 1
    executor.assert_not_called()


def test_worker_count_default(mocker):
    mocker.patch.object(settings, "QCOORD_THREADS", None)

    assert worker_count() is None


def test_sampling_is_reproducible(create_config_fixture):
    config = create_config_fixture(ell=3)

    first = random_element(make_rng(), config)
    second = random_element(make_rng(), config)

    assert first == second


def test_random_monomial_bounds(create_config_fixture):
    rng = make_rng(1)
    config = create_config_fixture(ell=5)

    for _ in range(20):
        monomial = random_monomial(rng, config)
        assert all(0 <= e < 10 for e in monomial.exps)
        assert monomial.dpower == 0
