import numpy as np
import pytest

from idnc.channel import SeedSpec, draw_erasures, sample_erasure_probs
from idnc.model import new_system


def rng(seed=0):
    return np.random.default_rng(seed)


def test_zero_probability_never_erases():
    s = new_system(3, [set()] * 4, [0.0] * 4)
    g = rng()
    assert not any(any(draw_erasures(s, g)) for _ in range(2000))


def test_near_one_probability_almost_always_erases():
    s = new_system(3, [set()], [1 - 1e-9])
    g = rng()
    assert sum(draw_erasures(s, g)[0] for _ in range(2000)) == 2000


def test_empirical_rate():
    s = new_system(1, [set()], [0.25])
    g = rng(1)
    rate = np.mean([draw_erasures(s, g)[0] for _ in range(100_000)])
    assert abs(rate - 0.25) <= 0.01


def test_independence_between_users():
    s = new_system(1, [set(), set()], [0.3, 0.4])
    g = rng(2)
    draws = np.array([draw_erasures(s, g) for _ in range(100_000)], dtype=float)
    assert abs(np.corrcoef(draws[:, 0], draws[:, 1])[0, 1]) < 0.02


def test_homogeneous():
    assert sample_erasure_probs(3, 0.25, "homogeneous", rng()) == [0.25, 0.25, 0.25]


def test_heterogeneous_support():
    probs = sample_erasure_probs(5000, 0.25, "heterogeneous", rng())
    assert min(probs) >= 0.10 and max(probs) <= 0.40
    assert abs(np.mean(probs) - 0.25) < 0.01


def test_heterogeneous_lower_clip():
    probs = sample_erasure_probs(5000, 0.05, "heterogeneous", rng())
    assert min(probs) == 0.01
    assert max(probs) <= 0.20


@pytest.mark.parametrize("P", [0.0, -0.1, 0.95])
def test_rejects_bad_average(P):
    with pytest.raises(ValueError):
        sample_erasure_probs(3, P, "homogeneous", rng())


def test_rejects_bad_mode():
    with pytest.raises(ValueError):
        sample_erasure_probs(3, 0.2, "bursty", rng())


def test_seed_spec_replay():
    a = SeedSpec(42, 7).streams()
    b = SeedSpec(42, 7).streams()
    c = SeedSpec(42, 8).streams()
    xa, xb, xc = a.erasures.random(50), b.erasures.random(50), c.erasures.random(50)
    assert xa.tobytes() == xb.tobytes()
    assert xa.tobytes() != xc.tobytes()
    assert a.probs.random(5).tobytes() != xa[:5].tobytes()
