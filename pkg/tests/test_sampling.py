import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmatops.errors import LayoutError
from qmatops.protocols import run_multiplication
from qmatops.sampling import amplification_probability, required_trials, sample_measurement
from qmatops.state import StateVector, make_layout

from conftest import GOLDEN_A1, GOLDEN_A2

LAY = make_layout([("q", 1), ("B2", 1)])


def test_certain_and_impossible():
    sure = StateVector.basis(LAY, {"q": 0, "B2": 1})
    assert sample_measurement(sure, "B2", 500, 7).successes == 500
    never = StateVector.basis(LAY, {"q": 1, "B2": 0})
    rec = sample_measurement(never, "B2", 500, 7)
    assert rec.successes == 0 and rec.estimated_p == 0.0


def test_errors():
    psi = StateVector.zeros(LAY)
    with pytest.raises(LayoutError):
        sample_measurement(psi, "nope", 10, 1)
    with pytest.raises(ValueError):
        sample_measurement(psi, "B2", 0, 1)


def test_deterministic_and_seed_sensitive():
    psi = StateVector(LAY, [0.6, 0.0, 0.0, 0.8])
    a = sample_measurement(psi, "B2", 1000, 42)
    b = sample_measurement(psi, "B2", 1000, 42)
    c = sample_measurement(psi, "B2", 1000, 43)
    assert a == b
    assert a.successes != c.successes or a.seed != c.seed


def test_golden_example_statistics():
    final = run_multiplication(GOLDEN_A1, GOLDEN_A2, shots=100_000, seed=11).shots
    se = math.sqrt(0.1106 * (1 - 0.1106) / 100_000)
    assert abs(final.estimated_p - 0.1106) <= 3 * se
    assert final.within(0.1106)


def test_convergence_within_three_sigma():
    exact = 0.3
    # B2 is the low bit: indices 1 and 3 carry B2 = 1
    psi = StateVector(LAY, [math.sqrt(0.5), math.sqrt(0.1), math.sqrt(0.2), math.sqrt(0.2)])
    for shots in (10**3, 10**4, 10**5):
        rec = sample_measurement(psi, "B2", shots, 5)
        assert rec.within(exact)
        assert rec.successes <= rec.shots and rec.estimated_p == rec.successes / rec.shots


def test_amplification_examples():
    N = 8
    val = amplification_probability(1 / N**3, N**3)
    assert val == pytest.approx(1 - (1 - 2**-9) ** 512, rel=1e-12)
    assert val == pytest.approx(0.6325, abs=5e-5)
    assert amplification_probability(1.0, 17) == 1.0
    seq = [amplification_probability(1 / N**3, N**3) for N in (2, 4, 8, 16, 32)]
    assert all(a > b for a, b in zip(seq, seq[1:]))
    assert all(v > 1 - math.exp(-1) for v in seq)


def test_amplification_tiny_p_no_underflow():
    assert amplification_probability(1e-18, 10**18) == pytest.approx(1 - math.exp(-1), rel=1e-9)


def test_required_trials_examples():
    assert required_trials(0.5, 0.75) == 2
    expect = math.ceil(math.log(0.01) / math.log(1 - 0.1106))
    scan = next(L for L in range(1, 1000) if 1 - (1 - 0.1106) ** L >= 0.99)
    assert required_trials(0.1106, 0.99) == expect == scan
    assert required_trials(1.0, 0.9) == 1
    with pytest.raises(ValueError):
        required_trials(0.0, 0.5)


@given(st.floats(1e-6, 0.999), st.integers(1, 10_000), st.integers(1, 10_000))
@settings(max_examples=200, deadline=None)
def test_amplification_monotone(p, L1, L2):
    lo, hi = sorted((L1, L2))
    assert amplification_probability(p, lo) <= amplification_probability(p, hi)
    assert amplification_probability(p * 0.5, lo) <= amplification_probability(p, lo)


@given(st.floats(1e-4, 0.999), st.integers(1, 5000))
@settings(max_examples=200, deadline=None)
def test_required_trials_inverts(p, L):
    target = amplification_probability(p, L)
    if 0 < target < 1:
        assert required_trials(p, target) <= L
