"""Born-rule shot sampling and repeated-trial success arithmetic.

Shots are drawn with NumPy's ``Generator(PCG64(seed))``: PCG64 is a named,
documented generator, so a seed reproduces the same outcome sequence on any
platform running the same NumPy stream version.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .state import StateVector, register_probabilities


@dataclass(frozen=True)
class ShotRecord:
    shots: int
    successes: int
    estimated_p: float
    stderr: float
    seed: int

    def within(self, p: float, sigmas: float = 3.0) -> bool:
        """Whether ``p`` lies within ``sigmas`` binomial standard errors of the estimate.

        The standard error is evaluated at ``p`` itself so a zero count does
        not produce a zero-width interval.
        """
        se = math.sqrt(max(p * (1.0 - p), 0.0) / self.shots)
        return abs(self.estimated_p - p) <= sigmas * se + 1e-15


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))


def sample_register(state: StateVector, register: str, shots: int, seed: int) -> np.ndarray:
    """Outcome value of ``register`` for each shot."""
    if shots < 1:
        raise ValueError("shots must be at least 1")
    probs = register_probabilities(state, register)
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    u = make_rng(seed).random(shots)
    return np.searchsorted(cdf, u, side="right")


def sample_measurement(
    state: StateVector, register: str, shots: int, seed: int, success_value: int = 1
) -> ShotRecord:
    """Measure ``register`` ``shots`` times; count outcomes equal to ``success_value``."""
    outcomes = sample_register(state, register, shots, seed)
    k = int(np.count_nonzero(outcomes == success_value))
    p_hat = k / shots
    return ShotRecord(shots, k, p_hat, math.sqrt(p_hat * (1.0 - p_hat) / shots), int(seed))


def amplification_probability(p: float, trials: int) -> float:
    """Chance that at least one of ``trials`` independent runs succeeds."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p!r}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if p == 1.0:
        return 1.0
    return -math.expm1(trials * math.log1p(-p))


def required_trials(p: float, target: float) -> int:
    """Smallest trial count whose success chance reaches ``target``."""
    if not 0.0 < p <= 1.0:
        raise ValueError("p must be in (0, 1]; a zero-probability outcome never succeeds")
    if not 0.0 < target < 1.0:
        raise ValueError("target must be in (0, 1)")
    if p == 1.0:
        return 1
    L = max(1, math.ceil(math.log1p(-target) / math.log1p(-p)))
    # guard the ceil against rounding on either side
    while L > 1 and amplification_probability(p, L - 1) >= target:
        L -= 1
    while amplification_probability(p, L) < target:
        L += 1
    return L
