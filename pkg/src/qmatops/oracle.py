"""Classical reference values computed with plain loops."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

ABS_FLOOR = 1e-12


def oracle_bilinear(v1, v2) -> complex:
    """``sum_k v1[k] * v2[k]`` with no conjugation."""
    v1 = list(np.asarray(v1, dtype=complex).reshape(-1))
    v2 = list(np.asarray(v2, dtype=complex).reshape(-1))
    if len(v1) != len(v2):
        raise DimensionError(f"vector lengths differ: {len(v1)} vs {len(v2)}")
    total = 0j
    for a, b in zip(v1, v2):
        total += a * b
    return total


def oracle_add(a1, a2) -> np.ndarray:
    a1 = np.asarray(a1, dtype=complex)
    a2 = np.asarray(a2, dtype=complex)
    if a1.shape != a2.shape:
        raise DimensionError(f"cannot add shapes {a1.shape} and {a2.shape}")
    out = np.empty_like(a1)
    for idx in np.ndindex(a1.shape):
        out[idx] = a1[idx] + a2[idx]
    return out


def oracle_matmul(a1, a2) -> np.ndarray:
    a1 = np.asarray(a1, dtype=complex)
    a2 = np.asarray(a2, dtype=complex)
    if a1.ndim != 2 or a2.ndim != 2 or a1.shape[1] != a2.shape[0]:
        raise DimensionError(f"cannot multiply shapes {a1.shape} and {a2.shape}")
    N, K = a1.shape
    M = a2.shape[1]
    out = np.zeros((N, M), dtype=complex)
    for i in range(N):
        for j in range(M):
            acc = 0j
            for k in range(K):
                acc += a1[i, k] * a2[k, j]
            out[i, j] = acc
    return out


@dataclass(frozen=True)
class ComparisonReport:
    max_abs_error: float
    max_rel_error: float
    passed: bool
    tolerance: float


def compare(result, reference, tolerance: float = 1e-9, floor: float = ABS_FLOOR) -> ComparisonReport:
    """Element-wise agreement check.

    Relative error is taken against ``max(|reference|_inf, floor)``, so
    entries near zero are judged on an absolute scale.
    """
    r = np.asarray(result, dtype=complex)
    ref = np.asarray(reference, dtype=complex)
    if r.shape != ref.shape:
        raise DimensionError(f"shape mismatch: {r.shape} vs {ref.shape}")
    if r.size == 0:
        return ComparisonReport(0.0, 0.0, True, tolerance)
    err = np.abs(r - ref)
    max_abs = float(err.max())
    scale = max(float(np.abs(ref).max()), floor)
    max_rel = max_abs / scale
    return ComparisonReport(max_abs, max_rel, max_rel <= tolerance, tolerance)
