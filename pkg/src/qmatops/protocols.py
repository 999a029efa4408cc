"""Inner product, matrix addition and matrix multiplication by ancilla flagging.

Each protocol loads its operands as amplitudes, applies four layers of
projector-controlled gates and Hadamards, and isolates the result on the
``B2 = 1`` branch. Runners simulate the circuit exactly, post-select on
``B2``, and undo the encoding scales to give a classical answer.

Stage numbering used by :func:`inspect_stage`: 0 is the prepared input,
1..4 follow each gate layer, 5 is the state after post-selecting ``B2 = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import oracle
from .errors import DimensionError, LayoutError
from .gates import SHARED_CONTROL, Circuit, concat_stages, h, proj_controlled
from .sampling import ShotRecord, sample_measurement
from .state import (
    RegisterLayout,
    StateVector,
    make_layout,
    project_and_extract,
    tensor,
)

DEFAULT_SLACK = 1.0 / math.sqrt(2.0)


# ---------------------------------------------------------------- encoding

def _pow2_at_least(d: int) -> int:
    return max(2, 1 << (int(d) - 1).bit_length())


def pad_vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    if v.size == 0:
        raise DimensionError("empty vector")
    out = np.zeros(_pow2_at_least(v.size), dtype=np.complex128)
    out[: v.size] = v
    return out


def pad_matrix(m, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or 0 in m.shape:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    r = rows or _pow2_at_least(m.shape[0])
    c = cols or _pow2_at_least(m.shape[1])
    out = np.zeros((r, c), dtype=np.complex128)
    out[: m.shape[0], : m.shape[1]] = m
    return out


@dataclass(frozen=True)
class EncodedOperand:
    """A vector or matrix loaded as amplitudes ``scale * raw`` plus optional slack.

    ``registers`` names the registers holding it: one for a vector, (row, col)
    for a matrix, (row, col, slack-flag) for the addition encoding.
    """

    raw: np.ndarray
    scale: float
    registers: tuple[str, ...]
    slack: float = 0.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("scale must be positive")
        total = self.scale**2 * float(np.sum(np.abs(self.raw) ** 2)) + self.slack**2
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"encoding is not normalized (norm^2 = {total!r})")

    @property
    def layout(self) -> RegisterLayout:
        shape = self.raw.shape
        widths = [int(math.log2(d)) for d in shape]
        if self.slack_register:
            widths.append(1)
        return make_layout(zip(self.registers, widths))

    @property
    def slack_register(self) -> str | None:
        return self.registers[2] if len(self.registers) == 3 else None

    def state(self) -> StateVector:
        amps = (self.scale * self.raw).reshape(-1)
        if self.slack_register:
            full = np.zeros(2 * amps.size, dtype=np.complex128)
            full[0::2] = amps  # flag qubit is the least significant
            full[1] = self.slack
            amps = full
        return StateVector(self.layout, amps)


def encode_vector(v, register: str = "S") -> EncodedOperand:
    """Normalize a vector onto one register, zero-padding to a power of two."""
    v = pad_vector(v)
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise ValueError("cannot encode the zero vector")
    return EncodedOperand(v, 1.0 / norm, (register,))


def encode_matrix(m, row_register: str = "R", col_register: str = "C") -> EncodedOperand:
    """Frobenius-normalize a matrix onto row and column registers."""
    m = pad_matrix(m)
    norm = float(np.linalg.norm(m))
    if norm == 0.0:
        raise ValueError("cannot encode the zero matrix")
    return EncodedOperand(m, 1.0 / norm, (row_register, col_register))


def encode_matrix_with_slack(
    m, c: float, row_register: str = "R", col_register: str = "C", flag_register: str = "D"
) -> EncodedOperand:
    """Addition encoding: ``c * m`` on flag 0, slack on ``|0>|0>|1>``."""
    m = pad_matrix(m)
    weight = c * c * float(np.sum(np.abs(m) ** 2))
    if not c > 0:
        raise ValueError("scale must be positive")
    if weight >= 1.0:
        raise ValueError(f"c^2 |M|_F^2 = {weight!r} leaves no room for slack")
    return EncodedOperand(m, float(c), (row_register, col_register, flag_register), math.sqrt(1.0 - weight))


# ---------------------------------------------------------------- results

@dataclass
class ProtocolResult:
    """Outcome of one protocol run.

    ``recovered`` is the de-scaled classical answer (``None`` when only
    probabilities were sampled). ``zero_result`` marks a zero success
    probability, which means the target quantity itself is zero.
    """

    protocol: str
    success_probability: float
    post_state: StateVector | None
    recovered: Any
    G: float
    scales: tuple[float, float]
    slack: tuple[float, float] | None = None
    phase: complex | None = None
    zero_result: bool = False
    shots: ShotRecord | None = None
    magnitude_estimate: float | None = None
    meta: dict = field(default_factory=dict)


def _flag_qubits(layout, names):
    return [(q, 0) for name in names for q in layout.qubits(name)]


# ---------------------------------------------------------------- inner product

INNER_REGISTERS = ("S1", "S2", "A", "B1", "B2")


def inner_product_layout(n: int) -> RegisterLayout:
    return make_layout([("S1", n), ("S2", n), ("A", n), ("B1", 1), ("B2", 1)])


def _pairwise_equal_stage(layout, left, right, anc):
    """Flip ancilla bit j when bit j of ``left`` equals bit j of ``right``."""
    width = layout.width(anc)
    ones = [
        proj_controlled([(layout.qubit(left, j), 1), (layout.qubit(right, j), 1)], layout.qubit(anc, j))
        for j in range(width)
    ]
    zeros = [
        proj_controlled([(layout.qubit(left, j), 0), (layout.qubit(right, j), 0)], layout.qubit(anc, j))
        for j in range(width)
    ]
    return ones + zeros


def _product_flag_stages(layout, left, right, anc):
    """The four gate layers shared by the inner-product and product protocols."""
    b1 = layout.qubit("B1")
    b2 = layout.qubit("B2")
    stage1 = _pairwise_equal_stage(layout, left, right, anc)
    stage2 = [proj_controlled([(q, 1) for q in layout.qubits(anc)], b1)]
    stage3 = [h(q) for name in (left, right, anc) for q in layout.qubits(name)]
    stage4 = [proj_controlled(_flag_qubits(layout, (left, right, anc)) + [(b1, 1)], b2)]
    return [stage1, stage2, stage3, stage4]


def build_inner_product_circuit(n: int, convention: str = SHARED_CONTROL) -> Circuit:
    if n < 1:
        raise ValueError("n must be at least 1")
    layout = inner_product_layout(n)
    stages = _product_flag_stages(layout, "S1", "S2", "A")
    return concat_stages(layout, stages, convention, f"inner(n={n})")


# ---------------------------------------------------------------- addition

def addition_layout(n: int, m: int) -> RegisterLayout:
    return make_layout(
        [("R1", n), ("C1", m), ("D1", 1), ("R2", n), ("C2", m), ("D2", 1), ("B1", 1), ("B2", 1)]
    )


def build_addition_circuit(n: int, m: int, convention: str = SHARED_CONTROL) -> Circuit:
    if n < 1 or m < 1:
        raise ValueError("n and m must be at least 1")
    L = addition_layout(n, m)
    d1, d2, b1, b2 = L.qubit("D1"), L.qubit("D2"), L.qubit("B1"), L.qubit("B2")
    stage1 = [proj_controlled([(d1, 1), (d2, 0)], b1), proj_controlled([(d1, 0), (d2, 1)], b1)]
    pairs = list(zip(L.qubits("R1"), L.qubits("R2"))) + list(zip(L.qubits("C1"), L.qubits("C2")))
    stage2 = [proj_controlled([(d1, 1)], pairs)]
    stage3 = [h(d1), h(d2)]
    stage4 = [proj_controlled([(d1, 0), (d2, 0), (b1, 1)], b2)]
    return concat_stages(L, [stage1, stage2, stage3, stage4], convention, f"add(n={n},m={m})")


# ---------------------------------------------------------------- multiplication

def multiplication_layout(n: int, k: int, m: int) -> RegisterLayout:
    return make_layout([("R1", n), ("C1", k), ("R2", k), ("C2", m), ("A", k), ("B1", 1), ("B2", 1)])


def build_multiplication_circuit(n: int, k: int, m: int, convention: str = SHARED_CONTROL) -> Circuit:
    if min(n, k, m) < 1:
        raise ValueError("n, k and m must be at least 1")
    layout = multiplication_layout(n, k, m)
    stages = _product_flag_stages(layout, "C1", "R2", "A")
    return concat_stages(layout, stages, convention, f"matmul(n={n},k={k},m={m})")


# ---------------------------------------------------------------- execution helpers

def _ancilla_zeros(layout: RegisterLayout, names) -> StateVector:
    return StateVector.zeros(make_layout([(n, layout.width(n)) for n in names]))


def run_stages(circuit: Circuit, state: StateVector, upto: int = 4) -> list[StateVector]:
    """States after stages 0..upto (stage 0 is the input itself)."""
    out = [state]
    start = 0
    for end in circuit.stage_ends[:upto]:
        state = circuit.run(state, start, end)
        out.append(state)
        start = end
    return out


def inspect_stage(circuit: Circuit, stage: int, state: StateVector) -> StateVector | None:
    """Simulated state after ``stage`` (0-5); stage 5 post-selects ``B2 = 1``.

    Returns ``None`` at stage 5 if the ``B2 = 1`` branch has zero weight.
    """
    n_stages = len(circuit.stage_ends)
    if not 0 <= stage <= n_stages + 1:
        raise ValueError(f"stage must be in 0..{n_stages + 1}, got {stage}")
    if stage <= n_stages:
        return run_stages(circuit, state, stage)[-1]
    final = run_stages(circuit, state, n_stages)[-1]
    return project_and_extract(final, {"B2": 1})[1]


def _execute(circuit, initial, decomposed):
    if not decomposed:
        return circuit.run(initial)
    from .depth import expand_circuit

    expanded = expand_circuit(circuit)
    extra = [(n, w) for n, w in expanded.layout.registers if n not in circuit.layout]
    start = tensor(initial, StateVector.zeros(make_layout(extra))) if extra else initial
    final = expanded.run(start)
    if not extra:
        return final
    p, rest = project_and_extract(final, {n: 0 for n, _ in extra})
    if abs(p - 1.0) > 1e-10:
        raise AssertionError(f"work ancillas not restored (P(all zero) = {p!r})")
    return rest


def _shots(final, shots, seed):
    if shots is None:
        return None
    return sample_measurement(final, "B2", shots, seed, success_value=1)


# ---------------------------------------------------------------- inner product run

def run_inner_product(
    v1, v2, shots: int | None = None, seed: int = 0, decomposed: bool = False
) -> ProtocolResult:
    """Bilinear product ``sum_k v1[k] * v2[k]`` (no conjugation).

    With ``shots`` set, ``B2`` is also sampled and ``magnitude_estimate``
    derived from the observed frequency.
    """
    v1 = np.asarray(v1, dtype=np.complex128).reshape(-1)
    v2 = np.asarray(v2, dtype=np.complex128).reshape(-1)
    if v1.shape != v2.shape:
        raise DimensionError(f"vector lengths differ: {v1.size} vs {v2.size}")
    e1 = encode_vector(v1, "S1")
    e2 = encode_vector(v2, "S2")
    n = e1.layout.width("S1")
    circuit = build_inner_product_circuit(n)
    initial = tensor(tensor(e1.state(), e2.state()), _ancilla_zeros(circuit.layout, ("A", "B1", "B2")))
    final = _execute(circuit, initial, decomposed)
    p, post = project_and_extract(final, {"B2": 1})
    c1c2 = e1.scale * e2.scale
    amp_scale = 2.0 ** (1.5 * n)
    result = ProtocolResult(
        "inner", p, post, 0j, G=0.0, scales=(e1.scale, e2.scale), zero_result=post is None,
        meta={"n": n},
    )
    if post is not None:
        amp = post.amplitude({"S1": 0, "S2": 0, "A": 0, "B1": 1})
        phase = amp / abs(amp)
        magnitude = math.sqrt(p * amp_scale**2) / c1c2
        result.phase = complex(phase)
        result.recovered = complex(magnitude * phase)
        result.G = math.sqrt(p) * amp_scale
    result.shots = _shots(final, shots, seed)
    if result.shots is not None:
        result.magnitude_estimate = math.sqrt(result.shots.estimated_p) * amp_scale / c1c2
    return result


def run_hermitian_inner_product(v1, v2, **kwargs) -> ProtocolResult:
    """Conventional ``<v1|v2> = sum conj(v1[k]) v2[k]`` via the bilinear protocol."""
    return run_inner_product(np.conj(np.asarray(v1, dtype=np.complex128)), v2, **kwargs)


# ---------------------------------------------------------------- addition run

def calibrate_addition_scales(norm1: float, norm2: float, s: float = DEFAULT_SLACK) -> tuple[float, float]:
    """Scales (c1, c2) that make both addition branches carry the same weight.

    The branch amplitudes are ``c1 * s2 * A1`` and ``c2 * s1 * A2`` with
    ``si = sqrt(1 - ci^2 |Ai|^2)``; equal weights need ``c1 s2 = c2 s1``.
    The larger-norm operand gets slack exactly ``s``; the other scale follows
    from ``c_small^2 = c_big^2 / (1 - c_big^2 (|A_big|^2 - |A_small|^2))``.
    """
    if not 0.0 < s < 1.0:
        raise ValueError(f"slack must lie in (0, 1), got {s!r}")
    big, small = max(norm1, norm2), min(norm1, norm2)
    if big == 0.0:
        raise ValueError("both operands are zero")
    c_big = math.sqrt(1.0 - s * s) / big
    c_small = c_big / math.sqrt(1.0 - c_big**2 * (big**2 - small**2))
    return (c_big, c_small) if norm1 >= norm2 else (c_small, c_big)


def run_addition(
    a1, a2, s: float = DEFAULT_SLACK, shots: int | None = None, seed: int = 0,
    scales: tuple[float, float] | None = None, decomposed: bool = False,
) -> ProtocolResult:
    """Element-wise sum ``a1 + a2``.

    By default the encoding scales are calibrated so the branch weights match
    and the recovered matrix is the plain sum. Passing ``scales`` skips the
    calibration; ``recovered`` is then the weighted sum ``c1 s2 a1 + c2 s1 a2``
    that the circuit actually forms.

    The reported ``G`` follows the usual convention ``P = s^2 G^2 / 4`` with
    ``s`` the slack of the larger operand and ``G = c |a1 + a2|_F``.
    """
    a1 = np.asarray(a1, dtype=np.complex128)
    a2 = np.asarray(a2, dtype=np.complex128)
    if a1.ndim != 2 or a1.shape != a2.shape:
        raise DimensionError(f"addition needs equal 2-D shapes, got {a1.shape} and {a2.shape}")
    shape = a1.shape
    p1, p2 = pad_matrix(a1), pad_matrix(a2)
    n, m = int(math.log2(p1.shape[0])), int(math.log2(p1.shape[1]))
    n1, n2 = float(np.linalg.norm(p1)), float(np.linalg.norm(p2))
    weighted = scales is not None
    if weighted:
        c1, c2 = map(float, scales)
    else:
        c1, c2 = calibrate_addition_scales(n1, n2, s)
    e1 = encode_matrix_with_slack(p1, c1, "R1", "C1", "D1")
    e2 = encode_matrix_with_slack(p2, c2, "R2", "C2", "D2")
    s1, s2 = e1.slack, e2.slack
    circuit = build_addition_circuit(n, m)
    initial = tensor(tensor(e1.state(), e2.state()), _ancilla_zeros(circuit.layout, ("B1", "B2")))
    final = _execute(circuit, initial, decomposed)
    prob, post = project_and_extract(final, {"B2": 1})

    # report (s, c) such that P = s^2 c^2 |a1 + a2|^2 / 4 in the calibrated case
    s_rep = s2 if n2 >= n1 else s1
    c_rep = (c1 * s2) / s_rep
    result = ProtocolResult(
        "add", prob, post, np.zeros(shape, dtype=np.complex128), G=0.0, scales=(c1, c2),
        slack=(s1, s2), zero_result=post is None,
        meta={"n": n, "m": m, "s": s_rep, "c": c_rep, "weighted": weighted},
    )
    if post is not None:
        sub = post.register_view()[:, :, 0, 0, 0, 0, 1]  # R1, C1 | D1 R2 C2 D2 = 0, B1 = 1
        amps = sub * math.sqrt(prob)
        combo = 2.0 * amps
        if not weighted:
            combo = combo / (c1 * s2)
        result.recovered = combo[: shape[0], : shape[1]]
        result.G = 2.0 * math.sqrt(prob) / s_rep
    result.shots = _shots(final, shots, seed)
    if result.shots is not None:
        result.magnitude_estimate = 2.0 * math.sqrt(result.shots.estimated_p) / (s_rep * c_rep)
    return result


# ---------------------------------------------------------------- multiplication run

def run_multiplication(
    a1, a2, shots: int | None = None, seed: int = 0, decomposed: bool = False
) -> ProtocolResult:
    """Matrix product ``a1 @ a2`` recovered from the ``B2 = 1`` branch."""
    a1 = np.asarray(a1, dtype=np.complex128)
    a2 = np.asarray(a2, dtype=np.complex128)
    if a1.ndim != 2 or a2.ndim != 2 or a1.shape[1] != a2.shape[0]:
        raise DimensionError(f"cannot multiply shapes {a1.shape} and {a2.shape}")
    rows, cols = a1.shape[0], a2.shape[1]
    kdim = _pow2_at_least(a1.shape[1])
    e1 = encode_matrix(pad_matrix(a1, cols=kdim), "R1", "C1")
    e2 = encode_matrix(pad_matrix(a2, rows=kdim), "R2", "C2")
    n, k = e1.layout.width("R1"), e1.layout.width("C1")
    m = e2.layout.width("C2")
    circuit = build_multiplication_circuit(n, k, m)
    initial = tensor(tensor(e1.state(), e2.state()), _ancilla_zeros(circuit.layout, ("A", "B1", "B2")))
    final = _execute(circuit, initial, decomposed)
    prob, post = project_and_extract(final, {"B2": 1})
    c1c2 = e1.scale * e2.scale
    amp_scale = 2.0 ** (1.5 * k)
    result = ProtocolResult(
        "matmul", prob, post, np.zeros((rows, cols), dtype=np.complex128), G=0.0,
        scales=(e1.scale, e2.scale), zero_result=post is None, meta={"n": n, "k": k, "m": m},
    )
    if post is not None:
        sub = post.register_view()[:, 0, 0, :, 0, 1]  # R1, C2 | C1 R2 A = 0, B1 = 1
        amps = sub * math.sqrt(prob)
        result.recovered = (amps * amp_scale / c1c2)[:rows, :cols]
        result.G = math.sqrt(prob) * amp_scale
    result.shots = _shots(final, shots, seed)
    if result.shots is not None:
        result.magnitude_estimate = math.sqrt(result.shots.estimated_p) * amp_scale / c1c2
    return result


def embed_addition_as_multiplication(a1, a2) -> tuple[np.ndarray, np.ndarray]:
    """Block matrices whose product holds ``a1 + a2`` in the top-left block.

    For square ``N x N`` inputs this is ``[[a1, I], [0, 0]]`` times
    ``[[I, 0], [a2, 0]]``. Rectangular ``N x M`` inputs use
    ``[[a1, I_N], [0, 0]]`` (2N x (M+N)) times ``[[I_M, 0], [a2, 0]]``
    ((M+N) x 2M), which reduces to the square form when ``N == M``.
    """
    a1 = np.asarray(a1)
    a2 = np.asarray(a2)
    if a1.ndim != 2 or a1.shape != a2.shape:
        raise DimensionError(f"embedding needs equal 2-D shapes, got {a1.shape} and {a2.shape}")
    N, M = a1.shape
    dtype = np.result_type(a1, a2, float)
    t1 = np.zeros((2 * N, M + N), dtype=dtype)
    t1[:N, :M] = a1
    t1[:N, M:] = np.eye(N)
    t2 = np.zeros((M + N, 2 * M), dtype=dtype)
    t2[:M, :M] = np.eye(M)
    t2[M:, :M] = a2
    return t1, t2


def run_addition_via_multiplication(a1, a2, **kwargs) -> ProtocolResult:
    """Sum computed by the product protocol on the block embedding."""
    t1, t2 = embed_addition_as_multiplication(a1, a2)
    res = run_multiplication(t1, t2, **kwargs)
    N, M = np.shape(a1)
    if not res.zero_result:
        res.meta["full_product"] = res.recovered
        res.recovered = res.recovered[:N, :M]
    res.protocol = "embed-add"
    return res


__all__ = [
    "EncodedOperand",
    "ProtocolResult",
    "build_addition_circuit",
    "build_inner_product_circuit",
    "build_multiplication_circuit",
    "calibrate_addition_scales",
    "embed_addition_as_multiplication",
    "encode_matrix",
    "encode_matrix_with_slack",
    "encode_vector",
    "inspect_stage",
    "run_addition",
    "run_addition_via_multiplication",
    "run_hermitian_inner_product",
    "run_inner_product",
    "run_multiplication",
]
