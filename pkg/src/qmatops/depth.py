"""Depth, width and gate counts of protocol circuits.

Before scheduling, every multi-controlled gate is lowered to Toffoli-level
gates: projector-controlled X and MCX go through :func:`decompose_mcx`, a
controlled multi-SWAP becomes one CSWAP per pair (driven by an AND ladder
if it has several controls). Each remaining gate costs one time step.
Work qubits are fresh per lowered gate and live in an appended ``W``
register, so independent ladders do not serialize on shared scratch space.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .gates import (
    MCX,
    PROJ_CTRL,
    SHARED_CONTROL,
    TOFFOLI,
    Circuit,
    and_ladder,
    cswap,
    mcx_gates,
    schedule_moments,
    x,
)
from .state import make_layout

WORK_REGISTER = "W"


@dataclass(frozen=True)
class DepthReport:
    depth: int
    width: int
    counts: dict
    convention: str

    @property
    def total_gates(self) -> int:
        return sum(self.counts.values())

    @property
    def toffoli_count(self) -> int:
        return self.counts.get(TOFFOLI, 0)


def _lower(gate, alloc):
    if gate.kind not in (MCX, PROJ_CTRL):
        return [gate]
    if not gate.is_swap:
        need = max(len(gate.controls) - 2, 0)
        return mcx_gates(gate.controls, gate.targets[0], alloc(need))
    if len(gate.controls) == 1:
        (c, b), = gate.controls
        flips = [x(c)] if b == 0 else []
        return flips + [cswap(c, a, t) for a, t in gate.pairs] + flips
    compute, flag = and_ladder(gate.controls, alloc(len(gate.controls) - 1))
    return compute + [cswap(flag, a, t) for a, t in gate.pairs] + compute[::-1]


def expand_circuit(circuit: Circuit, convention: str | None = None) -> Circuit:
    """Lower multi-controlled gates; appends a ``W`` work register when needed."""
    convention = convention or circuit.convention
    base = circuit.layout.total_qubits
    next_free = [base]

    def alloc(count):
        start = next_free[0]
        next_free[0] += count
        return list(range(start, start + count))

    gates = []
    for g in circuit.gates:
        gates.extend(_lower(g, alloc))
    work = next_free[0] - base
    layout = circuit.layout
    if work:
        layout = make_layout(layout.registers + ((WORK_REGISTER, work),))
    return schedule_moments(gates, convention, layout, circuit.name)


def analyze(circuit: Circuit, convention: str = SHARED_CONTROL) -> DepthReport:
    """Resource report of ``circuit`` after lowering and rescheduling."""
    if not circuit.gates:
        return DepthReport(0, circuit.layout.total_qubits, {}, convention)
    expanded = expand_circuit(circuit, convention)
    counts = Counter(g.kind for g in expanded.gates)
    return DepthReport(expanded.depth, expanded.layout.total_qubits, dict(sorted(counts.items())), convention)


def _build(protocol, size):
    from . import protocols

    if protocol == "inner":
        return protocols.build_inner_product_circuit(size)
    if protocol == "add":
        return protocols.build_addition_circuit(size, size)
    if protocol == "matmul":
        return protocols.build_multiplication_circuit(size, size, size)
    raise ValueError(f"unknown protocol {protocol!r}; expected inner, add or matmul")


@dataclass(frozen=True)
class ScalingRow:
    size: int
    depth: int
    toffoli: int
    width: int


def scaling_report(protocol: str, sizes, convention: str = SHARED_CONTROL) -> list[ScalingRow]:
    """One row per register size (qubits per index register, i.e. log2 of the dimension)."""
    rows = []
    for size in sizes:
        if int(size) < 1:
            raise ValueError("sizes are qubit counts and must be >= 1")
        rep = analyze(_build(protocol, int(size)), convention)
        rows.append(ScalingRow(int(size), rep.depth, rep.toffoli_count, rep.width))
    return rows


def linear_fit_residual(xs, ys) -> tuple[float, float, float]:
    """Least-squares line through (xs, ys); returns (slope, intercept, max |residual|)."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = ys - (slope * xs + intercept)
    return float(slope), float(intercept), float(np.abs(resid).max())
