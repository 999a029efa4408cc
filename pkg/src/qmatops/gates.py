"""Gates, circuits, multi-controlled X decomposition and moment scheduling.

A :class:`Gate` carries explicit control polarities so the projector-controlled
operators ``P (x) X + (I - P) (x) I`` (with ``P`` a computational-basis
projector) are single gates. Simulation applies them exactly by index
arithmetic; :func:`decompose_mcx` lowers them to Toffoli ladders when a
resource count is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import GateError, LayoutError, NormError
from .state import NORM_TOL, RegisterLayout, StateVector, make_layout

X, H, SWAP, CX, TOFFOLI, MCX, CSWAP, PROJ_CTRL = (
    "X", "H", "SWAP", "CX", "TOFFOLI", "MCX", "CSWAP", "PROJ_CTRL",
)
KINDS = (X, H, SWAP, CX, TOFFOLI, MCX, CSWAP, PROJ_CTRL)

STRICT = "strict"
SHARED_CONTROL = "shared-control"
CONVENTIONS = (STRICT, SHARED_CONTROL)

# number of controls each fixed-arity kind must carry
_ARITY = {X: 0, H: 0, SWAP: 0, CX: 1, TOFFOLI: 2, CSWAP: 1}


@dataclass(frozen=True)
class Gate:
    """One circuit operation.

    ``targets`` holds the acted-on qubits; for swap-type payloads it is the
    flattened list of pairs ``(a0, b0, a1, b1, ...)``. ``controls`` is a tuple
    of ``(qubit, required_bit)``. ``payload`` is ``"X"`` or ``"SWAP"`` and is
    only meaningful for ``PROJ_CTRL``.
    """

    kind: str
    targets: tuple[int, ...]
    controls: tuple[tuple[int, int], ...] = ()
    payload: str = "X"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GateError(f"unknown gate kind {self.kind!r}")
        targets = tuple(int(t) for t in self.targets)
        controls = tuple((int(q), int(b)) for q, b in self.controls)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "controls", controls)
        if self.payload not in ("X", "SWAP"):
            raise GateError(f"payload must be 'X' or 'SWAP', got {self.payload!r}")
        if any(b not in (0, 1) for _, b in controls):
            raise GateError("control values must be 0 or 1")
        cq = [q for q, _ in controls]
        if len(set(cq)) != len(cq) or len(set(targets)) != len(targets):
            raise GateError("repeated qubit in gate")
        if set(cq) & set(targets):
            raise GateError(f"controls {cq} overlap payload qubits {list(targets)}")
        if min(cq + list(targets), default=0) < 0:
            raise GateError("negative qubit index")

        swapish = self.kind in (SWAP, CSWAP) or (self.kind == PROJ_CTRL and self.payload == "SWAP")
        if swapish:
            if not targets or len(targets) % 2:
                raise GateError("swap payload needs qubit pairs")
            if self.kind != PROJ_CTRL and len(targets) != 2:
                raise GateError(f"{self.kind} acts on exactly one pair")
        elif len(targets) != 1:
            raise GateError(f"{self.kind} needs exactly one target")
        if self.kind in _ARITY:
            if len(controls) != _ARITY[self.kind]:
                raise GateError(f"{self.kind} takes {_ARITY[self.kind]} control(s)")
            if any(b != 1 for _, b in controls):
                raise GateError(f"{self.kind} controls are positive; use X conjugation or PROJ_CTRL")
        elif not controls:
            raise GateError(f"{self.kind} needs at least one control")

    @property
    def control_qubits(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.controls)

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.control_qubits + self.targets

    @property
    def pairs(self) -> list[tuple[int, int]]:
        t = self.targets
        return [(t[i], t[i + 1]) for i in range(0, len(t), 2)]

    @property
    def is_swap(self) -> bool:
        return self.kind in (SWAP, CSWAP) or (self.kind == PROJ_CTRL and self.payload == "SWAP")

    def __str__(self):
        return _format_gate(self)


def x(q: int) -> Gate:
    return Gate(X, (q,))


def h(q: int) -> Gate:
    return Gate(H, (q,))


def swap(a: int, b: int) -> Gate:
    return Gate(SWAP, (a, b))


def cx(c: int, t: int) -> Gate:
    return Gate(CX, (t,), ((c, 1),))


def toffoli(c1: int, c2: int, t: int) -> Gate:
    return Gate(TOFFOLI, (t,), ((c1, 1), (c2, 1)))


def cswap(c: int, a: int, b: int) -> Gate:
    return Gate(CSWAP, (a, b), ((c, 1),))


def mcx(controls: Sequence[tuple[int, int]], target: int) -> Gate:
    return Gate(MCX, (target,), tuple(controls))


def proj_controlled(controls: Sequence[tuple[int, int]], payload) -> Gate:
    """Projector-controlled X or SWAP.

    ``payload`` is either a single target qubit (X payload) or a sequence of
    qubit pairs to swap. The gate applies the payload exactly on the basis
    states where every control qubit holds its required bit.
    """
    controls = tuple(controls)
    if not controls:
        raise GateError("projector-controlled gate needs a nonempty control set")
    if isinstance(payload, (int, np.integer)):
        return Gate(PROJ_CTRL, (int(payload),), controls, "X")
    flat = []
    for pair in payload:
        a, b = pair
        flat += [int(a), int(b)]
    return Gate(PROJ_CTRL, tuple(flat), controls, "SWAP")


def _control_masks(layout: RegisterLayout, gate: Gate) -> tuple[int, int]:
    cmask = cval = 0
    for q, b in gate.controls:
        bit = layout.bit(q)
        cmask |= bit
        if b:
            cval |= bit
    return cmask, cval


def apply_inplace(amp: np.ndarray, layout: RegisterLayout, gate: Gate) -> None:
    """Apply ``gate`` to a writable amplitude array."""
    total = layout.total_qubits
    for q in gate.qubits:
        if not 0 <= q < total:
            raise GateError(f"{gate.kind} touches qubit {q}, state has {total}")
    if gate.kind == H:
        kernels.hadamard(amp, layout.bit(gate.targets[0]))
        return
    cmask, cval = _control_masks(layout, gate)
    if gate.is_swap:
        for a, b in gate.pairs:
            kernels.controlled_swap(amp, layout.bit(a), layout.bit(b), cmask, cval)
    else:
        kernels.controlled_x(amp, layout.bit(gate.targets[0]), cmask, cval)


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Return ``U|psi>`` for one gate; the input state is untouched."""
    amp = state.copy_amplitudes()
    apply_inplace(amp, state.layout, gate)
    return _checked(state.layout, amp)


def _checked(layout, amp) -> StateVector:
    n2 = kernels.masked_norm2(amp)
    if abs(n2 - 1.0) > NORM_TOL:
        raise NormError(f"norm^2 drifted to {n2!r}")
    return StateVector(layout, amp, check_norm=False)


@dataclass(frozen=True)
class Circuit:
    """Moment-ordered gates over a layout.

    ``stage_ends[i]`` is the number of moments completed after stage ``i+1``;
    builders use it to expose intermediate states.
    """

    layout: RegisterLayout
    moments: tuple[tuple[Gate, ...], ...]
    stage_ends: tuple[int, ...] = ()
    name: str = ""
    convention: str = SHARED_CONTROL

    def __post_init__(self):
        object.__setattr__(self, "moments", tuple(tuple(m) for m in self.moments))
        object.__setattr__(self, "stage_ends", tuple(self.stage_ends))
        total = self.layout.total_qubits
        for moment in self.moments:
            for g in moment:
                if max(g.qubits) >= total:
                    raise GateError(f"{g} touches qubit beyond {total - 1}")

    @property
    def depth(self) -> int:
        return len(self.moments)

    @property
    def gates(self) -> list[Gate]:
        return [g for m in self.moments for g in m]

    def __len__(self):
        return sum(len(m) for m in self.moments)

    def run(self, state: StateVector, start_moment: int = 0, stop_moment: int | None = None) -> StateVector:
        """Simulate moments ``[start_moment, stop_moment)``."""
        if state.layout != self.layout:
            raise LayoutError("state layout does not match circuit layout")
        amp = state.copy_amplitudes()
        for moment in self.moments[start_moment:stop_moment]:
            for g in moment:
                apply_inplace(amp, self.layout, g)
            n2 = kernels.masked_norm2(amp)
            if abs(n2 - 1.0) > NORM_TOL:
                raise NormError(f"norm^2 drifted to {n2!r}")
        return StateVector(self.layout, amp, check_norm=False)

    def unitary(self) -> np.ndarray:
        """Dense matrix of the whole circuit (small circuits only)."""
        dim = 1 << self.layout.total_qubits
        out = np.zeros((dim, dim), dtype=np.complex128)
        for col in range(dim):
            amp = np.zeros(dim, dtype=np.complex128)
            amp[col] = 1.0
            for g in self.gates:
                apply_inplace(amp, self.layout, g)
            out[:, col] = amp
        return out


def schedule_moments(
    gates: Iterable[Gate],
    convention: str = SHARED_CONTROL,
    layout: RegisterLayout | None = None,
    name: str = "",
) -> Circuit:
    """Greedy earliest-moment packing of an ordered gate list.

    Under ``strict`` gates in one moment touch disjoint qubits. Under
    ``shared-control`` they may additionally share control qubits, but no
    qubit that one gate targets may appear anywhere else in the moment.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    gates = list(gates)
    if layout is None:
        top = max((max(g.qubits) for g in gates), default=-1)
        layout = make_layout([("q", top + 1)]) if top >= 0 else make_layout([("q", 1)])
    last_any: dict[int, int] = {}
    last_target: dict[int, int] = {}
    moments: list[list[Gate]] = []
    for g in gates:
        if convention == STRICT:
            m = max((last_any.get(q, -1) for q in g.qubits), default=-1) + 1
        else:
            m = max(
                [last_any.get(q, -1) for q in g.targets]
                + [last_target.get(q, -1) for q in g.control_qubits]
            ) + 1
        if m == len(moments):
            moments.append([])
        moments[m].append(g)
        for q in g.targets:
            last_any[q] = max(last_any.get(q, -1), m)
            last_target[q] = m
        for q in g.control_qubits:
            last_any[q] = max(last_any.get(q, -1), m)
    return Circuit(layout, moments, (len(moments),), name, convention)


def concat_stages(layout: RegisterLayout, stages: Sequence[Sequence[Gate]], convention=SHARED_CONTROL, name="") -> Circuit:
    """Schedule each stage separately and record the stage boundaries."""
    moments: list = []
    ends = []
    for stage in stages:
        moments.extend(schedule_moments(stage, convention, layout).moments)
        ends.append(len(moments))
    return Circuit(layout, moments, ends, name, convention)


def decompose_mcx(
    controls: Sequence[tuple[int, int]],
    target: int,
    work_ancillas: Sequence[int] = (),
    layout: RegisterLayout | None = None,
    convention: str = SHARED_CONTROL,
) -> Circuit:
    """Lower a multi-controlled X to a clean-ancilla Toffoli ladder.

    ``c`` controls use ``c - 2`` work qubits (which must start in |0> and are
    returned to |0>) and ``2c - 3`` Toffolis for ``c >= 2``; one control gives
    a single CX. Zero-valued controls are X-conjugated.
    """
    return schedule_moments(mcx_gates(controls, target, work_ancillas), convention, layout, "mcx")


def mcx_gates(controls, target, work_ancillas=()) -> list[Gate]:
    controls = [(int(q), int(b)) for q, b in controls]
    work = [int(w) for w in work_ancillas]
    c = len(controls)
    if c == 0:
        raise GateError("MCX needs at least one control")
    need = max(c - 2, 0)
    if len(work) < need:
        raise GateError(f"{c} controls need {need} work ancillas, got {len(work)}")
    work = work[:need]
    used = [q for q, _ in controls] + [target] + work
    if len(set(used)) != len(used):
        raise GateError("controls, target and work ancillas must be distinct")

    flips = [x(q) for q, b in controls if b == 0]
    cq = [q for q, _ in controls]
    if c == 1:
        core = [cx(cq[0], target)]
    elif c == 2:
        core = [toffoli(cq[0], cq[1], target)]
    else:
        ladder = [toffoli(cq[0], cq[1], work[0])]
        for i in range(2, c - 1):
            ladder.append(toffoli(cq[i], work[i - 2], work[i - 1]))
        core = ladder + [toffoli(cq[c - 1], work[c - 3], target)] + ladder[::-1]
    return flips + core + flips


def and_ladder(controls, work) -> tuple[list[Gate], int]:
    """Compute the AND of ``controls`` into a work qubit.

    Returns the compute gates and the qubit holding the result; uses
    ``len(controls) - 1`` work qubits.
    """
    flips = [x(q) for q, b in controls if b == 0]
    cq = [q for q, _ in controls]
    gates = [toffoli(cq[0], cq[1], work[0])]
    for i in range(2, len(cq)):
        gates.append(toffoli(cq[i], work[i - 2], work[i - 1]))
    return flips + gates, work[len(cq) - 2]


def ideal_mcx_matrix(num_qubits: int, controls, target: int) -> np.ndarray:
    """Permutation matrix of the ideal MCX, built directly from its definition."""
    dim = 1 << num_qubits
    mat = np.zeros((dim, dim))
    for col in range(dim):
        bits = [(col >> (num_qubits - 1 - q)) & 1 for q in range(num_qubits)]
        row = col
        if all(bits[q] == b for q, b in controls):
            row = col ^ (1 << (num_qubits - 1 - target))
        mat[row, col] = 1.0
    return mat


# ---------------------------------------------------------------- text format

def _format_gate(g: Gate) -> str:
    parts = [g.kind]
    if g.controls:
        parts.append("c=" + ",".join(f"{q}:{b}" for q, b in g.controls))
    parts.append("t=" + ",".join(str(t) for t in g.targets))
    if g.kind == PROJ_CTRL:
        parts.append(f"payload={g.payload}")
    return " ".join(parts)


def _parse_gate(line: str, lineno: int) -> Gate:
    fields = line.split()
    kind = fields[0]
    controls: list = []
    targets: list = []
    payload = "X"
    try:
        for f in fields[1:]:
            key, _, val = f.partition("=")
            if key == "c":
                controls = [tuple(int(v) for v in item.split(":")) for item in val.split(",")]
            elif key == "t":
                targets = [int(v) for v in val.split(",")]
            elif key == "payload":
                payload = val
            else:
                raise ValueError(f"unknown field {key!r}")
        return Gate(kind, tuple(targets), tuple(controls), payload)
    except (ValueError, GateError) as exc:
        raise GateError(f"line {lineno}: {exc}") from None


def circuit_to_text(circuit: Circuit) -> str:
    """One gate per line; ``moment`` lines separate moments."""
    lines = [
        "layout " + " ".join(f"{n}:{w}" for n, w in circuit.layout.registers),
        f"convention {circuit.convention}",
    ]
    if circuit.name:
        lines.append(f"name {circuit.name}")
    if circuit.stage_ends:
        lines.append("stages " + ",".join(str(e) for e in circuit.stage_ends))
    for i, moment in enumerate(circuit.moments):
        lines.append(f"moment {i}")
        lines.extend(_format_gate(g) for g in moment)
    return "\n".join(lines) + "\n"


def circuit_from_text(text: str) -> Circuit:
    layout = None
    convention = SHARED_CONTROL
    name = ""
    stages: tuple = ()
    moments: list[list[Gate]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        if head == "layout":
            regs = []
            for item in rest.split():
                n, _, w = item.rpartition(":")
                regs.append((n, int(w)))
            layout = make_layout(regs)
        elif head == "convention":
            convention = rest.strip()
        elif head == "name":
            name = rest.strip()
        elif head == "stages":
            stages = tuple(int(v) for v in rest.split(","))
        elif head == "moment":
            moments.append([])
        else:
            if not moments:
                raise GateError(f"line {lineno}: gate before first 'moment' line")
            moments[-1].append(_parse_gate(line, lineno))
    if layout is None:
        raise GateError("missing 'layout' line")
    return Circuit(layout, moments, stages, name, convention)
