"""Dense state vectors over named qubit registers.

Index convention: registers are laid out most-significant first, and inside a
register the first qubit is the most significant bit of its value. Qubit ``q``
of a ``Q``-qubit layout therefore owns bit ``Q - 1 - q`` of the flat amplitude
index, and a basis ket prints left to right in layout order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from . import kernels
from .errors import LayoutError, NormError, QubitCapError

NORM_TOL = 1e-10
DEFAULT_QUBIT_CAP = 26

_qubit_cap = DEFAULT_QUBIT_CAP


def set_qubit_cap(cap: int) -> int:
    """Set the largest allowed state size in qubits; returns the old cap."""
    global _qubit_cap
    if cap < 1:
        raise ValueError("qubit cap must be positive")
    old, _qubit_cap = _qubit_cap, int(cap)
    return old


def qubit_cap() -> int:
    return _qubit_cap


def _check_cap(total: int) -> None:
    if total > _qubit_cap:
        raise QubitCapError(f"{total} qubits exceeds the cap of {_qubit_cap}")


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered named registers covering qubits ``0 .. total_qubits - 1``."""

    registers: tuple[tuple[str, int], ...]
    _offsets: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        seen = set()
        offsets = {}
        pos = 0
        for entry in self.registers:
            name, width = entry
            if not isinstance(name, str) or not name:
                raise LayoutError(f"register name must be a non-empty string, got {name!r}")
            if name in seen:
                raise LayoutError(f"duplicate register name {name!r}")
            if int(width) != width or width < 1:
                raise LayoutError(f"register {name!r} has invalid width {width!r}")
            seen.add(name)
            offsets[name] = (pos, int(width))
            pos += int(width)
        object.__setattr__(self, "registers", tuple((n, int(w)) for n, w in self.registers))
        object.__setattr__(self, "_offsets", offsets)

    @property
    def total_qubits(self) -> int:
        return sum(w for _, w in self.registers)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.registers)

    def __contains__(self, name) -> bool:
        return name in self._offsets

    def width(self, name: str) -> int:
        return self._lookup(name)[1]

    def qubits(self, name: str) -> list[int]:
        """Global qubit indices of a register, most significant first."""
        start, width = self._lookup(name)
        return list(range(start, start + width))

    def qubit(self, name: str, j: int = 0) -> int:
        start, width = self._lookup(name)
        if not 0 <= j < width:
            raise LayoutError(f"register {name!r} has no qubit {j}")
        return start + j

    def bit(self, q: int) -> int:
        """Single-bit mask of qubit ``q`` in the flat index."""
        total = self.total_qubits
        if not 0 <= q < total:
            raise LayoutError(f"qubit {q} outside 0..{total - 1}")
        return 1 << (total - 1 - q)

    def register_mask(self, name: str) -> tuple[int, int]:
        """(mask, shift) selecting a register's value inside a flat index."""
        start, width = self._lookup(name)
        shift = self.total_qubits - start - width
        return ((1 << width) - 1) << shift, shift

    def _lookup(self, name):
        try:
            return self._offsets[name]
        except KeyError:
            raise LayoutError(f"unknown register {name!r}") from None

    def concat(self, other: "RegisterLayout") -> "RegisterLayout":
        clash = set(self.names) & set(other.names)
        if clash:
            raise LayoutError(f"register name collision: {sorted(clash)}")
        return RegisterLayout(self.registers + other.registers)


def make_layout(registers: Iterable[tuple[str, int]]) -> RegisterLayout:
    return RegisterLayout(tuple(registers))


def basis_index(layout: RegisterLayout, assignment: Mapping[str, int]) -> int:
    """Flat amplitude index of the basis state given by a full register assignment."""
    extra = set(assignment) - set(layout.names)
    if extra:
        raise LayoutError(f"unknown registers in assignment: {sorted(extra)}")
    index = 0
    for name, width in layout.registers:
        if name not in assignment:
            raise LayoutError(f"register {name!r} not assigned")
        value = int(assignment[name])
        if not 0 <= value < (1 << width):
            raise LayoutError(f"value {value} out of range for {width}-qubit register {name!r}")
        index = (index << width) | value
    return index


def basis_assignment(layout: RegisterLayout, index: int) -> dict[str, int]:
    """Inverse of :func:`basis_index`."""
    total = layout.total_qubits
    if not 0 <= index < (1 << total):
        raise LayoutError(f"index {index} outside a {total}-qubit space")
    out = {}
    for name, width in reversed(layout.registers):
        out[name] = index & ((1 << width) - 1)
        index >>= width
    return {name: out[name] for name in layout.names}


class StateVector:
    """Unit-norm amplitude array over a register layout.

    The amplitude array is read-only; operations return new states.
    """

    __slots__ = ("layout", "amplitudes")

    def __init__(self, layout: RegisterLayout, amplitudes, *, check_norm: bool = True):
        _check_cap(layout.total_qubits)
        amps = np.array(amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != 1 << layout.total_qubits:
            raise LayoutError(
                f"expected {1 << layout.total_qubits} amplitudes for {layout.total_qubits} qubits, "
                f"got {amps.shape[0]}"
            )
        if not np.all(np.isfinite(amps)):
            raise NormError("non-finite amplitude")
        if check_norm:
            n2 = kernels.masked_norm2(amps)
            if abs(n2 - 1.0) > NORM_TOL:
                raise NormError(f"state norm^2 is {n2!r}, expected 1")
        amps.flags.writeable = False
        self.layout = layout
        self.amplitudes = amps

    @classmethod
    def zeros(cls, layout: RegisterLayout) -> "StateVector":
        """All registers in |0>."""
        _check_cap(layout.total_qubits)
        amps = np.zeros(1 << layout.total_qubits, dtype=np.complex128)
        amps[0] = 1.0
        return cls(layout, amps)

    @classmethod
    def basis(cls, layout: RegisterLayout, assignment: Mapping[str, int]) -> "StateVector":
        _check_cap(layout.total_qubits)
        amps = np.zeros(1 << layout.total_qubits, dtype=np.complex128)
        amps[basis_index(layout, assignment)] = 1.0
        return cls(layout, amps)

    @property
    def num_qubits(self) -> int:
        return self.layout.total_qubits

    def norm(self) -> float:
        return float(np.sqrt(kernels.masked_norm2(self.amplitudes)))

    def amplitude(self, assignment: Mapping[str, int]) -> complex:
        return complex(self.amplitudes[basis_index(self.layout, assignment)])

    def register_view(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per register (axis size 2**width)."""
        return self.amplitudes.reshape(tuple(1 << w for _, w in self.layout.registers))

    def copy_amplitudes(self) -> np.ndarray:
        return np.array(self.amplitudes, copy=True)

    def __repr__(self):
        regs = ", ".join(f"{n}:{w}" for n, w in self.layout.registers)
        return f"StateVector([{regs}])"


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Tensor product; ``a``'s registers become the more significant ones."""
    layout = a.layout.concat(b.layout)
    _check_cap(layout.total_qubits)
    return StateVector(layout, np.kron(a.amplitudes, b.amplitudes))


def project_and_extract(
    state: StateVector, pattern: Mapping[str, int]
) -> tuple[float, StateVector | None]:
    """Probability of a partial register assignment and the renormalized remainder.

    Returns ``(p, None)`` when ``p`` is zero. If the pattern fixes every
    register, the conditional state is ``None`` as well (nothing remains).
    """
    layout = state.layout
    for name, value in pattern.items():
        width = layout.width(name)
        if not 0 <= int(value) < (1 << width):
            raise LayoutError(f"value {value} out of range for register {name!r}")
    view = state.register_view()
    index = tuple(int(pattern[name]) if name in pattern else slice(None) for name in layout.names)
    sub = view[index]
    probability = float(np.vdot(sub, sub).real) if np.ndim(sub) else float(abs(sub) ** 2)
    rest = [(n, w) for n, w in layout.registers if n not in pattern]
    if probability == 0.0 or not rest:
        return probability, None
    conditional = np.asarray(sub).reshape(-1) / np.sqrt(probability)
    return probability, StateVector(make_layout(rest), conditional)


def register_probabilities(state: StateVector, name: str) -> np.ndarray:
    """Marginal outcome distribution of one register."""
    if name not in state.layout:
        raise LayoutError(f"unknown register {name!r}")
    axis = state.layout.names.index(name)
    p = np.abs(state.register_view()) ** 2
    other = tuple(i for i in range(p.ndim) if i != axis)
    return p.sum(axis=other) if other else p
