import itertools

import numpy as np
import pytest

from qmatops import gates as G
from qmatops.errors import GateError
from qmatops.gates import (
    SHARED_CONTROL,
    STRICT,
    apply_gate,
    circuit_from_text,
    circuit_to_text,
    decompose_mcx,
    ideal_mcx_matrix,
    proj_controlled,
    schedule_moments,
)
from qmatops.state import StateVector, make_layout, project_and_extract

from conftest import random_state_amps
from test_kernels import I2, P0, P1, XM


def qlayout(q):
    return make_layout([("q", q)])


def test_x_and_h_on_basis():
    lay = qlayout(1)
    one = apply_gate(StateVector.zeros(lay), G.x(0))
    np.testing.assert_allclose(one.amplitudes, [0, 1])
    minus = apply_gate(one, G.h(0))
    np.testing.assert_allclose(minus.amplitudes, np.array([1, -1]) / np.sqrt(2), atol=1e-15)


def w_dense(m):
    """P (x) X + (I - P) (x) I on (S1_j, S2_j, A_j) straight from the definition."""
    p = np.kron(P1, P1) if m == 1 else np.kron(P0, P0)
    return np.kron(p, XM) + np.kron(np.eye(4) - p, I2)


@pytest.mark.parametrize("m", [0, 1])
def test_w_gate_matches_definition(m, backend):
    lay = make_layout([("S1", 1), ("S2", 1), ("A", 1)])
    gate = proj_controlled([(0, m), (1, m)], 2)
    for col in range(8):
        psi = StateVector(lay, np.eye(8)[col])
        np.testing.assert_allclose(apply_gate(psi, gate).amplitudes, w_dense(m)[:, col])


def test_w1_examples():
    lay = make_layout([("S1", 1), ("S2", 1), ("A", 1)])
    gate = proj_controlled([(0, 1), (1, 1)], 2)
    out = apply_gate(StateVector.basis(lay, {"S1": 1, "S2": 1, "A": 0}), gate)
    assert out.amplitude({"S1": 1, "S2": 1, "A": 1}) == 1
    out = apply_gate(StateVector.basis(lay, {"S1": 1, "S2": 0, "A": 0}), gate)
    assert out.amplitude({"S1": 1, "S2": 0, "A": 0}) == 1


def test_proj_controlled_payload_forms():
    n = 3
    g = proj_controlled([(q, 1) for q in range(n)], n)
    assert g.kind == "PROJ_CTRL" and g.payload == "X" and g.targets == (n,)
    g = proj_controlled([(2, 0), (5, 0), (6, 1)], 7)
    assert g.controls == ((2, 0), (5, 0), (6, 1))
    g = proj_controlled([(2, 1)], [(0, 3), (1, 4)])
    assert g.payload == "SWAP" and g.pairs == [(0, 3), (1, 4)]


def test_proj_controlled_errors():
    with pytest.raises(GateError):
        proj_controlled([(0, 1)], 0)
    with pytest.raises(GateError):
        proj_controlled([(0, 1)], [(0, 2)])
    with pytest.raises(GateError):
        proj_controlled([], 1)


def test_apply_gate_index_out_of_range():
    with pytest.raises(GateError):
        apply_gate(StateVector.zeros(qlayout(2)), G.x(2))


def random_gate(rng, q):
    kind = rng.integers(7)
    qs = [int(v) for v in rng.permutation(q)]
    if kind == 0:
        return G.x(qs[0])
    if kind == 1:
        return G.h(qs[0])
    if kind == 2:
        return G.swap(qs[0], qs[1])
    if kind == 3:
        return G.toffoli(qs[0], qs[1], qs[2])
    if kind == 4:
        return G.cswap(qs[0], qs[1], qs[2])
    if kind == 5:
        return G.mcx([(qs[0], int(rng.integers(2))), (qs[1], 1), (qs[2], 0)], qs[3])
    return proj_controlled([(qs[0], int(rng.integers(2)))], [(qs[1], qs[2]), (qs[3], qs[4])])


def test_unitarity_random(rng, backend):
    lay = qlayout(5)
    for _ in range(100):
        psi = StateVector(lay, random_state_amps(rng, 5))
        g = random_gate(rng, 5)
        assert abs(apply_gate(psi, g).norm() - 1.0) < 1e-10


def test_self_inverse(rng):
    lay = qlayout(5)
    for _ in range(50):
        psi = StateVector(lay, random_state_amps(rng, 5))
        g = random_gate(rng, 5)
        if g.kind == "H":
            continue
        twice = apply_gate(apply_gate(psi, g), g)
        np.testing.assert_allclose(twice.amplitudes, psi.amplitudes, atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_w_operators_commute(n, rng):
    lay = make_layout([("S1", n), ("S2", n), ("A", n)])
    ws = [
        proj_controlled([(lay.qubit("S1", j), m), (lay.qubit("S2", j), m)], lay.qubit("A", j))
        for j in range(n)
        for m in (0, 1)
    ]
    psi = StateVector(lay, random_state_amps(rng, 3 * n))
    ref = psi
    for g in ws:
        ref = apply_gate(ref, g)
    for _ in range(10):
        out = psi
        for i in rng.permutation(len(ws)):
            out = apply_gate(out, ws[i])
        np.testing.assert_allclose(out.amplitudes, ref.amplitudes, atol=1e-12)


def test_decompose_small_cases():
    c1 = decompose_mcx([(0, 1)], 1)
    assert [g.kind for g in c1.gates] == ["CX"]
    c2 = decompose_mcx([(0, 1), (1, 1)], 2)
    assert [g.kind for g in c2.gates] == ["TOFFOLI"]


@pytest.mark.parametrize("c", range(1, 7))
def test_decompose_matches_ideal_exhaustively(c, rng):
    """All basis states of controls + target, work ancillas starting and ending in 0."""
    work = max(c - 2, 0)
    total = c + 1 + work
    controls = [(q, int(rng.integers(2))) for q in range(c)]
    circ = decompose_mcx(controls, c, list(range(c + 1, total)), make_layout([("q", total)]))
    ideal = ideal_mcx_matrix(total, controls, c)
    U = circ.unitary()
    for bits in range(1 << (c + 1)):
        col = bits << work  # work qubits are the low bits and start in 0
        np.testing.assert_array_equal(U[:, col], ideal[:, col])
        out = StateVector(circ.layout, U[:, col])
        lay = make_layout([("ct", c + 1)] + ([("w", work)] if work else []))
        if work:
            p, _ = project_and_extract(StateVector(lay, out.amplitudes), {"w": 0})
            assert p == 1.0


@pytest.mark.parametrize("c", range(2, 11))
def test_decompose_toffoli_count(c):
    circ = decompose_mcx([(q, 1) for q in range(c)], c, list(range(c + 1, 2 * c - 1)))
    assert sum(g.kind == "TOFFOLI" for g in circ.gates) == 2 * c - 3


def test_decompose_needs_ancillas():
    with pytest.raises(GateError):
        decompose_mcx([(0, 1), (1, 1), (2, 1)], 3, [])
    with pytest.raises(GateError):
        decompose_mcx([(0, 1), (1, 1), (2, 1)], 3, [2])


def test_negative_controls_conjugated():
    circ = decompose_mcx([(0, 0), (1, 1)], 2)
    assert [g.kind for g in circ.gates] == ["X", "TOFFOLI", "X"]


def test_schedule_disjoint_w_gates_single_moment():
    n = 4
    gates = [proj_controlled([(j, 1), (n + j, 1)], 2 * n + j) for j in range(n)]
    for conv in (STRICT, SHARED_CONTROL):
        assert schedule_moments(gates, conv).depth == 1


def test_schedule_shared_control_swaps():
    n = m = 3
    gates = [G.cswap(0, 1 + i, 1 + n + m + i) for i in range(n + m)]
    assert schedule_moments(gates, SHARED_CONTROL).depth == 1
    assert schedule_moments(gates, STRICT).depth == n + m


def test_schedule_same_target_serializes():
    assert schedule_moments([G.x(0), G.x(0)]).depth == 2


def test_schedule_control_after_target_serializes():
    # second gate reads qubit 1 that the first one writes
    gates = [G.cx(0, 1), G.cx(1, 2)]
    assert schedule_moments(gates, SHARED_CONTROL).depth == 2
    # a gate writing a qubit another gate reads in the same layer is not parallel
    gates = [G.cx(0, 1), G.cx(2, 0)]
    assert schedule_moments(gates, SHARED_CONTROL).depth == 2


def test_strict_never_shallower(rng):
    for _ in range(30):
        gl = [random_gate(rng, 6) for _ in range(15)]
        assert schedule_moments(gl, STRICT).depth >= schedule_moments(gl, SHARED_CONTROL).depth


def test_schedule_preserves_action(rng):
    lay = qlayout(5)
    for _ in range(10):
        gl = [random_gate(rng, 5) for _ in range(12)]
        psi = StateVector(lay, random_state_amps(rng, 5))
        seq = psi
        for g in gl:
            seq = apply_gate(seq, g)
        for conv in (STRICT, SHARED_CONTROL):
            out = schedule_moments(gl, conv, lay).run(psi)
            np.testing.assert_allclose(out.amplitudes, seq.amplitudes, atol=1e-12)


def test_text_roundtrip():
    from qmatops.protocols import build_addition_circuit, build_inner_product_circuit

    for circ in (build_inner_product_circuit(2), build_addition_circuit(1, 2)):
        text = circuit_to_text(circ)
        assert circuit_from_text(text) == circ


def test_text_parse_error_reports_line():
    text = "layout q:2\nmoment 0\nX t=0\nTOFFOLI c=0:1 t=1\n"
    with pytest.raises(GateError, match="line 4"):
        circuit_from_text(text)
