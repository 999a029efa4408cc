"""State-vector simulation of ancilla-flagged inner product, matrix sum and matrix product."""

from .errors import DimensionError, GateError, LayoutError, NormError, QubitCapError
from .state import (
    RegisterLayout,
    StateVector,
    basis_assignment,
    basis_index,
    make_layout,
    project_and_extract,
    set_qubit_cap,
    tensor,
)
from .gates import Circuit, Gate, apply_gate, decompose_mcx, proj_controlled, schedule_moments
from .depth import DepthReport, analyze, scaling_report
from .oracle import compare, oracle_add, oracle_bilinear, oracle_matmul
from .sampling import ShotRecord, amplification_probability, required_trials, sample_measurement
from .protocols import (
    ProtocolResult,
    build_addition_circuit,
    build_inner_product_circuit,
    build_multiplication_circuit,
    embed_addition_as_multiplication,
    encode_matrix,
    encode_matrix_with_slack,
    encode_vector,
    inspect_stage,
    run_addition,
    run_addition_via_multiplication,
    run_inner_product,
    run_multiplication,
)

__version__ = "0.1.0"
