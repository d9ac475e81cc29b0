"""Exact dense state-vector simulation of oracle problems on labeled registers."""

__version__ = "0.1.0"

from .deutsch import (
    CANONICAL_LAYOUT,
    SETTING_LABELS,
    STAGES,
    CountedOracle,
    RhoInvarianceReport,
    StageTrace,
    Verdict,
    classical_query_count,
    deutsch_circuit,
    enumerate_promise_functions,
    rho_B_invariance,
    run_deutsch,
    run_deutsch_jozsa,
    run_deutsch_superposed,
    solution_correlation,
)
from .errors import (
    BlockDiagonalityError,
    BlockStructureError,
    DegenerateStateError,
    FunctionFormatError,
    ImpossibleOutcomeError,
    IncompleteOracleError,
    LayoutError,
    PromiseViolationError,
    SimulatorError,
    UnitarityError,
)
from .gates import (
    Classification,
    FunctionTable,
    classify_function,
    hadamard,
    oracle_fixed,
    oracle_with_setting,
    parse_function_table,
)
from .measure import (
    RNG_ALGORITHM,
    BranchReport,
    DeferredEquivalenceReport,
    MeasurementRecord,
    OutcomeDistribution,
    apply_circuit,
    deferred_equivalence,
    inverse_circuit,
    measure,
    outcome_distribution,
    sample,
)
from .state import (
    ATOL_MATRIX,
    ATOL_STATE,
    DensityMatrix,
    RegisterLayout,
    StateVector,
    apply_unitary,
    basis_state,
    expand_unitary,
    inner_product,
    partial_trace,
    superpose,
)

__all__ = [
    "__version__",
    "ATOL_MATRIX",
    "ATOL_STATE",
    "BlockDiagonalityError",
    "BlockStructureError",
    "BranchReport",
    "CANONICAL_LAYOUT",
    "Classification",
    "CountedOracle",
    "DeferredEquivalenceReport",
    "DegenerateStateError",
    "DensityMatrix",
    "FunctionFormatError",
    "FunctionTable",
    "ImpossibleOutcomeError",
    "IncompleteOracleError",
    "LayoutError",
    "MeasurementRecord",
    "OutcomeDistribution",
    "PromiseViolationError",
    "RegisterLayout",
    "RhoInvarianceReport",
    "RNG_ALGORITHM",
    "SETTING_LABELS",
    "STAGES",
    "SimulatorError",
    "StageTrace",
    "StateVector",
    "UnitarityError",
    "Verdict",
    "apply_circuit",
    "apply_unitary",
    "basis_state",
    "classical_query_count",
    "classify_function",
    "deferred_equivalence",
    "deutsch_circuit",
    "enumerate_promise_functions",
    "expand_unitary",
    "hadamard",
    "inner_product",
    "inverse_circuit",
    "measure",
    "oracle_fixed",
    "oracle_with_setting",
    "outcome_distribution",
    "parse_function_table",
    "partial_trace",
    "rho_B_invariance",
    "run_deutsch",
    "run_deutsch_jozsa",
    "run_deutsch_superposed",
    "sample",
    "solution_correlation",
    "superpose",
]
