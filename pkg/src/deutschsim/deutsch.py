"""Drivers for the three-register oracle game.

Register B (2 qubits) holds the problem setting, register A (1 qubit) the
function argument, register V (1 qubit) the evaluation target.  A run is
the pipeline ``H on A, function evaluation, H on A`` applied to the input
``|b>_B |a>_A (|0>_V - |1>_V)/sqrt(2)``; the final A outcome encodes
whether the setting's function is constant or balanced after a single
oracle application.

The V-register minus state is produced by preparing ``|1>_V`` and applying
a Hadamard, so every stage is reachable by unitaries from a basis state.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BlockStructureError, LayoutError, PromiseViolationError
from .gates import (
    Classification,
    FunctionTable,
    classify_function,
    hadamard,
    oracle_fixed,
    oracle_with_setting,
)
from .measure import CircuitOp, measure, outcome_distribution
from .state import (
    ATOL_STATE,
    DensityMatrix,
    RegisterLayout,
    StateVector,
    apply_unitary,
    basis_state,
    partial_trace,
    superpose,
)

CANONICAL_LAYOUT = RegisterLayout((("B", 2), ("A", 1), ("V", 1)))
SETTING_LABELS = ("00", "01", "10", "11")
STAGES = ("input", "after_H_A", "after_H_f", "after_H_A_2")

# Dense representation cap for the generalized argument register.
MAX_ARG_BITS = 8


@dataclass(frozen=True)
class StageTrace:
    """The four pipeline stages in order: input, after each unitary."""

    stages: tuple[tuple[str, StateVector], ...]

    def __post_init__(self) -> None:
        labels = tuple(label for label, _ in self.stages)
        if labels != STAGES:
            raise ValueError(f"stage labels must be {STAGES}, got {labels}")

    def state(self, label: str) -> StateVector:
        for name, state in self.stages:
            if name == label:
                return state
        raise KeyError(label)

    @property
    def final(self) -> StateVector:
        return self.stages[-1][1]


@dataclass(frozen=True)
class Verdict:
    """Outcome of one run: measured bit, its reading, oracle uses."""

    outcome_bit: int
    classification: Classification
    evaluations_used: int


class CountedOracle:
    """Oracle matrix wrapper that counts how many times it is applied."""

    def __init__(self, matrix: np.ndarray):
        self.matrix = np.asarray(matrix, dtype=np.complex128)
        self.calls = 0

    def apply(self, state: StateVector, targets: Sequence[int]) -> StateVector:
        self.calls += 1
        return apply_unitary(state, self.matrix, targets)


def deutsch_circuit(table: FunctionTable | None = None) -> list[CircuitOp]:
    """The unitary part of a run as (matrix, targets) ops on the canonical layout."""
    table = table if table is not None else FunctionTable.canonical()
    h = hadamard()
    a_pos = CANONICAL_LAYOUT.qubit_positions("A")
    all_pos = tuple(range(CANONICAL_LAYOUT.total_qubits))
    return [(h, a_pos), (oracle_with_setting(table), all_pos), (h, a_pos)]


def _prepare_input(b_label: str, initial_a: int) -> StateVector:
    raw = basis_state(CANONICAL_LAYOUT, b_label + str(initial_a) + "1")
    return apply_unitary(raw, hadamard(), CANONICAL_LAYOUT.qubit_positions("V"))


def _run_pipeline(s0: StateVector, oracle: CountedOracle) -> StageTrace:
    h = hadamard()
    a_pos = CANONICAL_LAYOUT.qubit_positions("A")
    s1 = apply_unitary(s0, h, a_pos)
    s2 = oracle.apply(s1, tuple(range(CANONICAL_LAYOUT.total_qubits)))
    s3 = apply_unitary(s2, h, a_pos)
    return StageTrace(tuple(zip(STAGES, (s0, s1, s2, s3))))


def _check_initial_a(initial_a: int) -> int:
    if initial_a not in (0, 1):
        raise ValueError(f"initial A state must be 0 or 1, got {initial_a}")
    return initial_a


def _point_mass(state: StateVector, register: str) -> tuple[str, float]:
    """The dominant outcome of ``register``; error if it is not (nearly) certain."""
    probs = outcome_distribution(state, register).probs
    outcome, p = max(probs.items(), key=lambda kv: kv[1])
    if 1.0 - p > ATOL_STATE:
        raise BlockStructureError(
            f"register {register!r} outcome is not deterministic (max p = {p})"
        )
    return outcome, p


def run_deutsch(b: str, initial_a: int = 0) -> tuple[StageTrace, Verdict]:
    """One run for a fixed problem setting ``b``.

    With the default ``|0>_A`` preparation the measured A bit reads 1 for a
    balanced setting and 0 for a constant one; preparing ``|1>_A`` flips
    that rule, which the verdict accounts for.
    """
    if b not in SETTING_LABELS:
        raise ValueError(f"unknown setting {b!r}; choose one of {SETTING_LABELS}")
    _check_initial_a(initial_a)
    oracle = CountedOracle(oracle_with_setting(FunctionTable.canonical()))
    trace = _run_pipeline(_prepare_input(b, initial_a), oracle)
    outcome, _ = _point_mass(trace.final, "A")
    outcome_bit = int(outcome, 2)
    balanced_bit = 1 - initial_a
    classification = (
        Classification.BALANCED
        if outcome_bit == balanced_bit
        else Classification.CONSTANT
    )
    assert oracle.calls == 1
    return trace, Verdict(outcome_bit, classification, oracle.calls)


def run_deutsch_superposed(initial_a: int = 0) -> StageTrace:
    """The same pipeline on an equal superposition of all four settings."""
    _check_initial_a(initial_a)
    terms = [(1.0, b + str(initial_a) + "1") for b in SETTING_LABELS]
    raw = superpose(terms, CANONICAL_LAYOUT)
    s0 = apply_unitary(raw, hadamard(), CANONICAL_LAYOUT.qubit_positions("V"))
    oracle = CountedOracle(oracle_with_setting(FunctionTable.canonical()))
    trace = _run_pipeline(s0, oracle)
    assert oracle.calls == 1
    return trace


def solution_correlation(
    final: StateVector, balanced_bit: int = 1
) -> dict[str, Classification]:
    """Read the setting-to-solution pairing out of a final state.

    Conditions on each setting outcome of register B in turn and reads the
    then-deterministic A bit.  ``balanced_bit`` is the A value that means
    balanced (0 when the run was prepared with ``|1>_A``).
    """
    result = {}
    for b in sorted(outcome_distribution(final, "B").probs):
        branch = measure(final, "B", b).post_state
        outcome, _ = _point_mass(branch, "A")
        result[b] = (
            Classification.BALANCED
            if int(outcome, 2) == balanced_bit
            else Classification.CONSTANT
        )
    return result


def run_deutsch_jozsa(values: Sequence[int]) -> Verdict:
    """Constant-vs-balanced decision for an n-bit function in one evaluation.

    Hadamards on the argument register, one oracle application, Hadamards
    again; the all-zero argument outcome has probability exactly 1 for a
    constant function and exactly 0 for a balanced one.  Raises
    PromiseViolationError before touching the oracle if ``values`` is
    neither.
    """
    promised = classify_function(values)
    if promised is Classification.NEITHER:
        raise PromiseViolationError(
            f"function {list(values)} is neither constant nor balanced"
        )
    n = len(values).bit_length() - 1
    if n > MAX_ARG_BITS:
        raise LayoutError(f"argument register capped at {MAX_ARG_BITS} qubits")
    layout = RegisterLayout((("A", n), ("V", 1)))
    h = hadamard()
    oracle = CountedOracle(oracle_fixed(values))

    s = basis_state(layout, "0" * n + "1")
    s = apply_unitary(s, h, layout.qubit_positions("V"))
    for q in layout.qubit_positions("A"):
        s = apply_unitary(s, h, (q,))
    s = oracle.apply(s, tuple(range(n + 1)))
    for q in layout.qubit_positions("A"):
        s = apply_unitary(s, h, (q,))

    p_zero = outcome_distribution(s, "A").probs.get("0" * n, 0.0)
    if p_zero > 1.0 - ATOL_STATE:
        classification = Classification.CONSTANT
    elif p_zero < ATOL_STATE:
        classification = Classification.BALANCED
    else:
        raise BlockStructureError(
            f"all-zero argument probability {p_zero} is neither 0 nor 1"
        )
    assert oracle.calls == 1
    outcome_bit = 0 if classification is Classification.CONSTANT else 1
    return Verdict(outcome_bit, classification, oracle.calls)


def enumerate_promise_functions(n: int) -> list[tuple[int, ...]]:
    """Every constant and balanced value list on n argument bits, constants first."""
    if not 1 <= n <= 3:
        raise ValueError(f"exhaustive enumeration supported for 1 <= n <= 3, got {n}")
    m = 1 << n
    functions = [tuple([0] * m), tuple([1] * m)]
    for ones in itertools.combinations(range(m), m // 2):
        f = [0] * m
        for i in ones:
            f[i] = 1
        functions.append(tuple(f))
    return functions


def classical_query_count(n: int) -> int:
    """Worst-case deterministic function evaluations to decide constant vs
    balanced on n argument bits: half the domain plus one."""
    if n < 1:
        raise ValueError(f"argument bits must be >= 1, got {n}")
    return 2 ** (n - 1) + 1


@dataclass(frozen=True)
class RhoInvarianceReport:
    """How the reduced state of the setting register moves across stages.

    ``max_full_deviation`` compares each later stage's reduced matrix
    against the input stage's, entrywise; the diagonal and off-diagonal
    parts are also tracked separately.  Full invariance is asserted only
    for basis-state inputs; for superposed inputs only the diagonal is
    expected to hold and off-diagonal deltas are reported, not judged.
    """

    register: str
    basis_state_input: bool
    stage_rhos: tuple[tuple[str, DensityMatrix], ...]
    max_full_deviation: float
    max_diagonal_deviation: float
    off_diagonal_deviation: dict[str, float]

    @property
    def full_invariance_holds(self) -> bool:
        return self.max_full_deviation <= ATOL_STATE

    @property
    def diagonal_invariance_holds(self) -> bool:
        return self.max_diagonal_deviation <= ATOL_STATE


def rho_B_invariance(trace: StageTrace, register: str = "B") -> RhoInvarianceReport:
    """Track the reduced density matrix of ``register`` across a stage trace."""
    rhos = tuple((label, partial_trace(state, register)) for label, state in trace.stages)
    base = rhos[0][1].matrix
    diag_mask = np.eye(base.shape[0], dtype=bool)

    basis_input = bool(np.max(rhos[0][1].diagonal()) >= 1.0 - ATOL_STATE)
    max_full = 0.0
    max_diag = 0.0
    off_diag = {}
    for label, rho in rhos:
        delta = np.abs(rho.matrix - base)
        max_full = max(max_full, float(delta.max()))
        max_diag = max(max_diag, float(delta[diag_mask].max()))
        off_diag[label] = float(delta[~diag_mask].max())
    return RhoInvarianceReport(
        register=register,
        basis_state_input=basis_input,
        stage_rhos=rhos,
        max_full_deviation=max_full,
        max_diagonal_deviation=max_diag,
        off_diagonal_deviation=off_diag,
    )
