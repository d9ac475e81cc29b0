"""Projective measurement of register observables, sampling, and the
deferred-measurement equivalence harness.

Deterministic conditioning (``measure`` on a chosen outcome) and stochastic
sampling (``sample``) are separate entry points: exact per-branch
verification needs the former, simulated experiment statistics the latter.

Sampling uses numpy's default generator (PCG64, see ``RNG_ALGORITHM``);
counts are reproducible for a fixed seed within this implementation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BlockDiagonalityError, ImpossibleOutcomeError, LayoutError
from .state import (
    ATOL_STATE,
    PROB_EPS,
    RegisterLayout,
    StateVector,
    apply_unitary,
    expand_unitary,
)

RNG_ALGORITHM = "pcg64"

# One circuit operation: (matrix, target qubit positions).
CircuitOp = tuple[np.ndarray, tuple[int, ...]]


@dataclass(frozen=True)
class OutcomeDistribution:
    """Born-rule probabilities of a register's outcomes; zeros omitted."""

    register: str
    probs: dict[str, float]


@dataclass(frozen=True)
class MeasurementRecord:
    register: str
    outcome: str
    probability: float
    post_state: StateVector


def _register_values(layout: RegisterLayout, register: str) -> np.ndarray:
    """Integer value of ``register``'s bits for every basis index."""
    n = layout.total_qubits
    idx = np.arange(layout.dim)
    val = np.zeros(layout.dim, dtype=np.int64)
    for p in layout.qubit_positions(register):
        val = (val << 1) | ((idx >> (n - 1 - p)) & 1)
    return val


def _marginal(state: StateVector, register: str) -> np.ndarray:
    """Probability of each register outcome, indexed by outcome value."""
    width = state.layout.width(register)
    values = _register_values(state.layout, register)
    probs = np.abs(state.amps) ** 2
    return np.bincount(values, weights=probs, minlength=1 << width)


def outcome_distribution(state: StateVector, register: str) -> OutcomeDistribution:
    """Probability of each outcome of ``register``: sum of |amplitude|^2
    over the basis labels carrying that outcome."""
    marg = _marginal(state, register)
    assert abs(marg.sum() - 1.0) <= ATOL_STATE, "state is not normalized"
    width = state.layout.width(register)
    probs = {
        format(i, f"0{width}b"): float(p)
        for i, p in enumerate(marg)
        if p > PROB_EPS
    }
    return OutcomeDistribution(register=register, probs=probs)


def measure(state: StateVector, register: str, outcome: str) -> MeasurementRecord:
    """Project onto ``outcome`` of ``register`` and renormalize.

    If the state already lies in the outcome's eigenspace the post state is
    the input state itself (the measurement does not disturb it).
    """
    layout = state.layout
    width = layout.width(register)
    if len(outcome) != width or set(outcome) - {"0", "1"}:
        raise LayoutError(f"outcome {outcome!r} is not a {width}-bit string")
    mask = _register_values(layout, register) == int(outcome, 2)
    probability = float(np.sum(np.abs(state.amps[mask]) ** 2))
    if probability < PROB_EPS:
        raise ImpossibleOutcomeError(
            f"outcome {outcome!r} of register {register!r} has probability 0"
        )
    post = np.where(mask, state.amps, 0.0) / np.sqrt(probability)
    return MeasurementRecord(register, outcome, probability, StateVector(layout, post))


def sample(
    state: StateVector, register: str, shots: int, seed: int
) -> dict[str, int]:
    """Seeded Born-rule sampling; returns outcome -> count for observed outcomes."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    marg = _marginal(state, register)
    rng = np.random.default_rng(seed)
    drawn = rng.choice(marg.size, size=shots, p=marg / marg.sum())
    width = state.layout.width(register)
    values, counts = np.unique(drawn, return_counts=True)
    return {format(v, f"0{width}b"): int(c) for v, c in zip(values, counts)}


def apply_circuit(state: StateVector, circuit: Sequence[CircuitOp]) -> StateVector:
    for u, targets in circuit:
        state = apply_unitary(state, u, targets)
    return state


def inverse_circuit(circuit: Sequence[CircuitOp]) -> list[CircuitOp]:
    """The circuit undoing ``circuit``: conjugate transposes in reverse order."""
    return [(np.conj(u).T, tuple(targets)) for u, targets in reversed(circuit)]


@dataclass(frozen=True)
class BranchReport:
    """Both orderings of one measurement branch.

    ``project_first`` measures the deferred register before the circuit
    (the problem setter's account); ``project_last`` runs the circuit on the
    unprojected state and conditions afterwards (the solver's account).
    Joint distributions are over the full basis, so agreement covers every
    register marginal as well.
    """

    outcome: str
    probability_project_first: float
    probability_project_last: float
    state_project_first: StateVector
    state_project_last: StateVector
    joint_project_first: dict[str, float]
    joint_project_last: dict[str, float]
    max_deviation: float


@dataclass(frozen=True)
class DeferredEquivalenceReport:
    register: str
    branches: tuple[BranchReport, ...]
    max_deviation: float

    @property
    def equivalent(self) -> bool:
        return self.max_deviation <= ATOL_STATE

    def to_dict(self) -> dict:
        return {
            "register": self.register,
            "equivalent": self.equivalent,
            "max_deviation": self.max_deviation,
            "branches": [
                {
                    "outcome": b.outcome,
                    "probability_project_first": b.probability_project_first,
                    "probability_project_last": b.probability_project_last,
                    "joint_project_first": b.joint_project_first,
                    "joint_project_last": b.joint_project_last,
                    "max_deviation": b.max_deviation,
                }
                for b in self.branches
            ],
        }


def _check_block_diagonal(
    circuit: Sequence[CircuitOp], layout: RegisterLayout, register: str
) -> None:
    values = _register_values(layout, register)
    off_block = values[:, None] != values[None, :]
    for k, (u, targets) in enumerate(circuit):
        full = expand_unitary(u, targets, layout.total_qubits)
        leak = float(np.max(np.abs(full[off_block]))) if off_block.any() else 0.0
        if leak > ATOL_STATE:
            raise BlockDiagonalityError(
                f"circuit op {k} does not preserve register {register!r} "
                f"basis vectors (off-block magnitude {leak:.3e})"
            )


def _joint_probs(state: StateVector) -> dict[str, float]:
    p = np.abs(state.amps) ** 2
    return {
        state.layout.label_of_index(i): float(v)
        for i, v in enumerate(p)
        if v > PROB_EPS
    }


def deferred_equivalence(
    circuit: Sequence[CircuitOp], initial: StateVector, register: str
) -> DeferredEquivalenceReport:
    """Compare measuring ``register`` before the circuit against after it.

    Postponing the projection past the circuit is legitimate exactly when
    every circuit unitary preserves the register's basis vectors; that
    precondition is checked explicitly, not assumed, and its violation
    raises BlockDiagonalityError.  For each register outcome of nonzero
    probability the report carries the final joint distribution computed
    both ways and the verdict that they agree within 1e-12.
    """
    layout = initial.layout
    _check_block_diagonal(circuit, layout, register)
    evolved = apply_circuit(initial, circuit)
    pre_marginal = _marginal(initial, register)
    width = layout.width(register)

    branches = []
    for value, p_pre in enumerate(pre_marginal):
        if p_pre <= PROB_EPS:
            continue
        outcome = format(value, f"0{width}b")
        first = measure(initial, register, outcome)
        state_first = apply_circuit(first.post_state, circuit)
        last = measure(evolved, register, outcome)
        deviation = max(
            float(np.max(np.abs(np.abs(state_first.amps) ** 2
                                - np.abs(last.post_state.amps) ** 2))),
            abs(first.probability - last.probability),
        )
        branches.append(
            BranchReport(
                outcome=outcome,
                probability_project_first=first.probability,
                probability_project_last=last.probability,
                state_project_first=state_first,
                state_project_last=last.post_state,
                joint_project_first=_joint_probs(state_first),
                joint_project_last=_joint_probs(last.post_state),
                max_deviation=deviation,
            )
        )
    return DeferredEquivalenceReport(
        register=register,
        branches=tuple(branches),
        max_deviation=max(b.max_deviation for b in branches),
    )
