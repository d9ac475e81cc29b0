"""Exception types raised by the simulator."""


class SimulatorError(Exception):
    """Base class for all deutschsim errors."""


class LayoutError(SimulatorError):
    """Register layout problem: unknown register, bad label length, bad targets."""


class DegenerateStateError(SimulatorError):
    """Superposition with (numerically) zero total norm."""


class UnitarityError(SimulatorError):
    """Matrix handed to apply_unitary fails the unitarity check."""


class IncompleteOracleError(SimulatorError):
    """Function table does not cover every setting label of its width."""


class ImpossibleOutcomeError(SimulatorError):
    """Projective measurement conditioned on a zero-probability outcome."""


class BlockDiagonalityError(SimulatorError):
    """Circuit does not preserve the deferred register's basis, so the
    deferred-measurement equivalence claim would be unsound to assert."""


class BlockStructureError(SimulatorError):
    """Readout register is not deterministic within a setting block."""


class PromiseViolationError(SimulatorError):
    """Function is neither constant nor balanced."""


class FunctionFormatError(SimulatorError):
    """Malformed function-table text."""
