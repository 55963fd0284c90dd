"""Exception hierarchy shared by all ddnoise modules."""


class DDError(Exception):
    """Base class for every error raised by ddnoise."""


class NumericDomainError(DDError, ValueError):
    """A scalar input is not finite, or a probability lies outside [0, 1]."""


class StructuralError(DDError, ValueError):
    """A decision diagram violates level ordering or arity rules."""


class DimensionMismatch(DDError, ValueError):
    """Operands span different numbers of qubits."""


class NormalizationError(DDError, ValueError):
    """A state vector does not have unit norm."""


class InvariantViolation(DDError, RuntimeError):
    """A physical invariant (trace, positivity, ...) was broken."""


class ChannelValidationError(DDError, ValueError):
    """A Kraus tuple does not satisfy the completeness relation."""


class SimulationTimeout(DDError, TimeoutError):
    """A simulation exceeded its wall-clock deadline."""


class QasmParseError(DDError, ValueError):
    """Malformed or unsupported QASM input.

    The offending line number (1-based) is kept in ``lineno``.
    """

    def __init__(self, lineno, msg):
        self.lineno = lineno
        self.msg = msg
        super().__init__(f"line {lineno}: {msg}")
