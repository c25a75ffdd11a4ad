"""Exception types shared across the package."""


class VibitError(Exception):
    """Base class for all domain errors raised by this package."""


class DimError(VibitError):
    """Operands have incompatible dimensions."""


class InvalidState(VibitError):
    """A vector is not a usable quantum state (zero, non-finite, or unnormalized)."""


class NotUnitary(VibitError):
    """A matrix fails the unitarity invariant."""


class NotAProjector(VibitError):
    """A matrix fails the Hermitian/idempotent projector invariants."""


class NotAContext(VibitError):
    """A vector family does not form an orthonormal context."""


class NumericalError(VibitError):
    """A numerical routine failed to converge or produced non-finite output."""


class InvalidDistribution(VibitError):
    """A probability vector violates the distribution constraints."""


class AlphabetError(VibitError):
    """A symbol stream does not match the expected alphabet."""


class InvalidQuery(VibitError):
    """A structurally invalid analysis query (for example, gadget with a = b)."""


class FormatError(VibitError):
    """A text artifact (hypergraph, netlist, matrix, stream) failed to parse.

    ``line`` is the 1-based line number of the offending input line when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
