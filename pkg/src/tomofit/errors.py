"""Exception hierarchy for tomofit."""


class TomofitError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(TomofitError, ValueError):
    """A value violates the invariants of the type or operation receiving it."""


class EmptyEnsembleError(InvalidInputError):
    """Total photon count N = n_h + n_v is zero."""


class EmptyBasisError(InvalidInputError):
    """A measurement basis pair has zero total counts."""

    def __init__(self, basis: str):
        super().__init__(f"no counts recorded in the {basis} basis")
        self.basis = basis


class ZeroIntensityError(InvalidInputError):
    """Total beam intensity is zero."""


class DegenerateParametersError(InvalidInputError):
    """All four T-matrix parameters are zero, so the trace normalization is undefined."""


class PureStateLimitError(InvalidInputError):
    """The t2-from-t1 inversion was asked for at or beyond the pure-state boundary."""


class UnphysicalInputError(InvalidInputError):
    """A density matrix with a negative eigenvalue reached an operation that needs a physical state."""


class RecordError(TomofitError, ValueError):
    """Problem with one input record.

    ``line`` is the 1-based physical line for CSV input; ``index`` is the
    0-based position for JSON input.
    """

    def __init__(self, message: str, line: int | None = None, index: int | None = None):
        self.message = message
        self.line = line
        self.index = index
        if line is not None:
            message = f"line {line}: {message}"
        elif index is not None:
            message = f"record {index}: {message}"
        super().__init__(message)


class ParseError(RecordError):
    """Malformed row or document."""


class ValidationError(RecordError):
    """Well-formed record whose values break a record invariant."""


class SchemaError(RecordError):
    """Field set does not match exactly one known record schema."""


class OptimizerAbort(TomofitError, RuntimeError):
    """The cost function returned NaN/Inf during the simplex search."""

    def __init__(self, point, value):
        self.point = tuple(point)
        self.value = value
        super().__init__(f"cost evaluated to {value!r} at t={self.point!r}")
