"""Exception hierarchy. Every error carries a stable reason code."""


class ModelkitError(Exception):
    code = "ERROR"

    def __init__(self, message="", code=None):
        super().__init__(message)
        if code is not None:
            self.code = code

    def __str__(self):
        msg = super().__str__()
        return f"{self.code}: {msg}" if msg else self.code


class LatticeError(ModelkitError):
    code = "NOT_A_LATTICE"


class ArrowError(ModelkitError):
    code = "INVALID_ARROW"


class ArrowMismatchError(ArrowError):
    code = "ARROW_MISMATCH"


class SizeGuardError(ModelkitError):
    code = "SIZE_GUARD"


class PreconditionError(ModelkitError):
    code = "PRECONDITION"


class IllegalWeakEquivalencesError(ModelkitError):
    code = "ILLEGAL_W"


class InvalidModelStructureError(ModelkitError):
    code = "INVALID_MODEL_STRUCTURE"


class ConsistencyError(ModelkitError):
    code = "INCONSISTENT_CLASSES"


class InternalDisagreementError(ModelkitError):
    """Two independent computations of the same object differ."""

    code = "INTERNAL_DISAGREEMENT"


class UnsaturatedError(ModelkitError):
    code = "UNSATURATED"


class NotGridError(ModelkitError):
    code = "NOT_GRID"


class InvalidDatumError(ModelkitError):
    code = "INVALID_DATUM"


class FormatError(ModelkitError):
    code = "BAD_INPUT"


class NoLocalizationError(PreconditionError):
    """No model structure with the required fixed classes is minimal."""

    code = "NO_LOCALIZATION"
