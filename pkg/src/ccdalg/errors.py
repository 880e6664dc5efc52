"""Exceptions raised by ccdalg.

Every error derives from :class:`CcdAlgError` and from the builtin exception it
refines, so ``except ValueError`` keeps working for callers that do not know
about this module.
"""


class CcdAlgError(Exception):
    """Base class for all ccdalg errors."""


class FieldMismatchError(CcdAlgError, ValueError):
    """Operands live over different fields."""


class DimensionMismatchError(CcdAlgError, ValueError):
    """Ambient dimensions, vector lengths or matrix shapes disagree."""


class SingularMapError(CcdAlgError, ArithmeticError):
    """A matrix that must be invertible is singular."""


class UnevaluatedParametersError(CcdAlgError, ValueError):
    """A numeric operation was requested on a parametric algebra."""


class NoAnnihilatorError(CcdAlgError, ValueError):
    """The algebra has a trivial annihilator, so it is not a central extension."""


class NotAnAutomorphismError(CcdAlgError, ValueError):
    """A map passed where an automorphism is required is not one."""


class FieldError(CcdAlgError, ArithmeticError):
    """The requested operation is not supported over the given field."""


class CoeffSyntaxError(CcdAlgError, ValueError):
    """A coefficient expression could not be parsed.

    Attributes:
        text: The text being parsed.
        offset: Byte offset of the offending character.
    """

    def __init__(self, message: str, text: str, offset: int):
        super().__init__(f"{message} at offset {offset} in {text!r}")
        self.text = text
        self.offset = offset


class UnknownParameterError(CcdAlgError, ValueError):
    """An expression refers to a parameter that is not bound."""


class CatalogError(CcdAlgError, ValueError):
    """The catalog document is malformed.

    Attributes:
        entry: Name of the offending entry, when known.
    """

    def __init__(self, message: str, entry: str | None = None):
        super().__init__(f"{entry}: {message}" if entry else message)
        self.entry = entry


class GuardExceededError(CcdAlgError, RuntimeError):
    """An exhaustive enumeration would exceed its size guard."""
