"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class LocalityError(Exception):
    """Base class for all errors raised by rlocality."""


# -- algebra ---------------------------------------------------------------

class AlgebraError(LocalityError):
    """An operation table set does not describe a usable algebra."""


class AlgebraViolation(AlgebraError):
    """A structural law fails; ``witness`` holds the offending elements."""

    law = "law"

    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = tuple(witness)


class LatticeViolation(AlgebraViolation):
    law = "lattice"


class MonoidViolation(AlgebraViolation):
    law = "monoid"


class ResiduationViolation(AlgebraViolation):
    law = "residuation"


class TrivialCarrier(AlgebraError):
    pass


class SizeTooSmall(AlgebraError):
    pass


# -- syntax ----------------------------------------------------------------

class FormulaSyntaxError(LocalityError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class UnknownSymbol(LocalityError):
    pass


class ArityMismatch(LocalityError):
    pass


class FreeVarMismatch(LocalityError):
    pass


# -- semantics -------------------------------------------------------------

class ModelError(LocalityError):
    """A model document or constructor argument is inconsistent."""


class UnboundVariable(LocalityError):
    pass


class SignatureMismatch(LocalityError):
    pass


class AlgebraMismatch(LocalityError):
    pass


class BudgetExceeded(LocalityError):
    pass


class AnchorOutOfRange(LocalityError):
    pass


# -- metric / locality -----------------------------------------------------

class InvalidThreshold(LocalityError):
    pass


class RadiusMismatch(LocalityError):
    pass


class UnboundedAlgebra(LocalityError):
    pass


class MetricContractError(LocalityError):
    """A non-default metric was requested without the explicit override."""


class NoCoAtom(LocalityError):
    pass


class NotAChain(LocalityError):
    pass


class GeneratorExhausted(LocalityError):
    pass
