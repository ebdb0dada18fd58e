"""Exception hierarchy shared by every module of the package."""


class BeliefError(Exception):
    """Base class for all errors raised by beliefcond."""


class ScaleMismatchError(BeliefError):
    """Two labels from different scales were combined."""


class EmptyInputError(BeliefError):
    pass


class ExpressionSyntaxError(BeliefError):
    """Malformed proposition expression; ``offset`` is a 0-based character index."""

    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownAtomError(ExpressionSyntaxError):
    pass


class ModeError(BeliefError):
    """Complement used on a hyper-power set (complement-free) model."""


class ModelMismatchError(BeliefError):
    pass


class CapacityError(BeliefError):
    """Requested enumeration is too large to materialize."""


class DomainError(BeliefError):
    pass


class ImpossibleProblemError(BeliefError):
    """The conditioning event is empty under the model (closed world)."""


class TotalConflictError(BeliefError):
    """Dempster's rule with conflict K = 1."""


class ValidationError(BeliefError):
    pass
