"""Exception types shared across the package."""


class TorsionLabError(Exception):
    pass


class DimensionError(TorsionLabError, ValueError):
    pass


class FormError(TorsionLabError, ValueError):
    """A matrix that should be skew (or of even size) is not."""


class BasisError(TorsionLabError, ValueError):
    """A family of vectors that should be a basis is singular."""


class InconsistentSystemError(TorsionLabError, ValueError):
    pass


class ChainComplexError(TorsionLabError, ValueError):
    """Boundary maps do not compose to zero, or shapes disagree.

    ``degree`` records the offending degree when known.
    """

    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree


class ContractError(TorsionLabError, ValueError):
    pass


class ExactnessError(TorsionLabError, ValueError):
    pass


class CompatibilityError(TorsionLabError, ValueError):
    pass


class NondegeneracyError(TorsionLabError, ValueError):
    pass


class FieldError(TorsionLabError, ValueError):
    pass


class DomainError(TorsionLabError, ValueError):
    pass


class GroupMembershipError(TorsionLabError, ValueError):
    pass


class InvalidRepresentationError(TorsionLabError, ValueError):
    """The relator is not mapped to +-I."""


class ReducibleRepresentationError(ContractError):
    """H_0 or H_2 of the twisted complex is nonzero."""


class AdmissibilityError(TorsionLabError, ValueError):
    """A train-track cocycle violates a switch condition."""
