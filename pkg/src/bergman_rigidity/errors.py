"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """Invalid domain geometry or an evaluation point outside the admissible set."""


class NumericalFailure(RuntimeError):
    """A solver did not converge or produced data that contradicts a theorem."""


class IllConditionedBasisWarning(UserWarning):
    """The dictionary Gram matrix was truncated to a well-conditioned leading block."""


class GuardBandWarning(UserWarning):
    """A kernel was evaluated closer to the boundary than the configured guard band."""


class NumericalFailureWarning(UserWarning):
    """A quantity that must satisfy an inequality violated it beyond tolerance."""
