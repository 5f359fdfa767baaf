"""Exception hierarchy shared by the solver, verifier and CLI."""


class InvPowError(Exception):
    """Base class for every error raised by this package."""


class DomainError(InvPowError, ValueError):
    """An argument lies outside the domain of the operation."""


class SingularityError(DomainError):
    """The constraint function was evaluated at its pole B = -2 sqrt(A)."""


class ConstraintUnsatisfied(InvPowError):
    """The potential does not satisfy the solvability constraint on C.

    Attributes
    ----------
    residual : float
        ``constraint_C(A, B, D, channel) - C``.
    """

    def __init__(self, residual, message=None):
        self.residual = float(residual)
        super().__init__(
            message or f"constraint on C violated: residual {self.residual:.10g}"
        )


class NoRootFound(InvPowError):
    """No sign change of the constraint function inside the search bracket."""


class NoInteriorPeak(InvPowError):
    pass


class ConvergenceFailure(InvPowError):
    """Adaptive quadrature exhausted its subdivision budget.

    The best available estimate is kept on ``result``.
    """

    def __init__(self, message, result=None):
        self.result = result
        super().__init__(message)


class NoEigenvalueInBracket(InvPowError):
    pass


class NotGroundState(InvPowError):
    pass


class BranchesUndefined(InvPowError):
    """Negative discriminant in the two-branch energy formula."""
