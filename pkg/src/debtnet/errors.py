"""Exception hierarchy shared by every module."""


class DebtNetError(Exception):
    """Base class for all errors raised by this package."""


class InvalidNetworkError(DebtNetError, ValueError):
    """A network violates its structural invariants."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid network: " + "; ".join(str(v) for v in self.violations))


class ProfileError(DebtNetError, ValueError):
    """A strategy profile or edge set refers to something that is not an edge."""


class PlanError(DebtNetError, ValueError):
    """An injection plan is malformed (negative amount, bad bank, ...)."""


class PolicyError(DebtNetError, ValueError):
    """An injection policy cannot be applied to the given network."""


class GuardError(DebtNetError):
    """An exhaustive search refused to run because the instance is too large."""


class ConvergenceError(DebtNetError, ArithmeticError):
    """An iterative numeric procedure failed to converge."""


class SingularSystemError(DebtNetError, ArithmeticError):
    """A linear system that must be solved is singular."""


class InfeasibleError(DebtNetError):
    """A linear program or constrained search has no feasible point."""


class UnboundedError(DebtNetError):
    """A linear program is unbounded."""


class ParseError(DebtNetError, ValueError):
    """A network document could not be parsed."""
