"""Exception taxonomy shared by all solver modules.

DomainError marks inputs outside an operation's contract (maps to CLI exit
status 1), ConvergenceError marks a numerical procedure that failed to
converge within its configured budget (exit status 2).
"""


class NCWellError(Exception):
    """Base class for all package errors."""


class DomainError(NCWellError, ValueError):
    """Input violates a documented precondition; the message names the rule."""


class ConvergenceError(NCWellError, RuntimeError):
    """An iterative or adaptive procedure exhausted its budget."""


class SingularSystemError(ConvergenceError):
    """Both matching rows are degenerate; the linear system has no usable solution."""
