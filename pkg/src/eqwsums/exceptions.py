"""Exception types shared across the library.

Input-validation problems raise plain :class:`ValueError` with a descriptive
message; the classes below mark failures of the numerics themselves.  The CLI
maps ``ValueError`` to exit code 1 and :class:`NumericalError` to exit code 2.
"""

from __future__ import annotations


class NumericalError(RuntimeError):
    """A computation failed for numerical reasons."""


class NonConvergenceError(NumericalError):
    """The root iteration exhausted its budget without meeting the residual test.

    Carries the best points reached so the caller can inspect how far the
    iteration got.
    """

    def __init__(self, message, roots=None, residual=None, iterations=None):
        super().__init__(message)
        self.roots = roots
        self.residual = residual
        self.iterations = iterations


class ConditioningError(NumericalError):
    """Intermediate quantities overflowed the safe double-precision range."""


class UnsolvableError(NumericalError):
    """A solvability criterion of the weighted sample-table solver failed.

    ``reason`` is ``"degree-deficient"`` (generating polynomial has degree
    below the requested term count) or ``"repeated-roots"`` (its roots are not
    pairwise distinct).
    """

    def __init__(self, message, reason):
        super().__init__(message)
        self.reason = reason


class IllConditionedError(NumericalError):
    """A solve succeeded formally but failed its back-substitution residual check."""
