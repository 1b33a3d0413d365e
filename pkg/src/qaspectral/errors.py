# src/qaspectral/errors.py

"""Exception types shared across the package.

All derive from ValueError so generic callers can catch one base class;
the split exists because the CLI maps input problems and contract
violations to different exit codes.
"""


class QASpectralError(ValueError):
    """Base class for all errors raised by this package."""


class InputError(QASpectralError):
    """Malformed or inconsistent input (bad shapes, bad parameters, bad files)."""


class DomainError(QASpectralError):
    """Input is structurally fine but outside the mathematical domain
    (zero evaluation point, singular factor, eigenvalue below the PSD floor)."""


class PreconditionError(QASpectralError):
    """A documented operator-level precondition does not hold
    (membership failure, norm hypothesis violated, commutation failure)."""


class ResourceError(QASpectralError):
    """The request exceeds a configured desk-scale cap (matrix dimension)."""
