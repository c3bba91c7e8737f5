"""Exception hierarchy.

The CLI maps these onto exit codes: input problems exit with 2, numerical
failures with 3 and invariant violations in produced outputs with 4.
"""


class ViscoWaveError(Exception):
    """Base class for all errors raised by the package."""

    exit_code = 3


class InputError(ViscoWaveError, ValueError):
    """Malformed input: bad grid, bad file, out-of-range parameter."""

    exit_code = 2


class ModelSchemaError(InputError):
    """A model definition violates a documented parameter invariant."""


class DomainError(ViscoWaveError, ValueError):
    """Evaluation requested outside the function's domain (e.g. on a branch cut)."""

    exit_code = 2


class NumericalError(ViscoWaveError, ArithmeticError):
    """A numerical procedure failed to deliver a trustworthy value."""


class IndeterminateLimitError(NumericalError):
    """A limit extrapolation neither converged nor clearly diverged."""


class InversionError(NumericalError):
    """Inverse Laplace transform failed (non-finite samples, poles on contour...)."""


class IntegrationError(NumericalError):
    """Contour integration for the Green's function did not converge."""


class SingularMediumError(NumericalError):
    """The medium has Q(p) = 0, so no wavenumber exists."""


class IllConditionedError(NumericalError):
    """A discretised first-kind equation is too ill-conditioned to trust."""


class InvariantError(ViscoWaveError):
    """A produced object violates one of its documented invariants."""

    exit_code = 4
