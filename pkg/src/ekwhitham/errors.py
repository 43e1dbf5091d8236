"""Exception hierarchy shared across the package.

The command-line tool maps these onto its exit-code contract:
invalid parameters (outside the admissible wave region, bad law arguments)
exit with 1, numerical failures (bracketing, degenerate orbits, resonances)
with 2, and configuration problems with 3.
"""


class EKWhithamError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(EKWhithamError):
    """Parameters outside the admissible region (exit code 1)."""


class DomainError(InvalidParameterError):
    """Evaluation of a law outside its domain (v <= covolume)."""


class NumericalError(EKWhithamError):
    """A numerical procedure failed (exit code 2)."""


class DegenerateOrbitError(NumericalError):
    """Orbit amplitude below the resolvable floor, or a collapsed root."""


class BracketError(NumericalError):
    """A root or threshold bracket could not be established."""


class BoundaryError(NumericalError):
    """Finite-difference stencil left the admissible region even after
    step shrinking."""


class ResonanceError(NumericalError):
    """Second-harmonic resonance: the mode-2 solvability operator is
    singular within tolerance."""


class VacuumError(NumericalError):
    """Mean specific volume not positive; the Eulerian mirror state is
    undefined."""


class ConsistencyError(NumericalError):
    """An internal invariant failed (e.g. too many critical points for
    the given law), signalling a windowing or law bug."""


class ConfigError(EKWhithamError):
    """Malformed or incomplete configuration (exit code 3)."""
