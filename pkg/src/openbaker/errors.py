"""Error taxonomy shared by the library, the service, and the CLI.

Each class maps to one process exit code so front ends can translate
failures uniformly: configuration problems (bad flags, divisibility
violations, out-of-range parameters) exit 2, numerical failures (solver
breakdown, degenerate statistics) exit 3, and refusals on resonances whose
left/right overlap is numerically zero exit 4.
"""

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_NEAR_DEFECTIVE = 4


class OpenBakerError(Exception):
    """Base class for all library errors."""

    exit_code = EXIT_NUMERICAL


class ConfigurationError(OpenBakerError):
    """Invalid input or parameter combination (exit code 2)."""

    exit_code = EXIT_CONFIG


class NumericalFailureError(OpenBakerError):
    """A computation could not produce a trustworthy result (exit code 3)."""

    exit_code = EXIT_NUMERICAL


class NearDefectiveResonanceError(OpenBakerError):
    """Refusal to use a resonance whose overlap s_i is numerically zero (exit code 4)."""

    exit_code = EXIT_NEAR_DEFECTIVE
