"""Exception types shared across the package."""


class EpicontrolError(Exception):
    """Base class for all package-specific errors."""


class GraphParseError(EpicontrolError):
    """Malformed edge-list input (carries the offending line number)."""

    def __init__(self, message, line_no=None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class GraphValidationError(EpicontrolError):
    """Structurally invalid network (self-loop, empty graph, asymmetry)."""


class ParameterError(EpicontrolError):
    """Model or control parameter outside its admissible range."""


class IllegalTransitionError(EpicontrolError):
    """Event applied to a state that does not admit it."""

    def __init__(self, node, kind, reason):
        self.node = node
        self.kind = kind
        super().__init__(f"illegal {kind} at node {node}: {reason}")


class TimeOrderError(EpicontrolError):
    """Event timestamp earlier than the current state time."""


class InvariantViolationError(EpicontrolError):
    """Internal consistency check failed (corrupted state or LP mismatch)."""


class NumericalError(EpicontrolError):
    """Iterative routine failed to converge within its cap."""


class PolicyError(EpicontrolError):
    """Treatment policy could not produce intensities."""


class CalibrationError(EpicontrolError):
    """Budget-matching calibration failed to bracket or converge."""


class ConfigError(EpicontrolError):
    """Invalid experiment configuration (carries the offending key)."""

    def __init__(self, message, key=None):
        self.key = key
        if key is not None:
            message = f"key '{key}': {message}"
        super().__init__(message)
