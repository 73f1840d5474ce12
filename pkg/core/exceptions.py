"""
Exception hierarchy shared by every app of the pipe climber simulator.
"""


class PipeClimberError(Exception):
    """Base class for simulator errors"""


class ConstraintViolation(PipeClimberError):
    """Side-gear speeds break the ring-gear averaging constraint"""


class UnreachableDemand(PipeClimberError):
    """Output demand whose mean is not fixed by the input speed"""


class NotABend(PipeClimberError):
    """Bend-only geometry requested for a straight segment"""


class OutOfRange(PipeClimberError):
    """Arc-length position outside the network"""


class ConfigError(PipeClimberError):
    """Configuration that cannot describe a valid simulation"""


class ParseError(ConfigError):
    """Malformed configuration text"""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ApeUndefined(PipeClimberError, ZeroDivisionError):
    """APE against a zero theoretical value"""
