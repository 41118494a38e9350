"""Exception hierarchy for logsym."""


class LogSymError(Exception):
    """Base class for all errors raised by logsym."""


class InvalidSampleError(LogSymError, ValueError):
    pass


class NonPositiveValue(InvalidSampleError):
    """An observation lies outside the positive half-line."""


class NonFiniteValue(InvalidSampleError):
    pass


class TooFewObservations(InvalidSampleError):
    pass


class SampleTooSmall(LogSymError, ValueError):
    """The sample cannot support the requested kernel degree."""


class WrongArity(LogSymError, ValueError):
    pass


class DegenerateVariance(LogSymError, ArithmeticError):
    pass


class DegenerateSample(LogSymError, ValueError):
    pass


class DomainError(LogSymError, ValueError):
    pass


class InvalidParameter(LogSymError, ValueError):
    pass


class ConfigError(LogSymError, ValueError):
    pass
