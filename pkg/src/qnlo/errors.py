"""Exception hierarchy for qnlo."""


class QnloError(Exception):
    """Base class for every error raised by this package."""


class TruncationTooSmall(QnloError):
    pass


class DimensionMismatch(QnloError):
    pass


class TruncationBreached(QnloError):
    """Population leaked into the guard band of the Fock truncation."""

    def __init__(self, message, tail=None, time=None):
        super().__init__(message)
        self.tail = tail
        self.time = time


class NonzeroDelta(QnloError):
    pass


class ComplexAlphaUnsupported(QnloError):
    pass


class EigensolveFailure(QnloError):
    pass


class StepSizeUnderflow(QnloError):
    pass


class NonHermitianInput(QnloError):
    pass


class GridTooCoarse(QnloError):
    pass


class GridMismatch(QnloError):
    pass


class ConfigError(QnloError):
    """Invalid run configuration; ``field`` and ``line`` locate the problem when known."""

    def __init__(self, message, field=None, line=None):
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if field is not None:
            loc.append(f"field '{field}'")
        super().__init__(f"{', '.join(loc)}: {message}" if loc else message)
        self.field = field
        self.line = line
