"""Exception hierarchy shared by every reconstruction module."""


class ReconstructionError(Exception):
    """Base class for all errors raised by matrixhear."""


class NonConvergence(ReconstructionError):
    pass


class GaugeAmbiguous(ReconstructionError):
    pass


class ZeroSpectrum(ReconstructionError):
    pass


class NotInterlacing(ReconstructionError):
    pass


class Inconsistent(ReconstructionError):
    pass


class NotRegular(ReconstructionError):
    pass


class IllConditioned(ReconstructionError):
    pass


class DegenerateM2(ReconstructionError):
    pass


class MultiBlock(ReconstructionError):
    pass


class CaseMismatch(ReconstructionError):
    pass


class InconsistentSharedValue(ReconstructionError):
    pass


class NoSolution(ReconstructionError):
    pass


class NoIntersection(NoSolution):
    pass


class Ambiguous(ReconstructionError):
    """More than one admissible branch survived.

    ``branches`` holds the competing partial results (columns or matrices,
    depending on the raising function).
    """

    def __init__(self, message, branches=()):
        super().__init__(message)
        self.branches = list(branches)


class TooLarge(ReconstructionError):
    pass


class CannotSatisfyMargin(ReconstructionError):
    pass


class BadWindow(ReconstructionError):
    pass


class NotPentaStep(ReconstructionError):
    pass


class ParseError(ReconstructionError):
    """Malformed input file; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
