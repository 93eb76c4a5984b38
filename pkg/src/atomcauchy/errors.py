"""Exception hierarchy shared by every module.

Each class carries a stable ``exit_code`` used by the command-line front end.
"""


class AtomCauchyError(Exception):
    exit_code = 1


class ParseError(AtomCauchyError, ValueError):
    """Malformed right-hand side or problem file."""

    exit_code = 2

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class UnsupportedFunction(ParseError):
    pass


class DomainError(AtomCauchyError, ValueError):
    pass


class DegenerateNodes(AtomCauchyError, ValueError):
    def __init__(self, i, j, xi, xj):
        super().__init__(f"nodes {i} and {j} coincide within tolerance: {xi!r} vs {xj!r}")
        self.pair = (i, j)


class MultipleRootDetected(AtomCauchyError):
    exit_code = 3


class NonConvergence(AtomCauchyError):
    exit_code = 3


class DivergentAtZero(AtomCauchyError):
    exit_code = 4


class ResonantExponent(AtomCauchyError):
    exit_code = 5


class ExponentBelowRoots(AtomCauchyError):
    exit_code = 4


class ToleranceNotMet(AtomCauchyError):
    exit_code = 6

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class ImaginaryResidue(AtomCauchyError):
    exit_code = 6


class StepUnderflow(AtomCauchyError):
    exit_code = 6


class BoundViolation(AtomCauchyError):
    exit_code = 7
