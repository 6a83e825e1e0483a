"""Exception hierarchy.

Two families matter to callers: ``ValidationError`` for inputs that violate a
precondition (bad shapes, incompatible loop, too-small truncation) and
``NumericalError`` for failures discovered while computing (level crossings,
vanishing traces, non-convergent series). The CLI maps them to exit codes 2 and 3.
"""


class PhaseLabError(Exception):
    pass


class ValidationError(PhaseLabError, ValueError):
    pass


class NumericalError(PhaseLabError, ArithmeticError):
    pass


# linops
class NonHermitian(ValidationError):
    pass


class NonFinite(ValidationError):
    pass


class NotPSD(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class NotUnitary(ValidationError):
    pass


# grassmann
class OddElement(ValidationError):
    pass


class ZeroBody(NumericalError):
    pass


class SeriesNotConverged(NumericalError):
    pass


# models
class TruncationTooSmall(ValidationError):
    pass


class TruncationWarning(UserWarning):
    pass


class IncompatibleLoop(ValidationError):
    pass


class NoAnalyticForm(ValidationError):
    pass


class UnsupportedLoopForClosedForm(ValidationError):
    pass


class NotADensityMatrix(ValidationError):
    pass


# holonomy
class LevelCrossing(NumericalError):
    pass


class DegenerateLevel(NumericalError):
    pass


class RankDeficient(NumericalError):
    pass


class StepTooSmall(NumericalError):
    pass


class ZeroTrace(NumericalError):
    pass
