"""Exception types raised by the laboratory.

Each error kind named in the operation contracts gets its own class so callers
(and the CLI) can tell a bad input from a failed numerical check.
"""


class LabError(Exception):
    """Base class for every error raised by helicoid_lab."""


class InvalidScaleError(LabError, ValueError):
    pass


class QuadratureFailure(LabError, ArithmeticError):
    """A contour sample was not finite."""

    def __init__(self, message, node_index=None):
        super().__init__(message)
        self.node_index = node_index


class SingularConfigurationError(LabError, ValueError):
    pass


class NearBoundaryEvaluation(LabError, ValueError):
    pass


class InvalidDomainError(LabError, ValueError):
    pass


class PoleEvaluationError(LabError, ValueError):
    pass


class OutsideHalfplaneError(LabError, ValueError):
    pass


class NotRepresentableError(LabError, ValueError):
    pass


class IllPosedProblemError(LabError, ValueError):
    pass


class NonConvergenceError(LabError, RuntimeError):
    """Newton iteration did not reach tolerance; carries the report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class EstimateInapplicable(LabError, ValueError):
    pass


class HypothesisViolation(LabError, ValueError):
    """A hypothesis of the height estimate failed; ``clause`` names it."""

    def __init__(self, message, clause=None):
        super().__init__(message)
        self.clause = clause


class InvalidRingsError(LabError, ValueError):
    pass


class InvalidContourError(LabError, ValueError):
    pass


class WrongFieldKindError(LabError, ValueError):
    pass


class OverlappingNecksError(LabError, ValueError):
    pass


class CoincidentNecksError(LabError, ValueError):
    pass


class ClusterUnresolvedError(LabError, ValueError):
    pass


class CaseHypothesisViolated(LabError, ValueError):
    pass


class InvalidRadiusError(LabError, ValueError):
    pass
