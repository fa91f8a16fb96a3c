"""Typed exceptions shared by all modules."""


class FoliationLabError(Exception):
    """Base class for all workbench errors."""


class FieldParseError(FoliationLabError):
    pass


class DivisionByZero(FoliationLabError):
    pass


class ZeroEntry(FoliationLabError):
    pass


class ZeroForm(FoliationLabError):
    pass


class NotDivisible(FoliationLabError):
    def __init__(self, variable):
        self.variable = variable
        super().__init__(f"coefficient not divisible by variable {variable!r}")


class NotAUnit(FoliationLabError):
    pass


class DimensionError(FoliationLabError):
    pass


class NotDicritical(FoliationLabError):
    pass


class CenterNotInvariant(FoliationLabError):
    pass


class CenterNotSingularAdapted(FoliationLabError):
    pass


class ScriptChartMissing(FoliationLabError):
    pass


class OffFieldPoint(FoliationLabError):
    """A requested point does not have coordinates in the working field."""

    def __init__(self, minimal_polynomial):
        self.minimal_polynomial = minimal_polynomial
        super().__init__(f"point not in the field; minimal polynomial {minimal_polynomial}")


class NonRationalSingularPoint(FoliationLabError):
    def __init__(self, factor):
        self.factor = factor
        super().__init__(f"singular direction outside the field: {factor}")


class NonRationalEigenvalues(FoliationLabError):
    pass


class DepthExceeded(FoliationLabError):
    pass


class IncompleteTree(FoliationLabError):
    pass


class SaddleNodeUnsupported(FoliationLabError):
    pass


class LineNotInvariant(FoliationLabError):
    pass


class InvalidGraph(FoliationLabError):
    def __init__(self, violations):
        self.violations = violations
        super().__init__("graph violates structural invariants: " + "; ".join(violations))


class MissingFiberData(FoliationLabError):
    pass


class NotRegular(FoliationLabError):
    pass


class UnclassifiableCurve(FoliationLabError):
    def __init__(self, curve_id):
        self.curve_id = curve_id
        super().__init__(f"cannot classify generic point of curve {curve_id!r}")


class ZeroLambda(FoliationLabError):
    pass


class LeftDomain(FoliationLabError):
    pass


class StepTooLarge(FoliationLabError):
    pass


class BadParameters(FoliationLabError):
    pass


class ScenarioError(FoliationLabError):
    pass
