"""Exception hierarchy.

Two families are kept apart so that callers (the CLI in particular) can tell
malformed input from a genuine negative mathematical result.
"""


class RealHilbertError(Exception):
    """Base class for every error raised by the package."""


class InputError(RealHilbertError, ValueError):
    """The arguments are malformed: wrong shape, non-finite, bad file, ..."""


class VerdictError(RealHilbertError):
    """The input is well formed but fails a mathematical precondition."""


# -- input errors -----------------------------------------------------------

class NonFinite(InputError):
    pass


class NonSquare(InputError):
    pass


class NotSymmetric(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class OddDimension(InputError):
    pass


class NotAProjector(InputError):
    pass


class MissingGenerators(InputError):
    pass


class NonPositiveEnergy(InputError):
    pass


class NotAntiHermitian(InputError):
    pass


class DimensionTooSmall(InputError):
    pass


class FunctionUndefinedAtEigenvalue(InputError):
    pass


class TooFarFromIdentity(InputError):
    pass


class ParseError(InputError):
    pass


class UnknownCommand(InputError):
    pass


# -- verdict errors ---------------------------------------------------------

class NotAComplexStructure(VerdictError):
    pass


class NotAnticommuting(VerdictError):
    pass


class ViolatesConjugation(VerdictError):
    pass


class NotPositive(VerdictError):
    pass


class NotUnitary(VerdictError):
    pass


class NotUnitaryAtSample(VerdictError):
    pass


class NotIrreducible(VerdictError):
    pass


class UnexpectedCommutantDim(VerdictError):
    pass


class NotComplexLinear(VerdictError):
    pass


class NotAState(VerdictError):
    pass


class ZeroProbabilityConditioning(VerdictError):
    pass


class NotCommutingWithStructure(VerdictError):
    pass


class PrerequisiteOrderFails(VerdictError):
    pass


class NegativeSquaredMass(VerdictError):
    pass


class TimeTranslationNotInjective(VerdictError):
    pass


class PolarNotComplexStructure(VerdictError):
    pass


class NumericalInconsistency(VerdictError):
    """Two independent computation routes disagreed beyond tolerance."""
