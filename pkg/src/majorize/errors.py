"""Exception hierarchy.

``exit_code`` is the status the command line reports for each failure:
1 for a predicate that came out false, 2 for bad input, 3 for numerical
trouble.
"""


class MajorizeError(Exception):
    exit_code = 2


class InputError(MajorizeError, ValueError):
    exit_code = 2


class PredicateFailed(MajorizeError, ValueError):
    exit_code = 1


class NumericalError(MajorizeError, ArithmeticError):
    exit_code = 3


class NonHermitian(InputError):
    pass


class NonSquare(InputError):
    pass


class LengthMismatch(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class BadSpectrum(InputError):
    pass


class InvalidState(InputError):
    pass


class NotUnitary(InputError):
    pass


class LambdaOutOfRange(InputError):
    pass


class BadDimension(InputError):
    pass


class SpectrumDegenerate(InputError):
    pass


class NotUnital(InputError):
    pass


class NotMajorized(PredicateFailed):
    pass


class NotBistochastic(PredicateFailed):
    pass


class NotCP(PredicateFailed):
    pass


class NotTP(PredicateFailed):
    pass


class NoConvergence(NumericalError):
    pass


class NoPerfectMatching(NumericalError):
    pass
