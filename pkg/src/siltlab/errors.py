"""Exception taxonomy.

Three families matter for exit codes: input problems (exit 2),
verification failures (exit 1) and internal diagnostics (exit 3).
"""


class SiltlabError(Exception):
    """Base class for all package errors."""


class InputError(SiltlabError):
    """Malformed or inadmissible input data."""


class VerificationFailure(SiltlabError):
    """A machine-checked property did not hold."""


class DiagnosticError(SiltlabError):
    """Internal invariant broke; the result can not be trusted."""


class MalformedSpec(InputError):
    pass


class InfiniteDimensional(InputError):
    pass


class ConventionViolation(InputError):
    pass


class UnknownVertex(InputError):
    pass


class ZeroObject(InputError):
    pass


class IncompatibleMap(InputError):
    pass


class NotSilting(InputError):
    pass


class NotTwoTerm(InputError):
    pass


class SingularEuler(DiagnosticError):
    pass


class InvalidChain(InputError):
    pass


class InvalidWeights(InputError):
    pass


class ParameterMismatch(InputError):
    pass


class BudgetExceeded(DiagnosticError):
    pass


class UnknownNode(InputError):
    pass
