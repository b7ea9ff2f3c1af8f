"""Exception hierarchy shared by the library and the command line.

Every error carries a short machine-readable ``kind`` and the process exit
code the CLI reports for it.
"""


class SpdmdError(Exception):
    """Base class for all library errors"""

    kind = "error"
    exit_code = 1

    def to_dict(self) -> dict:
        return {"error": self.kind, "message": str(self), "exit_code": self.exit_code}


class DimensionError(SpdmdError, ValueError):
    kind = "dimension"
    exit_code = 2


class FormatError(SpdmdError, ValueError):
    kind = "format"
    exit_code = 2


class LengthError(FormatError):
    kind = "length"


class DataError(SpdmdError, ValueError):
    kind = "data"
    exit_code = 2


class SpecError(SpdmdError, ValueError):
    kind = "spec"
    exit_code = 2


class DomainError(SpdmdError, ValueError):
    kind = "domain"
    exit_code = 2


class BoundsError(SpdmdError, IndexError):
    kind = "bounds"
    exit_code = 2


class ConditioningError(SpdmdError, ArithmeticError):
    kind = "conditioning"
    exit_code = 3


class RankError(ConditioningError):
    kind = "rank"


class NumericError(SpdmdError, ArithmeticError):
    kind = "numeric"
    exit_code = 3


class NonConvergenceError(SpdmdError):
    kind = "non_convergence"
    exit_code = 4
