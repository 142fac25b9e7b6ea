"""Error hierarchy shared by services, routers and the CLI.

Input errors are the caller's fault (bad file, bad sizes, bad parameters);
numerical failures mean the computation itself could not deliver a result.
"""


class KrylovLabError(ValueError):
    code = "KRYLOV_LAB_ERROR"
    exit_code = 2


class InputError(KrylovLabError):
    code = "INPUT_ERROR"
    exit_code = 1


class NumericalFailure(KrylovLabError):
    code = "NUMERICAL_FAILURE"
    exit_code = 2


class EmptyHamiltonian(InputError):
    code = "EMPTY_HAMILTONIAN"


class QubitMismatch(InputError):
    code = "QUBIT_MISMATCH"


class ParseError(InputError):
    code = "PARSE_ERROR"

    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class DimensionMismatch(InputError):
    code = "DIMENSION_MISMATCH"


class NotNormalized(InputError):
    code = "NOT_NORMALIZED"


class LengthMismatch(InputError):
    code = "LENGTH_MISMATCH"


class SizeGuard(InputError):
    code = "SIZE_GUARD"


class DomainError(InputError):
    code = "DOMAIN_ERROR"


class EmptyInput(InputError):
    code = "EMPTY_INPUT"


class ConvergenceFailure(NumericalFailure):
    code = "CONVERGENCE_FAILURE"


class AllDiscarded(NumericalFailure):
    code = "ALL_DISCARDED"


class DenominatorInvalid(NumericalFailure):
    code = "DENOMINATOR_INVALID"


class ComplexMoment(NumericalFailure):
    code = "COMPLEX_MOMENT"
