"""Exception hierarchy shared by the frontend and the solver."""


class LsraError(Exception):
    """Base class for all errors raised by this package."""


class InputError(LsraError):
    """The input script is malformed or outside the supported fragment."""


class SmtSyntaxError(InputError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}")


class UnsupportedFeature(InputError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unsupported feature: {name}")


class SortError(InputError):
    pass


class UndeclaredSymbol(InputError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"undeclared symbol: {name}")


class DivisionByNonConstant(InputError):
    pass


class DivisionByZero(InputError):
    pass


class NonMultilinear(InputError):
    """A monomial would contain some variable with exponent > 1."""

    def __init__(self, var):
        self.var = var
        super().__init__(f"non-multilinear term in variable {var}")
