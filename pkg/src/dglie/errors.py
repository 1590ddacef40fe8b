"""Exception types shared across the package."""


class DglError(Exception):
    """Base class for all errors raised by dglie."""


class RingMembershipError(DglError, ValueError):
    """A rational number does not lie in the coefficient ring."""


class NonSUnitDenominator(RingMembershipError):
    pass


class UndeclaredGenerator(DglError, KeyError):
    def __init__(self, name, line=None, col=None):
        self.name = name
        self.line = line
        self.col = col
        where = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(f"undeclared generator {name!r}{where}")

    def __str__(self):
        return self.args[0]


class DegreeMismatch(DglError, ValueError):
    pass


class InhomogeneousDifferential(DegreeMismatch):
    pass


class DSquaredNonzero(DglError, ValueError):
    def __init__(self, generator, value):
        self.generator = generator
        self.value = value
        super().__init__(f"d(d({generator})) = {value} is not zero")


class NotAChainMap(DglError, ValueError):
    def __init__(self, generator, lhs, rhs):
        self.generator = generator
        super().__init__(
            f"morphism does not commute with the differential on {generator}: "
            f"d(f({generator})) = {lhs} but f(d({generator})) = {rhs}")


class NonInvertibleFactorial(DglError, ArithmeticError):
    def __init__(self, n):
        self.n = n
        super().__init__(f"{n}! is not a unit in the coefficient ring")


class NotAnEquivalence(DglError, ValueError):
    pass


class NotPointed(DglError, ValueError):
    pass


class NotACycle(DglError, ValueError):
    pass


class NoSolution(DglError, ArithmeticError):
    pass


class DegreeWindowMismatch(DglError, ValueError):
    pass


class InvalidSplit(DglError, ValueError):
    pass


class PresentationSyntaxError(DglError, SyntaxError):
    def __init__(self, message, line, col):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: {message}")

    def __str__(self):
        return f"line {self.line}, column {self.col}: {self.message}"
