""" Exception hierarchy shared by every radix module.
"""


class RadixError(Exception):
    """ Base class for all radix errors
    """


class VariableMismatch(RadixError, TypeError):
    """ Raised when polynomials over different variable lists are combined
    """


class ParseError(RadixError, ValueError):
    """ Syntax or semantic error in polynomial text or a spec file.
    Line and column are 1-based and optional.
    """

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(self.__str__())

    def __str__(self):
        if self.line is not None and self.column is not None:
            return "line {}, column {}: {}".format(self.line, self.column, self.message)
        if self.column is not None:
            return "column {}: {}".format(self.column, self.message)
        return self.message


class HypothesisError(RadixError, ValueError):
    """ A hypothesis of the tower construction does not hold.
    ``hypothesis`` is a stable identifier such as ``not-square-free``.
    """

    def __init__(self, hypothesis, message, witness=None):
        self.hypothesis = hypothesis
        self.message = message
        self.witness = witness
        super().__init__("{}: {}".format(hypothesis, message))


class NotInModule(RadixError, ArithmeticError):
    """ An element does not lie in the S-span of the closure basis.
    ``monomial`` is the first offending shifted monomial in graded-lex order,
    ``coefficient`` its numerator coefficient and ``required_power`` the
    power of p that should have divided it (None if the monomial has no
    basis entry at all).
    """

    def __init__(self, monomial, coefficient, required_power=None):
        self.monomial = tuple(monomial)
        self.coefficient = coefficient
        self.required_power = required_power
        if required_power is None:
            message = "monomial {} has no basis entry".format(self.monomial)
        else:
            message = "coefficient {} of monomial {} is not divisible by p^{}".format(
                coefficient, self.monomial, required_power)
        super().__init__(message)


class StageError(RadixError):
    """ A pipeline stage failed; wraps the cause
    """

    def __init__(self, stage, message, cause=None, witness=None):
        self.stage = stage
        self.message = message
        self.cause = cause
        self.witness = witness
        super().__init__("stage {}: {}".format(stage, message))

    @property
    def hypothesis(self):
        return getattr(self.cause, "hypothesis", self.stage)
