"""
Exception hierarchy for formula-census
"""


class FormulaCensusError(Exception):
    """Root of every error raised by this package"""


# Formula construction, validation and parsing

class FormulaError(FormulaCensusError):
    """A formula tree violates one of its structural or value constraints"""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position  # pre-order node index, when known


class MulByOne(FormulaError):
    pass


class PowDisallowed(FormulaError):
    pass


class MalformedTree(FormulaError):
    pass


class ParseError(FormulaError):
    """Text could not be read as a formula; position is a character offset"""

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}", position)


class ValueConstraintViolation(FormulaError):
    """Text parsed, but the resulting tree fails validation"""

    def __init__(self, cause):
        super().__init__(f"parsed formula is invalid: {cause}", cause.position)
        self.cause = cause


# Counting tables

class CountingError(FormulaCensusError):
    pass


class IndexOutOfTable(CountingError):
    pass


class MissingTable(CountingError):
    pass


class MethodMismatch(CountingError):
    """Trace-formula and direct-recursion f_k values disagree"""

    def __init__(self, k, n, by_traces, by_recursion):
        super().__init__(
            f"f_{k}({n}) mismatch: traces={by_traces} recursion={by_recursion}")
        self.k = k
        self.n = n


# Table cache

class CacheError(FormulaCensusError):
    pass


class CacheIOError(CacheError):
    pass


class FormatError(CacheError):
    pass


class ChecksumMismatch(CacheError):
    pass


class TableInvariantViolation(FormatError):
    pass


# Enumeration

class EnumerationError(FormulaCensusError):
    pass


class CapExceeded(EnumerationError):
    def __init__(self, n, cap):
        super().__init__(f"n={n} exceeds the enumeration cap {cap}")
        self.n = n
        self.cap = cap


# Analytic constants

class AnalyticError(FormulaCensusError):
    pass


class DomainError(AnalyticError):
    pass


class InsufficientTable(AnalyticError):
    pass


class NoSignChange(AnalyticError):
    pass


class PrecisionExhausted(AnalyticError):
    pass


# Encoders and census

class EncodingError(FormulaCensusError):
    pass


class FactorizationFailure(EncodingError):
    pass


class BoundViolation(EncodingError):
    def __init__(self, bound, witness, detail=''):
        super().__init__(f"{bound} violated at n={witness} {detail}".rstrip())
        self.bound = bound
        self.witness = witness


# CLI

class VerificationFailure(FormulaCensusError):
    def __init__(self, suite, witness):
        super().__init__(f"{suite}: {witness}")
        self.suite = suite
        self.witness = witness


class UsageError(FormulaCensusError):
    pass
