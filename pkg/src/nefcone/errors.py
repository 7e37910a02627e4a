"""Exception hierarchy.

Every error raised by the package derives from :class:`NefconeError`.
Input-validation errors additionally derive from :class:`ValueError` so
callers that only care about "bad input" can catch the builtin.
"""


class NefconeError(Exception):
    pass


class ValidationError(NefconeError, ValueError):
    pass


# core lattice
class IndexOutOfRange(ValidationError):
    pass


class DuplicateTensorEntry(ValidationError):
    pass


class OptionalClassWrongRank(ValidationError):
    pass


class WrongArity(ValidationError):
    pass


class ForeignClass(ValidationError):
    pass


class RankMismatch(ValidationError):
    pass


# cones
class DimensionMismatch(ValidationError):
    pass


# abelian model
class InvalidN(ValidationError):
    pass


class NotUnimodular(ValidationError):
    pass


# K3 model
class NotARoot(ValidationError):
    pass


class NotInPositiveCone(ValidationError):
    pass


class StepLimitExceeded(NefconeError):
    pass


# chamber walking
class UnknownInstance(ValidationError):
    pass


class InvalidParameters(ValidationError):
    pass


class NotMovable(NefconeError):
    pass


class NotAWall(ValidationError):
    pass


class NotFloppable(ValidationError):
    pass


class BoundExceeded(ValidationError):
    pass


class ProbeTouchesBoundary(NefconeError):
    pass


# group action
class NotPositiveDefinite(ValidationError):
    pass


# I/O
class ParseError(ValidationError):
    pass


class SchemaError(ValidationError):
    pass


class InvariantViolation(ValidationError):
    pass


class UnsupportedFormat(ValidationError):
    pass
