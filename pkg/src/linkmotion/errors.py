"""Exception hierarchy shared by every module of the package."""


class MotionGroupError(Exception):
    """Base class for all library errors."""


class IndexOutOfRange(MotionGroupError):
    pass


class MalformedPayload(MotionGroupError):
    pass


class InvalidFactor(MotionGroupError):
    """A factor group's data violates the group axioms or naming rules."""


class ContextMismatch(MotionGroupError):
    pass


class KindMismatch(MotionGroupError):
    pass


class NotAnAutomorphism(MotionGroupError):
    pass


class Unsupported(MotionGroupError):
    pass


class SpecMismatch(MotionGroupError):
    pass


class MissingSelfConjugation(MotionGroupError):
    pass


class InvalidMove(MotionGroupError):
    pass


class NotLaminar(MotionGroupError):
    pass


class InvalidTree(MotionGroupError):
    pass


class UnknownPiece(MotionGroupError):
    pass


class EmptyLink(MotionGroupError):
    pass


class InvalidSpec(MotionGroupError):
    """Raised when a link specification fails validation."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class ParseError(MotionGroupError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class UnknownGenerator(ParseError):
    pass
