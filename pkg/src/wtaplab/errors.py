"""Exception hierarchy shared by all wtaplab modules."""


class WtapError(Exception):
    """Base class for all errors raised by this package."""


# -- instance construction ------------------------------------------------

class CycleDetected(WtapError):
    pass


class DisconnectedTree(WtapError):
    pass


class NegativeCost(WtapError):
    pass


class SelfLoopLink(WtapError):
    pass


class DuplicateLink(WtapError):
    pass


class UnknownLink(WtapError):
    pass


class UnknownEdge(WtapError):
    pass


class NotSplittable(WtapError):
    pass


# -- exact solvers ---------------------------------------------------------

class TooLarge(WtapError):
    pass


class Infeasible(WtapError):
    pass


class NonUplinkPresent(WtapError):
    pass


class Uncoverable(WtapError):
    pass


# -- LP engine -------------------------------------------------------------

class Unbounded(WtapError):
    pass


# -- rounding --------------------------------------------------------------

class SupportViolation(WtapError):
    pass


class ZeroMassBase(WtapError):
    pass


class NotNested(WtapError):
    pass


class GammaOutOfRange(WtapError):
    pass


class NotApplicable(WtapError):
    pass


class NotAncestorClosed(WtapError):
    pass


# -- event enumeration -----------------------------------------------------

class CombinatorialBlowup(WtapError):
    pass


class EventExplosion(WtapError):
    pass


class NoSmallCover(WtapError):
    pass


class SubtreeExplosion(WtapError):
    pass


class InfeasibleLstar(WtapError):
    pass


# -- file formats ----------------------------------------------------------

class ParseError(WtapError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
