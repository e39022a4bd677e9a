"""Exception hierarchy shared by every module."""


class GjpoError(Exception):
    """Base class for all library errors."""


class DimensionError(GjpoError, ValueError):
    """A function and a state (or two objects) disagree on the register order."""


class ParseError(GjpoError, ValueError):
    pass


class OrderLimitError(GjpoError):
    """Requested order exceeds the configured maximum (2^n tables would be too large)."""


class FamilyParameterError(GjpoError, ValueError):
    pass


class NonStandardFunction(GjpoError, ValueError):
    """The feedback function depends on its first variable."""


class NonsingularRequired(GjpoError, ValueError):
    pass


class LeafInitialState(GjpoError, ValueError):
    """The initial state has no predecessor; the greedy run would never return to it."""


class NonPeriodicRun(GjpoError):
    """A run exceeded its step bound without revisiting the initial state."""


class ComplexityTooLow(GjpoError, ValueError):
    pass


class InitialStateOffRootCycle(GjpoError, ValueError):
    pass


class InvalidTree(GjpoError, ValueError):
    pass


class NoRootedTrees(GjpoError):
    """The preference adjacency graph has no rooted spanning tree."""
