"""Exception hierarchy. Every error raised by the package derives from WormError."""


class WormError(Exception):
    pass


class BetaOutOfRange(WormError, ValueError):
    pass


class NotInterior(WormError, ValueError):
    pass


class ParamOutOfRange(WormError, ValueError):
    pass


class EpsOutOfRange(ParamOutOfRange):
    pass


class POutOfRange(ParamOutOfRange):
    pass


class GridMismatch(WormError, ValueError):
    pass


class ModeOutOfGrid(WormError, IndexError):
    pass


class SymbolOverflow(WormError, FloatingPointError):
    pass


class NonFinite(WormError, FloatingPointError):
    pass


class QuadratureNoConvergence(WormError, RuntimeError):
    pass


class DecayGuardViolated(WormError, ValueError):
    pass


class TailNotDecayed(WormError, ValueError):
    pass


class PWConditionViolated(WormError, ValueError):
    pass


class WeightDivergence(WormError, ValueError):
    pass


class BoxNotCompact(WormError, ValueError):
    pass


class TruncationBudgetExceeded(WormError, RuntimeError):
    pass
