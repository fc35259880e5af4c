"""Exception hierarchy shared by the solver modules."""


class PMPDError(Exception):
    """Base class for every error raised by this package."""


# -- instance -----------------------------------------------------------------


class InstanceError(PMPDError, ValueError):
    pass


class TooFewNodes(InstanceError):
    pass


class DuplicatePoint(InstanceError):
    pass


class AsymmetricMatrix(InstanceError):
    pass


class NegativeEntry(InstanceError):
    pass


class TriangleViolation(InstanceError):
    """``time[a][c] > time[a][b] + time[b][c]`` for the reported triple."""

    def __init__(self, a: int, b: int, c: int, excess: float):
        self.triple = (a, b, c)
        self.excess = excess
        super().__init__(
            f"triangle inequality violated: time[{a}][{c}] exceeds "
            f"time[{a}][{b}] + time[{b}][{c}] by {excess:.6g}"
        )


# -- walks --------------------------------------------------------------------


class WalkError(PMPDError, ValueError):
    pass


class InvalidWalk(WalkError):
    def __init__(self, violations):
        self.violations = list(violations)
        msg = "; ".join(str(v) for v in self.violations) or "invalid walk"
        super().__init__(msg)


class PivotAbsent(WalkError):
    pass


class TerminusMismatch(WalkError):
    pass


class TargetAbsent(WalkError):
    pass


class InfeasibleShortcut(WalkError):
    """Raised with ``reason`` in {"CoverageLoss", "AdjacentDuplicate", "DepotRequired"}."""

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        super().__init__(f"{reason}: {detail}" if detail else reason)


class InfeasibleInsertion(WalkError):
    """Raised with ``reason`` in {"AdjacentDuplicate", "DepotPresent"}."""

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        super().__init__(f"{reason}: {detail}" if detail else reason)


# -- solvers ------------------------------------------------------------------


class SolverError(PMPDError):
    pass


class BudgetExhausted(SolverError):
    def __init__(self, message: str, best=None):
        self.best = best
        super().__init__(message)


class OutOfRange(SolverError, ValueError):
    pass


class TooLarge(SolverError, ValueError):
    pass


class KTooSmall(SolverError, ValueError):
    pass


class KTooSmallForPlan(SolverError, ValueError):
    pass


class UncertifiedSeeds(SolverError):
    pass


class H1Unavailable(SolverError):
    pass


class NotApplicable(SolverError):
    pass


class NoPivot(SolverError):
    pass
