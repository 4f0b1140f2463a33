"""Exception types shared across the package.

Every error that callers are expected to catch derives from ScobasisError.
Errors that carry a combinatorial certificate (a violating vertex set, an
achievable range, a loop count) store it on the instance so the CLI can
serialize it.
"""

from __future__ import annotations


class ScobasisError(Exception):
    """Base class for all package errors."""


class EmptyRemainder(ScobasisError):
    """Removing the given vertex set leaves nothing behind."""


class NotADicut(ScobasisError):
    """The given arc set or shore is not a directed cut."""


class TrivialDicut(ScobasisError):
    """Operation needs a nontrivial dicut but got a single-vertex shore."""


class FamilyCrossing(ScobasisError):
    """A family member crosses the shore being contracted.

    Run the uncrossing pass first; contraction distributes members only
    when the family is cross-free relative to the shore.
    """


class NonDicutMember(ScobasisError):
    """A cut family member does not induce a dicut."""


class Infeasible(ScobasisError):
    """The instance has no solution. Carries a violator when known."""

    def __init__(self, message: str, violator=None):
        super().__init__(message)
        self.violator = violator


class OutOfRange(ScobasisError):
    """Requested crossing value is not achievable.

    Stores the request and the achievable closed interval [lo, hi].
    """

    def __init__(self, requested: int, lo: int, hi: int):
        super().__init__(
            f"crossing {requested} not achievable; range is [{lo}, {hi}]"
        )
        self.requested = requested
        self.lo = lo
        self.hi = hi


class EmptyConstrainedLattice(ScobasisError):
    """No solutions satisfy the constraints, so there is nothing to span."""


class NotCovered(ScobasisError):
    """Some arc lies in no solution; the instance is not covered.

    Carries the Hall-type violator certifying this.
    """

    def __init__(self, message: str, violator=None):
        super().__init__(message)
        self.violator = violator


class CrossingNotOne(ScobasisError):
    """Splitting requires the solution to cross the dicut exactly once."""


class MismatchedCrossing(ScobasisError):
    """The two pieces disagree on the crossing arc and cannot be composed."""


class GlueVerificationFailed(ScobasisError):
    """A glued basis failed its internal completeness check."""


class NotElementary(ScobasisError):
    """Digraft is not elementary (needs all sources but one tight, covered)."""


class NotRobust(ScobasisError):
    """Digraft is not robust. Carries the witnessing edge cover when known."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class Imbalanced(ScobasisError):
    """Source and sink counts are equal; this routine needs |S| < |T|."""


class LoopBoundExceeded(ScobasisError):
    """A descent loop ran past its proven iteration bound."""


class ChainBoundExceeded(ScobasisError):
    """A dicut chain ran past its proven length bound."""


class NotBrick(ScobasisError):
    """Digraft is not a brick (basic with |S| < |T|)."""


class BadCrossing(ScobasisError):
    """Solution crosses the dicut a different number of times than required."""


class NotTwoEdgeConnected(ScobasisError):
    """Underlying graph has a bridge or is disconnected."""


class GcdConditionFailed(ScobasisError):
    """The family's slack values have gcd != 1, so no integral basis exists."""


class TooLarge(ScobasisError):
    """Instance exceeds the enumeration cap for brute-force routines."""
