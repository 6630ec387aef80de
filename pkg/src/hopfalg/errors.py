"""Exception hierarchy and the shared verdict type."""
from dataclasses import dataclass, field


class HopfAlgError(Exception):
    pass


class PresentationMismatch(HopfAlgError):
    pass


class IllegalExponent(HopfAlgError):
    pass


class InfiniteBasis(HopfAlgError):
    pass


class DegreeError(HopfAlgError):
    pass


class IntegralityFailure(HopfAlgError):
    pass


class SolveFailure(HopfAlgError):
    pass


class NotFreeOverA(HopfAlgError):
    pass


class UnsupportedBaseMap(HopfAlgError):
    pass


class NotComposable(HopfAlgError):
    pass


class SearchBudgetExceeded(HopfAlgError):
    pass


class AxiomFailure(HopfAlgError):
    pass


class NotQuasiCoherent(HopfAlgError):
    pass


class NotACover(HopfAlgError):
    """The proposed family of ring maps is not faithfully flat: the unit of
    the would-be descent datum already fails to be injective."""


class NotAnEquivalence(HopfAlgError):
    pass


class ParseError(HopfAlgError):
    pass


@dataclass
class Verdict:
    """Pass/fail result carrying failure witnesses as human-readable strings."""

    ok: bool = True
    failures: list = field(default_factory=list)

    def fail(self, message):
        self.ok = False
        self.failures.append(message)

    def merge(self, other):
        if not other.ok:
            self.ok = False
            self.failures.extend(other.failures)

    def __bool__(self):
        return self.ok

    def summary(self):
        if self.ok:
            return "pass"
        return "FAIL: " + "; ".join(self.failures[:5])
