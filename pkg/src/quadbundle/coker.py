"""Classification of the cokernel sheaf of a graded symmetric matrix by h^0 counts."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Sequence

from .gradedform import GradedSymMatrix, SmoothStatus, discriminant, smoothness


class CokerKind(str, Enum):
    TRIVIAL_TWIST = "TrivialTwist"
    HALF_PERIOD = "HalfPeriod"
    EVEN_THETA = "EvenTheta"
    ODD_THETA = "OddTheta"
    UNDETERMINED = "Undetermined"


def h0_line(b: int) -> int:
    """h^0(O(b)) on P^2."""
    return (b + 2) * (b + 1) // 2 if b >= 0 else 0


def h0_split(degrees: Sequence[int], shift: int = 0) -> int:
    return sum(h0_line(b + shift) for b in degrees)


def h0_twist(q: GradedSymMatrix, t: int) -> int:
    """h^0 of the cokernel twisted by O(t).

    Split bundles on P^2 have no H^1 and the induced map on sections is
    injective when det is nonzero, so the count is a difference of two sums.
    """
    if q.degrees is None:
        raise ValueError("h0 needs a graded presentation")
    dual = [-a + q.twist for a in q.degrees]
    return h0_split(dual, t) - h0_split(q.degrees, t)


@dataclass(frozen=True)
class CokernelProfile:
    c: int | None
    twist: int | None
    kind: CokerKind
    h0_table: dict[int, int] = dc_field(default_factory=dict)
    normalization: int | None = None
    diagnostic: str = ""

    def h0_at_normalization(self) -> int | None:
        if self.normalization is None:
            return None
        return self.h0_table.get(self.normalization)

    def to_json(self) -> dict:
        return {
            "c": self.c,
            "twist": self.twist,
            "kind": self.kind.value,
            "normalization": self.normalization,
            "h0_table": {str(t): v for t, v in sorted(self.h0_table.items())},
            "diagnostic": self.diagnostic,
        }


def _window(q: GradedSymMatrix, center: int) -> dict[int, int]:
    return {t: h0_twist(q, t) for t in range(center - 2, center + 3)}


def classify(q: GradedSymMatrix, *, require_smooth: bool = False, seed: int = 0) -> CokernelProfile:
    """Place the cokernel in the half-period or theta family.

    The convention is C^2 = O_C(c + delta) for the cokernel C of q: G -> G^v(delta).
    Even delta: eta = C(-(c + delta)/2) is 2-torsion, trivial iff it has a section.
    Odd delta: theta = C(-(delta + 3)/2) squares to O_C(c - 3), the canonical bundle,
    and its parity is the parity of h^0(theta).
    """
    if q.degrees is None:
        return CokernelProfile(None, None, CokerKind.UNDETERMINED,
                               diagnostic="chart-level model without a grading")
    curve = discriminant(q)
    c = curve.degree
    delta = q.twist
    if require_smooth:
        verdict = smoothness(curve, seed=seed).smooth
        if verdict.status != SmoothStatus.PROVEN:
            return CokernelProfile(c, delta, CokerKind.UNDETERMINED,
                                   diagnostic=f"discriminant smoothness {verdict.status.value}")
    if delta % 2 == 0:
        if (c + delta) % 2:
            return CokernelProfile(c, delta, CokerKind.UNDETERMINED,
                                   diagnostic="c + delta is odd; no integral normalization")
        t_star = -(c + delta) // 2
        table = _window(q, t_star)
        h = table[t_star]
        if h == 0:
            kind = CokerKind.HALF_PERIOD
        elif h == 1:
            kind = CokerKind.TRIVIAL_TWIST
        else:
            kind = CokerKind.UNDETERMINED
        diag = "" if kind != CokerKind.UNDETERMINED else f"h0(eta) = {h} > 1"
        return CokernelProfile(c, delta, kind, table, t_star, diag)
    t_star = -(delta + 3) // 2
    table = _window(q, t_star)
    h = table[t_star]
    kind = CokerKind.EVEN_THETA if h % 2 == 0 else CokerKind.ODD_THETA
    return CokernelProfile(c, delta, kind, table, t_star)


def profiles_equal(p1: CokernelProfile, p2: CokernelProfile) -> bool:
    """Same kind, same degree and matching h^0 values on the overlapping window."""
    if p1.kind != p2.kind or p1.c != p2.c:
        return False
    if p1.normalization is None or p2.normalization is None:
        return p1.normalization == p2.normalization
    # align both tables at their normalizations
    off1 = {t - p1.normalization: v for t, v in p1.h0_table.items()}
    off2 = {t - p2.normalization: v for t, v in p2.h0_table.items()}
    common = set(off1) & set(off2)
    return bool(common) and all(off1[k] == off2[k] for k in common)
