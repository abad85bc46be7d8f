"""h^0, h^1 and Euler characteristic on an elliptic curve.

On a genus-1 curve the canonical bundle is trivial, so Riemann–Roch reads
``chi = deg`` and Serre duality ``h^1(V) = h^0(V*)``. A semistable piece of
positive slope has no h^1, one of negative slope no h^0, and at slope 0 only
the summands ``F_r`` (trivial twist) carry a section, exactly one each.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .bundle import BundleLike, as_profile


@dataclass(frozen=True)
class CohomologyReport:
    h0: int
    h1: int
    chi: int
    resolved: bool = True


def chi(b: BundleLike) -> int:
    return b.degree


def _count_sections_at_slope_zero(summands) -> int:
    return sum(1 for s in summands if s.degree == 0 and s.twist.is_zero())


def h0h1(b: BundleLike) -> CohomologyReport:
    h0 = h1 = 0
    resolved = True
    for p in as_profile(b).pieces:
        if p.slope > 0:
            h0 += p.degree
        elif p.slope < 0:
            h1 -= p.degree
        elif p.resolved:
            k = _count_sections_at_slope_zero(p.known)
            h0 += k
            h1 += k
        else:
            resolved = False
    return CohomologyReport(h0, h1, b.degree, resolved)


def h0(b: BundleLike) -> int:
    rep = h0h1(b)
    if not rep.resolved:
        raise ValueError("h0 depends on an undecomposed slope-0 piece")
    return rep.h0


def h0_end_indec(r: int, d: int) -> int:
    """h^0(End E) = h^1(End E) for an indecomposable of rank r and degree d."""
    if r < 1:
        raise ValueError("rank must be >= 1")
    return gcd(r, d)


def is_globally_generated(b: BundleLike) -> bool | None:
    """Sufficient test: True if every HN slope exceeds 1, False if some slope is
    at most 0, ``None`` when a slope lies in ``(0, 1]``."""
    slopes = [p.slope for p in as_profile(b).pieces]
    if not slopes:
        return True
    if min(slopes) <= 0:
        return False
    if min(slopes) > 1:
        return True
    return None

