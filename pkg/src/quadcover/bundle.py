"""Vector bundles on an elliptic curve as formal sums of indecomposables.

An indecomposable of rank ``r`` and degree ``d`` with ``h = gcd(r, d)``,
``r' = r/h``, ``d' = d/h`` is written

    I(r, d; u) = E0(r', d') ⊗ F_h ⊗ L_u,

where ``E0(r', d')`` is the stable bundle with determinant ``O(d' y0)``,
``F_h`` is the unipotent bundle with a section, and ``L_u`` the degree-0
line with class ``u``. Twisting by an ``r'``-torsion point gives an
isomorphic bundle, so ``u`` is stored modulo ``r'``-torsion; consequently
``det I(r, d; u) = O(d y0) ⊗ L_u^r``.

Products are resolved exactly whenever the rule table applies:

* a factor with ``r' = 1`` is ``F_h`` times a line; ``F_a ⊗ F_b`` follows
  Clebsch–Gordan;
* ``E0(m, d1) ⊗ E0(m, d2)`` with ``m | d1 + d2`` is ``End E0(m, d1)`` twisted
  by a line, i.e. the sum of the ``m^2`` lines of ``J[m]`` (when the group
  carries the full ``m``-torsion).

Everything else degrades to a :class:`SlopeProfile` whose unresolved part
only keeps rank and degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, gcd
from typing import Union

from .picard import AbGroup, GroupElem, PicardClass, named_torsion, reduce_mod_torsion, two_torsion_points


@dataclass(frozen=True)
class Indecomposable:
    rank: int
    degree: int
    twist: GroupElem

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        object.__setattr__(self, "twist", reduce_mod_torsion(self.twist, self.rprime))

    @property
    def h(self) -> int:
        return gcd(self.rank, self.degree)

    @property
    def rprime(self) -> int:
        return self.rank // self.h

    @property
    def dprime(self) -> int:
        return self.degree // self.h

    @property
    def slope(self) -> Fraction:
        return Fraction(self.degree, self.rank)

    @property
    def group(self) -> AbGroup:
        return self.twist.group

    def is_line(self) -> bool:
        return self.rank == 1

    def is_unipotent_type(self) -> bool:
        """True for ``F_r ⊗ L``, i.e. when the rank divides the degree."""
        return self.rprime == 1

    def sort_key(self):
        return (-self.slope, self.rank, self.twist.key())

    def __str__(self) -> str:
        return format_indecomposable(self)


@dataclass(frozen=True)
class Opaque:
    """A semistable block whose decomposition is unknown."""

    rank: int
    degree: int

    @property
    def slope(self) -> Fraction:
        return Fraction(self.degree, self.rank)


@dataclass(frozen=True)
class Bundle:
    summands: tuple[Indecomposable, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(sorted(self.summands, key=Indecomposable.sort_key)))

    @property
    def rank(self) -> int:
        return sum(s.rank for s in self.summands)

    @property
    def degree(self) -> int:
        return sum(s.degree for s in self.summands)

    def __add__(self, other: Bundle) -> Bundle:
        return Bundle(self.summands + other.summands)

    def __len__(self) -> int:
        return len(self.summands)

    def __str__(self) -> str:
        if not self.summands:
            return "0"
        return " + ".join(format_indecomposable(s) for s in self.summands)


@dataclass(frozen=True)
class SlopePiece:
    slope: Fraction
    rank: int
    degree: int
    known: tuple[Indecomposable, ...] = ()
    unknown_rank: int = 0

    @property
    def resolved(self) -> bool:
        return self.unknown_rank == 0


@dataclass(frozen=True)
class SlopeProfile:
    """Harder–Narasimhan data: one semistable piece per slope, slopes decreasing."""

    pieces: tuple[SlopePiece, ...] = ()
    semistable: bool = field(default=False, compare=False)
    stable: bool = field(default=False, compare=False)

    @property
    def rank(self) -> int:
        return sum(p.rank for p in self.pieces)

    @property
    def degree(self) -> int:
        return sum(p.degree for p in self.pieces)

    def triples(self) -> list[tuple[Fraction, int, int]]:
        return [(p.slope, p.rank, p.degree) for p in self.pieces]

    @property
    def resolved(self) -> bool:
        return all(p.resolved for p in self.pieces)

    def __str__(self) -> str:
        return " > ".join(f"[{p.slope}: rank {p.rank}, deg {p.degree}]" for p in self.pieces) or "0"


BundleLike = Union[Bundle, SlopeProfile]
Item = Union[Indecomposable, Opaque]


# ---------------------------------------------------------------- constructors


def line(degree: int, twist: GroupElem) -> Indecomposable:
    return Indecomposable(1, degree, twist)


def unipotent(r: int, group: AbGroup) -> Indecomposable:
    """``F_r``."""
    return Indecomposable(r, 0, group.zero())


def bundle(*items: Indecomposable | Bundle) -> Bundle:
    out: list[Indecomposable] = []
    for x in items:
        out.extend(x.summands if isinstance(x, Bundle) else (x,))
    return Bundle(tuple(out))


def canonical_form(b: Bundle) -> Bundle:
    # twists are reduced on construction; rebuilding re-sorts the summands
    return Bundle(tuple(Indecomposable(s.rank, s.degree, s.twist) for s in b.summands))


# ---------------------------------------------------------------- formatting


def format_twist(u: GroupElem) -> str:
    g = u.group
    parts = []
    for name, k in zip(g.free_names, u.free):
        if k:
            parts.append(name if k == 1 else f"{name}^{k}")
    tors = list(u.torsion)
    named = named_torsion(g)
    twos = [i for i, n in enumerate(g.torsion_orders) if n == 2][:2]
    if len(twos) == 2:
        pair = (tors[twos[0]], tors[twos[1]])
        label = {(1, 0): "eta1", (0, 1): "eta2", (1, 1): "eta3"}.get(pair)
        if label:
            parts.append(label)
        tors[twos[0]] = tors[twos[1]] = 0
    if "tau" in named:
        i = named["tau"].torsion.index(1)
        if tors[i]:
            parts.append("tau" if tors[i] == 1 else f"tau^{tors[i]}")
        tors[i] = 0
    for i, k in enumerate(tors):
        if k:
            parts.append(f"t{i + 1}" if k == 1 else f"t{i + 1}^{k}")
    return " ".join(parts)


def _line_str(degree: int, twist: GroupElem) -> str:
    tw = format_twist(twist)
    return f"L({degree}; {tw})" if tw else f"L({degree})"


def format_indecomposable(s: Indecomposable) -> str:
    if s.degree == 0 and s.twist.is_zero():
        return f"F({s.rank})"
    if s.rank == 1:
        return _line_str(s.degree, s.twist)
    if s.rprime == 1:
        return f"F({s.rank})*{_line_str(s.degree // s.rank, s.twist)}"
    tw = format_twist(s.twist)
    return f"I({s.rank}, {s.degree}; {tw})" if tw else f"I({s.rank}, {s.degree})"


def format_class(c: PicardClass) -> str:
    return _line_str(c.degree, c.cls)


# ---------------------------------------------------------------- rule table


def clebsch_gordan(a: int, b: int) -> list[int]:
    """Ranks in ``F_a ⊗ F_b``."""
    return [a + b - 1 - 2 * i for i in range(min(a, b))]


def sym2_unipotent(h: int) -> list[int]:
    return [2 * h - 1 - 4 * i for i in range((h - 1) // 2 + 1)]


def wedge2_unipotent(h: int) -> list[int]:
    return [2 * h - 3 - 4 * i for i in range(h // 2)] if h >= 2 else []


def _stable_times_unipotent(rp: int, dp: int, hs: list[int], twist: GroupElem) -> list[Indecomposable]:
    """``E0(rp, dp) ⊗ (⊕ F_j for j in hs) ⊗ L_twist``."""
    return [Indecomposable(rp * j, dp * j, twist) for j in hs]


def _tensor_indec(x: Indecomposable, y: Indecomposable) -> list[Item]:
    if x.group != y.group:
        raise ValueError("bundles live over different Picard models")
    if x.rprime != 1 and y.rprime == 1:
        x, y = y, x
    u = x.twist + y.twist
    hs = clebsch_gordan(x.h, y.h)
    if x.rprime == 1:
        # x = F_h ⊗ O(a y0) ⊗ L_u; E0(r', d') ⊗ O(a y0) = E0(r', d' + a r')
        a = x.dprime
        return _stable_times_unipotent(y.rprime, y.dprime + a * y.rprime, hs, u)
    m = x.rprime
    if y.rprime == m and (x.dprime + y.dprime) % m == 0 and x.group.has_full_torsion(m):
        k = (x.dprime + y.dprime) // m
        return [Indecomposable(j, k * j, u + t) for t in x.group.torsion_points(m) for j in hs]
    return [Opaque(x.rank * y.rank, x.rank * y.degree + y.rank * x.degree)]


def _items(b: BundleLike) -> list[Item]:
    if isinstance(b, Bundle):
        return list(b.summands)
    out: list[Item] = []
    for p in b.pieces:
        out.extend(p.known)
        if p.unknown_rank:
            known_deg = sum(s.degree for s in p.known)
            out.append(Opaque(p.unknown_rank, p.degree - known_deg))
    return out


def _assemble(items: list[Item]) -> BundleLike:
    if all(isinstance(i, Indecomposable) for i in items):
        return Bundle(tuple(items))
    return _profile(items)


def _profile(items: list[Item]) -> SlopeProfile:
    by_slope: dict[Fraction, list[Item]] = {}
    for it in items:
        if it.rank:
            by_slope.setdefault(it.slope, []).append(it)
    pieces = []
    for mu in sorted(by_slope, reverse=True):
        group = by_slope[mu]
        known = tuple(sorted((i for i in group if isinstance(i, Indecomposable)), key=Indecomposable.sort_key))
        unknown = sum(i.rank for i in group if isinstance(i, Opaque))
        pieces.append(
            SlopePiece(mu, sum(i.rank for i in group), sum(i.degree for i in group), known, unknown)
        )
    single = len(pieces) == 1
    stable = (
        single
        and pieces[0].resolved
        and len(pieces[0].known) == 1
        and pieces[0].known[0].h == 1
    )
    return SlopeProfile(tuple(pieces), semistable=single, stable=stable)


def _tensor_items(xs: list[Item], ys: list[Item]) -> list[Item]:
    out: list[Item] = []
    for x in xs:
        for y in ys:
            if isinstance(x, Opaque) or isinstance(y, Opaque):
                out.append(Opaque(x.rank * y.rank, x.rank * y.degree + y.rank * x.degree))
            else:
                out.extend(_tensor_indec(x, y))
    return out


def tensor(a: BundleLike, b: BundleLike) -> BundleLike:
    return _assemble(_tensor_items(_items(a), _items(b)))


def dual_item(x: Item) -> Item:
    if isinstance(x, Opaque):
        return Opaque(x.rank, -x.degree)
    return Indecomposable(x.rank, -x.degree, -x.twist)


def dual(b: BundleLike) -> BundleLike:
    return _assemble([dual_item(x) for x in _items(b)])


def det(b: Bundle) -> PicardClass:
    if not b.summands:
        raise ValueError("determinant of the zero bundle needs a group")
    g = b.summands[0].group
    cls = g.zero()
    for s in b.summands:
        cls = cls + s.twist * s.rank
    return PicardClass(b.degree, cls)


def det_line(b: Bundle) -> Indecomposable:
    c = det(b)
    return line(c.degree, c.cls)


def _sym2_indec(x: Indecomposable) -> list[Item]:
    two_u = x.twist * 2
    if x.rprime == 1:
        a = x.dprime
        return [Indecomposable(j, 2 * a * j, two_u) for j in sym2_unipotent(x.h)]
    if x.rprime == 2 and x.group.has_full_torsion(2):
        # S^2 E0(2, d') = ∧^2 E0 ⊗ (η1 ⊕ η2 ⊕ η3), ∧^2 E0(2, d') = O(d' y0)
        dp = x.dprime
        sym_part = [line(dp, t) for t in two_torsion_points(x.group)]
        out: list[Item] = []
        # S^2(A ⊗ F_h) = S^2 A ⊗ S^2 F_h ⊕ ∧^2 A ⊗ ∧^2 F_h
        for ell in sym_part:
            out.extend(Indecomposable(j, dp * j, ell.twist + two_u) for j in sym2_unipotent(x.h))
        out.extend(Indecomposable(j, dp * j, two_u) for j in wedge2_unipotent(x.h))
        return out
    r, d = x.rank, x.degree
    return [Opaque(r * (r + 1) // 2, (r + 1) * d)]


def _wedge2_indec(x: Indecomposable) -> list[Item]:
    two_u = x.twist * 2
    if x.rprime == 1:
        a = x.dprime
        return [Indecomposable(j, 2 * a * j, two_u) for j in wedge2_unipotent(x.h)]
    if x.rank == 3:
        # ∧^2 E = E* ⊗ det E in rank 3
        dl = det_line(Bundle((x,)))
        return _tensor_indec(Indecomposable(3, -x.degree, -x.twist), dl)
    if x.rprime == 2 and x.group.has_full_torsion(2):
        # ∧^2(A ⊗ F_h) = S^2 A ⊗ ∧^2 F_h ⊕ ∧^2 A ⊗ S^2 F_h
        dp = x.dprime
        out: list[Item] = []
        for t in two_torsion_points(x.group):
            out.extend(Indecomposable(j, dp * j, t + two_u) for j in wedge2_unipotent(x.h))
        out.extend(Indecomposable(j, dp * j, two_u) for j in sym2_unipotent(x.h))
        return out
    r, d = x.rank, x.degree
    return [Opaque(r * (r - 1) // 2, (r - 1) * d)] if r > 1 else []


def _sym2_item(x: Item) -> list[Item]:
    if isinstance(x, Opaque):
        return [Opaque(x.rank * (x.rank + 1) // 2, (x.rank + 1) * x.degree)]
    return _sym2_indec(x)


def _wedge2_item(x: Item) -> list[Item]:
    if isinstance(x, Opaque):
        return [Opaque(x.rank * (x.rank - 1) // 2, (x.rank - 1) * x.degree)] if x.rank > 1 else []
    return _wedge2_indec(x)


def sym2(b: BundleLike) -> BundleLike:
    xs = _items(b)
    out: list[Item] = []
    for i, x in enumerate(xs):
        out.extend(_sym2_item(x))
        out.extend(_tensor_items([x], xs[i + 1:]))
    return _assemble(out)


def wedge2(b: BundleLike) -> BundleLike:
    xs = _items(b)
    out: list[Item] = []
    for i, x in enumerate(xs):
        out.extend(_wedge2_item(x))
        out.extend(_tensor_items([x], xs[i + 1:]))
    return _assemble(out)


def end_bundle(b: BundleLike) -> BundleLike:
    return tensor(b, dual(b))


def even_power_exponents(k: int) -> tuple[int, int]:
    """``(a_k, b_k) = (2k + 1 - 3⌈k/2⌉, ⌈k/2⌉)``."""
    c = ceil(k / 2)
    return 2 * k + 1 - 3 * c, c


def sym_n_rank2(b: Bundle, n: int) -> Bundle:
    """``S^n E`` for an indecomposable ``E`` of rank 2."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if len(b.summands) != 1 or b.summands[0].rank != 2:
        raise ValueError("sym_n_rank2 needs an indecomposable bundle of rank 2")
    e = b.summands[0]
    g = e.group
    if n == 0:
        return Bundle((line(0, g.zero()),))
    if e.rprime == 1:
        # S^n(F_2 ⊗ L) = F_{n+1} ⊗ L^n
        a = e.degree // 2
        return Bundle((Indecomposable(n + 1, (n + 1) * n * a, e.twist * n),))
    w = det_line(b)
    if n % 2 == 1:
        k = (n + 1) // 2
        wk = Bundle((line(w.degree * (k - 1), w.twist * (k - 1)),))
        return tensor(wk, Bundle((e,) * k))
    k = n // 2
    ak, bk = even_power_exponents(k)
    inner = [line(0, g.zero())] * ak + [line(0, t) for t in two_torsion_points(g)] * bk
    wk = Bundle((line(w.degree * k, w.twist * k),))
    return tensor(wk, Bundle(tuple(inner)))


def stability_profile(b: BundleLike) -> SlopeProfile:
    return _profile(_items(b))


def slope(b: BundleLike) -> Fraction:
    return Fraction(b.degree, b.rank)


def direct_sum(a: BundleLike, b: BundleLike) -> BundleLike:
    return _assemble(_items(a) + _items(b))


def as_profile(b: BundleLike) -> SlopeProfile:
    return b if isinstance(b, SlopeProfile) else _profile(list(b.summands))
