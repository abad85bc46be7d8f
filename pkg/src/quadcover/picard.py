"""Finitely generated stand-in for Pic(Y) = Z ⊕ Pic⁰(Y) of an elliptic curve.

Pic⁰ is modelled by ``Z^k ⊕ Z/n_1 ⊕ ... ⊕ Z/n_t``: free generators stand for
generic points of the Jacobian, the cyclic factors for declared torsion.
The default group carries the full 2-torsion ``(Z/2)^2`` (the three
nontrivial points ``eta1, eta2, eta3``) and one point ``tau`` of order 3.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import gcd


class GroupMismatch(ValueError):
    pass


@dataclass(frozen=True)
class AbGroup:
    free_rank: int = 0
    torsion_orders: tuple[int, ...] = ()
    free_names: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free_rank must be non-negative")
        if any(n < 2 for n in self.torsion_orders):
            raise ValueError("torsion orders must be >= 2")
        object.__setattr__(self, "torsion_orders", tuple(self.torsion_orders))
        names = tuple(self.free_names) or tuple(f"g{i + 1}" for i in range(self.free_rank))
        if len(names) != self.free_rank:
            raise ValueError("need one name per free generator")
        object.__setattr__(self, "free_names", names)

    def zero(self) -> GroupElem:
        return GroupElem(self, (0,) * self.free_rank, (0,) * len(self.torsion_orders))

    def elem(self, free=(), torsion=()) -> GroupElem:
        free = tuple(free) + (0,) * (self.free_rank - len(tuple(free)))
        torsion = tuple(torsion) + (0,) * (len(self.torsion_orders) - len(tuple(torsion)))
        return GroupElem(self, free, torsion)

    def generator(self, i: int) -> GroupElem:
        return self.elem(tuple(int(k == i) for k in range(self.free_rank)))

    def torsion_generator(self, i: int) -> GroupElem:
        return self.elem((), tuple(int(k == i) for k in range(len(self.torsion_orders))))

    def torsion_points(self, m: int) -> list[GroupElem]:
        """All ``x`` with ``m x = 0``, in lexicographic order."""
        steps = [n // gcd(n, m) for n in self.torsion_orders]
        ranges = [range(0, n, s) for n, s in zip(self.torsion_orders, steps)]
        return [self.elem((), t) for t in product(*ranges)]

    def has_full_torsion(self, m: int) -> bool:
        """True when the m-torsion subgroup has the order m^2 of J[m]."""
        return len(self.torsion_points(m)) == m * m

    def with_free(self, names: tuple[str, ...]) -> AbGroup:
        return AbGroup(len(names), self.torsion_orders, names)


@dataclass(frozen=True)
class GroupElem:
    group: AbGroup
    free: tuple[int, ...]
    torsion: tuple[int, ...]

    def __post_init__(self):
        g = self.group
        if len(self.free) != g.free_rank or len(self.torsion) != len(g.torsion_orders):
            raise ValueError("element shape does not match its group")
        reduced = tuple(t % n for t, n in zip(self.torsion, g.torsion_orders))
        object.__setattr__(self, "free", tuple(int(x) for x in self.free))
        object.__setattr__(self, "torsion", reduced)

    def _check(self, other: GroupElem) -> None:
        if not isinstance(other, GroupElem) or other.group != self.group:
            raise GroupMismatch("elements belong to different groups")

    def __add__(self, other: GroupElem) -> GroupElem:
        self._check(other)
        return GroupElem(
            self.group,
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple(a + b for a, b in zip(self.torsion, other.torsion)),
        )

    def __neg__(self) -> GroupElem:
        return GroupElem(self.group, tuple(-a for a in self.free), tuple(-a for a in self.torsion))

    def __sub__(self, other: GroupElem) -> GroupElem:
        return self + (-other)

    def __mul__(self, k: int) -> GroupElem:
        return GroupElem(self.group, tuple(k * a for a in self.free), tuple(k * a for a in self.torsion))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.free) and not any(self.torsion)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def key(self) -> tuple:
        return self.free + self.torsion

    def __lt__(self, other: GroupElem) -> bool:
        return self.key() < other.key()


def group_arith(op: str, a: GroupElem, b: GroupElem | None = None, k: int | None = None) -> GroupElem:
    if op == "add":
        return a + b
    if op == "neg":
        return -a
    if op == "scale":
        return a * k
    raise ValueError(f"unknown group operation {op!r}")


def order_divides(x: GroupElem, m: int) -> bool:
    if m < 1:
        raise ValueError("m must be >= 1")
    return (x * m).is_zero()


def reduce_mod_torsion(x: GroupElem, m: int) -> GroupElem:
    """Least representative of ``x`` modulo the m-torsion subgroup.

    The m-torsion of ``Z/n`` is generated by ``n / gcd(n, m)``, so the coset
    minimum is taken componentwise; the free part is untouched.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    g = x.group
    tors = tuple(t % (n // gcd(n, m)) for t, n in zip(x.torsion, g.torsion_orders))
    return GroupElem(g, x.free, tors)


@dataclass(frozen=True, order=True)
class PicardClass:
    degree: int
    cls: GroupElem

    def __add__(self, other: PicardClass) -> PicardClass:
        return PicardClass(self.degree + other.degree, self.cls + other.cls)

    def __neg__(self) -> PicardClass:
        return PicardClass(-self.degree, -self.cls)

    def __sub__(self, other: PicardClass) -> PicardClass:
        return self + (-other)

    def __mul__(self, k: int) -> PicardClass:
        return PicardClass(k * self.degree, self.cls * k)

    __rmul__ = __mul__


DEFAULT_TORSION = (2, 2, 3)


def default_group(free_names: tuple[str, ...] = ()) -> AbGroup:
    return AbGroup(len(free_names), DEFAULT_TORSION, tuple(free_names))


def named_torsion(group: AbGroup) -> dict[str, GroupElem]:
    """``eta1, eta2, eta3`` (order 2) and ``tau`` (order 3) when present.

    The first two factors of order 2 carry the Klein group; the first factor
    of order 3 carries ``tau``.
    """
    out: dict[str, GroupElem] = {}
    twos = [i for i, n in enumerate(group.torsion_orders) if n == 2]
    threes = [i for i, n in enumerate(group.torsion_orders) if n == 3]
    if len(twos) >= 2:
        e1 = group.torsion_generator(twos[0])
        e2 = group.torsion_generator(twos[1])
        out.update(eta1=e1, eta2=e2, eta3=e1 + e2)
    if threes:
        out["tau"] = group.torsion_generator(threes[0])
    return out


def two_torsion_points(group: AbGroup) -> list[GroupElem]:
    """The three nontrivial 2-torsion points ``L1, L2, L3``."""
    named = named_torsion(group)
    if "eta1" not in named:
        raise ValueError("group does not contain the full 2-torsion")
    return [named["eta1"], named["eta2"], named["eta3"]]
