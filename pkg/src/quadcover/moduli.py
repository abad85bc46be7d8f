"""Decomposition types of pairs (E, F) and their moduli count.

A :class:`PairType` fixes the shapes of ``E`` (rank 3) and ``F`` (rank 2),
the degrees of the summands, which equal-type summands are isomorphic, and a
finite set of relations among the twist parameters. Each isomorphism class
of summand gets one free generator; the relations together with
``det E = det F`` span a subgroup ``R`` and a degree-0 line is trivial for the
generic member of the type exactly when its class lies in ``R``.

The count of moduli of covers is

    moduli(E, F) + h0(F^ ⊗ S^2 E) - h0(End E) - h0(End F) + 1,

with ``moduli(E, F)`` the free rank of the parameter group modulo ``R``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from . import lattice
from .bundle import (
    Bundle,
    BundleLike,
    Indecomposable,
    as_profile,
    dual,
    format_twist,
    sym2,
    tensor,
)
from .picard import AbGroup, GroupElem

MODULI_TORSION = (2, 2, 3, 3)

STATUSES = (
    "accepted",
    "insufficient-moduli",
    "excluded-reducible",
    "excluded-through-double-cover",
    "excluded-no-monomorphism",
    "unresolved",
)


class InconsistentRelations(ValueError):
    pass


class UnresolvedType(ValueError):
    pass


@dataclass(frozen=True)
class PairType:
    """``E_shape``/``F_shape`` are ``(rank, degree)`` tuples; ``E_iso``/``F_iso``
    label isomorphism classes (equal labels need equal rank and degree).
    ``relations`` are integer vectors over the free generators followed by
    the torsion coordinates of :data:`MODULI_TORSION`, each asserted to be 0."""

    e: int
    E_shape: tuple[tuple[int, int], ...]
    F_shape: tuple[tuple[int, int], ...]
    E_iso: tuple[int, ...] = ()
    F_iso: tuple[int, ...] = ()
    relations: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "E_shape", tuple(tuple(x) for x in self.E_shape))
        object.__setattr__(self, "F_shape", tuple(tuple(x) for x in self.F_shape))
        if not self.E_iso:
            object.__setattr__(self, "E_iso", tuple(range(len(self.E_shape))))
        if not self.F_iso:
            object.__setattr__(self, "F_iso", tuple(range(len(self.F_shape))))
        object.__setattr__(self, "E_iso", _normalise_labels(self.E_iso))
        object.__setattr__(self, "F_iso", _normalise_labels(self.F_iso))
        object.__setattr__(self, "relations", tuple(tuple(r) for r in self.relations))
        self.validate()

    @property
    def n(self) -> int:
        return 2 * self.e

    def validate(self) -> None:
        if self.e < 1:
            raise ValueError("e must be >= 1")
        if sum(r for r, _ in self.E_shape) != 3 or sum(r for r, _ in self.F_shape) != 2:
            raise ValueError("E must have rank 3 and F rank 2")
        if any(r < 1 for r, _ in self.E_shape + self.F_shape):
            raise ValueError("summand ranks must be positive")
        if sum(d for _, d in self.E_shape) != self.e or sum(d for _, d in self.F_shape) != self.e:
            raise ValueError("E and F must both have degree e")
        for shape, iso in ((self.E_shape, self.E_iso), (self.F_shape, self.F_iso)):
            if len(iso) != len(shape):
                raise ValueError("one iso label per summand")
            for i, j in combinations(range(len(shape)), 2):
                if iso[i] == iso[j] and shape[i] != shape[j]:
                    raise ValueError("isomorphic summands need equal rank and degree")
        width = self.free_rank + len(MODULI_TORSION)
        if any(len(r) != width for r in self.relations):
            raise ValueError(f"relations must have length {width}")

    @property
    def free_rank(self) -> int:
        return len(set(self.E_iso)) + len(set(self.F_iso))

    def group(self) -> AbGroup:
        names = tuple(f"e{k + 1}" for k in range(len(set(self.E_iso)))) + tuple(
            f"f{k + 1}" for k in range(len(set(self.F_iso)))
        )
        return AbGroup(len(names), MODULI_TORSION, names)

    def with_relations(self, relations: Iterable[tuple[int, ...]]) -> PairType:
        return PairType(self.e, self.E_shape, self.F_shape, self.E_iso, self.F_iso, tuple(relations))


def _normalise_labels(labels: tuple[int, ...]) -> tuple[int, ...]:
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(x, len(seen)) for x in labels)


@dataclass(frozen=True)
class Verdict:
    status: str
    moduli_of_pair: int
    h0_FS2E: int
    h0_EndE: int
    h0_EndF: int
    covering_moduli: int
    case_tag: str
    rule: str = ""


# ---------------------------------------------------------------- the symbolic model


def elem_vector(x: GroupElem) -> list[int]:
    return list(x.free) + list(x.torsion)


@dataclass
class _Model:
    """Everything about a type that does not depend on the relations."""

    t: PairType
    G: AbGroup
    E: list[Indecomposable]
    F: list[Indecomposable]
    blocks: dict[tuple[int, int, int], BundleLike]
    end_E: BundleLike
    end_F: BundleLike
    det_relation: GroupElem

    @classmethod
    def build(cls, t: PairType) -> _Model:
        G = t.group()
        nE = len(set(t.E_iso))
        E = [Indecomposable(r, d, G.generator(t.E_iso[i])) for i, (r, d) in enumerate(t.E_shape)]
        F = [Indecomposable(r, d, G.generator(nE + t.F_iso[k])) for k, (r, d) in enumerate(t.F_shape)]
        blocks: dict[tuple[int, int, int], BundleLike] = {}
        for k, fk in enumerate(F):
            fdual = dual(Bundle((fk,)))
            for i in range(len(E)):
                for j in range(i, len(E)):
                    inner = sym2(Bundle((E[i],))) if i == j else tensor(Bundle((E[i],)), Bundle((E[j],)))
                    blocks[(k, i, j)] = tensor(fdual, inner)
        Eb, Fb = Bundle(tuple(E)), Bundle(tuple(F))
        det_rel = G.zero()
        for s in E:
            det_rel = det_rel + s.twist * s.rank
        for s in F:
            det_rel = det_rel - s.twist * s.rank
        return cls(t, G, E, F, blocks, tensor(Eb, dual(Eb)), tensor(Fb, dual(Fb)), det_rel)

    def relation_lattice(self, extra: Iterable[list[int]] = ()) -> lattice.Sublattice:
        dim = self.G.free_rank + len(self.G.torsion_orders)
        gens = [elem_vector(self.det_relation)]
        gens += [list(r) for r in self.t.relations]
        gens += [list(r) for r in extra]
        for i, n in enumerate(self.G.torsion_orders):
            v = [0] * dim
            v[self.G.free_rank + i] = n
            gens.append(v)
        return lattice.Sublattice(dim, gens)

    def slope_zero_candidates(self) -> list[GroupElem]:
        """Distinct twists of degree-0 summands of F^ ⊗ S^2 E."""
        out: dict[tuple, GroupElem] = {}
        for b in self.blocks.values():
            for p in as_profile(b).pieces:
                if p.slope == 0:
                    for s in p.known:
                        out.setdefault(s.twist.key(), s.twist)
        return [out[k] for k in sorted(out)]


def _h0_mod(b: BundleLike, R: lattice.Sublattice) -> int:
    """h0 of the generic member; slope-0 twists count when they lie in R."""
    total = 0
    for p in as_profile(b).pieces:
        if p.slope > 0:
            total += p.degree
        elif p.slope == 0:
            if not p.resolved:
                raise UnresolvedType("undecomposed slope-0 piece")
            total += sum(1 for s in p.known if elem_vector(s.twist) in R)
    return total


def _h1_mod(b: BundleLike, R: lattice.Sublattice) -> int:
    total = 0
    for p in as_profile(b).pieces:
        if p.slope < 0:
            total -= p.degree
        elif p.slope == 0:
            if not p.resolved:
                raise UnresolvedType("undecomposed slope-0 piece")
            total += sum(1 for s in p.known if elem_vector(s.twist) in R)
    return total


def _prime_order_torsion(G: AbGroup) -> list[GroupElem]:
    out = []
    for p in sorted(set(G.torsion_orders)):
        out += [x for x in G.torsion_points(p) if not x.is_zero()]
    return out


def _consistent(m: _Model, R: lattice.Sublattice) -> bool:
    """No declared torsion point dies and no two distinct summands merge."""
    if any(elem_vector(x) in R for x in _prime_order_torsion(m.G)):
        return False
    for summands, iso in ((m.E, m.t.E_iso), (m.F, m.t.F_iso)):
        for i, j in combinations(range(len(summands)), 2):
            a, b = summands[i], summands[j]
            if iso[i] == iso[j] or (a.rank, a.degree) != (b.rank, b.degree):
                continue
            diff = a.twist - b.twist
            if any(elem_vector(diff + x) in R for x in m.G.torsion_points(a.rprime)):
                return False
    return True


# ---------------------------------------------------------------- public operations


def symbolic_pair_bundle(t: PairType) -> BundleLike:
    """F^ ⊗ S^2 E with twists in the parameter group of ``t``."""
    m = _Model.build(t)
    E, F = Bundle(tuple(m.E)), Bundle(tuple(m.F))
    return tensor(dual(F), sym2(E))


def h0_generic(t: PairType) -> tuple[int, int]:
    m = _Model.build(t)
    R = m.relation_lattice()
    return sum(_h0_mod(b, R) for b in m.blocks.values()), sum(_h1_mod(b, R) for b in m.blocks.values())


def moduli_dim(t: PairType) -> int:
    m = _Model.build(t)
    R = m.relation_lattice()
    if not _consistent(m, R):
        raise InconsistentRelations("relations kill declared torsion or merge distinct summands")
    return R.dim - R.rank


def end_h0(t: PairType) -> tuple[int, int]:
    m = _Model.build(t)
    R = m.relation_lattice()
    return _h0_mod(m.end_E, R), _h0_mod(m.end_F, R)


def _pairs(idx: Iterable[int]) -> list[tuple[int, int]]:
    idx = sorted(idx)
    return [(i, j) for a, i in enumerate(idx) for j in idx[a:]]


def _exclusion(m: _Model, R: lattice.Sublattice) -> tuple[str | None, str]:
    nE, nF = len(m.E), len(m.F)
    allE = range(nE)

    def H(k: int, pairs: list[tuple[int, int]]) -> int:
        return sum(_h0_mod(m.blocks[(k, i, j)], R) for i, j in pairs)

    if nF == 2:
        for k in range(nF):
            if H(k, _pairs(allE)) == 0:
                return "excluded-no-monomorphism", f"Hom(M{k + 1}, S2 E) = 0"
    elif H(0, _pairs(allE)) == 0:
        return "excluded-no-monomorphism", "H0(F^ S2 E) = 0"
    for size in range(1, nE):
        for Q in combinations(allE, size):
            rk = sum(m.E[i].rank for i in Q)
            if rk in (1, 2) and sum(H(k, _pairs(Q)) for k in range(nF)) == 0:
                return "excluded-reducible", f"H0(F^ S2 Q) = 0 for Q = {_qname(Q)}"
    if nF == 2:
        for k in range(nF):
            for size in range(1, nE):
                for Q in combinations(allE, size):
                    if sum(m.E[i].rank for i in Q) == 2 and H(k, _pairs(Q)) == 0:
                        return "excluded-reducible", f"H0(M{k + 1}^-1 S2 {_qname(Q)}) = 0"
        for k in range(nF):
            for q in allE:
                if m.E[q].rank != 1:
                    continue
                mixed = [(min(q, j), max(q, j)) for j in allE]
                if H(k, mixed) == 0:
                    return "excluded-through-double-cover", f"H0(M{k + 1}^-1 E{q + 1} E) = 0"
    return None, ""


def _qname(Q) -> str:
    return "+".join(f"E{i + 1}" for i in Q)


def _slope_blocks(shape: tuple[tuple[int, int], ...]) -> list[list[int]]:
    by: dict[Fraction, list[int]] = {}
    for i, (r, d) in enumerate(shape):
        by.setdefault(Fraction(d, r), []).append(i)
    return [by[s] for s in sorted(by, reverse=True)]


def case_tag(t: PairType, m: _Model | None = None, R: lattice.Sublattice | None = None) -> str:
    m = m or _Model.build(t)
    R = R or m.relation_lattice()
    eb, fb = _slope_blocks(t.E_shape), _slope_blocks(t.F_shape)
    nF = len(t.F_shape)

    def H(ks, pairs) -> int:
        return sum(_h0_mod(m.blocks[(k, i, j)], R) for k in ks for i, j in pairs)

    def mu(rank_d) -> Fraction:
        return Fraction(sum(d for _, d in rank_d), sum(r for r, _ in rank_d))

    if len(fb) == 1:
        if len(eb) == 1:
            return "1"
        low = eb[-1]
        mu0 = -Fraction(t.e, 2) + 2 * mu([t.E_shape[i] for i in low])
        prefix = "2" if len(eb) == 2 else "3"
        if mu0 < 0:
            return prefix + "B"
        h = H(range(nF), _pairs(low))
        if mu0 > 0:
            return prefix + "A"
        if h == 0:
            return prefix + "B"
        if prefix == "3":
            return "3C"
        return "2C′" if nF == 1 else "2C″"
    lam1 = Fraction(t.F_shape[fb[0][0]][1])
    top = fb[0][0]
    if len(eb) == 1:
        mu0 = -lam1 + 2 * Fraction(t.e, 3)
        if mu0 > 0:
            return "4A"
        if mu0 < 0 or H([top], _pairs(range(len(t.E_shape)))) == 0:
            return "4B"
        return "4C"
    if len(eb) == 2:
        if sum(t.E_shape[i][0] for i in eb[0]) == 2:
            lam2 = Fraction(t.F_shape[fb[1][0]][1])
            mu1 = mu([t.E_shape[i] for i in eb[0]])
            mu2 = mu([t.E_shape[i] for i in eb[1]])
            s1, s2 = -lam1 + mu1 + mu2, -lam2 + 2 * mu2
            if s1 > 0 and s2 > 0:
                return "5A"
            if s1 < 0:
                return "5B"
            if s2 < 0:
                return "5C"
            return "5D"
        return "6"
    return "7"


def _verdict(m: _Model, R: lattice.Sublattice) -> Verdict:
    t = m.t
    tag = case_tag(t, m, R)
    moduli = R.dim - R.rank
    try:
        h0s = sum(_h0_mod(b, R) for b in m.blocks.values())
        hE, hF = _h0_mod(m.end_E, R), _h0_mod(m.end_F, R)
        status, rule = _exclusion(m, R)
    except UnresolvedType as exc:
        return Verdict("unresolved", moduli, -1, -1, -1, -1, tag, str(exc))
    cov = moduli + h0s - hE - hF + 1
    if status is None:
        status = "accepted" if cov == t.n else "insufficient-moduli"
        if cov > t.n:
            rule = "covering count exceeds n"
    return Verdict(status, moduli, h0s, hE, hF, cov, tag, rule)


def exclusion_check(t: PairType) -> str | None:
    m = _Model.build(t)
    return _exclusion(m, m.relation_lattice())[0]


def analyze(t: PairType) -> Verdict:
    m = _Model.build(t)
    R = m.relation_lattice()
    if not _consistent(m, R):
        raise InconsistentRelations("relations kill declared torsion or merge distinct summands")
    return _verdict(m, R)


# ---------------------------------------------------------------- enumeration


def _set_partitions_by_size(n: int) -> list[tuple[int, ...]]:
    """Label tuples for isomorphism patterns of ``n`` interchangeable summands,
    one per partition of ``n``."""
    return {1: [(0,)], 2: [(0, 0), (0, 1)], 3: [(0, 0, 0), (0, 0, 1), (0, 1, 2)]}[n]


def _iso_patterns(shape: tuple[tuple[int, int], ...]) -> list[tuple[int, ...]]:
    groups: dict[tuple[int, int], list[int]] = {}
    for i, s in enumerate(shape):
        groups.setdefault(s, []).append(i)
    patterns = [[0] * len(shape)]
    base = 0
    for s in sorted(groups):
        idx = groups[s]
        new = []
        for p in patterns:
            for labels in _set_partitions_by_size(len(idx)):
                q = list(p)
                for i, lab in zip(idx, labels):
                    q[i] = base + lab
                new.append(q)
        patterns = new
        base += len(idx)
    return [tuple(p) for p in patterns]


def _E_shapes(e: int, w: int) -> list[tuple[tuple[int, int], ...]]:
    out = [((3, e),)]
    for a in range(-3 * w, 3 * w + 1):
        d2 = a
        d1 = e - a
        if abs(Fraction(d1) - Fraction(2 * e, 3)) <= w and abs(Fraction(d2) - Fraction(e, 3)) <= w:
            out.append(((2, d1), (1, d2)))
    lo = -(-e // 3) - w - 1
    for d1 in range(lo, e + 3 * w + 1):
        for d2 in range(lo, d1 + 1):
            d3 = e - d1 - d2
            if d3 > d2:
                continue
            if all(abs(Fraction(d) - Fraction(e, 3)) <= w for d in (d1, d2, d3)):
                out.append(((1, d1), (1, d2), (1, d3)))
    return out


def _F_shapes(e: int, w: int) -> list[tuple[tuple[int, int], ...]]:
    out = [((2, e),)]
    for l1 in range(e // 2, e + w + 1):
        l2 = e - l1
        if l2 <= l1 and all(abs(Fraction(x) - Fraction(e, 2)) <= w for x in (l1, l2)):
            out.append(((1, l1), (1, l2)))
    return out


def base_types(e: int, window: int) -> list[PairType]:
    out = []
    for Es in _E_shapes(e, window):
        for Fs in _F_shapes(e, window):
            for Ei in _iso_patterns(Es):
                for Fi in _iso_patterns(Fs):
                    out.append(PairType(e, Es, Fs, Ei, Fi))
    return out


def strata(t: PairType) -> list[PairType]:
    """The base type plus every consistent closed set of slope-0 trivializations."""
    m = _Model.build(t)
    cands = [elem_vector(x) for x in m.slope_zero_candidates()]

    def close(rels: list[list[int]]) -> tuple[frozenset[int], lattice.Sublattice]:
        R = m.relation_lattice(rels)
        return frozenset(i for i, c in enumerate(cands) if c in R), R

    start, R0 = close([])
    if not _consistent(m, R0):
        return []
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        S = queue.popleft()
        for i in range(len(cands)):
            if i in S:
                continue
            S2, R2 = close([cands[j] for j in sorted(S | {i})])
            if S2 in seen or not _consistent(m, R2):
                continue
            seen.add(S2)
            order.append(S2)
            queue.append(S2)
    return [t.with_relations(_minimal_relations(m, [cands[j] for j in sorted(S)])) for S in order]


def _minimal_relations(m: _Model, rels: list[list[int]]) -> tuple[tuple[int, ...], ...]:
    """Drop relations already implied by the det constraint and earlier ones."""
    kept: list[list[int]] = []
    for r in rels:
        if r not in m.relation_lattice(kept):
            kept.append(r)
    return tuple(tuple(r) for r in kept)


def relation_strings(t: PairType) -> list[str]:
    G = t.group()
    k = G.free_rank
    out = []
    for r in t.relations:
        x = G.elem(r[:k], r[k:])
        out.append(f"{format_twist(x)} = 1")
    return out


def record(t: PairType, v: Verdict) -> dict:
    return {
        "e": t.e,
        "case_tag": v.case_tag,
        "E_shape": [[r, d] for r, d in t.E_shape],
        "E_iso": list(t.E_iso),
        "F_shape": [[r, d] for r, d in t.F_shape],
        "F_iso": list(t.F_iso),
        "relations": relation_strings(t),
        "status": v.status,
        "moduli_of_pair": v.moduli_of_pair,
        "h0_FS2E": v.h0_FS2E,
        "h0_EndE": v.h0_EndE,
        "h0_EndF": v.h0_EndF,
        "covering_moduli": v.covering_moduli,
        "rule": v.rule,
    }


@dataclass
class Report:
    e: int
    window: int
    rows: list[tuple[PairType, Verdict]] = field(default_factory=list)

    @property
    def accepted(self) -> list[PairType]:
        return [t for t, v in self.rows if v.status == "accepted"]

    def records(self) -> list[dict]:
        return [record(t, v) for t, v in self.rows]

    def to_json(self) -> str:
        return json.dumps({"e": self.e, "window": self.window, "verdicts": self.records()}, indent=2)


def enumerate_and_verify(e: int, degree_window: int) -> Report:
    if e < 1:
        raise ValueError("e must be >= 1")
    if degree_window < 0:
        raise ValueError("window must be >= 0")
    rep = Report(e, degree_window)
    for base in base_types(e, degree_window):
        for t in strata(base):
            m = _Model.build(t)
            rep.rows.append((t, _verdict(m, m.relation_lattice())))
    return rep


def dominant_type(e: int) -> PairType:
    """The unique type with a full-dimensional family of covers in degree e."""
    if e < 1:
        raise ValueError("e must be >= 1")
    if e % 3 == 0:
        E = ((1, e // 3),) * 3
    else:
        E = ((3, e),)
    if e % 2 == 0:
        F = ((1, e // 2),) * 2
    else:
        F = ((2, e),)
    return PairType(e, E, F)
