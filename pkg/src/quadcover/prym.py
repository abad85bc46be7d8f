"""Homology of a branched cover of an elliptic curve from its monodromy.

The base ``Y`` minus the branch points is cut open along a polygon with
boundary word ``b a^-1 b^-1 a t_1 t_1^-1 ... t_n t_n^-1``: ``a, b`` are loops
at a base vertex ``v`` and ``t_i`` is a slit from ``v`` to the branch point
``p_i``. The cover ``X`` is ``d`` copies of the polygon; side ``x`` of sheet
``k`` is glued to side ``x^-1`` of sheet ``pi_x(k)`` where ``pi_a = alpha``,
``pi_b = beta`` and ``pi_{t_i} = sigma_i``. Every side pairing of polygons is
a closed oriented surface. Going once around ``v`` multiplies
``[alpha, beta]^-1`` by ``sigma_1 ... sigma_n``, so the monodromy relation is
exactly what keeps ``v`` unbranched.

Intersection numbers come from the rotation system of the embedded 1-skeleton:
push one closed walk to its left and count signed crossings at vertices.

Permutations are tuples of images of ``0..d-1``; products compose left to
right (``p * q`` applies ``p`` first).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

from . import lattice

Perm = tuple[int, ...]


class InvalidBranchData(ValueError):
    pass


class DegenerateCover(ValueError):
    pass


# ---------------------------------------------------------------- permutations


def perm_mul(p: Perm, q: Perm) -> Perm:
    """Left-to-right product: apply ``p`` then ``q``."""
    return tuple(q[p[i]] for i in range(len(p)))


def perm_inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def perm_id(d: int) -> Perm:
    return tuple(range(d))


def commutator(a: Perm, b: Perm) -> Perm:
    """``a b a^-1 b^-1`` in left-to-right order."""
    return perm_mul(perm_mul(perm_mul(a, b), perm_inv(a)), perm_inv(b))


def cycles(p: Perm) -> list[list[int]]:
    seen, out = set(), []
    for i in range(len(p)):
        if i not in seen:
            c, j = [], i
            while j not in seen:
                seen.add(j)
                c.append(j)
                j = p[j]
            out.append(c)
    return out


def is_transposition(p: Perm) -> bool:
    return sum(1 for i, x in enumerate(p) if i != x) == 2


def transposition(d: int, i: int, j: int) -> Perm:
    """The transposition of the 1-indexed points ``i`` and ``j``."""
    p = list(range(d))
    p[i - 1], p[j - 1] = j - 1, i - 1
    return tuple(p)


def from_cycles(d: int, *cycs: tuple[int, ...]) -> Perm:
    """Permutation from 1-indexed disjoint cycles."""
    p = list(range(d))
    for c in cycs:
        for x, y in zip(c, c[1:] + c[:1]):
            p[x - 1] = y - 1
    return tuple(p)


# ---------------------------------------------------------------- branch data


@dataclass(frozen=True)
class BranchData:
    degree: int
    alpha: Perm
    beta: Perm
    sigmas: tuple[Perm, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(self.alpha))
        object.__setattr__(self, "beta", tuple(self.beta))
        object.__setattr__(self, "sigmas", tuple(tuple(s) for s in self.sigmas))

    @property
    def n(self) -> int:
        return len(self.sigmas)

    def to_json(self) -> dict:
        img = lambda p: [x + 1 for x in p]  # noqa: E731
        return {
            "degree": self.degree,
            "alpha": img(self.alpha),
            "beta": img(self.beta),
            "sigmas": [img(s) for s in self.sigmas],
        }

    @classmethod
    def from_json(cls, obj: dict) -> BranchData:
        try:
            d = int(obj["degree"])
            conv = lambda p: tuple(int(x) - 1 for x in p)  # noqa: E731
            return cls(d, conv(obj["alpha"]), conv(obj["beta"]), tuple(conv(s) for s in obj["sigmas"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidBranchData(f"malformed branch data: {exc}") from exc


def load_branch_data(path: str | Path) -> BranchData:
    with open(path) as fh:
        return BranchData.from_json(json.load(fh))


def _is_perm(p: Perm, d: int) -> bool:
    return len(p) == d and sorted(p) == list(range(d))


def branch_data_problems(b: BranchData) -> list[str]:
    d = b.degree
    if d < 2:
        return ["degree must be >= 2"]
    perms = [b.alpha, b.beta, *b.sigmas]
    if not all(_is_perm(p, d) for p in perms):
        return ["entries are not permutations of 1..d"]
    problems = []
    prod = perm_id(d)
    for s in b.sigmas:
        prod = perm_mul(prod, s)
    if prod != commutator(b.alpha, b.beta):
        problems.append("relation violated: sigma_1 ... sigma_n != [alpha, beta]")
    orbit, frontier = {0}, [0]
    while frontier:
        x = frontier.pop()
        for p in perms:
            if p[x] not in orbit:
                orbit.add(p[x])
                frontier.append(p[x])
    if len(orbit) != d:
        problems.append("not transitive")
    if not all(is_transposition(s) for s in b.sigmas):
        problems.append("some branch cycle is not a transposition")
    return problems


def validate_branch_data(b: BranchData) -> None:
    problems = branch_data_problems(b)
    if problems:
        raise InvalidBranchData("; ".join(problems))


# ---------------------------------------------------------------- the cell complex


@dataclass
class _Complex:
    d: int
    labels: list[str]  # side labels of Y: "a", "b", "t1", ...
    edges: list[tuple[str, int]]  # (label, sheet)
    tail: list[int]
    head: list[int]
    n_vertices: int
    faces: list[list[tuple[int, int]]]  # boundary walks: (edge, +1/-1)


def _build_complex(b: BranchData) -> _Complex:
    d = b.degree
    labels = ["a", "b"] + [f"t{i + 1}" for i in range(b.n)]
    perm = {"a": b.alpha, "b": b.beta}
    perm.update({f"t{i + 1}": s for i, s in enumerate(b.sigmas)})
    word = [("b", 1), ("a", -1), ("b", -1), ("a", 1)]
    for i in range(b.n):
        word += [(f"t{i + 1}", 1), (f"t{i + 1}", -1)]
    index = {(lab, k): i for i, (lab, k) in enumerate((lab, k) for lab in labels for k in range(d))}
    edges = list(index)
    inv = {lab: perm_inv(p) for lab, p in perm.items()}

    faces = []
    for k in range(d):
        walk = []
        for lab, sign in word:
            if sign == 1:
                walk.append((index[(lab, k)], 1))
            else:
                walk.append((index[(lab, inv[lab][k])], -1))
        faces.append(walk)

    # endpoints: 2 per edge, identified along face corners
    parent = list(range(2 * len(edges)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def end(e, sign, at_head):
        # endpoint reached at the head (at_head) or start of a traversal
        return 2 * e + (1 if (sign == 1) == at_head else 0)

    for walk in faces:
        for j, (e, s) in enumerate(walk):
            e2, s2 = walk[(j + 1) % len(walk)]
            ra, rb = find(end(e, s, True)), find(end(e2, s2, False))
            if ra != rb:
                parent[ra] = rb
    roots: dict[int, int] = {}
    tail, head = [], []
    for e in range(len(edges)):
        tail.append(roots.setdefault(find(2 * e), len(roots)))
        head.append(roots.setdefault(find(2 * e + 1), len(roots)))
    return _Complex(d, labels, edges, tail, head, len(roots), faces)


def _rotation(cx: _Complex) -> dict[tuple[int, int], tuple[int, int]]:
    """Counter-clockwise successor of each dart ``(edge, end)``; ``end`` is 0
    for the tail and 1 for the head, and the dart points away from it."""
    nxt = {}
    for walk in cx.faces:
        for j, (e, s) in enumerate(walk):
            e2, s2 = walk[(j + 1) % len(walk)]
            out_dart = (e2, 0 if s2 == 1 else 1)
            back_dart = (e, 1 if s == 1 else 0)
            nxt[out_dart] = back_dart
    return nxt


def _spanning_tree(cx: _Complex) -> tuple[set[int], list[list[tuple[int, int]]]]:
    """Tree edges and, for every vertex, the walk from the root."""
    adj: dict[int, list[tuple[int, int, int]]] = {v: [] for v in range(cx.n_vertices)}
    for e in range(len(cx.edges)):
        adj[cx.tail[e]].append((e, 1, cx.head[e]))
        adj[cx.head[e]].append((e, -1, cx.tail[e]))
    path: dict[int, list[tuple[int, int]]] = {0: []}
    tree: set[int] = set()
    queue = [0]
    while queue:
        v = queue.pop(0)
        for e, s, w in adj[v]:
            if w not in path:
                path[w] = path[v] + [(e, s)]
                tree.add(e)
                queue.append(w)
    if len(path) != cx.n_vertices:
        raise InvalidBranchData("cover is disconnected")
    return tree, [path[v] for v in range(cx.n_vertices)]


def _reverse(walk: list[tuple[int, int]]) -> list[tuple[int, int]]:
    return [(e, -s) for e, s in reversed(walk)]


def _walk_pairing(x: list[tuple[int, int]], y: list[tuple[int, int]], cx: _Complex, nxt) -> int:
    """Algebraic intersection of closed walk ``x`` with ``y`` pushed to its left."""
    flow: dict[tuple[int, int], int] = {}
    for e, s in x:
        start, stop = (0, 1) if s == 1 else (1, 0)
        flow[(e, start)] = flow.get((e, start), 0) + 1
        flow[(e, stop)] = flow.get((e, stop), 0) - 1
    total = 0
    m = len(y)
    for j in range(m):
        e_in, s_in = y[j]
        e_out, s_out = y[(j + 1) % m]
        in_dart = (e_in, 1 if s_in == 1 else 0)
        out_dart = (e_out, 0 if s_out == 1 else 1)
        dart = nxt[out_dart]
        while dart != in_dart:
            total += flow.get(dart, 0)
            dart = nxt[dart]
    return total


# ---------------------------------------------------------------- homology


@dataclass(frozen=True)
class CoverHomology:
    """Integral symplectic basis of H_1(X): rows of ``intersection`` are
    ``e_1, f_1, ..., e_g, f_g`` with ``<e_i, f_i> = 1``."""

    degree: int
    genus: int
    intersection: tuple[tuple[int, ...], ...]
    pushforward: tuple[tuple[int, ...], ...]
    transfer: tuple[tuple[int, ...], ...]
    base_intersection: tuple[tuple[int, ...], ...] = ((0, 1), (-1, 0))

    @property
    def basis_rank(self) -> int:
        return 2 * self.genus


def build_homology(b: BranchData) -> CoverHomology:
    validate_branch_data(b)
    cx = _build_complex(b)
    nxt = _rotation(cx)
    tree, root_path = _spanning_tree(cx)
    cotree = [e for e in range(len(cx.edges)) if e not in tree]
    {e: i for i, e in enumerate(cotree)}
    m = len(cotree)

    walks = [root_path[cx.tail[e]] + [(e, 1)] + _reverse(root_path[cx.head[e]]) for e in cotree]

    def coords(chain: dict[int, int]) -> list[int]:
        return [chain.get(e, 0) for e in cotree]

    # boundaries of faces, in cycle coordinates
    bnd = []
    for walk in cx.faces:
        ch: dict[int, int] = {}
        for e, s in walk:
            ch[e] = ch.get(e, 0) + s
        bnd.append(coords(ch))
    sf = lattice.SmithForm(bnd, m)
    if any(x != 1 for x in sf.invariants):
        raise DegenerateCover("H_1 has torsion; cell model is inconsistent")
    r = sf.rank
    # the relations span rows 0..r-1 of V^-1, so rows r.. of V^-1 form a
    # basis of H_1 and a cycle x has coordinates (x V)[r:]
    hbasis = _inverse_unimodular(sf.V)[r:]
    Vt = lattice.transpose(sf.V)

    def to_h1(cyc: list[int]) -> list[int]:
        return lattice.matvec(Vt, cyc)[r:]

    P = [[_walk_pairing(walks[i], walks[j], cx, nxt) for j in range(m)] for i in range(m)]
    J = lattice.matmul(lattice.matmul(hbasis, P), lattice.transpose(hbasis))
    if not lattice.is_alternating(J):
        raise DegenerateCover("intersection form is not alternating")

    def walk_proj(w) -> list[int]:
        out = [0, 0]
        for e, s in w:
            lab = cx.edges[e][0]
            if lab == "a":
                out[0] += s
            elif lab == "b":
                out[1] += s
        return out

    pw = [walk_proj(w) for w in walks]
    push = lattice.transpose([[sum(h[i] * pw[i][c] for i in range(m)) for c in range(2)] for h in hbasis])

    def lift(label: str) -> list[int]:
        ch = {i: 1 for i, (lab, _) in enumerate(cx.edges) if lab == label}
        return to_h1(coords(ch))

    trans = lattice.transpose([lift("a"), lift("b")])

    # orient X so that <pi^* a, pi^* b> = d <a, b> with <a, b> = 1
    if _pairing(J, [r[0] for r in trans], [r[1] for r in trans]) < 0:
        J = [[-x for x in row] for row in J]
    divisors, sb = lattice.symplectic_reduction(J)
    if any(x != 1 for x in divisors) or 2 * len(divisors) != len(J):
        raise DegenerateCover("intersection form is not unimodular")
    # rows of sb are the new basis; coordinates change by sb^-T
    Jn = lattice.matmul(lattice.matmul(sb, J), lattice.transpose(sb))
    push_n = lattice.matmul(push, lattice.transpose(sb))
    trans_n = lattice.matmul(lattice.transpose(_inverse_unimodular(sb)), trans)
    tup = lambda a: tuple(tuple(r) for r in a)  # noqa: E731
    return CoverHomology(b.degree, len(Jn) // 2, tup(Jn), tup(push_n), tup(trans_n))


def _pairing(J, x, y) -> int:
    return sum(xi * sum(J[i][k] * y[k] for k in range(len(y))) for i, xi in enumerate(x))


def _inverse_unimodular(v: list[list[int]]) -> list[list[int]]:
    n = len(v)
    cols = [lattice.solve_integer(v, [int(i == j) for i in range(n)]) for j in range(n)]
    if any(c is None for c in cols):
        raise ValueError("matrix is not unimodular")
    return lattice.transpose(cols)


# ---------------------------------------------------------------- Prym data


@dataclass(frozen=True)
class PrymReport:
    genus: int
    d2: int
    surjective: bool
    polarization: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "d2": self.d2,
            "surjective": self.surjective,
            "polarization": list(self.polarization),
        }


def pushforward_index(h: CoverHomology) -> int:
    sf = lattice.SmithForm([list(r) for r in h.pushforward])
    if sf.rank < 2:
        raise DegenerateCover("pushforward has rank < 2")
    out = 1
    for x in sf.invariants:
        out *= x
    return out


def prym_lattice(h: CoverHomology) -> list[list[int]]:
    """Basis of ker(pushforward), as coordinate vectors in the H_1(X) basis."""
    return lattice.kernel_basis([list(r) for r in h.pushforward], 2 * h.genus)


def prym_polarization(h: CoverHomology) -> PrymReport:
    d2 = pushforward_index(h)
    K = prym_lattice(h)
    J = [list(r) for r in h.intersection]
    JK = lattice.matmul(lattice.matmul(K, J), lattice.transpose(K))
    divisors, _ = lattice.symplectic_reduction(JK)
    return PrymReport(h.genus, d2, d2 == 1, tuple(divisors))


def classify_index(d2: int) -> str:
    if d2 == 1:
        return "full"
    if d2 == 2:
        return "via_double_cover"
    raise DegenerateCover(f"index {d2} is impossible for a simple quadruple cover")


def component_class(b: BranchData) -> str:
    if b.degree != 4:
        raise InvalidBranchData("component classes are defined for degree 4")
    return classify_index(pushforward_index(build_homology(b)))


# ---------------------------------------------------------------- sampling


def _factor_into_transpositions(p: Perm) -> list[Perm]:
    """Minimal left-to-right factorization of ``p`` into transpositions:
    the cycle ``(c0 c1 ... ck)`` is ``(c0 c1)(c0 c2)...(c0 ck)``."""
    d = len(p)
    return [transposition(d, c[0] + 1, x + 1) for c in cycles(p) for x in c[1:]]


def _hurwitz_move(sig: list[Perm], i: int) -> None:
    a, b = sig[i], sig[i + 1]
    sig[i], sig[i + 1] = b, perm_mul(perm_mul(perm_inv(b), a), b)


def random_branch_data(d: int, n: int, rng: random.Random, max_tries: int = 1000) -> BranchData:
    """A uniformly scrambled valid simple branch datum of degree ``d`` with
    ``n`` (even) branch points."""
    if n % 2 or n < 0:
        raise ValueError("n must be even and non-negative")
    for _ in range(max_tries):
        alpha = tuple(rng.sample(range(d), d))
        beta = tuple(rng.sample(range(d), d))
        c = commutator(alpha, beta)
        sig = _factor_into_transpositions(c)
        if len(sig) > n:
            continue
        while len(sig) < n:
            i, j = rng.sample(range(1, d + 1), 2)
            t = transposition(d, i, j)
            pos = rng.randrange(len(sig) + 1)
            sig[pos:pos] = [t, t]
        for _ in range(4 * n):
            if n >= 2:
                _hurwitz_move(sig, rng.randrange(n - 1))
        bd = BranchData(d, alpha, beta, tuple(sig))
        if not branch_data_problems(bd):
            return bd
    raise ValueError("no transitive datum found")
