import json
import random
import time
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from quadcover import lattice as L
from quadcover import prym as P

DATA = Path(__file__).resolve().parent.parent / "data"


def transposition_data(d, alpha, beta, pairs):
    return P.BranchData(d, alpha, beta, tuple(P.transposition(d, i, j) for i, j in pairs))


def s4_datum():
    return transposition_data(4, P.perm_id(4), P.perm_id(4), [(1, 2), (1, 2), (1, 3), (1, 3), (1, 4), (1, 4)])


def imprimitive_datum():
    alpha = P.from_cycles(4, (1, 3), (2, 4))
    return transposition_data(4, alpha, P.perm_id(4), [(1, 2), (1, 2), (3, 4), (3, 4), (1, 2), (1, 2)])


def double_datum():
    return transposition_data(2, P.perm_id(2), P.perm_id(2), [(1, 2), (1, 2)])


def index_oracle(b: P.BranchData) -> int:
    """Orbits of the normal subgroup generated by the branch cycles and all
    commutators of the monodromy group; the quotient acts on them through
    H_1 of the base, so their number is the index of the image of pi_*."""
    gens = [b.alpha, b.beta, *b.sigmas]
    group = {P.perm_id(b.degree)}
    frontier = list(group)
    while frontier:
        g = frontier.pop()
        for h in gens:
            x = P.perm_mul(g, h)
            if x not in group:
                group.add(x)
                frontier.append(x)
    normal = set()
    for g in group:
        for s in b.sigmas:
            normal.add(P.perm_mul(P.perm_mul(P.perm_inv(g), s), g))
        for h in group:
            normal.add(P.commutator(g, h))
    parent = list(range(b.degree))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for k in normal:
        for x in range(b.degree):
            parent[find(x)] = find(k[x])
    return len({find(x) for x in range(b.degree)})


def sympy_invariants(rows):
    d = smith_normal_form(Matrix(rows), domain=ZZ)
    return [abs(int(d[i, i])) for i in range(min(d.shape)) if d[i, i] != 0]


@st.composite
def branch_data(draw, max_degree=5, max_n=10):
    d = draw(st.integers(2, max_degree))
    n = 2 * draw(st.integers(1, max_n // 2))
    seed = draw(st.integers(0, 2**32 - 1))
    return P.random_branch_data(d, n, random.Random(seed))


# ---------------------------------------------------------------- permutations


@given(st.permutations(range(5)), st.permutations(range(5)), st.permutations(range(5)))
def test_composition_is_associative(a, b, c):
    a, b, c = tuple(a), tuple(b), tuple(c)
    assert P.perm_mul(P.perm_mul(a, b), c) == P.perm_mul(a, P.perm_mul(b, c))
    assert P.perm_mul(a, P.perm_inv(a)) == P.perm_id(5)


def test_composition_is_left_to_right():
    a = P.transposition(3, 1, 2)
    b = P.transposition(3, 2, 3)
    # apply a first: 1 -> 2 -> 3
    assert P.perm_mul(a, b)[0] == 2


def test_cycles_and_constructors():
    p = P.from_cycles(5, (1, 3, 5))
    assert P.cycles(p) == [[0, 2, 4], [1], [3]]
    assert P.is_transposition(P.transposition(4, 2, 4))
    assert not P.is_transposition(p)


@given(st.permutations(range(5)))
def test_transposition_factorization(p):
    p = tuple(p)
    prod = P.perm_id(5)
    for t in P._factor_into_transpositions(p):
        prod = P.perm_mul(prod, t)
    assert prod == p


# ---------------------------------------------------------------- branch data


def test_json_round_trip_and_files():
    for name, ref in [("branch_s4.json", s4_datum()), ("branch_imprimitive.json", imprimitive_datum()),
                      ("branch_double.json", double_datum())]:
        b = P.load_branch_data(DATA / name)
        assert b == ref
        assert P.BranchData.from_json(json.loads(json.dumps(b.to_json()))) == b


def test_validation():
    b = s4_datum()
    bad = P.BranchData(4, b.alpha, b.beta, b.sigmas[:-1])
    with pytest.raises(P.InvalidBranchData, match="relation"):
        P.validate_branch_data(bad)
    intrans = transposition_data(4, P.perm_id(4), P.perm_id(4), [(1, 2), (1, 2)])
    assert "not transitive" in P.branch_data_problems(intrans)
    cyc = P.from_cycles(3, (1, 2, 3))
    three = P.BranchData(3, P.perm_id(3), P.perm_id(3), (cyc, P.perm_inv(cyc)))
    assert any("transposition" in x for x in P.branch_data_problems(three))
    with pytest.raises(P.InvalidBranchData, match="malformed"):
        P.BranchData.from_json({"degree": 2})
    with pytest.raises(P.InvalidBranchData):
        P.build_homology(bad)


# ---------------------------------------------------------------- published examples


@pytest.mark.parametrize(
    "make, genus, d2, pol, component",
    [
        (s4_datum, 4, 1, (1, 1, 4), "full"),
        (imprimitive_datum, 4, 2, (1, 1, 2), "via_double_cover"),
        (double_datum, 2, 1, (2,), None),
    ],
)
def test_examples(make, genus, d2, pol, component):
    b = make()
    t0 = time.perf_counter()
    rep = P.prym_polarization(P.build_homology(b))
    assert time.perf_counter() - t0 < 1.0
    assert (rep.genus, rep.d2, rep.polarization) == (genus, d2, pol)
    assert rep.d2 == index_oracle(b)
    if component:
        assert P.component_class(b) == component


def test_classify_index():
    assert P.classify_index(1) == "full"
    assert P.classify_index(2) == "via_double_cover"
    with pytest.raises(P.DegenerateCover):
        P.classify_index(4)
    with pytest.raises(P.InvalidBranchData):
        P.component_class(double_datum())


# ---------------------------------------------------------------- invariants on random data


@settings(max_examples=40)
@given(branch_data())
def test_homology_invariants(b):
    h = P.build_homology(b)
    J = [list(r) for r in h.intersection]
    g = h.genus
    assert g == b.n // 2 + 1
    assert len(J) == 2 * g and L.is_alternating(J)
    assert abs(L.det(J)) == 1
    for i in range(g):
        assert J[2 * i][2 * i + 1] == 1
    push, trans = [list(r) for r in h.pushforward], [list(r) for r in h.transfer]
    assert L.matmul(push, trans) == [[b.degree, 0], [0, b.degree]]
    a, bb = [r[0] for r in trans], [r[1] for r in trans]
    assert P._pairing(J, a, bb) == b.degree


@settings(max_examples=40)
@given(branch_data())
def test_prym_lattice(b):
    h = P.build_homology(b)
    rep = P.prym_polarization(h)
    K = P.prym_lattice(h)
    assert len(K) == 2 * (h.genus - 1)
    # primitive: the kernel is saturated in H_1
    assert all(x == 1 for x in sympy_invariants(K))
    assert L.matmul(K, L.transpose([list(r) for r in h.pushforward])) == [[0, 0]] * len(K)
    assert rep.d2 == index_oracle(b)
    assert len(rep.polarization) == h.genus - 1
    if rep.d2 == 1:
        assert rep.polarization == (1,) * (h.genus - 2) + (b.degree,)
    if b.degree == 4 and rep.d2 == 2:
        assert rep.polarization == (1,) * (h.genus - 2) + (2,)


def test_random_sampler_is_reproducible():
    a = P.random_branch_data(4, 6, random.Random(7))
    b = P.random_branch_data(4, 6, random.Random(7))
    assert a == b and not P.branch_data_problems(a)
    with pytest.raises(ValueError):
        P.random_branch_data(4, 5, random.Random(0))
