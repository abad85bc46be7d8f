from collections import Counter

import pytest
from hypothesis import given, strategies as st

from _strategies import GROUP, bundles, indecomposables, rank2_odd, twists
from quadcover import bundle as B
from quadcover.bundle import Bundle, Indecomposable
from quadcover.picard import named_torsion

G = GROUP
O = G.zero()
eta = named_torsion(G)


def F(r):
    return Bundle((B.unipotent(r, G),))


def canon(*rs):
    return Bundle(tuple(B.unipotent(r, G) for r in rs))


def sl2_decomposition(a, b):
    # oracle: multiply the weight characters of F_a and F_b and peel off
    # irreducible strings from the top weight down
    weights = Counter()
    for i in range(a):
        for j in range(b):
            weights[(a - 1 - 2 * i) + (b - 1 - 2 * j)] += 1
    out = []
    while weights:
        top = max(w for w, c in weights.items() if c)
        out.append(top + 1)
        for w in range(-top, top + 1, 2):
            weights[w] -= 1
            if weights[w] == 0:
                del weights[w]
    return sorted(out)


# ---------------------------------------------------------------- the unipotent table


def test_unipotent_products():
    assert B.tensor(F(2), F(3)) == canon(2, 4)
    assert B.tensor(F(3), F(3)) == canon(1, 3, 5)
    assert B.sym2(F(3)) == canon(1, 5)
    assert B.wedge2(F(3)) == canon(3)
    assert B.end_bundle(F(2)) == canon(1, 3)


@given(st.integers(1, 7), st.integers(1, 7))
def test_clebsch_gordan_matches_characters(a, b):
    assert sorted(B.clebsch_gordan(a, b)) == sl2_decomposition(a, b)


@given(st.integers(1, 8))
def test_sym2_wedge2_split_square(h):
    s = B.sym2_unipotent(h)
    w = B.wedge2_unipotent(h)
    assert sum(s) == h * (h + 1) // 2 and sum(w) == h * (h - 1) // 2
    assert sorted(s + w) == sorted(B.clebsch_gordan(h, h))


# ---------------------------------------------------------------- general products


@given(indecomposables, indecomposables)
def test_tensor_rank_degree(x, y):
    t = B.tensor(Bundle((x,)), Bundle((y,)))
    assert t.rank == x.rank * y.rank
    assert t.degree == x.rank * y.degree + y.rank * x.degree


@given(indecomposables, indecomposables)
def test_tensor_commutes(x, y):
    a, b = Bundle((x,)), Bundle((y,))
    assert B.stability_profile(B.tensor(a, b)) == B.stability_profile(B.tensor(b, a))


@given(indecomposables, indecomposables)
def test_det_of_tensor(x, y):
    # oracle: det(X ⊗ Y) = det(X)^rk Y ⊗ det(Y)^rk X
    t = B.tensor(Bundle((x,)), Bundle((y,)))
    if isinstance(t, Bundle):
        want = B.det(Bundle((x,))) * y.rank + B.det(Bundle((y,))) * x.rank
        assert B.det(t) == want


@given(bundles)
def test_dual_is_involution(b):
    assert B.dual(B.dual(b)) == b
    assert B.dual(b).degree == -b.degree


@given(indecomposables)
def test_sym2_plus_wedge2_is_square(x):
    b = Bundle((x,))
    s, w, t = B.sym2(b), B.wedge2(b), B.tensor(b, b)
    assert s.rank == x.rank * (x.rank + 1) // 2 and w.rank == x.rank * (x.rank - 1) // 2
    assert s.degree == (x.rank + 1) * x.degree and w.degree == (x.rank - 1) * x.degree
    if all(isinstance(v, Bundle) for v in (s, w, t)):
        assert B.direct_sum(s, w) == t


@given(bundles)
def test_profile_slopes_decrease(b):
    p = B.stability_profile(b)
    slopes = [q.slope for q in p.pieces]
    assert slopes == sorted(slopes, reverse=True)
    assert p.rank == b.rank and p.degree == b.degree


# ---------------------------------------------------------------- twists and determinants


def test_twist_is_reduced_modulo_rprime_torsion():
    u = G.generator(0)
    assert Indecomposable(2, 1, eta["eta1"]) == Indecomposable(2, 1, O)
    assert Indecomposable(2, 1, u + eta["eta3"]) == Indecomposable(2, 1, u)
    assert Indecomposable(2, 2, eta["eta1"]) != Indecomposable(2, 2, O)


def test_det_convention():
    u = G.generator(0)
    # det I(r, d; u) = O(d) ⊗ L_u^r
    assert B.det(Bundle((Indecomposable(2, 1, u),))) == B.PicardClass(1, u * 2)
    assert B.det(Bundle((Indecomposable(2, 2, u),))) == B.PicardClass(2, u * 2)
    assert B.det(Bundle((Indecomposable(3, 1, u),))) == B.PicardClass(1, u * 3)


@given(twists, st.integers(-4, 4), indecomposables)
def test_line_tensor_rule(v, a, x):
    out = B.tensor(Bundle((B.line(a, v),)), Bundle((x,)))
    assert out == Bundle((Indecomposable(x.rank, x.degree + x.rank * a, x.twist + v),))


def test_rank2_odd_square():
    u = G.generator(0)
    e = Bundle((Indecomposable(2, 1, u),))
    s2 = B.sym2(e)
    assert s2 == Bundle(tuple(B.line(1, u * 2 + t) for t in (eta["eta1"], eta["eta2"], eta["eta3"])))
    assert B.wedge2(e) == Bundle((B.line(1, u * 2),))


def test_rank3_wedge2_is_dual_twisted_by_det():
    u = G.generator(0)
    x = Bundle((Indecomposable(3, 1, u),))
    assert B.wedge2(x) == Bundle((Indecomposable(3, 2, u * 2),))


def test_unresolved_products_become_profiles():
    u = G.generator(0)
    p = B.sym2(Bundle((Indecomposable(3, 1, u),)))
    assert isinstance(p, B.SlopeProfile) and not p.resolved
    assert p.triples()[0][1:] == (6, 4)


def test_end_of_rank3_stable_needs_full_3_torsion():
    from quadcover.picard import default_group

    g = default_group(("u",))
    x = Bundle((Indecomposable(3, 1, g.generator(0)),))
    assert not B.end_bundle(x).resolved if isinstance(B.end_bundle(x), B.SlopeProfile) else False
    x = Bundle((Indecomposable(3, 1, G.generator(0)),))
    end = B.end_bundle(x)
    assert isinstance(end, Bundle) and len(end) == 9 and all(s.rank == 1 and s.degree == 0 for s in end.summands)


# ---------------------------------------------------------------- symmetric powers of rank 2


def test_even_power_exponents():
    assert [B.even_power_exponents(k) for k in range(1, 6)] == [(0, 1), (2, 1), (1, 2), (3, 2), (2, 3)]


@given(st.integers(1, 6), twists, st.integers(-3, 3))
def test_sym_n_of_unipotent_rank2(n, t, a):
    e = Bundle((Indecomposable(2, 2 * a, t),))
    assert B.sym_n_rank2(e, n) == Bundle((Indecomposable(n + 1, (n + 1) * n * a, t * n),))


def test_sym3_unipotent_example():
    u = G.generator(0)
    e = Bundle((Indecomposable(2, 2, u),))
    assert B.format_indecomposable(B.sym_n_rank2(e, 3).summands[0]) == "F(4)*L(3; u^3)"


@given(rank2_odd, st.integers(1, 6))
def test_sym_n_rank_and_degree(x, n):
    s = B.sym_n_rank2(Bundle((x,)), n)
    assert s.rank == n + 1
    assert s.degree == n * (n + 1) * x.degree // 2


def test_sym_n_rejects_bad_input():
    with pytest.raises(ValueError):
        B.sym_n_rank2(F(3), 2)
    with pytest.raises(ValueError):
        B.sym_n_rank2(F(2), -1)


# ---------------------------------------------------------------- formatting


def test_formatting():
    u, v = G.generator(0), G.generator(1)
    assert str(canon(1, 5)) == "F(1) + F(5)"
    assert str(Bundle((B.line(2, u * 2 - v + eta["eta1"] + eta["tau"] * 2),))) == "L(2; u^2 v^-1 eta1 tau^2)"
    assert str(Bundle((Indecomposable(3, 1, u),))) == "I(3, 1; u)"
    assert str(Bundle(())) == "0"
