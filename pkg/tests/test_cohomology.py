import pytest
from hypothesis import given, strategies as st

from _strategies import GROUP, bundles
from quadcover import bundle as B
from quadcover.bundle import Bundle, Indecomposable
from quadcover.cohomology import chi, h0, h0_end_indec, h0h1, is_globally_generated

G = GROUP


@given(bundles)
def test_riemann_roch_and_serre(b):
    r = h0h1(b)
    assert r.resolved
    assert r.h0 - r.h1 == b.degree == chi(b)
    assert r.h1 == h0h1(B.dual(b)).h0


@given(st.integers(1, 6), st.integers(-8, 8))
def test_end_of_indecomposable(r, d):
    # h0(End) of an indecomposable equals gcd(r, d)
    x = Bundle((Indecomposable(r, d, G.zero()),))
    end = B.end_bundle(x)
    if isinstance(end, Bundle):
        assert h0(end) == h0_end_indec(r, d)


def test_examples():
    assert h0(B.end_bundle(Bundle((B.unipotent(2, G),)))) == 2
    r = h0h1(Bundle((Indecomposable(3, 1, G.generator(0)),)))
    assert (r.h0, r.h1) == (1, 0)
    r = h0h1(Bundle((B.line(0, G.generator(0)),)))
    assert (r.h0, r.h1) == (0, 0)
    r = h0h1(Bundle((B.unipotent(4, G),)))
    assert (r.h0, r.h1) == (1, 1)


def test_unresolved_slope_zero():
    from quadcover.bundle import Opaque, _profile

    p = _profile([Opaque(3, 0)])
    assert not h0h1(p).resolved
    with pytest.raises(ValueError):
        h0(p)
    assert h0h1(_profile([Opaque(3, 2)])).h0 == 2


def test_global_generation():
    u = G.generator(0)
    assert is_globally_generated(Bundle((B.line(2, u),))) is True
    assert is_globally_generated(Bundle((B.line(1, u),))) is None
    assert is_globally_generated(Bundle((B.unipotent(2, G),))) is False
    assert is_globally_generated(Bundle(())) is True


def test_h0_end_indec_validation():
    with pytest.raises(ValueError):
        h0_end_indec(0, 1)
