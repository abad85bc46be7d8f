import pytest
from hypothesis import given, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from quadcover import lattice as L

small = st.integers(-6, 6)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


def sympy_invariants(a):
    d = smith_normal_form(Matrix(a), domain=ZZ)
    return [abs(int(d[i, i])) for i in range(min(d.shape)) if d[i, i] != 0]


@given(matrices())
def test_smith_invariants_match_sympy(a):
    # oracle: sympy's independent Smith normal form
    assert L.smith_invariants(a) == sympy_invariants(a)


@given(matrices())
def test_smith_transforms(a):
    s = L.SmithForm(a)
    assert L.matmul(L.matmul(s.U, a), s.V) == s.D
    assert abs(L.det(s.U)) == 1 and abs(L.det(s.V)) == 1
    for k in range(1, s.rank):
        assert s.invariants[k] % s.invariants[k - 1] == 0


@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_matches_sympy(a):
    assert L.det(a) == Matrix(a).det()


@given(matrices())
def test_kernel_is_saturated_basis(a):
    n = len(a[0])
    ker = L.kernel_basis(a)
    assert len(ker) == n - Matrix(a).rank()
    for v in ker:
        assert L.matvec(a, v) == [0] * len(a)
    if ker:
        assert all(x == 1 for x in L.smith_invariants(ker))


@given(matrices(), st.lists(small, min_size=4, max_size=4))
def test_solve_integer(a, coeffs):
    n = len(a[0])
    x = coeffs[:n] + [0] * (n - len(coeffs[:n]))
    b = L.matvec(a, x)
    sol = L.solve_integer(a, b)
    assert sol is not None and L.matvec(a, sol) == b


def test_solve_integer_detects_non_integral():
    assert L.solve_integer([[2, 0], [0, 3]], [1, 3]) is None


def test_sublattice_membership():
    lat = L.Sublattice(3, [[2, 0, 0], [0, 3, 3]])
    assert [4, 3, 3] in lat
    assert [1, 0, 0] not in lat
    assert [0, 3, 0] not in lat
    assert lat.rank == 2


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=3), st.lists(small, min_size=3, max_size=3))
def test_sublattice_agrees_with_index_oracle(gens, w):
    # oracle: w lies in the span iff adding it changes neither rank nor covolume
    lat = L.Sublattice(3, gens)
    before, after = sympy_invariants(gens), sympy_invariants(gens + [w])
    same = len(before) == len(after) and _prod(before) == _prod(after)
    assert (w in lat) == same


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def alternating(n):
    entries = st.lists(small, min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2)

    def build(vals):
        j = [[0] * n for _ in range(n)]
        it = iter(vals)
        for i in range(n):
            for k in range(i + 1, n):
                v = next(it)
                j[i][k], j[k][i] = v, -v
        return j

    return entries.map(build)


@given(st.integers(2, 6).flatmap(alternating))
def test_symplectic_reduction_normal_form(j):
    divs, basis = L.symplectic_reduction(j)
    n = len(j)
    assert abs(L.det(basis)) == 1
    form = L.matmul(L.matmul(basis, j), L.transpose(basis))
    for i in range(n):
        for k in range(n):
            want = 0
            if i < 2 * len(divs) and i % 2 == 0 and k == i + 1:
                want = divs[i // 2]
            elif k < 2 * len(divs) and k % 2 == 0 and i == k + 1:
                want = -divs[k // 2]
            assert form[i][k] == want
    for a, b in zip(divs, divs[1:]):
        assert b % a == 0


@given(st.integers(2, 6).flatmap(alternating))
def test_symplectic_divisors_pair_smith_invariants(j):
    # oracle: the Smith invariants of an alternating matrix come in equal pairs
    divs = L.symplectic_divisors(j)
    inv = sympy_invariants(j)
    assert sorted(inv) == sorted(divs + divs)


def test_rejects_non_alternating():
    with pytest.raises(ValueError):
        L.symplectic_reduction([[1, 0], [0, 0]])


def test_standard_example():
    divs, _ = L.symplectic_reduction([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 4], [0, 0, -4, 0]])
    assert divs == [1, 4]
