"""Exact integer linear algebra: Smith form, kernels, lattice membership and
symplectic reduction of alternating forms.

Matrices are lists of rows of Python ints. Nothing here touches floats.
"""

from __future__ import annotations


Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(a: Matrix, ncols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Matrix, v: list[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def det(a: Matrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


class SmithForm:
    """Smith normal form ``U @ A @ V == D`` with ``U``, ``V`` unimodular.

    ``D`` is diagonal with non-negative entries ``d_1 | d_2 | ... | d_r``
    followed by zeros; ``rank`` is ``r``.
    """

    def __init__(self, a: Matrix, ncols: int | None = None):
        self.nrows = len(a)
        self.ncols = len(a[0]) if a else (ncols or 0)
        self.A = [row[:] for row in a]
        self._compute()

    def _compute(self) -> None:
        m, n = self.nrows, self.ncols
        d = [row[:] for row in self.A]
        u = identity(m)
        v = identity(n)

        def swap_rows(i, j):
            d[i], d[j] = d[j], d[i]
            u[i], u[j] = u[j], u[i]

        def swap_cols(i, j):
            for row in d:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]

        def add_row(src, dst, k):
            # row_dst += k * row_src
            d[dst] = [x + k * y for x, y in zip(d[dst], d[src])]
            u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

        def add_col(src, dst, k):
            for row in d:
                row[dst] += k * row[src]
            for row in v:
                row[dst] += k * row[src]

        def neg_row(i):
            d[i] = [-x for x in d[i]]
            u[i] = [-x for x in u[i]]

        t = 0
        while t < min(m, n):
            # pivot: smallest nonzero |entry| in the trailing block
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = d[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            done = False
            while not done:
                done = True
                p = d[t][t]
                for i in range(t + 1, m):
                    if d[i][t]:
                        add_row(t, i, -(d[i][t] // p))
                        if d[i][t]:
                            swap_rows(t, i)
                            done = False
                            break
                if not done:
                    continue
                p = d[t][t]
                for j in range(t + 1, n):
                    if d[t][j]:
                        add_col(t, j, -(d[t][j] // p))
                        if d[t][j]:
                            swap_cols(t, j)
                            done = False
                            break
                if not done:
                    continue
                # divisibility of the trailing block
                p = d[t][t]
                for i in range(t + 1, m):
                    if any(d[i][j] % p for j in range(t + 1, n)):
                        add_row(i, t, 1)
                        done = False
                        break
            if d[t][t] < 0:
                neg_row(t)
            t += 1
        self.D, self.U, self.V = d, u, v
        self.rank = sum(1 for k in range(min(m, n)) if d[k][k] != 0)
        self.invariants = [d[k][k] for k in range(self.rank)]


def smith_invariants(a: Matrix, ncols: int | None = None) -> list[int]:
    return SmithForm(a, ncols).invariants


def rank(a: Matrix, ncols: int | None = None) -> int:
    return SmithForm(a, ncols).rank


def kernel_basis(a: Matrix, ncols: int | None = None) -> list[list[int]]:
    """Z-basis of ``{x : A x = 0}``; the returned lattice is saturated."""
    s = SmithForm(a, ncols)
    return [[s.V[i][j] for i in range(s.ncols)] for j in range(s.rank, s.ncols)]


def solve_integer(a: Matrix, b: list[int], ncols: int | None = None) -> list[int] | None:
    """An integer ``x`` with ``A x = b``, or ``None`` if none exists."""
    s = SmithForm(a, ncols)
    ub = matvec(s.U, b)
    y = [0] * s.ncols
    for k in range(len(ub)):
        if k < s.rank:
            q, r = divmod(ub[k], s.invariants[k])
            if r:
                return None
            y[k] = q
        elif ub[k] != 0:
            return None
    return matvec(s.V, y)


class Sublattice:
    """Membership oracle for the subgroup of ``Z^n`` spanned by given vectors."""

    def __init__(self, dim: int, generators: list[list[int]]):
        self.dim = dim
        self.generators = [list(g) for g in generators]
        cols = transpose(self.generators, dim) if self.generators else [[] for _ in range(dim)]
        self._smith = SmithForm(cols, len(self.generators))

    @property
    def rank(self) -> int:
        return self._smith.rank

    def __contains__(self, w) -> bool:
        ub = matvec(self._smith.U, list(w))
        for k, x in enumerate(ub):
            if k < self._smith.rank:
                if x % self._smith.invariants[k]:
                    return False
            elif x:
                return False
        return True


def is_alternating(j: Matrix) -> bool:
    n = len(j)
    return all(j[i][i] == 0 for i in range(n)) and all(
        j[i][k] == -j[k][i] for i in range(n) for k in range(n)
    )


def _pair(j: Matrix, x: list[int], y: list[int]) -> int:
    return sum(xi * sum(jik * yk for jik, yk in zip(j[i], y)) for i, xi in enumerate(x) if xi)


def symplectic_reduction(j: Matrix) -> tuple[list[int], Matrix]:
    """Frobenius normal form of an alternating integer matrix.

    Returns ``(divisors, basis)`` where ``basis`` is a list of vectors
    ``e_1, f_1, e_2, f_2, ..., z_1, ...`` (unimodular change of basis) with
    ``<e_i, f_i> = d_i > 0``, ``d_1 | d_2 | ...``, every other pairing zero,
    and the trailing ``z`` vectors spanning the radical.
    """
    if not is_alternating(j):
        raise ValueError("matrix is not alternating")
    n = len(j)
    basis = identity(n)

    def form(a, b):
        return _pair(j, basis[a], basis[b])

    divisors: list[int] = []
    k = 0
    while k < n - 1:
        best = None
        for a in range(k, n):
            for b in range(a + 1, n):
                x = form(a, b)
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), a, b)
        if best is None:
            break
        _, a, b = best
        # a < b and a >= k, so moving a to slot k never displaces b
        basis[k], basis[a] = basis[a], basis[k]
        basis[k + 1], basis[b] = basis[b], basis[k + 1]
        if form(k, k + 1) < 0:
            basis[k + 1] = [-x for x in basis[k + 1]]
        restart = False
        while True:
            d = form(k, k + 1)
            restart = False
            for r in range(k + 2, n):
                # clear <e_k, z_r> and <f_k, z_r>
                x, y = form(k, r), form(k + 1, r)
                qx, qy = x // d, y // d
                # z_r -> z_r - qx f_k + qy e_k
                basis[r] = [zr - qx * fk + qy * ek for zr, fk, ek in zip(basis[r], basis[k + 1], basis[k])]
                if form(k, r) or form(k + 1, r):
                    restart = True
                    if form(k, r):
                        basis[k + 1], basis[r] = basis[r], basis[k + 1]
                    else:
                        basis[k], basis[r] = basis[r], basis[k]
                    if form(k, k + 1) < 0:
                        basis[k + 1] = [-x for x in basis[k + 1]]
                    break
            if restart:
                continue
            bad = None
            for r in range(k + 2, n):
                for s in range(r + 1, n):
                    if form(r, s) % d:
                        bad = r
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            basis[k] = [x + y for x, y in zip(basis[k], basis[bad])]
        divisors.append(form(k, k + 1))
        k += 2
    return divisors, basis


def symplectic_divisors(j: Matrix) -> list[int]:
    return symplectic_reduction(j)[0]
