"""Pencils of conics over an affine chart of the base.

The pencil is ``xi_1 Q_1 + xi_2 Q_2`` with ``Q_k(e) = e^T A_k(y) e`` and
``A_k`` symmetric 3×3 matrices of polynomials in the chart coordinate ``y``.
A coefficient ``a_ij`` of the monomial ``e_i e_j`` sits in the matrix as
``a_ij`` on the diagonal and ``a_ij / 2`` off it (:func:`from_coefficients`).

Base points of a fiber are read off a binary quartic: project from a centre
not on both conics, eliminate the third coordinate by a resultant, and keep
the centre giving the most distinct roots, which separates the base points.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import sympy as sp

Y = sp.Symbol("y")
X0, X1, X2 = sp.symbols("x0 x1 x2")
XS = (X0, X1, X2)


class PencilError(ValueError):
    pass


class NotRightCodim(PencilError):
    pass


class ReducibleCover(PencilError):
    pass


# fixed projection centres: points on a twisted cubic section, no three on a line
CENTRES: tuple[tuple[int, int, int], ...] = tuple(
    (1, t, t**3 + 2) for t in sorted(range(-8, 9), key=lambda t: (abs(t), t))
) + (
    (0, 0, 1),
    (0, 1, 0),
    (1, 0, 0),
)


def _poly(coeffs) -> sp.Expr:
    if isinstance(coeffs, (int, Fraction, sp.Basic)):
        return sp.nsimplify(coeffs) if isinstance(coeffs, Fraction) else sp.sympify(coeffs)
    return sp.expand(sum(sp.Rational(str(Fraction(c))) * Y**i for i, c in enumerate(coeffs)))


@dataclass(frozen=True)
class ConicPencil:
    A1: sp.ImmutableMatrix
    A2: sp.ImmutableMatrix

    def __post_init__(self):
        for A in (self.A1, self.A2):
            if A.shape != (3, 3):
                raise PencilError("matrices must be 3x3")
            if sp.simplify(A - A.T) != sp.zeros(3, 3):
                raise PencilError("matrices must be symmetric")
        if self.A1.is_zero_matrix and self.A2.is_zero_matrix:
            raise PencilError("both conics vanish identically")

    @classmethod
    def from_lists(cls, A1, A2) -> ConicPencil:
        """Entries are coefficient lists in ``y`` (ascending degree) or numbers."""
        mk = lambda A: sp.ImmutableMatrix(3, 3, [_poly(c) for row in A for c in row])  # noqa: E731
        return cls(mk(A1), mk(A2))

    @classmethod
    def from_forms(cls, q1: sp.Expr, q2: sp.Expr) -> ConicPencil:
        """From quadratic forms in ``x0, x1, x2`` (coefficients may involve ``y``)."""
        return cls(_form_matrix(q1), _form_matrix(q2))

    def forms(self) -> tuple[sp.Expr, sp.Expr]:
        e = sp.Matrix(XS)
        return tuple(sp.expand((e.T * A * e)[0]) for A in (self.A1, self.A2))

    def at(self, y0) -> tuple[sp.Expr, sp.Expr]:
        y0 = sp.Rational(str(Fraction(y0))) if not isinstance(y0, sp.Basic) else y0
        return tuple(sp.expand(q.subs(Y, y0)) for q in self.forms())

    def to_json(self) -> dict:
        def coeffs(p):
            c = sp.Poly(p, Y).all_coeffs()[::-1]
            return [str(x) for x in c]

        return {"A1": [[coeffs(self.A1[i, j]) for j in range(3)] for i in range(3)],
                "A2": [[coeffs(self.A2[i, j]) for j in range(3)] for i in range(3)]}


def from_coefficients(a1: dict, a2: dict) -> ConicPencil:
    """From monomial coefficients ``{(i, j): poly}`` with ``1 <= i <= j <= 3``."""

    def mat(a):
        m = [[sp.Integer(0)] * 3 for _ in range(3)]
        for (i, j), c in a.items():
            v = _poly(c)
            if i == j:
                m[i - 1][i - 1] = v
            else:
                m[i - 1][j - 1] = m[j - 1][i - 1] = v / 2
        return sp.ImmutableMatrix(m)

    return ConicPencil(mat(a1), mat(a2))


def _form_matrix(q: sp.Expr) -> sp.ImmutableMatrix:
    q = sp.expand(q)
    P = sp.Poly(q, *XS)
    if P.total_degree() > 2 or any(sum(m) != 2 for m in P.monoms()):
        if not q.is_zero:
            raise PencilError("not a quadratic form")
    m = [[sp.Integer(0)] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(i, 3):
            mono = [0, 0, 0]
            mono[i] += 1
            mono[j] += 1
            c = P.coeff_monomial(tuple(mono)) if not q.is_zero else 0
            if i == j:
                m[i][i] = c
            else:
                m[i][j] = m[j][i] = sp.Rational(1, 2) * c
    return sp.ImmutableMatrix(m)


def load_pencil(path: str | Path) -> ConicPencil:
    with open(path) as fh:
        obj = json.load(fh)
    try:
        return ConicPencil.from_lists(obj["A1"], obj["A2"])
    except (KeyError, TypeError, ValueError) as exc:
        raise PencilError(f"malformed pencil file: {exc}") from exc


# ---------------------------------------------------------------- elimination


def _move_centre(c: tuple[int, int, int]) -> sp.Matrix:
    """Invertible matrix whose last column is ``c``; the first two columns
    are standard basis vectors completing it to a basis."""
    for i, j in ((0, 1), (0, 2), (1, 2)):
        k = 3 - i - j
        if c[k] != 0:
            M = sp.zeros(3, 3)
            M[i, 0] = 1
            M[j, 1] = 1
            for r in range(3):
                M[r, 2] = c[r]
            return M
    raise ValueError("centre must be nonzero")


def _substitute(q: sp.Expr, M: sp.Matrix) -> sp.Expr:
    new = M * sp.Matrix(XS)
    return sp.expand(q.subs({X0: new[0], X1: new[1], X2: new[2]}, simultaneous=True))


def _eliminant(q1: sp.Expr, q2: sp.Expr, c) -> sp.Expr:
    M = _move_centre(c)
    return sp.expand(sp.resultant(_substitute(q1, M), _substitute(q2, M), X2))


def _value(q: sp.Expr, c) -> sp.Expr:
    return sp.expand(q.subs({X0: c[0], X1: c[1], X2: c[2]}, simultaneous=True))


def right_codim_at(p: ConicPencil, y0) -> bool:
    q1, q2 = p.at(y0)
    if q1 == 0 and q2 == 0:
        raise PencilError("both conics vanish at this point")
    if q1 == 0 or q2 == 0:
        return False
    # a centre off q1 makes q1 monic of degree 2 in the eliminated variable,
    # so the resultant vanishes identically iff there is a common component
    for c in CENTRES:
        if _value(q1, c) != 0:
            return _eliminant(q1, q2, c) != 0
    raise PencilError("no admissible projection centre")


@dataclass(frozen=True)
class FiberAnalysis:
    right_codim: bool
    multiplicities: tuple[int, ...]
    factors: tuple[tuple[str, int], ...]
    branched: bool
    simple: bool

    def to_json(self) -> dict:
        return {
            "right_codim": self.right_codim,
            "multiplicities": list(self.multiplicities),
            "factors": [[f, k] for f, k in self.factors],
            "branched": self.branched,
            "simple": self.simple,
        }


def _pattern(form: sp.Expr) -> tuple[tuple[int, ...], list[tuple[sp.Expr, int]]]:
    _, facs = sp.sqf_list(form, X0, X1)
    mult = []
    for f, k in facs:
        deg = sp.Poly(f, X0, X1).total_degree()
        mult += [k] * deg
    return tuple(sorted(mult, reverse=True)), facs


def fiber_analysis(p: ConicPencil, y0) -> FiberAnalysis:
    if not right_codim_at(p, y0):
        raise NotRightCodim("the conics share a component")
    q1, q2 = p.at(y0)
    best = None
    for c in CENTRES:
        if _value(q1, c) == 0 and _value(q2, c) == 0:
            continue
        r = _eliminant(q1, q2, c)
        if r == 0:
            continue
        mult, facs = _pattern(r)
        if sum(mult) != 4:
            continue
        if best is None or len(mult) > len(best[0]):
            best = (mult, facs)
            if len(mult) == 4:
                break
    if best is None:
        raise PencilError("elimination degenerate in every direction")
    mult, facs = best
    return FiberAnalysis(
        True,
        mult,
        tuple((str(f), k) for f, k in facs),
        any(m >= 2 for m in mult),
        mult == (2, 1, 1),
    )


# ---------------------------------------------------------------- structure


def _zero(e: sp.Expr) -> bool:
    return sp.expand(e) == 0


def degeneration_pattern(p: ConicPencil) -> str:
    mats = (p.A1, p.A2)
    for i in range(3):
        rest = [j for j in range(3) if j != i]
        if all(_zero(A[a, b]) for A in mats for a in rest for b in rest):
            return "line_in_fibers"
    for i in range(3):
        if all(_zero(A[i, i]) for A in mats):
            return "section_component"
    for A in mats:
        for i in range(3):
            if all(_zero(A[i, j]) for j in range(3)):
                return "through_double_cover"
    return "none"


BRANCH_CENTRES = ((1, 2, 11), (1, -3, 7), (2, 5, -13), (1, 1, 1), (3, -1, 4))


def _discriminant(q1: sp.Expr, q2: sp.Expr, c) -> sp.Poly | None:
    r = _eliminant(q1, q2, c)
    if r == 0:
        return None
    P = sp.Poly(r, X0, X1, Y)
    if P.degree(X0) != 4:
        return None
    f = sp.Poly(r.subs(X1, 1), X0)
    return sp.Poly(sp.discriminant(f.as_expr(), X0), Y)


def branch_divisor(p: ConicPencil) -> list[tuple[sp.Poly, int]]:
    """Squarefree factorization ``[(factor, multiplicity), ...]`` of the
    branch polynomial in ``y``; an empty list means no branch points."""
    pat = degeneration_pattern(p)
    if pat in ("section_component", "line_in_fibers"):
        raise ReducibleCover(f"pencil has the {pat} pattern")
    q1, q2 = p.forms()
    discs = []
    for c in BRANCH_CENTRES:
        if _zero(_value(q1, c)) and _zero(_value(q2, c)):
            continue
        d = _discriminant(q1, q2, c)
        if d is not None:
            discs.append(d)
        if len(discs) == 3:
            break
    if not discs:
        raise PencilError("elimination degenerate for every centre")
    if all(d.is_zero for d in discs):
        raise ReducibleCover("discriminant vanishes identically")
    g = None
    for d in discs:
        if d.is_zero:
            continue
        g = d if g is None else sp.gcd(g, d)
    _, facs = sp.sqf_list(g.as_expr(), Y)
    return [(sp.Poly(f, Y).monic(), k) for f, k in facs if sp.Poly(f, Y).degree() > 0]


def branch_degree(factors: list[tuple[sp.Poly, int]]) -> int:
    return sum(f.degree() * k for f, k in factors)


def is_squarefree(factors: list[tuple[sp.Poly, int]]) -> bool:
    return all(k == 1 for _, k in factors)


def cover_genus(n_branch: int, base_genus: int = 1, degree: int = 4) -> int:
    """Riemann–Hurwitz for a simply branched cover."""
    twice = degree * (2 * base_genus - 2) + n_branch
    if twice % 2:
        raise ValueError("number of simple branch points must be even")
    return twice // 2 + 1
