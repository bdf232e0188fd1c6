"""Exact linear algebra over any field with Python arithmetic operators.

Entries may be Fraction, QuadExt, or anything supporting +, -, *, /, bool.
No pivoting heuristics beyond "first nonzero" are needed since arithmetic
is exact.
"""

from __future__ import annotations

from fractions import Fraction

Row = list
Matrix = list


def _is_nonzero(x) -> bool:
    return bool(x)


def rref(rows: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form.  Returns (reduced rows, pivot column list)."""
    if not rows:
        return [], []
    m = [list(r) for r in rows]
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if _is_nonzero(m[i][c])), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c]
        m[r] = [x / inv for x in m[r]]
        for i in range(len(m)):
            if i != r and _is_nonzero(m[i][c]):
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r] + [row for row in m[r:] if any(_is_nonzero(x) for x in row)], pivots


def kernel_basis(rows: Matrix, ncols: int) -> Matrix:
    """Basis of the right kernel of the matrix (each row has ncols entries)."""
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][fc]
        basis.append(vec)
    return basis


def rank(rows: Matrix) -> int:
    red, pivots = rref(rows)
    return len(pivots)


class InconsistentSystem(ValueError):
    pass


def solve_affine(rows: Matrix, rhs: Row):
    """Solve A x = b exactly, eliminating only on the scalar matrix A.

    The right-hand side entries may live in a larger ring (e.g. polynomials
    in symbolic parameters); they are only ever combined linearly, never
    used as pivots.

    Returns (particular solution, kernel basis, relations) where
    ``relations`` collects the right-hand sides attached to zero rows of
    the reduced system: the system is consistent iff every relation is
    zero.  Relations are returned rather than raised so the caller can
    interpret them (e.g. as constraints among symbolic parameters).
    """
    if not rows:
        return [], [], [r for r in rhs if _is_nonzero(r)]
    ncols = len(rows[0])
    m = [list(r) for r in rows]
    b = list(rhs)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if _is_nonzero(m[i][c])), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        b[r], b[pivot] = b[pivot], b[r]
        inv = m[r][c]
        m[r] = [x / inv for x in m[r]]
        b[r] = b[r] * (Fraction(1) / inv)
        for i in range(len(m)):
            if i != r and _is_nonzero(m[i][c]):
                f = m[i][c]
                m[i] = [p - f * q for p, q in zip(m[i], m[r])]
                b[i] = b[i] - f * b[r]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    relations = [b[i] for i in range(r, len(m)) if _is_nonzero(b[i])]
    particular: Row = [Fraction(0)] * ncols
    for i, pc in enumerate(pivots):
        particular[pc] = b[i]
    basis = kernel_basis(m[:r], ncols)
    return particular, basis, relations


def in_span(basis: Matrix, vec: Row) -> bool:
    """Is vec in the row span of basis?"""
    if not any(_is_nonzero(x) for x in vec):
        return True
    if not basis:
        return False
    before = rank(basis)
    after = rank(basis + [vec])
    return before == after


def quotient_dimension(space: Matrix, sub: Matrix) -> int:
    """dim(span(space) / (span(space) ∩ span(sub))) computed as rank jump."""
    if not space:
        return 0
    return rank(sub + space) - rank(sub)


def quotient_basis(space: Matrix, sub: Matrix) -> Matrix:
    """Vectors from ``space`` inducing a basis of span(space)+span(sub) mod span(sub)."""
    picked: Matrix = []
    current = list(sub)
    base = rank(current) if current else 0
    for vec in space:
        cand = current + [vec]
        r = rank(cand)
        if r > base:
            picked.append(vec)
            current = cand
            base = r
    return picked
