"""Exact dense linear algebra over the rationals.

Matrices are tuples of rows of :class:`fractions.Fraction`.  Everything here
is small and exact; no attempt is made at asymptotic efficiency.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Matrix = tuple  # tuple[tuple[Fraction, ...], ...]


def parse_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot read {value!r} as an exact rational")


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def mat(rows: Iterable[Iterable]) -> Matrix:
    out = tuple(tuple(parse_rational(x) for x in row) for row in rows)
    if out and len({len(r) for r in out}) != 1:
        raise ValueError("ragged matrix")
    return out


def zeros(m: int, n: int) -> Matrix:
    return tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(m))


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def shape(a: Matrix, ncols: int | None = None) -> tuple[int, int]:
    """Shape of ``a``; ``ncols`` disambiguates matrices with zero rows."""
    if not a:
        return (0, ncols or 0)
    return (len(a), len(a[0]))


def transpose(a: Matrix, nrows_if_empty: int = 0) -> Matrix:
    if not a:
        return tuple(() for _ in range(nrows_if_empty))
    return tuple(zip(*a))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    if not a:
        return ()
    if not bt:
        return tuple(() for _ in a)
    out = []
    for row in a:
        # forms and bases are sparse; skipping zeros avoids most Fraction work
        nz = [(j, x) for j, x in enumerate(row) if x]
        out.append(tuple(sum((x * col[j] for j, x in nz), Fraction(0)) for col in bt))
    return tuple(out)


def matvec(a: Matrix, v: Sequence[Fraction]) -> tuple:
    return tuple(sum((x * v[j] for j, x in enumerate(row) if x), Fraction(0)) for row in a)


def neg(a: Matrix) -> Matrix:
    return tuple(tuple(-x for x in row) for row in a)


def add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def scale(c, a: Matrix) -> Matrix:
    c = parse_rational(c)
    return tuple(tuple(c * x for x in row) for row in a)


def hstack(*blocks: Matrix) -> Matrix:
    blocks = [b for b in blocks if b and b[0]]
    if not blocks:
        return ()
    rows = len(blocks[0])
    if any(len(b) != rows for b in blocks):
        raise ValueError("hstack: row counts differ")
    return tuple(sum((tuple(b[i]) for b in blocks), ()) for i in range(rows))


def vstack(*blocks: Matrix) -> Matrix:
    return tuple(row for b in blocks for row in b)


def block_diag(a: Matrix, b: Matrix, acols: int | None = None, bcols: int | None = None) -> Matrix:
    _, na = shape(a, acols)
    _, nb = shape(b, bcols)
    top = tuple(tuple(row) + (Fraction(0),) * nb for row in a)
    bottom = tuple((Fraction(0),) * na + tuple(row) for row in b)
    return top + bottom


def columns(a: Matrix) -> list[tuple]:
    return list(transpose(a))


def from_columns(cols: Sequence[Sequence[Fraction]], nrows: int) -> Matrix:
    if not cols:
        return tuple(() for _ in range(nrows))
    return transpose(tuple(tuple(c) for c in cols))


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot column indices."""
    rows = [list(r) for r in a]
    if not rows:
        return (), []
    m, n = len(rows), len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv if x else x for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y if y else x for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return tuple(tuple(row) for row in rows), pivots


def rank(a: Matrix) -> int:
    return len(rref(a)[1])


def nullspace(a: Matrix, ncols: int | None = None) -> list[tuple]:
    """Basis of ``{x : a x = 0}`` as a list of column vectors."""
    _, n = shape(a, ncols)
    if not a:
        return [tuple(Fraction(int(i == j)) for i in range(n)) for j in range(n)]
    red, piv = rref(a)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(red, piv):
            v[pc] = -row[f]
        basis.append(tuple(v))
    return basis


def column_space(a: Matrix, nrows: int) -> Matrix:
    """Canonical basis of the column span: transposed nonzero RREF rows."""
    if not a or not a[0]:
        return tuple(() for _ in range(nrows))
    red, piv = rref(transpose(a))
    cols = [red[i] for i in range(len(piv))]
    return from_columns(cols, nrows)


def span_equal(a: Matrix, b: Matrix, nrows: int) -> bool:
    return column_space(a, nrows) == column_space(b, nrows)


def det(a: Matrix) -> Fraction:
    rows = [list(r) for r in a]
    n = len(rows)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            d = -d
        d *= rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] / rows[c][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return d


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    red, piv = rref(hstack(a, identity(n)))
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(row[n:]) for row in red)


def solve(a: Matrix, b: Sequence[Fraction]) -> tuple | None:
    """One solution of ``a x = b`` or None."""
    n = len(a[0]) if a else 0
    aug = tuple(tuple(row) + (parse_rational(y),) for row, y in zip(a, b))
    red, piv = rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(red, piv):
        x[pc] = row[n]
    return tuple(x)


def signature(sym: Matrix) -> tuple[int, int]:
    """``(positive, negative)`` inertia of a symmetric matrix by congruence.

    Symmetric Gaussian elimination; a zero diagonal with a nonzero
    off-diagonal entry is fixed by adding row/column ``j`` to ``i``.
    """
    a = [list(r) for r in sym]
    n = len(a)
    pos = negc = 0
    active = list(range(n))
    while active:
        i = next((k for k in active if a[k][k] != 0), None)
        if i is None:
            pair = next(((k, l) for k in active for l in active if k != l and a[k][l] != 0), None)
            if pair is None:
                break
            k, l = pair
            for t in range(n):
                a[k][t] += a[l][t]
            for t in range(n):
                a[t][k] += a[t][l]
            i = k
        piv = a[i][i]
        if piv > 0:
            pos += 1
        else:
            negc += 1
        active.remove(i)
        for k in active:
            if a[k][i] != 0:
                f = a[k][i] / piv
                for t in range(n):
                    a[k][t] -= f * a[i][t]
                for t in range(n):
                    a[t][k] -= f * a[t][i]
    return pos, negc
