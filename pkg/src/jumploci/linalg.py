"""Exact linear algebra over Q (and any duck-typed exact field), plus
integer Smith normal form with unimodular transforms.

Matrices are plain lists of lists; all helpers are pure and copy their
inputs.  Field elements only need +, -, *, /, bool() and equality, so the
same elimination code serves Fraction and the small cyclotomic field used
for reflection arrangements.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence, TypeVar

T = TypeVar("T")

Row = list
Matrix = list


def mat_copy(rows: Sequence[Sequence[T]]) -> Matrix:
    return [list(r) for r in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(rows: Sequence[Sequence[T]]) -> Matrix:
    if not rows:
        return []
    return [list(col) for col in zip(*rows)]


def matmul(a: Sequence[Sequence[T]], b: Sequence[Sequence[T]]) -> Matrix:
    if not a or not b:
        return []
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), start=row[0] * 0)
             for col in bt] for row in a]


def rref(rows: Sequence[Sequence[T]]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form; returns (rref, pivot column indices)."""
    m = mat_copy(rows)
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(m)):
            if m[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = m[r][c]
        m[r] = [x / inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence[T]]) -> int:
    return len(rref(rows)[1])


def kernel_basis(rows: Sequence[Sequence[T]], ncols: int) -> list[list]:
    """Canonical kernel basis from the RREF: one vector per free column,
    listed by ascending free-column index with a 1 in that slot."""
    if not rows:
        one = Fraction(1)
        return [[one if i == j else one * 0 for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(rows)
    pivot_set = set(pivots)
    zero = rows[0][0] * 0
    one = zero + 1 if not isinstance(rows[0][0], Fraction) else Fraction(1)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [zero] * ncols
        v[free] = one
        for prow, pcol in enumerate(pivots):
            v[pcol] = -red[prow][free]
        basis.append(v)
    return basis


def row_space_basis(rows: Sequence[Sequence[T]]) -> Matrix:
    """Canonical (RREF, zero rows dropped) basis of the row span."""
    red, pivots = rref(rows)
    return [red[i] for i in range(len(pivots))]


def solve(a: Sequence[Sequence[T]], b: Sequence[T]):
    """One solution of a·x = b (free variables zero), or None."""
    if not a:
        return None if any(b) else []
    aug = [list(row) + [val] for row, val in zip(a, b)]
    red, pivots = rref(aug)
    ncols = len(a[0])
    if ncols in pivots:
        return None
    zero = b[0] * 0 if b else Fraction(0)
    x = [zero] * ncols
    for prow, pcol in enumerate(pivots):
        x[pcol] = red[prow][ncols]
    return x


def in_row_span(rows: Sequence[Sequence[T]], v: Sequence[T]) -> bool:
    base = rank(rows) if rows else 0
    return rank(list(rows) + [list(v)]) == base


def bareiss_det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Fraction-free Bareiss determinant for numeric matrices."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    # clear denominators so Bareiss divisions stay integral
    from math import lcm
    denoms = [x.denominator for r in rows for x in r] or [1]
    scale = lcm(*denoms)
    m = [[int(x * scale) for x in r] for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return Fraction(0)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return Fraction(sign * m[n - 1][n - 1], scale ** n)


class SparseSpan:
    """Row span of sparse vectors with hashable column keys, kept as
    gcd-reduced integer rows, one pivot column per row.  Columns are
    compared by a key function ("larger key = pivot preference")."""

    def __init__(self, column_key):
        self.column_key = column_key
        self.pivots: dict = {}          # pivot column -> integer row dict

    @staticmethod
    def _to_int_row(row: dict) -> dict:
        from math import gcd, lcm
        if not row:
            return {}
        denoms = [Fraction(v).denominator for v in row.values()]
        scale = lcm(*denoms)
        ints = {k: int(Fraction(v) * scale) for k, v in row.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, v)
        if g > 1:
            ints = {k: v // g for k, v in ints.items()}
        return {k: v for k, v in ints.items() if v}

    def _eliminate(self, row: dict) -> dict:
        from math import gcd
        r = dict(row)
        while r:
            c = max(r, key=self.column_key)
            p = self.pivots.get(c)
            if p is None:
                return r
            a, b = p[c], r[c]
            g = gcd(a, b)
            a //= g
            b //= g
            out = {k: v * a for k, v in r.items()}
            for k, v in p.items():
                nv = out.get(k, 0) - v * b
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
            g = 0
            for v in out.values():
                g = gcd(g, v)
            if g > 1:
                out = {k: v // g for k, v in out.items()}
            r = out
        return r

    def add(self, row: dict) -> bool:
        """Insert a row; returns True if it enlarged the span."""
        r = self._eliminate(self._to_int_row(row))
        if not r:
            return False
        self.pivots[max(r, key=self.column_key)] = r
        return True

    def contains(self, row: dict) -> bool:
        return not self._eliminate(self._to_int_row(row))

    def reduced_rows(self) -> list[dict]:
        """Fully back-substituted rational rows, pivot coefficient 1,
        ordered by descending pivot column."""
        cols = sorted(self.pivots, key=self.column_key, reverse=True)
        reduced: dict = {}
        for c in reversed(cols):
            row = {k: Fraction(v) for k, v in self.pivots[c].items()}
            while True:
                hit = next((k for k in row if k != c and k in reduced), None)
                if hit is None:
                    break
                coeff = row.pop(hit)
                for k, v in reduced[hit].items():
                    if k == hit:
                        continue
                    nv = row.get(k, Fraction(0)) - coeff * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
            lead = row[c]
            reduced[c] = {k: v / lead for k, v in row.items()}
        return [reduced[c] for c in cols]


# --- integer Smith normal form ---------------------------------------------

def smith_normal_form(mat: Sequence[Sequence[int]]):
    """Return (D, U, V) with U·mat·V = D diagonal, d1 | d2 | ..., and
    U, V unimodular.  Divisors are normalized non-negative."""
    a = [list(map(int, row)) for row in mat]
    m = len(a)
    n = len(a[0]) if m else 0
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row[dst] += q * row[src]
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(a[i][j]), i, j) for i in range(t, m)
                       for j in range(t, n) if a[i][j]]
            if not entries:
                break
            _, pi, pj = min(entries)
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            pivot = a[t][t]
            # chip away at column/row entries; restart if a smaller residue appears
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // pivot))
                    dirty = dirty or bool(a[i][t])
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // pivot))
                    dirty = dirty or bool(a[t][j])
            if dirty:
                continue
            # pivot must divide the whole remaining block for d1 | d2 | ...
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if a[i][j] % pivot != 0), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if t < m and t < n and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        if t < m and t < n and a[t][t] == 0:
            break
    return a, u, v


def snf_divisors(mat: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero elementary divisors d1 | d2 | ... of an integer matrix."""
    d, _, _ = smith_normal_form(mat)
    out = []
    for i in range(min(len(d), len(d[0]) if d else 0)):
        if d[i][i]:
            out.append(abs(d[i][i]))
    return out
