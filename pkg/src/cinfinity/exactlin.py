"""Exact sparse linear algebra over the rationals.

Matrices are stored as a mapping ``(row, col) -> Fraction`` with no zero
entries.  Elimination runs on integer rows (fraction-free) and divides each
row by the gcd of its entries after every update, which keeps coefficient
growth in check on the very sparse matrices produced by bar complexes.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd


class CompositionNonzero(ValueError):
    """Raised when a pair of maps presented as a complex does not compose to 0."""


class SparseMatrix:
    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries=None):
        self.rows = int(rows)
        self.cols = int(cols)
        clean = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry {(i, j)} outside {self.rows}x{self.cols}")
            v = Fraction(v)
            if v:
                clean[i, j] = v
        self.entries = clean

    @classmethod
    def from_dense(cls, data, cols=None):
        data = [list(r) for r in data]
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols,
                   {(i, j): v for i, r in enumerate(data) for j, v in enumerate(r) if v})

    @classmethod
    def from_columns(cls, columns, rows):
        """Build from a list of sparse columns (``dict row -> value``)."""
        return cls(rows, len(columns),
                   {(i, j): v for j, c in enumerate(columns) for i, v in c.items()})

    @classmethod
    def from_rows(cls, rows, cols):
        return cls(len(rows), cols,
                   {(i, j): v for i, r in enumerate(rows) for j, v in r.items()})

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zero(cls, rows, cols):
        return cls(rows, cols)

    @property
    def shape(self):
        return self.rows, self.cols

    def to_dense(self):
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def row_dicts(self):
        rows = [{} for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def transpose(self):
        return SparseMatrix(self.cols, self.rows,
                            {(j, i): v for (i, j), v in self.entries.items()})

    def matvec(self, x):
        if len(x) != self.cols:
            raise ValueError("dimension mismatch")
        out = [Fraction(0)] * self.rows
        for (i, j), v in self.entries.items():
            if x[j]:
                out[i] += v * x[j]
        return out

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        right = other.row_dicts()
        acc = {}
        for (i, k), v in self.entries.items():
            for j, w in right[k].items():
                acc[i, j] = acc.get((i, j), 0) + v * w
        return SparseMatrix(self.rows, other.cols, acc)

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __repr__(self):
        return f"SparseMatrix({self.rows}, {self.cols}, nnz={len(self.entries)})"


def _integer_row(row):
    """Scale a rational row to a primitive integer row (positive leading sign kept)."""
    den = 1
    for v in row.values():
        den = den * v.denominator // gcd(den, v.denominator)
    out = {j: int(v * den) for j, v in row.items()}
    return _primitive(out)


def _primitive(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {j: v // g for j, v in row.items()}
    return row


def _echelon(rows, cols):
    """Fraction-free Gauss-Jordan on integer row dicts.

    Returns (reduced rows as Fraction dicts, pivot columns).  Among the rows
    eligible at a column the one with the smallest pivot (by bit length) is
    chosen, ties broken by row sparsity.
    """
    rows = [r for r in (_integer_row(r) for r in rows) if r]
    pivots = []
    present = sorted({j for r in rows for j in r})
    top = 0
    for c in present:
        best = None
        for i in range(top, len(rows)):
            v = rows[i].get(c)
            if v:
                key = (abs(v).bit_length(), len(rows[i]))
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            continue
        i = best[1]
        rows[top], rows[i] = rows[i], rows[top]
        piv = rows[top]
        a = piv[c]
        for k in range(len(rows)):
            if k == top:
                continue
            b = rows[k].get(c)
            if not b:
                continue
            g = gcd(a, b)
            fa, fb = a // g, b // g
            new = {j: fa * v for j, v in rows[k].items()}
            for j, v in piv.items():
                w = new.get(j, 0) - fb * v
                if w:
                    new[j] = w
                else:
                    new.pop(j, None)
            rows[k] = _primitive(new)
        pivots.append(c)
        top += 1
        if top == len(rows):
            break
    out = []
    for r, c in zip(rows[:top], pivots):
        p = r[c]
        out.append({j: Fraction(v, p) for j, v in r.items()})
    return out, pivots


def rref(m):
    """Reduced row echelon form: ``(R, pivot_columns, rank)``."""
    red, pivots = _echelon(m.row_dicts(), m.cols)
    entries = {}
    for i, r in enumerate(red):
        for j, v in r.items():
            entries[i, j] = v
    return SparseMatrix(m.rows, m.cols, entries), pivots, len(pivots)


def rank(m):
    return len(_echelon(m.row_dicts(), m.cols)[1])


def _kernel_from(red, pivots, cols):
    pivset = set(pivots)
    basis = []
    for f in range(cols):
        if f in pivset:
            continue
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for r, p in zip(red, pivots):
            c = r.get(f)
            if c:
                v[p] = -c
        basis.append(v)
    return basis


def kernel_basis(m):
    """Exact basis of the null space, one dense vector per free column."""
    red, pivots = _echelon(m.row_dicts(), m.cols)
    return _kernel_from(red, pivots, m.cols)


def solve(m, b):
    """Some exact ``x`` with ``m x = b``, or ``None`` if the system is inconsistent."""
    if len(b) != m.rows:
        raise ValueError("right-hand side has the wrong length")
    rows = m.row_dicts()
    for i, v in enumerate(b):
        if v:
            rows[i][m.cols] = Fraction(v)
    red, pivots = _echelon(rows, m.cols + 1)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [Fraction(0)] * m.cols
    for r, p in zip(red, pivots):
        x[p] = r.get(m.cols, Fraction(0))
    return x


def row_space(vectors, dim):
    """Echelon basis (sparse dicts) and pivots of the span of dense or sparse vectors."""
    rows = [v if isinstance(v, dict) else {j: c for j, c in enumerate(v) if c}
            for v in vectors]
    return _echelon(rows, dim)


def reduce_against(vec, red, pivots):
    """Remainder of a sparse vector modulo an echelon basis (pivot entries cleared)."""
    out = dict(vec)
    for r, p in zip(red, pivots):
        c = out.get(p)
        if c:
            for j, v in r.items():
                w = out.get(j, 0) - c * v
                if w:
                    out[j] = w
                else:
                    out.pop(j, None)
    return out


def quotient_and_homology(d_in, d_out):
    """Homology at the middle term of ``C' --d_in--> C --d_out--> C''``.

    Returns ``(dimension, representatives)`` where the representatives are
    dense cycles whose classes form a basis of ker(d_out)/im(d_in).
    """
    if d_in.rows != d_out.cols:
        raise ValueError("matrices are not composable")
    if not (d_out @ d_in).is_zero():
        raise CompositionNonzero("d_out . d_in != 0")
    n = d_in.rows
    cycles = kernel_basis(d_out)
    red, pivots = row_space(d_in.transpose().row_dicts(), n)
    red = list(red)
    pivots = list(pivots)
    reps = []
    for z in cycles:
        rem = reduce_against({j: c for j, c in enumerate(z) if c}, red, pivots)
        if rem:
            reps.append(z)
            r2, p2 = _echelon(red + [rem], n)
            red, pivots = r2, p2
    return len(reps), reps
