"""Exact linear algebra over F_p.

Matrices are numpy integer arrays reduced mod p; scalars are plain ints in
[0, p).  Dense elimination covers everything up to a few thousand columns;
SparseEliminator handles the very tall, very sparse constraint systems that
arise from degree-2 coboundary conditions without materializing them.
"""

from __future__ import annotations

import numpy as np


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("no inverse of 0 mod p")
    return pow(a, p - 2, p)


def as_matrix(m, p: int) -> np.ndarray:
    a = np.asarray(m, dtype=np.int64) % p
    if a.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    return a


def rref(m, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivot selection is the first nonzero entry in column order, so the result
    is deterministic.
    """
    a = as_matrix(m, p).copy()
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * inv_mod(int(a[r, c]), p)) % p
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m, p: int) -> int:
    return len(rref(m, p)[1])


def kernel_basis(m, p: int) -> list[np.ndarray]:
    """Basis of the right null space, in echelon order over the free columns."""
    a, pivots = rref(m, p)
    ncols = a.shape[1]
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = np.zeros(ncols, dtype=np.int64)
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = (-int(a[r, f])) % p
        basis.append(v)
    return basis


def solve(m, b, p: int) -> np.ndarray | None:
    """One solution x of m @ x = b mod p, or None if inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    a = as_matrix(m, p)
    bv = np.asarray(b, dtype=np.int64).reshape(-1) % p
    if bv.shape[0] != a.shape[0]:
        raise ValueError("dimension mismatch")
    aug = np.hstack([a, bv[:, None]])
    red, pivots = rref(aug, p)
    ncols = a.shape[1]
    if ncols in pivots:
        return None
    x = np.zeros(ncols, dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = red[r, ncols]
    return x


def matvec(m, x, p: int) -> np.ndarray:
    return (as_matrix(m, p) @ (np.asarray(x, dtype=np.int64) % p)) % p


def in_column_span(m, b, p: int) -> bool:
    """Membership of b in the column space of m, decided by rank comparison."""
    a = as_matrix(m, p)
    bv = np.asarray(b, dtype=np.int64).reshape(-1, 1) % p
    return rank(a, p) == rank(np.hstack([a, bv]), p)


def _matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact a @ b mod p.

    Entries are reduced mod p, so products accumulate to at most
    inner * (p-1)^2, far below 2^53; the float64 BLAS path is exact and much
    faster than integer matmul.
    """
    if a.shape[1] * (p - 1) ** 2 < 2**52:
        out = a.astype(np.float64) @ b.astype(np.float64)
        return np.asarray(out, dtype=np.int64) % p
    return (a @ b) % p


class SparseEliminator:
    """Incremental Gaussian elimination for tall row streams.

    Rows arrive in blocks (or one at a time, as {column: value} dicts or
    dense vectors); only pivot rows are stored, kept in reduced echelon form
    so a whole block reduces with a single matrix product.
    """

    def __init__(self, ncols: int, p: int):
        self.ncols = ncols
        self.p = p
        self.rows = np.zeros((0, ncols), dtype=np.int64)
        self.cols: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.cols)

    def _dense(self, row) -> np.ndarray:
        if isinstance(row, dict):
            v = np.zeros(self.ncols, dtype=np.int64)
            for c, val in row.items():
                v[c] = (v[c] + val) % self.p
            return v
        return np.asarray(row, dtype=np.int64) % self.p

    def reduce(self, row) -> np.ndarray:
        """Residue of row after elimination against the stored pivots."""
        v = self._dense(row) % self.p
        if self.cols:
            v = (v - _matmul_mod(v[None, self.cols], self.rows, self.p)[0]) % self.p
        return v

    def add_block(self, block: np.ndarray) -> int:
        """Feed a block of rows; returns the number of new pivots."""
        b = np.asarray(block, dtype=np.int64) % self.p
        if b.ndim == 1:
            b = b[None, :]
        if self.cols:
            b = (b - _matmul_mod(b[:, self.cols], self.rows, self.p)) % self.p
        red, piv = rref(b, self.p)
        if not piv:
            return 0
        new_rows = red[: len(piv)]
        if self.cols:
            self.rows = (self.rows - _matmul_mod(self.rows[:, piv], new_rows, self.p)) % self.p
        self.rows = np.vstack([self.rows, new_rows])
        self.cols.extend(piv)
        return len(piv)

    def add_row(self, row) -> bool:
        """Feed one row; True if it added a new pivot."""
        return self.add_block(self._dense(row)[None, :]) == 1

    def kernel_basis(self) -> list[np.ndarray]:
        order = np.argsort(self.cols)
        rows = self.rows[order]
        cols = [self.cols[i] for i in order]
        pivot_set = set(cols)
        basis = []
        for f in range(self.ncols):
            if f in pivot_set:
                continue
            v = np.zeros(self.ncols, dtype=np.int64)
            v[f] = 1
            for r, c in enumerate(cols):
                v[c] = (-int(rows[r, f])) % self.p
            basis.append(v)
        return basis
