"""Inhomogeneous cochains C^k(G, F_p) with trivial action, k <= 3.

A degree-k cochain is a dense numpy table over G^k.  The differential and
the cup product are fully vectorized, so identities can be checked on every
tuple of group elements, not on samples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import fp
from .groups import GroupHom, GroupTable, Subgroup, parse_group

MAX_DEGREE = 3
_CHUNK = 1 << 21  # entries per slab when forming degree-3 tables


@dataclass(eq=False)
class Cochain:
    group: GroupTable
    p: int
    degree: int
    values: np.ndarray

    def __post_init__(self):
        if not (0 <= self.degree <= MAX_DEGREE):
            raise ValueError(f"degree must be in 0..{MAX_DEGREE}")
        n = self.group.order
        self.values = np.asarray(self.values, dtype=np.int64) % self.p
        if self.values.shape != (n,) * self.degree:
            raise ValueError("value table has the wrong shape")

    def __eq__(self, other):
        return (
            isinstance(other, Cochain)
            and self.group is other.group
            and self.p == other.p
            and self.degree == other.degree
            and np.array_equal(self.values, other.values)
        )

    def is_zero(self) -> bool:
        return not self.values.any()

    def __add__(self, other: "Cochain") -> "Cochain":
        _check_compatible(self, other)
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return Cochain(self.group, self.p, self.degree, (self.values + other.values) % self.p)

    def __sub__(self, other: "Cochain") -> "Cochain":
        _check_compatible(self, other)
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return Cochain(self.group, self.p, self.degree, (self.values - other.values) % self.p)

    def __neg__(self) -> "Cochain":
        return Cochain(self.group, self.p, self.degree, (-self.values) % self.p)

    def scale(self, s: int) -> "Cochain":
        return Cochain(self.group, self.p, self.degree, (self.values * (s % self.p)) % self.p)


def same_group(G: GroupTable, H: GroupTable) -> bool:
    """Same table (identity or structurally equal, so indices interoperate)."""
    return G is H or (G.order == H.order and np.array_equal(G.mul, H.mul))


def _check_compatible(f: Cochain, h: Cochain) -> None:
    if not same_group(f.group, h.group):
        raise ValueError("cochains live on different groups")
    if f.p != h.p:
        raise ValueError("cochains have different coefficient primes")


def zero_cochain(G: GroupTable, p: int, degree: int) -> Cochain:
    return Cochain(G, p, degree, np.zeros((G.order,) * degree, dtype=np.int64))


def differential(c: Cochain) -> Cochain:
    """The inhomogeneous coboundary (trivial coefficients)."""
    G, p, v = c.group, c.p, c.values
    n = G.order
    mul = G.mul
    if c.degree == 0:
        return zero_cochain(G, p, 1)
    if c.degree == 1:
        d = (v[:, None] + v[None, :] - v[mul]) % p
        return Cochain(G, p, 2, d)
    if c.degree == 2:
        out = np.empty((n, n, n), dtype=np.int64)
        step = max(1, _CHUNK // (n * n))
        for lo in range(0, n, step):
            hi = min(n, lo + step)
            t1 = v[None, :, :]
            t2 = v[mul[lo:hi], :]
            t3 = v[lo:hi][:, mul]
            t4 = v[lo:hi, :, None]
            out[lo:hi] = (t1 - t2 + t3 - t4) % p
        return Cochain(G, p, 3, out)
    raise ValueError("differential only supports degree <= 2")


def cup(f: Cochain, h: Cochain) -> Cochain:
    """(f cup h)(g_1..g_{k+l}) = f(g_1..g_k) * h(g_{k+1}..g_{k+l})."""
    _check_compatible(f, h)
    k, l = f.degree, h.degree
    if k + l > MAX_DEGREE:
        raise ValueError("cup product degree exceeds the supported range")
    n = f.group.order
    a = f.values.reshape(f.values.shape + (1,) * l)
    b = h.values.reshape((1,) * k + h.values.shape)
    return Cochain(f.group, f.p, k + l, (a * b) % f.p)


def is_cocycle(c: Cochain) -> bool:
    return differential(c).is_zero()


def coboundary_matrix(G: GroupTable, p: int) -> np.ndarray:
    """Matrix of d: C^1 -> C^2 with rows indexed by pairs (row-major)."""
    key = ("d1", p)
    if key in G._cache:
        return G._cache[key]
    n = G.order
    d = np.zeros((n, n, n), dtype=np.int64)
    g = np.arange(n)
    np.add.at(d, (g[:, None], g[None, :], g[:, None]), 1)
    np.add.at(d, (g[:, None], g[None, :], g[None, :]), 1)
    np.add.at(d, (g[:, None], g[None, :], G.mul.astype(np.int64)), -1)
    mat = (d % p).reshape(n * n, n)
    G._cache[key] = mat
    return mat


class CoboundarySolver:
    """Repeated solving of d(f) = target against one fixed group.

    The column space of the degree-1 differential is echelonized once, with
    coefficient tracking, so each solve is a short reduction pass.
    """

    def __init__(self, G: GroupTable, p: int):
        self.p = p
        self.n = G.order
        d1 = coboundary_matrix(G, p)
        vecs, cols, coeffs = [], [], []
        for jcol in range(self.n):
            v = d1[:, jcol].copy()
            c = np.zeros(self.n, dtype=np.int64)
            c[jcol] = 1
            for vec, col, cf in zip(vecs, cols, coeffs):
                f = int(v[col])
                if f:
                    v = (v - f * vec) % p
                    c = (c - f * cf) % p
            nz = np.nonzero(v)[0]
            if nz.size:
                col = int(nz[0])
                inv = fp.inv_mod(int(v[col]), p)
                vecs.append((v * inv) % p)
                cols.append(col)
                coeffs.append((c * inv) % p)
        self._vecs = vecs
        self._cols = cols
        self._coeffs = coeffs

    @property
    def image_dim(self) -> int:
        return len(self._cols)

    def solve_flat(self, target: np.ndarray) -> np.ndarray | None:
        v = np.asarray(target, dtype=np.int64).reshape(-1) % self.p
        c = np.zeros(self.n, dtype=np.int64)
        for vec, col, cf in zip(self._vecs, self._cols, self._coeffs):
            f = int(v[col])
            if f:
                v = (v - f * vec) % self.p
                c = (c + f * cf) % self.p
        if v.any():
            return None
        return c


def coboundary_solver(G: GroupTable, p: int) -> CoboundarySolver:
    key = ("dsolver", p)
    if key not in G._cache:
        G._cache[key] = CoboundarySolver(G, p)
    return G._cache[key]


def is_coboundary(c: Cochain) -> tuple[bool, Cochain | None]:
    """Decide c = df for degree-2 c; return a preimage f when it exists."""
    if c.degree != 2:
        raise ValueError("coboundary test is for degree-2 cochains")
    x = coboundary_solver(c.group, c.p).solve_flat(c.values.reshape(-1))
    if x is None:
        return False, None
    return True, Cochain(c.group, c.p, 1, x)


def hom_basis(G: GroupTable, p: int) -> list[Cochain]:
    """Basis of Z^1 = Hom(G, F_p) in echelon order.

    With trivial coefficients the degree-0 differential vanishes, so this is
    also a basis of H^1.
    """
    mat = coboundary_matrix(G, p)
    return [Cochain(G, p, 1, v) for v in fp.kernel_basis(mat, p)]


@dataclass(eq=False)
class CohomologyBasis:
    degree: int
    p: int
    representatives: list[Cochain]
    cocycle_dim: int
    coboundary_dim: int

    @property
    def dim(self) -> int:
        return len(self.representatives)


MAX_H2_ORDER = 32


def cohomology(G: GroupTable, degree: int, p: int) -> CohomologyBasis:
    """Representative cocycles for H^degree(G, F_p), degree in {1, 2}."""
    if degree == 1:
        reps = hom_basis(G, p)
        return CohomologyBasis(1, p, reps, len(reps), 0)
    if degree != 2:
        raise ValueError("cohomology implemented for degree 1 and 2")
    n = G.order
    if n > MAX_H2_ORDER:
        raise ValueError(
            f"degree-2 cohomology tables are limited to order {MAX_H2_ORDER}; "
            "membership-style checks avoid this limit"
        )
    # cocycles: kernel of the degree-2 differential, one row per triple,
    # generated and eliminated in blocks
    elim = fp.SparseEliminator(n * n, p)
    mul = G.mul.astype(np.int64)
    g1, g2, g3 = [a.reshape(-1) for a in np.meshgrid(*([np.arange(n)] * 3), indexing="ij")]
    col_a = g2 * n + g3
    col_b = mul[g1, g2] * n + g3
    col_c = g1 * n + mul[g2, g3]
    col_d = g1 * n + g2
    block_size = 512
    total = n**3
    rows_idx = np.arange(block_size)
    for lo in range(0, total, block_size):
        hi = min(total, lo + block_size)
        m = hi - lo
        block = np.zeros((m, n * n), dtype=np.int64)
        r = rows_idx[:m]
        np.add.at(block, (r, col_a[lo:hi]), 1)
        np.add.at(block, (r, col_b[lo:hi]), -1)
        np.add.at(block, (r, col_c[lo:hi]), 1)
        np.add.at(block, (r, col_d[lo:hi]), -1)
        elim.add_block(block)
    z_basis = elim.kernel_basis()
    # coboundaries, then keep the cocycles that add new pivots
    mod_b = fp.SparseEliminator(n * n, p)
    d1 = coboundary_matrix(G, p)
    for col in range(n):
        mod_b.add_row(d1[:, col])
    b_dim = mod_b.rank
    reps = []
    for v in z_basis:
        if mod_b.add_row(v):
            reps.append(Cochain(G, p, 2, v.reshape(n, n)))
    return CohomologyBasis(2, p, reps, len(z_basis), b_dim)


# ---------------------------------------------------------------------------
# restriction and inflation


def restrict(c: Cochain, sub: Subgroup) -> Cochain:
    emb = sub.embed
    if c.degree == 0:
        vals = c.values
    elif c.degree == 1:
        vals = c.values[emb]
    else:
        vals = c.values[np.ix_(*([emb] * c.degree))]
    return Cochain(sub.table, c.p, c.degree, vals)


def inflate(c: Cochain, pi: GroupHom) -> Cochain:
    """Pull back a cochain on the quotient along a surjection pi."""
    if not same_group(c.group, pi.target):
        raise ValueError("cochain does not live on the target of pi")
    if not pi.is_surjective():
        raise ValueError("inflation needs a surjective homomorphism")
    img = pi.image
    if c.degree == 0:
        vals = c.values
    elif c.degree == 1:
        vals = c.values[img]
    else:
        vals = c.values[np.ix_(*([img] * c.degree))]
    return Cochain(pi.source, c.p, c.degree, vals)


# ---------------------------------------------------------------------------
# JSON serialization


def cochain_to_json(c: Cochain) -> str:
    if not c.group.name:
        raise ValueError("group has no specifier; cannot serialize")
    obj = {
        "group": c.group.name,
        "p": c.p,
        "degree": c.degree,
        "values": c.values.reshape(-1).tolist(),
    }
    return json.dumps(obj, sort_keys=True)


def cochain_from_json(s: str) -> Cochain:
    obj = json.loads(s)
    G = parse_group(obj["group"])
    n = G.order
    vals = np.array(obj["values"], dtype=np.int64).reshape((n,) * obj["degree"])
    return Cochain(G, obj["p"], obj["degree"], vals)
