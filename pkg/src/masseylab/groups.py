"""Finite groups as explicit multiplication tables.

Group elements are indices 0..order-1; the table is a numpy array with
mul[g, h] = g*h.  Constructors cover cyclic groups, direct products, the
mod-p Heisenberg group of order p^3 and the upper-triangular unipotent
groups (with and without the top corner entry).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .fields import ParseError, is_prime

MAX_TABLE_ORDER = 4096
MAX_ASSOC_ORDER = 512
MAX_ISO_ORDER = 64


class GroupSizeError(ValueError):
    pass


@dataclass(eq=False)
class GroupTable:
    order: int
    mul: np.ndarray
    inv: np.ndarray
    identity: int
    labels: list[str] | None = None
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.mul = np.asarray(self.mul, dtype=np.int32)
        self.inv = np.asarray(self.inv, dtype=np.int32)
        if self.mul.shape != (self.order, self.order):
            raise ValueError("bad multiplication table shape")

    def power(self, g: int, k: int) -> int:
        out = self.identity
        for _ in range(k):
            out = int(self.mul[out, g])
        return out

    def element_order(self, g: int) -> int:
        k, cur = 1, g
        while cur != self.identity:
            cur = int(self.mul[cur, g])
            k += 1
        return k

    def label(self, g: int) -> str:
        return self.labels[g] if self.labels else str(g)


def check_group(G: GroupTable) -> None:
    """Full validation: identity, inverses, and exhaustive associativity.

    Associativity is scanned over all triples for order <= MAX_ASSOC_ORDER.
    """
    n = G.order
    mul = G.mul.astype(np.int64)
    e = G.identity
    if not (np.all(mul[e, :] == np.arange(n)) and np.all(mul[:, e] == np.arange(n))):
        raise AssertionError("identity fails")
    if not np.all(mul[np.arange(n), G.inv] == e) or not np.all(mul[G.inv, np.arange(n)] == e):
        raise AssertionError("inverses fail")
    if n > MAX_ASSOC_ORDER:
        raise GroupSizeError(f"associativity scan limited to order {MAX_ASSOC_ORDER}")
    # (g h) k == g (h k), chunked over g to bound memory
    step = max(1, (2**22) // max(n * n, 1))
    for lo in range(0, n, step):
        hi = min(n, lo + step)
        lhs = mul[mul[lo:hi, :], :]
        rhs = mul[lo:hi, :][:, mul].reshape(hi - lo, n, n)
        if not np.array_equal(lhs, rhs):
            raise AssertionError("associativity fails")


def _table_from_elements(elems: list, mul_fn, name: str, labels=None) -> GroupTable:
    index = {x: i for i, x in enumerate(elems)}
    n = len(elems)
    mul = np.empty((n, n), dtype=np.int32)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            mul[i, j] = index[mul_fn(a, b)]
    identity = next(i for i in range(n) if all(mul[i, j] == j for j in range(n)))
    inv = np.empty(n, dtype=np.int32)
    for i in range(n):
        inv[i] = int(np.nonzero(mul[i] == identity)[0][0])
    if labels is None:
        labels = [str(x) for x in elems]
    return GroupTable(n, mul, inv, identity, labels, name)


def cyclic(n: int) -> GroupTable:
    if n < 1:
        raise ValueError("cyclic group order must be positive")
    r = np.arange(n)
    mul = (r[:, None] + r[None, :]) % n
    inv = (-r) % n
    return GroupTable(n, mul, inv, 0, [str(i) for i in range(n)], f"cyclic:{n}")


def direct_product(G: GroupTable, H: GroupTable) -> GroupTable:
    """Product group; index of (g, h) is g * H.order + h."""
    nG, nH = G.order, H.order
    mul = (G.mul[:, None, :, None].astype(np.int64) * nH + H.mul[None, :, None, :]).reshape(
        nG * nH, nG * nH
    )
    inv = (G.inv[:, None].astype(np.int64) * nH + H.inv[None, :]).reshape(-1)
    identity = G.identity * nH + H.identity
    labels = [f"({G.label(g)},{H.label(h)})" for g in range(nG) for h in range(nH)]
    name = f"prod:{G.name},{H.name}" if G.name and H.name else ""
    return GroupTable(nG * nH, mul, inv, identity, labels, name)


# ---------------------------------------------------------------------------
# Heisenberg group of order p^3


def heisenberg_index(p: int, i: int, j: int, k: int) -> int:
    return ((i % p) * p + (j % p)) * p + (k % p)


def heisenberg_tuple(p: int, idx: int) -> tuple[int, int, int]:
    return (idx // (p * p), (idx // p) % p, idx % p)


def heisenberg_coordinates(p: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Exponent arrays (i, j, k) indexed by element index."""
    idx = np.arange(p**3)
    return idx // (p * p), (idx // p) % p, idx % p


def heisenberg(p: int) -> GroupTable:
    """Order-p^3 group with law (i,j,k)*(r,s,t) = (i+r, j+s, k+t-r*j) mod p."""
    if not is_prime(p):
        raise ValueError("p must be prime")
    i, j, k = heisenberg_coordinates(p)
    ii = i[:, None]
    jj = j[:, None]
    kk = k[:, None]
    rr = i[None, :]
    ss = j[None, :]
    tt = k[None, :]
    mul = ((ii + rr) % p * p + (jj + ss) % p) * p + (kk + tt - rr * jj) % p
    inv_idx = ((-i) % p * p + (-j) % p) * p + (-k - i * j) % p
    labels = [f"({a},{b},{c})" for a, b, c in zip(i, j, k)]
    return GroupTable(p**3, mul, inv_idx, 0, labels, f"heisenberg:{p}")


# ---------------------------------------------------------------------------
# unipotent upper-triangular groups


def _unipotent_positions(size: int, drop_corner: bool) -> list[tuple[int, int]]:
    pos = [(r, c) for r in range(size) for c in range(r + 1, size)]
    if drop_corner:
        pos.remove((0, size - 1))
    return pos


def _build_unipotent(n: int, p: int, drop_corner: bool, name: str) -> GroupTable:
    if n < 1 or n + 1 > 4:
        raise GroupSizeError("matrix size limited to (n+1) <= 4 for table materialization")
    if not is_prime(p):
        raise ValueError("p must be prime")
    size = n + 1
    pos = _unipotent_positions(size, drop_corner)
    order = p ** len(pos)
    if order > MAX_TABLE_ORDER:
        raise GroupSizeError(
            f"group of order {order} exceeds the table bound {MAX_TABLE_ORDER}"
        )
    mats = []
    for entries in product(range(p), repeat=len(pos)):
        m = np.eye(size, dtype=np.int64)
        for (r, c), v in zip(pos, entries):
            m[r, c] = v
        mats.append(m)
    stack = np.stack(mats)

    def key(m) -> tuple:
        return tuple(int(m[r, c]) for (r, c) in pos)

    index = {key(m): i for i, m in enumerate(mats)}
    mul = np.empty((order, order), dtype=np.int32)
    for i, m in enumerate(mats):
        prods = (m @ stack) % p
        mul[i] = [index[key(q)] for q in prods]
    identity = index[key(np.eye(size, dtype=np.int64))]
    inv = np.empty(order, dtype=np.int32)
    for i in range(order):
        inv[i] = int(np.nonzero(mul[i] == identity)[0][0])
    labels = [str(key(m)) for m in mats]
    G = GroupTable(order, mul, inv, identity, labels, name)
    G._cache["unipotent_positions"] = pos
    G._cache["unipotent_size"] = size
    return G


def unipotent(n: int, p: int) -> GroupTable:
    """U_{n+1}(F_p): unipotent upper-triangular (n+1)x(n+1) matrices."""
    return _build_unipotent(n, p, drop_corner=False, name=f"u:{n + 1},{p}")


def unipotent_bar(n: int, p: int) -> GroupTable:
    """U_{n+1}(F_p) with the (1, n+1) corner entry removed."""
    return _build_unipotent(n, p, drop_corner=True, name=f"ubar:{n + 1},{p}")


def unipotent_entry(G: GroupTable, r: int, c: int) -> np.ndarray:
    """The (r, c) matrix-entry coordinate of each element, as an array."""
    pos = G._cache["unipotent_positions"]
    idx = pos.index((r, c))
    return np.array([eval(G.labels[g])[idx] for g in range(G.order)], dtype=np.int64)


# ---------------------------------------------------------------------------
# subgroups, quotients, homomorphisms


@dataclass(eq=False)
class Subgroup:
    table: GroupTable
    embed: np.ndarray  # index of each subgroup element inside the parent


def subgroup(G: GroupTable, generators: list[int]) -> Subgroup:
    """Closure of the generators, as a group table plus embedding."""
    seen = {G.identity}
    frontier = [G.identity]
    while frontier:
        new = []
        for g in frontier:
            for s in generators:
                h = int(G.mul[g, s])
                if h not in seen:
                    seen.add(h)
                    new.append(h)
        frontier = new
    elems = sorted(seen)
    pos = {g: i for i, g in enumerate(elems)}
    n = len(elems)
    mul = np.empty((n, n), dtype=np.int32)
    for a, g in enumerate(elems):
        row = G.mul[g, elems]
        mul[a] = [pos[int(h)] for h in row]
    inv = np.array([pos[int(G.inv[g])] for g in elems], dtype=np.int32)
    labels = [G.label(g) for g in elems]
    H = GroupTable(n, mul, inv, pos[G.identity], labels, f"sub({G.name})")
    return Subgroup(H, np.array(elems, dtype=np.int32))


def subgroup_from_elements(G: GroupTable, elems: list[int]) -> Subgroup:
    """Like subgroup(), but the element set is given and verified closed."""
    elem_set = set(int(x) for x in elems)
    for a in elem_set:
        for b in elem_set:
            if int(G.mul[a, b]) not in elem_set:
                raise ValueError("element set is not closed under multiplication")
    return subgroup(G, sorted(elem_set))


@dataclass(eq=False)
class GroupHom:
    source: GroupTable
    target: GroupTable
    image: np.ndarray

    def __post_init__(self):
        self.image = np.asarray(self.image, dtype=np.int32)

    def is_valid(self) -> bool:
        img = self.image.astype(np.int64)
        if img[self.source.identity] != self.target.identity:
            return False
        return np.array_equal(img[self.source.mul], self.target.mul[img[:, None], img[None, :]])

    def is_surjective(self) -> bool:
        return len(set(self.image.tolist())) == self.target.order

    def kernel(self) -> list[int]:
        return [g for g in range(self.source.order) if self.image[g] == self.target.identity]


def center(G: GroupTable) -> list[int]:
    """Central elements, by exhaustive commutation."""
    return [g for g in range(G.order) if np.array_equal(G.mul[g, :], G.mul[:, g])]


def quotient_by_central(G: GroupTable, z: int) -> tuple[GroupTable, GroupHom]:
    """Quotient by the cyclic central subgroup generated by z."""
    if z not in center(G):
        raise ValueError("z is not central")
    zgrp = []
    cur = G.identity
    while cur not in zgrp:
        zgrp.append(cur)
        cur = int(G.mul[cur, z])
    coset_of = {}
    reps = []
    for g in range(G.order):
        if g in coset_of:
            continue
        idx = len(reps)
        reps.append(g)
        for h in zgrp:
            coset_of[int(G.mul[g, h])] = idx
    n = len(reps)
    mul = np.empty((n, n), dtype=np.int32)
    for a, g in enumerate(reps):
        for b, h in enumerate(reps):
            mul[a, b] = coset_of[int(G.mul[g, h])]
    identity = coset_of[G.identity]
    inv = np.array([coset_of[int(G.inv[g])] for g in reps], dtype=np.int32)
    Q = GroupTable(n, mul, inv, identity, [G.label(g) for g in reps], f"quot({G.name})")
    pi = GroupHom(G, Q, np.array([coset_of[g] for g in range(G.order)]))
    return Q, pi


def heisenberg_projection(G: GroupTable, axis: str) -> GroupHom:
    """Projection of heisenberg(p) onto cyclic(p) reading one exponent.

    axis "a" reads the middle exponent j (kernel contains the first generator
    and the center); axis "b" reads the leading exponent i.
    """
    p = round(G.order ** (1 / 3))
    if p**3 != G.order:
        raise ValueError("not a heisenberg table")
    i, j, _ = heisenberg_coordinates(p)
    img = j if axis == "a" else i
    return GroupHom(G, cyclic(p), img.astype(np.int32))


# ---------------------------------------------------------------------------
# isomorphism search (exhaustive, small orders only)


def minimal_generators(G: GroupTable) -> list[int]:
    gens: list[int] = []
    current = {G.identity}
    while len(current) < G.order:
        best_g, best = None, None
        for g in range(G.order):
            if g in current:
                continue
            cl = {int(x) for x in subgroup(G, gens + [g]).embed}
            if best is None or len(cl) > len(best):
                best_g, best = g, cl
            if len(cl) == G.order:
                break
        gens.append(best_g)
        current = best
    return gens


def find_isomorphism(G: GroupTable, H: GroupTable) -> np.ndarray | None:
    """Exhaustive isomorphism search; returns the image array or None."""
    if G.order != H.order:
        return None
    if G.order > MAX_ISO_ORDER:
        raise GroupSizeError(f"isomorphism search limited to order {MAX_ISO_ORDER}")
    orders_G = [G.element_order(g) for g in range(G.order)]
    orders_H = [H.element_order(h) for h in range(H.order)]
    if sorted(orders_G) != sorted(orders_H):
        return None
    gens = minimal_generators(G)
    candidates = [[h for h in range(H.order) if orders_H[h] == orders_G[g]] for g in gens]

    def try_images(images: list[int]) -> np.ndarray | None:
        img = {G.identity: H.identity}
        frontier = [G.identity]
        for g, h in zip(gens, images):
            if g in img and img[g] != h:
                return None
            img[g] = h
            frontier.append(g)
        while frontier:
            new = []
            for a in frontier:
                for g, h in zip(gens, images):
                    prod_g = int(G.mul[a, g])
                    prod_h = int(H.mul[img[a], h])
                    if prod_g in img:
                        if img[prod_g] != prod_h:
                            return None
                    else:
                        img[prod_g] = prod_h
                        new.append(prod_g)
            frontier = new
        if len(img) != G.order or len(set(img.values())) != G.order:
            return None
        arr = np.array([img[g] for g in range(G.order)], dtype=np.int32)
        if GroupHom(G, H, arr).is_valid():
            return arr
        return None

    for images in product(*candidates):
        arr = try_images(list(images))
        if arr is not None:
            return arr
    return None


# ---------------------------------------------------------------------------
# specifier mini-language: name ':' ints; 'prod:' composes left-associatively


_CONSTRUCTORS = {
    "cyclic": (cyclic, 1),
    "heisenberg": (heisenberg, 1),
    "u": (lambda size, p: unipotent(size - 1, p), 2),
    "ubar": (lambda size, p: unipotent_bar(size - 1, p), 2),
}


def parse_group(spec: str) -> GroupTable:
    spec = spec.strip()
    if spec.startswith("prod:"):
        parts = _split_product(spec[len("prod:"):])
        if len(parts) < 2:
            raise ParseError("prod: needs at least two components")
        G = parse_group(parts[0])
        for part in parts[1:]:
            G = direct_product(G, parse_group(part))
        return G
    name, _, rest = spec.partition(":")
    if name not in _CONSTRUCTORS:
        raise ParseError(f"unknown group name {name!r} in specifier {spec!r}")
    fn, arity = _CONSTRUCTORS[name]
    try:
        args = [int(x) for x in rest.split(",")] if rest else []
    except ValueError:
        raise ParseError(f"non-integer argument in specifier {spec!r}") from None
    if len(args) != arity:
        raise ParseError(f"{name} takes {arity} integer argument(s), got {len(args)}")
    return fn(*args)


def _split_product(rest: str) -> list[str]:
    """Split "heisenberg:3,cyclic:3" into components; bare integers attach
    to the preceding component (so "u:4,2,cyclic:3" parses as two groups)."""
    parts: list[str] = []
    for seg in rest.split(","):
        seg = seg.strip()
        if seg and seg.lstrip("-").isdigit() and parts:
            parts[-1] += "," + seg
        else:
            parts.append(seg)
    return parts
