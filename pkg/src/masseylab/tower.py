"""Kummer quotient rings with Galois actions, norms, and the p^3 tower.

A KummerAlgebra is F_ell(t)[x_0, .., x_{m-1}] / (x_i^p - r_i) where each
relation r_i only involves generators below i, so towers where the top
relation lives in a lower layer (x_w^p = w with w in the middle layer) fit
the same machinery as plain Kummer layers.  All coefficients are RatFunc
values and all arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fields import (
    ParseError,
    PrimeFieldSpec,
    RatFunc,
    SeededStream,
    ff_kernel_vector,
    ff_solve,
    is_pth_power,
    kummer_independent,
    parse_ring_expr,
    prime_field_spec,
)
from .groups import GroupHom, GroupTable, heisenberg, heisenberg_index


class NonUnitError(ArithmeticError):
    """Inversion failed; carries a kernel witness (a zero divisor partner)."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class PreconditionError(ValueError):
    pass


class InstanceRejected(ValueError):
    pass


class ConstructionError(RuntimeError):
    pass


RETRY_BUDGET = 32


class KummerAlgebra:
    """Quotient ring with generators x_i, relations x_i^p = r_i.

    gens is a list of (name, relation) where relation is a RatFunc constant
    or a coefficient dict over the earlier generators.
    """

    def __init__(self, spec: PrimeFieldSpec, gens: list[tuple[str, object]]):
        self.spec = spec
        self.ell = spec.ell
        self.p = spec.p
        self.rho = spec.rho
        self.names = tuple(name for name, _ in gens)
        self.m = len(gens)
        self.relations: list[dict[tuple, RatFunc]] = []
        for i, (_, rel) in enumerate(gens):
            if isinstance(rel, RatFunc):
                rel = {(0,) * self.m: rel}
            cleaned = {}
            for exps, coeff in rel.items():
                exps = tuple(exps)
                if len(exps) != self.m:
                    raise ValueError("relation exponent width mismatch")
                if any(exps[j] for j in range(i, self.m)):
                    raise ValueError("relation must only involve earlier generators")
                if coeff:
                    cleaned[exps] = coeff
            self.relations.append(cleaned)

    @property
    def rank(self) -> int:
        return self.p**self.m

    def same_as(self, other: "KummerAlgebra") -> bool:
        return self is other or (
            self.spec == other.spec
            and self.names == other.names
            and self.relations == other.relations
        )

    # -- element constructors

    def element(self, coeffs: dict) -> "TowerElement":
        return TowerElement(self, coeffs)

    def from_base(self, r) -> "TowerElement":
        if isinstance(r, int):
            r = RatFunc.const(r, self.ell)
        return TowerElement(self, {(0,) * self.m: r})

    @property
    def zero(self) -> "TowerElement":
        return TowerElement(self, {})

    @property
    def one(self) -> "TowerElement":
        return self.from_base(1)

    @property
    def t(self) -> "TowerElement":
        return self.from_base(RatFunc.t(self.ell))

    def gen(self, i: int) -> "TowerElement":
        e = [0] * self.m
        e[i] = 1
        return TowerElement(self, {tuple(e): RatFunc.const(1, self.ell)})

    def basis_exponents(self) -> list[tuple]:
        out = [()]
        for _ in range(self.m):
            out = [e + (k,) for e in out for k in range(self.p)]
        # fix ordering: leftmost generator varies slowest
        return sorted(out)

    def embed(self, elem: "TowerElement", gen_map: list[int]) -> "TowerElement":
        """Reinterpret an element of a smaller algebra; gen_map sends each of
        its generators to a generator index here (relations must match)."""
        coeffs = {}
        for exps, c in elem.coeffs.items():
            new = [0] * self.m
            for src, dst in enumerate(gen_map):
                new[dst] = exps[src]
            coeffs[tuple(new)] = c
        return TowerElement(self, coeffs)

    def _reduce_term(self, exps: tuple, coeff: RatFunc, out: dict) -> None:
        """Accumulate coeff * x^exps into out, reducing exponents >= p."""
        stack = [(exps, coeff)]
        while stack:
            e, c = stack.pop()
            hot = next((i for i in range(self.m - 1, -1, -1) if e[i] >= self.p), None)
            if hot is None:
                key = e
                prev = out.get(key)
                c2 = c if prev is None else prev + c
                if c2:
                    out[key] = c2
                elif prev is not None:
                    del out[key]
                continue
            base = list(e)
            base[hot] -= self.p
            for rel_exps, rel_c in self.relations[hot].items():
                merged = tuple(b + r for b, r in zip(base, rel_exps))
                stack.append((merged, c * rel_c))


class TowerElement:
    __slots__ = ("alg", "coeffs", "_hash")

    def __init__(self, alg: KummerAlgebra, coeffs: dict):
        self.alg = alg
        clean = {}
        for exps, c in coeffs.items():
            if isinstance(c, int):
                c = RatFunc.const(c, alg.ell)
            if c:
                clean[tuple(exps)] = c
        self.coeffs = clean
        self._hash = None

    # -- ring structure

    def _check(self, other: "TowerElement") -> None:
        if self.alg is not other.alg:
            raise ValueError("elements of different algebras")

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.coeffs)
        for exps, c in other.coeffs.items():
            prev = out.get(exps)
            s = c if prev is None else prev + c
            if s:
                out[exps] = s
            elif prev is not None:
                del out[exps]
        return TowerElement(self.alg, out)

    def _coerce(self, other) -> "TowerElement":
        if isinstance(other, TowerElement):
            self._check(other)
            return other
        if isinstance(other, (int, RatFunc)):
            return self.alg.from_base(other)
        raise TypeError(f"cannot coerce {other!r}")

    def __neg__(self):
        return TowerElement(self.alg, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        if isinstance(other, (int, RatFunc)):
            if isinstance(other, int):
                other = RatFunc.const(other, self.alg.ell)
            return TowerElement(self.alg, {e: c * other for e, c in self.coeffs.items()})
        self._check(other)
        out: dict = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                merged = tuple(a + b for a, b in zip(e1, e2))
                self.alg._reduce_term(merged, c1 * c2, out)
        return TowerElement(self.alg, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.invert() ** (-k)
        out = self.alg.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, RatFunc)):
            other = self.alg.from_base(other)
        if not isinstance(other, TowerElement):
            return NotImplemented
        return self.alg.same_as(other.alg) and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.coeffs.items()))
        return self._hash

    def __bool__(self):
        return bool(self.coeffs)

    # -- structure queries

    def is_base(self) -> bool:
        zero_key = (0,) * self.alg.m
        return all(e == zero_key for e in self.coeffs)

    def base_value(self) -> RatFunc:
        if not self.coeffs:
            return RatFunc.const(0, self.alg.ell)
        if not self.is_base():
            raise ValueError("element is not in the base field")
        return next(iter(self.coeffs.values()))

    def coefficient(self, exps: tuple) -> RatFunc:
        return self.coeffs.get(tuple(exps), RatFunc.const(0, self.alg.ell))

    def invert(self) -> "TowerElement":
        """Inverse by solving the rank-p^m linear system e * x = 1."""
        alg = self.alg
        if not self.coeffs:
            raise NonUnitError("zero is not a unit", witness=alg.one)
        if self.is_base():
            return alg.from_base(self.base_value().inverse())
        basis = alg.basis_exponents()
        pos = {e: i for i, e in enumerate(basis)}
        cols = []
        for e in basis:
            col_elem = self * TowerElement(alg, {e: RatFunc.const(1, alg.ell)})
            col = [RatFunc.const(0, alg.ell)] * len(basis)
            for exps, c in col_elem.coeffs.items():
                col[pos[exps]] = c
            cols.append(col)
        rows = [[cols[j][i] for j in range(len(basis))] for i in range(len(basis))]
        rhs = [RatFunc.const(0, alg.ell)] * len(basis)
        rhs[pos[(0,) * alg.m]] = RatFunc.const(1, alg.ell)
        x = ff_solve(rows, rhs)
        if x is None:
            kv = ff_kernel_vector(rows)
            witness = TowerElement(alg, {e: kv[i] for i, e in enumerate(basis)})
            raise NonUnitError("element is a zero divisor", witness=witness)
        out = TowerElement(alg, {e: x[i] for i, e in enumerate(basis)})
        assert self * out == alg.one
        return out

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for exps in sorted(self.coeffs):
            c = self.coeffs[exps]
            mono = "*".join(
                f"{self.alg.names[i]}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(exps)
                if e
            )
            cs = str(c)
            if "/" in cs or "+" in cs[1:]:
                cs = f"({cs})"
            parts.append(f"{cs}*{mono}" if mono else cs)
        return " + ".join(parts)

    def __repr__(self):
        return f"<{self}>"


# ---------------------------------------------------------------------------
# Galois automorphisms


class GaloisAuto:
    """Ring automorphism fixing the base field, given by generator images."""

    __slots__ = ("alg", "images", "_powers", "_key")

    def __init__(self, alg: KummerAlgebra, images: list[TowerElement], validate: bool = True):
        self.alg = alg
        self.images = tuple(images)
        self._powers: list[list[TowerElement] | None] = [None] * alg.m
        self._key = None
        if len(self.images) != alg.m:
            raise ValueError("need one image per generator")
        if validate:
            for i, img in enumerate(self.images):
                rel = TowerElement(alg, dict(alg.relations[i]))
                if img**alg.p != self.apply(rel):
                    raise ConstructionError(
                        f"image of generator {alg.names[i]} does not respect its relation"
                    )

    @staticmethod
    def identity(alg: KummerAlgebra) -> "GaloisAuto":
        return GaloisAuto(alg, [alg.gen(i) for i in range(alg.m)], validate=False)

    def _gen_power(self, i: int, k: int) -> TowerElement:
        if self._powers[i] is None:
            pows = [self.alg.one]
            for _ in range(self.alg.p - 1):
                pows.append(pows[-1] * self.images[i])
            self._powers[i] = pows
        return self._powers[i][k]

    def apply(self, e: TowerElement) -> TowerElement:
        if e.alg is not self.alg:
            raise ValueError("element of a different algebra")
        out = self.alg.zero
        for exps, c in e.coeffs.items():
            term = self.alg.from_base(c)
            for i, k in enumerate(exps):
                if k:
                    term = term * self._gen_power(i, k)
            out = out + term
        return out

    __call__ = apply

    def compose(self, other: "GaloisAuto") -> "GaloisAuto":
        """self after other."""
        return GaloisAuto(self.alg, [self.apply(img) for img in other.images], validate=False)

    def power(self, k: int) -> "GaloisAuto":
        out = GaloisAuto.identity(self.alg)
        for _ in range(k):
            out = self.compose(out)
        return out

    def is_identity(self) -> bool:
        return all(self.images[i] == self.alg.gen(i) for i in range(self.alg.m))

    def key(self):
        if self._key is None:
            self._key = tuple(
                tuple(sorted(img.coeffs.items())) for img in self.images
            )
        return self._key

    def __eq__(self, other):
        return isinstance(other, GaloisAuto) and self.alg is other.alg and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def order(self, bound: int = 512) -> int:
        cur = self
        for k in range(1, bound + 1):
            if cur.is_identity():
                return k
            cur = self.compose(cur)
        raise ConstructionError("automorphism order exceeds bound")


def subgroup_elements(gens: list[GaloisAuto]) -> list[GaloisAuto]:
    """Closure of the generators under composition (deterministic order)."""
    if not gens:
        raise ValueError("need at least one generator")
    alg = gens[0].alg
    identity = GaloisAuto.identity(alg)
    seen = {identity.key(): identity}
    frontier = [identity]
    while frontier:
        new = []
        for g in frontier:
            for s in gens:
                h = s.compose(g)
                if h.key() not in seen:
                    seen[h.key()] = h
                    new.append(h)
        frontier = new
    return list(seen.values())


def norm(e: TowerElement, gens: list[GaloisAuto]) -> TowerElement:
    """Product of sigma(e) over the subgroup generated by gens.

    The result is checked to be invariant under the subgroup.
    """
    elements = subgroup_elements(gens)
    out = e.alg.one
    for s in elements:
        out = out * s.apply(e)
    for s in gens:
        if s.apply(out) != out:
            raise ConstructionError("norm is not invariant under the subgroup")
    return out


def weighted_conjugate_product(v: TowerElement, sigma: GaloisAuto) -> TowerElement:
    """w = prod_{i=0}^{p-1} sigma^i(v)^i.

    Satisfies sigma(w) * N(v) = v^p * w with N the norm along <sigma>; the
    identity is verified exactly.
    """
    p = v.alg.p
    w = v.alg.one
    cur = v
    nrm = v
    for i in range(1, p):
        cur = sigma.apply(cur)
        w = w * cur**i
        nrm = nrm * cur
    if sigma.apply(w) * nrm != v**p * w:
        raise ConstructionError("twist identity for the weighted product fails")
    return w


def hilbert90(u: TowerElement, g: GaloisAuto, seed: int = 0) -> TowerElement:
    """A unit S with g(S) = u * S, given that the norm of u along <g> is 1.

    Built from the twisted resolvent sum_i (prod_{m<i} g^m(u')) g^i(c) with
    u' the inverse of u and c drawn from the seeded stream, retried until
    the sum is a unit.
    """
    alg = u.alg
    p = alg.p
    nrm = alg.one
    cur = u
    for _ in range(p):
        nrm = nrm * cur
        cur = g.apply(cur)
    if nrm != alg.one:
        raise PreconditionError("norm of u along <g> is not 1")
    u_inv = u.invert()
    prefixes = [alg.one]
    cur = u_inv
    for _ in range(1, p):
        prefixes.append(prefixes[-1] * cur)
        cur = g.apply(cur)
    stream = SeededStream(seed).fork(90)
    for _ in range(RETRY_BUDGET):
        c = TowerElement(
            alg,
            {
                exps: RatFunc.from_poly(stream.poly(alg.ell, 1), alg.ell)
                for exps in alg.basis_exponents()
            },
        )
        term = c
        total = alg.zero
        for i in range(p):
            total = total + prefixes[i] * term
            term = g.apply(term) if i + 1 < p else term
        # total = sum_i prefix_i * g^i(c)
        try:
            total.invert()
        except NonUnitError:
            continue
        assert g.apply(total) == u * total
        return total
    raise ConstructionError("resolvent was degenerate for all retries")


# ---------------------------------------------------------------------------
# two-layer norm identities


@dataclass
class NormIdentityReport:
    norms_equal: bool
    identity_left: bool
    identity_right: bool
    full_norm_one: bool

    def all_hold(self) -> bool:
        return self.norms_equal and self.identity_left and self.identity_right and self.full_norm_one


def verify_norm_identities(
    K: KummerAlgebra, s1: GaloisAuto, s2: GaloisAuto, v1: TowerElement, v2: TowerElement
) -> NormIdentityReport:
    """Exact replay of the two twist identities in K = F[x1, x2].

    With u = v2/v1 and w_i the weighted conjugate products, the norm of u to
    the s2-layer equals s2(w1)/w1 and the norm to the s1-layer inverts to
    s1(w2)/w2; both are checked multiplicatively (no division).
    """
    n1 = norm(v1, [s1])
    n2 = norm(v2, [s2])
    if n1 != n2:
        return NormIdentityReport(False, False, False, False)
    u = v2 * v1.invert()
    w1 = weighted_conjugate_product(v2, s2)
    w2 = weighted_conjugate_product(v1, s1)
    norm_to_f2 = norm(u, [s1])
    norm_to_f1 = norm(u, [s2])
    left = s2.apply(w1) == norm_to_f2 * w1
    right = w2 == norm_to_f1 * s1.apply(w2)
    full = norm(u, [s1, s2]) == K.one
    return NormIdentityReport(True, left, right, full)


# ---------------------------------------------------------------------------
# the degree-p^3 tower


@dataclass(eq=False)
class TowerDescription:
    spec: PrimeFieldSpec
    b: RatFunc
    v: TowerElement  # element of the rank-p base layer algebra
    a: RatFunc
    w: TowerElement  # element of the rank-p base layer algebra
    algebra: KummerAlgebra
    base_layer: KummerAlgebra
    sigma_a: GaloisAuto
    sigma_b: GaloisAuto
    tau: GaloisAuto
    seed: int
    checks: dict = field(default_factory=dict)
    _group_cache: tuple | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        named = ("independence", "w_identity", "galois_order", "phi_coboundary", "res_chi_w")
        out = {
            "ell": self.spec.ell,
            "p": self.spec.p,
            "b": str(self.b),
            "v": str(self.v),
            "a": str(self.a),
            "w": str(self.w),
            "group": f"heisenberg:{self.spec.p}",
            "checks": {k: bool(self.checks.get(k, False)) for k in named},
        }
        if "w_not_pth_power" in self.checks:
            out["w_not_pth_power"] = bool(self.checks["w_not_pth_power"])
        return out


def base_layer(ell: int, p: int, b: RatFunc) -> tuple[KummerAlgebra, GaloisAuto]:
    """The rank-p layer F[x]/(x^p - b) with its canonical generator action."""
    spec = prime_field_spec(ell, p)
    alg = KummerAlgebra(spec, [("x", b)])
    sigma = GaloisAuto(alg, [alg.gen(0) * spec.rho])
    return alg, sigma


def parse_layer_element(s: str, alg: KummerAlgebra) -> TowerElement:
    """Literal like "x+t" for an element of a one-generator layer."""
    atoms = {"x": alg.gen(0), "t": alg.t}
    return parse_ring_expr(s, atoms, lambda n: alg.from_base(n))


def build_tower(ell: int, p: int, b: RatFunc, v: TowerElement, seed: int = 0) -> TowerDescription:
    """Construct the rank-p^3 algebra F[x_b, x_a, x_w] and its three actions.

    The norm of v down the x_b layer is taken as a, so the equal-norm
    hypothesis holds by construction; the instance is rejected when a is a
    p-th power or fails Kummer independence from b.
    """
    spec = prime_field_spec(ell, p)
    if is_pth_power(b, p)[0]:
        raise InstanceRejected("b is a p-th power in the base field")
    fb, sigma = base_layer(ell, p, b)
    if v.alg is not fb:
        v = fb.element({(e[0],): c for e, c in v.coeffs.items()})
    try:
        v.invert()
    except NonUnitError as exc:
        raise InstanceRejected("v is not a unit in the x_b layer") from exc
    n = norm(v, [sigma])
    if not n.is_base():
        raise ConstructionError("norm did not land in the base field")
    a = n.base_value()
    if a.is_zero() or is_pth_power(a, p)[0]:
        raise InstanceRejected("norm of v is a p-th power (or zero)")
    independent = kummer_independent(a, b, p)
    if not independent:
        raise InstanceRejected("a and b are not Kummer independent")
    w = weighted_conjugate_product(v, sigma)

    # rank-p^3 algebra: generators x_b, x_a, x_w with x_w^p = w(x_b)
    w_rel = {(e[0], 0, 0): c for e, c in w.coeffs.items()}
    K = KummerAlgebra(spec, [("xb", b), ("xa", a), ("xw", w_rel)])
    xb, xa, xw = K.gen(0), K.gen(1), K.gen(2)
    rho = spec.rho
    v0 = K.embed(v, [0])
    a_inv = K.from_base(a.inverse())
    sigma_a = GaloisAuto(K, [xb, xa * rho, xw])
    tau = GaloisAuto(K, [xb, xa, xw * rho])
    sigma_b_img_w = v0 * a_inv * xa ** (p - 1) * xw  # (v0 / x_a) * x_w
    sigma_b = GaloisAuto(K, [xb * rho, xa, sigma_b_img_w])

    checks = {
        "independence": independent,
        "w_identity": sigma.apply(w) * n == v**p * w,
    }
    return TowerDescription(spec, b, v, a, w, K, fb, sigma_a, sigma_b, tau, seed, checks)


def random_tower(ell: int, p: int, b: RatFunc, seed: int) -> TowerDescription:
    """Retry random units v in the x_b layer until the gates pass."""
    fb, _ = base_layer(ell, p, b)
    stream = SeededStream(seed).fork(5)
    last = None
    for _ in range(RETRY_BUDGET):
        coeffs = {}
        for i in range(p):
            poly = stream.poly(ell, 1)
            if poly:
                coeffs[(i,)] = RatFunc.from_poly(poly, ell)
        if not coeffs:
            continue
        v = fb.element(coeffs)
        try:
            return build_tower(ell, p, b, v, seed)
        except InstanceRejected as exc:
            last = exc
    raise ConstructionError(f"retry budget exhausted generating a tower: {last}")


def galois_group_of_tower(T: TowerDescription) -> tuple[GroupTable, GroupHom]:
    """Close the three actions under composition and match the p^3 law.

    Returns the composition table of the words sb^i sa^j tau^k together with
    the verified isomorphism onto heisenberg(p) sending the word to (i,j,k).
    """
    if T._group_cache is not None:
        return T._group_cache[0], T._group_cache[1]
    p = T.spec.p
    sb_pows = [GaloisAuto.identity(T.algebra)]
    for _ in range(p - 1):
        sb_pows.append(T.sigma_b.compose(sb_pows[-1]))
    sa_pows = [GaloisAuto.identity(T.algebra)]
    for _ in range(p - 1):
        sa_pows.append(T.sigma_a.compose(sa_pows[-1]))
    tau_pows = [GaloisAuto.identity(T.algebra)]
    for _ in range(p - 1):
        tau_pows.append(T.tau.compose(tau_pows[-1]))
    index: dict = {}
    order: list[GaloisAuto | None] = [None] * (p**3)
    for i in range(p):
        for j in range(p):
            for k in range(p):
                wd = sb_pows[i].compose(sa_pows[j]).compose(tau_pows[k])
                if wd.key() in index:
                    raise ConstructionError("normal-form words collide; order below p^3")
                idx = heisenberg_index(p, i, j, k)
                index[wd.key()] = idx
                order[idx] = wd
    n = p**3
    mul = np.empty((n, n), dtype=np.int32)
    for gi in range(n):
        for hi in range(n):
            prod = order[gi].compose(order[hi])
            key = prod.key()
            if key not in index:
                raise ConstructionError("composition left the p^3 word set")
            mul[gi, hi] = index[key]
    heis = heisenberg(p)
    if not np.array_equal(mul, heis.mul):
        raise ConstructionError("composition table does not match the p^3 normal form")
    G = GroupTable(n, mul, heis.inv.copy(), 0, heis.labels, f"tower-gal:{T.spec.p}")
    iso = GroupHom(G, heis, np.arange(n, dtype=np.int32))
    if not iso.is_valid():
        raise ConstructionError("identification with the p^3 group is not a homomorphism")
    T.checks["galois_order"] = True
    T._group_cache = (G, iso, order)
    return G, iso


def chi_w_and_phi_check(T: TowerDescription) -> dict:
    """Coboundary and restriction identities on the realized Galois group.

    On the group of the tower, the central exponent reads off a 1-cochain
    whose coboundary equals the cup of the two coordinate characters; its
    restriction to the stabilizer of the x_b layer is the character of the
    top Kummer generator.  Both are verified on every tuple, plus the
    eigenvalue description of that character on the actual automorphisms.
    """
    from .cochains import Cochain, cup, differential, restrict
    from .groups import heisenberg_coordinates, subgroup

    p = T.spec.p
    G, _ = galois_group_of_tower(T)
    i, j, k = heisenberg_coordinates(p)
    chi_a = Cochain(G, p, 1, j)
    chi_b = Cochain(G, p, 1, i)
    phi = Cochain(G, p, 1, k)
    coboundary_ok = differential(phi) == cup(chi_a, chi_b)

    sub = subgroup(G, [heisenberg_index(p, 0, 1, 0), heisenberg_index(p, 0, 0, 1)])
    res = restrict(phi, sub)
    chi_w_vals = k[sub.embed]  # chi_w(sa^j tau^k) = k
    res_ok = np.array_equal(res.values, chi_w_vals % p)

    # eigenvalue check: each subgroup automorphism scales x_w by rho^chi_w
    words = T._group_cache[2]
    xw = T.algebra.gen(2)
    rho = T.spec.rho
    eig_ok = all(
        words[int(g)].apply(xw) == xw * pow(rho, int(chi_w_vals[a]), T.spec.ell)
        for a, g in enumerate(sub.embed)
    )
    T.checks["phi_coboundary"] = bool(coboundary_ok)
    T.checks["res_chi_w"] = bool(res_ok and eig_ok)
    return {"phi_coboundary": bool(coboundary_ok), "res_chi_w": bool(res_ok and eig_ok)}


def w_not_pth_power_check(T: TowerDescription) -> bool:
    """Verdict that w has no p-th root in the rank-p^2 layer.

    For w outside the base field the eigenvector argument applies verbatim
    once the independence gates hold (they were enforced at construction);
    the twist identity it relies on is re-verified here.  For w inside the
    base field the question reduces to p-th power tests against the Kummer
    span of a and b.
    """
    p = T.spec.p
    if not T.checks.get("independence"):
        return False
    if not T.checks.get("w_identity"):
        return False
    if T.w.is_base():
        w0 = T.w.base_value()
        return base_field_pth_power_in_span(w0, T.a, T.b, p)
    return True


def base_field_pth_power_in_span(w0: RatFunc, a: RatFunc, b: RatFunc, p: int) -> bool:
    """True iff w0 is NOT a p-th power in F(a^{1/p}, b^{1/p}).

    A base-field element becomes a p-th power there exactly when some twist
    w0 * a^i * b^j is one in the base field.
    """
    for i in range(p):
        for j in range(p):
            if is_pth_power(w0 * a**i * b**j, p)[0]:
                return False
    return True


def run_tower_pipeline(T: TowerDescription) -> TowerDescription:
    """Populate every check on a freshly built tower."""
    galois_group_of_tower(T)
    chi_w_and_phi_check(T)
    T.checks["w_not_pth_power"] = w_not_pth_power_check(T)
    return T
