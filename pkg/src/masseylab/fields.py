"""Exact arithmetic over prime fields F_ell and rational functions F_ell(t).

Polynomials in t are tuples of ints in [0, ell), ascending degree, with no
trailing zeros; () is the zero polynomial.  Everything in this module is
exact integer arithmetic; there is no floating point anywhere.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass

GENERATOR_NAME = "mt19937-v1"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class SeededStream:
    """Deterministic random stream; the only randomness source in the package."""

    name = GENERATOR_NAME

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._rng = random.Random(self.seed)

    def randrange(self, n: int) -> int:
        return self._rng.randrange(n)

    def randint(self, lo: int, hi: int) -> int:
        return self._rng.randrange(lo, hi + 1)

    def scalar(self, ell: int) -> int:
        return self._rng.randrange(ell)

    def nonzero_scalar(self, ell: int) -> int:
        return self._rng.randrange(1, ell)

    def poly(self, ell: int, deg: int) -> tuple:
        """Random polynomial of degree at most deg."""
        return pnorm(tuple(self._rng.randrange(ell) for _ in range(deg + 1)))

    def fork(self, salt: int) -> "SeededStream":
        mixed = (self.seed * 0x9E3779B97F4A7C15 + (salt + 1) * 0x632BE59BD9B4E019) % (1 << 63)
        return SeededStream(mixed)


class ParseError(ValueError):
    pass


# ---------------------------------------------------------------------------
# polynomial arithmetic on coefficient tuples


def pnorm(c) -> tuple:
    c = tuple(c)
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return c[:n]


def pdeg(f: tuple) -> int:
    return len(f) - 1


def padd(f: tuple, g: tuple, ell: int) -> tuple:
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = (out[i] + c) % ell
    return pnorm(out)


def pneg(f: tuple, ell: int) -> tuple:
    return tuple((-c) % ell for c in f)


def psub(f: tuple, g: tuple, ell: int) -> tuple:
    return padd(f, pneg(g, ell), ell)


def pscale(f: tuple, s: int, ell: int) -> tuple:
    s %= ell
    if s == 0:
        return ()
    return pnorm(tuple((c * s) % ell for c in f))


def pmul(f: tuple, g: tuple, ell: int) -> tuple:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return pnorm(tuple(c % ell for c in out))


def pdivmod(f: tuple, g: tuple, ell: int) -> tuple[tuple, tuple]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    dg = pdeg(g)
    inv_lead = pow(g[-1], ell - 2, ell)
    q = [0] * max(len(f) - dg, 0)
    for i in range(len(f) - 1, dg - 1, -1):
        c = r[i] % ell
        if c == 0:
            continue
        factor = (c * inv_lead) % ell
        q[i - dg] = factor
        for j, b in enumerate(g):
            r[i - dg + j] = (r[i - dg + j] - factor * b) % ell
    return pnorm(q), pnorm(c % ell for c in r)


def pdiv(f: tuple, g: tuple, ell: int) -> tuple:
    q, r = pdivmod(f, g, ell)
    if r:
        raise ValueError("non-exact polynomial division")
    return q


def pmod(f: tuple, g: tuple, ell: int) -> tuple:
    return pdivmod(f, g, ell)[1]


def pmonic(f: tuple, ell: int) -> tuple:
    if not f:
        return ()
    return pscale(f, pow(f[-1], ell - 2, ell), ell)


def pgcd(f: tuple, g: tuple, ell: int) -> tuple:
    while g:
        f, g = g, pmod(f, g, ell)
    return pmonic(f, ell)


def ppow(f: tuple, e: int, ell: int) -> tuple:
    out = (1,)
    base = f
    while e:
        if e & 1:
            out = pmul(out, base, ell)
        base = pmul(base, base, ell)
        e >>= 1
    return out


def ppow_mod(f: tuple, e: int, m: tuple, ell: int) -> tuple:
    out = (1,)
    base = pmod(f, m, ell)
    while e:
        if e & 1:
            out = pmod(pmul(out, base, ell), m, ell)
        base = pmod(pmul(base, base, ell), m, ell)
        e >>= 1
    return out


def pderiv(f: tuple, ell: int) -> tuple:
    return pnorm(tuple((i * f[i]) % ell for i in range(1, len(f))))


def peval(f: tuple, x: int, ell: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % ell
    return acc


# ---------------------------------------------------------------------------
# factorization (square-free + distinct-degree + Cantor-Zassenhaus)


def _squarefree_parts(f: tuple, ell: int) -> list[tuple[tuple, int]]:
    """Decompose monic f as a product of (squarefree factor, multiplicity)."""
    if pdeg(f) <= 0:
        return []
    df = pderiv(f, ell)
    if not df:
        # f = h^ell; over the prime field the coefficients carry over as-is
        h = pnorm(tuple(f[i] for i in range(0, len(f), ell)))
        return [(g, m * ell) for g, m in _squarefree_parts(h, ell)]
    out = []
    c = pgcd(f, df, ell)
    w = pdiv(f, c, ell)
    i = 1
    while pdeg(w) > 0:
        y = pgcd(w, c, ell)
        fac = pdiv(w, y, ell)
        if pdeg(fac) > 0:
            out.append((fac, i))
        w = y
        c = pdiv(c, y, ell)
        i += 1
    if pdeg(c) > 0:
        h = pnorm(tuple(c[i] for i in range(0, len(c), ell)))
        out.extend((g, m * ell) for g, m in _squarefree_parts(h, ell))
    return out


def _distinct_degree(f: tuple, ell: int) -> list[tuple[int, tuple]]:
    """Split squarefree monic f into products of irreducibles of equal degree."""
    out = []
    cur = f
    xq = (0, 1)
    d = 0
    while pdeg(cur) > 0:
        d += 1
        if 2 * d > pdeg(cur):
            out.append((pdeg(cur), cur))
            break
        xq = ppow_mod(xq, ell, cur, ell)
        g = pgcd(psub(xq, (0, 1), ell), cur, ell)
        if pdeg(g) > 0:
            out.append((d, g))
            cur = pdiv(cur, g, ell)
            xq = pmod(xq, cur, ell)
    return out


def _equal_degree(f: tuple, d: int, ell: int, stream: SeededStream) -> list[tuple]:
    """Cantor-Zassenhaus split of f (product of irreducibles of degree d)."""
    if pdeg(f) == d:
        return [f]
    e = (ell**d - 1) // 2
    while True:
        r = pnorm(tuple(stream.scalar(ell) for _ in range(pdeg(f))))
        if pdeg(r) < 1:
            continue
        g = pgcd(r, f, ell)
        if 0 < pdeg(g) < pdeg(f):
            return _equal_degree(g, d, ell, stream) + _equal_degree(pdiv(f, g, ell), d, ell, stream)
        s = psub(ppow_mod(r, e, f, ell), (1,), ell)
        g = pgcd(s, f, ell)
        if 0 < pdeg(g) < pdeg(f):
            return _equal_degree(g, d, ell, stream) + _equal_degree(pdiv(f, g, ell), d, ell, stream)


def factor(f: tuple, ell: int, seed: int = 0) -> tuple[int, list[tuple[tuple, int]]]:
    """Factor f over F_ell.

    Returns (leading coefficient, [(monic irreducible, multiplicity), ...])
    with the factors sorted by (degree, coefficients).  Splitting randomness
    comes from the seed, so the result is reproducible.
    """
    f = pnorm(f)
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    if ell < 3 or not is_prime(ell):
        raise ValueError("ell must be an odd prime")
    lead = f[-1] % ell
    stream = SeededStream(seed).fork(7)
    found: dict[tuple, int] = {}
    for g, mult in _squarefree_parts(pmonic(f, ell), ell):
        for d, h in _distinct_degree(g, ell):
            for irr in _equal_degree(h, d, ell, stream):
                found[irr] = found.get(irr, 0) + mult
    return lead, sorted(found.items(), key=lambda kv: (pdeg(kv[0]), kv[0]))


# ---------------------------------------------------------------------------
# the base field F_ell(t)


@dataclass(frozen=True)
class PrimeFieldSpec:
    """A prime ell with a chosen primitive p-th root of unity rho."""

    ell: int
    p: int
    rho: int


def primitive_root(ell: int, p: int) -> int:
    """Element of exact multiplicative order p in F_ell; requires p | ell-1."""
    if not is_prime(ell) or not is_prime(p):
        raise ValueError("ell and p must be prime")
    if (ell - 1) % p != 0:
        raise ValueError(f"p does not divide ell-1: {p} does not divide {ell - 1}")
    e = (ell - 1) // p
    for x in range(2, ell):
        rho = pow(x, e, ell)
        if rho != 1:
            assert pow(rho, p, ell) == 1
            return rho
    raise AssertionError("no primitive root found")  # unreachable for prime ell


def prime_field_spec(ell: int, p: int) -> PrimeFieldSpec:
    return PrimeFieldSpec(ell, p, primitive_root(ell, p))


class RatFunc:
    """A rational function num/den over F_ell, in canonical form.

    Canonical means: den is monic, gcd(num, den) = 1.  Equality and hashing
    are structural, so canonical form makes them semantic.
    """

    __slots__ = ("num", "den", "ell")

    def __init__(self, num, den=(1,), ell=None, _canonical=False):
        if ell is None:
            raise ValueError("RatFunc needs an explicit modulus ell")
        num = pnorm(tuple(c % ell for c in num))
        den = pnorm(tuple(c % ell for c in den))
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not _canonical:
            if not num:
                den = (1,)
            else:
                g = pgcd(num, den, ell)
                if pdeg(g) > 0:
                    num = pdiv(num, g, ell)
                    den = pdiv(den, g, ell)
                if den[-1] != 1:
                    inv = pow(den[-1], ell - 2, ell)
                    num = pscale(num, inv, ell)
                    den = pscale(den, inv, ell)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "ell", ell)

    def __setattr__(self, *a):
        raise AttributeError("RatFunc is immutable")

    # -- constructors

    @staticmethod
    def const(c: int, ell: int) -> "RatFunc":
        c %= ell
        return RatFunc((c,) if c else (), (1,), ell, _canonical=True)

    @staticmethod
    def t(ell: int) -> "RatFunc":
        return RatFunc((0, 1), (1,), ell, _canonical=True)

    @staticmethod
    def from_poly(f: tuple, ell: int) -> "RatFunc":
        return RatFunc(f, (1,), ell, _canonical=True)

    # -- predicates

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.num == (1,) and self.den == (1,)

    def is_poly(self) -> bool:
        return self.den == (1,)

    def __bool__(self) -> bool:
        return bool(self.num)

    # -- arithmetic

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.ell != self.ell:
                raise ValueError("mixed moduli")
            return other
        if isinstance(other, int):
            return RatFunc.const(other, self.ell)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        ell = self.ell
        if self.den == (1,) and o.den == (1,):
            return RatFunc(padd(self.num, o.num, ell), (1,), ell, _canonical=True)
        num = padd(pmul(self.num, o.den, ell), pmul(o.num, self.den, ell), ell)
        return RatFunc(num, pmul(self.den, o.den, ell), ell)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(pneg(self.num, self.ell), self.den, self.ell, _canonical=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        ell = self.ell
        if self.den == (1,) and o.den == (1,):
            return RatFunc(pmul(self.num, o.num, ell), (1,), ell, _canonical=True)
        return RatFunc(pmul(self.num, o.num, ell), pmul(self.den, o.den, ell), ell)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num, self.ell)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = RatFunc.const(1, self.ell)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # -- structure

    def __eq__(self, other):
        if isinstance(other, int):
            other = RatFunc.const(other, self.ell)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.ell == other.ell and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den, self.ell))

    def evaluate(self, x: int) -> int:
        """Value at t = x; raises ZeroDivisionError on a pole."""
        d = peval(self.den, x, self.ell)
        if d == 0:
            raise ZeroDivisionError("pole at evaluation point")
        return (peval(self.num, x, self.ell) * pow(d, self.ell - 2, self.ell)) % self.ell

    def __str__(self):
        if self.den == (1,):
            return poly_str(self.num)
        return f"({poly_str(self.num)})/({poly_str(self.den)})"

    def __repr__(self):
        return f"RatFunc({self}, ell={self.ell})"


# ---------------------------------------------------------------------------
# p-th power testing and Kummer independence


def _const_pth_root(c: int, p: int, ell: int) -> int | None:
    c %= ell
    for d in range(1, ell):
        if pow(d, p, ell) == c:
            return d
    return None


def is_pth_power(f: RatFunc, p: int, seed: int = 0) -> tuple[bool, RatFunc | None]:
    """Decide whether f is a p-th power in F_ell(t); return a witness root if so."""
    if f.is_zero():
        raise ValueError("zero is excluded from p-th power testing")
    ell = f.ell
    lead_num, num_fac = factor(f.num, ell, seed) if pdeg(f.num) >= 0 else (f.num[0], [])
    _, den_fac = factor(f.den, ell, seed) if pdeg(f.den) > 0 else (1, [])
    exps: dict[tuple, int] = {}
    for g, e in num_fac:
        exps[g] = exps.get(g, 0) + e
    for g, e in den_fac:
        exps[g] = exps.get(g, 0) - e
    if any(e % p for e in exps.values()):
        return False, None
    root_c = _const_pth_root(lead_num, p, ell)
    if root_c is None:
        return False, None
    wit_num, wit_den = (root_c,), (1,)
    for g, e in exps.items():
        if e > 0:
            wit_num = pmul(wit_num, ppow(g, e // p, ell), ell)
        elif e < 0:
            wit_den = pmul(wit_den, ppow(g, -e // p, ell), ell)
    return True, RatFunc(wit_num, wit_den, ell)


def kummer_independent(a: RatFunc, b: RatFunc, p: int) -> bool:
    """True iff a^i b^j is a p-th power only for i = j = 0 (mod p)."""
    if a.is_zero() or b.is_zero():
        raise ValueError("Kummer independence needs nonzero elements")
    for i in range(p):
        for j in range(p):
            if i == 0 and j == 0:
                continue
            if is_pth_power(a**i * b**j, p)[0]:
                return False
    return True


# ---------------------------------------------------------------------------
# generic linear algebra over F_ell(t)   (entries are RatFunc)


def ff_rref(rows: list[list[RatFunc]]) -> tuple[list[list[RatFunc]], list[int]]:
    """Row-reduce in place; first-nonzero pivots in column order."""
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def ff_rank(rows: list[list[RatFunc]]) -> int:
    return len(ff_rref([list(r) for r in rows])[1])


def ff_solve(a: list[list[RatFunc]], b: list[RatFunc]) -> list[RatFunc] | None:
    """One solution of a @ x = b over F_ell(t), or None."""
    if not a:
        return None
    ell = b[0].ell if b else a[0][0].ell
    aug = [list(row) + [bv] for row, bv in zip(a, b)]
    red, pivots = ff_rref(aug)
    ncols = len(a[0])
    if ncols in pivots:
        return None
    x = [RatFunc.const(0, ell) for _ in range(ncols)]
    for r, c in enumerate(pivots):
        x[c] = red[r][ncols]
    return x


def ff_kernel_vector(a: list[list[RatFunc]]) -> list[RatFunc] | None:
    """One nonzero kernel vector of a, or None if the kernel is trivial."""
    if not a:
        return None
    ell = a[0][0].ell
    red, pivots = ff_rref([list(r) for r in a])
    ncols = len(a[0])
    free = next((c for c in range(ncols) if c not in pivots), None)
    if free is None:
        return None
    v = [RatFunc.const(0, ell) for _ in range(ncols)]
    v[free] = RatFunc.const(1, ell)
    for r, c in enumerate(pivots):
        v[c] = -red[r][free]
    return v


# ---------------------------------------------------------------------------
# literals: "c0,c1,c2" comma form, "1+2t+t^3" symbolic, "NUM/DEN" rational


def poly_str(f: tuple) -> str:
    if not f:
        return "0"
    parts = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            coeff = "" if c == 1 else str(c)
            power = "t" if i == 1 else f"t^{i}"
            parts.append(coeff + power)
    return "+".join(parts)


_TOKEN_RE = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z_0-9]*|[-+*^()])")


def _tokenize(s: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(s):
        m = _TOKEN_RE.match(s, pos)
        if not m:
            raise ParseError(f"bad character at position {pos}: {s[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    # implicit multiplication: "2t", "t(", ")(", "3(" etc.
    out = []
    for tok in tokens:
        if out and _is_value_end(out[-1]) and _is_value_start(tok):
            out.append("*")
        out.append(tok)
    return out


def _is_value_end(tok: str) -> bool:
    return tok == ")" or tok.isdigit() or tok[0].isalpha() or tok[0] == "_"


def _is_value_start(tok: str) -> bool:
    return tok == "(" or tok.isdigit() or tok[0].isalpha() or tok[0] == "_"


class _ExprParser:
    def __init__(self, tokens, atoms, const):
        self.toks = tokens
        self.pos = 0
        self.atoms = atoms
        self.const = const

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self):
        v = self.expr()
        if self.peek() is not None:
            raise ParseError(f"unexpected token {self.peek()!r} at position {self.pos}")
        return v

    def expr(self):
        sign = 1
        while self.peek() in ("+", "-"):
            if self.take() == "-":
                sign = -sign
        v = self.term()
        if sign < 0:
            v = -v
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            v = v + rhs if op == "+" else v - rhs
        return v

    def term(self):
        v = self.power()
        while self.peek() == "*":
            self.take()
            v = v * self.power()
        return v

    def power(self):
        v = self.atom()
        if self.peek() == "^":
            self.take()
            e = self.take()
            if e is None or not e.isdigit():
                raise ParseError("exponent must be a nonnegative integer")
            v = v ** int(e)
        return v

    def atom(self):
        tok = self.take()
        if tok is None:
            raise ParseError("unexpected end of expression")
        if tok == "(":
            v = self.expr()
            if self.take() != ")":
                raise ParseError("missing closing parenthesis")
            return v
        if tok.isdigit():
            return self.const(int(tok))
        if tok in self.atoms:
            return self.atoms[tok]
        raise ParseError(f"unknown name {tok!r}")


def parse_ring_expr(s: str, atoms: dict, const):
    """Parse +,-,*,^,() expressions over a commutative ring.

    atoms maps variable names to ring elements; const builds one from an int.
    """
    return _ExprParser(_tokenize(s), atoms, const).parse()


def parse_poly(s: str, ell: int) -> tuple:
    s = s.strip()
    if re.fullmatch(r"[-\d\s,]+", s) and ("," in s):
        return pnorm(tuple(int(c) % ell for c in s.split(",")))
    v = parse_ring_expr(s, {"t": RatFunc.t(ell)}, lambda n: RatFunc.const(n, ell))
    if not v.is_poly():
        raise ParseError("expected a polynomial, got a proper rational function")
    return v.num


def parse_ratfunc(s: str, ell: int) -> RatFunc:
    s = s.strip()
    if s.count("/") > 1:
        raise ParseError("at most one '/' in a rational literal")
    if "/" in s:
        num_s, den_s = s.split("/")
        den = parse_poly(den_s, ell)
        if not den:
            raise ParseError("zero denominator")
        return RatFunc(parse_poly(num_s, ell), den, ell)
    return RatFunc.from_poly(parse_poly(s, ell), ell)
