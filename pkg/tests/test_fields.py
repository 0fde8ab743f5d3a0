import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from masseylab import fields as F
from masseylab.fields import RatFunc


class TestPrimitiveRoot:
    def test_7_3(self):
        rho = F.primitive_root(7, 3)
        assert rho in (2, 4)
        assert pow(rho, 3, 7) == 1 and rho != 1

    def test_3_2(self):
        assert F.primitive_root(3, 2) == 2

    def test_5_3_rejected(self):
        with pytest.raises(ValueError):
            F.primitive_root(5, 3)

    @pytest.mark.parametrize("ell,p", [(7, 2), (7, 3), (11, 5), (13, 3), (13, 2)])
    def test_exact_order(self, ell, p):
        rho = F.primitive_root(ell, p)
        assert pow(rho, p, ell) == 1
        for k in range(1, p):
            assert pow(rho, k, ell) != 1


class TestFactor:
    def test_difference_of_squares(self):
        lead, fac = F.factor((6, 0, 1), 7)  # t^2 - 1
        assert lead == 1
        assert fac == [((1, 1), 1), ((6, 1), 1)]

    def test_pure_power(self):
        lead, fac = F.factor((0, 0, 0, 1), 7)
        assert lead == 1 and fac == [((0, 1), 3)]

    def test_irreducible_quadratic(self):
        # -1 is not a square mod 7
        _, fac = F.factor((1, 0, 1), 7)
        assert fac == [((1, 0, 1), 1)]

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            F.factor((), 7)

    @pytest.mark.parametrize("ell", [3, 7, 11, 13])
    def test_remultiplication_bulk(self, ell):
        stream = F.SeededStream(17 * ell)
        for _ in range(1000):
            f = stream.poly(ell, stream.randint(1, 30))
            if F.pdeg(f) < 1:
                continue
            lead, fac = F.factor(f, ell)
            prod = (lead,)
            for g, e in fac:
                prod = F.pmul(prod, F.ppow(g, e, ell), ell)
            assert prod == f
            for g, _ in fac:
                assert g[-1] == 1  # monic

    def test_frobenius_power_multiplicity(self):
        # (t+1)^3 over F_3 has zero derivative
        f = F.ppow((1, 1), 3, 3)
        _, fac = F.factor(f, 3)
        assert fac == [((1, 1), 3)]


class TestRatFunc:
    def test_canonical_form(self):
        f = RatFunc((0, 2), (0, 0, 2), 7)  # 2t / 2t^2 = 1/t
        assert f.num == (1,) and f.den == (0, 1)

    def test_equality_and_hash(self):
        a = RatFunc((1, 1), (0, 1), 5)
        b = RatFunc((2, 2), (0, 2), 5)
        assert a == b and hash(a) == hash(b)

    def test_field_ops(self):
        t = RatFunc.t(7)
        f = (t + 3) / (t**2 + 1)
        assert f * f.inverse() == 1
        assert f - f == 0
        assert (f + 1) * (f - 1) == f**2 - 1

    def test_evaluate(self):
        t = RatFunc.t(7)
        f = (t**2 + 1) / (t + 1)
        assert f.evaluate(2) == (5 * pow(3, 5, 7)) % 7
        with pytest.raises(ZeroDivisionError):
            f.evaluate(6)

    def test_pow_negative(self):
        t = RatFunc.t(5)
        assert t**-2 == (t**2).inverse()


class TestPthPower:
    def test_cube(self):
        ok, w = F.is_pth_power(RatFunc.t(7) ** 3, 3)
        assert ok and w == RatFunc.t(7)

    def test_not_cube_by_valuation(self):
        assert not F.is_pth_power(RatFunc.t(7), 3)[0]

    def test_not_cube_by_unit(self):
        # 3 is not a cube mod 7 since 3^2 = 2 != 1
        assert not F.is_pth_power(RatFunc.t(7) ** 3 * 3, 3)[0]

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            F.is_pth_power(RatFunc.const(0, 7), 3)

    @pytest.mark.parametrize("ell,p", [(3, 2), (7, 3), (13, 3)])
    def test_power_has_witness(self, ell, p):
        stream = F.SeededStream(ell * 31 + p)
        for _ in range(40):
            num = stream.poly(ell, 4)
            den = stream.poly(ell, 3)
            if not num or not den:
                continue
            f = RatFunc(num, den, ell)
            if f.is_zero():
                continue
            ok, w = F.is_pth_power(f**p, p)
            assert ok
            assert w**p == f**p

    def test_product_of_powers(self):
        t = RatFunc.t(7)
        f, h = (t + 1) ** 3, (t + 2) ** 3 / t**3
        assert F.is_pth_power(f, 3)[0] and F.is_pth_power(h, 3)[0]
        assert F.is_pth_power(f * h, 3)[0]
        # scaling a cube by a non-cube unit breaks it
        assert not F.is_pth_power(f * 3, 3)[0]


class TestKummerIndependent:
    def test_distinct_irreducibles(self):
        t = RatFunc.t(7)
        assert F.kummer_independent(t, t + 1, 3)

    def test_dependent_product(self):
        t = RatFunc.t(7)
        assert not F.kummer_independent(t, t * (t + 1) ** 3, 3)

    def test_power_never_independent(self):
        assert not F.kummer_independent(RatFunc.const(1, 7), RatFunc.t(7), 3)


class TestLiterals:
    def test_symbolic(self):
        assert F.parse_poly("1+2t+t^3", 7) == (1, 2, 0, 1)

    def test_comma(self):
        assert F.parse_poly("0,1", 7) == (0, 1)
        assert F.parse_poly("1,2,3", 5) == (1, 2, 3)

    def test_ratfunc_literal(self):
        f = F.parse_ratfunc("(1+t)/(t^2+1)", 7)
        assert f.num == (1, 1) and f.den == (1, 0, 1)

    def test_explicit_mul_and_parens(self):
        assert F.parse_poly("2*t^2 + (1+t)", 5) == (1, 1, 2)

    def test_roundtrip_printing(self):
        for s in ["t^3+2t+1", "5", "t"]:
            f = F.parse_poly(s, 7)
            assert F.parse_poly(F.poly_str(f), 7) == f

    def test_bad_literal(self):
        with pytest.raises(F.ParseError):
            F.parse_poly("t$2", 7)
        with pytest.raises(F.ParseError):
            F.parse_ratfunc("t/t/t", 7)


@given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6))
@settings(max_examples=60, deadline=None)
def test_ff_solve_small_systems(a, b, c):
    ell = 7
    t = RatFunc.t(ell)
    rows = [[t + a, RatFunc.const(b, ell)], [RatFunc.const(c, ell), t**2 + 1]]
    rhs = [t, t + 1]
    x = F.ff_solve(rows, rhs)
    if x is not None:
        for row, r in zip(rows, rhs):
            assert sum((rv * xv for rv, xv in zip(row, x)), RatFunc.const(0, ell)) == r
    else:
        assert F.ff_rank(rows) < 2


def test_ff_kernel_vector():
    ell = 5
    one = RatFunc.const(1, ell)
    rows = [[one, one], [one, one]]
    v = F.ff_kernel_vector(rows)
    assert v is not None
    assert v[0] + v[1] == 0 and (v[0] or v[1])


def test_seeded_stream_fork_determinism():
    a = F.SeededStream(42).fork(3)
    b = F.SeededStream(42).fork(3)
    assert [a.scalar(7) for _ in range(10)] == [b.scalar(7) for _ in range(10)]
    c = F.SeededStream(42).fork(4)
    assert [a.seed] != [c.seed]
