from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hopfcat.scalars import HSeries, RATIONAL, RingMismatch, hseries_ring

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=20)


def hs(*coeffs, order=None):
    k = order if order is not None else len(coeffs) - 1
    return HSeries.from_coeffs([Fraction(c) for c in coeffs], k)


class TestHSeriesArithmetic:
    def test_add_and_sub(self):
        a = hs(1, 2, order=2)
        b = hs(0, 1, 3, order=2)
        assert (a + b).coeffs == (Fraction(1), Fraction(3), Fraction(3))
        assert (a - b).coeffs == (Fraction(1), Fraction(1), Fraction(-3))

    def test_mul_truncates(self):
        # (1 + h)(1 + h) = 1 + 2h + h^2, cut at order 1
        a = hs(1, 1, order=1)
        assert (a * a).coeffs == (Fraction(1), Fraction(2))

    def test_mul_by_scalar(self):
        a = hs(1, 2, order=1)
        assert (a * 3).coeffs == (Fraction(3), Fraction(6))
        assert (Fraction(1, 2) * a).coeffs == (Fraction(1, 2), Fraction(1))

    def test_hbar_is_nilpotent(self):
        h = HSeries.hbar(2)
        assert (h * h * h).is_zero()
        assert not (h * h).is_zero()

    def test_unit_detection(self):
        assert hs(3, 0, 0).is_unit()
        assert not hs(0, 1, 0).is_unit()

    def test_inverse_of_one_plus_hbar(self):
        # frozen: (1 + h)^{-1} = 1 - h + h^2 at order 2
        a = hs(1, 1, 0)
        inv = a.inverse()
        assert inv.coeffs == (Fraction(1), Fraction(-1), Fraction(1))
        assert (a * inv).coeffs == (Fraction(1), Fraction(0), Fraction(0))

    def test_inverse_rejects_non_unit(self):
        with pytest.raises(ZeroDivisionError):
            hs(0, 1).inverse()

    def test_order_mismatch_rejected(self):
        with pytest.raises(RingMismatch):
            hs(1, 0) + hs(1, 0, 0)

    @given(st.lists(rationals, min_size=1, max_size=4))
    def test_inverse_roundtrip(self, coeffs):
        if coeffs[0] == 0:
            coeffs[0] = Fraction(1)
        k = len(coeffs) - 1
        a = HSeries.from_coeffs(coeffs, k)
        prod = a * a.inverse()
        assert prod == HSeries.from_rational(1, k)

    @given(st.lists(rationals, min_size=2, max_size=4),
           st.lists(rationals, min_size=2, max_size=4))
    def test_mul_constant_term_is_rational_product(self, xs, ys):
        k = 3
        a = HSeries.from_coeffs(xs, k)
        b = HSeries.from_coeffs(ys, k)
        assert (a * b).constant_term() == xs[0] * ys[0]


class TestRing:
    def test_rational_coercion(self):
        assert RATIONAL.coerce("2/3") == Fraction(2, 3)
        assert RATIONAL.coerce(5) == Fraction(5)
        assert RATIONAL.coerce(Fraction(7, 2)) == Fraction(7, 2)

    def test_rational_rejects_series(self):
        with pytest.raises(RingMismatch):
            RATIONAL.coerce(HSeries.from_rational(1, 2))

    def test_series_ring_coercion(self):
        r = hseries_ring(2)
        v = r.coerce(["1", "0", "1/2"])
        assert v.coeffs == (Fraction(1), Fraction(0), Fraction(1, 2))
        w = r.coerce(3)
        assert w.coeffs == (Fraction(3), Fraction(0), Fraction(0))

    def test_series_ring_rejects_wrong_order(self):
        r = hseries_ring(2)
        with pytest.raises(RingMismatch):
            r.coerce(HSeries.from_rational(1, 3))

    def test_json_roundtrip(self):
        r = hseries_ring(1)
        v = r.coerce(["1/3", "-2"])
        assert r.from_json(r.to_json(v)) == v
        assert RATIONAL.from_json(RATIONAL.to_json(Fraction(-5, 4))) == Fraction(-5, 4)

    def test_unit_and_inverse_dispatch(self):
        assert RATIONAL.is_unit(Fraction(2))
        assert not RATIONAL.is_unit(Fraction(0))
        assert RATIONAL.inv(Fraction(2)) == Fraction(1, 2)
        r = hseries_ring(1)
        assert r.inv(r.coerce(["2", "0"])) == r.coerce(["1/2", "0"])
