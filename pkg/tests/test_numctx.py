from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zeta4.errors import UsageError
from zeta4.numctx import (
    bernoulli_number,
    bernoulli_polynomial,
    bernoulli_polynomial_periodic,
    format_rational,
    fraction_from_mpf,
    make_context,
)


def test_constants_match_independent_values(ctx50, oracle):
    assert ctx50.nstr(ctx50.pi, 21).startswith("3.14159265358979323846")
    assert ctx50.nstr(ctx50.ln2, 21).startswith("0.69314718055994530941")
    assert abs(ctx50.pi - oracle.pi) < mpmath.mpf(10) ** -50
    assert abs(ctx50.ln2 - oracle.ln2) < mpmath.mpf(10) ** -50


def test_working_precision_includes_guard_digits():
    ctx = make_context(50)
    assert ctx.guard_digits >= 10
    assert ctx.working_digits == ctx.digits + ctx.guard_digits
    assert make_context(300).guard_digits == 30
    assert make_context(50) is ctx


@pytest.mark.parametrize("digits", [5, 0, -3, 10001])
def test_digits_out_of_range(digits):
    with pytest.raises(UsageError):
        make_context(digits)


def test_guard_digits_minimum():
    with pytest.raises(UsageError):
        make_context(50, guard_digits=3)


def test_contexts_do_not_share_precision():
    lo, hi = make_context(15), make_context(100)
    assert lo.prec < hi.prec
    assert mpmath.mp.dps == 15


@pytest.mark.parametrize(
    "n, expected",
    [(0, 1), (1, Fraction(-1, 2)), (2, Fraction(1, 6)), (3, 0), (4, Fraction(-1, 30)),
     (6, Fraction(1, 42)), (12, Fraction(-691, 2730)), (20, Fraction(-174611, 330))],
)
def test_bernoulli_numbers(n, expected):
    assert bernoulli_number(n) == expected


def test_bernoulli_matches_mpmath(oracle):
    for n in range(0, 61, 2):
        b = bernoulli_number(n)
        assert abs(oracle.mpf(b.numerator) / b.denominator - oracle.bernoulli(n)) < oracle.mpf(10) ** -60 * (1 + abs(oracle.bernoulli(n)))


@pytest.mark.parametrize("n", range(2, 61, 2))
def test_bernoulli_sign_alternates(n):
    b = bernoulli_number(n)
    assert (b > 0) == (n // 2 % 2 == 1)


@pytest.mark.parametrize("n", [5, 7, 21, 59])
def test_odd_bernoulli_vanish(n):
    assert bernoulli_number(n) == 0


def test_periodic_examples(ctx50):
    assert abs(bernoulli_polynomial_periodic(1, "0.25", ctx50) + ctx50.mpf("0.25")) < ctx50.eps
    assert abs(bernoulli_polynomial_periodic(2, 0, ctx50) - ctx50.mpf(1) / 6) < ctx50.eps
    assert abs(bernoulli_polynomial_periodic(2, "2.5", ctx50) + ctx50.mpf(1) / 12) < ctx50.eps


def test_bernoulli_polynomial_matches_mpmath(ctx50, oracle):
    for n in (1, 2, 5, 10, 17):
        for t in ("0.1", "0.5", "0.77"):
            ref = oracle.bernpoly(n, oracle.mpf(t))
            assert abs(bernoulli_polynomial(n, t, ctx50) - ref) < mpmath.mpf(10) ** -50


@given(n=st.integers(1, 40), x=st.fractions(0, 5, max_denominator=1000))
def test_periodic_bernoulli_has_period_one(n, x):
    ctx = make_context(30)
    a = bernoulli_polynomial_periodic(n, x, ctx)
    b = bernoulli_polynomial_periodic(n, x + 1, ctx)
    scale = max(1, abs(a))
    assert abs(a - b) <= ctx.eps * 1000 * scale


def test_periodic_rejects_nonfinite(ctx30):
    with pytest.raises(UsageError):
        bernoulli_polynomial_periodic(2, ctx30.mp.inf, ctx30)
    with pytest.raises(UsageError):
        bernoulli_polynomial_periodic(0, 1, ctx30)


fractions = st.fractions(max_denominator=10**12)


@given(a=fractions, c=fractions)
def test_rational_round_trip(a, c):
    assert (a + c) - c == a


@given(q=st.fractions(max_denominator=2**20).filter(lambda q: abs(q) < 2**40))
def test_fraction_from_mpf_is_exact_on_dyadics(q):
    ctx = make_context(30)
    dyadic = Fraction(q.numerator, 2 ** (q.denominator.bit_length()))
    assert fraction_from_mpf(ctx.mpf(dyadic)) == dyadic


def test_fraction_from_mpf_rejects_nan(ctx30):
    with pytest.raises(UsageError):
        fraction_from_mpf(ctx30.mp.nan)


@pytest.mark.parametrize("q, text", [(Fraction(279, 2), "279/2"), (Fraction(7), "7"), (Fraction(-1, 30), "-1/30")])
def test_format_rational(q, text):
    assert format_rational(q) == text
