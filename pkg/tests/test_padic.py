from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mumford_cup.padic import INF, IWASAWA, LogBranch, PAdic, PrecisionError, plog, teichmuller, vp

P, N = 5, 20

# log(6), log(2) at p = 5 mod 5^20 from the power series of log(1 + y) summed
# over Q (log 2 as log(16)/4), independent of plog's unit^(p-1) reduction.
LOG6 = 45734245251805
LOG2 = 89554273237210

rationals = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**4)
nonzero = rationals.filter(lambda x: x != 0)
units = st.integers(1, 10**6).filter(lambda n: n % P != 0).map(Fraction)


def pa(x, prec=N):
    return PAdic.from_rational(x, P, prec)


def test_vp():
    assert vp(Fraction(50, 3), 5) == 2
    assert vp(Fraction(3, 125), 5) == -3
    assert vp(0, 5) == INF


def test_frozen_logs():
    assert plog(6, IWASAWA, P, N).lift() == LOG6
    assert plog(2, IWASAWA, P, N).lift() == LOG2
    # Iwasawa branch ignores the power of p
    assert plog(150, IWASAWA, P, N).lift() == LOG6


def test_branch_shifts_log_p():
    lam = Fraction(7, 3)
    got = plog(Fraction(6 * 25), LogBranch(lam), P, N)
    assert got == plog(6, IWASAWA, P, N) + 2 * lam


def test_teichmuller_is_root_of_unity():
    for a in range(1, P):
        t = teichmuller(a, P, N)
        assert t ** (P - 1) == 1
        assert (t - a).digits() >= 1
        assert plog(t).is_zero()


def test_parse_roundtrip():
    x = pa(Fraction(-7, 30))
    assert PAdic.parse(str(x), P) == x
    assert str(PAdic.parse(str(x), P)) == str(x)


def test_precision_error_on_zero_log():
    with pytest.raises(PrecisionError):
        plog(PAdic.zero(P, N))


@given(rationals, rationals, rationals)
def test_ring_axioms(a, b, c):
    x, y, z = pa(a), pa(b), pa(c)
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert pa(a + b) == x + y
    assert pa(a * b) == x * y


@given(nonzero)
def test_inverse(a):
    x = pa(a)
    assert x * x.inverse() == 1


@given(units, units)
def test_log_homomorphism(a, b):
    assert plog(a * b, IWASAWA, P, N) == plog(a, IWASAWA, P, N) + plog(b, IWASAWA, P, N)


@given(nonzero)
def test_precision_is_tracked(a):
    x = pa(a, 12)
    assert x.prec == 12
    assert (x - x).is_zero()
    assert (x * P).prec == 13
