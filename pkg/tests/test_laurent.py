import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mumford_cup.laurent import (
    IndeterminateError,
    LaurentWindow,
    LogLaurent,
    double_index,
    expand_log,
    expand_primitive,
    expand_rational,
)
from mumford_cup.padic import PAdic, vp
from mumford_cup.rational import RationalFunction
from mumford_cup.sampling import random_log_laurent

P = 5


def _evaluate(win: LaurentWindow, t: Fraction, prec: int) -> PAdic:
    total = PAdic.zero(P, prec)
    for n, c in win.items():
        total = total + c * (t ** n)
    return total


@st.composite
def annulus_functions(draw):
    """Rational g(t) with poles off the annulus 5^-2 < |t| < 1 (v(t) = 1 is on it)."""
    poles = {}
    for _ in range(draw(st.integers(1, 3))):
        inside = draw(st.booleans())
        u = draw(st.integers(1, 60).filter(lambda n: n % P))
        beta = Fraction(P ** draw(st.integers(2, 3)) * u) if inside else Fraction(u, P ** draw(st.integers(0, 1)))
        poles.setdefault(beta, {})[draw(st.integers(1, 3))] = Fraction(draw(st.integers(-9, 9)) or 1)
    return RationalFunction([draw(st.integers(-3, 3))], poles)


@given(annulus_functions(), st.integers(1, 40).filter(lambda n: n % P))
def test_expansion_matches_evaluation(g, u):
    t0 = Fraction(P * u)
    win = expand_rational(g, 2, P, 150, 48)
    got = _evaluate(win, t0, 150)
    # the tails beyond |n| = 48 are divisible by at least p^48
    assert (got - PAdic.from_rational(g(t0), P, 150)).digits() >= 40


@given(annulus_functions())
def test_tail_bounds_hold(g):
    small = expand_rational(g, 2, P, 60, 12)
    big = expand_rational(g, 2, P, 60, 40)
    # a coefficient known to vanish mod p^prec meets any bound up to prec
    for n, c in big.items():
        if n > small.hi and not small.top_zero:
            assert c.digits() >= min(small.H, c.prec)
        if n < small.lo and not small.bot_zero:
            assert c.digits() >= min(small.Hneg + (-n) * 2, c.prec)


@given(st.integers(1, 60).filter(lambda n: n % P), st.booleans(), st.integers(-5, 5).filter(bool))
def test_log_expansion_differentiates_to_pole(u, inside, c):
    beta = Fraction(P ** 3 * u) if inside else Fraction(u)
    F = expand_log(c, beta, 2, P, 40, 32)
    f = expand_rational(RationalFunction.pole(beta, 1, c), 2, P, 40, 32)
    d = F.derivative()
    for n in range(-30, 30):
        assert (d.coef(n) - f.coef(n)).digits() >= 36


def test_log_constant_outside():
    # c*log(t - beta) at t = 0 is c*log(-beta) for |beta| = 1
    F = expand_log(3, Fraction(-6), 1, P, 30)
    from mumford_cup.padic import plog

    assert F.laurent.coef(0) == 3 * plog(6, p=P, prec=30)
    assert F.logcoef.is_zero()


def test_expand_primitive_is_sum_of_parts():
    g = RationalFunction([], {Fraction(125): {2: 1}})
    logs = [(2, Fraction(250)), (-1, Fraction(3))]
    whole = expand_primitive(g, logs, Fraction(7), 1, P, 30, 24)
    parts = LogLaurent(expand_rational(g, 1, P, 30, 24), PAdic.zero(P, 30))
    for c, b in logs:
        parts = parts + expand_log(c, b, 1, P, 30, 24)
    parts = parts.add_constant(PAdic.from_rational(7, P, 30))
    assert whole.logcoef == parts.logcoef
    for n in range(-24, 25):
        assert whole.laurent.coef(n) == parts.laurent.coef(n)


def test_monomial_index_oracle():
    # ind(t^m, t^n) = Res n t^(m+n-1) dt = n if m + n = 0
    for m in range(-3, 4):
        for n in range(-3, 4):
            F = LogLaurent(LaurentWindow.from_coeffs({m: 1}, P, 20, 1, 8), PAdic.zero(P, 20))
            G = LogLaurent(LaurentWindow.from_coeffs({n: 1}, P, 20, 1, 8), PAdic.zero(P, 20))
            assert double_index(F, G) == (n if m + n == 0 else 0)


def test_log_index_oracle():
    # ind(a log t, g) = -a g_0 and ind(f, b log t) = b f_0
    a = PAdic.from_rational(3, P, 20)
    logt = LogLaurent(LaurentWindow.zero(P, 20, 1, 8), a)
    g = LogLaurent(LaurentWindow.from_coeffs({0: 7, 2: 1}, P, 20, 1, 8), PAdic.zero(P, 20))
    assert double_index(logt, g) == -21
    assert double_index(g, logt) == 21
    assert double_index(logt, logt).is_zero()


def test_narrow_window_is_indeterminate():
    g = RationalFunction([], {Fraction(25): {1: 1}})
    w = expand_rational(g, 1, P, 20, 4)
    with pytest.raises(IndeterminateError):
        w.coef(-10)
    with pytest.raises(IndeterminateError):
        expand_rational(RationalFunction.pole(0, 9), 1, P, 20, 4)


def test_reorientation_flips_residue():
    g = RationalFunction([], {Fraction(125): {1: 2}, Fraction(1): {2: 1}})
    w = expand_rational(g, 1, P, 30, 32)
    assert w.reoriented_form().residue() == -w.residue()
    assert w.residue() == 2


def test_axioms_random():
    rng = random.Random(11)
    for _ in range(40):
        F, G, H = (random_log_laurent(rng, P, 24) for _ in range(3))
        assert double_index(F, G) == -double_index(G, F)
        assert double_index(F + H, G) == double_index(F, G) + double_index(H, G)
        lam = PAdic.from_rational(Fraction(rng.randint(1, 30), 7), P, 24)
        assert double_index(F.scale(lam), G) == double_index(F, G) * lam
        F0 = LogLaurent(F.laurent, PAdic.zero(P, 24))
        assert double_index(F0, G) == F0.laurent.pair_residue(G.derivative())
