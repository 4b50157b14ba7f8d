"""Laurent windows on the standard annulus p^-w < |t| < 1, and A_log,1.

A ``LaurentWindow`` holds the coefficients a_lo..a_hi of a Laurent series
together with certified bounds for every coefficient *outside* the window:

    v(a_n) >= H    - L*log_p(n)                 for n > hi
    v(a_n) >= Hneg + |n|*w - L*log_p(|n|)       for n < lo

(``L`` counts the log-type losses from integrating).  ``top_zero`` /
``bot_zero`` say that the series has no terms beyond the window on that
side.  Residue pairings use the bounds to cap the precision they report.
"""

from __future__ import annotations

import math
from functools import lru_cache
from fractions import Fraction
from math import comb

from .padic import INF, IWASAWA, LogBranch, PAdic, PrecisionError, plog, vp

DEFAULT_WINDOW = 64


class IndeterminateError(PrecisionError):
    """A coefficient outside the computed window was needed and is not certified."""


def _log_p(x: float, p: int) -> float:
    return math.log(x, p) if x > 1 else 0.0


def _decay(x0: int, w: int, L: int, p: int) -> float:
    """min over real x >= x0 of x*w - L*log_p(x)."""
    if L == 0:
        return x0 * w
    xstar = L / (w * math.log(p))
    x = max(x0, xstar, 1)
    return x * w - L * math.log(x, p) - 1e-9


def _unit_mod(x: Fraction, p: int, R: int) -> tuple[int, int]:
    """(v, u) with x = p^v * (unit), u the unit reduced mod p^R."""
    v = vp(x, p)
    y = x / Fraction(p) ** v
    m = p ** R
    return v, y.numerator * pow(y.denominator, -1, m) % m


class LaurentWindow:
    __slots__ = ("p", "prec", "w", "lo", "coeffs", "H", "Hneg", "L", "top_zero", "bot_zero")

    def __init__(self, p, prec, w, lo, coeffs, H=INF, Hneg=INF, L=0, top_zero=False, bot_zero=False):
        self.p = p
        self.prec = prec
        self.w = w
        self.lo = lo
        self.coeffs = list(coeffs)
        self.H = H
        self.Hneg = Hneg
        self.L = L
        self.top_zero = top_zero
        self.bot_zero = bot_zero

    @property
    def hi(self) -> int:
        return self.lo + len(self.coeffs) - 1

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, p, prec, w, W=DEFAULT_WINDOW) -> "LaurentWindow":
        return cls(p, prec, w, -W, [PAdic.zero(p, prec)] * (2 * W + 1), top_zero=True, bot_zero=True)

    @classmethod
    def from_coeffs(cls, data: dict, p, prec, w, W=DEFAULT_WINDOW) -> "LaurentWindow":
        """Exact Laurent polynomial (all nonzero terms inside [-W, W])."""
        if data and (min(data) < -W or max(data) > W):
            raise IndeterminateError("Laurent polynomial does not fit in the window")
        coeffs = []
        H, Hneg = INF, INF
        for n in range(-W, W + 1):
            c = data.get(n, 0)
            c = c if isinstance(c, PAdic) else PAdic.from_rational(c, p, prec)
            coeffs.append(c)
            v = c.digits() if c.is_zero() else c.val
            if n >= 0:
                H = min(H, v)
            else:
                Hneg = min(Hneg, v - (-n) * w)
        return cls(p, prec, w, -W, coeffs, H, Hneg, 0, True, True)

    # -- access -------------------------------------------------------

    def coef(self, n: int) -> PAdic:
        if self.lo <= n <= self.hi:
            return self.coeffs[n - self.lo]
        if (n > self.hi and self.top_zero) or (n < self.lo and self.bot_zero):
            return PAdic.zero(self.p, self.prec)
        raise IndeterminateError(f"coefficient {n} outside window [{self.lo}, {self.hi}]")

    def items(self):
        return ((self.lo + i, c) for i, c in enumerate(self.coeffs))

    def min_valuation(self):
        """Lower bound for the valuation of every coefficient, window and tails."""
        m = min((c.digits() for c in self.coeffs), default=INF)
        if not self.top_zero:
            m = min(m, self.H - self.L * _log_p(self.hi + 1, self.p))
        if not self.bot_zero:
            m = min(m, self.Hneg + (-(self.lo - 1)) * self.w - self.L * _log_p(-(self.lo - 1), self.p))
        return m

    # -- linear structure ---------------------------------------------

    def _check(self, other):
        if (self.p, self.w) != (other.p, other.w):
            raise ValueError("windows live on different annuli")

    def __add__(self, other: "LaurentWindow") -> "LaurentWindow":
        self._check(other)
        pair = (self, other)
        nb = [x.lo for x in pair if not x.bot_zero]
        nt = [x.hi for x in pair if not x.top_zero]
        lo = max(nb) if nb else min(self.lo, other.lo)
        hi = min(nt) if nt else max(self.hi, other.hi)
        coeffs = [self.coef(n) + other.coef(n) for n in range(lo, hi + 1)]
        L = max(self.L, other.L)
        H, Hneg = min(self.H, other.H), min(self.Hneg, other.Hneg)
        # window coefficients of an operand that fall outside the new window
        # become part of the tails
        for x in pair:
            for n, c in x.items():
                if n > hi:
                    H = min(H, c.digits() + L * _log_p(n, self.p))
                elif n < lo:
                    Hneg = min(Hneg, c.digits() - (-n) * self.w + L * _log_p(-n, self.p))
        return LaurentWindow(
            self.p, min(self.prec, other.prec), self.w, lo, coeffs, H, Hneg, L,
            self.top_zero and other.top_zero,
            self.bot_zero and other.bot_zero,
        )

    def scale(self, lam) -> "LaurentWindow":
        if isinstance(lam, PAdic):
            s = lam.digits()
        else:
            s = vp(lam, self.p)
        if s == INF:
            return LaurentWindow.zero(self.p, self.prec, self.w, max(-self.lo, self.hi))
        return LaurentWindow(self.p, self.prec, self.w, self.lo, [c * lam for c in self.coeffs],
                             self.H + s, self.Hneg + s, self.L, self.top_zero, self.bot_zero)

    def __neg__(self) -> "LaurentWindow":
        return self.scale(-1)

    def __sub__(self, other: "LaurentWindow") -> "LaurentWindow":
        return self + (-other)

    # -- calculus ---------------------------------------------------------

    def derivative(self) -> "LaurentWindow":
        """d/dt of the series (a function) as the coefficient list of a 1-form."""
        coeffs = [c * n for n, c in self.items()]
        return LaurentWindow(self.p, self.prec, self.w, self.lo - 1, coeffs,
                             self.H - self.L, self.Hneg - self.w, self.L, self.top_zero, self.bot_zero)

    def residue(self) -> PAdic:
        """Residue of the 1-form sum a_n t^n dt: the coefficient a_{-1}."""
        try:
            return self.coef(-1)
        except IndeterminateError:
            raise IndeterminateError("residue indeterminate: window excludes index -1") from None

    def primitive(self) -> "LogLaurent":
        """Primitive of the 1-form; constant term normalised to 0."""
        out = []
        for n, c in self.items():
            if n == -1:
                continue
            out.append((n + 1, c / (n + 1)))
        data = dict(out)
        data[0] = PAdic.zero(self.p, self.prec)
        lo, hi = self.lo + 1, self.hi + 1
        coeffs = [data.get(m, PAdic.zero(self.p, self.prec)) for m in range(lo, hi + 1)]
        L = self.L + 1
        f = LaurentWindow(self.p, self.prec, self.w, lo, coeffs, self.H - L, self.Hneg + self.w - L, L,
                          self.top_zero, self.bot_zero)
        return LogLaurent(f, self.residue())

    def pair_residue(self, other: "LaurentWindow") -> PAdic:
        """Coefficient of t^-1 in (self * other), with its certified precision.

        ``self`` is read as a function and ``other`` as a 1-form.
        """
        self._check(other)
        f, h = self, other
        I_hi = min(f.hi, -1 - h.lo)
        I_lo = max(f.lo, -1 - h.hi)
        total = PAdic.zero(self.p, min(f.prec, h.prec))
        for i in range(I_lo, I_hi + 1):
            total = total + f.coeffs[i - f.lo] * h.coeffs[-1 - i - h.lo]
        tail = INF
        L = f.L + h.L
        p, w = self.p, self.w
        if not (f.top_zero and h.bot_zero):
            if I_hi < -1:
                raise IndeterminateError("windows too narrow for the residue pairing")
            tail = min(tail, f.H + h.Hneg + _decay(I_hi + 2, w, L, p))
        if not (f.bot_zero and h.top_zero):
            if I_lo > 0:
                raise IndeterminateError("windows too narrow for the residue pairing")
            tail = min(tail, f.Hneg + h.H + _decay(1 - I_lo, w, L, p))
        if tail != INF:
            total = total.add_bigoh(math.floor(tail))
        return total

    def reoriented_function(self) -> "LaurentWindow":
        """Coefficients in t' = p^w / t (log-free part only)."""
        pw = Fraction(self.p) ** self.w
        coeffs = [self.coef(-m) / pw ** m for m in range(-self.hi, -self.lo + 1)]
        return LaurentWindow(self.p, self.prec, self.w, -self.hi, coeffs, self.Hneg, self.H, self.L,
                             self.bot_zero, self.top_zero)

    def reoriented_form(self) -> "LaurentWindow":
        """The 1-form sum a_n t^n dt rewritten in t' = p^w / t."""
        pw = Fraction(self.p) ** self.w
        coeffs = []
        for m in range(-self.hi - 2, -self.lo - 2 + 1):
            n = -m - 2
            coeffs.append(-self.coef(n) * pw ** (n + 1))
        return LaurentWindow(self.p, self.prec, self.w, -self.hi - 2, coeffs,
                             self.Hneg + self.w - self.L, min(self.H - self.w, self.Hneg), self.L,
                             self.bot_zero, self.top_zero)

    def format(self, var: str = "t", max_terms: int = 8) -> str:
        terms = []
        for n, c in self.items():
            if not c.is_zero():
                terms.append(f"({c})*{var}^{n}")
        if len(terms) > max_terms:
            terms = terms[: max_terms // 2] + ["..."] + terms[-max_terms // 2:]
        return " + ".join(terms) if terms else "0"


class LogLaurent:
    """F = f + c*log(t) on the standard annulus (an element of A_log,1)."""

    __slots__ = ("laurent", "logcoef")

    def __init__(self, laurent: LaurentWindow, logcoef: PAdic):
        self.laurent = laurent
        self.logcoef = logcoef

    @property
    def p(self):
        return self.laurent.p

    def __add__(self, other: "LogLaurent") -> "LogLaurent":
        return LogLaurent(self.laurent + other.laurent, self.logcoef + other.logcoef)

    def __neg__(self) -> "LogLaurent":
        return LogLaurent(-self.laurent, -self.logcoef)

    def __sub__(self, other: "LogLaurent") -> "LogLaurent":
        return self + (-other)

    def scale(self, lam) -> "LogLaurent":
        return LogLaurent(self.laurent.scale(lam), self.logcoef * lam)

    def add_constant(self, c) -> "LogLaurent":
        f = self.laurent
        coeffs = list(f.coeffs)
        coeffs[-f.lo] = coeffs[-f.lo] + c
        return LogLaurent(LaurentWindow(f.p, f.prec, f.w, f.lo, coeffs, f.H, f.Hneg, f.L,
                                        f.top_zero, f.bot_zero), self.logcoef)

    def derivative(self) -> LaurentWindow:
        d = self.laurent.derivative()
        return d + LaurentWindow.from_coeffs({-1: self.logcoef}, self.p, d.prec, d.w,
                                             max(-d.lo, d.hi))

    def reorient(self, branch: LogBranch = IWASAWA) -> "LogLaurent":
        """Rewrite in t' = p^w / t: log t = w*log(p) - log t'."""
        f = self.laurent.reoriented_function()
        c = self.logcoef
        const = c * (branch.lam_padic(self.p, f.prec) * f.w)
        return LogLaurent(f, -c).add_constant(const)

    def __str__(self) -> str:
        return f"{self.laurent.format()} + ({self.logcoef})*log(t)"


def residue(omega: LaurentWindow) -> PAdic:
    return omega.residue()


def double_index(F: LogLaurent, G: LogLaurent) -> PAdic:
    """ind(F, G) = Res(f dg) + b*f_0 - a*g_0 for F = f + a log t, G = g + b log t."""
    f, a = F.laurent, F.logcoef
    g, b = G.laurent, G.logcoef
    return f.pair_residue(g.derivative()) + b * f.coef(0) - a * g.coef(0)


# -- expansions of rational data on the standard annulus ------------------


class _Accumulator:
    """Exact sums of p-adic coefficients as integers scaled by p^S."""

    def __init__(self, p: int, prec: int):
        self.p, self.prec = p, prec
        self.S = 0
        self.data: dict[int, int] = {}

    def add(self, n: int, val: int, unit: int) -> None:
        if val >= self.prec or unit == 0:
            return
        if val + self.S < 0:
            k = -val - self.S
            f = self.p ** k
            self.data = {m: x * f for m, x in self.data.items()}
            self.S += k
        self.data[n] = self.data.get(n, 0) + unit * self.p ** (val + self.S)

    def add_padic(self, n: int, x: PAdic) -> None:
        if not x.is_zero():
            self.add(n, x.val, x.unit)

    def add_rational(self, n: int, x: Fraction) -> None:
        if x:
            self.add(n, *_unit_mod(Fraction(x), self.p, max(self.prec - vp(x, self.p) + 1, 1)))

    def coeffs(self, lo: int, hi: int) -> list:
        m = self.p ** (self.prec + self.S)
        return [PAdic._make(self.p, -self.S, self.data.get(n, 0) % m, self.prec) for n in range(lo, hi + 1)]


@lru_cache(maxsize=64)
def _inverses(p: int, R: int, W: int) -> tuple:
    """(v_p(n), n/p^v inverse mod p^R) for n = 1..W (index 0 unused)."""
    out = [(0, 0)]
    m = p ** R
    for n in range(1, W + 1):
        v, u = _unit_mod(Fraction(n), p, R)
        out.append((v, pow(u, -1, m)))
    return tuple(out)


@lru_cache(maxsize=4096)
def _plog_cached(x: Fraction, branch: LogBranch, p: int, prec: int) -> PAdic:
    return plog(x, branch, p, prec)


def cached_plog(x, branch: LogBranch, p: int, prec: int) -> PAdic:
    """plog with memoisation for rational arguments and hashable branches."""
    try:
        return _plog_cached(Fraction(x), branch, p, prec)
    except TypeError:
        return plog(x, branch, p, prec)


def _pole_terms(acc: _Accumulator, c: Fraction, beta: Fraction, k: int, w: int, W: int):
    """Add the coefficients of c/(t - beta)^k on p^-w < |t| < 1 to ``acc``.

    Returns (H, Hneg, top_zero, bot_zero), or None for the monomial c t^-k.
    """
    p, prec = acc.p, acc.prec
    vb = vp(beta, p)
    vc = vp(c, p)
    if vb == INF:
        if k > W:
            raise IndeterminateError("pole order exceeds window")
        acc.add_rational(-k, c)
        return None
    if vb >= w:
        # inside: sum_n C(n+k-1,k-1) beta^n t^(-k-n)
        R = prec - vc + 2
        n0 = max(0, W - k + 1)  # first index -k-n0 beyond the window
        tail = (INF, vc - k * w + n0 * (vb - w), True, False)
        if R <= 0:
            return tail
        _, uc = _unit_mod(c, p, R)
        _, ub = _unit_mod(beta, p, R)
        m = p ** R
        ubn = uc
        for n in range(0, W - k + 1):
            val = vc + n * vb
            if val >= prec:
                break
            acc.add(-k - n, val, ubn * comb(n + k - 1, k - 1) % m)
            ubn = ubn * ub % m
        return tail
    if vb <= 0:
        # outside: (-beta)^-k sum_n C(n+k-1,k-1) beta^-n t^n
        base_v = vc - k * vb
        R = prec - base_v + 2
        tail = (base_v - (W + 1) * vb, INF, False, True)
        if R <= 0:
            return tail
        _, uc = _unit_mod(c * (-beta) ** (-k), p, R)
        _, ubi = _unit_mod(1 / beta, p, R)
        m = p ** R
        ubn = uc
        for n in range(0, W + 1):
            val = base_v - n * vb
            if val >= prec:
                break
            acc.add(n, val, ubn * comb(n + k - 1, k - 1) % m)
            ubn = ubn * ubi % m
        return tail
    raise PrecisionError(f"pole at t = {beta} lies on the annulus")


def _rational_terms(acc: _Accumulator, g, w: int, W: int):
    H, Hneg, top, bot = INF, INF, True, True
    for n, c in enumerate(g.poly):
        if c:
            if n > W:
                raise IndeterminateError("polynomial degree exceeds window")
            acc.add_rational(n, c)
    for beta, terms in g.poles.items():
        for k, c in terms.items():
            bounds = _pole_terms(acc, c, beta, k, w, W)
            if bounds is not None:
                h, hn, tz, bz = bounds
                H, Hneg = min(H, h), min(Hneg, hn)
                top, bot = top and tz, bot and bz
    return H, Hneg, top, bot


def expand_rational(g, w: int, p: int, prec: int, W: int = DEFAULT_WINDOW) -> LaurentWindow:
    """Laurent window of a RationalFunction g(t) on p^-w < |t| < 1.

    Used both for functions and for 1-forms g(t) dt (same coefficients).
    """
    acc = _Accumulator(p, prec)
    H, Hneg, top, bot = _rational_terms(acc, g, w, W)
    return LaurentWindow(p, prec, w, -W, acc.coeffs(-W, W), H, Hneg, 0, top, bot)


def _log_terms(acc: _Accumulator, c: Fraction, beta: Fraction, w: int, W: int, branch: LogBranch):
    """Add c * log(t - beta) minus its log t part to ``acc``.

    Returns (log t coefficient, H, Hneg, top_zero, bot_zero).
    """
    p, prec = acc.p, acc.prec
    vc = vp(c, p)
    vb = vp(beta, p)
    if vb == INF:
        return c, INF, INF, True, True
    R = max(prec - vc + 2 + int(_log_p(W, p)) + 1, 1)
    m = p ** R
    _, uc = _unit_mod(c, p, R)
    inv = _inverses(p, R, W)
    if vb >= w:
        # log t + log(1 - beta/t) = log t - sum beta^n / (n t^n)
        _, ub = _unit_mod(beta, p, R)
        ubn = uc * ub % m
        for n in range(1, W + 1):
            vn, un = inv[n]
            if vc + n * vb - _log_p(W, p) >= prec:
                break  # vb >= w >= 1: every later term is below the precision
            acc.add(-n, vc + n * vb - vn, -ubn * un % m)
            ubn = ubn * ub % m
        return c, INF, vc + (W + 1) * (vb - w), True, False
    if vb <= 0:
        # log(-beta) + log(1 - t/beta) = log(-beta) - sum t^n / (n beta^n)
        _, ubi = _unit_mod(1 / beta, p, R)
        ubn = uc * ubi % m
        for n in range(1, W + 1):
            vn, un = inv[n]
            acc.add(n, vc - n * vb - vn, -ubn * un % m)
            ubn = ubn * ubi % m
        acc.add_padic(0, (cached_plog(-beta, branch, p, prec + max(0, -vc)) * c).add_bigoh(prec))
        return 0, vc - (W + 1) * vb, INF, False, True
    raise PrecisionError(f"logarithmic singularity at t = {beta} lies on the annulus")


def expand_log(c: Fraction, beta, w: int, p: int, prec: int, W: int = DEFAULT_WINDOW,
               branch: LogBranch = IWASAWA) -> LogLaurent:
    """c * log(t - beta) on p^-w < |t| < 1 (``beta`` exact, not on the annulus)."""
    return expand_primitive(None, [(Fraction(c), Fraction(beta))], 0, w, p, prec, W, branch)


def expand_primitive(g, logs, const, w: int, p: int, prec: int, W: int = DEFAULT_WINDOW,
                     branch: LogBranch = IWASAWA) -> LogLaurent:
    """g(t) + sum c*log(t - beta) + const on p^-w < |t| < 1 in one pass.

    ``g`` is a RationalFunction or None, ``logs`` pairs (c, beta) with beta
    exact and off the annulus, ``const`` a Fraction or PAdic.
    """
    acc = _Accumulator(p, prec)
    H, Hneg, top, bot = INF, INF, True, True
    L = 0
    if g is not None:
        H, Hneg, top, bot = _rational_terms(acc, g, w, W)
    logcoef = Fraction(0)
    for c, beta in logs:
        a, h, hn, tz, bz = _log_terms(acc, Fraction(c), Fraction(beta), w, W, branch)
        logcoef += a
        H, Hneg = min(H, h), min(Hneg, hn)
        top, bot = top and tz, bot and bz
        L = 1
    if isinstance(const, PAdic):
        acc.add_padic(0, const.add_bigoh(prec))
    else:
        acc.add_rational(0, Fraction(const))
    window = LaurentWindow(p, prec, w, -W, acc.coeffs(-W, W), H, Hneg, L, top, bot)
    return LogLaurent(window, PAdic.from_rational(logcoef, p, prec))
