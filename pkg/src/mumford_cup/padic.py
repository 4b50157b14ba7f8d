"""Capped-absolute-precision arithmetic in Q_p.

A nonzero element is stored as ``p**val * unit`` with ``unit`` a p-adic unit
known modulo ``p**(prec - val)``; zero is ``O(p**prec)``.  Precision is
tracked pessimistically: a result never claims more digits than its inputs
justify.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

INF = math.inf

DEFAULT_PRECISION = 32


class PrecisionError(ArithmeticError):
    """Raised when an operation would need digits the inputs do not carry."""


def vp(x, p: int):
    """Valuation of an int, Fraction or PAdic; ``INF`` for zero."""
    if isinstance(x, PAdic):
        return x.val
    x = Fraction(x)
    if x == 0:
        return INF
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _split(n: int, p: int) -> tuple[int, int]:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


class PAdic:
    __slots__ = ("p", "val", "unit", "prec")

    def __init__(self, p: int, val, unit: int, prec):
        # internal; use the constructors below
        self.p = p
        self.val = val
        self.unit = unit
        self.prec = prec

    # -- construction -------------------------------------------------

    @classmethod
    def _make(cls, p: int, val, unit: int, prec) -> "PAdic":
        if prec == INF:
            raise PrecisionError("infinite precision requested")
        if unit == 0 or val >= prec:
            return cls(p, INF, 0, prec)
        s, unit = _split(unit, p)
        val += s
        if val >= prec:
            return cls(p, INF, 0, prec)
        return cls(p, val, unit % p ** (prec - val), prec)

    @classmethod
    def zero(cls, p: int, prec: int = DEFAULT_PRECISION) -> "PAdic":
        return cls(p, INF, 0, prec)

    @classmethod
    def from_rational(cls, x, p: int, prec: int = DEFAULT_PRECISION) -> "PAdic":
        x = Fraction(x)
        if x == 0:
            return cls.zero(p, prec)
        vn, n = _split(x.numerator, p)
        vd, d = _split(x.denominator, p)
        v = vn - vd
        if v >= prec:
            return cls.zero(p, prec)
        m = p ** (prec - v)
        return cls(p, v, n * pow(d, -1, m) % m, prec)

    def _coerce(self, other) -> "PAdic":
        if isinstance(other, PAdic):
            if other.p != self.p:
                raise ValueError(f"prime mismatch: {self.p} vs {other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            # exact rationals are converted with enough room not to limit precision
            v = vp(other, self.p)
            extra = 0 if v == INF else max(0, -v)
            return PAdic.from_rational(other, self.p, int(self.prec + extra + 1))
        return NotImplemented

    # -- basic properties ---------------------------------------------

    def is_zero(self) -> bool:
        return self.val == INF

    @property
    def relprec(self):
        return 0 if self.is_zero() else self.prec - self.val

    def digits(self):
        """Number of p-adic digits to which this is known to vanish."""
        return self.prec if self.is_zero() else self.val

    def lift(self) -> Fraction:
        """The rational representative ``p**val * unit`` (unit in [0, p**relprec))."""
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.val

    def add_bigoh(self, prec) -> "PAdic":
        if prec >= self.prec:
            return self
        return PAdic._make(self.p, self.val, self.unit, prec)

    # -- arithmetic ---------------------------------------------------

    def __neg__(self) -> "PAdic":
        if self.is_zero():
            return self
        m = self.p ** (self.prec - self.val)
        return PAdic(self.p, self.val, (-self.unit) % m, self.prec)

    def __add__(self, other) -> "PAdic":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = min(self.prec, other.prec)
        if self.is_zero():
            return other.add_bigoh(prec)
        if other.is_zero():
            return self.add_bigoh(prec)
        m = min(self.val, other.val)
        s = self.unit * self.p ** (self.val - m) + other.unit * self.p ** (other.val - m)
        return PAdic._make(self.p, m, s % self.p ** (prec - m), prec)

    __radd__ = __add__

    def __sub__(self, other) -> "PAdic":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "PAdic":
        return (-self) + other

    def _mul_exact(self, r: Fraction) -> "PAdic":
        if r == 0:
            return PAdic.zero(self.p, self.prec)
        v = vp(r, self.p)
        if self.is_zero():
            return PAdic.zero(self.p, self.prec + v)
        r = r / Fraction(self.p) ** v
        m = self.p ** self.relprec
        u = self.unit * r.numerator * pow(r.denominator, -1, m) % m
        return PAdic(self.p, self.val + v, u, self.prec + v)

    def __mul__(self, other) -> "PAdic":
        if isinstance(other, (int, Fraction)):
            return self._mul_exact(Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            a = self.prec if self.is_zero() else self.val
            b = other.prec if other.is_zero() else other.val
            prec = a + b
            if not self.is_zero():
                prec = min(prec, self.prec + b)
            if not other.is_zero():
                prec = min(prec, other.prec + a)
            return PAdic.zero(self.p, prec)
        val = self.val + other.val
        prec = val + min(self.relprec, other.relprec)
        return PAdic(self.p, val, self.unit * other.unit % self.p ** (prec - val), prec)

    __rmul__ = __mul__

    def inverse(self) -> "PAdic":
        if self.is_zero():
            raise PrecisionError(f"insufficient precision: cannot invert O({self.p}^{self.prec})")
        r = self.relprec
        m = self.p ** r
        return PAdic(self.p, -self.val, pow(self.unit, -1, m), r - self.val)

    def __truediv__(self, other) -> "PAdic":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by exact zero")
            return self._mul_exact(1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other) -> "PAdic":
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "PAdic":
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return PAdic.from_rational(1, self.p, max(self.relprec, 1))
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison ---------------------------------------------------

    def equals(self, other) -> bool:
        """Equality modulo the joint precision."""
        return (self - other).is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (PAdic, int, Fraction)):
            return self.equals(other)
        return NotImplemented

    __hash__ = None

    # -- printing / parsing -------------------------------------------

    def digit_list(self) -> list[int]:
        """Digits a_v, ..., a_{prec-1} of the canonical expansion."""
        if self.is_zero():
            return []
        out, u = [], self.unit
        for _ in range(self.prec - self.val):
            out.append(u % self.p)
            u //= self.p
        return out

    def __str__(self) -> str:
        p = self.p
        terms = []
        if not self.is_zero():
            for i, a in enumerate(self.digit_list()):
                if a == 0:
                    continue
                e = self.val + i
                if e == 0:
                    terms.append(f"{a}")
                elif e == 1:
                    terms.append(f"{a}*{p}" if a != 1 else f"{p}")
                else:
                    terms.append(f"{a}*{p}^{e}" if a != 1 else f"{p}^{e}")
        terms.append(f"O({p}^{self.prec})")
        return " + ".join(terms)

    def __repr__(self) -> str:
        return f"PAdic({self})"

    @classmethod
    def parse(cls, text: str, p: int | None = None) -> "PAdic":
        """Parse the form printed by ``str``: ``a + b*p + c*p^2 + ... + O(p^N)``."""
        text = text.replace(" ", "").replace("**", "^").replace("·", "*")
        m = re.search(r"O\((\d+)\^(-?\d+)\)$", text)
        if not m:
            raise ValueError(f"missing O(p^N) term in {text!r}")
        prime, prec = int(m.group(1)), int(m.group(2))
        if p is not None and p != prime:
            raise ValueError(f"prime mismatch: {p} vs {prime}")
        body = text[: m.start()].rstrip("+")
        total = Fraction(0)
        if body:
            for term in body.split("+"):
                tm = re.fullmatch(r"(\d+)?(?:\*?(\d+)(?:\^(-?\d+))?)?", term)
                if not tm or term == "":
                    raise ValueError(f"bad term {term!r}")
                coef, base, exp = tm.groups()
                if base is None:
                    total += int(coef)
                    continue
                if int(base) != prime:
                    if coef is None and exp is None:
                        total += int(base)
                        continue
                    raise ValueError(f"bad term {term!r}")
                e = 1 if exp is None else int(exp)
                total += (int(coef) if coef else 1) * Fraction(prime) ** e
        return cls.from_rational(total, prime, prec)


@dataclass(frozen=True)
class LogBranch:
    """Branch of the p-adic logarithm, fixed by the value assigned to log(p)."""

    lam: Fraction | PAdic = Fraction(0)

    def lam_padic(self, p: int, prec: int) -> PAdic:
        if isinstance(self.lam, PAdic):
            return self.lam.add_bigoh(prec)
        return PAdic.from_rational(self.lam, p, prec)


IWASAWA = LogBranch()


def _log_one_plus(m: PAdic, prec: int) -> PAdic:
    """log(1 + m) for val(m) >= 1, summed until the terms fall below p^prec."""
    p = m.p
    if m.is_zero():
        return PAdic.zero(p, min(prec, m.prec))
    vm = m.val
    if vm < 1:
        raise ValueError("log series needs val(m) >= 1")
    total = PAdic.zero(p, prec)
    power = m
    k = 1
    while True:
        # k*vm - floor(log_p k) bounds the valuation of m^k/k
        if k * vm - int(math.log(k, p) + 1e-9) >= prec and k > 1:
            break
        term = power / k
        total = total + (term if k % 2 else -term)
        power = power * m
        k += 1
    return total.add_bigoh(min(prec, m.prec))


def plog(a, branch: LogBranch = IWASAWA, p: int | None = None, prec: int | None = None) -> PAdic:
    """Branch of the p-adic logarithm: log(p) = branch.lam, log(root of unity) = 0.

    ``a`` may be a PAdic or an exact rational (then ``p`` and ``prec`` are needed).
    """
    if not isinstance(a, PAdic):
        if p is None:
            raise ValueError("prime required for rational input")
        prec = DEFAULT_PRECISION if prec is None else prec
        v = vp(a, p)
        # exact input: ask for prec digits of relative precision
        a = PAdic.from_rational(a, p, prec + (v if v != INF else 0))
    if a.is_zero():
        raise PrecisionError("log of a scalar indistinguishable from zero")
    p = a.p
    r = a.relprec
    unit = PAdic(p, 0, a.unit, r)
    # u^(p-1) (or u^2 when p = 2) is a principal unit; divide back afterwards
    e = p - 1 if p != 2 else 2
    m = unit ** e - 1
    lg = _log_one_plus(m, r) / e
    lam = branch.lam_padic(p, r + abs(a.val) + 1)
    return (lg + a.val * lam).add_bigoh(min(lg.prec, r))


def teichmuller(a: int, p: int, prec: int = DEFAULT_PRECISION) -> PAdic:
    """Teichmüller lift of a mod p, by iterating x -> x^p."""
    x = PAdic.from_rational(a % p, p, prec)
    for _ in range(prec + 1):
        x = x ** p
    return x
