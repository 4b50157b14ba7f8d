"""Exact rational functions on P^1(Q) in partial-fraction form.

``f = sum_n poly[n] z^n + sum_{alpha, k} poles[alpha][k] / (z - alpha)^k``.
Poles are rational and stored exactly, so pullbacks by Möbius maps, sums of
translates and residues are exact symbol manipulation.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

from .geometry import Moebius


def _F(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class RationalFunction:
    __slots__ = ("poly", "poles")

    def __init__(self, poly: Iterable = (), poles: Mapping | None = None):
        poly = [_F(c) for c in poly]
        while poly and poly[-1] == 0:
            poly.pop()
        self.poly = tuple(poly)
        clean = {}
        for alpha, terms in (poles or {}).items():
            t = {int(k): _F(c) for k, c in terms.items() if c != 0}
            if t:
                if any(k < 1 for k in t):
                    raise ValueError("pole orders must be >= 1")
                clean[_F(alpha)] = t
        self.poles = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls) -> "RationalFunction":
        return cls()

    @classmethod
    def constant(cls, c) -> "RationalFunction":
        return cls([c])

    @classmethod
    def monomial(cls, n: int, c=1) -> "RationalFunction":
        return cls([0] * n + [c])

    @classmethod
    def pole(cls, alpha, k: int = 1, c=1) -> "RationalFunction":
        return cls((), {alpha: {k: c}})

    # -- linear structure --------------------------------------------

    def is_zero(self) -> bool:
        return not self.poly and not self.poles

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        n = max(len(self.poly), len(other.poly))
        poly = [(self.poly[i] if i < len(self.poly) else 0) + (other.poly[i] if i < len(other.poly) else 0)
                for i in range(n)]
        poles = {a: dict(t) for a, t in self.poles.items()}
        for a, t in other.poles.items():
            dst = poles.setdefault(a, {})
            for k, c in t.items():
                dst[k] = dst.get(k, 0) + c
        return RationalFunction(poly, poles)

    @staticmethod
    def total(items: Iterable["RationalFunction"]) -> "RationalFunction":
        """Sum of many functions in one pass."""
        poly: list = []
        poles: dict = {}
        for f in items:
            if len(f.poly) > len(poly):
                poly.extend([Fraction(0)] * (len(f.poly) - len(poly)))
            for i, c in enumerate(f.poly):
                poly[i] += c
            for a, t in f.poles.items():
                dst = poles.setdefault(a, {})
                for k, c in t.items():
                    dst[k] = dst.get(k, 0) + c
        return RationalFunction(poly, poles)

    def scale(self, lam) -> "RationalFunction":
        lam = _F(lam)
        if lam == 0:
            return RationalFunction()
        return RationalFunction([c * lam for c in self.poly],
                                {a: {k: c * lam for k, c in t.items()} for a, t in self.poles.items()})

    def __neg__(self) -> "RationalFunction":
        return self.scale(-1)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.poly == other.poly and self.poles == other.poles

    __hash__ = None

    # -- analysis ----------------------------------------------------------

    def derivative(self) -> "RationalFunction":
        poly = [i * c for i, c in enumerate(self.poly)][1:]
        poles = {a: {k + 1: -k * c for k, c in t.items()} for a, t in self.poles.items()}
        return RationalFunction(poly, poles)

    def primitive_parts(self) -> tuple["RationalFunction", dict]:
        """(R, logs) with f = R' + sum_alpha logs[alpha] / (z - alpha); R has no constant term."""
        poly = [0] + [c / (i + 1) for i, c in enumerate(self.poly)]
        poles, logs = {}, {}
        for a, t in self.poles.items():
            for k, c in t.items():
                if k == 1:
                    logs[a] = c
                else:
                    poles.setdefault(a, {})[k - 1] = -c / (k - 1)
        return RationalFunction(poly, poles), logs

    def residue(self, alpha) -> Fraction:
        """Residue of f dz at a finite point."""
        return self.poles.get(_F(alpha), {}).get(1, Fraction(0))

    def residue_at_infinity(self) -> Fraction:
        return -sum((t.get(1, 0) for t in self.poles.values()), Fraction(0))

    def pole_points(self) -> list:
        """Finite poles of f, and ``None`` if f has a pole at infinity (as a function)."""
        pts = sorted(self.poles)
        if len(self.poly) > 1:
            pts.append(None)
        return pts

    def form_pole_points(self) -> list:
        """Poles of the 1-form f dz, including infinity when present."""
        pts = sorted(self.poles)
        # at infinity f dz = -f(1/w) dw / w^2: regular iff f = O(z^-2)
        if self.poly or sum((t.get(1, 0) for t in self.poles.values()), Fraction(0)) != 0:
            pts.append(None)
        return pts

    def __call__(self, z) -> Fraction:
        z = _F(z)
        val = Fraction(0)
        for c in reversed(self.poly):
            val = val * z + c
        for a, t in self.poles.items():
            if z == a:
                raise ZeroDivisionError(f"evaluation at the pole {a}")
            d = 1 / (z - a)
            for k, c in t.items():
                val += c * d ** k
        return val

    # -- Möbius pullbacks ----------------------------------------------

    def compose(self, h: Moebius) -> "RationalFunction":
        """f o h."""
        parts = []
        if self.poly:
            base = _moebius_as_partial(h)
            power = RationalFunction.constant(1)
            for n, c in enumerate(self.poly):
                if n:
                    power = _mul_simple(power, base)
                if c:
                    parts.append(power.scale(c))
        for a, t in self.poles.items():
            inv = _inverse_shift(h, a)  # 1/(h(z) - a)
            power = RationalFunction.constant(1)
            for k in range(1, max(t) + 1):
                power = _mul_simple(power, inv)
                if t.get(k):
                    parts.append(power.scale(t[k]))
        return RationalFunction.total(parts)

    def pullback_form(self, h: Moebius) -> "RationalFunction":
        """g with h^*(f dz) = g dz."""
        R, logs = self.primitive_parts()
        poles: dict = {}
        for a, c in logs.items():
            for center, sign in log_pullback(h, a)[1]:
                poles[center] = poles.get(center, 0) + sign * c
        return RationalFunction.total([R.compose(h).derivative(),
                                       RationalFunction((), {z: {1: c} for z, c in poles.items()})])

    # -- printing -----------------------------------------------------

    def __str__(self) -> str:
        terms = []
        for n, c in enumerate(self.poly):
            if c:
                terms.append(f"{c}" if n == 0 else f"{c}*z^{n}")
        for a in sorted(self.poles):
            for k in sorted(self.poles[a]):
                base = "z" if a == 0 else f"(z - {a})" if a > 0 else f"(z + {-a})"
                terms.append(f"{self.poles[a][k]}/{base}" + (f"^{k}" if k > 1 else ""))
        return " + ".join(terms) if terms else "0"

    __repr__ = __str__


def _mul_simple(f: RationalFunction, g: RationalFunction) -> RationalFunction:
    """Product where every pole of f and g is at one common point or f, g are
    polynomials of the shape produced by ``_moebius_as_partial`` (enough for
    powers of a single Möbius function)."""
    fp = [(None, n, c) for n, c in enumerate(f.poly) if c] + \
         [(a, k, c) for a, t in f.poles.items() for k, c in t.items()]
    gp = [(None, n, c) for n, c in enumerate(g.poly) if c] + \
         [(a, k, c) for a, t in g.poles.items() for k, c in t.items()]
    return RationalFunction.total(_mul_terms(*x, *y) for x in fp for y in gp)


def _mul_terms(a1, k1, c1, a2, k2, c2) -> RationalFunction:
    c = c1 * c2
    if a1 is None and a2 is None:
        return RationalFunction.monomial(k1 + k2, c)
    if a1 is not None and a2 is not None:
        if a1 != a2:
            raise NotImplementedError("product of terms with distinct poles")
        return RationalFunction.pole(a1, k1 + k2, c)
    if a1 is None:
        a1, k1, a2, k2 = a2, k2, a1, k1
    # z^n / (z - a)^k with z = (z - a) + a
    parts = []
    n, k, a = k2, k1, a1
    for j in range(n + 1):
        coef = c * comb(n, j) * a ** (n - j)
        e = j - k  # power of (z - a)
        if e < 0:
            parts.append(RationalFunction.pole(a, -e, coef))
        else:
            # (z - a)^e as a polynomial
            parts.append(RationalFunction([comb(e, i) * (-a) ** (e - i) * coef for i in range(e + 1)]))
    return RationalFunction.total(parts)


def _moebius_as_partial(h: Moebius) -> RationalFunction:
    """h(z) as kappa + mu/(z - z_inf), or a linear polynomial when c = 0."""
    if h.c == 0:
        return RationalFunction([h.b / h.d, h.a / h.d])
    zinf = -h.d / h.c
    return RationalFunction([h.a / h.c], {zinf: {1: (h.b - h.a * h.d / h.c) / h.c}})


def _inverse_shift(h: Moebius, alpha: Fraction) -> RationalFunction:
    """1/(h(z) - alpha) as a partial fraction (itself a Möbius function of z)."""
    A = h.a - alpha * h.c
    B = h.b - alpha * h.d
    # 1/(h - alpha) = (c z + d) / (A z + B)
    return _moebius_as_partial(Moebius(h.c, h.d, A, B))


def log_pullback(h: Moebius, alpha) -> tuple[Fraction, list]:
    """log(h(z) - alpha) = log(kappa) + sum sign * log(z - center).

    Valid pointwise for any branch of log that is a homomorphism.
    """
    alpha = _F(alpha)
    A = h.a - alpha * h.c
    B = h.b - alpha * h.d
    kappa = Fraction(1)
    centers = []
    if A != 0:
        kappa *= A
        centers.append((-B / A, 1))
    else:
        kappa *= B
    if h.c != 0:
        kappa /= h.c
        centers.append((-h.d / h.c, -1))
    else:
        kappa /= h.d
    return kappa, centers
