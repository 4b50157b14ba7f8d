"""PGL_2(Q) acting on P^1(Q_p): points, Möbius maps, discs and oriented annuli.

All geometric data is exact (``Fraction``); radii live in the value group p^Z.
A disc or annulus is described through a Möbius *chart* ``phi``: the closed
disc ``{|phi(z)| <= 1}``, and the annulus ``{p^-w < |phi(z)| < 1}`` whose
orientation is the one given by ``phi`` itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .padic import INF, vp


class GeometryError(ValueError):
    pass


def _F(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# -- points -------------------------------------------------------------


@dataclass(frozen=True)
class ProjPoint:
    """Point (x : y) of P^1, stored canonically as (z : 1) or (1 : 0)."""

    x: Fraction
    y: Fraction

    def __post_init__(self):
        x, y = _F(self.x), _F(self.y)
        if x == 0 and y == 0:
            raise GeometryError("(0 : 0) is not a point of P^1")
        if y == 0:
            x, y = Fraction(1), Fraction(0)
        else:
            x, y = x / y, Fraction(1)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def of(cls, z) -> "ProjPoint":
        if z is None or z == "inf":
            return cls(Fraction(1), Fraction(0))
        return cls(_F(z), Fraction(1))

    @property
    def is_infinity(self) -> bool:
        return self.y == 0

    @property
    def z(self) -> Optional[Fraction]:
        """Affine coordinate, ``None`` for infinity."""
        return None if self.is_infinity else self.x

    def __str__(self) -> str:
        return "inf" if self.is_infinity else str(self.x)


INFINITY = ProjPoint.of(None)


# -- Möbius maps -------------------------------------------------------


@dataclass(frozen=True)
class Moebius:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for k in "abcd":
            object.__setattr__(self, k, _F(getattr(self, k)))
        if self.det == 0:
            raise GeometryError("singular matrix")

    @classmethod
    def identity(cls) -> "Moebius":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_rows(cls, rows) -> "Moebius":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> Fraction:
        return self.a + self.d

    def __matmul__(self, other: "Moebius") -> "Moebius":
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return Moebius(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "Moebius":
        return Moebius(self.d, -self.b, -self.c, self.a)

    def scaled(self) -> tuple:
        """Entries normalised so that equality mod scalars is tuple equality."""
        for x in (self.a, self.b, self.c, self.d):
            if x != 0:
                return tuple(y / x for y in (self.a, self.b, self.c, self.d))
        raise AssertionError

    def same_as(self, other: "Moebius") -> bool:
        return self.scaled() == other.scaled()

    def __call__(self, z):
        """Action on an affine coordinate (``None`` = infinity)."""
        if z is None:
            return None if self.c == 0 else self.a / self.c
        z = _F(z)
        den = self.c * z + self.d
        if den == 0:
            return None
        return (self.a * z + self.b) / den

    def apply(self, P: ProjPoint) -> ProjPoint:
        return ProjPoint(self.a * P.x + self.b * P.y, self.c * P.x + self.d * P.y)

    @property
    def pole(self):
        """Preimage of infinity (``None`` when it is infinity itself)."""
        return None if self.c == 0 else -self.d / self.c

    @property
    def zero(self):
        """Preimage of 0."""
        return None if self.a == 0 else -self.b / self.a

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    def __str__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


def classify(g: Moebius, p: int) -> str:
    """'hyperbolic' iff the characteristic roots have distinct valuations."""
    vt, vd = vp(g.trace, p), vp(g.det, p)
    return "hyperbolic" if 2 * vt < vd else "not-hyperbolic"


# -- discs ---------------------------------------------------------------


@dataclass(frozen=True)
class Disc:
    """Closed or open disc of P^1(Q_p) with radius in p^Z.

    finite chart:  {|z - center| <= p^-k}   (``<`` when open)
    infinity chart: {|z - center| >= p^k} ∪ {∞}   (``>`` when open)
    In both cases the disc is {|u| <= p^-k} for u = z - center or 1/(z - center).
    """

    center: Fraction
    k: int
    p: int
    at_infinity: bool = False
    closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "center", _F(self.center))

    def chart(self) -> Moebius:
        """Möbius phi with the disc equal to {|phi| <= 1} (closed) or {< 1} (open)."""
        pk = Fraction(self.p) ** self.k
        if self.at_infinity:
            # phi = p^-k / (z - c)
            return Moebius(0, 1 / pk, 1, -self.center)
        # phi = (z - c) / p^k
        return Moebius(1 / pk, -self.center / pk, 0, 1)

    def contains(self, z) -> bool:
        """Membership of an affine coordinate (``None`` = infinity)."""
        if z is None:
            return self.at_infinity
        v = vp(_F(z) - self.center, self.p)
        if self.at_infinity:
            return v <= -self.k if self.closed else v < -self.k
        return v >= self.k if self.closed else v > self.k

    def complement(self) -> "Disc":
        """P^1 minus this disc, which is again a disc (open <-> closed)."""
        return Disc(self.center, -self.k, self.p, not self.at_infinity, not self.closed)

    # Finite discs are threshold sets {v(z - c) >= r} with r = (k, 0) when
    # closed and r = (k, 1) ("k + epsilon") when open; an infinity disc is the
    # complement of the finite disc complement().

    def _thr(self):
        return (self.k, 0 if self.closed else 1)

    @staticmethod
    def _meets(v, thr) -> bool:
        k, strict = thr
        return v > k if strict else v >= k

    def _subset_finite(self, other: "Disc") -> bool:
        # both finite
        return self._thr() >= other._thr() and self._meets(vp(self.center - other.center, self.p), other._thr())

    def _meet_finite(self, other: "Disc") -> bool:
        return self._meets(vp(self.center - other.center, self.p), min(self._thr(), other._thr()))

    def subset(self, other: "Disc") -> bool:
        if not self.at_infinity and not other.at_infinity:
            return self._subset_finite(other)
        if not self.at_infinity and other.at_infinity:
            return not self._meet_finite(other.complement())
        if self.at_infinity and not other.at_infinity:
            return False
        return other.complement().subset(self.complement())

    def same_set(self, other: "Disc") -> bool:
        return self.subset(other) and other.subset(self)

    def disjoint(self, other: "Disc") -> bool:
        if self.at_infinity and other.at_infinity:
            return False
        if self.at_infinity:
            return other.subset(self.complement())
        if other.at_infinity:
            return self.subset(other.complement())
        return not self._meet_finite(other)

    def radius_str(self) -> str:
        p = self.p
        return f"{p}^{-self.k}" if not self.at_infinity else f"{p}^{self.k}"

    def __str__(self) -> str:
        kind = "closed" if self.closed else "open"
        if self.at_infinity:
            c = "" if self.center == 0 else f", center {self.center}"
            return f"D(inf; {self.p}^{self.k}{c}, {kind})"
        return f"D({self.center}; {self.p}^{-self.k}, {kind})"


def disc_from_chart(phi: Moebius, p: int, closed: bool = True) -> Disc:
    """Canonical Disc equal to {|phi(z)| <= 1} (or < 1 when ``closed`` is False)."""
    a, b, c, d = phi.a, phi.b, phi.c, phi.d
    if c == 0:
        # phi = (a/d)(z - z0)
        z0 = -b / a
        return Disc(z0, -vp(a / d, p), p, False, closed)
    zinf = -d / c
    if a == 0:
        # |b/(c(z - zinf))| <= 1  <=>  |z - zinf| >= |b/c|
        return Disc(zinf, -vp(b / c, p), p, True, closed)
    z0 = -b / a
    # |phi| = |a/c| |z - z0| / |z - zinf|
    lam = vp(c / a, p)  # |c/a| = p^-lam
    rho = vp(z0 - zinf, p)  # |z0 - zinf| = p^-rho
    if lam > 0:
        # |c/a| < 1: finite disc around z0 of radius |c/a| * |z0 - zinf|
        return Disc(z0, lam + rho, p, False, closed)
    if lam < 0:
        # infinity disc {|z - zinf| >= |z0 - zinf| / |c/a|}
        return Disc(zinf, lam - rho, p, True, closed)
    # |c/a| = 1: {|z - z0| <= |z - zinf|}
    if closed:
        return Disc(zinf, -rho, p, True, True)
    return Disc(z0, rho, p, False, False)


def image_disc(g: Moebius, D: Disc) -> Disc:
    """Exact image g(D), as a canonical disc."""
    return disc_from_chart(D.chart() @ g.inverse(), D.p, D.closed)


# -- oriented annuli --------------------------------------------------------


@dataclass(frozen=True)
class OrientedAnnulus:
    """{p^-width < |t| < 1} for the parameter t = phi(z); oriented by t.

    The inner disc {|t| <= p^-width} is the disc on which the orienting
    parameter is small.
    """

    phi: Moebius
    width: int
    p: int

    def __post_init__(self):
        if self.width < 1:
            raise GeometryError("annulus width must be >= 1")

    @classmethod
    def around(cls, inner: Disc, width: int = 1) -> "OrientedAnnulus":
        """Annulus surrounding the closed disc ``inner``, oriented by it."""
        pw = Fraction(inner.p) ** width
        scale = Moebius(pw, 0, 0, 1)
        return cls(scale @ inner.chart(), width, inner.p)

    @property
    def param_inverse(self) -> Moebius:
        """z as a Möbius function of t."""
        return self.phi.inverse()

    def inner_disc(self) -> Disc:
        pw = Fraction(self.p) ** self.width
        return disc_from_chart(Moebius(1 / pw, 0, 0, 1) @ self.phi, self.p, True)

    def outer_disc(self) -> Disc:
        """The open disc inner ∪ annulus."""
        return disc_from_chart(self.phi, self.p, closed=False)

    def reversed(self) -> "OrientedAnnulus":
        """Same annulus, opposite orientation: t' = p^w / t."""
        pw = Fraction(self.p) ** self.width
        return OrientedAnnulus(Moebius(0, pw, 1, 0) @ self.phi, self.width, self.p)

    def image(self, g: Moebius) -> "OrientedAnnulus":
        """g(e) with the pushed-forward orientation, in canonical chart."""
        return OrientedAnnulus.around(image_disc(g, self.inner_disc()), self.width)

    def locate(self, z) -> str:
        """'inside' (inner disc), 'outside' (beyond the outer circle) or 'on'."""
        t = self.phi(z)
        if t is None:
            return "outside"
        v = vp(t, self.p)
        if v >= self.width:
            return "inside"
        if v <= 0:
            return "outside"
        return "on"

    def same_set(self, other: "OrientedAnnulus") -> bool:
        try:
            orientation_of_map(Moebius.identity(), self, other)
        except GeometryError:
            return False
        return True

    def __str__(self) -> str:
        return f"A(inner={self.inner_disc()}, width={self.width})"


def _param_map(g: Moebius, e: OrientedAnnulus, e2: OrientedAnnulus) -> Moebius:
    # t2 as a Möbius function of t: t2 = phi2(g(phi^-1(t)))
    return e2.phi @ g @ e.phi.inverse()


def orientation_of_map(g: Moebius, e: OrientedAnnulus, e2: OrientedAnnulus) -> str:
    """'preserving' / 'reversing' for g: e -> e2, by the leading Laurent exponent.

    The pulled-back parameter M(t) = (alpha t + beta)/(gamma t + delta) is
    ~ kappa t on e when its zero lies in the inner disc and its pole outside,
    ~ kappa / t in the opposite configuration.  Anything else is not an
    isomorphism of these annuli.
    """
    p, w = e.p, e.width
    M = _param_map(g, e, e2)

    def where(x):
        if x is None:
            return "out"
        v = vp(x, p)
        if v >= w:
            return "in"
        if v <= 0:
            return "out"
        return "on"

    z0, zi = where(M.zero), where(M.pole)
    if e2.width != w:
        raise GeometryError("annuli of different widths are not isomorphic")
    if z0 == "in" and zi == "out":
        # |M(t)| = |alpha/delta| |t|
        if vp(M.a / M.d, p) != 0:
            raise GeometryError("map does not carry the annulus onto the target annulus")
        return "preserving"
    if z0 == "out" and zi == "in":
        # |M(t)| = |beta/gamma| / |t|
        if vp(M.b / M.c, p) != w:
            raise GeometryError("map does not carry the annulus onto the target annulus")
        return "reversing"
    raise GeometryError("leading exponent is not ±1: not an isomorphism of annuli")


def parse_disc(text: str, p: int) -> Disc:
    """Parse ``D(c; p^-k)``, ``D(c; p^-k, open)``, ``D(inf; p^k)`` or
    ``D(inf; p^k, center c)``."""
    import re

    s = text.strip().replace(" ", "").replace("∞", "inf")
    m = re.fullmatch(r"D\(([^;]+);(\d+)\^\(?(-?\d+)\)?(?:,center([^,\)]+))?(?:,(closed|open))?\)", s)
    if not m:
        raise GeometryError(f"cannot parse disc {text!r}")
    c, base, e, center, kind = m.groups()
    if int(base) != p:
        raise GeometryError(f"disc radius base {base} does not match prime {p}")
    closed = kind != "open"
    if c == "inf":
        return Disc(Fraction(center) if center else Fraction(0), int(e), p, True, closed)
    if center:
        raise GeometryError("'center' only applies to discs at infinity")
    return Disc(Fraction(c), -int(e), p, False, closed)
