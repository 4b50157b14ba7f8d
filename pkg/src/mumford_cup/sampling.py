"""Seeded random domains, forms, annulus functions and group elements.

Everything takes an explicit ``random.Random`` so runs are reproducible.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional, Sequence

from .forms import GammaModule, VValuedForm
from .geometry import Disc, Moebius, OrientedAnnulus, classify
from .laurent import LaurentWindow, LogLaurent
from .padic import PAdic
from .rational import RationalFunction


def small_rational(rng: random.Random, p: int, spread: int = 2) -> Fraction:
    """A nonzero rational with p-adic valuation in [-spread, spread]."""
    num = rng.randint(1, 40) * rng.choice((1, -1))
    den = rng.randint(1, 40)
    while num % p == 0:
        num //= p
    while den % p == 0:
        den //= p
    return Fraction(num, den) * Fraction(p) ** rng.randint(-spread, spread)


def random_domain(rng: random.Random, p: int, n: int, width: int = 1, allow_infinity: bool = True) -> list:
    """n closed discs whose annuli of the given width have disjoint outer discs.

    Finite discs sit in distinct residue classes mod p; one disc may contain
    infinity instead.  Returns the annuli oriented by the discs.
    """
    if n > p + 1:
        raise ValueError("at most p + 1 discs fit in this construction")
    use_inf = allow_infinity and (n == p + 1 or rng.random() < 0.5)
    residues = rng.sample(range(p), n - 1 if use_inf else n)
    ends = []
    for a in residues:
        k = rng.randint(width, width + 2)
        center = Fraction(a + p * rng.randint(0, p * p))
        ends.append(OrientedAnnulus.around(Disc(center, k, p), width))
    if use_inf:
        ends.append(OrientedAnnulus.around(Disc(Fraction(0), rng.randint(width, width + 1), p, True), width))
    return ends


def point_in(rng: random.Random, d: Disc) -> Optional[Fraction]:
    """A rational point of the closed disc; ``None`` (infinity) for some discs at infinity."""
    u = Fraction(rng.randint(0, 4 * d.p * d.p))
    if d.at_infinity:
        if rng.random() < 0.3:
            return None
        # |z - c| >= p^k: z = c + p^-k / (small p-adic integer)
        return d.center + Fraction(1) / (Fraction(d.p) ** d.k * (1 + d.p * u))
    return d.center + Fraction(d.p) ** d.k * u


def random_second_kind(rng: random.Random, discs: Sequence[Disc], terms: int = 3, max_order: int = 3,
                       p: Optional[int] = None) -> RationalFunction:
    """f with f dz of the second kind, all poles inside the given discs."""
    p = p or discs[0].p
    poly: list = []
    poles: dict = {}
    for _ in range(terms):
        d = rng.choice(list(discs))
        z = point_in(rng, d)
        c = small_rational(rng, p)
        if z is None:
            n = rng.randint(0, max_order - 2)
            poly += [Fraction(0)] * (n + 1 - len(poly))
            poly[n] += c
        else:
            k = rng.randint(2, max_order)
            poles.setdefault(z, {})
            poles[z][k] = poles[z].get(k, 0) + c
    return RationalFunction(poly, poles)


def random_form(rng: random.Random, discs: Sequence[Disc], module: GammaModule, **kw) -> VValuedForm:
    return VValuedForm(tuple(random_second_kind(rng, discs, **kw) for _ in range(module.dim)), module)


def random_pairing_module(rng: random.Random, dim: int) -> GammaModule:
    """V of dimension dim with a random invertible pairing (trivial action)."""
    if dim == 1:
        return GammaModule.trivial(1)
    while True:
        P = tuple(tuple(Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(dim)) for _ in range(dim))
        try:
            GammaModule((P,), P)  # the invertibility test
        except ValueError:
            continue
        ident = tuple(tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim))
        return GammaModule((ident,), P)


def random_basis_change(rng: random.Random, dim: int) -> tuple:
    while True:
        S = tuple(tuple(Fraction(rng.randint(-6, 6), rng.randint(1, 5)) for _ in range(dim)) for _ in range(dim))
        if dim == 1 and S[0][0] != 0:
            return S
        if dim == 2 and S[0][0] * S[1][1] - S[0][1] * S[1][0] != 0:
            return S
        if dim > 2:
            try:
                GammaModule((S,), S)
                return S
            except ValueError:
                continue


def random_log_laurent(rng: random.Random, p: int, prec: int, w: int = 1, span: int = 6,
                       with_log: bool = True, W: int = 16) -> LogLaurent:
    """A Laurent polynomial with p-adic integer coefficients, plus c*log t."""
    data = {}
    for n in range(-span, span + 1):
        if rng.random() < 0.7:
            data[n] = PAdic._make(p, rng.randint(0, 3), rng.randrange(1, p ** prec), prec)
    f = LaurentWindow.from_coeffs(data, p, prec, w, W)
    c = PAdic._make(p, rng.randint(0, 2), rng.randrange(1, p ** prec), prec) if with_log else PAdic.zero(p, prec)
    return LogLaurent(f, c)


def random_hyperbolic(rng: random.Random, p: int) -> Moebius:
    """S diag(p^m u, 1) S^-1 with S an integer matrix and m >= 1."""
    while True:
        a, b, c, d = (rng.randint(-6, 6) for _ in range(4))
        if a * d == b * c:
            continue
        S = Moebius(a, b, c, d)
        lam = Fraction(p) ** rng.randint(1, 3) * rng.choice((1, 2, 3, 6, Fraction(1, 2)))
        g = S @ Moebius(lam, 0, 0, 1) @ S.inverse()
        if classify(g, p) == "hyperbolic":
            return g
