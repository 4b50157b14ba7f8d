"""Vector-valued rational 1-forms and the action of a Schottky group on them.

A form is ``sum_j f_j(z) dz (x) v_j`` in a fixed basis ``v_j`` of V, each
``f_j`` an exact ``RationalFunction``.  The group acts by
``gamma(sum w_j v_j) = sum (gamma^-1)^* w_j  rho(gamma) v_j``, on functions by
the same rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

from .geometry import GeometryError, Moebius, OrientedAnnulus, ProjPoint
from .laurent import DEFAULT_WINDOW, LaurentWindow, expand_rational
from .padic import PAdic
from .rational import RationalFunction

Matrix = tuple  # tuple of row tuples of Fraction


# -- small exact linear algebra ---------------------------------------------


def as_matrix(rows) -> Matrix:
    m = tuple(tuple(Fraction(x) for x in row) for row in rows)
    if any(len(r) != len(m) for r in m):
        raise ValueError("matrix must be square")
    return m


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def matmul(A: Matrix, B: Matrix) -> Matrix:
    n = len(A)
    return tuple(tuple(sum((A[i][k] * B[k][j] for k in range(n)), Fraction(0)) for j in range(n))
                 for i in range(n))


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A))


def matinv(A: Matrix) -> Matrix:
    """Gauss-Jordan over Q."""
    n = len(A)
    M = [list(A[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return tuple(tuple(row[n:]) for row in M)


def bilinear(v: Sequence, P: Matrix, u: Sequence):
    """v^T P u for vectors of Fractions or PAdics."""
    total = 0
    for i, vi in enumerate(v):
        for j, uj in enumerate(u):
            if P[i][j] != 0:
                total = vi * uj * P[i][j] + total
    return total


# -- the coefficient module ---------------------------------------------------


@dataclass(frozen=True)
class GammaModule:
    """V = Q_p^n with generator images rho(gamma_i) and the pairing <v, u> = v^T P u."""

    rho: tuple
    pairing: Matrix

    def __post_init__(self):
        object.__setattr__(self, "rho", tuple(as_matrix(r) for r in self.rho))
        object.__setattr__(self, "pairing", as_matrix(self.pairing))
        n = len(self.pairing)
        for r in self.rho:
            if len(r) != n:
                raise ValueError("rho matrices and pairing have different dimensions")
            matinv(r)

    @classmethod
    def trivial(cls, genus: int) -> "GammaModule":
        one = ((Fraction(1),),)
        return cls(tuple(one for _ in range(genus)), one)

    @property
    def dim(self) -> int:
        return len(self.pairing)

    def image(self, word: Sequence[int]) -> Matrix:
        """rho of a word given as signed 1-based generator indices, read left to right."""
        out = identity_matrix(self.dim)
        for s in word:
            r = self.rho[abs(s) - 1]
            out = matmul(out, r if s > 0 else matinv(r))
        return out

    def invariance_failures(self) -> list[int]:
        """1-based indices i with rho_i^T P rho_i != P."""
        P = self.pairing
        return [i + 1 for i, r in enumerate(self.rho) if matmul(matmul(transpose(r), P), r) != P]

    def pair(self, v, u):
        return bilinear(v, self.pairing, u)

    def change_basis(self, S: Matrix) -> "GammaModule":
        """The same module in the basis v' = v S."""
        S = as_matrix(S)
        Si = matinv(S)
        return GammaModule(tuple(matmul(matmul(Si, r), S) for r in self.rho),
                           matmul(matmul(transpose(S), self.pairing), S))


# -- forms ----------------------------------------------------------------


def _mix(M: Matrix, coords: Sequence[RationalFunction]) -> tuple:
    return tuple(
        RationalFunction.total(coords[i].scale(M[j][i]) for i in range(len(coords)) if M[j][i] != 0)
        for j in range(len(M))
    )


@dataclass(frozen=True, eq=False)
class VValuedForm:
    """sum_j coords[j](z) dz (x) v_j.

    ``limit_points`` lists poles that stand in for limit points of the group
    (poles of truncated coset sums); they lie outside H and are exempt from
    the second-kind requirement.
    """

    coords: tuple
    module: GammaModule
    limit_points: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        if len(self.coords) != self.module.dim:
            raise ValueError("number of coordinates differs from dim V")

    @classmethod
    def basis_form(cls, f: RationalFunction, slot: int, module: GammaModule) -> "VValuedForm":
        coords = [RationalFunction()] * module.dim
        coords[slot] = f
        return cls(tuple(coords), module)

    def __add__(self, other: "VValuedForm") -> "VValuedForm":
        return VValuedForm(tuple(a + b for a, b in zip(self.coords, other.coords)), self.module,
                           self.limit_points | other.limit_points)

    def scale(self, lam) -> "VValuedForm":
        return VValuedForm(tuple(c.scale(lam) for c in self.coords), self.module, self.limit_points)

    def __sub__(self, other: "VValuedForm") -> "VValuedForm":
        return self + other.scale(-1)

    def equals(self, other: "VValuedForm") -> bool:
        return all(a == b for a, b in zip(self.coords, other.coords))

    def pole_points(self) -> list:
        pts = set()
        for c in self.coords:
            pts.update(c.form_pole_points())
        return sorted(pts, key=lambda z: (z is None, z if z is not None else 0))

    def change_basis(self, S: Matrix) -> "VValuedForm":
        return VValuedForm(_mix(matinv(as_matrix(S)), self.coords), self.module.change_basis(S),
                           self.limit_points)

    def __str__(self) -> str:
        return " + ".join(f"({c}) dz (x) v{j + 1}" for j, c in enumerate(self.coords) if not c.is_zero()) or "0"


def pullback_action(omega: VValuedForm, g: Moebius, rho_g: Matrix) -> VValuedForm:
    """gamma(omega) for gamma acting on P^1 by g and on V by rho_g."""
    ginv = g.inverse()
    pulled = [c.pullback_form(ginv) for c in omega.coords]
    lp = frozenset(g(z) for z in omega.limit_points)
    return VValuedForm(_mix(rho_g, pulled), omega.module, lp)


def act_word(omega: VValuedForm, word, generators: Sequence[Moebius]) -> VValuedForm:
    return pullback_action(omega, word_matrix(word, generators), omega.module.image(word))


def word_matrix(word: Sequence[int], generators: Sequence[Moebius]) -> Moebius:
    out = Moebius.identity()
    for s in word:
        g = generators[abs(s) - 1]
        out = out @ (g if s > 0 else g.inverse())
    return out


# -- residues -----------------------------------------------------------------


def residue_at_point(omega: VValuedForm, z0) -> tuple:
    """Coordinatewise residue at a point (``None`` or a ProjPoint at infinity for infinity)."""
    if isinstance(z0, ProjPoint):
        z0 = z0.z
    if z0 is None:
        return tuple(c.residue_at_infinity() for c in omega.coords)
    return tuple(c.residue(z0) for c in omega.coords)


def enclosed_residue(omega: VValuedForm, e: OrientedAnnulus) -> tuple:
    """Exact residue on e as the sum of point residues inside its inner disc."""
    total = [Fraction(0)] * omega.module.dim
    for z in omega.pole_points():
        where = e.locate(z)
        if where == "on":
            raise GeometryError(f"pole {z} lies on the annulus {e}")
        if where == "inside":
            for j, r in enumerate(residue_at_point(omega, z)):
                total[j] += r
    return tuple(total)


def check_off_annulus(points: Iterable, e: OrientedAnnulus, what: str = "pole") -> None:
    for z in points:
        if e.locate(z) == "on":
            raise GeometryError(f"{what} {'inf' if z is None else z} lies on the annulus {e}; move it")


def expand_form(f: RationalFunction, e: OrientedAnnulus, prec: int, W: int = DEFAULT_WINDOW) -> LaurentWindow:
    """Laurent window of the 1-form f dz in the oriented parameter of e."""
    return expand_rational(f.pullback_form(e.param_inverse), e.width, e.p, prec, W)


def expand_function(f: RationalFunction, e: OrientedAnnulus, prec: int, W: int = DEFAULT_WINDOW) -> LaurentWindow:
    return expand_rational(f.compose(e.param_inverse), e.width, e.p, prec, W)


def residue_on_annulus(omega: VValuedForm, e: OrientedAnnulus, prec: int, W: int = DEFAULT_WINDOW) -> tuple:
    """Coefficient of dt/t of each coordinate, t the orienting parameter of e."""
    check_off_annulus(omega.pole_points(), e)
    return tuple(expand_form(c, e, prec, W).residue() for c in omega.coords)


class KindCheck(NamedTuple):
    ok: bool
    witness: Optional[object] = None
    residue: Optional[tuple] = None


def second_kind_check(omega: VValuedForm) -> KindCheck:
    """Every pole outside ``limit_points`` must have zero vector residue."""
    for z in omega.pole_points():
        if z in omega.limit_points:
            continue
        r = residue_at_point(omega, z)
        if any(x != 0 for x in r):
            return KindCheck(False, "inf" if z is None else z, r)
    return KindCheck(True)


# -- averaging ------------------------------------------------------------------


def poincare_average(seed: VValuedForm, data, depth: int, stabilizer: Optional[int] = None) -> VValuedForm:
    """Sum of w(seed) over reduced words of length <= depth.

    With ``stabilizer = i`` the sum runs over coset representatives of
    Gamma / <gamma_i> (words not ending in gamma_i^{+-1}); the seed must then
    be fixed by gamma_i.  The seed's poles with nonzero residue are treated as
    limit points in that case.
    """
    from .schottky import reduced_words

    if stabilizer is not None:
        g = data.generators[stabilizer - 1]
        fixed = pullback_action(seed, g, seed.module.rho[stabilizer - 1])
        if not fixed.equals(seed):
            raise ValueError(f"seed is not fixed by generator {stabilizer}")
        lp = set(seed.limit_points)
        for z in seed.pole_points():
            if any(r != 0 for r in residue_at_point(seed, z)):
                lp.add(z)
        seed = VValuedForm(seed.coords, seed.module, frozenset(lp))
    terms = []
    limit = set()
    for w in reduced_words(data, depth, avoid_suffix=stabilizer):
        t = pullback_action(seed, w.matrix, w.rho)
        terms.append(t.coords)
        limit |= t.limit_points
    coords = tuple(RationalFunction.total(t[j] for t in terms) for j in range(seed.module.dim))
    return VValuedForm(coords, seed.module, frozenset(limit))


def invariance_defect(omega: VValuedForm, data, prec: int, W: int = DEFAULT_WINDOW) -> int:
    """Digits to which gamma_i(omega) = omega on every annulus end, all generators.

    Measured as the least valuation among the window coefficients of the
    expansions of gamma_i(omega) - omega on the b_i and c_i; capped at prec.
    Tail bounds are not used: poles on the boundary circle of an annulus give
    single-term bounds that cannot see the cancellation between the clustered
    poles of a truncated average.
    """
    best = prec
    for i, g in enumerate(data.generators):
        diff = pullback_action(omega, g, omega.module.rho[i]) - omega
        for e in data.annuli():
            for c in diff.coords:
                if c.is_zero():
                    continue
                best = min(best, min(x.digits() for x in expand_form(c, e, prec, W).coeffs))
    return int(best) if best != float("inf") else prec
