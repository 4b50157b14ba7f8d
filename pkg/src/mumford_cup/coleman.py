"""Global Coleman primitives of rational vector-valued forms on P^1.

Coordinate j of a primitive is ``R_j(z) + sum_alpha c_alpha log(z - alpha) + k_j``
with R_j rational, exact log data and a constant k_j in Q_p.  Expansion on an
annulus happens only at restriction time, so every annulus sees the same
global constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .forms import GammaModule, Matrix, VValuedForm, bilinear, expand_form
from .geometry import GeometryError, Moebius, OrientedAnnulus, orientation_of_map
from .laurent import DEFAULT_WINDOW, LogLaurent, cached_plog, double_index, expand_primitive
from .padic import INF, IWASAWA, LogBranch, PAdic
from .rational import RationalFunction, log_pullback


@dataclass(frozen=True, eq=False)
class ScalarPrimitive:
    rational: RationalFunction
    logs: tuple  # ((alpha, c), ...) sorted by alpha
    const: object = Fraction(0)  # Fraction or PAdic

    def derivative(self) -> RationalFunction:
        out = self.rational.derivative()
        return out + RationalFunction((), {a: {1: c} for a, c in self.logs})

    def singularities(self) -> list:
        pts = set(self.rational.pole_points()) | {a for a, _ in self.logs}
        return sorted(pts, key=lambda z: (z is None, z if z is not None else 0))

    def __str__(self) -> str:
        parts = [] if self.rational.is_zero() else [str(self.rational)]
        for a, c in self.logs:
            arg = "z" if a == 0 else f"z - {a}" if a > 0 else f"z + {-a}"
            parts.append(f"{c}*Log({arg})")
        if not (isinstance(self.const, Fraction) and self.const == 0):
            parts.append(f"({self.const})")
        return " + ".join(parts) if parts else "0"


def _add_const(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    return (b + a) if isinstance(a, Fraction) else (a + b)


def _scale_const(k, lam):
    if isinstance(k, Fraction):
        return k * lam
    return k * Fraction(lam)


@dataclass(frozen=True, eq=False)
class ColemanPrimitive:
    coords: tuple  # ScalarPrimitive per basis vector
    module: GammaModule
    p: int
    prec: int
    branch: LogBranch = IWASAWA

    def derivative(self) -> VValuedForm:
        return VValuedForm(tuple(c.derivative() for c in self.coords), self.module)

    def shift(self, k: Sequence) -> "ColemanPrimitive":
        """Add the constant vector k."""
        return ColemanPrimitive(
            tuple(ScalarPrimitive(c.rational, c.logs, _add_const(c.const, Fraction(x) if not isinstance(x, PAdic) else x))
                  for c, x in zip(self.coords, k)),
            self.module, self.p, self.prec, self.branch)

    def singularities(self) -> list:
        pts = set()
        for c in self.coords:
            pts.update(c.singularities())
        return sorted(pts, key=lambda z: (z is None, z if z is not None else 0))

    def __str__(self) -> str:
        return " + ".join(f"[{c}] v{j + 1}" for j, c in enumerate(self.coords))


def coleman_primitive(omega: VValuedForm, p: int, prec: int, branch: LogBranch = IWASAWA) -> ColemanPrimitive:
    """Coordinatewise antiderivative: c/(z-a)^k -> -c/((k-1)(z-a)^(k-1)), c/(z-a) -> c log(z-a)."""
    coords = []
    for f in omega.coords:
        R, logs = f.primitive_parts()
        coords.append(ScalarPrimitive(R, tuple(sorted(logs.items())), Fraction(0)))
    return ColemanPrimitive(tuple(coords), omega.module, p, prec, branch)


# digits carried beyond the requested precision while expanding on annuli
GUARD_DIGITS = 8


# -- the group action on primitives ----------------------------------------------


def _log_const(kappa: Fraction, F: ColemanPrimitive) -> PAdic:
    return cached_plog(kappa, F.branch, F.p, F.prec + GUARD_DIGITS + 4)


def compose_scalar(s: ScalarPrimitive, h: Moebius, F: ColemanPrimitive) -> ScalarPrimitive:
    """s o h, with log(h(z) - a) rewritten as log(kappa) + sum +-log(z - center)."""
    R = s.rational.compose(h)
    const = s.const
    logs: dict = {}
    for a, c in s.logs:
        kappa, centers = log_pullback(h, a)
        if kappa != 1:
            const = _add_const(const, _log_const(kappa, F) * c)
        for center, sign in centers:
            logs[center] = logs.get(center, 0) + sign * c
    return ScalarPrimitive(R, tuple(sorted((a, c) for a, c in logs.items() if c != 0)), const)


def _mix_scalar(M: Matrix, parts: Sequence[ScalarPrimitive]) -> tuple:
    out = []
    for j in range(len(M)):
        R = RationalFunction.total(parts[i].rational.scale(M[j][i]) for i in range(len(parts)) if M[j][i] != 0)
        logs: dict = {}
        const = Fraction(0)
        for i, s in enumerate(parts):
            m = M[j][i]
            if m == 0:
                continue
            for a, c in s.logs:
                logs[a] = logs.get(a, 0) + m * c
            const = _add_const(const, _scale_const(s.const, m))
        out.append(ScalarPrimitive(R, tuple(sorted((a, c) for a, c in logs.items() if c != 0)), const))
    return tuple(out)


def act(F: ColemanPrimitive, g: Moebius, rho_g: Matrix) -> ColemanPrimitive:
    """gamma(F) = rho(gamma) (F o gamma^-1), a Coleman primitive of gamma(dF)."""
    ginv = g.inverse()
    parts = [compose_scalar(s, ginv, F) for s in F.coords]
    return ColemanPrimitive(_mix_scalar(rho_g, parts), F.module, F.p, F.prec, F.branch)


def difference(F: ColemanPrimitive, G: ColemanPrimitive) -> ColemanPrimitive:
    """F - G as a single primitive."""
    neg = ColemanPrimitive(tuple(ScalarPrimitive(s.rational.scale(-1), tuple((a, -c) for a, c in s.logs),
                                                 _scale_const(s.const, -1)) for s in G.coords),
                           G.module, G.p, G.prec, G.branch)
    out = []
    for a, b in zip(F.coords, neg.coords):
        logs = dict(a.logs)
        for x, c in b.logs:
            logs[x] = logs.get(x, 0) + c
        out.append(ScalarPrimitive(a.rational + b.rational,
                                   tuple(sorted((x, c) for x, c in logs.items() if c != 0)),
                                   _add_const(a.const, b.const)))
    return ColemanPrimitive(tuple(out), F.module, F.p, F.prec, F.branch)


# -- evaluation and periods ------------------------------------------------------


def evaluate_scalar(s: ScalarPrimitive, z: Fraction, F: ColemanPrimitive) -> PAdic:
    val = PAdic.from_rational(s.rational(z), F.p, F.prec + 4)
    for a, c in s.logs:
        val = val + cached_plog(z - a, F.branch, F.p, F.prec + 4) * c
    return (val + s.const).add_bigoh(F.prec)


def evaluate(F: ColemanPrimitive, z) -> tuple:
    z = Fraction(z)
    return tuple(evaluate_scalar(s, z, F) for s in F.coords)


class Period(NamedTuple):
    value: tuple  # vector of PAdic
    defect: float  # valuation of the difference between the test points
    points: tuple


def period(F: ColemanPrimitive, g: Moebius, rho_g: Matrix, points: Sequence) -> Period:
    """gamma(F) - F evaluated at test points; its constancy defect.

    Points colliding with a singularity of either function are skipped; at
    least two usable points are required among the first 16 offered.
    """
    D = difference(act(F, g, rho_g), F)
    bad = set(D.singularities())
    usable = []
    for z in list(points)[:16]:
        z = Fraction(z)
        if z in bad:
            continue
        usable.append(z)
        if len(usable) == 2:
            break
    if len(usable) < 2:
        raise GeometryError("no two test points avoid the singularities; offer other points")
    v1, v2 = (evaluate(D, z) for z in usable)
    defect = min(((a - b).digits() for a, b in zip(v1, v2)), default=INF)
    return Period(v1, defect, tuple(usable))


# -- restriction to annuli and indices --------------------------------------------


def restrict_scalar(s: ScalarPrimitive, e: OrientedAnnulus, F: ColemanPrimitive,
                    W: int = DEFAULT_WINDOW) -> LogLaurent:
    """Expansion in the oriented parameter of e, carried GUARD_DIGITS beyond F.prec."""
    p, prec, w = F.p, F.prec + GUARD_DIGITS, e.width
    for z in s.singularities():
        if e.locate(z) == "on":
            raise GeometryError(f"singularity {'inf' if z is None else z} lies on the annulus {e}")
    h = e.param_inverse
    logs = []
    const = s.const
    for a, c in s.logs:
        kappa, centers = log_pullback(h, a)
        if kappa != 1:
            const = _add_const(const, _log_const(kappa, F) * c)
        logs += [(sign * c, center) for center, sign in centers]
    return expand_primitive(s.rational.compose(h), logs, const, w, p, prec, W, F.branch)


def restrict_to_annulus(F: ColemanPrimitive, e: OrientedAnnulus, W: int = DEFAULT_WINDOW) -> list:
    """Per-coordinate element of A_log,1 in the oriented parameter of e."""
    return [restrict_scalar(s, e, F, W) for s in F.coords]


def index_matrix(FL: Sequence[LogLaurent], GL: Sequence[LogLaurent], P: Matrix):
    total = None
    for i, f in enumerate(FL):
        for j, g in enumerate(GL):
            if P[i][j] != 0:
                term = double_index(f, g) * P[i][j]
                total = term if total is None else total + term
    if total is None:
        f = FL[0].laurent
        total = PAdic.zero(f.p, f.prec)
    return total


def vector_double_index(e: OrientedAnnulus, F: ColemanPrimitive, G: ColemanPrimitive,
                        W: int = DEFAULT_WINDOW) -> PAdic:
    """ind_e(F, G) = sum_ij ind_e(F_i, G_j) <v_i, v_j>."""
    ind = index_matrix(restrict_to_annulus(F, e, W), restrict_to_annulus(G, e, W), F.module.pairing)
    return ind.add_bigoh(min(F.prec, G.prec))


def residue_pairing(funcs: Sequence[LogLaurent], forms: Sequence, P: Matrix, function_first: bool = True):
    """Res_e <F, eta> (or Res_e <eta, F>) for log-free F given as LogLaurent."""
    total = None
    for i, f in enumerate(funcs):
        for j, h in enumerate(forms):
            m = P[i][j] if function_first else P[j][i]
            if m != 0:
                term = f.laurent.pair_residue(h) * m
                total = term if total is None else total + term
    if total is None:
        f = funcs[0].laurent
        total = PAdic.zero(f.p, f.prec)
    return total


class BridgeRecord(NamedTuple):
    ind_fg: PAdic
    res_f_eta: PAdic
    ind_gf: PAdic
    minus_res_eta_f: PAdic

    def agreement(self) -> float:
        return min((self.ind_fg - self.res_f_eta).digits(), (self.ind_gf - self.minus_res_eta_f).digits())


def index_residue_bridge(e: OrientedAnnulus, F_omega: ColemanPrimitive, eta: VValuedForm,
                         F_eta: ColemanPrimitive, W: int = DEFAULT_WINDOW) -> BridgeRecord:
    """Both sides of ind_e(F_w, F_n) = Res_e<F_w, n> and ind_e(F_n, F_w) = -Res_e<n, F_w>.

    Requires Res_e omega = 0, where omega = dF_omega.
    """
    p, prec = F_omega.p, F_omega.prec
    FL = restrict_to_annulus(F_omega, e, W)
    if any(not f.logcoef.is_zero() for f in FL):
        raise ValueError("Res_e omega must vanish for the index/residue identity")
    GL = restrict_to_annulus(F_eta, e, W)
    P = F_omega.module.pairing
    forms = [expand_form(c, e, prec + GUARD_DIGITS, W) for c in eta.coords]
    cap = min(F_omega.prec, F_eta.prec)
    return BridgeRecord(
        index_matrix(FL, GL, P).add_bigoh(cap),
        residue_pairing(FL, forms, P, True).add_bigoh(cap),
        index_matrix(GL, FL, P).add_bigoh(cap),
        -residue_pairing(FL, forms, P, False).add_bigoh(cap),
    )


class TransportRecord(NamedTuple):
    sign: int
    orientation: str
    source: PAdic
    target: PAdic

    def agreement(self) -> float:
        return (self.source - self.target * self.sign).digits()


def index_transport(g: Moebius, rho_g: Matrix, e: OrientedAnnulus, F: ColemanPrimitive, G: ColemanPrimitive,
                    target: OrientedAnnulus | None = None, W: int = DEFAULT_WINDOW) -> TransportRecord:
    """ind_e(F, G) against +-ind_{g(e)}(gF, gG), the sign read off the orientation of g."""
    target = e.image(g) if target is None else target
    orientation = orientation_of_map(g, e, target)
    sign = 1 if orientation == "preserving" else -1
    src = vector_double_index(e, F, G, W)
    tgt = vector_double_index(target, act(F, g, rho_g), act(G, g, rho_g), W)
    return TransportRecord(sign, orientation, src, tgt)
