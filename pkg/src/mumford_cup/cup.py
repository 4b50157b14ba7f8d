"""Both sides of the cup-product formula, the intermediate identities, and reciprocity.

left side:   sum over poles x in F of Res_x <F_omega, eta>
right side:  sum_i <gamma_i F_omega - F_omega, Res_{c_i} eta> - <Res_{c_i} omega, gamma_i F_eta - F_eta>
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from .coleman import (
    GUARD_DIGITS,
    ColemanPrimitive,
    act,
    coleman_primitive,
    difference,
    index_matrix,
    period,
    residue_pairing,
    restrict_to_annulus,
    vector_double_index,
)
from .forms import (
    VValuedForm,
    bilinear,
    expand_form,
    invariance_defect,
    pullback_action,
    residue_at_point,
    residue_on_annulus,
)
from .geometry import Disc, GeometryError, OrientedAnnulus
from .laurent import DEFAULT_WINDOW
from .padic import INF, IWASAWA, LogBranch, PAdic, PrecisionError, vp
from .schottky import FundamentalDomain, SchottkyData, poles_in_F


class AssumptionError(ValueError):
    """An input violates a hypothesis of the formula."""


@dataclass
class CupProblem:
    data: SchottkyData
    omega: VValuedForm
    eta: VValuedForm
    prec: int = 32
    window: int = DEFAULT_WINDOW
    branch: LogBranch = IWASAWA
    margin: int = 2
    shift_omega: Optional[Sequence] = None  # additive constants for the global primitives
    shift_eta: Optional[Sequence] = None
    shift_local: Optional[dict] = None  # pole -> constant vector added to the local primitive of omega there
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def p(self) -> int:
        return self.data.p

    @property
    def domain(self) -> FundamentalDomain:
        return FundamentalDomain(self.data)

    def primitive(self, which: str) -> ColemanPrimitive:
        key = ("F", which)
        if key not in self._cache:
            form = self.omega if which == "omega" else self.eta
            F = coleman_primitive(form, self.p, self.prec, self.branch)
            shift = self.shift_omega if which == "omega" else self.shift_eta
            if shift is not None:
                F = F.shift(shift)
            self._cache[key] = F
        return self._cache[key]

    def check_assumptions(self) -> None:
        F = self.domain
        for name, form in (("omega", self.omega), ("eta", self.eta)):
            for i, e in enumerate(self.data.annuli()):
                for z in form.pole_points():
                    if e.locate(z) == "on":
                        raise AssumptionError(
                            f"{name} has a pole at {z} on the annulus {'bc'[i % 2]}{i // 2 + 1}; "
                            "the annuli b_i and c_i must contain no poles")
            # F holds one representative of every class of singular points of H
            for z in poles_in_F(form, F):
                r = residue_at_point(form, z)
                if any(x != 0 for x in r):
                    raise AssumptionError(f"{name} is not of the second kind: residue {r} at "
                                          f"{'inf' if z is None else z}")

    def poles(self) -> list:
        pts = set(poles_in_F(self.omega, self.domain)) | set(poles_in_F(self.eta, self.domain))
        return sorted(pts, key=lambda z: (z is None, z if z is not None else 0))

    def test_points(self) -> list:
        avoid = set(self.primitive("omega").singularities()) | set(self.primitive("eta").singularities())
        return self.domain.sample_points(16, avoid)


# -- local annuli around points ------------------------------------------------------


def point_annulus(x, others: Sequence, p: int, width: int = 1) -> OrientedAnnulus:
    """Annulus oriented by a disc around x that excludes every point of ``others``."""
    finite = [s for s in others if s is not None and s != x]
    if x is None:
        k = max([width - vp(s, p) for s in finite if s != 0] + [width + 1])
        return OrientedAnnulus.around(Disc(Fraction(0), k, p, at_infinity=True), width)
    k = max([vp(s - x, p) + width for s in finite] + [width])
    return OrientedAnnulus.around(Disc(x, k, p), width)


# -- left side ----------------------------------------------------------------


class PoleTerm(NamedTuple):
    point: object
    annulus: OrientedAnnulus
    value: PAdic


def cup_lhs(problem: CupProblem) -> tuple:
    """(total, [PoleTerm]) with local primitives built from the Laurent expansion at each pole."""
    prec, W = problem.prec, problem.window
    P = problem.omega.module.pairing
    pts = problem.poles()
    others = problem.omega.pole_points() + problem.eta.pole_points()
    terms = []
    total = PAdic.zero(problem.p, prec)
    for x in pts:
        e = point_annulus(x, others, problem.p)
        om = [expand_form(c, e, prec + GUARD_DIGITS, W) for c in problem.omega.coords]
        for o in om:
            if not o.residue().is_zero():
                raise AssumptionError(f"omega has a residue at {x}")
        Fl = [o.primitive() for o in om]
        if problem.shift_local and x in problem.shift_local:
            Fl = [f.add_constant(PAdic.from_rational(k, problem.p, prec + GUARD_DIGITS))
                  for f, k in zip(Fl, problem.shift_local[x])]
        et = [expand_form(c, e, prec + GUARD_DIGITS, W) for c in problem.eta.coords]
        val = residue_pairing(Fl, et, P, True).add_bigoh(prec)
        terms.append(PoleTerm(x, e, val))
        total = total + val
    return total, terms


# -- right side -------------------------------------------------------------------


class GeneratorTerm(NamedTuple):
    index: int
    period_omega: tuple
    res_eta: tuple
    res_omega: tuple
    period_eta: tuple
    defect_omega: float
    defect_eta: float
    value: PAdic


def cup_rhs(problem: CupProblem) -> tuple:
    """(total, [GeneratorTerm]): periods by evaluation at test points, residues on c_i."""
    data, prec, W = problem.data, problem.prec, problem.window
    M = problem.omega.module
    Fo, Fe = problem.primitive("omega"), problem.primitive("eta")
    pts = problem.test_points()
    terms = []
    total = PAdic.zero(problem.p, prec)
    for i, g in enumerate(data.generators):
        c = data.c[i]
        po = period(Fo, g, M.rho[i], pts)
        pe = period(Fe, g, M.rho[i], pts)
        # guard digits keep a period of negative valuation from eating into the product
        re = residue_on_annulus(problem.eta, c, prec + GUARD_DIGITS, W)
        ro = residue_on_annulus(problem.omega, c, prec + GUARD_DIGITS, W)
        val = bilinear(po.value, M.pairing, re) - bilinear(ro, M.pairing, pe.value)
        if not isinstance(val, PAdic):
            val = PAdic.from_rational(val, problem.p, prec)
        val = val.add_bigoh(prec)
        re, ro = (tuple(x.add_bigoh(prec) for x in r) for r in (re, ro))
        terms.append(GeneratorTerm(i + 1, po.value, re, ro, pe.value, po.defect, pe.defect, val))
        total = total + val
    return total, terms


# -- the chain of identities --------------------------------------------------------

CHAIN_LABELS = (
    "sum_x Res_x <F_w, n>  (local primitives)",
    "sum_x ind_x(F_w, F_n)  (global primitives)",
    "-sum_i ind_b_i(F_w, F_n) + ind_c_i(F_w, F_n)  (reciprocity)",
    "sum_i ind_c_i(g_i F_w, g_i F_n) - ind_c_i(F_w, F_n)  (transport)",
    "sum_i ind_c_i(g_i F_w - F_w, g_i F_n) + ind_c_i(F_w, g_i F_n - F_n)  (bilinearity)",
    "sum_i Res_c_i <g_i F_w - F_w, g_i n> - Res_c_i <w, g_i F_n - F_n>  (index as residue)",
    "sum_i <g_i F_w - F_w, Res_c_i n> - <Res_c_i w, g_i F_n - F_n>  (constants extracted)",
)


class ChainLine(NamedTuple):
    label: str
    value: PAdic
    per_generator: tuple  # empty for the point-indexed lines


def _zero(problem):
    return PAdic.zero(problem.p, problem.prec)


def proof_chain(problem: CupProblem) -> list:
    data, W = problem.data, problem.window
    M = problem.omega.module
    P = M.pairing
    Fo, Fe = problem.primitive("omega"), problem.primitive("eta")
    lines = []

    l1, _ = cup_lhs(problem)
    lines.append(ChainLine(CHAIN_LABELS[0], l1, ()))

    sing = Fo.singularities() + Fe.singularities() + problem.omega.pole_points() + problem.eta.pole_points()
    l2 = _zero(problem)
    for x in problem.poles():
        l2 = l2 + vector_double_index(point_annulus(x, sing, problem.p), Fo, Fe, W)
    lines.append(ChainLine(CHAIN_LABELS[1], l2, ()))

    l3, per3 = _zero(problem), []
    for i in range(data.genus):
        t = -(vector_double_index(data.b[i], Fo, Fe, W) + vector_double_index(data.c[i], Fo, Fe, W))
        per3.append(t)
        l3 = l3 + t
    lines.append(ChainLine(CHAIN_LABELS[2], l3, tuple(per3)))

    per4, per5, per6, per7 = [], [], [], []
    for i, g in enumerate(data.generators):
        c, r = data.c[i], M.rho[i]
        gFo, gFe = act(Fo, g, r), act(Fe, g, r)
        FoL, FeL = restrict_to_annulus(Fo, c, W), restrict_to_annulus(Fe, c, W)
        gFoL, gFeL = restrict_to_annulus(gFo, c, W), restrict_to_annulus(gFe, c, W)
        per4.append(index_matrix(gFoL, gFeL, P) - index_matrix(FoL, FeL, P))
        A = restrict_to_annulus(difference(gFo, Fo), c, W)
        B = restrict_to_annulus(difference(gFe, Fe), c, W)
        per5.append(index_matrix(A, gFeL, P) + index_matrix(FoL, B, P))
        g_eta = pullback_action(problem.eta, g, r)
        g_eta_x = [expand_form(f, c, problem.prec + GUARD_DIGITS, W) for f in g_eta.coords]
        om_x = [expand_form(f, c, problem.prec + GUARD_DIGITS, W) for f in problem.omega.coords]
        per6.append(residue_pairing(A, g_eta_x, P, True) - residue_pairing(B, om_x, P, False))
        eta_x = [expand_form(f, c, problem.prec + GUARD_DIGITS, W) for f in problem.eta.coords]
        consts_A = [a.laurent.coef(0) for a in A]
        consts_B = [b.laurent.coef(0) for b in B]
        per7.append(bilinear(consts_A, P, [x.residue() for x in eta_x])
                    - bilinear([x.residue() for x in om_x], P, consts_B))
    for label, per in zip(CHAIN_LABELS[3:], (per4, per5, per6, per7)):
        per = [t.add_bigoh(problem.prec) for t in per]
        total = _zero(problem)
        for t in per:
            total = total + t
        lines.append(ChainLine(label, total, tuple(per)))
    return lines


# -- reciprocity -----------------------------------------------------------------------


class ReciprocityResult(NamedTuple):
    total: PAdic
    terms: tuple
    digits: float


def reciprocity_check(ends: Sequence[OrientedAnnulus], F: ColemanPrimitive, G: ColemanPrimitive,
                      W: int = DEFAULT_WINDOW) -> ReciprocityResult:
    """sum over the annuli ends of U of ind_e(F, G), expected to vanish."""
    terms = tuple(vector_double_index(e, F, G, W) for e in ends)
    total = PAdic.zero(F.p, F.prec)
    for t in terms:
        total = total + t
    return ReciprocityResult(total, terms, total.digits())


def ends_are_disjoint(ends: Sequence[OrientedAnnulus]) -> bool:
    outer = [e.outer_disc() for e in ends]
    return all(outer[i].disjoint(outer[j]) for i in range(len(outer)) for j in range(i + 1, len(outer)))


# -- the full comparison ------------------------------------------------------------------


@dataclass
class CupReport:
    lhs: PAdic
    rhs: PAdic
    pole_terms: list
    generator_terms: list
    budget: dict
    chain: list = field(default_factory=list)
    sides: str = "both"

    @property
    def agreement(self) -> float:
        return (self.lhs - self.rhs).digits()

    @property
    def guaranteed(self) -> int:
        return int(self.budget["guaranteed"])

    @property
    def ok(self) -> bool:
        """Both sides (and consecutive chain lines, if computed) agree within the budget."""
        if self.sides != "both":
            return True
        return self.agreement >= self.guaranteed and all(a >= self.guaranteed for a in self.chain_agreement())

    def chain_agreement(self) -> list:
        """Digits of agreement between consecutive chain lines."""
        return [(self.chain[k].value - self.chain[k + 1].value).digits() for k in range(len(self.chain) - 1)]

    def format(self) -> str:
        out = []
        if self.sides in ("both", "lhs"):
            out.append("== LHS breakdown")
            for t in self.pole_terms:
                out.append(f"  x = {'inf' if t.point is None else t.point}: {t.value}")
            if not self.pole_terms:
                out.append("  no poles in the fundamental domain")
            out.append(f"  total: {self.lhs}")
        if self.sides in ("both", "rhs"):
            out += self._format_rhs()
        if self.chain:
            out.append("== proof chain")
            agree = self.chain_agreement()
            for k, line in enumerate(self.chain):
                out.append(f"  L{k + 1} {line.label}")
                out.append(f"     = {line.value}")
                for i, v in enumerate(line.per_generator):
                    out.append(f"       generator {i + 1}: {v}")
                if k < len(agree):
                    out.append(f"     L{k + 1} - L{k + 2} vanishes to {_d(agree[k])} digits")
        out.append("== error budget")
        for k, v in self.budget.items():
            out.append(f"  {k}: {_d(v)}")
        out.append("== verdict")
        if self.sides != "both":
            out.append(f"  {self.sides.upper()} ONLY: no comparison made")
        else:
            verdict = "AGREE" if self.ok else "DISAGREE"
            line = f"  {verdict}: lhs - rhs vanishes to {_d(self.agreement)} digits (guaranteed >= {self.guaranteed})"
            if self.chain:
                worst = min(self.chain_agreement(), default=INF)
                line += f"; chain lines agree to >= {_d(worst)} digits"
            out.append(line)
        return "\n".join(out)

    def _format_rhs(self) -> list:
        out = ["== RHS breakdown"]
        for t in self.generator_terms:
            out.append(f"  generator {t.index}:")
            out.append(f"    period of F_omega: [{', '.join(str(x) for x in t.period_omega)}]"
                       f"  (constant to {_d(t.defect_omega)} digits)")
            out.append(f"    Res_c eta:         [{', '.join(str(x) for x in t.res_eta)}]")
            out.append(f"    Res_c omega:       [{', '.join(str(x) for x in t.res_omega)}]")
            out.append(f"    period of F_eta:   [{', '.join(str(x) for x in t.period_eta)}]"
                       f"  (constant to {_d(t.defect_eta)} digits)")
            out.append(f"    term: {t.value}")
        out.append(f"  total: {self.rhs}")
        return out


def _d(x) -> str:
    return "all" if x == INF else str(int(x)) if x == int(x) else f"{x:.1f}"


def verify(problem: CupProblem, sides: str = "both", chain: bool = False) -> CupReport:
    """Compute the requested sides and the error budget."""
    problem.check_assumptions()
    zero = _zero(problem)
    lhs, pole_terms = cup_lhs(problem) if sides in ("both", "lhs") else (zero, [])
    rhs, gen_terms = cup_rhs(problem) if sides in ("both", "rhs") else (zero, [])
    d_om = invariance_defect(problem.omega, problem.data, problem.prec, problem.window)
    d_eta = invariance_defect(problem.eta, problem.data, problem.prec, problem.window)
    const = min([min(t.defect_omega, t.defect_eta) for t in gen_terms] + [problem.prec])
    budget = {
        "working precision": problem.prec,
        "lhs precision": lhs.digits() if lhs.is_zero() else lhs.prec,
        "rhs precision": rhs.digits() if rhs.is_zero() else rhs.prec,
        "invariance defect omega": d_om,
        "invariance defect eta": d_eta,
        "period constancy": const,
        "safety margin": problem.margin,
    }
    budget["guaranteed"] = max(0, min(budget["lhs precision"], budget["rhs precision"], d_om, d_eta, const)
                               - problem.margin)
    lines = proof_chain(problem) if chain and sides == "both" else []
    return CupReport(lhs, rhs, pole_terms, gen_terms, budget, lines, sides)
