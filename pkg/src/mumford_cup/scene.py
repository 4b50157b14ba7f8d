"""Scene files: a Schottky group, its coefficient module and named forms, in TOML.

Layout (schema 1)::

    schema = 1
    p = 5
    precision = 32
    log_branch = "0"          # the value of log(p): a rational or a p-adic digit string

    [group]
    generators = [[[1, 0], [0, 150]]]
    B = ["D(0; 5^-2)"]
    C = ["D(inf; 5^1)"]
    annulus_width = 1         # optional
    rho = [[[1]]]             # optional for trivial V
    pairing = [[1]]

    [forms.eta]
    seed = "1/(z - 1)^2"      # rational function of z with rational poles
    basis = 1                 # the seed lives in the line of v_basis
    depth = 8                 # words of length <= depth are summed
    stabilizer = 1            # optional: sum over cosets of <gamma_stabilizer>

    [task]
    cup = ["omega", "eta"]

Numbers are integers or strings holding rationals ("-3/7").  Annuli may be
given explicitly with ``b = [{around = "D(...)", width = 1, reversed = false}]``
(same for ``c``); by default each surrounds its disc with width
``annulus_width``.  Unknown keys are rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import tomli

from .cup import CupProblem
from .forms import GammaModule, VValuedForm, poincare_average
from .geometry import Disc, GeometryError, Moebius, OrientedAnnulus, parse_disc
from .padic import IWASAWA, LogBranch, PAdic
from .rational import RationalFunction
from .schottky import SchottkyData

SCHEMA_VERSION = 1


class SceneError(ValueError):
    """Malformed or inconsistent scene file; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: Optional[int] = None, source: str = "<scene>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}" if line else source
        super().__init__(f"{where}: {message}")


@dataclass
class FormSpec:
    name: str
    text: str
    seed: RationalFunction
    basis: int  # 1-based
    depth: int = 0
    stabilizer: Optional[int] = None


@dataclass
class Scene:
    p: int
    precision: int
    branch: LogBranch
    data: SchottkyData
    forms: dict
    task: dict = field(default_factory=dict)
    window: int = 64
    margin: int = 2
    source: str = "<scene>"

    def form(self, name: str, depth: Optional[int] = None) -> VValuedForm:
        if name not in self.forms:
            raise SceneError(f"no form named {name!r} (have {', '.join(sorted(self.forms)) or 'none'})",
                             source=self.source)
        spec = self.forms[name]
        seed = VValuedForm.basis_form(spec.seed, spec.basis - 1, self.data.module)
        L = spec.depth if depth is None else depth
        if L == 0 and spec.stabilizer is None:
            return seed
        return poincare_average(seed, self.data, L, spec.stabilizer)

    def cup_pair(self) -> tuple:
        pair = self.task.get("cup")
        if pair is None:
            raise SceneError("the scene has no [task] cup = [omega, eta] entry", source=self.source)
        return tuple(pair)

    def problem(self, omega: Optional[str] = None, eta: Optional[str] = None,
                depth: Optional[int] = None) -> CupProblem:
        if omega is None or eta is None:
            omega, eta = self.cup_pair()
        return CupProblem(self.data, self.form(omega, depth), self.form(eta, depth), prec=self.precision,
                          window=self.window, branch=self.branch, margin=self.margin)


# -- parsing --------------------------------------------------------------------


_TOP = {"schema", "p", "precision", "log_branch", "window", "margin", "group", "forms", "task"}
_GROUP = {"generators", "B", "C", "b", "c", "annulus_width", "rho", "pairing"}
_FORM = {"seed", "basis", "depth", "stabilizer"}
_TASK = {"cup"}
_ANNULUS = {"around", "width", "reversed"}


def _line_of(text: str, key: str, section: Optional[str] = None) -> Optional[int]:
    """Best-effort line number of ``key = ...`` (inside ``[section]`` if given)."""
    lines = text.splitlines()
    start = 0
    if section is not None:
        pat = re.compile(r"^\s*\[\s*" + re.escape(section) + r"\s*\]")
        hit = next((i for i, ln in enumerate(lines) if pat.match(ln)), None)
        if hit is None:
            return None
        start = hit + 1
    pat = re.compile(r"^\s*\"?" + re.escape(key) + r"\"?\s*=")
    for i in range(start, len(lines)):
        if section is not None and i > start and lines[i].lstrip().startswith("["):
            break
        if pat.match(lines[i]):
            return i + 1
    return start if section is not None else None


class _Reader:
    def __init__(self, text: str, source: str):
        self.text = text
        self.source = source

    def fail(self, message: str, key: str = "", section: Optional[str] = None):
        raise SceneError(message, _line_of(self.text, key, section) if key else None, self.source)

    def reject_unknown(self, table: dict, allowed: set, section: Optional[str]):
        for key in table:
            if key not in allowed:
                where = f"[{section}]" if section else "top level"
                self.fail(f"unknown key {key!r} at {where}", key, section)

    def rational(self, x, key: str, section: Optional[str] = None) -> Fraction:
        if isinstance(x, bool) or not isinstance(x, (int, str)):
            self.fail(f"{key}: expected an integer or a rational string, got {x!r}", key, section)
        try:
            return Fraction(x.replace(" ", "")) if isinstance(x, str) else Fraction(x)
        except (ValueError, ZeroDivisionError):
            self.fail(f"{key}: cannot read {x!r} as a rational", key, section)

    def integer(self, x, key: str, section: Optional[str] = None, low: Optional[int] = None) -> int:
        if isinstance(x, bool) or not isinstance(x, int):
            self.fail(f"{key}: expected an integer, got {x!r}", key, section)
        if low is not None and x < low:
            self.fail(f"{key}: must be >= {low}, got {x}", key, section)
        return x

    def matrix(self, x, key: str, section: str) -> tuple:
        if not isinstance(x, list) or not x or not all(isinstance(r, list) and len(r) == len(x) for r in x):
            self.fail(f"{key}: expected a square matrix (list of rows)", key, section)
        return tuple(tuple(self.rational(v, key, section) for v in row) for row in x)


def parse_seed(text: str) -> RationalFunction:
    """Partial fractions of a rational function of z whose poles are rational."""
    import sympy

    z = sympy.Symbol("z")
    try:
        expr = sympy.sympify(text.replace("^", "**"), locals={"z": z}, rational=True)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ValueError(f"cannot parse {text!r}: {exc}") from None
    if expr.free_symbols - {z}:
        raise ValueError(f"{text!r} uses symbols other than z")
    if not expr.is_rational_function(z):
        raise ValueError(f"{text!r} is not a rational function of z")
    poly: dict = {}
    poles: dict = {}
    for term in sympy.Add.make_args(sympy.apart(sympy.together(expr), z)):
        num, den = sympy.fraction(sympy.factor(term))
        if not den.has(z):
            p = sympy.Poly(num / den, z)
            if not all(c.is_Rational for c in p.all_coeffs()):
                raise ValueError(f"{text!r} has non-rational coefficients")
            for (n,), c in p.terms():
                poly[n] = poly.get(n, 0) + Fraction(int(c.p), int(c.q))
            continue
        if num.has(z):
            raise ValueError(f"{text!r}: the poles must be rational (irreducible factor in {term})")
        _, factors = sympy.factor_list(den, z)
        const = sympy.Rational(num) / sympy.factor_list(den, z)[0]
        if len(factors) != 1 or sympy.degree(factors[0][0], z) != 1:
            raise ValueError(f"{text!r}: the poles must be rational (denominator {den})")
        lin, k = factors[0]
        a1, a0 = sympy.Poly(lin, z).all_coeffs()
        if not (a1.is_Rational and a0.is_Rational and const.is_Rational):
            raise ValueError(f"{text!r} has non-rational coefficients")
        alpha = Fraction(int((-a0 / a1).p), int((-a0 / a1).q))
        c = const / a1 ** k
        dst = poles.setdefault(alpha, {})
        dst[int(k)] = dst.get(int(k), 0) + Fraction(int(c.p), int(c.q))
    n = max(poly) + 1 if poly else 0
    return RationalFunction([poly.get(i, 0) for i in range(n)], poles)


def _annulus(r: _Reader, spec, default_disc: Disc, width: int, key: str, p: int) -> OrientedAnnulus:
    if not isinstance(spec, dict):
        r.fail(f"{key}: each annulus is a table {{around = ..., width = ..., reversed = ...}}", key, "group")
    r.reject_unknown(spec, _ANNULUS, "group")
    disc = default_disc
    if "around" in spec:
        try:
            disc = parse_disc(str(spec["around"]), p)
        except GeometryError as exc:
            r.fail(f"{key}: {exc}", key, "group")
    w = r.integer(spec.get("width", width), key, "group", low=1)
    ann = OrientedAnnulus.around(disc, w)
    if spec.get("reversed", False) is True:
        ann = ann.reversed()
    return ann


def _branch(r: _Reader, x, p: int) -> LogBranch:
    if isinstance(x, str) and "O(" in x:
        try:
            return LogBranch(PAdic.parse(x, p))
        except ValueError as exc:
            r.fail(f"log_branch: {exc}", "log_branch")
    lam = r.rational(x, "log_branch")
    return IWASAWA if lam == 0 else LogBranch(lam)


def loads(text: str, source: str = "<scene>") -> Scene:
    try:
        raw = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise SceneError(f"TOML syntax error: {exc}", int(m.group(1)) if m else None, source) from None
    r = _Reader(text, source)
    r.reject_unknown(raw, _TOP, None)
    if "schema" not in raw:
        r.fail(f"missing 'schema = {SCHEMA_VERSION}'")
    if raw["schema"] != SCHEMA_VERSION:
        r.fail(f"unsupported schema {raw['schema']!r} (this reader understands {SCHEMA_VERSION})", "schema")
    for key in ("p", "group"):
        if key not in raw:
            r.fail(f"missing required key {key!r}")
    p = r.integer(raw["p"], "p", low=2)
    if any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        r.fail(f"p = {p} is not prime", "p")
    precision = r.integer(raw.get("precision", 32), "precision", low=2)
    window = r.integer(raw.get("window", 64), "window", low=4)
    margin = r.integer(raw.get("margin", 2), "margin", low=0)
    branch = _branch(r, raw.get("log_branch", "0"), p)

    group = raw["group"]
    if not isinstance(group, dict):
        r.fail("[group] must be a table", "group")
    r.reject_unknown(group, _GROUP, "group")
    for key in ("generators", "B", "C"):
        if key not in group:
            r.fail(f"[group] is missing {key!r}", "group")
    gens = []
    for m in group["generators"]:
        M = r.matrix(m, "generators", "group")
        if len(M) != 2:
            r.fail("generators must be 2x2 matrices", "generators", "group")
        if M[0][0] * M[1][1] - M[0][1] * M[1][0] == 0:
            r.fail(f"generator {m} is singular", "generators", "group")
        gens.append(Moebius(M[0][0], M[0][1], M[1][0], M[1][1]))
    g = len(gens)
    if g == 0:
        r.fail("at least one generator is required", "generators", "group")
    discs = {}
    for key in ("B", "C"):
        items = group[key]
        if not isinstance(items, list) or len(items) != g:
            r.fail(f"{key}: need one disc per generator ({g})", key, "group")
        try:
            discs[key] = [parse_disc(str(d), p) for d in items]
        except GeometryError as exc:
            r.fail(f"{key}: {exc}", key, "group")
    width = r.integer(group.get("annulus_width", 1), "annulus_width", "group", low=1)
    ann = {}
    for key, dkey in (("b", "B"), ("c", "C")):
        if key in group:
            items = group[key]
            if not isinstance(items, list) or len(items) != g:
                r.fail(f"{key}: need one annulus per generator ({g})", key, "group")
            ann[key] = [_annulus(r, s, d, width, key, p) for s, d in zip(items, discs[dkey])]
        else:
            ann[key] = [OrientedAnnulus.around(d, width) for d in discs[dkey]]
    if "pairing" in group:
        P = r.matrix(group["pairing"], "pairing", "group")
    else:
        P = ((Fraction(1),),)
    n = len(P)
    if "rho" in group:
        rho = group["rho"]
        if not isinstance(rho, list) or len(rho) != g:
            r.fail(f"rho: need one matrix per generator ({g})", "rho", "group")
        rho = [r.matrix(x, "rho", "group") for x in rho]
        if any(len(x) != n for x in rho):
            r.fail(f"rho: matrices must be {n}x{n} to match the pairing", "rho", "group")
    else:
        rho = [tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))] * g
    try:
        module = GammaModule(tuple(rho), P)
    except ValueError as exc:
        r.fail(f"rho: {exc}", "rho", "group")
    data = SchottkyData(p, tuple(gens), tuple(discs["B"]), tuple(discs["C"]), tuple(ann["b"]),
                        tuple(ann["c"]), module)

    forms = {}
    for name, spec in (raw.get("forms") or {}).items():
        section = f"forms.{name}"
        if not isinstance(spec, dict):
            r.fail(f"[{section}] must be a table", name)
        r.reject_unknown(spec, _FORM, section)
        if "seed" not in spec:
            r.fail(f"[{section}] needs a seed", "seed", section)
        try:
            seed = parse_seed(str(spec["seed"]))
        except ValueError as exc:
            r.fail(f"[{section}] seed: {exc}", "seed", section)
        basis = r.integer(spec.get("basis", 1), "basis", section, low=1)
        if basis > n:
            r.fail(f"[{section}] basis {basis} exceeds dim V = {n}", "basis", section)
        depth = r.integer(spec.get("depth", 0), "depth", section, low=0)
        stab = spec.get("stabilizer")
        if stab is not None:
            stab = r.integer(stab, "stabilizer", section, low=1)
            if stab > g:
                r.fail(f"[{section}] stabilizer {stab} exceeds the genus {g}", "stabilizer", section)
        forms[name] = FormSpec(name, str(spec["seed"]), seed, basis, depth, stab)

    task = raw.get("task") or {}
    r.reject_unknown(task, _TASK, "task")
    if "cup" in task:
        pair = task["cup"]
        if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, str) for x in pair)):
            r.fail("cup: expected [omega, eta] form names", "cup", "task")
        for x in pair:
            if x not in forms:
                r.fail(f"cup: unknown form {x!r}", "cup", "task")
    return Scene(p, precision, branch, data, forms, dict(task), window, margin, source)


def load(path) -> Scene:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SceneError(f"cannot read scene: {exc.strerror}", source=str(path)) from None
    return loads(text, str(path))
