"""Schottky groups with a good fundamental domain.

Generators gamma_i with closed discs B_i, C_i and annuli b_i (around B_i) and
c_i (around C_i), each annulus oriented by the disc it surrounds.  In good
position gamma_i maps B_i onto the complement of C_i ∪ c_i and b_i onto c_i,
reversing orientation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple, Optional, Sequence

from .forms import GammaModule, Matrix, VValuedForm, identity_matrix, matinv, matmul
from .geometry import (
    Disc,
    GeometryError,
    Moebius,
    OrientedAnnulus,
    classify,
    image_disc,
    orientation_of_map,
)


@dataclass(frozen=True, eq=False)
class SchottkyData:
    p: int
    generators: tuple
    B: tuple
    C: tuple
    b: tuple
    c: tuple
    module: GammaModule

    def __post_init__(self):
        for name in ("generators", "B", "C", "b", "c"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        g = len(self.generators)
        if not all(len(getattr(self, n)) == g for n in ("B", "C", "b", "c")):
            raise ValueError("need one B, C, b, c per generator")
        if len(self.module.rho) != g:
            raise ValueError("need one rho matrix per generator")

    @classmethod
    def from_discs(cls, p: int, generators: Sequence[Moebius], B: Sequence[Disc], C: Sequence[Disc],
                   module: GammaModule, width: int = 1) -> "SchottkyData":
        return cls(p, tuple(generators), tuple(B), tuple(C),
                   tuple(OrientedAnnulus.around(d, width) for d in B),
                   tuple(OrientedAnnulus.around(d, width) for d in C), module)

    @property
    def genus(self) -> int:
        return len(self.generators)

    def annuli(self) -> list:
        """The annuli ends of F: b_1, c_1, b_2, c_2, ..."""
        out = []
        for bi, ci in zip(self.b, self.c):
            out += [bi, ci]
        return out

    def discs(self) -> list:
        out = []
        for Bi, Ci in zip(self.B, self.C):
            out += [Bi, Ci]
        return out

    def disc_names(self) -> list:
        return [f"{n}{i + 1}" for i in range(self.genus) for n in ("B", "C")]


# -- validation -----------------------------------------------------------------


class Check(NamedTuple):
    name: str
    ok: bool
    detail: str


@dataclass
class ValidationReport:
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def first_failure(self) -> Optional[Check]:
        return next((c for c in self.checks if not c.ok), None)

    def failed(self) -> list:
        return [c.name for c in self.checks if not c.ok]

    def format(self) -> str:
        return "\n".join(f"[{'ok' if c.ok else 'FAIL'}] {c.name}: {c.detail}" for c in self.checks)


def validate(data: SchottkyData) -> ValidationReport:
    """Check the good-fundamental-domain axioms, each failure with a witness."""
    checks = []
    p = data.p

    bad = [(i + 1, str(g)) for i, g in enumerate(data.generators) if classify(g, p) != "hyperbolic"]
    checks.append(Check("hyperbolic", not bad,
                        "all generators hyperbolic" if not bad
                        else "; ".join(f"gamma{i} = {g} is not hyperbolic" for i, g in bad)))

    discs, names = data.discs(), data.disc_names()
    overlaps = [(names[i], names[j]) for i in range(len(discs)) for j in range(i + 1, len(discs))
                if not discs[i].disjoint(discs[j])]
    checks.append(Check("discs pairwise disjoint", not overlaps,
                        f"{len(discs)} closed discs disjoint" if not overlaps
                        else "; ".join(f"{a} = {discs[names.index(a)]} meets {b} = {discs[names.index(b)]}"
                                       for a, b in overlaps)))

    # annuli as sets, each viewed from the disc it should surround
    adj = {}
    mismatch = []
    for i in range(data.genus):
        for disc, ann, n in ((data.B[i], data.b[i], "b"), (data.C[i], data.c[i], "c")):
            if ann.inner_disc().same_set(disc):
                adj[n, i] = ann
            elif ann.reversed().inner_disc().same_set(disc):
                adj[n, i] = ann.reversed()
            else:
                adj[n, i] = ann
                mismatch.append(f"{n}{i + 1} surrounds {ann.inner_disc()}, not {disc}")
    checks.append(Check("annuli surround their discs", not mismatch,
                        "each b_i, c_i borders B_i, C_i" if not mismatch else "; ".join(mismatch)))

    outer = [adj[n, i].outer_disc() for i in range(data.genus) for n in ("b", "c")]
    onames = [f"{n}{i + 1}" for i in range(data.genus) for n in ("B∪b", "C∪c")]
    olap = [(onames[i], onames[j]) for i in range(len(outer)) for j in range(i + 1, len(outer))
            if not outer[i].disjoint(outer[j])]
    checks.append(Check("open discs B_i∪b_i, C_i∪c_i disjoint", not olap,
                        "disjoint" if not olap else "; ".join(f"{a} meets {b}" for a, b in olap)))

    wrong = []
    for i, g in enumerate(data.generators):
        target = adj["c", i].outer_disc().complement()
        try:
            img = image_disc(g, data.B[i])
            if not img.same_set(target):
                wrong.append(f"gamma{i + 1}(B{i + 1}) = {img}, expected {target}")
            img_o = image_disc(g, adj["b", i].outer_disc())
            if not img_o.same_set(data.C[i].complement()):
                wrong.append(f"gamma{i + 1}(B{i + 1}∪b{i + 1}) = {img_o}, expected {data.C[i].complement()}")
        except GeometryError as exc:
            wrong.append(f"gamma{i + 1}: {exc}")
    checks.append(Check("gamma_i(B_i) = complement of C_i∪c_i, gamma_i(b_i) = c_i", not wrong,
                        "image discs match" if not wrong else "; ".join(wrong)))

    orient = []
    for i, g in enumerate(data.generators):
        for n, ann in (("b", data.b[i]), ("c", data.c[i])):
            if ann is not adj[n, i]:
                orient.append(f"{n}{i + 1} is oriented away from {n.upper()}{i + 1}")
        try:
            o = orientation_of_map(g, data.b[i], data.c[i])
        except GeometryError as exc:
            o = f"error ({exc})"
        if o != "reversing":
            orient.append(f"gamma{i + 1}: b{i + 1} -> c{i + 1} is {o}")
    checks.append(Check("gamma_i: b_i -> c_i reverses orientation", not orient,
                        "all reversing" if not orient else "; ".join(orient)))

    nonInv = data.module.invariance_failures()
    checks.append(Check("pairing invariant under rho", not nonInv,
                        "rho_i^T P rho_i = P for all i" if not nonInv
                        else "; ".join(f"rho{i}^T P rho{i} != P" for i in nonInv)))

    ping = all(c.ok for c in checks if c.name.startswith("gamma_i(B_i)") or c.name.startswith("discs"))
    checks.append(Check("free generation", ping,
                        "free by ping-pong" if ping else "ping-pong hypotheses fail"))
    checks.append(Check("fundamental domain", ping,
                        "implied by the disc configuration" if ping else "not established"))
    return ValidationReport(checks)


# -- words --------------------------------------------------------------------


class Word(NamedTuple):
    letters: tuple
    matrix: Moebius
    rho: Matrix

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return "".join(f"g{abs(s)}" + ("^-1" if s < 0 else "") for s in self.letters)


def reduced_words(data: SchottkyData, depth: int, avoid_suffix: Optional[int] = None) -> Iterator[Word]:
    """Reduced words of length <= depth, shortest first, in a fixed order.

    ``avoid_suffix = i`` drops words ending in gamma_i^{+-1}: one
    representative per coset of <gamma_i>.
    """
    g = data.genus
    letters = [s for i in range(1, g + 1) for s in (i, -i)]
    mats = {}
    rhos = {}
    for i, gen in enumerate(data.generators):
        mats[i + 1], mats[-(i + 1)] = gen, gen.inverse()
        r = data.module.rho[i]
        rhos[i + 1], rhos[-(i + 1)] = r, matinv(r)
    layer = [Word((), Moebius.identity(), identity_matrix(data.module.dim))]
    for length in range(depth + 1):
        for w in layer:
            if avoid_suffix is None or not w.letters or abs(w.letters[-1]) != avoid_suffix:
                yield w
        if length == depth:
            break
        nxt = []
        for w in layer:
            for s in letters:
                if w.letters and w.letters[-1] == -s:
                    continue
                nxt.append(Word(w.letters + (s,), w.matrix @ mats[s], matmul(w.rho, rhos[s])))
        layer = nxt


def word_count(genus: int, depth: int) -> int:
    return 1 + sum(2 * genus * (2 * genus - 1) ** (k - 1) for k in range(1, depth + 1))


# -- the fundamental domain F ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class FundamentalDomain:
    """F = P^1 minus the closed discs B_i, C_i; its annuli ends are the b_i, c_i."""

    data: SchottkyData

    def contains(self, z) -> bool:
        return not any(d.contains(z) for d in self.data.discs())

    def on_annulus(self, z) -> Optional[str]:
        for i in range(self.data.genus):
            if self.data.b[i].locate(z) == "on":
                return f"b{i + 1}"
            if self.data.c[i].locate(z) == "on":
                return f"c{i + 1}"
        return None

    def ends(self) -> list:
        return self.data.annuli()

    def sample_points(self, count: int = 16, avoid: Sequence = ()) -> list:
        """Deterministic rational points of F off the annuli and away from ``avoid``."""
        avoid = set(avoid)
        out = []
        for den in range(1, 50):
            for num in range(1, 200):
                z = Fraction(num, den)
                if z.denominator != den or z in avoid:
                    continue
                if self.contains(z) and self.on_annulus(z) is None:
                    out.append(z)
                    if len(out) == count:
                        return out
        return out


def poles_in_F(omega: VValuedForm, F: FundamentalDomain) -> list:
    """Poles of omega in F (``None`` for infinity); poles on an annulus end are rejected."""
    out = []
    for z in omega.pole_points():
        where = F.on_annulus(z)
        if where is not None:
            raise GeometryError(f"pole {'inf' if z is None else z} lies on the annulus {where}; "
                                "the annuli b_i, c_i must carry no poles")
        if F.contains(z):
            out.append(z)
    return out
