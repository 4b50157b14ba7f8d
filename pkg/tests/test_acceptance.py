"""Acceptance criteria 1-10, one PASS/FAIL line each."""

import dataclasses
import io
import random
import time
from fractions import Fraction

import pytest

from mumford_cup.cli import main
from mumford_cup.coleman import (
    coleman_primitive,
    index_residue_bridge,
    index_transport,
    vector_double_index,
)
from mumford_cup.cup import cup_lhs, cup_rhs, reciprocity_check, verify
from mumford_cup.forms import GammaModule, enclosed_residue
from mumford_cup.geometry import orientation_of_map
from mumford_cup.laurent import LogLaurent, double_index
from mumford_cup.padic import PAdic, plog
from mumford_cup.rational import RationalFunction
from mumford_cup.sampling import (
    random_basis_change,
    random_domain,
    random_form,
    random_hyperbolic,
    random_log_laurent,
    random_pairing_module,
    small_rational,
)
from mumford_cup.scene import load
from mumford_cup.schottky import validate

P, N = 5, 32
LOSS = 6


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
        assert ok, detail
    return emit


def test_criterion_01_double_index_axioms(verdict):
    rng = random.Random(101)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(200):
        F, G, H = (random_log_laurent(rng, P, N) for _ in range(3))
        lam = PAdic.from_rational(small_rational(rng, P, 0), P, N)
        F0 = LogLaurent(F.laurent, PAdic.zero(P, N))
        ok = (double_index(F, G) == -double_index(G, F)
              and double_index(F + H, G) == double_index(F, G) + double_index(H, G)
              and double_index(F, G.scale(lam)) == double_index(F, G) * lam
              and double_index(F0, G) == F0.laurent.pair_residue(G.derivative()))
        bad += not ok
    dt = time.perf_counter() - t0
    verdict(1, bad == 0 and dt < 5, f"200 pairs, {bad} violations, {dt:.2f}s (< 5s)")


def test_criterion_02_residue_theorem(verdict):
    rng = random.Random(202)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(200):
        poles = {}
        for _ in range(rng.randint(1, 5)):
            a = Fraction(rng.randint(-30, 30), rng.randint(1, 8))
            poles.setdefault(a, {})[rng.randint(1, 4)] = small_rational(rng, P)
        f = RationalFunction([small_rational(rng, P) for _ in range(rng.randint(0, 3))], poles)
        total = sum((f.residue(a) for a in f.poles), Fraction(0)) + f.residue_at_infinity()
        bad += total != 0
    dt = time.perf_counter() - t0
    verdict(2, bad == 0 and dt < 5, f"200 forms, {bad} nonzero sums, {dt:.2f}s (< 5s)")


def test_criterion_03_reciprocity(verdict):
    rng = random.Random(303)
    t0 = time.perf_counter()
    worst = {}
    for dim in (1, 2):
        worst[dim] = N
        for _ in range(50):
            ends = random_domain(rng, P, 4)
            M = random_pairing_module(rng, dim)
            discs = [e.inner_disc() for e in ends]
            F = coleman_primitive(random_form(rng, discs, M), P, N)
            G = coleman_primitive(random_form(rng, discs, M), P, N)
            worst[dim] = min(worst[dim], reciprocity_check(ends, F, G).digits)
    dt = time.perf_counter() - t0
    ok = min(worst.values()) >= N - LOSS and dt < 30
    verdict(3, ok, f"4 discs, 50 pairs each for dim V = 1, 2: worst vanishing {worst[1]:g} / {worst[2]:g} "
                   f"digits (>= {N - LOSS}), {dt:.1f}s (< 30s)")


def test_criterion_04_index_as_residue(verdict):
    rng = random.Random(404)
    worst = N
    for _ in range(50):
        ends = random_domain(rng, P, 3)
        M = random_pairing_module(rng, rng.choice((1, 2)))
        discs = [e.inner_disc() for e in ends]
        om, eta = random_form(rng, discs, M), random_form(rng, discs, M)
        e = ends[rng.randrange(3)]
        assert all(x == 0 for x in enclosed_residue(om, e))
        rec = index_residue_bridge(e, coleman_primitive(om, P, N), eta, coleman_primitive(eta, P, N))
        worst = min(worst, rec.agreement())
    verdict(4, worst >= N - LOSS, f"50 configurations, both identities to >= {worst:g} digits (>= {N - LOSS})")


def test_criterion_05_transport(verdict):
    rng = random.Random(505)
    worst, signs_ok, seen = N, True, set()
    for i in range(25):
        ends = random_domain(rng, P, 3)
        M = random_pairing_module(rng, rng.choice((1, 2)))
        discs = [e.inner_disc() for e in ends]
        F = coleman_primitive(random_form(rng, discs, M), P, N)
        G = coleman_primitive(random_form(rng, discs, M), P, N)
        g = random_hyperbolic(rng, P)
        e = ends[0]
        target = e.image(g).reversed() if rng.random() < 0.5 else e.image(g)
        rec = index_transport(g, M.rho[0], e, F, G, target)
        expected = 1 if orientation_of_map(g, e, target) == "preserving" else -1
        signs_ok &= rec.sign == expected
        seen.add(rec.sign)
        worst = min(worst, rec.agreement())
    ok = worst >= N - LOSS and signs_ok and seen == {1, -1}
    verdict(5, ok, f"25 maps, signed equality to >= {worst:g} digits (>= {N - LOSS}), "
                   f"signs match orientation: {signs_ok}, both signs seen: {seen == {1, -1}}")


def test_criterion_06_genus1(verdict, genus1):
    t0 = time.perf_counter()
    g = genus1.data.generators[0]
    q = g.d / g.a  # z -> z/q
    period_nonzero = not plog(q, p=P, prec=N).is_zero()
    rep = verify(genus1.problem(), chain=True)
    dt = time.perf_counter() - t0
    delta = rep.budget["invariance defect eta"]
    chain = min(rep.chain_agreement())
    ok = (q == 150 and period_nonzero and delta >= 14 and rep.agreement >= 10 and chain >= 10
          and rep.ok and dt < 60)
    verdict(6, ok, f"q = {q}, lhs - rhs to {rep.agreement:g} digits (>= 10), delta = {delta} (>= 14), "
                   f"chain lines to >= {chain:g} digits (>= 10), {dt:.1f}s (< 60s)")


def test_criterion_07_genus2(verdict, genus2):
    t0 = time.perf_counter()
    pr = genus2.problem()
    M = pr.omega.module
    nontrivial = any(r != ((1, 0), (0, 1)) for r in M.rho) and not M.invariance_failures()
    rep = verify(pr, chain=True)
    dt = time.perf_counter() - t0
    per_gen = len(rep.generator_terms) == 2 and all(len(line.per_generator) == 2 for line in rep.chain[2:])
    text = rep.format()
    ok = (M.dim == 2 and nontrivial and rep.agreement >= 6 and rep.guaranteed >= 6 and rep.ok
          and per_gen and "generator 2" in text and dt < 300)
    verdict(7, ok, f"dim V = 2, lhs - rhs to {rep.agreement:g} digits (>= 6, budget {rep.guaranteed}), "
                   f"delta = {rep.budget['invariance defect omega']}/{rep.budget['invariance defect eta']}, "
                   f"per-generator breakdown: {per_gen}, {dt:.1f}s (< 300s)")


def test_criterion_08_basis_independence(verdict):
    rng = random.Random(808)
    worst = N
    for _ in range(20):
        ends = random_domain(rng, P, 3)
        M = random_pairing_module(rng, 2)
        discs = [e.inner_disc() for e in ends]
        om, eta = random_form(rng, discs, M), random_form(rng, discs, M)
        S = random_basis_change(rng, 2)
        e = ends[0]
        a = vector_double_index(e, coleman_primitive(om, P, N), coleman_primitive(eta, P, N))
        b = vector_double_index(e, coleman_primitive(om.change_basis(S), P, N),
                                coleman_primitive(eta.change_basis(S), P, N))
        worst = min(worst, (a - b).digits())
    verdict(8, worst >= N - LOSS, f"20 basis changes, index unchanged to >= {worst:g} digits (>= {N - LOSS})")


def _shifted(pr, rng):
    dim = pr.omega.module.dim
    vec = lambda: [Fraction(rng.randint(-99, 99), rng.randint(1, 13)) for _ in range(dim)]  # noqa: E731
    local = {x: vec() for x in pr.poles()}
    return dataclasses.replace(pr, _cache={}, shift_omega=vec(), shift_eta=vec(), shift_local=local)


def test_criterion_09_constant_independence(verdict, genus1, genus2):
    rng = random.Random(909)
    checked, changed = 0, 0
    for scene, shifts in ((genus1, 5), (genus2, 2)):
        pr = scene.problem()
        lhs0, pt0 = cup_lhs(pr)
        rhs0, gt0 = cup_rhs(pr)
        base = [lhs0, rhs0] + [t.value for t in pt0] + [t.value for t in gt0]
        for _ in range(shifts):
            sp = _shifted(pr, rng)
            lhs1, pt1 = cup_lhs(sp)
            rhs1, gt1 = cup_rhs(sp)
            new = [lhs1, rhs1] + [t.value for t in pt1] + [t.value for t in gt1]
            for a, b in zip(base, new):
                checked += 1
                changed += (a - b).digits() < pr.prec or a.prec != b.prec
    verdict(9, changed == 0, f"{checked} values under random global and local shifts, {changed} changed")


CORRUPTED = {
    "overlap": "discs pairwise disjoint",
    "bad_image": "gamma_i(B_i) = complement of C_i∪c_i, gamma_i(b_i) = c_i",
    "bad_orientation": "gamma_i: b_i -> c_i reverses orientation",
    "parabolic": "hyperbolic",
    "noninvariant_pairing": "pairing invariant under rho",
    "annulus_mismatch": "annuli surround their discs",
}


def _code(*argv):
    return main(list(argv), io.StringIO(), io.StringIO())


def test_criterion_10_validation(verdict, scenes_dir):
    wrong = []
    for name, check in CORRUPTED.items():
        path = scenes_dir / "corrupted" / f"{name}.toml"
        first = validate(load(path).data).first_failure()
        if first is None or first.name != check:
            wrong.append(name)
        if _code("validate", "--scene", str(path)) != 1 or _code("cup", "--scene", str(path)) != 2:
            wrong.append(f"{name} (exit code)")
    for name in ("genus1", "genus2"):
        path = scenes_dir / f"{name}.toml"
        if not validate(load(path).data).ok or _code("validate", "--scene", str(path)) != 0:
            wrong.append(name)
    if _code("cup", "--scene", str(scenes_dir / "genus1.toml")) != 0:
        wrong.append("genus1 cup exit")
    if _code("cup", "--scene", str(scenes_dir / "genus2.toml"), "--depth", "1") != 3:
        wrong.append("precision exhaustion exit")
    verdict(10, not wrong, f"6 corrupted scenes with the right witness, 2 good scenes, exit codes 0/1/2/3"
                           + (f"; wrong: {', '.join(wrong)}" if wrong else ""))
