"""Command-line front end: mumford-cup {validate, cup, reciprocity, words, report}.

Exit codes: 0 pass, 1 verification failure, 2 input or validation error,
3 precision exhaustion.  Reports carry no timings or other run-dependent data,
so the same scene and seed give byte-identical output.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from dataclasses import replace
from fractions import Fraction
from typing import Optional

from .coleman import coleman_primitive
from .cup import AssumptionError, point_annulus, reciprocity_check, verify
from .geometry import GeometryError
from .padic import IWASAWA, LogBranch, PAdic, PrecisionError
from .sampling import random_domain, random_form, random_pairing_module
from .scene import Scene, SceneError, load
from .schottky import reduced_words, validate, word_count

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_PRECISION = 0, 1, 2, 3
PRECISION_ENV = "MUMFORD_CUP_PRECISION"


class InputError(Exception):
    pass


def _parse_branch(text: str, p: int) -> LogBranch:
    if "O(" in text:
        return LogBranch(PAdic.parse(text, p))
    lam = Fraction(text)
    return IWASAWA if lam == 0 else LogBranch(lam)


def _precision(args, default: int) -> int:
    if args.precision is not None:
        return args.precision
    env = os.environ.get(PRECISION_ENV)
    if env:
        try:
            n = int(env)
        except ValueError:
            raise InputError(f"{PRECISION_ENV}={env!r} is not an integer") from None
        if n < 2:
            raise InputError(f"{PRECISION_ENV} must be >= 2")
        return n
    return default


def _scene(args) -> Scene:
    if not args.scene:
        raise InputError("--scene PATH is required")
    scene = load(args.scene)
    prec = _precision(args, scene.precision)
    branch = scene.branch if args.log_branch is None else _parse_branch(args.log_branch, scene.p)
    window = scene.window if args.window is None else args.window
    return replace(scene, precision=prec, branch=branch, window=window)


def _branch_text(b: LogBranch) -> str:
    return f"log(p) = {b.lam}"


def scene_summary(scene: Scene) -> str:
    d = scene.data
    out = ["== scene", f"  source: {scene.source}", f"  p = {scene.p}, precision = {scene.precision}, "
           f"window = {scene.window}, {_branch_text(scene.branch)}", f"  genus {d.genus}, dim V = {d.module.dim}"]
    for i, g in enumerate(d.generators):
        out.append(f"  gamma{i + 1} = {g}   rho{i + 1} = {_mat(d.module.rho[i])}")
        out.append(f"    B{i + 1} = {d.B[i]}, C{i + 1} = {d.C[i]}")
        out.append(f"    b{i + 1} = {d.b[i]}, c{i + 1} = {d.c[i]}")
    out.append(f"  pairing = {_mat(d.module.pairing)}")
    for name in sorted(scene.forms):
        f = scene.forms[name]
        how = f"depth {f.depth}" + (f", cosets of gamma{f.stabilizer}" if f.stabilizer else "")
        out.append(f"  form {name}: ({f.seed}) dz (x) v{f.basis}, {how}")
    return "\n".join(out)


def _mat(M) -> str:
    return "[" + ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in M) + "]"


def _validation(scene: Scene) -> tuple:
    rep = validate(scene.data)
    return rep, "== validation\n" + "\n".join("  " + line for line in rep.format().splitlines())


def _require_valid(scene: Scene, parts: list, out) -> None:
    rep, text = _validation(scene)
    parts.append(text)
    if not rep.ok:
        out.write("\n".join(parts) + "\n")
        bad = rep.first_failure()
        raise InputError(f"scene fails validation: {bad.name}: {bad.detail}")


# -- subcommands -----------------------------------------------------------------


def cmd_validate(args, out) -> int:
    scene = _scene(args)
    rep, text = _validation(scene)
    out.write(scene_summary(scene) + "\n" + text + "\n")
    if rep.ok:
        out.write("== verdict\n  VALID\n")
        return EXIT_OK
    bad = rep.first_failure()
    out.write(f"== verdict\n  INVALID: {bad.name}: {bad.detail}\n")
    return EXIT_FAIL


def _cup_names(args, scene: Scene) -> tuple:
    if args.omega or args.eta:
        if not (args.omega and args.eta):
            raise InputError("give both --omega and --eta")
        return args.omega, args.eta
    return scene.cup_pair()


def cmd_cup(args, out, chain: Optional[bool] = None, sides: Optional[str] = None) -> int:
    scene = _scene(args)
    parts = [scene_summary(scene)]
    _require_valid(scene, parts, out)
    om, et = _cup_names(args, scene)
    problem = scene.problem(om, et, args.depth)
    if sides is None:
        sides = "lhs" if args.lhs else "rhs" if args.rhs else "both"
    if chain is None:
        chain = args.proof_chain
    report = verify(problem, sides=sides, chain=chain)
    parts.append(f"== cup product of {om} and {et}")
    parts.append(report.format())
    out.write("\n".join(parts) + "\n")
    if sides == "both" and report.guaranteed <= 0:
        raise PrecisionError("the error budget certifies no digits; raise --precision or the averaging depth")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_report(args, out) -> int:
    args.omega = args.eta = None
    return cmd_cup(args, out, chain=True, sides="both")


def cmd_words(args, out) -> int:
    scene = _scene(args)
    depth = 2 if args.depth is None else args.depth
    lines = [scene_summary(scene), f"== reduced words of length <= {depth}"]
    n = 0
    for w in reduced_words(scene.data, depth):
        lines.append(f"  {str(w):<24} {w.matrix}   rho = {_mat(w.rho)}")
        n += 1
    expected = word_count(scene.data.genus, depth)
    lines.append(f"== count: {n} (free group of rank {scene.data.genus}: {expected})")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK if n == expected else EXIT_FAIL


def _random_reciprocity(args, out) -> int:
    if args.seed is None:
        raise InputError("reciprocity without --scene draws random data: --seed INT is required")
    p, prec = args.p, _precision(args, 32)
    branch = IWASAWA if args.log_branch is None else _parse_branch(args.log_branch, p)
    rng = random.Random(args.seed)
    ends = random_domain(rng, p, args.discs)
    module = random_pairing_module(rng, args.dim)
    discs = [e.inner_disc() for e in ends]
    lines = [f"== random domain (seed {args.seed}): P^1 minus {args.discs} discs, p = {p}, precision = {prec}",
             f"  pairing = {_mat(module.pairing)}"]
    for k, e in enumerate(ends):
        lines.append(f"  end {k + 1}: {e}")
    worst = None
    for j in range(args.pairs):
        om = random_form(rng, discs, module)
        et = random_form(rng, discs, module)
        F = coleman_primitive(om, p, prec, branch)
        G = coleman_primitive(et, p, prec, branch)
        r = reciprocity_check(ends, F, G, args.window or 64)
        lines.append(f"== pair {j + 1}")
        lines.append(f"  omega = {om}")
        lines.append(f"  eta   = {et}")
        for k, t in enumerate(r.terms):
            lines.append(f"  ind_end{k + 1} = {t}")
        lines.append(f"  sum = {r.total}  (vanishes to {_digits(r.digits)} digits)")
        worst = r.digits if worst is None else min(worst, r.digits)
    return _reciprocity_verdict(lines, worst, prec, args.loss, out)


def _scene_reciprocity(args, out) -> int:
    scene = _scene(args)
    parts = [scene_summary(scene)]
    _require_valid(scene, parts, out)
    om_name, et_name = _cup_names(args, scene)
    problem = scene.problem(om_name, et_name, args.depth)
    problem.check_assumptions()
    om, et = problem.omega, problem.eta
    F, G = problem.primitive("omega"), problem.primitive("eta")
    # U = F minus small discs around the poles in F
    sing = F.singularities() + G.singularities() + om.pole_points() + et.pole_points()
    pts = problem.poles()
    ends = scene.data.annuli() + [point_annulus(x, sing, scene.p) for x in pts]
    r = reciprocity_check(ends, F, G, scene.window)
    lines = parts + [f"== reciprocity on F minus discs around {len(pts)} poles, forms {om_name}, {et_name}"]
    names = [f"{n}{i + 1}" for i in range(scene.data.genus) for n in ("b", "c")]
    names += [f"x={'inf' if x is None else x}" for x in pts]
    for n, t in zip(names, r.terms):
        lines.append(f"  ind_{n} = {t}")
    lines.append(f"  sum = {r.total}  (vanishes to {_digits(r.digits)} digits)")
    return _reciprocity_verdict(lines, r.digits, scene.precision, args.loss, out)


def _reciprocity_verdict(lines, worst, prec, loss, out) -> int:
    need = max(prec - loss, 0)
    ok = worst is None or worst >= need
    lines.append("== verdict")
    lines.append(f"  {'VANISHES' if ok else 'DOES NOT VANISH'}: worst {_digits(worst)} digits, "
                 f"required {need} (precision {prec} - allowed loss {loss})")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def _digits(x) -> str:
    if x is None:
        return "-"
    return "all" if x == float("inf") else str(int(x))


def cmd_reciprocity(args, out) -> int:
    return _scene_reciprocity(args, out) if args.scene else _random_reciprocity(args, out)


# -- entry point ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scene", metavar="PATH", help="scene file (TOML)")
    common.add_argument("--seed", type=int, help="seed for randomized commands")
    common.add_argument("--precision", type=int, metavar="N",
                        help=f"p-adic precision (overrides the scene and ${PRECISION_ENV})")
    common.add_argument("--log-branch", metavar="LAMBDA", help="value of log(p): rational or p-adic digits")
    common.add_argument("--depth", type=int, metavar="L", help="averaging depth (overrides every form)")
    common.add_argument("--window", type=int, help="Laurent window half-width (default: scene, else 64)")

    ap = argparse.ArgumentParser(prog="mumford-cup", description="Residue and period sides of the cup product "
                                 "on Mumford curves, computed independently.")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check the fundamental-domain axioms")

    cup = sub.add_parser("cup", parents=[common], help="compute the cup product")
    cup.add_argument("--omega", help="form name (default: the scene's [task] cup pair)")
    cup.add_argument("--eta", help="form name")
    side = cup.add_mutually_exclusive_group()
    side.add_argument("--both-sides", action="store_true", help="compare both sides (default)")
    side.add_argument("--lhs", action="store_true", help="residue side only")
    side.add_argument("--rhs", action="store_true", help="period side only")
    cup.add_argument("--proof-chain", action="store_true", help="evaluate every intermediate identity")

    rec = sub.add_parser("reciprocity", parents=[common], help="sum of indices over the ends of a domain")
    rec.add_argument("--omega")
    rec.add_argument("--eta")
    rec.add_argument("--p", type=int, default=5, help="prime for random domains")
    rec.add_argument("--discs", type=int, default=4, help="number of discs in a random domain")
    rec.add_argument("--dim", type=int, default=1, choices=(1, 2), help="dim V for random forms")
    rec.add_argument("--pairs", type=int, default=1, help="random form pairs")
    rec.add_argument("--loss", type=int, default=6, help="allowed digits of precision loss")

    sub.add_parser("words", parents=[common], help="list reduced words with matrices and rho")
    sub.add_parser("report", parents=[common], help="scene, validation, both sides and the proof chain")
    return ap


COMMANDS = {"validate": cmd_validate, "cup": cmd_cup, "reciprocity": cmd_reciprocity,
            "words": cmd_words, "report": cmd_report}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.precision is not None and args.precision < 2:
            raise InputError("--precision must be >= 2")
        if args.depth is not None and args.depth < 0:
            raise InputError("--depth must be >= 0")
        if args.window is not None and args.window < 4:
            raise InputError("--window must be >= 4")
        return COMMANDS[args.command](args, out)
    except PrecisionError as exc:
        err.write(f"precision exhausted: {exc}\n")
        return EXIT_PRECISION
    except (InputError, SceneError, GeometryError, AssumptionError, ValueError, ZeroDivisionError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
