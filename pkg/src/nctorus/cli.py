"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .specfun import BUILDERS, build, evalf, evaluate, taylor, to_latex


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    precision: float = 1e-15
    fmt: str = "latex"
    suite: str | None = None


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _num(x: float) -> str:
    return f"{x:.16g}"


def _emit(obj, fmt: str, latex_lines: list[str], out) -> None:
    if fmt == "json":
        json.dump(obj, out, indent=2, sort_keys=True)
        out.write("\n")
    else:
        for line in latex_lines:
            out.write(f"\\[ {line} \\]\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_curvature(args, out) -> int:
    from .geometry import derive_curvature

    cur = derive_curvature()
    pre = "2\\pi^{2}\\," if args.normalize == "2pi2" else ""
    if args.form == "raw":
        obj = {"form": "raw", "prefactor": args.normalize or "1", "expression": cur.raw.to_json()}
        lines = [f"R = {pre}{cur.raw.latex()}"]
    else:
        obj = {
            "form": "modular",
            "prefactor": args.normalize or "1",
            "expression": cur.modular.to_json(),
            "k": to_latex(cur.k),
            "H": to_latex(cur.H),
            "pi2": bool(cur.pi2),
            "constant": cur.constant_note,
        }
        pi = "\\pi^{2}" if cur.pi2 else ""
        lines = [
            f"R = {pre}{pi} e^{{-h}}\\Big(k(\\nabla)\\big(\\textstyle\\sum_i \\delta_i^2(h)\\big)"
            f" + H(\\nabla,\\nabla)\\big(\\textstyle\\sum_i \\delta_i(h)^2\\big)\\Big)",
            f"k(s) = {to_latex(cur.k)}",
            f"H(s,t) = {to_latex(cur.H)}",
        ]
    _emit(obj, args.format, lines, out)
    return 0


def cmd_projection(args, out) -> int:
    from .geometry import BASIS, derive_projection_curvature

    pc = derive_projection_curvature()
    derived = [float(evaluate(c, args.s)) for c in pc.f]
    stated = [float(evaluate(build(f"f{i}"), args.s)) for i in range(1, 5)]
    obj = {
        "s": args.s,
        "basis": list(BASIS),
        "coefficients": derived,
        "statement_scale": [v / float(pc.normalization) for v in derived],
        "printed_f": stated,
        "normalization": _frac(pc.normalization),
        "printed_matches": list(pc.matches),
        "note": pc.note,
    }
    lines = [
        "R|_{h=sp} \\propto e^{-sp}\\big("
        + " + ".join(f"{_num(v)}\\,{b}" for v, b in zip(derived, ("X", "Xp", "pX", "pXp")))
        + "\\big),\\quad X = \\textstyle\\sum_i \\delta_i^2(p)",
        f"\\text{{derived}} = {_frac(pc.normalization)} \\times f_i^{{\\text{{printed}}}} "
        f"\\text{{ for }} i \\in \\{{{', '.join(str(i + 1) for i, m in enumerate(pc.matches) if m)}\\}}",
    ]
    _emit(obj, args.format, lines, out)
    return 0


def cmd_gradient(args, out) -> int:
    from .geometry import derive_gradient

    g = derive_gradient(args.omega2)
    w2 = g.omega2 if args.omega2 == "stated" else g.omega2_corrected
    t1, t2 = taylor(g.omega1, 5), taylor(w2, 3)
    obj = {
        "omega2_variant": args.omega2,
        "omega1": to_latex(g.omega1),
        "omega2": to_latex(w2),
        "omega1_taylor": [_frac(c) for c in t1.as_list()],
        "omega2_taylor": {f"{i},{j}": _frac(c) for (i, j), c in sorted(t2.coeffs.items())},
        "modular_form": g.modular_form.to_json(),
        "note": g.note,
    }
    lines = [
        "\\mathrm{Grad}_h\\Omega = \\textstyle\\sum_i e^{-h}\\big(\\omega_1(\\nabla)(\\delta_i^2(h))"
        " + \\omega_2(\\nabla,\\nabla)(\\delta_i(h)^2)\\big)",
        f"\\omega_1(s) = {to_latex(g.omega1)}",
        f"\\omega_2(s,t) = {to_latex(w2)}",
    ]
    _emit(obj, args.format, lines, out)
    return 0


def _grid(lo: float, hi: float, step: float) -> np.ndarray:
    if step <= 0 or hi < lo:
        raise ValueError("need step > 0 and max >= min")
    n = int(round((hi - lo) / step)) + 1
    return lo + step * np.arange(n)


def cmd_functions(args, out, parser) -> int:
    if args.name not in BUILDERS:
        parser.error(f"unknown function {args.name!r}; known: {', '.join(sorted(BUILDERS))}")
    f = build(args.name)
    nvars = max(f.nvars, 1)
    if args.action == "eval":
        value = float(evalf(f, args.s, args.t, precision=args.precision))
        out.write(_num(value) + "\n")
    elif args.action == "taylor":
        tp = taylor(f, args.order)
        if nvars == 1:
            out.write("[" + ", ".join(_frac(c) for c in tp.as_list()) + "]\n")
        else:
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["i", "j", "coeff"])
            for (i, j), c in sorted(tp.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0])):
                w.writerow([i, j, _frac(c)])
    else:
        try:
            grid = _grid(args.min, args.max, args.step)
        except ValueError as exc:
            parser.error(str(exc))
        w = csv.writer(out, lineterminator="\n")
        if nvars == 1:
            w.writerow(["s", "value"])
            for sv, v in zip(grid, evaluate(f, grid)):
                w.writerow([_num(sv), _num(v)])
        else:
            S, T = np.meshgrid(grid, grid, indexing="ij")
            V = evaluate(f, S, T)
            w.writerow(["s", "t", "value"])
            for sv, tv, v in zip(S.ravel(), T.ravel(), V.ravel()):
                w.writerow([_num(sv), _num(tv), _num(v)])
    return 0


def _parse_dims(text: str) -> tuple:
    for sep in ("..", "-", ":"):
        if sep in text:
            lo, hi = text.split(sep, 1)
            return int(lo), int(hi)
    d = int(text)
    return d, d


def cmd_verify(args, out, parser) -> int:
    from .oracle import run_suite

    try:
        dims = _parse_dims(args.dims)
        report = run_suite(args.suite, trials=args.trials, dims=dims, seed=args.seed, variant=args.omega2)
    except ValueError as exc:
        parser.error(str(exc))
    json.dump(report, out, indent=2, sort_keys=True)
    out.write("\n")
    return 0 if report["verdict"] == "pass" else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nctorus", description="Curvature of the conformally perturbed 4-torus.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("curvature", help="derive the curvature formula")
    c.add_argument("--form", choices=("raw", "modular"), default="modular")
    c.add_argument("--normalize", choices=("2pi2",), default=None)
    c.add_argument("--format", choices=("latex", "json"), default="latex")

    pr = sub.add_parser("projection", help="curvature for h = s p")
    pr.add_argument("--s", type=float, required=True)
    pr.add_argument("--format", choices=("latex", "json"), default="json")

    g = sub.add_parser("gradient", help="gradient of the action")
    g.add_argument("--omega2", choices=("stated", "corrected"), default="stated")
    g.add_argument("--format", choices=("latex", "json"), default="latex")

    f = sub.add_parser("functions", help="evaluate or expand a named function")
    f.add_argument("name")
    fs = f.add_subparsers(dest="action", required=True)
    e = fs.add_parser("eval")
    e.add_argument("--s", type=float, required=True)
    e.add_argument("--t", type=float, default=0.0)
    e.add_argument("--precision", type=float, default=1e-15)
    t = fs.add_parser("taylor")
    t.add_argument("--order", type=int, required=True)
    pd = fs.add_parser("plot-data")
    pd.add_argument("--min", type=float, required=True)
    pd.add_argument("--max", type=float, required=True)
    pd.add_argument("--step", type=float, required=True)

    v = sub.add_parser("verify", help="run an oracle verification suite")
    v.add_argument("--suite", required=True, choices=("identities", "curvature", "projection", "gradient", "positivity"))
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--dims", default="2..8", help="D or LO..HI")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--omega2", choices=("stated", "corrected"), default="stated")
    return p


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "curvature":
        return cmd_curvature(args, out)
    if args.command == "projection":
        return cmd_projection(args, out)
    if args.command == "gradient":
        return cmd_gradient(args, out)
    if args.command == "functions":
        try:
            return cmd_functions(args, out, parser)
        except SystemExit as exc:
            return int(exc.code or 0)
    try:
        return cmd_verify(args, out, parser)
    except SystemExit as exc:
        return int(exc.code or 0)
