"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 domain error, 3 I/O error,
4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys

import numpy as np

from . import bounds, geodesy, surfaces, verify
from .errors import DomainError, MeshError
from .spaceform import PI2, normalized_invariants

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_IO, EXIT_VERIFY = 0, 1, 2, 3, 4

SWEEP_COLUMNS = ("k", "chi", "w", "lambda", "alpha", "theorem_bound", "root_bound",
                 "quartic_bound", "bishop_at_D", "best", "best_name")

_K_TOKENS = {"pi2": PI2, "-pi2": -PI2, "pi2/4": PI2 / 4}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_k(text: str) -> float:
    """Float, or one of the tokens pi2, -pi2, pi2/4 for exact boundary values."""
    token = text.strip().lower()
    if token in _K_TOKENS:
        return _K_TOKENS[token]
    try:
        return float(token)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number or pi2 token: {text!r}") from None


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, str):
        return x
    return f"{float(x):.17g}"


def seed_from_env() -> int:
    raw = os.environ.get("ISODIA_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"ISODIA_SEED must be an integer, got {raw!r}") from None


# -- bound ------------------------------------------------------------------

def render_report(rep: bounds.BoundReport) -> str:
    inv = normalized_invariants(rep.chi, rep.k)
    out = [
        f"chi = {rep.chi}   k = {rep.k:.17g}" + (f"   rho = {rep.rho:.17g}" if rep.rho is not None else ""),
        f"w = {inv.w:.17g}   lambda = {inv.lambda_chi:.6e}   alpha = {inv.alpha_chi:.17g}",
        "",
        "upper bounds on V/D^2:",
    ]
    rows = [
        ("trivial_pi", rep.trivial_pi, "Bishop with kappa = 0" if rep.k >= 0
         else "not applicable: k < 0"),
        ("bishop_at_D", rep.bishop_at_D, "v_k(1)"),
        ("bishop_at_R", rep.bishop_at_R, "v_k(rho)" if rep.rho is not None else "needs --rho"),
        ("theorem", rep.theorem_bound,
         "lambda = 0 limit v_k(1) (rigidity case)" if rep.theorem_is_limit else
         "closed form, lambda > 0"),
        ("root", rep.root_bound, "crossing solved by bisection" if rep.root_bound is not None
         else "not applicable: lambda = 0"),
        ("quartic", rep.quartic_bound, "k < 0 refinement" if rep.k < 0 else "only for k < 0"),
        ("prop", rep.prop_bound, "radius estimate" if rep.rho is not None else "needs --rho"),
        ("corollary_radius", rep.corollary_radius_bound,
         "pi (1 - chi rho^4 / 6)" if rep.corollary_radius_bound is not None else
         "needs --rho and k >= 0"),
    ]
    for name, value, note in rows:
        shown = f"{value:.15f}" if value is not None else "-"
        out.append(f"  {name:<17} {shown:>20}   {note}")
    out.append("")
    out.append(f"best = {rep.best:.15f} ({rep.best_name})")
    out.extend(f"note: {n}" for n in rep.notes)
    return "\n".join(out)


def cmd_bound(args) -> int:
    rep = bounds.report(args.chi, args.k, args.rho)
    print(render_report(rep))
    return EXIT_OK


# -- sweep ------------------------------------------------------------------

def sweep_rows(chi: int, k_min: float, k_max: float, steps: int) -> list[dict]:
    if steps < 2:
        raise DomainError(f"steps must be >= 2, got {steps}", field="steps")
    if k_min > k_max:
        raise DomainError("k_min must not exceed k_max", field="k_min")
    rows = []
    for k in np.linspace(k_min, k_max, steps):
        k = float(k)
        inv = normalized_invariants(chi, k)
        rep = bounds.report(chi, k)
        rows.append({
            "k": k, "chi": int(chi), "w": inv.w, "lambda": inv.lambda_chi,
            "alpha": inv.alpha_chi, "theorem_bound": rep.theorem_bound,
            "root_bound": rep.root_bound, "quartic_bound": rep.quartic_bound,
            "bishop_at_D": rep.bishop_at_D, "best": rep.best, "best_name": rep.best_name,
        })
    return rows


def sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow([fmt(row[c]) for c in SWEEP_COLUMNS])
    return buf.getvalue()


def cmd_sweep(args) -> int:
    text = sweep_csv(sweep_rows(args.chi, args.k_min, args.k_max, args.steps))
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    return EXIT_OK


# -- verify -----------------------------------------------------------------

def cmd_verify(args) -> int:
    checks = verify.run(args.level, seed=seed_from_env())
    for check in checks:
        print(check.line())
    failed = [c.name for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    if failed:
        print("failed: " + "; ".join(failed), file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


# -- mesh -------------------------------------------------------------------

def _parse_sources(text: str):
    if text in ("all", "auto"):
        return text
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("sources must be all, auto or a count") from None


def cmd_mesh(args) -> int:
    if (args.model is None) == (args.input is None):
        raise UsageError("give either a model name or --in FILE")
    if args.input is not None:
        mesh = geodesy.read_off(args.input, steiner_level=args.steiner)
    else:
        model = surfaces.model_from_name(args.model, a=args.a, p=args.p, q=args.q)
        mesh = surfaces.sample_mesh(model, args.res)
        mesh.steiner_level = args.steiner
    if args.out is None and not args.report:
        raise UsageError("nothing to do: pass --out and/or --report")
    if args.out is not None:
        geodesy.write_off(mesh, args.out)
    if args.report:
        rep = geodesy.geodesy_report(mesh, sources=args.sources, seed=seed_from_env())
        text = rep.to_json() + "\n"
        if args.report_out:
            with open(args.report_out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="isodia", description="Isodiametric bounds for closed surfaces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bound", help="all bounds on V/D^2 for one (chi, k[, rho])")
    p.add_argument("--chi", type=int, required=True)
    p.add_argument("--k", type=parse_k, required=True, help="kappa * D^2; accepts pi2")
    p.add_argument("--rho", type=float, default=None, help="R/D in [1/2, 1]")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sweep", help="tabulate bounds over a k range as CSV")
    p.add_argument("--chi", type=int, required=True)
    p.add_argument("--k-min", type=parse_k, required=True)
    p.add_argument("--k-max", type=parse_k, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", default="-", help="CSV path, - for stdout")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="cross-check bounds on model surfaces")
    p.add_argument("--level", choices=sorted(verify.LEVELS), default="quick")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("mesh", help="triangulate a model or inspect an OFF mesh")
    p.add_argument("model", nargs="?", choices=sorted(surfaces.MODELS))
    p.add_argument("--in", dest="input", help="read an OFF mesh instead of a model")
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--res", type=int, default=4)
    p.add_argument("--steiner", type=int, default=1)
    p.add_argument("--sources", type=_parse_sources, default="auto")
    p.add_argument("--out", help="write the mesh as OFF")
    p.add_argument("--report", action="store_true", help="print a geodesy report as JSON")
    p.add_argument("--report-out", help="write the JSON report to a file instead of stdout")
    p.set_defaults(func=cmd_mesh)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"isodia: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, MeshError) as exc:
        print(f"isodia: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"isodia: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
