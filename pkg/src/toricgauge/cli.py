"""Command-line front end: read a problem file, print a JSON report.

Exit codes: 0 success, 2 unreadable input or bad flags, 3 domain error
(polarization on a wall, infinite inertia, enumeration budget, ...).
"""

from __future__ import annotations

import argparse
import hashlib
import importlib.resources
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__, gitq, inertia, mundet, quasimap, ratlin, treecomb
from .errors import ToricGaugeError

SCHEMA = "toricgauge.report/1"


def report_schema() -> dict:
    """JSON Schema describing every report this tool prints."""
    text = importlib.resources.files(__package__).joinpath("report_schema.json").read_text("utf-8")
    return json.loads(text)


class ProblemError(ValueError):
    """The problem file does not describe a valid weight system."""


# ------------------------------------------------------------------ parsing


def _rational(x, what):
    try:
        return ratlin.to_fraction(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ProblemError(f"{what}: {exc}") from None


def _rvec(values, what):
    if isinstance(values, (int, str)):
        values = str(values).split(",") if isinstance(values, str) else [values]
    if not isinstance(values, list):
        raise ProblemError(f"{what} must be a list")
    return tuple(_rational(v, what) for v in values)


def parse_problem(text: str) -> dict:
    """Parse problem TOML into a dict holding a ``WeightSystem`` under ``ws``."""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ProblemError(f"not valid TOML: {exc}") from None
    if "rank" not in raw or "weights" not in raw or "nu" not in raw:
        raise ProblemError("problem needs 'rank', 'weights' and 'nu'")
    rank = raw["rank"]
    if not isinstance(rank, int) or rank < 1:
        raise ProblemError("rank must be a positive integer")
    vectors, mults, labels = [], [], []
    for j, w in enumerate(raw["weights"]):
        if isinstance(w, dict):
            vec, mult, label = w.get("vector"), w.get("multiplicity", 1), w.get("label")
        else:
            vec, mult, label = w, 1, None
        if isinstance(vec, int):
            vec = [vec]
        if not isinstance(vec, list) or not all(isinstance(x, int) for x in vec):
            raise ProblemError(f"weight {j + 1} must be a list of integers")
        if not isinstance(mult, int):
            raise ProblemError(f"weight {j + 1} multiplicity must be an integer")
        vectors.append(tuple(vec))
        mults.append(mult)
        labels.append(label)
    nu = _rvec(raw["nu"], "nu")
    try:
        ws = gitq.WeightSystem(
            rank, vectors, mults, nu,
            tuple(labels) if all(lab is not None for lab in labels) else None,
        )
    except ValueError as exc:
        raise ProblemError(str(exc)) from None
    out = {"ws": ws}
    if "degree" in raw:
        out["degree"] = _rvec(raw["degree"], "degree")
    for key in ("rho", "area", "sweep"):
        if key in raw:
            out[key] = _rational(raw[key], key)
    return out


# ---------------------------------------------------------------- emission


def q(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def qv(v) -> list:
    return [q(x) for x in v]


def one_based(supp) -> list:
    return [i + 1 for i in supp]


def quotient_json(rep: gitq.QuotientReport) -> dict:
    return {
        "nonempty": rep.nonempty,
        "dimension": rep.dimension,
        "proper": rep.proper,
        "stable_eq_ss": rep.stable_eq_ss,
        "fixed_points": [
            {"support": one_based(fp.support), "isotropy": fp.isotropy} for fp in rep.fixed_points
        ],
        "weighted_projective": list(rep.weighted_projective) if rep.weighted_projective else None,
    }


def ws_json(ws: gitq.WeightSystem) -> dict:
    return {
        "rank": ws.rank,
        "weights": [
            {"vector": list(w), "multiplicity": m} for w, m in zip(ws.weights, ws.multiplicities)
        ],
        "nu": qv(ws.nu),
    }


def affine_json(a: quasimap.AffineReport) -> dict:
    return {
        "degree": qv(a.degree),
        "valid": a.valid,
        "dimension": a.dimension,
        "monomial_counts": list(a.monomial_counts),
        "leading_support": one_based(a.leading_support),
        "stabilizer_order": a.stabilizer_order,
        "sector": {"element": qv(a.sector.representative), "order": a.sector.order},
    }


def tree_json(t: treecomb.ColoredTree) -> dict:
    return {
        "vertices": [
            {
                "scaling": t.scaling[v].value,
                "degree": qv(t.degree[v]),
                "markings": sorted(t.markings[v]),
                "parent": t.parent[v],
                "twist": t.twist[v],
            }
            for v in range(t.nvertices)
        ],
        "codimension": treecomb.codimension(t),
    }


# ---------------------------------------------------------------- commands


def _need_degree(args, prob):
    d = args.degree if args.degree is not None else prob.get("degree")
    if d is None:
        raise ProblemError("a degree is required (--degree or 'degree' in the file)")
    d = _rvec(d, "degree") if isinstance(d, str) else d
    if len(d) != prob["ws"].rank:
        raise ProblemError(f"degree must have {prob['ws'].rank} entries")
    return d


def cmd_quotient(args, prob):
    ws = prob["ws"]
    out = quotient_json(gitq.quotient_report(ws, args.jobs))
    out["max_unstable_supports"] = [one_based(s) for s in gitq.max_unstable_supports(ws)]
    return out


def cmd_chambers(args, prob):
    ws = prob["ws"]
    sig = gitq.chamber_signature(ws, args.jobs)
    out = {"signature": [one_based(s) for s in sig]}
    if args.compare is not None:
        other = _rvec(args.compare, "compare")
        sig2 = gitq.chamber_signature(ws.with_nu(other), args.jobs)
        out["compare"] = {"nu": qv(other), "same_chamber": sig2 == sig}
    return out


def cmd_inertia(args, prob):
    sectors = inertia.inertia_sectors(prob["ws"])
    return {
        "sectors": [
            {
                "element": qv(s.element.representative),
                "order": s.element_order,
                "support": one_based(s.support),
                "dimension": s.dimension,
                "divisor_count": s.divisor_count,
            }
            for s in sectors
        ]
    }


def cmd_quasimap(args, prob):
    d = _need_degree(args, prob)
    xd = quasimap.quasimap_problem(prob["ws"], d)
    return {
        "degree": qv(d),
        "problem": ws_json(xd),
        "report": quotient_json(gitq.quotient_report(xd, args.jobs)),
    }


def cmd_affine(args, prob):
    ws = prob["ws"]
    sweep = args.sweep if args.sweep is not None else None
    if sweep is None and args.degree is None and "sweep" in prob and "degree" not in prob:
        sweep = prob["sweep"]
    if sweep is not None:
        bound = _rational(sweep, "sweep")
        rows = [quasimap.affine_report(ws, d) for d in quasimap.effective_affine_degrees(ws, bound)]
        return {"sweep": q(bound), "rows": [affine_json(a) for a in rows]}
    return {"rows": [affine_json(quasimap.affine_report(ws, _need_degree(args, prob)))]}


def cmd_mundet(args, prob):
    ws = prob["ws"]
    d = _need_degree(args, prob)
    rho = _rational(args.rho, "rho") if args.rho is not None else prob.get("rho")
    area = _rational(args.area, "area") if args.area is not None else prob.get("area", Fraction(1))
    out = {"degree": qv(d), "area": q(area)}
    if rho is not None:
        try:
            mp = mundet.MundetProblem(ws, d, rho, area)
        except ValueError as exc:
            raise ProblemError(str(exc)) from None
        rows = []
        for supp in gitq.all_supports(ws.k):
            cert = mundet.destab_certificate(ws, supp)
            rows.append({
                "support": one_based(supp),
                "git_semistable": cert is None,
                "gauged_semistable": mundet.is_gauged_semistable(mp, supp),
                "destabilizer": list(cert) if cert is not None else None,
            })
        out["rho"] = q(rho)
        out["supports"] = rows
    if args.threshold or rho is None:
        out["rho_threshold"] = q(mundet.rho_threshold(ws, d, area))
    return out


def cmd_strata(args, prob):
    eff = [(Fraction(0),)]
    total = None
    if prob is not None:
        ws = prob["ws"]
        bound = prob.get("sweep")
        if args.bound is not None:
            bound = _rational(args.bound, "bound")
        if bound is not None:
            eff = quasimap.effective_affine_degrees(ws, bound)
        total = (_rvec(args.total, "total") if args.total is not None else None)
    elif args.total is not None:
        total = _rvec(args.total, "total")
        eff = [tuple(Fraction(0) for _ in total)]
    if args.splittings:
        sp = treecomb.infinite_splittings(args.n, total, eff)
        return {
            "n": args.n,
            "count": len(sp),
            "splittings": [
                {
                    "r": s.r,
                    "parts": [list(p) for p in s.parts],
                    "d0": qv(s.degree_split[0]),
                    "degrees": [qv(x) for x in s.degree_split[1]],
                }
                for s in sp
            ],
        }
    types = treecomb.enumerate_types(args.n, eff, total)
    return {"n": args.n, "count": len(types), "types": [tree_json(t) for t in types]}


COMMANDS = {
    "quotient": cmd_quotient,
    "chambers": cmd_chambers,
    "inertia": cmd_inertia,
    "quasimap": cmd_quasimap,
    "affine": cmd_affine,
    "mundet": cmd_mundet,
    "strata": cmd_strata,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toricgauge", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--jobs", type=int, default=int(os.environ.get("TORICGAUGE_JOBS", 1)),
                   help="worker threads for support enumeration (output is unaffected)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_, file_required=True):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("problem", nargs=None if file_required else "?", help="problem file (TOML)")
        return sp

    add("quotient", "quotient report, maximal unstable supports, properness")
    sp = add("chambers", "chamber signature of nu")
    sp.add_argument("--compare", metavar="NU", help="second polarization, e.g. 2,1")
    add("inertia", "twisted sectors of the inertia stack")
    sp = add("quasimap", "quasimap space X(d) and its quotient")
    sp.add_argument("--degree", metavar="D")
    sp = add("affine", "affine gauged map invariants")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--degree", metavar="D")
    g.add_argument("--sweep", metavar="BOUND")
    sp = add("mundet", "abelian Mundet stability")
    sp.add_argument("--degree", metavar="D")
    sp.add_argument("--rho")
    sp.add_argument("--area")
    sp.add_argument("--threshold", action="store_true")
    sp = add("strata", "colored-tree strata of scaled affine curves", file_required=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--splittings", action="store_true")
    sp.add_argument("--total", metavar="D")
    sp.add_argument("--bound", metavar="B", help="effective degrees from an affine sweep up to B")
    return p


def run(argv=None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    args = build_parser().parse_args(argv)
    prob = None
    digest = None
    if args.problem is not None:
        try:
            data = Path(args.problem).read_bytes()
            digest = hashlib.sha256(data).hexdigest()
            prob = parse_problem(data.decode("utf-8"))
        except (OSError, UnicodeDecodeError, ProblemError) as exc:
            print(f"toricgauge: cannot read problem: {exc}", file=sys.stderr)
            return 2
    echo = {k: v for k, v in sorted(vars(args).items()) if k not in ("jobs", "problem") and v is not None}
    try:
        result = COMMANDS[args.command](args, prob)
    except ProblemError as exc:
        print(f"toricgauge: {exc}", file=sys.stderr)
        return 2
    except ToricGaugeError as exc:
        print(f"toricgauge: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    report = {
        "schema": SCHEMA,
        "version": __version__,
        "command": echo,
        "input_sha256": digest,
        "result": result,
    }
    stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 0


def main():
    sys.exit(run())
