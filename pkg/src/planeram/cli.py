"""Command-line interface: one subcommand per analysis, JSON reports.

Exit codes: 0 success, 1 usage or input errors, 2 a mathematical
assertion failed (a theorem check tripped, which means a bug).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from . import certify, ffsearch, pointconf, ramify
from .errors import BudgetExceeded, TheoremViolation
from .polycore import Poly, parse_form
from .projmap import (CommonZero, DegreeMismatch, ProjectivePoint, map_from_json,
                      validate)

__all__ = ["main", "build_parser", "run", "replay", "UsageError"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# serialization

def jsonable(obj):
    """Numbers become decimal strings; points and polynomials their text form."""
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, (int, Fraction)):
        return str(obj)
    if isinstance(obj, float):
        return repr(obj)
    if isinstance(obj, (ProjectivePoint, Poly)):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [jsonable(v) for v in obj]
        return sorted(items, key=json.dumps) if isinstance(obj, (set, frozenset)) else items
    if hasattr(obj, "to_json"):
        return jsonable(obj.to_json())
    if hasattr(obj, "value") and hasattr(obj, "name"):  # enums
        return obj.value
    try:
        import numpy as np
        if isinstance(obj, np.integer):
            return str(int(obj))
    except ImportError:  # pragma: no cover
        pass
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(jsonable(report), sort_keys=True, indent=2) + "\n"


def _read_json(text: str):
    """Inline JSON or a path to a JSON file."""
    text = text.strip()
    if text.startswith(("{", "[")):
        return json.loads(text)
    path = Path(text)
    if not path.exists():
        raise UsageError(f"no such file: {text}")
    return json.loads(path.read_text())


def _inline(value) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":"))


def _points(specs: Sequence[str] | None) -> list[ProjectivePoint]:
    out = []
    for s in specs or ():
        try:
            out.append(ProjectivePoint.parse(s))
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad point {s!r}: {exc}")
    return out


def _points_arg(args) -> list[ProjectivePoint]:
    pts = _points(args.points)
    if getattr(args, "points_file", None):
        pts += list(pointconf.PointConfiguration.from_json(_read_json(args.points_file)).points)
    return pts


# ---------------------------------------------------------------------------
# subcommands; each returns (results, canonical inputs)

def _map_arg(args):
    if args.forms:
        desc = dict(zip(("f0", "f1", "f2"), args.forms))
    elif args.map:
        desc = _read_json(args.map)
    else:
        raise UsageError("give --map or --forms")
    desc = {k: str(desc[k]) for k in ("f0", "f1", "f2")}
    return map_from_json(desc), desc


def _cmd_validate(args):
    desc = dict(zip(("f0", "f1", "f2"), args.forms)) if args.forms else _read_json(args.map)
    desc = {k: str(desc[k]) for k in ("f0", "f1", "f2")}
    try:
        f = validate([desc["f0"], desc["f1"], desc["f2"]])
    except CommonZero as exc:
        return {"valid": False, "reason": "common zero", "point": exc.point,
                "witness": exc.witness}, {"map": _inline(desc)}
    except DegreeMismatch as exc:
        return {"valid": False, "reason": str(exc)}, {"map": _inline(desc)}
    return {"valid": True, "m": f.m, "degree_one": f.degree_one,
            "topological_degree": f.topological_degree}, {"map": _inline(desc)}


def _cmd_ramification(args):
    f, desc = _map_arg(args)
    R = ramify.ramification_divisor(f)
    out = {"components": [{"form": F, "multiplicity": k} for F, k in R.components],
           "total_degree": R.total_degree}
    if args.pushforward:
        B = ramify.pushforward_divisor(f, R)
        out["pushforward"] = {"components": [{"form": F, "multiplicity": k}
                                             for F, k in B.components],
                              "total_degree": B.total_degree}
    inputs = {"map": _inline(desc)}
    if args.pushforward:
        inputs["pushforward"] = True
    return out, inputs


def _fiber_json(rep: ramify.FiberReport) -> dict:
    return {"target": rep.target,
            "rational_points": [{"point": p, "local_degree": d} for p, d in rep.rational_points],
            "irrational_mass": rep.irrational_mass,
            "status": rep.status.value,
            "completely_ramified": rep.completely_ramified,
            "certificate": rep.certificate}


def _one_point(args) -> ProjectivePoint:
    pts = _points([args.point])
    return pts[0]


def _cmd_fiber(args):
    f, desc = _map_arg(args)
    P = _one_point(args)
    return _fiber_json(ramify.fiber(f, P)), {"map": _inline(desc), "point": str(P)}


def _cmd_crpoints(args):
    f, desc = _map_arg(args)
    primes = [int(p) for p in args.primes] if args.primes else None
    rep = ffsearch.completely_ramified_points(f, primes, args.height, args.budget)
    inputs = {"map": _inline(desc), "height": str(args.height), "budget": str(args.budget)}
    if primes:
        inputs["primes"] = [str(p) for p in primes]
    return rep.to_json(), inputs


def _cmd_pushmult(args):
    f, desc = _map_arg(args)
    P = _one_point(args)
    res = ramify.pushforward_multiplicity(f, None, P, seed=args.seed)
    return ({"point": P, "value": res.value, "method": res.method,
             "contributions": [{"point": x, "value": v} for x, v in res.contributions],
             "trials": list(res.trials)},
            {"map": _inline(desc), "point": str(P)})


def _cmd_prop1(args):
    f, desc = _map_arg(args)
    P = _one_point(args)
    c = ramify.check_prop1(f, P, seed=args.seed)
    return ({"point": P, "lhs": c.lhs, "rhs": c.rhs, "slack": c.slack, "holds": c.holds,
             "partial": c.partial,
             "terms": [{"point": x, "local_degree": d, "intersection": i} for x, d, i in c.terms]},
            {"map": _inline(desc), "point": str(P)})


def _cmd_prop2_audit(args):
    f, desc = _map_arg(args)
    D = parse_form(args.curve)
    pts = _points_arg(args)
    a = ramify.prop2_audit(f, D, pts)
    return ({"degree": a.degree, "count": a.count, "bound": a.bound, "holds": a.holds,
             "points": [{"point": p, "smooth": sm, "completely_ramified": cr}
                        for p, sm, cr in a.points],
             "witnesses": list(a.witnesses)},
            {"map": _inline(desc), "curve": str(D), "points": [str(p) for p in pts]})


def _mult_conditions(specs):
    out = []
    for s in specs or ():
        pt, _, r = s.rpartition("@")
        if not pt:
            raise UsageError(f"multiplicity condition {s!r} must look like '1:2:3@2'")
        out.append((_points([pt])[0], int(r)))
    return out


def _cmd_hilbert(args):
    pts = _points_arg(args)
    conds = _mult_conditions(args.mult)
    config = pointconf.PointConfiguration(tuple(pts))
    dim = pointconf.linear_system_dimension(config, args.degree, conds)
    out = {"dimension": dim, "degree": args.degree, "points": len(pts)}
    if dim == 0:
        out["curve"] = pointconf.curve_through(config, args.degree, conds)
    return out, {"points": [str(p) for p in pts], "degree": str(args.degree),
                 "mult": [f"{p}@{r}" for p, r in conds]}


def _cmd_config_check(args):
    pts = _points_arg(args)
    rep = pointconf.configuration_constraints(pointconf.PointConfiguration(tuple(pts)))
    return rep.to_json(), {"points": [str(p) for p in pts]}


def _cmd_ep_search(args):
    pts = _points_arg(args)
    config = pointconf.PointConfiguration(tuple(pts))
    w = pointconf.ellia_peskine_search(config, args.tau, args.s, args.budget)
    out = {"hypothesis": pointconf.ep_hypothesis(len(pts), args.tau, args.s),
           "witness": None if w is None else {
               "t": w.t, "required": w.required, "curve": w.curve,
               "subset": [pts[i] for i in w.subset]}}
    return out, {"points": [str(p) for p in pts], "tau": str(args.tau), "s": str(args.s),
                 "budget": str(args.budget)}


def _cmd_certify(args):
    data = _read_json(args.config)
    config = certify.MultiplicityConfig.from_json(data)
    rep = certify.prop5_certify(config, realizable=args.realizable)
    out = rep.to_json()
    out["b"] = config.b
    out["s"] = config.s
    inputs = {"config": _inline(config.to_json())}
    if args.realizable:
        inputs["realizable"] = True
    return out, inputs


def _cmd_bounds(args):
    out, inputs = {}, {}
    if args.theorem2:
        b, w = certify.theorem2_bound(args.N)
        out["theorem2"] = {"N": args.N, "max": b, "strict": 4 * args.N ** 2, "witness": w,
                           "sharper": certify.REMARK1_BOUNDS.get(args.N)}
        inputs["theorem2"] = True
    if args.prop4:
        out["prop4"] = {"N": args.N, "max": certify.prop4_bound(args.N),
                        "dimension_constant": certify.prop4_dimension_constant(args.N),
                        "fixed_part_max": certify.prop4_fixed_part_max(args.N)}
        inputs["prop4"] = True
    if args.hurwitz:
        m, d = args.hurwitz
        h = certify.hurwitz_contradiction(m, d)
        out["hurwitz"] = {"m": m, "d": d, "lhs": h.lhs, "rhs": h.rhs, "holds": h.holds}
        inputs["hurwitz"] = [str(m), str(d)]
    if args.genus:
        b, s = args.genus
        g = certify.genus_bound(b, s)
        out["genus"] = {"b": b, "s": s, "max": g.value, "coarse": g.coarse}
        inputs["genus"] = [str(b), str(s)]
    if args.prop2:
        m, d, c = args.prop2
        holds, concl = certify.prop2_inequality(m, d, c)
        out["prop2"] = {"m": m, "d": d, "c": c, "holds": holds, "conclusion": concl.value}
        inputs["prop2"] = [str(m), str(d), str(c)]
    if args.theorem1 is not None:
        m = args.theorem1
        out["theorem1"] = {"m": m, "cubic_multiplicity": certify.theorem1_cubic_multiplicity(m),
                           "ten_cubics_contradiction": certify.theorem1_ten_cubics(m)}
        inputs["theorem1"] = str(m)
    if args.c_bound:
        m, N, d = args.c_bound
        out["c_bound"] = {"m": m, "N": N, "d": d, "c_min": certify.c_lower_bound(m, N, d),
                          "mc_exceeds_N": certify.mc_exceeds_N(m, N, d)}
        inputs["c_bound"] = [str(m), str(N), str(d)]
    if args.remark2:
        rows = certify.remark2_sweep()
        out["remark2"] = {"rows": rows,
                          "fails": [r for r in rows if r["status"] == "fails"]}
        inputs["remark2"] = True
    if not out:
        raise UsageError("choose at least one bound")
    if args.theorem2 or args.prop4:
        inputs["N"] = str(args.N)
    return out, inputs


def _cmd_example2(args):
    return ({"m": args.m, "verified": ramify.verify_example2(args.m)}, {"m": str(args.m)})


def _cmd_search(args):
    if args.job:
        data = _read_json(args.job)
    else:
        data = {"family": args.family, "degrees": [str(d) for d in args.degrees or [2]],
                "box": [str(b) for b in args.box or [-1, 0, 1]]}
    # explicit flags override the job file
    if args.primes:
        data["primes"] = [str(p) for p in args.primes]
    if args.budget is not None:
        data["budget"] = str(args.budget)
    if args.height is not None:
        data["height"] = str(args.height)
    if args.seed_given or "seed" not in data:
        data["seed"] = str(args.seed)
    job = ffsearch.SearchJob.from_json(data)
    args.seed = job.seed
    inputs = {"job": _inline(job.to_json())}
    try:
        rep = ffsearch.run_search(job)
    except BudgetExceeded as exc:
        out = exc.partial.to_json() if exc.partial is not None else {}
        out["budget_exceeded"] = True
        return out, inputs
    return rep.to_json(), inputs


COMMANDS = {
    "validate": _cmd_validate,
    "ramification": _cmd_ramification,
    "fiber": _cmd_fiber,
    "crpoints": _cmd_crpoints,
    "pushmult": _cmd_pushmult,
    "prop1": _cmd_prop1,
    "prop2-audit": _cmd_prop2_audit,
    "hilbert": _cmd_hilbert,
    "config-check": _cmd_config_check,
    "ep-search": _cmd_ep_search,
    "certify": _cmd_certify,
    "bounds": _cmd_bounds,
    "example2": _cmd_example2,
    "search": _cmd_search,
}


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int)
    common.add_argument("--out")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--timings", action="store_true",
                        help="record wall-clock times (breaks byte stability)")

    mapped = _Parser(add_help=False)
    mapped.add_argument("--map", help="JSON map descriptor (file or inline)")
    mapped.add_argument("--forms", nargs=3, metavar=("F0", "F1", "F2"))

    pts = _Parser(add_help=False)
    pts.add_argument("--points", nargs="*", default=[])
    pts.add_argument("--points-file")

    parser = _Parser(prog="planeram", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("validate", parents=[common, mapped])
    p = sub.add_parser("ramification", parents=[common, mapped])
    p.add_argument("--pushforward", action="store_true")
    for name in ("fiber", "pushmult", "prop1"):
        p = sub.add_parser(name, parents=[common, mapped])
        p.add_argument("--point", required=True)
    p = sub.add_parser("crpoints", parents=[common, mapped])
    p.add_argument("--primes", nargs="+", type=int)
    p.add_argument("--height", type=int, default=4)
    p.add_argument("--budget", type=int, default=ffsearch.DEFAULT_POINT_BUDGET)
    p = sub.add_parser("prop2-audit", parents=[common, mapped, pts])
    p.add_argument("--curve", required=True)
    p = sub.add_parser("hilbert", parents=[common, pts])
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--mult", nargs="*", default=[], help="conditions like 1:2:3@2")
    sub.add_parser("config-check", parents=[common, pts])
    p = sub.add_parser("ep-search", parents=[common, pts])
    p.add_argument("--tau", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--budget", type=int, default=10 ** 6)
    p = sub.add_parser("certify", parents=[common])
    p.add_argument("--config", required=True)
    p.add_argument("--realizable", action="store_true")
    p = sub.add_parser("bounds", parents=[common])
    p.add_argument("--theorem2", action="store_true")
    p.add_argument("--prop4", action="store_true")
    p.add_argument("--N", type=int, default=3)
    p.add_argument("--hurwitz", nargs=2, type=int, metavar=("M", "D"))
    p.add_argument("--genus", nargs=2, type=int, metavar=("B", "S"))
    p.add_argument("--prop2", nargs=3, type=int, metavar=("M", "D", "C"))
    p.add_argument("--theorem1", type=int, metavar="M")
    p.add_argument("--c-bound", nargs=3, type=int, metavar=("M", "N", "D"))
    p.add_argument("--remark2", action="store_true")
    p = sub.add_parser("example2", parents=[common])
    p.add_argument("--m", type=int, required=True)
    p = sub.add_parser("search", parents=[common])
    p.add_argument("--job")
    p.add_argument("--family", default="perturbed", choices=("power", "perturbed", "composition"))
    p.add_argument("--degrees", nargs="+", type=int)
    p.add_argument("--box", nargs="+", type=int)
    p.add_argument("--primes", nargs="+", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--height", type=int)
    return parser


def _argv_from_inputs(command: str, inputs: dict, seed: int) -> list[str]:
    argv = [command, "--seed", str(seed)]
    for key, val in sorted(inputs.items()):
        flag = "--" + key.replace("_", "-")
        if val is True:
            argv.append(flag)
        elif isinstance(val, list):
            argv.append(flag)
            argv.extend(val)
        else:
            argv.extend([flag, val])
    return argv


def _execute(argv: Sequence[str]):
    try:
        args = build_parser().parse_args(list(argv))
        args.seed_given = args.seed is not None
        if not args.seed_given:
            args.seed = 0
        if args.seed < 0:
            raise UsageError("--seed must be non-negative")
        if args.jobs < 1:
            raise UsageError("--jobs must be positive")
        t0 = time.perf_counter()
        results, inputs = COMMANDS[args.command](args)
        elapsed = time.perf_counter() - t0
    except TheoremViolation as exc:
        return 2, {"command": argv[0] if argv else None, "error": str(exc),
                   "class": "theorem_violation"}, None
    except (UsageError, ValueError, KeyError, json.JSONDecodeError) as exc:
        return 1, {"command": argv[0] if argv else None, "error": str(exc),
                   "class": "usage"}, None
    report = {
        "command": args.command,
        "inputs": inputs,
        "argv": _argv_from_inputs(args.command, inputs, args.seed),
        "results": results,
        "timings": {"total_seconds": f"{elapsed:.3f}"} if args.timings else {},
        "seed": args.seed,
        "version": __version__,
    }
    return 0, report, args.out


def run(argv: Sequence[str]) -> tuple[int, dict]:
    """Parse and execute; returns (exit code, report)."""
    code, report, _ = _execute(argv)
    return code, report


def replay(report: dict) -> dict:
    """Re-run a report from its echoed inputs."""
    code, rep = run(report["argv"])
    if code:
        raise RuntimeError(f"replay failed with exit code {code}: {rep}")
    return json.loads(dumps(rep))


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        code, report, out = _execute(argv)
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0)
    text = dumps(report)
    if out:
        Path(out).write_text(text)
    else:
        (sys.stdout if code == 0 else sys.stderr).write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
