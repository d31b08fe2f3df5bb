"""Command-line front end.

Every command builds one JSON-able report; the human-readable output is
rendered from that same report. Exit codes: 0 checks passed or solve
converged, 1 violations or non-convergence, 2 input or config errors.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from ._backend import BACKEND
from .actions import (
    Action,
    Sampler,
    check_action_axioms,
    check_eta_properties,
    eta,
    image_contains,
    make_action,
)
from .errors import ImageError, InputError, InvariantError, PreconditionError, StrictRangeError
from .fixedpoint import (
    TOL_FIX,
    CaristiData,
    MultiMap,
    PointOracle,
    TableMap,
    banach_solve,
    caristi_fixed_point,
    check_gamma,
    check_psi,
    endpoint,
    estimate_contraction,
    fixed_points,
)
from .fixtures import get_fixture
from .spaces import (
    TOL_CMP,
    FiniteSpace,
    open_ball,
    openness_witness,
    separation_witness,
    uniformity_base_index,
    validate_plain_metric,
    validate_theta_metric,
)

COMMANDS = (
    "check-action",
    "eta",
    "validate-space",
    "ball",
    "separate",
    "uniformity-base",
    "banach",
    "caristi",
    "endpoint",
)


# -- serialization ---------------------------------------------------------------


def _encode(obj):
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return '"NaN"'
        if math.isinf(x):
            return '"Infinity"' if x > 0 else '"-Infinity"'
        return format(x, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, frozenset, set)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return "[" + ", ".join(_encode(v) for v in items) + "]"
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(report: dict) -> str:
    """JSON text with every float written to 17 significant digits."""
    return _encode(report) + "\n"


def render_human(report: dict) -> str:
    lines = [f"{report['command']}: {report['status']}"]

    def walk(prefix, value):
        if isinstance(value, dict):
            for k, v in value.items():
                walk(f"{prefix}.{k}" if prefix else k, v)
        elif isinstance(value, list) and value and isinstance(value[0], (dict, list)):
            lines.append(f"  {prefix}: {len(value)} entries")
        else:
            lines.append(f"  {prefix} = {_encode(value)}")

    walk("", report["result"])
    viol = report["violations"]
    lines.append(f"  violations: {len(viol)}")
    for v in viol[:10]:
        lines.append(f"    {_encode(v)}")
    if len(viol) > 10:
        lines.append(f"    ... {len(viol) - 10} more (see --json-out)")
    return "\n".join(lines) + "\n"


# -- loading ---------------------------------------------------------------------


def _read_json(path, what):
    p = Path(path)
    if not p.is_file():
        raise InputError(f"{what} file not found: {path}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} file {path} is not valid JSON: {exc}") from None


def _parse_number(text):
    try:
        return float(text)
    except ValueError:
        return text


def load_action(spec: str) -> Action:
    """``builtin:kind[:k=v,...]`` or a path to an action JSON file."""
    if spec.startswith("builtin:"):
        parts = spec.split(":", 2)
        kind = parts[1]
        params = {}
        if len(parts) == 3 and parts[2]:
            for item in parts[2].split(","):
                if "=" not in item:
                    raise InputError(f"bad action parameter {item!r}; expected name=value")
                k, v = item.split("=", 1)
                params[k.strip()] = _parse_number(v.strip())
        return make_action(kind, **params)
    return Action.from_json(_read_json(spec, "action"))


def load_space(spec: str) -> FiniteSpace:
    if spec.startswith("builtin:"):
        return get_fixture(spec.split(":", 1)[1]).build_space()
    return FiniteSpace.from_json(_read_json(spec, "space"), name=Path(spec).stem)


def _fixture_of(spec):
    return get_fixture(spec.split(":", 1)[1]) if spec and spec.startswith("builtin:") else None


def _load_map_obj(spec, sp, multi):
    fx = _fixture_of(spec)
    if fx is not None:
        obj = fx.multimap if multi else fx.map
        if obj is None:
            raise InputError(f"fixture {fx.name!r} has no {'multimap' if multi else 'map'}")
    else:
        raw = _read_json(spec, "map")
        if not isinstance(raw, dict) or not isinstance(raw.get("map"), dict):
            raise InputError('map JSON must look like {"map": {label: ...}}')
        obj = raw["map"]
    if multi:
        if not all(isinstance(v, list) for v in obj.values()):
            raise InputError("multimap images must be label lists")
        return MultiMap.from_labels(sp, obj)
    return TableMap.from_labels(sp, obj)


def _load_caristi(spec, sp, a):
    fx = _fixture_of(spec)
    if fx is not None:
        if fx.caristi is None:
            raise InputError(f"fixture {fx.name!r} has no Caristi data")
        return CaristiData.from_json(fx.caristi, sp, a), fx.caristi
    obj = _read_json(spec, "caristi")
    return CaristiData.from_json(obj, sp, a), obj


# -- commands ------------------------------------------------------------------


def _sampler(args):
    return Sampler(seed=args.seed, grid_points=args.grid, random_points=args.random, domain_cap=args.cap)


def _resolve_action(args, required=True):
    spec = args.action
    if spec is None and getattr(args, "space", None):
        fx = _fixture_of(args.space)
        if fx is not None:
            spec = "builtin:" + fx.action["kind"] + ":" + ",".join(f"{k}={v}" for k, v in fx.action["params"].items())
    if spec is None:
        if required:
            raise InputError("--action is required")
        return None, None
    return load_action(spec), spec


def _space_and_action(args):
    if not args.space:
        raise InputError("--space is required")
    sp = load_space(args.space)
    a, spec = _resolve_action(args)
    return sp, a, spec


def cmd_check_action(args):
    a, spec = _resolve_action(args)
    sp = _sampler(args)
    axioms = check_action_axioms(a, sp)
    inverse = check_eta_properties(a, sp)
    result = {
        "action": a.to_json(),
        "axioms": axioms.status,
        "inverse": inverse.status,
        "checked": {**axioms.checked, **inverse.checked},
        "regular": a.regular_flag,
        "strict_range": a.strict_range_flag,
    }
    viol = [v.to_dict() for v in axioms.violations + inverse.violations]
    ok = axioms.passed and inverse.passed
    return {"action": spec, "sampler": sp.to_dict()}, result, viol, ok


def cmd_eta(args):
    a, spec = _resolve_action(args)
    if args.r is None or args.s is None:
        raise InputError("eta needs --r and --s")
    cfg = {"action": spec, "r": args.r, "s": args.s, "mode": args.mode}
    try:
        t = eta(a, args.r, args.s, mode=args.mode)
    except (ImageError, StrictRangeError) as exc:
        return cfg, {"eta": None, "error": str(exc)}, [{"condition": type(exc).__name__, "message": str(exc)}], False
    return cfg, {"eta": t, "residual": abs(a(t, args.s) - args.r)}, [], True


def cmd_validate_space(args):
    sp, a, spec = _space_and_action(args)
    rep = validate_theta_metric(sp, a, args.tol)
    result = {"space": args.space, "points": sp.labels, "theta_metric": rep.status, "families": len(rep.families())}
    viol = rep.to_dict(sp.labels)
    violations = viol["identity_violations"] + viol["symmetry_violations"] + viol["violations"]
    ok = rep.passed
    if args.plain:
        plain = validate_plain_metric(sp, args.tol)
        result["plain_metric"] = plain.status
        pd = plain.to_dict(sp.labels)
        result["plain_violations"] = pd["violations"]
    return {"space": args.space, "action": spec, "tol": args.tol, "plain": args.plain}, result, violations, ok


def cmd_ball(args):
    sp, a, spec = _space_and_action(args)
    if args.center is None or args.radius is None:
        raise InputError("ball needs --center and --radius")
    sp.index(args.center)
    member = image_contains(a, args.radius) if args.radius > 0 else None
    ball = open_ball(sp, args.center, args.radius)
    result = {"center": args.center, "radius": args.radius, "ball": sorted(ball), "radius_in_image": bool(member)}
    return {"space": args.space, "action": spec}, result, [], True


def cmd_separate(args):
    sp, a, spec = _space_and_action(args)
    cfg = {"space": args.space, "action": spec, "mode": args.mode}
    pairs = []
    if args.x is not None and args.y is not None:
        pairs = [(args.x, args.y)]
    else:
        pairs = [(x, y) for i, x in enumerate(sp.labels) for y in sp.labels[i + 1 :]]
    out, viol = [], []
    for x, y in pairs:
        try:
            w = separation_witness(sp, a, x, y, mode=args.mode)
        except (ImageError, StrictRangeError, InvariantError) as exc:
            viol.append({"x": x, "y": y, "error": str(exc)})
            continue
        out.append({"x": x, "y": y, "r": w.r, "s": w.s, "alpha": w.alpha, "ball_x": w.ball_x, "ball_y": w.ball_y})
    # openness witnesses for every center, radius at each distinct distance, and member
    opens = 0
    for c in sp.labels:
        radii = sorted({float(v) for v in sp.dist[sp.index(c)] if v > 0}) or [1.0]
        for r in radii:
            for y in sorted(open_ball(sp, c, r)):
                try:
                    openness_witness(sp, a, c, r, y, mode=args.mode)
                    opens += 1
                except (ImageError, StrictRangeError, InvariantError) as exc:
                    viol.append({"center": c, "radius": r, "y": y, "error": str(exc)})
    return cfg, {"separations": out, "openness_checked": opens}, viol, not viol


def cmd_uniformity_base(args):
    a, spec = _resolve_action(args)
    if args.n is None:
        raise InputError("uniformity-base needs --n")
    m = uniformity_base_index(a, args.n)
    return {"action": spec, "n": args.n}, {"m": m, "theta_at_1_over_m": a(1.0 / m, 1.0 / m)}, [], True


def cmd_banach(args):
    if not args.space or not args.map:
        raise InputError("banach needs --space and --map")
    sp = load_space(args.space)
    T = _load_map_obj(args.map, sp, multi=False)
    x0 = sp.index(args.x0 if args.x0 is not None else sp.labels[0])
    tol = args.tol if args.tol_given else TOL_FIX
    po = PointOracle.finite(sp)
    alpha = estimate_contraction(po, T) if len(sp) > 1 else 0.0
    tr = banach_solve(po, T, x0, tol_fix=tol, max_iter=args.max_iter, alpha_hat=alpha if alpha < 1 else None)
    fixed = [sp.labels[i] for i in fixed_points(po, T)]
    result = {
        "status": tr.status,
        "alpha_hat": alpha,
        "iterates": [sp.labels[i] for i in tr.iterates],
        "step_dists": tr.step_dists,
        "fixed_point": None if tr.result is None else sp.labels[tr.result],
        "exhaustive_fixed_points": fixed,
    }
    viol = [{"condition": "step_decay", "n": n} for n in tr.decay_violations]
    cfg = {"space": args.space, "map": args.map, "x0": sp.labels[x0], "tol_fix": tol, "max_iter": args.max_iter}
    return cfg, result, viol, tr.converged and not viol


def _caristi_common(args, multi):
    sp, a, spec = _space_and_action(args)
    cspec = args.caristi or (args.space if _fixture_of(args.space) else None)
    mspec = args.map or (args.space if _fixture_of(args.space) else None)
    if cspec is None or mspec is None:
        raise InputError("--caristi and --map are required")
    cd, cobj = _load_caristi(cspec, sp, a)
    T = _load_map_obj(mspec, sp, multi)
    sampler = _sampler(args)
    cfg = {"space": args.space, "action": spec, "caristi": cspec, "map": mspec, "sampler": sampler.to_dict()}
    checks = {
        "psi": check_psi(sp, a, cd).to_dict(),
        "gamma": check_gamma(cd, a, sampler).status,
    }
    solve = endpoint if multi else caristi_fixed_point
    try:
        res = solve(sp, a, cd, T, sampler)
    except (PreconditionError, InvariantError) as exc:
        w = exc.witness
        return cfg, {"checks": checks, "point": None, "error": str(exc)}, [{"error": str(exc), "witness": _jsonable(w)}], False
    R = res.relation
    order = [[sp.labels[i], sp.labels[j]] for i in range(len(sp)) for j in range(len(sp)) if i != j and R[i, j]]
    result = {
        "checks": checks,
        "regular": a.regular_flag,
        "order": order,
        "minimal": res.minimal,
        "point": res.point,
    }
    return cfg, result, [], True


def _jsonable(w):
    if isinstance(w, (list, tuple)):
        return [_jsonable(v) for v in w]
    if isinstance(w, dict):
        return {k: _jsonable(v) for k, v in w.items()}
    return w


def cmd_caristi(args):
    return _caristi_common(args, multi=False)


def cmd_endpoint(args):
    return _caristi_common(args, multi=True)


HANDLERS = {
    "check-action": cmd_check_action,
    "eta": cmd_eta,
    "validate-space": cmd_validate_space,
    "ball": cmd_ball,
    "separate": cmd_separate,
    "uniformity-base": cmd_uniformity_base,
    "banach": cmd_banach,
    "caristi": cmd_caristi,
    "endpoint": cmd_endpoint,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thetametric", description="theta-metric spaces and fixed points")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--action", help="path to action JSON or builtin:kind[:k=v,...]")
        p.add_argument("--space", help="path to space JSON or builtin:fixture")
        p.add_argument("--map", help="path to map JSON or builtin:fixture")
        p.add_argument("--caristi", help="path to Caristi JSON or builtin:fixture")
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--grid", type=int, default=41, help="grid points per axis for sampled checks")
        p.add_argument("--random", type=int, default=2000, help="random samples for sampled checks")
        p.add_argument("--cap", type=float, default=100.0, help="upper bound of sampled arguments")
        p.add_argument("--mode", choices=("strict", "existence"), default="strict")
        p.add_argument("--json-out", help="also write the JSON report to this path")
        p.add_argument("--quiet", action="store_true", help="suppress human-readable output")
        if name == "eta":
            p.add_argument("--r", type=float)
            p.add_argument("--s", type=float)
        if name == "validate-space":
            p.add_argument("--plain", action="store_true", help="also check the ordinary triangle inequality")
        if name == "ball":
            p.add_argument("--center")
            p.add_argument("--radius", type=float)
        if name == "separate":
            p.add_argument("--x")
            p.add_argument("--y")
        if name == "uniformity-base":
            p.add_argument("--n", type=int)
        if name == "banach":
            p.add_argument("--x0")
            p.add_argument("--max-iter", type=int, default=1000)
    return parser


def run(argv=None, stdout=None, stderr=None):
    """Execute one job; returns ``(report or None, exit_code)``."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return None, 0 if exc.code == 0 else 2
    args.tol_given = args.tol is not None
    if args.tol is None:
        args.tol = TOL_CMP
    started = time.perf_counter()
    try:
        if args.json_out and not Path(args.json_out).resolve().parent.is_dir():
            raise InputError(f"directory for --json-out does not exist: {args.json_out}")
        cfg, result, violations, ok = HANDLERS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=stderr)
        return None, 2
    report = {
        "command": args.command,
        "status": "pass" if ok else "fail",
        "exit_code": 0 if ok else 1,
        "config": {**cfg, "seed": args.seed, "tol": args.tol, "backend": BACKEND},
        "result": result,
        "violations": violations,
        "timing": {"seconds": time.perf_counter() - started},
    }
    if args.json_out:
        Path(args.json_out).write_text(dumps(report))
    if not args.quiet:
        stdout.write(render_human(report))
    return report, report["exit_code"]


def main(argv=None) -> int:
    _, code = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
