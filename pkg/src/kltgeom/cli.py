"""Command line entry point: ``kltgeom <group> <command> [options]``.

Every command prints one JSON report on standard output::

    {"command": ..., "inputs_digest": ..., "seed": ..., "results": ..., "passed": ...}

Exit status is 0 when the report passes, 1 when a check fails and 2 for usage
errors or malformed input.  JSON arguments are either inline text or a path
to a file holding the JSON.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from . import actions, arrangements, cohom, models, verify
from .lattice import PicardLattice, canonical_class, intersect, self_intersection

DEFAULTS = {"seed": 0, "tolerance": 1e-9, "word_length": 6, "samples": 1000, "jobs": 1}


class UsageError(Exception):
    """Bad arguments or malformed input; maps to exit status 2."""


# ---------------------------------------------------------------------------
# input helpers
# ---------------------------------------------------------------------------


def load_json_arg(value: str, name: str) -> Any:
    """Parse ``value`` as inline JSON, or as the contents of a file at that path."""
    source = "inline"
    text = value
    if os.path.isfile(value):
        source = value
        with open(value, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON for {name} ({source}) at line {exc.lineno} column {exc.colno}: {exc.msg}")


def _point(data: Any, model: str):
    """A tagged point dict, or a bare coordinate array in ``model``."""
    if isinstance(data, dict):
        return models.point_from_json(data)
    kinds = {"hyperboloid": models.HyperboloidPoint, "klein": models.KleinPoint,
             "poincare": models.PoincarePoint, "ideal": models.IdealPoint}
    return kinds[model](data)


def _matrices(data: Any) -> list[np.ndarray]:
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 2:
        arr = arr[None]
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise UsageError("generators must be a square matrix or a list of square matrices")
    return list(arr)


def _horoball(data: Any) -> models.Horoball:
    if not isinstance(data, dict) or "level" not in data:
        raise UsageError('a horoball is {"base": [...], "level": x}; base is an ideal point or a boundary direction')
    base = np.asarray(data["base"], dtype=float)
    if "direction" in data or abs(float(np.linalg.norm(base)) - 1.0) < 1e-12:
        ideal = models.IdealPoint.from_direction(data.get("direction", base))
    else:
        ideal = models.IdealPoint(base)
    return models.Horoball(ideal, float(data["level"]))


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if hasattr(x, "to_json"):
        return _jsonable(x.to_json())
    return x


# ---------------------------------------------------------------------------
# commands; each returns (results, passed)
# ---------------------------------------------------------------------------


def cmd_lattice_intersect(a):
    lat = PicardLattice(a.k)
    u = lat.divisor(load_json_arg(a.u, "--u"))
    v = lat.divisor(load_json_arg(a.v, "--v"))
    return {"value": intersect(lat, u, v)}, True


def cmd_lattice_canonical(a):
    lat = PicardLattice(a.k)
    K = canonical_class(lat)
    return {"class": K, "self_intersection": self_intersection(lat, K), "signature": list(lat.signature())}, True


def cmd_models_convert(a):
    p = _point(load_json_arg(a.point, "--point"), a.model)
    q = models.convert(p, a.to)
    return {"input": p, "output": q}, True


def cmd_models_distance(a):
    u = _point(load_json_arg(a.u, "--u"), a.model)
    v = _point(load_json_arg(a.v, "--v"), a.model)
    return {"distance": models.distance(u, v)}, True


def cmd_models_classify(a):
    g = models.Isometry(load_json_arg(a.matrix, "--matrix"))
    t = models.classify_isometry(g, eps=a.tolerance)
    return {"kind": t.kind, "translation_length": t.translation_length}, True


def cmd_models_cat0_sample(a):
    rng = np.random.default_rng(a.seed)
    worst = -math.inf
    for k in range(a.samples):
        pts = models.random_hyperboloid_points(a.n, 3, rng)
        rep = models.cat0_check(*(models.HyperboloidPoint(p) for p in pts), samples=a.pairs, seed=a.seed * 100_003 + k)
        worst = max(worst, rep.max_violation)
    return {"n": a.n, "triangles": a.samples, "pairs": a.pairs, "max_violation": worst}, worst <= a.tolerance


def _elements(a):
    return actions.word_ball(_matrices(load_json_arg(a.generators, "--generators")), a.word_length)


def _basepoint(a, n: int):
    if a.point is None:
        return models.HyperboloidPoint.origin(n)
    return _point(load_json_arg(a.point, "--point"), a.model)


def cmd_actions_dirichlet(a):
    elems = _elements(a)
    dom = actions.dirichlet_domain(elems, _basepoint(a, elems.n))
    return {"elements": len(elems), "domain": dom}, True


def cmd_actions_proper_count(a):
    elems = _elements(a)
    c = actions.proper_action_count(elems, _basepoint(a, elems.n), a.radius)
    return {"elements": len(elems), "radius": a.radius, "count": c}, True


def cmd_actions_limit_set(a):
    elems = _elements(a)
    pts = actions.limit_points(elems, _basepoint(a, elems.n), a.min_norm)
    return {"elements": len(elems), "directions": [p.direction for p in pts]}, True


def cmd_actions_project_cone(a):
    proj = actions.project_cone(actions.ConeSpec(load_json_arg(a.rays, "--rays")), eps=a.tolerance)
    return {"points": proj.points, "on_boundary": proj.on_boundary, "hull": proj.hull}, True


def cmd_actions_shrink(a):
    h = _horoball(load_json_arg(a.horoball, "--horoball"))
    region = actions.Polyhedron.from_json(load_json_arg(a.region, "--region"))
    out, steps = actions.shrink_horoball(h, region)
    anti = models.poincare_to_klein(models.horoball_antipode(out))
    inside = bool(region.contains(anti, tol=1e-12)[0])
    return {"horoball": out, "bisection_steps": steps, "antipode_klein": anti, "antipode_in_region": inside}, inside


def cmd_actions_complement_path(a):
    h = _horoball(load_json_arg(a.horoball, "--horoball"))
    x = _point(load_json_arg(a.x, "--x"), a.model)
    y = _point(load_json_arg(a.y, "--y"), a.model)
    path = actions.complement_path(x, y, h)
    direct = models.distance(x, y)
    res = {"path": path, "direct_distance": direct}
    ok = path.length >= direct - 1e-12
    if a.oracle:
        res["oracle_length"] = actions.complement_path_oracle(x, y, h)
        ok = ok and abs(res["oracle_length"] - path.length) <= 1e-6
    return res, ok


def cmd_arrange_dual_hesse(a):
    cfg = arrangements.build_dual_hesse()
    verdict = arrangements.check_pair(arrangements.dual_hesse_pair())
    per_line = sorted({len(cfg.points_on_line(j)) for j in range(len(cfg.lines))})
    per_point = sorted({len(cfg.lines_through_point(i)) for i in range(len(cfg.points))})
    res = {"points": len(cfg.points), "lines": len(cfg.lines), "points_per_line": per_line,
           "lines_per_point": per_point, "verdict": verdict, "configuration": cfg}
    ok = per_line == [4] and per_point == [3] and verdict.overall == "KLT-CY"
    return res, ok


def cmd_arrange_coble(a):
    spec = arrangements.build_coble_lattice_example()
    lat = spec.lattice
    c6 = arrangements.coble_c6(spec)
    verdict = arrangements.check_pair(spec)
    res = {"pair": spec, "C6": c6, "self_intersections": [intersect(lat, c.divisor, c.divisor) for c in spec.components],
           "verdict": verdict}
    return res, verdict.overall == "lc-CY" and c6 == -2 * canonical_class(lat)


def cmd_arrange_check_pair(a):
    spec = arrangements.PairSpec.from_json(load_json_arg(a.pair, "--pair"))
    return {"verdict": arrangements.check_pair(spec)}, True


def cmd_arrange_aut_sharp(a):
    if a.points is None:
        pts = arrangements.build_dual_hesse().points
    else:
        pts = arrangements.points_from_json(load_json_arg(a.points, "--points"))
    rec = arrangements.max_collinear(pts)
    trivial = arrangements.aut_sharp_trivial(pts)
    return {"points": len(pts), "max_collinear": rec.count, "witness_line": rec.witness,
            "aut_sharp_trivial": trivial}, trivial


def _table(a) -> cohom.FiniteGroupTable:
    return cohom.FiniteGroupTable.from_json(load_json_arg(a.table, "--table"))


def cmd_cohom_h1(a):
    r = cohom.h1_z2(_table(a))
    return {"count": r.count, "classes": r.classes, "cocycles": r.cocycles}, True


def cmd_cohom_semidirect(a):
    r = cohom.semidirect_order2_classes(_table(a))
    res = {"count": r.count, "h1_count": r.h1_count, "map_from_h1": r.map_from_h1, "well_defined": r.well_defined,
           "surjective": r.surjective, "injective": r.injective,
           "untwisted_involution_classes": r.trivial_part_involution_classes}
    return res, r.well_defined and r.surjective


def cmd_cohom_free_check(a):
    if a.gens is None:
        gens = [cohom.SANOV_A, cohom.SANOV_B]
    else:
        gens = [cohom.IntMatrix2.of(m) for m in load_json_arg(a.gens, "--gens")]
    center = None if a.center is None else [cohom._entry(c) for c in load_json_arg(a.center, "--center")]
    r = cohom.no_relation_search(gens, a.word_length, center=center, n_jobs=a.jobs)
    return {"word_length": a.word_length, "free_up_to_L": r.free_up_to_L, "witness": r.witness_string(),
            "words_checked": r.words_checked}, True


def cmd_cohom_pingpong(a):
    pts = [[Fraction(c) for c in p] for p in load_json_arg(a.points, "--points")]
    ok = cohom.pingpong_witness(pts)
    return {"samples": len(pts), "pingpong": ok}, ok


def cmd_cohom_mod_center(a):
    pairs = [(cohom.IntMatrix2.of(g), cohom.IntMatrix2.of(h)) for g, h in load_json_arg(a.pairs, "--pairs")]
    return {"distinct": cohom.distinct_mod_center(pairs)}, True


def cmd_verify_all(a):
    results = verify.run_all(seed=a.seed, word_length=max(a.word_length, 1), n_jobs=a.jobs)
    for r in results:
        print(r.line(), file=sys.stderr)
    return {"criteria": [r.to_json() for r in results]}, all(r.passed for r in results)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default 0)")
    p.add_argument("--tolerance", type=float, default=argparse.SUPPRESS, help="numerical tolerance (default 1e-9)")
    p.add_argument("--word-length", type=int, default=argparse.SUPPRESS, help="word length L (default 6)")
    p.add_argument("--samples", type=int, default=argparse.SUPPRESS, help="sample count (default 1000)")
    p.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes (default 1)")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kltgeom", description="Hyperbolic geometry, lattice and cohomology checks with JSON reports.")
    _common(parser)
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def leaf(sub, name: str, fn: Callable, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        _common(p)
        p.set_defaults(func=fn, command_name=name)
        return p

    def model_flag(p):
        p.add_argument("--model", default="hyperboloid", choices=["hyperboloid", "klein", "poincare", "ideal"],
                       help="model of bare coordinate arrays")

    g = groups.add_parser("lattice", help="Picard lattice arithmetic").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = leaf(g, "intersect", cmd_lattice_intersect, "intersection number of two classes")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p = leaf(g, "canonical", cmd_lattice_canonical, "canonical class of the k-point blow-up")
    p.add_argument("--k", type=int, required=True)

    g = groups.add_parser("models", help="hyperbolic models").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = leaf(g, "convert", cmd_models_convert, "convert a point between models")
    p.add_argument("--point", required=True)
    p.add_argument("--to", required=True, choices=["hyperboloid", "klein", "poincare"])
    model_flag(p)
    p = leaf(g, "distance", cmd_models_distance, "hyperbolic distance")
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    model_flag(p)
    p = leaf(g, "classify", cmd_models_classify, "elliptic / parabolic / hyperbolic")
    p.add_argument("--matrix", required=True)
    p = leaf(g, "cat0-sample", cmd_models_cat0_sample, "random CAT(0) comparison checks")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--pairs", type=int, default=10)

    g = groups.add_parser("actions", help="discrete group actions").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name, fn, text in (
        ("dirichlet", cmd_actions_dirichlet, "Dirichlet domain from a word ball"),
        ("proper-count", cmd_actions_proper_count, "elements moving a ball onto itself"),
        ("limit-set", cmd_actions_limit_set, "boundary directions of far orbit points"),
    ):
        p = leaf(g, name, fn, text)
        p.add_argument("--generators", required=True)
        p.add_argument("--point", default=None)
        model_flag(p)
        if name == "proper-count":
            p.add_argument("--radius", type=float, required=True)
        if name == "limit-set":
            p.add_argument("--min-norm", type=float, default=1e-3)
    p = leaf(g, "project-cone", cmd_actions_project_cone, "Klein image and hull of a cone")
    p.add_argument("--rays", required=True)
    p = leaf(g, "shrink", cmd_actions_shrink, "lower a horoball until its antipode lies in a region")
    p.add_argument("--horoball", required=True)
    p.add_argument("--region", required=True)
    p = leaf(g, "complement-path", cmd_actions_complement_path, "shortest path avoiding a horoball in H^2")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--horoball", required=True)
    p.add_argument("--oracle", action="store_true", help="also run the brute-force oracle")
    model_flag(p)

    g = groups.add_parser("arrange", help="plane configurations and pairs").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    leaf(g, "dual-hesse", cmd_arrange_dual_hesse, "dual Hesse configuration and its pair")
    leaf(g, "coble", cmd_arrange_coble, "Coble lattice example")
    p = leaf(g, "check-pair", cmd_arrange_check_pair, "Calabi-Yau / KLT verdict for a pair")
    p.add_argument("--pair", required=True)
    p = leaf(g, "aut-sharp", cmd_arrange_aut_sharp, "collinearity bound for a point set")
    p.add_argument("--points", default=None)

    g = groups.add_parser("cohom", help="finite group cohomology and matrix words").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name, fn in (("h1", cmd_cohom_h1), ("semidirect", cmd_cohom_semidirect)):
        p = leaf(g, name, fn, "H^1 of Z/2" if name == "h1" else "order-2 classes in the semidirect product")
        p.add_argument("--table", required=True)
    p = leaf(g, "free-check", cmd_cohom_free_check, "search for relations among reduced words")
    p.add_argument("--gens", default=None)
    p.add_argument("--center", default=None)
    p = leaf(g, "pingpong", cmd_cohom_pingpong, "sampled ping-pong check")
    p.add_argument("--points", required=True)
    p = leaf(g, "mod-center", cmd_cohom_mod_center, "distinctness modulo zeta scalars")
    p.add_argument("--pairs", required=True)

    p = groups.add_parser("verify-paper", help="run every acceptance check")
    _common(p)
    p.set_defaults(func=cmd_verify_all, command_name="verify-paper")
    return parser


def _digest(args: argparse.Namespace) -> str:
    keys = {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}
    blob = json.dumps(keys, sort_keys=True, default=str)
    for k, v in keys.items():
        if isinstance(v, str) and os.path.isfile(v):
            with open(v, "rb") as fh:
                blob += hashlib.sha256(fh.read()).hexdigest()
    return hashlib.sha256(blob.encode()).hexdigest()


def run(argv: list[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        for k, v in DEFAULTS.items():
            if not hasattr(args, k):
                setattr(args, k, v)
        if args.samples < 1 or args.word_length < 0 or args.jobs < 1:
            raise UsageError("--samples and --jobs must be positive, --word-length nonnegative")
        results, passed = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError, KeyError, IndexError, OverflowError) as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return 2
    command = " ".join(x for x in (args.group, getattr(args, "cmd", None)) if x)
    report = {
        "command": command,
        "inputs_digest": _digest(args),
        "seed": args.seed,
        "results": _jsonable(results),
        "passed": bool(passed),
    }
    out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return 0 if passed else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
