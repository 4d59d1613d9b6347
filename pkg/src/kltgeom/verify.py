"""Executable acceptance checks.

Each ``check_*`` function measures one property, compares it against its
tolerance and returns a :class:`CheckResult`.  :func:`run_all` runs the twelve
of them in order; the CLI ``verify-paper`` command and the acceptance tests
both go through here.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import actions, arrangements, cohom, models
from .lattice import canonical_class, intersect, is_numerically_trivial

Details = dict


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    details: Details = field(default_factory=dict)
    elapsed: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name} ({self.elapsed:.2f}s)"

    def to_json(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.passed, "details": self.details}


def _timed(number: int, name: str, fn: Callable[[], tuple[bool, Details]]) -> CheckResult:
    t0 = time.perf_counter()
    passed, details = fn()
    return CheckResult(number, name, bool(passed), details, time.perf_counter() - t0)


# ---------------------------------------------------------------------------


def check_dual_hesse_combinatorics() -> CheckResult:
    def run():
        t0 = time.perf_counter()
        cfg = arrangements.build_dual_hesse()
        per_line = [len(cfg.points_on_line(j)) for j in range(len(cfg.lines))]
        per_point = [len(cfg.lines_through_point(i)) for i in range(len(cfg.points))]
        dt = time.perf_counter() - t0
        ok = (
            len(cfg.lines) == 9
            and len(cfg.points) == 12
            and set(per_line) == {4}
            and set(per_point) == {3}
            and dt < 1.0
        )
        return ok, {"lines": len(cfg.lines), "points": len(cfg.points), "points_per_line": per_line,
                    "lines_per_point": per_point}

    return _timed(1, "dual Hesse incidences 9x4 / 12x3", run)


def check_divisor_identity() -> CheckResult:
    def run():
        cfg = arrangements.build_dual_hesse()
        lat = cfg.lattice()
        total = lat.zero()
        for c in arrangements.strict_transform_classes(cfg):
            total = total + c
        target = -3 * canonical_class(lat)
        ok = lat.rank == 13 and total == target and total.is_integral()
        return ok, {"sum": total.to_json(), "minus_3K": target.to_json()}

    return _timed(2, "sum of strict transforms equals -3K", run)


def check_pair_verdicts() -> CheckResult:
    def run():
        hesse = arrangements.check_pair(arrangements.dual_hesse_pair())
        spec = arrangements.dual_hesse_pair()
        classes = [c.divisor for c in spec.components]
        pairwise = sorted({intersect(spec.lattice, a, b) for i, a in enumerate(classes) for b in classes[i + 1:]})
        coble = arrangements.check_pair(arrangements.build_coble_lattice_example())
        ok = (
            hesse.overall == "KLT-CY"
            and hesse.snc == "holds"
            and pairwise == [0]
            and coble.overall == "lc-CY"
            and coble.coefficient_class != "KLT"
        )
        return ok, {"dual_hesse": hesse.to_json(), "pairwise_intersections": [str(p) for p in pairwise],
                    "coble": coble.to_json()}

    return _timed(3, "pair verdicts KLT-CY / lc-CY", run)


def check_aut_sharp() -> CheckResult:
    def run():
        cfg = arrangements.build_dual_hesse()
        rec = arrangements.max_collinear(cfg.points)
        trivial = arrangements.aut_sharp_trivial(cfg.points)
        lines_ok = arrangements.lines_through_coordinate_points_are_config_lines(cfg)
        ok = rec.count == 4 and rec.count < 11 and trivial and lines_ok
        return ok, {"max_collinear": rec.count, "aut_sharp_trivial": trivial, "nine_line_check": lines_ok}

    return _timed(4, "Aut# criterion on the dual Hesse points", run)


def check_coble_identities() -> CheckResult:
    def run():
        spec = arrangements.build_coble_lattice_example()
        lat = spec.lattice
        squares = [intersect(lat, c.divisor, c.divisor) for c in spec.components]
        c6 = arrangements.coble_c6(spec)
        K = canonical_class(lat)
        ok = (
            squares == [-2, -2, -2, -2, -3]
            and c6 == -2 * K
            and is_numerically_trivial(K + Fraction(1, 2) * c6)
        )
        return ok, {"self_intersections": [str(s) for s in squares], "C6": c6.to_json(), "minus_2K": (-2 * K).to_json()}

    return _timed(5, "Coble lattice identities", run)


def model_consistency(seed: int = 0, samples: int = 10_000, dims=(2, 3, 12), batch: int = 100) -> Details:
    """Worst roundtrip and isometry-invariance errors over random samples."""
    rng = np.random.default_rng(seed)
    out = {}
    for n in dims:
        x = models.random_hyperboloid_points(n, samples, rng)
        y = models.random_hyperboloid_points(n, samples, rng)
        rt_klein = np.max(np.abs(models.klein_to_hyperboloid(models.hyperboloid_to_klein(x)) - x))
        rt_poinc = np.max(np.abs(models.poincare_to_hyperboloid(models.hyperboloid_to_poincare(x)) - x))
        w = models.hyperboloid_to_klein(x)
        rt_kp = np.max(np.abs(models.poincare_to_klein(models.klein_to_poincare(w)) - w))
        d = models.hyperbolic_distance(x, y)
        inv = 0.0
        for start in range(0, samples, batch):
            g = models.random_isometry(n, rng).m
            sl = slice(start, start + batch)
            inv = max(inv, float(np.max(np.abs(models.hyperbolic_distance(x[sl] @ g.T, y[sl] @ g.T) - d[sl]))))
        out[str(n)] = {"roundtrip": float(max(rt_klein, rt_poinc, rt_kp)), "invariance": inv}
    return out


def check_model_consistency(seed: int = 0, samples: int = 10_000) -> CheckResult:
    def run():
        t0 = time.perf_counter()
        res = model_consistency(seed, samples)
        dt = time.perf_counter() - t0
        ok = all(r["roundtrip"] <= 1e-12 and r["invariance"] <= 1e-9 for r in res.values()) and dt < 10.0
        return ok, {"per_dimension": res, "samples": samples}

    return _timed(6, "model roundtrips and distance invariance", run)


def klein_collinearity(seg: models.GeodesicSegment, points: int = 10) -> float:
    """Largest distance of interior Klein images from the chord through the endpoints."""
    ts = np.linspace(0.0, seg.length, points)
    w = np.array([models.hyperboloid_to_klein(models.geodesic_point(seg, t).v) for t in ts])
    p, q = w[0], w[-1]
    u = q - p
    norm = np.linalg.norm(u)
    if norm == 0.0:
        return float(np.max(np.linalg.norm(w - p, axis=1)))
    u = u / norm
    rel = w - p
    perp = rel - np.outer(rel @ u, u)
    return float(np.max(np.linalg.norm(perp, axis=1)))


def check_cat0(seed: int = 0, triangles: int = 1000, pairs: int = 10) -> CheckResult:
    def run():
        rng = np.random.default_rng(seed)
        worst = -math.inf
        worst_col = 0.0
        for k in range(triangles):
            pts = models.random_hyperboloid_points(3, 3, rng)
            a, b, c = (models.HyperboloidPoint(p) for p in pts)
            rep = models.cat0_check(a, b, c, samples=pairs, seed=seed * 100_003 + k)
            worst = max(worst, rep.max_violation)
            worst_col = max(worst_col, klein_collinearity(models.GeodesicSegment(a, b)))
        ok = worst <= 1e-9 and worst_col <= 1e-9
        return ok, {"max_violation": worst, "klein_collinearity": worst_col, "triangles": triangles,
                    "pairs_per_triangle": pairs}

    return _timed(7, "CAT(0) comparison and Klein collinearity in H^3", run)


def dirichlet_consistency(generators, a, L: int, points: int, seed: int = 0, max_radius: float = 4.0) -> Details:
    """Fold random points with ``W_{2L}`` and test them against ``D(W_L)``.

    Whenever the nearest translate ``g* a`` (over ``W_{2L}``) has ``g*`` in
    ``W_L``, the point ``g*^-1 x`` must lie in the ``W_L`` Dirichlet domain.
    """
    av = models.to_hyperboloid(a).v
    small = actions.word_ball(generators, L)
    big = actions.word_ball(generators, 2 * L)
    dom = actions.dirichlet_domain(small, av)
    rng = np.random.default_rng(seed)
    xs = models.random_hyperboloid_points(av.size - 1, points, rng, max_radius=max_radius)
    inv = big.inverse_matrices()
    tested = failures = 0
    worst = 0.0
    for x in xs:
        i = actions.nearest_translate(big, x, av)
        if small.index_of(big.matrices[i]) is None:
            continue
        tested += 1
        y = inv[i] @ x
        w = y[1:] / y[0]
        excess = float(np.max(dom.A @ w - dom.b)) if len(dom) else -1.0
        worst = max(worst, excess)
        if not dom.contains(w, tol=1e-9)[0]:
            failures += 1
    return {"points": points, "tested": tested, "failures": failures, "worst_excess": worst}


def check_dirichlet_slab(seed: int = 0, word_length: int = 6) -> CheckResult:
    def run():
        g = models.boost(2, 2.0)
        a = models.HyperboloidPoint.origin(2)
        dom = actions.dirichlet_domain(actions.word_ball([g], word_length), a)
        expect = math.tanh(1.0)
        sides = sorted((tuple(h.normal), h.offset) for h in dom.halfspaces)
        target = [((-1.0, 0.0), expect), ((1.0, 0.0), expect)]
        slab_err = math.inf
        if len(sides) == 2:
            slab_err = max(
                max(abs(s[0][0] - t[0][0]), abs(s[0][1] - t[0][1]), abs(s[1] - t[1])) for s, t in zip(sides, target)
            )
        cons = dirichlet_consistency([g], a, 4, 1000, seed)
        ok = slab_err <= 1e-12 and cons["failures"] == 0 and cons["tested"] > 0
        return ok, {"sides": [[list(s[0]), s[1]] for s in sides], "slab_error": slab_err, "consistency": cons}

    return _timed(8, "Dirichlet slab for a boost and W_L/W_2L consistency", run)


def check_proper_counts() -> CheckResult:
    def run():
        elems = actions.word_ball([models.boost(2, 2.0)], 6)
        a = models.HyperboloidPoint.origin(2)
        c1 = actions.proper_action_count(elems, a, 0.5)
        c3 = actions.proper_action_count(elems, a, 1.5)
        return c1 == 1 and c3 == 3, {"r=0.5": c1, "r=1.5": c3}

    return _timed(9, "proper action counts 1 and 3", run)


def complement_cases(seed: int = 0, cases: int = 40) -> list[dict]:
    """Random point pairs outside a fixed horoball in ``H^2`` with path lengths and oracle values."""
    rng = np.random.default_rng(seed)
    h = models.Horoball(models.IdealPoint.from_direction([0.0, 1.0]), 0.5)
    out = []
    while len(out) < cases:
        x, y = (models.HyperboloidPoint(v) for v in models.random_hyperboloid_points(2, 2, rng, max_radius=3.0))
        if models.in_horoball(h, x) or models.in_horoball(h, y):
            continue
        path = actions.complement_path(x, y, h)
        oracle = actions.complement_path_oracle(x, y, h)
        direct = models.distance(x, y)
        out.append({"length": path.length, "oracle": oracle, "direct": direct, "missed": path.direct})
    return out


def check_horoballs(seed: int = 0) -> CheckResult:
    def run():
        ball_err = 0.0
        for u in ([1.0, 0.0], [0.6, 0.8], [0.0, 0.0, 1.0], [2 / 3, -2 / 3, 1 / 3]):
            ud = np.asarray(u)
            eb = models.horoball_to_euclidean(models.Horoball(models.IdealPoint.from_direction(ud), -math.log(3.0)))
            ball_err = max(ball_err, abs(eb.radius - 0.25), float(np.max(np.abs(eb.center - 0.75 * ud))),
                           abs(float(np.linalg.norm(eb.center)) + eb.radius - 1.0))

        half_disk = actions.Polyhedron([actions.HalfSpace.make([1.0, 0.0], 0.0)], 2)
        start = models.Horoball(models.IdealPoint.from_direction([-1.0, 0.0]), 1.0)
        shrunk, steps = actions.shrink_horoball(start, half_disk)
        anti = models.poincare_to_klein(models.horoball_antipode(shrunk))
        shrink_ok = steps <= 40 and bool(half_disk.contains(anti, tol=1e-12)[0]) and shrunk.level <= start.level

        cases = complement_cases(seed)
        oracle_err = max(abs(c["length"] - c["oracle"]) for c in cases)
        ge_ok = all(c["length"] >= c["direct"] - 1e-12 for c in cases)
        iff_ok = all((abs(c["length"] - c["direct"]) <= 1e-9) == c["missed"] for c in cases)
        crossing = sum(not c["missed"] for c in cases)
        ok = ball_err <= 1e-12 and shrink_ok and oracle_err <= 1e-6 and ge_ok and iff_ok and 0 < crossing < len(cases)
        return ok, {
            "euclidean_ball_error": ball_err,
            "shrink": {"steps": steps, "level": shrunk.level, "antipode_klein": anti.tolist()},
            "complement": {"cases": len(cases), "crossing": crossing, "oracle_error": oracle_err,
                           "length_ge_direct": ge_ok, "equality_iff_missed": iff_ok},
        }

    return _timed(10, "horoball balls, shrinking and complement paths", run)


def check_free_search(n_jobs: int = 1) -> CheckResult:
    def run():
        t0 = time.perf_counter()
        s = cohom.no_relation_search([cohom.SANOV_A, cohom.SANOV_B], 12, n_jobs=n_jobs)
        sl2 = [cohom.IntMatrix2.of([[1, 1], [0, 1]]), cohom.IntMatrix2.of([[1, 0], [1, 1]])]
        t = cohom.no_relation_search(sl2, 12, n_jobs=n_jobs)
        witness_ok = (
            not t.free_up_to_L
            and t.witness is not None
            and len(t.witness) <= 12
            and cohom.evaluate_word(sl2, t.witness) == cohom.IntMatrix2(1, 0, 0, 1)
        )
        I = cohom.IntMatrix2(1, 0, 0, 1)
        documented = cohom.distinct_mod_center([(I, I), (I, I.scale(-1))]) == [False, True]
        ball = _word_ball_2x2([cohom.SANOV_A, cohom.SANOV_B], 3)
        pairs = [(ball[i], ball[j]) for i in range(len(ball)) for j in range(i + 1, len(ball))]
        distinct = all(cohom.distinct_mod_center(pairs))
        dt = time.perf_counter() - t0
        ok = s.free_up_to_L and witness_ok and documented and distinct and dt < 30.0
        return ok, {"S_free_up_to_12": s.free_up_to_L, "S_words_checked": s.words_checked,
                    "sl2_witness": t.witness_string(), "documented_pairs": documented,
                    "S_ball_pairs_distinct": distinct, "S_ball_pairs": len(pairs)}

    return _timed(11, "free-group search and distinctness modulo zeta", run)


def _word_ball_2x2(gens, L: int) -> list:
    letters = []
    for g in gens:
        letters += [g, g.inverse()]
    out = {cohom.IntMatrix2(1, 0, 0, 1)}
    frontier = set(out)
    for _ in range(L):
        frontier = {m @ g for m in frontier for g in letters} - out
        out |= frontier
    return sorted(out, key=lambda m: m.to_json())


def check_cohomology() -> CheckResult:
    def run():
        t0 = time.perf_counter()
        z2 = cohom.cyclic_group(2)
        z3 = cohom.cyclic_group(3)
        z3_inv = z3.with_sigma([z3.inv(a) for a in range(3)])
        c_z2 = cohom.h1_z2(z2).count
        c_z3 = cohom.h1_z2(z3_inv).count
        cases = bad = 0
        for grp in cohom.small_groups(8):
            for s in cohom.involutive_automorphisms(grp):
                rep = cohom.semidirect_order2_classes(grp.with_sigma(s))
                cases += 1
                if not (rep.well_defined and rep.surjective and rep.count <= rep.h1_count):
                    bad += 1
        dt = time.perf_counter() - t0
        ok = c_z2 == 2 and c_z3 == 1 and bad == 0 and dt < 10.0
        return ok, {"Z2_trivial": c_z2, "Z3_inversion": c_z3, "group_sigma_cases": cases, "failures": bad}

    return _timed(12, "H^1 counts and the class map for groups of order <= 8", run)


def run_all(seed: int = 0, samples: int = 10_000, word_length: int = 6, n_jobs: int = 1) -> list[CheckResult]:
    return [
        check_dual_hesse_combinatorics(),
        check_divisor_identity(),
        check_pair_verdicts(),
        check_aut_sharp(),
        check_coble_identities(),
        check_model_consistency(seed, samples),
        check_cat0(seed),
        check_dirichlet_slab(seed, word_length),
        check_proper_counts(),
        check_horoballs(seed),
        check_free_search(n_jobs),
        check_cohomology(),
    ]
