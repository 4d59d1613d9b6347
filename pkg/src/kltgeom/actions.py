"""Discrete groups of hyperbolic isometries acting on H^n and on convex subsets.

Group elements are enumerated as word balls; Dirichlet domains, limit-set
approximations and horocusp checks are computed from these finite samples,
so they approximate the infinite-group objects from outside.  Polyhedra are
stored as half-space lists in Klein coordinates, where hyperbolic convexity
is Euclidean convexity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

from .models import (
    EPS_MODEL,
    BoundaryPoint,
    HyperboloidPoint,
    Horoball,
    IdealPoint,
    Isometry,
    KleinPoint,
    apply_isometry,
    hyperbolic_distance,
    horoball_antipode,
    horoball_to_euclidean,
    horoballs_disjoint,
    lorentz_dot,
    lorentz_gram,
    poincare_to_hyperboloid,
    poincare_to_klein,
    same_ideal_point,
    to_hyperboloid,
)

DEDUP_TOL = 1e-9
MAX_HULL_DIM = 4


# ---------------------------------------------------------------------------
# polyhedra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HalfSpace:
    """``{w : normal . w <= offset}`` in Klein coordinates; normal has unit length."""

    normal: tuple[float, ...]
    offset: float

    @classmethod
    def make(cls, normal, offset: float) -> "HalfSpace":
        nv = np.asarray(normal, dtype=float)
        norm = float(np.linalg.norm(nv))
        if norm == 0.0:
            raise ValueError("half-space normal must be nonzero")
        return cls(tuple((nv / norm).tolist()), float(offset) / norm)

    def value(self, w) -> np.ndarray:
        return np.asarray(w, dtype=float) @ np.asarray(self.normal) - self.offset

    def to_json(self) -> dict:
        return {"normal": list(self.normal), "offset": self.offset}


@dataclass
class Polyhedron:
    """Intersection of finitely many half-spaces, clipped to the unit ball."""

    halfspaces: list[HalfSpace]
    n: int
    vertices: np.ndarray | None = None
    degenerate: bool = False
    dimension: int | None = None

    @property
    def A(self) -> np.ndarray:
        if not self.halfspaces:
            return np.zeros((0, self.n))
        return np.array([h.normal for h in self.halfspaces])

    @property
    def b(self) -> np.ndarray:
        return np.array([h.offset for h in self.halfspaces])

    def __len__(self) -> int:
        return len(self.halfspaces)

    def contains(self, w, tol: float = 1e-9, closed_ball: bool = True):
        """Membership of Klein points (rows of ``w``)."""
        w = np.atleast_2d(np.asarray(w, dtype=float))
        ok = np.all(w @ self.A.T <= self.b + tol, axis=1) if self.halfspaces else np.ones(len(w), bool)
        r2 = np.sum(w * w, axis=1)
        ok &= r2 <= 1.0 + tol if closed_ball else r2 < 1.0
        return ok

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "halfspaces": [h.to_json() for h in self.halfspaces],
            "degenerate": self.degenerate,
        }
        if self.dimension is not None:
            out["dimension"] = self.dimension
        if self.vertices is not None:
            out["vertices"] = np.asarray(self.vertices).tolist()
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Polyhedron":
        hs = [HalfSpace.make(h["normal"], h["offset"]) for h in data.get("halfspaces", [])]
        n = int(data["n"]) if "n" in data else len(hs[0].normal)
        verts = np.asarray(data["vertices"], dtype=float) if data.get("vertices") is not None else None
        return cls(hs, n, verts, bool(data.get("degenerate", False)), data.get("dimension"))

    @classmethod
    def whole_ball(cls, n: int) -> "Polyhedron":
        return cls([], n)


def _dedupe_halfspaces(hs: Iterable[HalfSpace], tol: float = 1e-12) -> list[HalfSpace]:
    out: list[HalfSpace] = []
    for h in hs:
        if not any(
            abs(h.offset - k.offset) <= tol and max(abs(a - b) for a, b in zip(h.normal, k.normal)) <= tol
            for k in out
        ):
            out.append(h)
    return out


def remove_redundant(hs: Sequence[HalfSpace], n: int, tol: float = 1e-12) -> list[HalfSpace]:
    """Drop half-spaces implied by the others (LP over the box ``[-1, 1]^n``).

    Constraints whose hyperplane misses the closed unit ball are dropped first.
    """
    kept = [h for h in _dedupe_halfspaces(hs) if h.offset < 1.0]
    i = 0
    while i < len(kept):
        others = kept[:i] + kept[i + 1 :]
        c = -np.asarray(kept[i].normal)
        if others:
            A = np.array([h.normal for h in others])
            b = np.array([h.offset for h in others])
            res = linprog(c, A_ub=A, b_ub=b, bounds=[(-1.0, 1.0)] * n, method="highs")
        else:
            res = linprog(c, bounds=[(-1.0, 1.0)] * n, method="highs")
        if res.status == 0 and -res.fun <= kept[i].offset + tol:
            kept.pop(i)
        else:
            i += 1
    return kept


# ---------------------------------------------------------------------------
# group elements
# ---------------------------------------------------------------------------


@dataclass
class GroupElementSet:
    """Finite, inverse-closed set of group elements with the words producing them.

    Letters are ``+(i+1)`` for generator ``i`` and ``-(i+1)`` for its inverse.
    ``elements[0]`` is the identity.
    """

    generators: list[Isometry]
    matrices: np.ndarray
    words: list[tuple[int, ...]]
    exact: bool = False

    def __len__(self) -> int:
        return len(self.words)

    @property
    def n(self) -> int:
        return self.matrices.shape[1] - 1

    def isometry(self, i: int) -> Isometry:
        return Isometry(self.matrices[i])

    def __iter__(self):
        return (Isometry(m) for m in self.matrices)

    def index_of(self, m, tol: float = DEDUP_TOL) -> int | None:
        m = np.asarray(m, dtype=float)
        scale = np.maximum(1.0, np.max(np.abs(self.matrices), axis=(1, 2)))
        hits = np.nonzero(np.max(np.abs(self.matrices - m), axis=(1, 2)) <= tol * scale)[0]
        return int(hits[0]) if hits.size else None

    def inverse_matrices(self) -> np.ndarray:
        j = lorentz_gram(self.n)
        return j @ np.transpose(self.matrices, (0, 2, 1)) @ j

    def extended(self, extra: Iterable[Isometry]) -> "GroupElementSet":
        """Add elements (and their inverses) that are not already present."""
        mats = list(self.matrices)
        words = list(self.words)
        for g in extra:
            for m in (g.m, g.inverse().m):
                probe = GroupElementSet(self.generators, np.array(mats), words, self.exact)
                if probe.index_of(m) is None:
                    mats.append(np.array(m))
                    words.append(("extra",))
        return GroupElementSet(self.generators, np.array(mats), words, self.exact)


def _is_integral(m: np.ndarray) -> bool:
    return bool(np.all(np.abs(m) < 2**52) and np.all(m == np.round(m)))


class _FloatIndex:
    """Near-duplicate detection for matrices, bucketed on ``log m[0, 0]``."""

    def __init__(self, tol: float):
        self.tol = tol
        self.buckets: dict[int, list[np.ndarray]] = {}

    def _key(self, m: np.ndarray) -> int:
        return int(math.floor(math.log(max(m[0, 0], 1.0)) * 1e6))

    def add_if_new(self, m: np.ndarray) -> bool:
        k = self._key(m)
        scale = max(1.0, float(np.max(np.abs(m))))
        for kk in (k - 1, k, k + 1):
            for other in self.buckets.get(kk, ()):
                if np.max(np.abs(other - m)) <= self.tol * scale:
                    return False
        self.buckets.setdefault(k, []).append(m)
        return True


def word_ball(generators: Sequence, L: int, max_elements: int = 200_000, tol: float = DEDUP_TOL) -> GroupElementSet:
    """All reduced products of at most ``L`` letters in the generators and their inverses.

    Duplicates are removed (exactly when every generator has integer entries,
    otherwise up to ``tol`` relative max-norm).
    """
    if L < 0:
        raise ValueError("word length must be >= 0")
    gens = [g if isinstance(g, Isometry) else Isometry(g) for g in generators]
    if not gens:
        raise ValueError("at least one generator is required")
    dim = gens[0].m.shape[0]
    if any(g.m.shape[0] != dim for g in gens):
        raise ValueError("generators must have the same size")
    exact = all(_is_integral(g.m) and _is_integral(g.inverse().m) for g in gens)

    letters: dict[int, np.ndarray] = {}
    for i, g in enumerate(gens):
        letters[i + 1] = g.m
        letters[-(i + 1)] = g.inverse().m
    if exact:
        letters = {k: np.round(v).astype(object) for k, v in letters.items()}
        ident = np.eye(dim, dtype=int).astype(object)
        seen: set = {tuple(ident.ravel())}
    else:
        ident = np.eye(dim)
        index = _FloatIndex(tol)
        index.add_if_new(ident)

    mats = [ident]
    words: list[tuple[int, ...]] = [()]
    frontier = [(ident, ())]
    for _ in range(L):
        nxt = []
        for m, w in frontier:
            for letter, gm in letters.items():
                if w and w[-1] == -letter:
                    continue
                p = m @ gm
                if exact:
                    key = tuple(p.ravel())
                    new = key not in seen
                    if new:
                        seen.add(key)
                else:
                    new = index.add_if_new(p)
                if new:
                    if len(mats) >= max_elements:
                        raise ValueError(f"word ball exceeds {max_elements} elements; lower L or raise the cap")
                    mats.append(p)
                    words.append(w + (letter,))
                    nxt.append((p, w + (letter,)))
        frontier = nxt
    arr = np.array([np.asarray(m, dtype=float) for m in mats])
    return GroupElementSet(gens, arr, words, exact)


# ---------------------------------------------------------------------------
# Dirichlet domains and orbit statistics
# ---------------------------------------------------------------------------


def _coords(x) -> np.ndarray:
    return to_hyperboloid(x).v if not isinstance(x, np.ndarray) else x


def orbit(elems: GroupElementSet, x) -> np.ndarray:
    """Hyperboloid coordinates of ``g . x`` for every element."""
    return elems.matrices @ _coords(x)


def displacements(elems: GroupElementSet, x) -> np.ndarray:
    v = _coords(x)
    return hyperbolic_distance(np.broadcast_to(v, (len(elems), v.size)), orbit(elems, v))


def dirichlet_domain(
    elems: GroupElementSet,
    a,
    restrict: Polyhedron | None = None,
    remove_redundant_sides: bool = True,
    stabilizer_tol: float = 1e-9,
) -> Polyhedron:
    """Dirichlet polyhedron ``{x : d(x, a) <= d(x, g a)}`` over the enumerated elements.

    In Klein coordinates each bisector condition ``x.a <= x.(g a)`` is the
    half-space ``w . (c' - a') <= c0 - a0`` with ``c = g a`` and primes
    denoting spatial parts.  ``restrict`` (a convex set ``N``) is intersected
    in; redundant sides are pruned by linear programming when ``n <= 4``.
    """
    av = _coords(a)
    n = av.size - 1
    cs = orbit(elems, av)
    disp = displacements(elems, av)
    hs = []
    for i in range(1, len(elems)):
        if disp[i] < stabilizer_tol:
            raise ValueError(f"basepoint has a nontrivial stabilizer (element {elems.words[i]})")
        c = cs[i]
        hs.append(HalfSpace.make(c[1:] - av[1:], c[0] - av[0]))
    if restrict is not None:
        hs.extend(restrict.halfspaces)
    if remove_redundant_sides and n <= MAX_HULL_DIM:
        hs = remove_redundant(hs, n)
    else:
        hs = _dedupe_halfspaces(hs)
    return Polyhedron(hs, n)


def inradius_estimate(elems: GroupElementSet, a) -> float:
    """Radius of the largest ball about ``a`` inside its Dirichlet domain."""
    d = displacements(elems, a)[1:]
    return float(np.min(d) / 2.0) if d.size else math.inf


def side_count_profile(generators: Sequence, a, lengths: Iterable[int]) -> dict[int, int]:
    """Number of irredundant Dirichlet sides for each word length."""
    return {L: len(dirichlet_domain(word_ball(generators, L), a)) for L in lengths}


def nearest_translate(elems: GroupElementSet, x, a) -> int:
    """Index of the element ``g`` minimising ``d(x, g a)``."""
    xv, av = _coords(x), _coords(a)
    return int(np.argmax(-lorentz_dot(orbit(elems, av), xv)))


def proper_action_count(elems: GroupElementSet, x, r: float) -> int:
    """Number of ``g`` with ``g B(x, r)`` meeting ``B(x, r)``, i.e. ``d(x, g x) < 2r``."""
    if r <= 0:
        raise ValueError("radius must be positive")
    return int(np.sum(displacements(elems, x) < 2.0 * r))


def limit_points(elems: GroupElementSet, x, min_norm: float, angular_tol: float = 1e-6) -> list[IdealPoint]:
    """Boundary directions of orbit points whose Klein norm exceeds ``1 - min_norm``."""
    pts = orbit(elems, x)
    w = pts[:, 1:] / pts[:, :1]
    norms = np.linalg.norm(w, axis=1)
    found: list[np.ndarray] = []
    for wi, ni in sorted(zip(w, norms), key=lambda t: -t[1]):
        if ni <= 1.0 - min_norm or ni == 0.0:
            continue
        d = wi / ni
        if all(np.linalg.norm(d - f) > angular_tol for f in found):
            found.append(d)
    return [IdealPoint.from_direction(d) for d in found]


# ---------------------------------------------------------------------------
# convex hulls and cone projection
# ---------------------------------------------------------------------------


def _klein_array(points) -> np.ndarray:
    rows = []
    for p in points:
        if isinstance(p, (KleinPoint, BoundaryPoint)):
            rows.append(p.w)
        elif isinstance(p, IdealPoint):
            rows.append(p.direction)
        elif isinstance(p, HyperboloidPoint):
            rows.append(p.v[1:] / p.v[0])
        else:
            rows.append(np.asarray(p, dtype=float))
    return np.atleast_2d(np.array(rows, dtype=float))


def klein_convex_hull(points, tol: float = 1e-10) -> Polyhedron:
    """Euclidean convex hull of Klein (or boundary) points as a half-space list.

    Lower-dimensional inputs are returned with ``degenerate=True``: the affine
    hull is encoded by pairs of opposite half-spaces.
    """
    P = _klein_array(points)
    m, n = P.shape
    if n > MAX_HULL_DIM:
        raise ValueError(f"exact hulls are limited to n <= {MAX_HULL_DIM}")
    center = P.mean(axis=0)
    Q = P - center
    _, s, vt = np.linalg.svd(Q, full_matrices=True)
    rank = int(np.sum(s > tol * max(1.0, s[0] if s.size else 0.0)))
    basis, complement = vt[:rank], vt[rank:]
    local = Q @ basis.T
    hs: list[HalfSpace] = []
    for c in complement:
        off = float(c @ center)
        hs.append(HalfSpace.make(c, off))
        hs.append(HalfSpace.make(-c, -off))
    if rank == 1:
        t = local[:, 0]
        e = basis[0]
        hs.append(HalfSpace.make(e, float(t.max() + e @ center)))
        hs.append(HalfSpace.make(-e, float(-t.min() - e @ center)))
        verts = P[[int(np.argmin(t)), int(np.argmax(t))]]
    elif rank >= 2:
        hull = ConvexHull(local)
        sub = []
        for eq in hull.equations:
            normal_local, off = eq[:-1], -eq[-1]
            normal = normal_local @ basis
            sub.append(HalfSpace.make(normal, off + float(normal @ center)))
        hs.extend(_dedupe_halfspaces(sub, tol=1e-9))
        verts = P[np.sort(hull.vertices)]
    else:
        verts = P[:1]
    return Polyhedron(hs, n, vertices=verts, degenerate=rank < n, dimension=rank)


@dataclass(frozen=True)
class ConeSpec:
    """Closed convex cone given by generating rays (``v0 > 0``, ``v.v >= 0``)."""

    rays: tuple[tuple[float, ...], ...]

    def __init__(self, rays):
        rows = tuple(tuple(float(c) for c in r) for r in rays)
        if not rows:
            raise ValueError("a cone needs at least one ray")
        object.__setattr__(self, "rays", rows)

    @property
    def n(self) -> int:
        return len(self.rays[0]) - 1


@dataclass
class ConeProjection:
    points: list
    on_boundary: list[bool]
    hull: Polyhedron


def project_cone(cone: ConeSpec, eps: float = EPS_MODEL) -> ConeProjection:
    """Radially project cone rays into the closed Klein ball and take their hull."""
    pts = []
    flags = []
    for r in cone.rays:
        v = np.asarray(r, dtype=float)
        if v[0] <= 0:
            raise ValueError(f"ray {r} does not satisfy v0 > 0")
        q = float(lorentz_dot(v, v))
        scale = v[0] ** 2
        if q < -eps * scale:
            raise ValueError(f"ray {r} lies outside the closed positive cone (v.v = {q})")
        w = v[1:] / v[0]
        if abs(q) <= eps * scale:
            pts.append(BoundaryPoint(w / np.linalg.norm(w)))
            flags.append(True)
        else:
            pts.append(KleinPoint(w))
            flags.append(False)
    return ConeProjection(pts, flags, klein_convex_hull(pts))


# ---------------------------------------------------------------------------
# horoballs under the group
# ---------------------------------------------------------------------------


def horocusp_check(
    elems: GroupElementSet,
    h: Horoball,
    stabilizer_predicate: Callable[[Isometry, IdealPoint], bool] | None = None,
) -> bool:
    """True when every enumerated ``g`` outside the stabilizer of the base moves ``h`` off itself."""
    if stabilizer_predicate is None:
        def stabilizer_predicate(g, b):
            return same_ideal_point(apply_isometry(g, b), b, tol=1e-6)

    for g in elems:
        if stabilizer_predicate(g, h.base):
            continue
        if not horoballs_disjoint(apply_isometry(g, h), h):
            return False
    return True


def _antipode_klein(h: Horoball) -> np.ndarray:
    return poincare_to_klein(horoball_antipode(h))


def shrink_horoball(h: Horoball, C: Polyhedron, max_iter: int = 40, resolution: float = 1e-12, tol: float = 1e-12):
    """Lower the level until the point opposite the base lies in ``C``.

    Returns ``(horoball, bisection_steps)``; the level never increases.
    """
    if not C.contains(h.base.direction, tol=1e-9)[0]:
        raise ValueError("base point lies outside the closure of C")

    def ok(level: float) -> bool:
        return bool(C.contains(_antipode_klein(Horoball(h.base, level)), tol=tol)[0])

    if ok(h.level):
        return h, 0
    step = 1.0
    lo = h.level - step
    while not ok(lo):
        step *= 2.0
        lo = h.level - step
        if step > 1e4:
            raise ValueError("no shrinking places the antipode in C")
    hi = h.level
    steps = 0
    while hi - lo > resolution and steps < max_iter:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
        steps += 1
    return Horoball(h.base, lo), steps


def shrink_horoballs(horoballs: Sequence[Horoball], C: Polyhedron, max_iter: int = 40, resolution: float = 1e-12) -> list[Horoball]:
    return [shrink_horoball(h, C, max_iter, resolution)[0] for h in horoballs]


# ---------------------------------------------------------------------------
# paths in the complement of a horoball (n = 2)
# ---------------------------------------------------------------------------


def _to_uhp(v: np.ndarray, base: np.ndarray) -> complex:
    """Hyperboloid point -> upper half-plane, sending ``base`` to infinity."""
    p = v[1:] / (1.0 + v[0])
    z = complex(p[0], p[1]) / complex(base[0], base[1])
    return 1j * (1 + z) / (1 - z)


def _from_uhp(w: complex, base: np.ndarray) -> np.ndarray:
    z = (w - 1j) / (w + 1j) * complex(base[0], base[1])
    return poincare_to_hyperboloid(np.array([z.real, z.imag]))


def uhp_distance(w1: complex, w2: complex) -> float:
    return 2.0 * math.asinh(abs(w1 - w2) / (2.0 * math.sqrt(w1.imag * w2.imag)))


def _geodesic_max_height(w1: complex, w2: complex) -> float:
    """Largest imaginary part along the upper half-plane geodesic from w1 to w2."""
    if abs(w1.real - w2.real) < 1e-15 * max(1.0, abs(w1), abs(w2)):
        return max(w1.imag, w2.imag)
    c = (abs(w1) ** 2 - abs(w2) ** 2) / (2.0 * (w1.real - w2.real))
    radius = abs(w1 - c)
    lo, hi = sorted((w1.real, w2.real))
    if lo < c < hi:
        return radius
    return max(w1.imag, w2.imag)


@dataclass
class PathPiece:
    kind: str  # "geodesic" | "horocycle"
    start: np.ndarray
    end: np.ndarray
    length: float

    def to_json(self) -> dict:
        return {"kind": self.kind, "start": self.start.tolist(), "end": self.end.tolist(), "length": self.length}


@dataclass
class ComplementPath:
    length: float
    pieces: list[PathPiece] = field(default_factory=list)
    direct: bool = True

    def to_json(self) -> dict:
        return {"length": self.length, "direct": self.direct, "pieces": [p.to_json() for p in self.pieces]}


def complement_path(x, y, h: Horoball, tol: float = 1e-12) -> ComplementPath:
    """Shortest path from ``x`` to ``y`` in ``H^2`` minus the open horoball ``h``.

    Either the hyperbolic geodesic (when it misses the horoball) or a tangent
    geodesic, an arc of the bounding horocycle and a second tangent geodesic.
    Computed in the upper half-plane with the base point at infinity, where
    the horoball is ``{Im w > exp(-level)}`` and horocyclic length is
    Euclidean length divided by the height.
    """
    xv, yv = to_hyperboloid(x).v, to_hyperboloid(y).v
    if xv.size != 3 or h.n != 2:
        raise ValueError("complement paths are implemented for n = 2 only")
    base = h.base.direction
    h0 = math.exp(-h.level)
    wx, wy = _to_uhp(xv, base), _to_uhp(yv, base)
    for name, w in (("x", wx), ("y", wy)):
        if w.imag > h0 * (1 + 1e-9):
            raise ValueError(f"{name} lies strictly inside the horoball")

    if _geodesic_max_height(wx, wy) <= h0 * (1 + tol):
        d = uhp_distance(wx, wy)
        return ComplementPath(d, [PathPiece("geodesic", xv, yv, d)], direct=True)

    swap = wx.real > wy.real
    left, right = (wy, wx) if swap else (wx, wy)
    cl = left.real + math.sqrt(max(h0 * h0 - left.imag ** 2, 0.0))
    cr = right.real - math.sqrt(max(h0 * h0 - right.imag ** 2, 0.0))
    p, q = complex(cl, h0), complex(cr, h0)
    pieces = [
        PathPiece("geodesic", _from_uhp(left, base), _from_uhp(p, base), uhp_distance(left, p)),
        PathPiece("horocycle", _from_uhp(p, base), _from_uhp(q, base), abs(cr - cl) / h0),
        PathPiece("geodesic", _from_uhp(q, base), _from_uhp(right, base), uhp_distance(q, right)),
    ]
    if swap:
        pieces = [PathPiece(pc.kind, pc.end, pc.start, pc.length) for pc in reversed(pieces)]
    pieces[0].start, pieces[-1].end = xv, yv
    return ComplementPath(sum(pc.length for pc in pieces), pieces, direct=False)


def complement_path_oracle(x, y, h: Horoball, grid: int = 200, tol: float = 1e-13) -> float:
    """Brute-force length of the shortest detour around a horoball in ``H^2``.

    Minimises over the family ``x -> p -> q -> y`` (geodesic, horocyclic arc,
    geodesic) with ``p, q`` free on the horocycle, rejecting geodesic legs
    that enter the open horoball.  A ``grid x grid`` scan seeds a coordinate
    descent with halving steps.  The direct geodesic is included when feasible.
    """
    xv, yv = to_hyperboloid(x).v, to_hyperboloid(y).v
    base = h.base.direction
    h0 = math.exp(-h.level)
    wx, wy = _to_uhp(xv, base), _to_uhp(yv, base)
    best = uhp_distance(wx, wy) if _geodesic_max_height(wx, wy) <= h0 * (1 + 1e-12) else math.inf

    def leg(w: complex, s: float) -> float:
        p = complex(s, h0)
        if _geodesic_max_height(w, p) > h0 * (1 + 1e-12):
            return math.inf
        return uhp_distance(w, p)

    def total(s: float, t: float) -> float:
        return leg(wx, s) + abs(t - s) / h0 + leg(wy, t)

    lo = min(wx.real, wy.real) - 2 * h0
    hi = max(wx.real, wy.real) + 2 * h0
    ticks = np.linspace(lo, hi, grid)
    legs_x = np.array([leg(wx, s) for s in ticks])
    legs_y = np.array([leg(wy, t) for t in ticks])
    table = legs_x[:, None] + np.abs(ticks[None, :] - ticks[:, None]) / h0 + legs_y[None, :]
    i, j = np.unravel_index(np.argmin(table), table.shape)
    s, t, val = float(ticks[i]), float(ticks[j]), float(table[i, j])
    if math.isfinite(val):
        step = float(ticks[1] - ticks[0])
        while step > tol * max(1.0, h0):
            moved = False
            for ds, dt in ((step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step), (step, step), (-step, -step)):
                cand = total(s + ds, t + dt)
                if cand < val:
                    s, t, val, moved = s + ds, t + dt, cand, True
                    break
            if not moved:
                step /= 2.0
    return min(best, val)
