"""Hyperboloid, Klein and Poincare models of hyperbolic n-space.

Coordinates follow the Picard-lattice basis: the Lorentz form is
``diag(+1, -1, ..., -1)`` and the hyperboloid is ``{v : v.v = 1, v0 > 0}``.
Array-level helpers (``lorentz_dot``, ``hyperboloid_to_klein``, ...) operate on
the last axis and broadcast over leading axes; the typed point classes wrap
single points and carry a ``model`` tag for serialization.

Distances are always measured on the hyperboloid; Klein and Poincare points are
pulled back first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

EPS_MODEL = 1e-9
EPS_CLASSIFY = 1e-9


# ---------------------------------------------------------------------------
# array-level helpers
# ---------------------------------------------------------------------------


def lorentz_gram(n: int) -> np.ndarray:
    """Gram matrix ``diag(1, -1, ..., -1)`` of size ``n + 1``."""
    g = -np.eye(n + 1)
    g[0, 0] = 1.0
    return g


def lorentz_dot(u, v) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return u[..., 0] * v[..., 0] - np.sum(u[..., 1:] * v[..., 1:], axis=-1)


def hyperboloid_to_klein(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x[..., 1:] / x[..., :1]


def klein_to_hyperboloid(w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    s = 1.0 - np.sum(w * w, axis=-1, keepdims=True)
    if np.any(s <= 0):
        raise ValueError("Klein points must lie strictly inside the unit ball")
    head = np.ones(w.shape[:-1] + (1,))
    return np.concatenate([head, w], axis=-1) / np.sqrt(s)


def hyperboloid_to_poincare(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x[..., 1:] / (1.0 + x[..., :1])


def poincare_to_hyperboloid(u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    r2 = np.sum(u * u, axis=-1, keepdims=True)
    if np.any(r2 >= 1):
        raise ValueError("Poincare points must lie strictly inside the unit ball")
    return np.concatenate([1.0 + r2, 2.0 * u], axis=-1) / (1.0 - r2)


def klein_to_poincare(w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    r2 = np.sum(w * w, axis=-1, keepdims=True)
    return w / (1.0 + np.sqrt(np.clip(1.0 - r2, 0.0, None)))


def poincare_to_klein(u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    r2 = np.sum(u * u, axis=-1, keepdims=True)
    return 2.0 * u / (1.0 + r2)


def hyperbolic_distance(x, y, eps: float = EPS_MODEL) -> np.ndarray:
    """Vectorised distance between hyperboloid points (last axis)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    p = lorentz_dot(x, y)
    scale = np.maximum(1.0, np.abs(x[..., 0] * y[..., 0]))
    if np.any(p < 1.0 - eps * scale):
        raise ValueError("Lorentz product below 1: inputs are not on the hyperboloid")
    # near coincident points: 2 asinh(|x - y|_L / 2) avoids the arccosh cancellation
    diff = x - y
    q = np.maximum(-lorentz_dot(diff, diff), 0.0)
    near = 2.0 * np.arcsinh(np.sqrt(q) / 2.0)
    far = np.arccosh(np.maximum(p, 1.0))
    return np.where(p < 2.0, near, far)


# ---------------------------------------------------------------------------
# typed points
# ---------------------------------------------------------------------------


def _vec(x) -> np.ndarray:
    a = np.array(x, dtype=float)
    if a.ndim != 1:
        raise ValueError(f"expected a vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("coordinates must be finite")
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class LorentzForm:
    n: int

    @property
    def gram(self) -> np.ndarray:
        return lorentz_gram(self.n)

    def __call__(self, u, v) -> float:
        return float(lorentz_dot(u, v))


@dataclass(frozen=True, eq=False)
class HyperboloidPoint:
    v: np.ndarray
    model = "hyperboloid"

    def __init__(self, v, eps: float = EPS_MODEL):
        a = _vec(v)
        if a.size < 2:
            raise ValueError("hyperboloid points need at least 2 coordinates")
        if a[0] <= 0:
            raise ValueError("hyperboloid points must satisfy v0 > 0")
        if abs(float(lorentz_dot(a, a)) - 1.0) > eps * max(1.0, a[0] ** 2):
            raise ValueError(f"v.v = {float(lorentz_dot(a, a))!r} is not 1")
        object.__setattr__(self, "v", a)

    @property
    def n(self) -> int:
        return self.v.size - 1

    @classmethod
    def origin(cls, n: int) -> "HyperboloidPoint":
        e = np.zeros(n + 1)
        e[0] = 1.0
        return cls(e)

    def to_json(self) -> dict:
        return {"model": self.model, "coords": self.v.tolist()}


@dataclass(frozen=True, eq=False)
class KleinPoint:
    w: np.ndarray
    model = "klein"

    def __init__(self, w):
        a = _vec(w)
        if float(a @ a) >= 1.0:
            raise ValueError("Klein points must satisfy |w| < 1")
        object.__setattr__(self, "w", a)

    @property
    def n(self) -> int:
        return self.w.size

    def to_json(self) -> dict:
        return {"model": self.model, "coords": self.w.tolist()}


@dataclass(frozen=True, eq=False)
class PoincarePoint:
    u: np.ndarray
    model = "poincare"

    def __init__(self, u):
        a = _vec(u)
        if float(a @ a) >= 1.0:
            raise ValueError("Poincare points must satisfy |u| < 1")
        object.__setattr__(self, "u", a)

    @property
    def n(self) -> int:
        return self.u.size

    def to_json(self) -> dict:
        return {"model": self.model, "coords": self.u.tolist()}


@dataclass(frozen=True, eq=False)
class IdealPoint:
    """Point at infinity, stored as an isotropic vector with ``b0 = 1``."""

    b: np.ndarray
    model = "ideal"

    def __init__(self, b, eps: float = EPS_MODEL):
        a = _vec(b)
        if a[0] <= 0:
            raise ValueError("ideal points need b0 > 0")
        a = a / a[0]
        if abs(float(lorentz_dot(a, a))) > eps:
            raise ValueError("ideal points must be isotropic")
        a.setflags(write=False)
        object.__setattr__(self, "b", a)

    @classmethod
    def from_direction(cls, direction) -> "IdealPoint":
        d = np.asarray(direction, dtype=float)
        d = d / np.linalg.norm(d)
        return cls(np.concatenate([[1.0], d]))

    @property
    def direction(self) -> np.ndarray:
        return self.b[1:]

    @property
    def n(self) -> int:
        return self.b.size - 1

    def to_json(self) -> dict:
        return {"model": self.model, "coords": self.b.tolist()}


@dataclass(frozen=True, eq=False)
class BoundaryPoint:
    """Klein-model image of an ideal point: a unit vector."""

    w: np.ndarray
    model = "klein-boundary"

    def __init__(self, w, eps: float = EPS_MODEL):
        a = _vec(w)
        if abs(float(a @ a) - 1.0) > eps:
            raise ValueError("boundary points must have unit norm")
        object.__setattr__(self, "w", a)

    def to_json(self) -> dict:
        return {"model": self.model, "coords": self.w.tolist()}


ModelPoint = Union[HyperboloidPoint, KleinPoint, PoincarePoint]


@dataclass(frozen=True, eq=False)
class Isometry:
    """Orthochronous Lorentz transformation, acting on column vectors."""

    m: np.ndarray

    def __init__(self, m, eps: float = EPS_MODEL):
        a = np.array(m, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 2:
            raise ValueError(f"isometries are square matrices of size >= 2, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix entries must be finite")
        j = lorentz_gram(a.shape[0] - 1)
        scale = max(1.0, float(np.max(np.abs(a))) ** 2)
        if np.max(np.abs(a.T @ j @ a - j)) > eps * scale:
            raise ValueError("matrix does not preserve the Lorentz form")
        if a[0, 0] <= 0:
            raise ValueError("matrix is not orthochronous")
        a.setflags(write=False)
        object.__setattr__(self, "m", a)

    @property
    def n(self) -> int:
        return self.m.shape[0] - 1

    @classmethod
    def identity(cls, n: int) -> "Isometry":
        return cls(np.eye(n + 1))

    def inverse(self) -> "Isometry":
        j = lorentz_gram(self.n)
        return Isometry(j @ self.m.T @ j)

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return Isometry(self.m @ other.m)

    def to_json(self) -> dict:
        return {"model": "isometry", "matrix": self.m.tolist()}


@dataclass(frozen=True)
class Horoball:
    """Open horoball ``{x : busemann(base, x) < level}``."""

    base: IdealPoint
    level: float

    def __post_init__(self):
        if not math.isfinite(self.level):
            raise ValueError("horoball level must be finite")

    @property
    def n(self) -> int:
        return self.base.n

    def to_json(self) -> dict:
        return {"model": "horoball", "base": self.base.b.tolist(), "level": self.level}


@dataclass(frozen=True)
class GeodesicSegment:
    a: HyperboloidPoint
    b: HyperboloidPoint
    length: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "length", distance(self.a, self.b))


def point_from_json(data: dict):
    """Rebuild a tagged point, isometry or horoball from its JSON form."""
    model = data.get("model")
    if model == "isometry":
        return Isometry(data["matrix"])
    if model == "horoball":
        return Horoball(IdealPoint(data["base"]), float(data["level"]))
    kinds = {
        "hyperboloid": HyperboloidPoint,
        "klein": KleinPoint,
        "poincare": PoincarePoint,
        "ideal": IdealPoint,
        "klein-boundary": BoundaryPoint,
    }
    if model not in kinds:
        raise ValueError(f"unknown model tag {model!r}")
    return kinds[model](data["coords"])


# ---------------------------------------------------------------------------
# conversions and metric
# ---------------------------------------------------------------------------


def _hyperboloid_coords(x) -> np.ndarray:
    if isinstance(x, HyperboloidPoint):
        return x.v
    if isinstance(x, KleinPoint):
        return klein_to_hyperboloid(x.w)
    if isinstance(x, PoincarePoint):
        return poincare_to_hyperboloid(x.u)
    raise TypeError(f"not a model point: {type(x).__name__}")


def distance(u: ModelPoint, v: ModelPoint, eps: float = EPS_MODEL) -> float:
    """Hyperbolic distance ``argcosh(u.v)``, measured on the hyperboloid."""
    return float(hyperbolic_distance(_hyperboloid_coords(u), _hyperboloid_coords(v), eps))


def to_klein(v):
    """Radial projection onto the hyperplane ``v0 = 1``.

    Hyperboloid points go to :class:`KleinPoint`; ideal points (and any
    isotropic vector with ``v0 > 0``) go to :class:`BoundaryPoint`.
    """
    if isinstance(v, KleinPoint):
        return v
    if isinstance(v, PoincarePoint):
        return KleinPoint(poincare_to_klein(v.u))
    if isinstance(v, IdealPoint):
        return BoundaryPoint(v.b[1:])
    x = v.v if isinstance(v, HyperboloidPoint) else np.asarray(v, dtype=float)
    if x[0] <= 0:
        raise ValueError("radial projection needs v0 > 0")
    w = hyperboloid_to_klein(x)
    if isinstance(v, HyperboloidPoint):
        return KleinPoint(w)
    q = float(lorentz_dot(x, x))
    if abs(q) <= EPS_MODEL * max(1.0, x[0] ** 2):
        return BoundaryPoint(w / np.linalg.norm(w))
    if q > 0:
        return KleinPoint(w)
    raise ValueError("vector lies outside the closed light cone")


def to_poincare(v) -> PoincarePoint:
    """Stereographic projection from the south pole ``-e0``."""
    if isinstance(v, PoincarePoint):
        return v
    return PoincarePoint(hyperboloid_to_poincare(_hyperboloid_coords(v)))


def to_hyperboloid(p) -> HyperboloidPoint:
    if isinstance(p, HyperboloidPoint):
        return p
    if isinstance(p, KleinPoint):
        return HyperboloidPoint(klein_to_hyperboloid(p.w))
    if isinstance(p, PoincarePoint):
        return HyperboloidPoint(poincare_to_hyperboloid(p.u))
    raise TypeError(f"cannot lift {type(p).__name__} to the hyperboloid")


def convert(p, model: str):
    """Convert a model point to the named model."""
    targets = {"hyperboloid": to_hyperboloid, "klein": to_klein, "poincare": to_poincare}
    if model not in targets:
        raise ValueError(f"unknown model {model!r}")
    return targets[model](p)


def geodesic_point(seg: GeodesicSegment, t: float) -> HyperboloidPoint:
    """Unit-speed point ``gamma(t)`` on the segment, ``0 <= t <= length``."""
    ell = seg.length
    if not -1e-12 <= t <= ell + 1e-12:
        raise ValueError(f"parameter {t} outside [0, {ell}]")
    if ell == 0.0:
        return seg.a
    t = min(max(t, 0.0), ell)
    v = (math.sinh(ell - t) * seg.a.v + math.sinh(t) * seg.b.v) / math.sinh(ell)
    return HyperboloidPoint(v)


# ---------------------------------------------------------------------------
# CAT(0) comparison
# ---------------------------------------------------------------------------


def comparison_triangle(a, b, c, eps: float = EPS_MODEL) -> np.ndarray:
    """Euclidean comparison triangle as a ``(3, 2)`` array ``[A, B, C]``."""
    ab, ac, bc = distance(a, b), distance(a, c), distance(b, c)
    return _planar_triangle(ab, ac, bc, eps)


def _planar_triangle(ab: float, ac: float, bc: float, eps: float = EPS_MODEL) -> np.ndarray:
    if not all(math.isfinite(s) for s in (ab, ac, bc)):
        raise ValueError("side lengths must be finite")
    slack = eps * max(1.0, ab, ac, bc)
    if ab > ac + bc + slack or ac > ab + bc + slack or bc > ab + ac + slack:
        raise ValueError("side lengths violate the triangle inequality")
    if ab == 0.0:
        return np.array([[0.0, 0.0], [0.0, 0.0], [ac, 0.0]])
    cx = (ab * ab + ac * ac - bc * bc) / (2.0 * ab)
    cy = math.sqrt(max(ac * ac - cx * cx, 0.0))
    return np.array([[0.0, 0.0], [ab, 0.0], [cx, cy]])


@dataclass
class Cat0Report:
    max_violation: float
    samples: int
    worst: tuple | None = None


def cat0_check(a, b, c, samples: int = 100, seed: int = 0) -> Cat0Report:
    """Sample ``d(p, q) - |P - Q|`` over pairs of points on two sides.

    For each of the three vertices, ``samples`` random pairs ``(p, q)`` are
    drawn on the two sides leaving that vertex; ``P, Q`` are the matching
    points on the comparison triangle.  Hyperbolic space is CAT(0), so the
    reported maximum should never be meaningfully positive.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    pts = [to_hyperboloid(a), to_hyperboloid(b), to_hyperboloid(c)]
    tri = comparison_triangle(*pts)
    worst = -math.inf
    where = None
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        s1 = GeodesicSegment(pts[i], pts[j])
        s2 = GeodesicSegment(pts[i], pts[k])
        for s, t in rng.random((samples, 2)):
            p = geodesic_point(s1, s * s1.length)
            q = geodesic_point(s2, t * s2.length)
            P = tri[i] + s * (tri[j] - tri[i])
            Q = tri[i] + t * (tri[k] - tri[i])
            viol = distance(p, q) - float(np.linalg.norm(P - Q))
            if viol > worst:
                worst, where = viol, (i, float(s), float(t))
    return Cat0Report(max_violation=worst, samples=3 * samples, worst=where)


# ---------------------------------------------------------------------------
# isometries
# ---------------------------------------------------------------------------


def apply_isometry(g: Isometry, x):
    """Apply ``g`` to a point in any model; the result stays in that model."""
    if isinstance(x, HyperboloidPoint):
        return HyperboloidPoint(g.m @ x.v)
    if isinstance(x, KleinPoint):
        return to_klein(HyperboloidPoint(g.m @ klein_to_hyperboloid(x.w)))
    if isinstance(x, PoincarePoint):
        return to_poincare(HyperboloidPoint(g.m @ poincare_to_hyperboloid(x.u)))
    if isinstance(x, IdealPoint):
        return IdealPoint(g.m @ x.b)
    if isinstance(x, Horoball):
        gb = g.m @ x.base.b
        return Horoball(IdealPoint(gb), x.level - math.log(gb[0]))
    raise TypeError(f"cannot apply an isometry to {type(x).__name__}")


def boost(n: int, t: float, axis: int = 1) -> Isometry:
    """Hyperbolic translation by ``t`` along the ``e0, e_axis`` plane."""
    m = np.eye(n + 1)
    ch, sh = math.cosh(t), math.sinh(t)
    m[0, 0] = m[axis, axis] = ch
    m[0, axis] = m[axis, 0] = sh
    return Isometry(m)


def rotation(n: int, i: int, j: int, theta: float) -> Isometry:
    """Rotation by ``theta`` in the spatial plane ``(e_i, e_j)``; fixes ``e0``."""
    if not (1 <= i <= n and 1 <= j <= n and i != j):
        raise ValueError("rotation axes must be distinct spatial indices")
    m = np.eye(n + 1)
    c, s = math.cos(theta), math.sin(theta)
    m[i, i] = m[j, j] = c
    m[i, j], m[j, i] = -s, s
    return Isometry(m)


def sl2_to_o12(g) -> Isometry:
    """Image of ``g`` in SL2(R) under the adjoint map to SO+(1, 2).

    ``(t, x, y)`` is identified with the symmetric matrix
    ``[[t + x, y], [y, t - x]]`` whose determinant is the Lorentz form;
    ``g`` acts by ``X -> g X g^T``.
    """
    g = np.asarray(g, dtype=float)
    if abs(np.linalg.det(g) - 1.0) > 1e-12:
        raise ValueError("matrix is not in SL2")

    def sym(v):
        t, x, y = v
        return np.array([[t + x, y], [y, t - x]])

    def unsym(s):
        return np.array([(s[0, 0] + s[1, 1]) / 2, (s[0, 0] - s[1, 1]) / 2, s[0, 1]])

    cols = [unsym(g @ sym(e) @ g.T) for e in np.eye(3)]
    return Isometry(np.column_stack(cols))


def random_isometry(n: int, rng: np.random.Generator, max_boost: float = 1.5, factors: int = 4) -> Isometry:
    """Product of random coordinate boosts and spatial rotations."""
    m = np.eye(n + 1)
    for _ in range(factors):
        m = m @ boost(n, rng.uniform(-max_boost, max_boost), axis=int(rng.integers(1, n + 1))).m
        if n >= 2:
            i, j = rng.choice(np.arange(1, n + 1), size=2, replace=False)
            m = m @ rotation(n, int(i), int(j), rng.uniform(0, 2 * math.pi)).m
    return Isometry(m)


def random_hyperboloid_points(n: int, size: int, rng: np.random.Generator, max_radius: float = 3.0) -> np.ndarray:
    """``size`` points at distance uniform in ``[0, max_radius]`` from ``e0``."""
    d = rng.normal(size=(size, n))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    r = rng.uniform(0.0, max_radius, size=(size, 1))
    return np.concatenate([np.cosh(r), np.sinh(r) * d], axis=1)


@dataclass(frozen=True)
class IsometryType:
    kind: str  # "elliptic" | "parabolic" | "hyperbolic"
    translation_length: float


def classify_isometry(g: Isometry, eps: float = EPS_CLASSIFY) -> IsometryType:
    """Elliptic / parabolic / hyperbolic type from spectral data.

    Elliptic elements fix a timelike vector, parabolic ones fix an isotropic
    vector and no timelike one, hyperbolic ones have spectral radius
    ``e^l > 1``.  The fixed subspace ``ker(m - I)`` is found by SVD and the
    Lorentz form restricted to it decides between the first two.  A parabolic
    element's unipotent Jordan block of size 3 spreads the computed eigenvalues
    by about ``(machine eps * |m|)^(1/3)``, so the spectral threshold is the
    larger of ``eps`` and that spread.
    """
    m = g.m
    size = m.shape[0]
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(m - np.eye(size))) <= eps:
        return IsometryType("elliptic", 0.0)
    _, sv, vt = np.linalg.svd(m - np.eye(size))
    null_tol = 1e-8 * scale
    kernel = vt[sv <= null_tol].T
    if kernel.shape[1]:
        restricted = kernel.T @ lorentz_gram(size - 1) @ kernel
        top = float(np.max(np.linalg.eigvalsh((restricted + restricted.T) / 2)))
        if top > 1e-7:
            return IsometryType("elliptic", 0.0)
        if top >= -1e-7:
            return IsometryType("parabolic", 0.0)
    rho = float(np.max(np.abs(np.linalg.eigvals(m))))
    spread = 10.0 * (np.finfo(float).eps * scale) ** (1.0 / 3.0)
    if rho > 1.0 + max(eps, spread):
        return IsometryType("hyperbolic", math.log(rho))
    return IsometryType("parabolic", 0.0)


# ---------------------------------------------------------------------------
# horoballs
# ---------------------------------------------------------------------------


def busemann(b: IdealPoint, x) -> float:
    """``log(x . b)``; decreases along geodesics running into ``b``."""
    v = _hyperboloid_coords(x)
    p = float(lorentz_dot(v, b.b))
    if p <= 0:
        raise ValueError("x.b must be positive")
    return math.log(p)


def in_horoball(h: Horoball, x) -> bool:
    return busemann(h.base, x) < h.level


@dataclass(frozen=True)
class EuclideanBall:
    center: np.ndarray
    radius: float


def horoball_to_euclidean(h: Horoball) -> EuclideanBall:
    """Poincare-ball picture of a horoball: a Euclidean ball tangent at the base.

    With ``k = exp(level)`` the sublevel set ``x.b < k`` is the ball of radius
    ``k / (1 + k)`` centred at ``u / (1 + k)``, ``u`` the base direction.
    """
    k = math.exp(h.level)
    u = h.base.direction
    return EuclideanBall(center=u / (1.0 + k), radius=k / (1.0 + k))


def horoball_antipode(h: Horoball) -> np.ndarray:
    """Poincare coordinates of the point of the horosphere opposite the base."""
    ball = horoball_to_euclidean(h)
    return (1.0 - 2.0 * ball.radius) * h.base.direction


def same_ideal_point(a: IdealPoint, b: IdealPoint, tol: float = 1e-9) -> bool:
    return float(np.max(np.abs(a.direction - b.direction))) <= tol


def horoballs_disjoint(h1: Horoball, h2: Horoball, gap: float = 1e-12) -> bool:
    """True when the closures of the two horoballs are disjoint."""
    if same_ideal_point(h1.base, h2.base):
        return False
    e1, e2 = horoball_to_euclidean(h1), horoball_to_euclidean(h2)
    return float(np.linalg.norm(e1.center - e2.center)) > e1.radius + e2.radius + gap
