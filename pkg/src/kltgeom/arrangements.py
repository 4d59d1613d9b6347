"""Exact point/line configurations in P^2 over Q(zeta_3) and Calabi-Yau pair verdicts.

Numbers ``a + b*zeta`` with ``zeta^2 = -1 - zeta`` are stored exactly as pairs of
fractions.  Blowing up the points of a configuration gives a Picard lattice
(:mod:`kltgeom.lattice`) in which the strict transforms of the lines live; a
boundary divisor built from them is then checked for the Calabi-Yau,
coefficient and simple-normal-crossing conditions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

from .lattice import (
    DivisorClass,
    PicardLattice,
    canonical_class,
    curve_class,
    intersect,
    is_numerically_trivial,
)

Rational = Union[int, Fraction, str]


@dataclass(frozen=True)
class CycloNum:
    """Element ``a + b*zeta`` of Q(zeta), zeta a primitive cube root of unity."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __init__(self, a: Rational = 0, b: Rational = 0):
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))

    @classmethod
    def coerce(cls, x) -> "CycloNum":
        return x if isinstance(x, CycloNum) else cls(x)

    def __add__(self, other):
        o = CycloNum.coerce(other)
        return CycloNum(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return CycloNum(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-CycloNum.coerce(other))

    def __rsub__(self, other):
        return CycloNum.coerce(other) - self

    def __mul__(self, other):
        o = CycloNum.coerce(other)
        # (a + b z)(c + d z) = ac + (ad + bc) z + bd z^2,  z^2 = -1 - z
        bd = self.b * o.b
        return CycloNum(self.a * o.a - bd, self.a * o.b + self.b * o.a - bd)

    __rmul__ = __mul__

    def conjugate(self) -> "CycloNum":
        return CycloNum(self.a - self.b, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.a * self.b + self.b * self.b

    def inverse(self) -> "CycloNum":
        nrm = self.norm()
        if nrm == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conjugate()
        return CycloNum(c.a / nrm, c.b / nrm)

    def __truediv__(self, other):
        return self * CycloNum.coerce(other).inverse()

    def __pow__(self, k: int) -> "CycloNum":
        if k < 0:
            return self.inverse() ** (-k)
        out = CycloNum(1)
        for _ in range(k):
            out = out * self
        return out

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloNum(other)
        if not isinstance(other, CycloNum):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def is_rational(self) -> bool:
        return self.b == 0

    def to_json(self) -> dict:
        return {"a": f"{self.a.numerator}/{self.a.denominator}", "b": f"{self.b.numerator}/{self.b.denominator}"}

    @classmethod
    def from_json(cls, data) -> "CycloNum":
        if isinstance(data, dict):
            return cls(data.get("a", 0), data.get("b", 0))
        return cls(data)

    def __repr__(self):
        if self.b == 0:
            return str(self.a)
        return f"({self.a} + {self.b}z)"


ZETA = CycloNum(0, 1)


def _triple(coords) -> tuple[CycloNum, CycloNum, CycloNum]:
    t = tuple(CycloNum.coerce(c) for c in coords)
    if len(t) != 3:
        raise ValueError("homogeneous coordinates in P^2 need three entries")
    if not any(t):
        raise ValueError("homogeneous coordinates cannot all vanish")
    return t


def _proportional(u: Sequence[CycloNum], v: Sequence[CycloNum]) -> bool:
    return all(not (u[i] * v[j] - u[j] * v[i]) for i in range(3) for j in range(i + 1, 3))


def cross(u: Sequence[CycloNum], v: Sequence[CycloNum]) -> tuple[CycloNum, CycloNum, CycloNum]:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def det3(p: Sequence[CycloNum], q: Sequence[CycloNum], r: Sequence[CycloNum]) -> CycloNum:
    c = cross(q, r)
    return p[0] * c[0] + p[1] * c[1] + p[2] * c[2]


class _Projective:
    coords: tuple[CycloNum, CycloNum, CycloNum]

    def __init__(self, *coords):
        if len(coords) == 1:
            coords = coords[0]
        self.coords = _triple(coords)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return _proportional(self.coords, other.coords)

    def __hash__(self):
        # normalise by the first nonzero coordinate
        lead = next(c for c in self.coords if c)
        return hash(tuple(c / lead for c in self.coords))

    def __getitem__(self, i):
        return self.coords[i]

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self.coords]

    @classmethod
    def from_json(cls, data):
        return cls([CycloNum.from_json(c) for c in data])

    def __repr__(self):
        return f"{type(self).__name__}[{' : '.join(map(repr, self.coords))}]"


class ProjPoint(_Projective):
    """Point of P^2 with homogeneous coordinates ``[x : y : z]``."""


class ProjLine(_Projective):
    """Line ``l0 x + l1 y + l2 z = 0``."""

    @classmethod
    def through(cls, p: ProjPoint, q: ProjPoint) -> "ProjLine":
        if p == q:
            raise ValueError("a line needs two distinct points")
        return cls(cross(p.coords, q.coords))


def incidence(p: ProjPoint, line: ProjLine) -> bool:
    """Exact test ``line(p) == 0``."""
    s = p[0] * line[0] + p[1] * line[1] + p[2] * line[2]
    return not s


def collinear(p: ProjPoint, q: ProjPoint, r: ProjPoint) -> bool:
    return not det3(p.coords, q.coords, r.coords)


@dataclass
class Configuration:
    points: list[ProjPoint]
    lines: list[ProjLine]

    def __post_init__(self):
        for i, j in itertools.combinations(range(len(self.points)), 2):
            if self.points[i] == self.points[j]:
                raise ValueError(f"points {i} and {j} coincide")

    @cached_property
    def incidence(self) -> list[list[bool]]:
        """``incidence[i][j]``: point ``i`` lies on line ``j``."""
        return [[incidence(p, line) for line in self.lines] for p in self.points]

    def points_on_line(self, j: int) -> list[int]:
        return [i for i in range(len(self.points)) if self.incidence[i][j]]

    def lines_through_point(self, i: int) -> list[int]:
        return [j for j in range(len(self.lines)) if self.incidence[i][j]]

    def lattice(self) -> PicardLattice:
        return PicardLattice(len(self.points))

    def to_json(self) -> dict:
        return {"points": [p.to_json() for p in self.points], "lines": [ln.to_json() for ln in self.lines]}

    @classmethod
    def from_json(cls, data: dict) -> "Configuration":
        return cls(
            [ProjPoint.from_json(p) for p in data.get("points", [])],
            [ProjLine.from_json(ln) for ln in data.get("lines", [])],
        )


def build_dual_hesse() -> Configuration:
    """The 12 points ``[1 : z^i : z^j]``, ``[1:0:0]``, ``[0:1:0]``, ``[0:0:1]`` and nine lines.

    Lines are ordered ``y = z^k x``, then ``z = z^k x``, then ``z = z^k y``
    for ``k = 0, 1, 2``.
    """
    powers = [ZETA ** k for k in range(3)]
    points = [ProjPoint(1, powers[i], powers[j]) for i in range(3) for j in range(3)]
    points += [ProjPoint(1, 0, 0), ProjPoint(0, 1, 0), ProjPoint(0, 0, 1)]
    lines = [ProjLine(powers[k], -1, 0) for k in range(3)]
    lines += [ProjLine(powers[k], 0, -1) for k in range(3)]
    lines += [ProjLine(0, powers[k], -1) for k in range(3)]
    return Configuration(points, lines)


@dataclass(frozen=True)
class CollinearRecord:
    count: int
    witness: ProjLine | None


def max_collinear(points: Sequence[ProjPoint]) -> CollinearRecord:
    """Largest number of points on a common line (exhaustive over spanned lines)."""
    if len(points) < 2:
        raise ValueError("need at least two points")
    best, witness = 0, None
    for p, q in itertools.combinations(points, 2):
        line = ProjLine.through(p, q)
        count = sum(1 for r in points if incidence(r, line))
        if count > best:
            best, witness = count, line
    return CollinearRecord(best, witness)


def aut_sharp_trivial(points: Sequence[ProjPoint]) -> bool:
    """Criterion for the blow-up to have no automorphism acting trivially on Pic.

    Trivial unless all points but at most one are collinear (points in P^2,
    no infinitely near ones).
    """
    if len(points) < 2:
        return False
    return max_collinear(points).count < len(points) - 1


def general_position_4(points: Sequence[ProjPoint]) -> bool:
    """Whether some four of the points have no three collinear."""
    if len(points) < 4:
        raise ValueError("need at least four points")
    for quad in itertools.combinations(points, 4):
        if all(not collinear(*tri) for tri in itertools.combinations(quad, 3)):
            return True
    return False


def lines_through_coordinate_points_are_config_lines(cfg: Configuration) -> bool:
    """Any line joining a coordinate point and some ``[1 : z^i : z^j]`` is a line of ``cfg``."""
    coord = [p for p in cfg.points if sum(1 for c in p.coords if c) == 1]
    other = [p for p in cfg.points if p not in coord]
    return all(any(ProjLine.through(p, q) == ln for ln in cfg.lines) for p in coord for q in other)


def strict_transform_classes(cfg: Configuration) -> list[DivisorClass]:
    """``E0 - sum of E_i`` over the blown-up points on each line."""
    lat = cfg.lattice()
    return [curve_class(lat, 1, {i + 1: 1 for i in cfg.points_on_line(j)}) for j in range(len(cfg.lines))]


# ---------------------------------------------------------------------------
# pairs (X, Delta)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymbolicCurve:
    """Plane curve known only by degree and the blown-up points it passes through (simply)."""

    degree: int
    through: frozenset[int]  # 1-based point indices


@dataclass
class SymbolicArrangement:
    """Curves with declared incidences; ``concurrent`` lists index triples of
    curves meeting at a common point that is not blown up."""

    curves: list[SymbolicCurve]
    concurrent: list[tuple[int, int, int]] = field(default_factory=list)


@dataclass(frozen=True)
class Component:
    divisor: DivisorClass
    coefficient: Fraction
    reduced_irreducible: bool = True
    curve: int | None = None  # index into the attached arrangement

    def __init__(self, divisor, coefficient, reduced_irreducible=True, curve=None):
        object.__setattr__(self, "divisor", divisor)
        object.__setattr__(self, "coefficient", Fraction(coefficient))
        object.__setattr__(self, "reduced_irreducible", bool(reduced_irreducible))
        object.__setattr__(self, "curve", curve)


@dataclass
class PairSpec:
    lattice: PicardLattice
    components: list[Component]
    configuration: Configuration | SymbolicArrangement | None = None
    assume_snc: bool = False

    def delta(self) -> DivisorClass:
        total = self.lattice.zero()
        for c in self.components:
            total = total + c.coefficient * c.divisor
        return total

    def to_json(self) -> dict:
        out = {
            "k": self.lattice.k,
            "components": [
                {
                    "class": c.divisor.to_json(),
                    "coefficient": f"{c.coefficient.numerator}/{c.coefficient.denominator}",
                    "reduced_irreducible": c.reduced_irreducible,
                    "curve": c.curve,
                }
                for c in self.components
            ],
            "assume_snc": self.assume_snc,
        }
        if isinstance(self.configuration, Configuration):
            out["configuration"] = self.configuration.to_json()
        elif isinstance(self.configuration, SymbolicArrangement):
            out["arrangement"] = {
                "curves": [{"degree": c.degree, "through": sorted(c.through)} for c in self.configuration.curves],
                "concurrent": [list(t) for t in self.configuration.concurrent],
            }
        return out

    @classmethod
    def from_json(cls, data: dict) -> "PairSpec":
        lat = PicardLattice(int(data["k"]))
        comps = [
            Component(
                lat.divisor(c["class"]),
                Fraction(c["coefficient"]),
                c.get("reduced_irreducible", True),
                c.get("curve"),
            )
            for c in data.get("components", [])
        ]
        config = None
        if "configuration" in data:
            config = Configuration.from_json(data["configuration"])
        elif "arrangement" in data:
            arr = data["arrangement"]
            config = SymbolicArrangement(
                [SymbolicCurve(int(c["degree"]), frozenset(c["through"])) for c in arr["curves"]],
                [tuple(t) for t in arr.get("concurrent", [])],
            )
        return cls(lat, comps, config, bool(data.get("assume_snc", False)))


@dataclass
class Verdict:
    snc: str  # "holds" | "fails" | "unknown"
    coefficient_class: str  # "KLT" | "lc-only" | "fails"
    cy: bool
    overall: str  # "KLT-CY" | "lc-CY" | "not-CY" | "indeterminate"
    trace: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"snc": self.snc, "coefficient_class": self.coefficient_class, "cy": self.cy,
                "overall": self.overall, "trace": self.trace}


def _snc(spec: PairSpec, trace: list[str]) -> str:
    support = [c for c in spec.components if c.coefficient != 0]
    if spec.assume_snc:
        trace.append("snc: accepted from caller attestation (assume_snc)")
        return "holds"
    cfg = spec.configuration
    if cfg is None or any(c.curve is None for c in support):
        trace.append("snc: no arrangement attached to every component; not decided")
        return "unknown"
    if not all(c.reduced_irreducible for c in support):
        trace.append("snc: a component is not reduced and irreducible")
        return "fails"
    if isinstance(cfg, Configuration):
        degrees = {c.curve: 1 for c in support}
    else:
        degrees = {c.curve: cfg.curves[c.curve].degree for c in support}
    if any(d not in (1, 3) for d in degrees.values()) or sum(d == 3 for d in degrees.values()) > 1:
        trace.append("snc: only lines plus at most one cubic are handled combinatorially")
        return "unknown"
    for c1, c2 in itertools.combinations(support, 2):
        if c1.curve == c2.curve:
            trace.append("snc: repeated component")
            return "fails"
        m = intersect(spec.lattice, c1.divisor, c2.divisor)
        if m not in (0, 1):
            trace.append(f"snc: components {c1.curve},{c2.curve} meet with intersection number {m}")
            return "fails"
    curves = [c.curve for c in support]
    if isinstance(cfg, Configuration):
        for i, j, k in itertools.combinations(curves, 3):
            li, lj, lk = cfg.lines[i], cfg.lines[j], cfg.lines[k]
            if det3(li.coords, lj.coords, lk.coords):
                continue
            common = ProjPoint(cross(li.coords, lj.coords))
            if common not in cfg.points:
                trace.append(f"snc: lines {i},{j},{k} concur at an unblown point")
                return "fails"
    else:
        members = set(curves)
        for t in cfg.concurrent:
            if set(t) <= members:
                trace.append(f"snc: curves {t} declared concurrent at an unblown point")
                return "fails"
    trace.append("snc: pairwise intersection numbers in {0, 1}, no unblown triple points")
    return "holds"


def check_pair(spec: PairSpec) -> Verdict:
    """Calabi-Yau, KLT / log-canonical and SNC verdict for ``(X, Delta)``."""
    trace: list[str] = []
    for c in spec.components:
        spec.lattice._check(c.divisor)
        if c.coefficient < 0:
            raise ValueError("Delta must be effective: negative coefficient")
    k_plus_delta = canonical_class(spec.lattice) + spec.delta()
    cy = is_numerically_trivial(k_plus_delta)
    trace.append(f"cy: K + Delta = {k_plus_delta.to_json()}" + (" (zero)" if cy else " (nonzero)"))
    coeffs = [c.coefficient for c in spec.components if c.coefficient != 0]
    if all(c < 1 for c in coeffs):
        cls = "KLT"
    elif all(c <= 1 for c in coeffs):
        cls = "lc-only"
    else:
        cls = "fails"
    trace.append(f"coefficients: {[str(c) for c in coeffs]} -> {cls}")
    snc = _snc(spec, trace)
    if not cy or cls == "fails":
        overall = "not-CY"
    elif snc != "holds":
        overall = "indeterminate"
    else:
        overall = "KLT-CY" if cls == "KLT" else "lc-CY"
    return Verdict(snc, cls, cy, overall, trace)


def dual_hesse_pair() -> PairSpec:
    """``(X, 1/3 * sum of the nine strict transforms)`` on the 12-point blow-up."""
    cfg = build_dual_hesse()
    classes = strict_transform_classes(cfg)
    comps = [Component(c, Fraction(1, 3), True, j) for j, c in enumerate(classes)]
    return PairSpec(cfg.lattice(), comps, cfg)


COBLE_POINT_LABELS = ("p12", "p13", "p14", "p23", "p24", "p34", "q1", "q2", "q3", "a")


def build_coble_lattice_example() -> PairSpec:
    """Blow-up at ten points built from five general lines and a cubic.

    ``L_i`` (i <= 4) passes through the three ``p_ij`` with ``j != i``;
    ``L_5`` through ``q1, q2, q3, a``.  The returned pair is
    ``(X, 1/2 (R1 + R2 + R3 + R4) + R5)`` with ``R_i`` the strict transforms,
    in that component order.
    """
    idx = {label: i + 1 for i, label in enumerate(COBLE_POINT_LABELS)}
    lat = PicardLattice(len(COBLE_POINT_LABELS))
    curves = []
    for i in range(1, 5):
        through = frozenset(idx[f"p{min(i, j)}{max(i, j)}"] for j in range(1, 5) if j != i)
        curves.append(SymbolicCurve(1, through))
    curves.append(SymbolicCurve(1, frozenset(idx[s] for s in ("q1", "q2", "q3", "a"))))
    classes = [curve_class(lat, c.degree, {p: 1 for p in c.through}) for c in curves]
    for i, r in enumerate(classes):
        expected = -2 if i < 4 else -3
        if intersect(lat, r, r) != expected:
            raise AssertionError(f"R{i + 1}^2 = {intersect(lat, r, r)}, expected {expected}")
    coeffs = [Fraction(1, 2)] * 4 + [Fraction(1)]
    comps = [Component(r, c, True, i) for i, (r, c) in enumerate(zip(classes, coeffs))]
    return PairSpec(lat, comps, SymbolicArrangement(curves))


def coble_c6(spec: PairSpec) -> DivisorClass:
    """``C6 = R1 + R2 + R3 + R4 + 2 R5`` from the Coble pair."""
    r = [c.divisor for c in spec.components]
    return r[0] + r[1] + r[2] + r[3] + 2 * r[4]


def relabel_points(spec: PairSpec, perm: Sequence[int]) -> PairSpec:
    """Apply a permutation of blown-up points (``perm[i]`` is the new 1-based index of point ``i+1``)."""
    k = spec.lattice.k
    if sorted(perm) != list(range(1, k + 1)):
        raise ValueError("perm must be a permutation of 1..k")

    def move(d: DivisorClass) -> DivisorClass:
        coords = [d[0]] + [Fraction(0)] * k
        for i in range(k):
            coords[perm[i]] = d[i + 1]
        return DivisorClass(coords)

    comps = [Component(move(c.divisor), c.coefficient, c.reduced_irreducible, c.curve) for c in spec.components]
    cfg = spec.configuration
    if isinstance(cfg, Configuration):
        pts = [None] * k
        for i, p in enumerate(cfg.points):
            pts[perm[i] - 1] = p
        cfg = Configuration(pts, cfg.lines)
    elif isinstance(cfg, SymbolicArrangement):
        cfg = SymbolicArrangement(
            [SymbolicCurve(c.degree, frozenset(perm[p - 1] for p in c.through)) for c in cfg.curves],
            list(cfg.concurrent),
        )
    return PairSpec(spec.lattice, comps, cfg, spec.assume_snc)


def points_from_json(data: Iterable) -> list[ProjPoint]:
    return [ProjPoint.from_json(p) for p in data]
