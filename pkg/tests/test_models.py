import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kltgeom import models as M

E0 = M.HyperboloidPoint.origin(2)

# Poincare-ball distances evaluated at 50 digits with mpmath through
# arccosh(1 + 2|u - v|^2 / ((1 - |u|^2)(1 - |v|^2))), frozen here.
POINCARE_ORACLE = [
    ([0.1, 0.2], [-0.3, 0.5], 1.1912039641950991472),
    ([0.9, 0.0], [0.0, 0.9], 5.2012329276861443045),
    ([0.25, -0.5, 0.125], [0.5, 0.5, -0.25], 2.9078569100797214463),
]


def axis_point(t, n=2):
    v = np.zeros(n + 1)
    v[0], v[1] = math.cosh(t), math.sinh(t)
    return M.HyperboloidPoint(v)


seeds = st.integers(min_value=0, max_value=2**32 - 1)


# -- distance and conversions ------------------------------------------------


def test_distance_trivial_and_axis():
    assert M.distance(E0, E0) == 0.0
    assert M.distance(E0, axis_point(2.0)) == pytest.approx(2.0, abs=1e-14)


@pytest.mark.parametrize("u,v,expected", POINCARE_ORACLE)
def test_distance_against_poincare_oracle(u, v, expected):
    assert M.distance(M.PoincarePoint(u), M.PoincarePoint(v)) == pytest.approx(expected, rel=1e-14)


def test_distance_symmetric():
    rng = np.random.default_rng(3)
    x = M.random_hyperboloid_points(3, 100, rng)
    y = M.random_hyperboloid_points(3, 100, rng)
    assert np.array_equal(M.hyperbolic_distance(x, y), M.hyperbolic_distance(y, x))


def test_distance_small_separation_is_accurate():
    a = axis_point(1.0)
    b = axis_point(1.0 + 1e-9)
    assert M.distance(a, b) == pytest.approx(1e-9, rel=1e-6)


def test_to_klein_examples():
    assert np.allclose(M.to_klein(E0).w, 0.0)
    assert M.to_klein(axis_point(2.0)).w == pytest.approx([math.tanh(2.0), 0.0], abs=1e-15)
    b = M.to_klein(M.IdealPoint([1.0, 1.0, 0.0]))
    assert isinstance(b, M.BoundaryPoint)
    assert np.linalg.norm(b.w) == pytest.approx(1.0)
    assert b.w == pytest.approx([1.0, 0.0])


def test_to_poincare_half_angle():
    assert M.to_poincare(axis_point(2.0)).u == pytest.approx([math.tanh(1.0), 0.0], abs=1e-15)
    assert np.allclose(M.to_poincare(E0).u, 0.0)


def test_to_hyperboloid_examples():
    v = M.to_hyperboloid(M.KleinPoint([math.tanh(2.0), 0.0])).v
    assert v == pytest.approx([math.cosh(2.0), math.sinh(2.0), 0.0], rel=1e-14)
    p = M.to_hyperboloid(M.PoincarePoint([0.5, 0.0]))
    assert M.distance(E0, p) == pytest.approx(math.log(3.0), abs=1e-15)


@pytest.mark.parametrize(
    "bad",
    [
        lambda: M.HyperboloidPoint([2.0, 0.0, 0.0]),
        lambda: M.HyperboloidPoint([-1.0, 0.0, 0.0]),
        lambda: M.KleinPoint([1.0, 0.0]),
        lambda: M.PoincarePoint([0.6, 0.9]),
        lambda: M.IdealPoint([1.0, 0.5, 0.0]),
        lambda: M.Isometry(np.diag([-1.0, 1.0, 1.0])),
        lambda: M.Isometry(np.diag([1.0, 2.0, 1.0])),
    ],
)
def test_invalid_inputs_raise(bad):
    with pytest.raises(ValueError):
        bad()


@pytest.mark.parametrize("n", [1, 2, 3, 12])
def test_roundtrips(n):
    rng = np.random.default_rng(n)
    x = M.random_hyperboloid_points(n, 2000, rng)
    assert np.max(np.abs(M.klein_to_hyperboloid(M.hyperboloid_to_klein(x)) - x)) <= 1e-12
    assert np.max(np.abs(M.poincare_to_hyperboloid(M.hyperboloid_to_poincare(x)) - x)) <= 1e-12


def test_json_roundtrip_of_tagged_points():
    for p in (axis_point(0.7), M.KleinPoint([0.1, 0.2]), M.PoincarePoint([0.3, -0.1]), M.IdealPoint([1, 0, 1])):
        q = M.point_from_json(p.to_json())
        assert type(q) is type(p)
        assert q.to_json() == p.to_json()
    h = M.Horoball(M.IdealPoint([1, 1, 0]), 0.3)
    assert M.point_from_json(h.to_json()).level == 0.3


@pytest.mark.parametrize("target", ["hyperboloid", "klein", "poincare"])
def test_convert_preserves_distance(target):
    a, b = axis_point(0.4), M.HyperboloidPoint([math.cosh(1.0), 0.0, math.sinh(1.0)])
    assert M.distance(M.convert(a, target), M.convert(b, target)) == pytest.approx(M.distance(a, b), abs=1e-13)


# -- geodesics and CAT(0) ----------------------------------------------------


def test_geodesic_endpoints_and_midpoint():
    b = axis_point(2.0)
    seg = M.GeodesicSegment(E0, b)
    assert M.geodesic_point(seg, 0.0).v == pytest.approx(E0.v)
    assert M.geodesic_point(seg, seg.length).v == pytest.approx(b.v)
    assert M.geodesic_point(seg, 1.0).v == pytest.approx([math.cosh(1.0), math.sinh(1.0), 0.0], rel=1e-14)
    with pytest.raises(ValueError):
        M.geodesic_point(seg, 3.0)


def test_geodesic_unit_speed():
    rng = np.random.default_rng(11)
    a, b = (M.HyperboloidPoint(v) for v in M.random_hyperboloid_points(3, 2, rng))
    seg = M.GeodesicSegment(a, b)
    for s, t in rng.random((100, 2)) * seg.length:
        assert M.distance(M.geodesic_point(seg, s), M.geodesic_point(seg, t)) == pytest.approx(abs(s - t), abs=1e-9)


def test_comparison_triangle_equilateral():
    tri = M._planar_triangle(1.0, 1.0, 1.0)
    assert tri[2] == pytest.approx([0.5, math.sqrt(3) / 2])


def test_comparison_triangle_side_lengths():
    rng = np.random.default_rng(5)
    pts = [M.HyperboloidPoint(v) for v in M.random_hyperboloid_points(2, 3, rng)]
    tri = M.comparison_triangle(*pts)
    for i, j in ((0, 1), (0, 2), (1, 2)):
        assert np.linalg.norm(tri[i] - tri[j]) == pytest.approx(M.distance(pts[i], pts[j]), abs=1e-12)


def test_cat0_degenerate_triangles():
    seg = M.GeodesicSegment(E0, axis_point(2.0))
    mid = M.geodesic_point(seg, 0.8)
    rep = M.cat0_check(E0, mid, axis_point(2.0), samples=50)
    assert abs(rep.max_violation) <= 1e-9
    rep = M.cat0_check(E0, E0, axis_point(1.0), samples=50)
    assert abs(rep.max_violation) <= 1e-9


def test_cat0_random_triangle():
    rng = np.random.default_rng(2)
    pts = [M.HyperboloidPoint(v) for v in M.random_hyperboloid_points(2, 3, rng)]
    assert M.cat0_check(*pts, samples=100).max_violation <= 1e-9


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_cat0_property(seed):
    rng = np.random.default_rng(seed)
    pts = [M.HyperboloidPoint(v) for v in M.random_hyperboloid_points(3, 3, rng)]
    assert M.cat0_check(*pts, samples=10, seed=seed).max_violation <= 1e-9


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_klein_images_of_geodesics_are_collinear(seed):
    rng = np.random.default_rng(seed)
    a, b = (M.HyperboloidPoint(v) for v in M.random_hyperboloid_points(3, 2, rng))
    seg = M.GeodesicSegment(a, b)
    w = np.array([M.to_klein(M.geodesic_point(seg, t)).w for t in np.linspace(0, seg.length, 10)])
    # rank-1 after centring on the first point
    s = np.linalg.svd(w[1:] - w[0], compute_uv=False)
    assert (s[1] if s.size > 1 else 0.0) <= 1e-9


# -- isometries ---------------------------------------------------------------


def test_apply_isometry_examples():
    g = M.boost(2, 2.0)
    assert M.apply_isometry(g, E0).v == pytest.approx([math.cosh(2.0), math.sinh(2.0), 0.0])
    x = M.KleinPoint([0.2, -0.3])
    assert M.apply_isometry(M.Isometry.identity(2), x).w == pytest.approx(x.w)


def test_apply_isometry_composes():
    rng = np.random.default_rng(8)
    g, h = M.random_isometry(3, rng), M.random_isometry(3, rng)
    x = M.PoincarePoint([0.1, 0.2, -0.3])
    lhs = M.apply_isometry(g, M.apply_isometry(h, x)).u
    rhs = M.apply_isometry(g @ h, x).u
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_inverse():
    g = M.random_isometry(4, np.random.default_rng(1))
    assert (g @ g.inverse()).m == pytest.approx(np.eye(5), abs=1e-10)


@pytest.mark.parametrize("n", [2, 3, 12])
def test_distance_invariance(n):
    rng = np.random.default_rng(100 + n)
    x = M.random_hyperboloid_points(n, 500, rng)
    y = M.random_hyperboloid_points(n, 500, rng)
    g = M.random_isometry(n, rng).m
    assert np.max(np.abs(M.hyperbolic_distance(x @ g.T, y @ g.T) - M.hyperbolic_distance(x, y))) <= 1e-9


def test_classify_examples():
    assert M.classify_isometry(M.Isometry.identity(3)).kind == "elliptic"
    t = M.classify_isometry(M.boost(2, 2.0))
    assert t.kind == "hyperbolic" and t.translation_length == pytest.approx(2.0, abs=1e-12)
    assert M.classify_isometry(M.sl2_to_o12([[1.0, 1.0], [0.0, 1.0]])).kind == "parabolic"
    assert M.classify_isometry(M.rotation(3, 1, 2, 0.3)).kind == "elliptic"


@settings(max_examples=50, deadline=None)
@given(seeds, st.sampled_from(["boost", "rotation", "parabolic"]))
def test_classification_is_conjugation_invariant(seed, kind):
    rng = np.random.default_rng(seed)
    g = {
        "boost": M.boost(2, 1.3),
        "rotation": M.rotation(2, 1, 2, 0.9),
        "parabolic": M.sl2_to_o12([[1.0, 0.7], [0.0, 1.0]]),
    }[kind]
    h = M.random_isometry(2, rng, max_boost=1.0, factors=2)
    conj = h @ g @ h.inverse()
    a, b = M.classify_isometry(g), M.classify_isometry(conj)
    assert a.kind == b.kind
    assert a.translation_length == pytest.approx(b.translation_length, abs=1e-9)


# -- horoballs ----------------------------------------------------------------


def test_busemann_examples():
    b = M.IdealPoint([1.0, 1.0, 0.0])
    assert M.busemann(b, E0) == 0.0
    for s in (0.5, 1.0, 3.0):
        assert M.busemann(b, axis_point(s)) == pytest.approx(-s, abs=1e-12)


def test_busemann_difference_invariant_under_stabilizer():
    b = M.IdealPoint([1.0, 1.0, 0.0])
    # a boost along the axis through b and a parabolic fixing b
    stab = [M.boost(2, 0.7), M.sl2_to_o12([[1.0, 0.4], [0.0, 1.0]])]
    stab = [g for g in stab if M.same_ideal_point(M.apply_isometry(g, b), b)]
    assert len(stab) == 2
    rng = np.random.default_rng(4)
    for x, y in M.random_hyperboloid_points(2, 40, rng).reshape(20, 2, 3):
        x, y = M.HyperboloidPoint(x), M.HyperboloidPoint(y)
        for g in stab:
            before = M.busemann(b, x) - M.busemann(b, y)
            after = M.busemann(b, M.apply_isometry(g, x)) - M.busemann(b, M.apply_isometry(g, y))
            assert after == pytest.approx(before, abs=1e-9)


@pytest.mark.parametrize("direction", [[1.0, 0.0], [0.6, 0.8], [0.0, 0.0, 1.0]])
def test_horoball_euclidean_ball(direction):
    u = np.asarray(direction)
    ball = M.horoball_to_euclidean(M.Horoball(M.IdealPoint.from_direction(u), -math.log(3.0)))
    assert ball.radius == pytest.approx(0.25, abs=1e-12)
    assert ball.center == pytest.approx(0.75 * u, abs=1e-12)


def test_horoball_radius_shrinks_with_level():
    b = M.IdealPoint([1.0, 0.0, 1.0])
    radii = [M.horoball_to_euclidean(M.Horoball(b, s)).radius for s in (2.0, 0.0, -2.0, -10.0, -40.0)]
    assert all(r1 > r2 for r1, r2 in zip(radii, radii[1:]))
    assert radii[-1] < 1e-16


def test_horoball_membership_matches_euclidean_ball():
    rng = np.random.default_rng(9)
    h = M.Horoball(M.IdealPoint.from_direction([0.3, -0.4, 0.2]), 0.4)
    ball = M.horoball_to_euclidean(h)
    pts = M.random_hyperboloid_points(3, 1000, rng, max_radius=4.0)
    agree = 0
    for v in pts:
        x = M.HyperboloidPoint(v)
        u = M.to_poincare(x).u
        inside_ball = np.linalg.norm(u - ball.center) < ball.radius
        margin = abs(np.linalg.norm(u - ball.center) - ball.radius)
        agree += inside_ball == M.in_horoball(h, x) or margin < 1e-9
    assert agree == 1000


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_horoball_invariance(seed):
    rng = np.random.default_rng(seed)
    h = M.Horoball(M.IdealPoint.from_direction(rng.normal(size=2)), float(rng.uniform(-1, 1)))
    g = M.random_isometry(2, rng, max_boost=1.0, factors=2)
    gh = M.apply_isometry(g, h)
    for v in M.random_hyperboloid_points(2, 30, rng):
        x = M.HyperboloidPoint(v)
        margin = abs(M.busemann(h.base, x) - h.level)
        if margin > 1e-9:
            assert M.in_horoball(h, x) == M.in_horoball(gh, M.apply_isometry(g, x))


def test_horoballs_disjoint_examples():
    far = [M.Horoball(M.IdealPoint.from_direction(d), -5.0) for d in ([1.0, 0.0], [-1.0, 0.0])]
    assert M.horoballs_disjoint(*far)
    same = M.IdealPoint.from_direction([0.0, 1.0])
    assert not M.horoballs_disjoint(M.Horoball(same, -3.0), M.Horoball(same, 1.0))
    a = M.Horoball(M.IdealPoint.from_direction([1.0, 0.0]), -math.log(3.0))
    b = M.Horoball(M.IdealPoint.from_direction([0.0, 1.0]), -math.log(3.0))
    assert M.horoballs_disjoint(a, b)
