from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kltgeom.lattice import (
    DivisorClass,
    PicardLattice,
    canonical_class,
    curve_class,
    dumps_class,
    intersect,
    is_numerically_trivial,
    loads_class,
    self_intersection,
)

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=12)


def classes(k):
    return st.lists(fractions, min_size=k + 1, max_size=k + 1).map(DivisorClass)


def test_gram_entries():
    lat = PicardLattice(3)
    e0, e1 = lat.basis(0), lat.basis(1)
    assert intersect(lat, e0, e0) == 1
    assert intersect(lat, e1, e1) == -1
    assert intersect(lat, e0, e1) == 0


@pytest.mark.parametrize("k,expected", [(0, 9), (9, 0), (10, -1), (12, -3)])
def test_canonical_self_intersection(k, expected):
    lat = PicardLattice(k)
    K = canonical_class(lat)
    assert K.coords == (Fraction(-3),) + (Fraction(1),) * k
    assert self_intersection(lat, K) == expected


def test_line_through_four_points():
    lat = PicardLattice(12)
    c = curve_class(lat, 1, {1: 1, 2: 1, 3: 1, 4: 1})
    assert c.coords[:6] == (1, -1, -1, -1, -1, 0)
    assert self_intersection(lat, c) == -3


def test_degree_zero_curve_is_zero():
    lat = PicardLattice(5)
    assert curve_class(lat, 0) == lat.zero()
    assert is_numerically_trivial(lat.zero())
    assert not is_numerically_trivial(canonical_class(PicardLattice(12)))


def test_float_coordinates_rejected():
    with pytest.raises(TypeError):
        DivisorClass([1.0, 0])


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        intersect(PicardLattice(2), DivisorClass([1, 0, 0]), DivisorClass([1, 0]))
    with pytest.raises(ValueError):
        PicardLattice(-1)
    with pytest.raises(IndexError):
        curve_class(PicardLattice(2), 1, {3: 1})


def test_json_roundtrip():
    c = DivisorClass([Fraction(1, 3), -2, 0])
    assert c.to_json() == ["1/3", "-2/1", "0/1"]
    assert loads_class(dumps_class(c)) == c


@pytest.mark.parametrize("k", range(0, 21))
def test_signature(k):
    assert PicardLattice(k).signature() == (1, k)


@pytest.mark.parametrize("k", [0, 1, 5, 9, 12, 20])
def test_cubic_through_all_points_cancels_canonical(k):
    lat = PicardLattice(k)
    c = curve_class(lat, 3, {i: 1 for i in range(1, k + 1)})
    assert is_numerically_trivial(c + canonical_class(lat))


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=6).flatmap(lambda k: st.tuples(st.just(k), classes(k), classes(k), classes(k), fractions)))
def test_bilinear_and_symmetric(data):
    k, u, v, w, s = data
    lat = PicardLattice(k)
    assert intersect(lat, u, v) == intersect(lat, v, u)
    assert intersect(lat, u + w, v) == intersect(lat, u, v) + intersect(lat, w, v)
    assert intersect(lat, s * u, v) == s * intersect(lat, u, v)
