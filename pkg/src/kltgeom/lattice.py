"""Picard lattices of blow-ups of the projective plane.

The lattice of a blow-up of P^2 at ``k`` points has basis ``(E0, E1, ..., Ek)``
where ``E0`` is the pull-back of a line and ``Ei`` are the exceptional curves.
The intersection form is ``diag(1, -1, ..., -1)``.  All arithmetic is exact
(:class:`fractions.Fraction`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Rational = Union[int, Fraction, str]


def _as_fraction(x: Rational) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floating point coordinates are not allowed; use Fraction or 'p/q' strings")
    return Fraction(x)


@dataclass(frozen=True)
class PicardLattice:
    """Lattice of signature (1, k) with diagonal Gram matrix (+1, -1, ..., -1)."""

    k: int

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 0:
            raise ValueError(f"k must be a nonnegative integer, got {self.k!r}")

    @property
    def rank(self) -> int:
        return self.k + 1

    @property
    def gram(self) -> tuple[tuple[int, ...], ...]:
        r = self.rank
        return tuple(
            tuple((1 if i == 0 else -1) if i == j else 0 for j in range(r)) for i in range(r)
        )

    def signature(self) -> tuple[int, int]:
        """Count positive and negative diagonal entries of the Gram matrix."""
        diag = [self.gram[i][i] for i in range(self.rank)]
        return sum(1 for d in diag if d > 0), sum(1 for d in diag if d < 0)

    def basis(self, i: int) -> "DivisorClass":
        if not 0 <= i <= self.k:
            raise IndexError(f"basis index {i} out of range 0..{self.k}")
        return DivisorClass(tuple(Fraction(int(j == i)) for j in range(self.rank)))

    def zero(self) -> "DivisorClass":
        return DivisorClass((Fraction(0),) * self.rank)

    def divisor(self, coords: Iterable[Rational]) -> "DivisorClass":
        d = DivisorClass(coords)
        self._check(d)
        return d

    def _check(self, d: "DivisorClass") -> None:
        if len(d) != self.rank:
            raise ValueError(f"class of length {len(d)} does not belong to a lattice of rank {self.rank}")


@dataclass(frozen=True)
class DivisorClass:
    """Exact coordinate vector in the basis (E0, E1, ..., Ek)."""

    coords: tuple[Fraction, ...]

    def __init__(self, coords: Iterable[Rational]):
        object.__setattr__(self, "coords", tuple(_as_fraction(c) for c in coords))

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> Fraction:
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def _same_length(self, other: "DivisorClass") -> None:
        if len(self) != len(other):
            raise ValueError(f"dimension mismatch: {len(self)} vs {len(other)}")

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self._same_length(other)
        return DivisorClass(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        self._same_length(other)
        return DivisorClass(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(-a for a in self.coords)

    def __mul__(self, scalar: Rational) -> "DivisorClass":
        s = _as_fraction(scalar)
        return DivisorClass(s * a for a in self.coords)

    __rmul__ = __mul__

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def to_json(self) -> list[str]:
        return [f"{c.numerator}/{c.denominator}" for c in self.coords]

    @classmethod
    def from_json(cls, data: Sequence[Union[str, int]]) -> "DivisorClass":
        if not isinstance(data, (list, tuple)):
            raise ValueError("a divisor class must be a JSON array")
        return cls(data)

    def __repr__(self) -> str:
        return f"DivisorClass({', '.join(str(c) for c in self.coords)})"


def intersect(lattice: PicardLattice, u: DivisorClass, v: DivisorClass) -> Fraction:
    """Intersection number ``u . v``."""
    lattice._check(u)
    lattice._check(v)
    return u.coords[0] * v.coords[0] - sum(a * b for a, b in zip(u.coords[1:], v.coords[1:]))


def self_intersection(lattice: PicardLattice, u: DivisorClass) -> Fraction:
    return intersect(lattice, u, u)


def canonical_class(lattice: PicardLattice) -> DivisorClass:
    """``K = -3 E0 + E1 + ... + Ek``."""
    return DivisorClass([-3] + [1] * lattice.k)


def curve_class(lattice: PicardLattice, degree: int, mults: Mapping[int, int] | None = None) -> DivisorClass:
    """Class of the strict transform of a plane curve.

    ``mults`` maps a blown-up point index (1-based) to the multiplicity of the
    curve at that point.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    coords = [Fraction(degree)] + [Fraction(0)] * lattice.k
    for i, m in (mults or {}).items():
        if not 1 <= i <= lattice.k:
            raise IndexError(f"point index {i} out of range 1..{lattice.k}")
        if m < 0:
            raise ValueError("multiplicities must be nonnegative")
        coords[i] -= m
    return DivisorClass(coords)


def is_numerically_trivial(c: DivisorClass) -> bool:
    """Exact vanishing of every coordinate (Pic is torsion free here)."""
    return all(x == 0 for x in c.coords)


def dumps_class(c: DivisorClass) -> str:
    return json.dumps(c.to_json())


def loads_class(text: str) -> DivisorClass:
    return DivisorClass.from_json(json.loads(text))
