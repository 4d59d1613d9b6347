"""Galois cohomology of Z/2 with finite nonabelian coefficients, and free-subgroup checks.

``H^1(Z/2, A)`` is computed by brute force from a Cayley table: cocycles are the
``z`` with ``z * sigma(z) = e`` and ``z ~ c^-1 * z * sigma(c)``.  The
same data is compared with conjugacy classes of involutions ``(z, sigma)`` in
the semidirect product ``A x| Z/2``.

The second half works with 2x2 matrices over Z or Z[zeta]: exhaustive search
for relations among reduced words, ping-pong sampling, and comparison modulo
the scalars ``zeta^k I``.
"""

from __future__ import annotations

import itertools
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

from .arrangements import ZETA, CycloNum


# ---------------------------------------------------------------------------
# finite groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteGroupTable:
    """Finite group on ``0..m-1`` with an automorphism ``sigma`` of order <= 2."""

    table: tuple[tuple[int, ...], ...]
    identity: int
    sigma: tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        m = len(self.table)
        if m == 0 or any(len(row) != m for row in self.table):
            raise ValueError("multiplication table must be square and nonempty")
        if any(not 0 <= x < m for row in self.table for x in row):
            raise ValueError("table entries out of range")
        mul = self.table
        e = self.identity
        if any(mul[e][a] != a or mul[a][e] != a for a in range(m)):
            raise ValueError("identity index is not an identity")
        for a in range(m):
            if e not in mul[a]:
                raise ValueError(f"element {a} has no inverse")
        for a, b, c in itertools.product(range(m), repeat=3):
            if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
                raise ValueError("table is not associative")
        s = self.sigma
        if sorted(s) != list(range(m)):
            raise ValueError("sigma is not a permutation")
        if any(s[mul[a][b]] != mul[s[a]][s[b]] for a in range(m) for b in range(m)):
            raise ValueError("sigma is not an automorphism")
        if any(s[s[a]] != a for a in range(m)):
            raise ValueError("sigma is not an involution")

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.table[a].index(self.identity)

    def with_sigma(self, sigma: Sequence[int]) -> "FiniteGroupTable":
        return FiniteGroupTable(self.table, self.identity, tuple(sigma), self.name)

    def relabel(self, perm: Sequence[int]) -> "FiniteGroupTable":
        """Isomorphic copy with element ``a`` renamed ``perm[a]``."""
        m = self.order
        table = [[0] * m for _ in range(m)]
        sigma = [0] * m
        for a in range(m):
            sigma[perm[a]] = perm[self.sigma[a]]
            for b in range(m):
                table[perm[a]][perm[b]] = perm[self.table[a][b]]
        return FiniteGroupTable(tuple(map(tuple, table)), perm[self.identity], tuple(sigma), self.name)

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "table": [x for row in self.table for x in row],
            "identity": self.identity,
            "sigma": list(self.sigma),
            "name": self.name,
        }

    @classmethod
    def from_json(cls, data: dict) -> "FiniteGroupTable":
        m = int(data["order"])
        flat = list(data["table"])
        if len(flat) != m * m:
            raise ValueError(f"table has {len(flat)} entries, expected {m * m}")
        table = tuple(tuple(int(x) for x in flat[i * m : (i + 1) * m]) for i in range(m))
        sigma = tuple(int(x) for x in data.get("sigma", range(m)))
        identity = data.get("identity")
        if identity is None:
            identity = next(a for a in range(m) if all(table[a][b] == b for b in range(m)))
        return cls(table, int(identity), sigma, data.get("name", ""))


def group_from_elements(elements: Sequence[Hashable], mul: Callable, identity: Hashable, name: str = "") -> FiniteGroupTable:
    index = {x: i for i, x in enumerate(elements)}
    table = tuple(tuple(index[mul(a, b)] for b in elements) for a in elements)
    m = len(elements)
    return FiniteGroupTable(table, index[identity], tuple(range(m)), name)


def cyclic_group(n: int) -> FiniteGroupTable:
    return group_from_elements(list(range(n)), lambda a, b: (a + b) % n, 0, f"Z{n}")


def dihedral_group(m: int) -> FiniteGroupTable:
    """Symmetries of the regular ``m``-gon (order ``2m``)."""
    elems = [(r, s) for s in range(2) for r in range(m)]

    def mul(x, y):
        return ((x[0] + (y[0] if x[1] == 0 else -y[0])) % m, (x[1] + y[1]) % 2)

    return group_from_elements(elems, mul, (0, 0), f"D{m}")


def quaternion_group() -> FiniteGroupTable:
    units = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    elems = [(s, u) for s in (1, -1) for u in "1ijk"]

    def mul(x, y):
        s, u = units[(x[1], y[1])]
        return (x[0] * y[0] * s, u)

    return group_from_elements(elems, mul, (1, "1"), "Q8")


def direct_product(g: FiniteGroupTable, h: FiniteGroupTable) -> FiniteGroupTable:
    elems = [(a, b) for a in range(g.order) for b in range(h.order)]
    return group_from_elements(
        elems, lambda x, y: (g.mul(x[0], y[0]), h.mul(x[1], y[1])), (g.identity, h.identity), f"{g.name}x{h.name}"
    )


def small_groups(max_order: int = 8) -> list[FiniteGroupTable]:
    """One representative of every isomorphism class of groups of order <= 8."""
    z2 = cyclic_group(2)
    groups = [cyclic_group(n) for n in range(1, min(max_order, 8) + 1)]
    extra = [
        direct_product(z2, z2),
        dihedral_group(3),
        direct_product(cyclic_group(4), z2),
        direct_product(direct_product(z2, z2), z2),
        dihedral_group(4),
        quaternion_group(),
    ]
    groups += [g for g in extra if g.order <= max_order]
    return sorted(groups, key=lambda g: g.order)


def _element_order(g: FiniteGroupTable, a: int) -> int:
    k, x = 1, a
    while x != g.identity:
        x = g.mul(x, a)
        k += 1
    return k


def _generating_set(g: FiniteGroupTable) -> list[int]:
    gens: list[int] = []
    span = {g.identity}
    for a in sorted(range(g.order), key=lambda x: -_element_order(g, x)):
        if a in span:
            continue
        gens.append(a)
        span = _closure(g, gens)
        if len(span) == g.order:
            break
    return gens


def _closure(g: FiniteGroupTable, gens: Sequence[int]) -> set[int]:
    seen = {g.identity}
    queue = deque([g.identity])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = g.mul(x, s)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def automorphisms(g: FiniteGroupTable) -> list[tuple[int, ...]]:
    """All automorphisms, found by extending images of a generating set."""
    gens = _generating_set(g)
    orders = [_element_order(g, s) for s in gens]
    candidates = [[a for a in range(g.order) if _element_order(g, a) == o] for o in orders]
    out = []
    for images in itertools.product(*candidates):
        phi = {g.identity: g.identity}
        queue = deque([g.identity])
        ok = True
        while queue and ok:
            x = queue.popleft()
            for s, t in zip(gens, images):
                y, fy = g.mul(x, s), g.mul(phi[x], t)
                if y in phi:
                    if phi[y] != fy:
                        ok = False
                        break
                else:
                    phi[y] = fy
                    queue.append(y)
        if not ok or len(set(phi.values())) != g.order:
            continue
        perm = tuple(phi[a] for a in range(g.order))
        if all(perm[g.mul(a, b)] == g.mul(perm[a], perm[b]) for a in range(g.order) for b in range(g.order)):
            out.append(perm)
    return out


def involutive_automorphisms(g: FiniteGroupTable) -> list[tuple[int, ...]]:
    """Automorphisms ``s`` with ``s o s = id`` (the identity included)."""
    return [s for s in automorphisms(g) if all(s[s[a]] == a for a in range(g.order))]


# ---------------------------------------------------------------------------
# H^1(Z/2, A) and the semidirect product
# ---------------------------------------------------------------------------


@dataclass
class H1Result:
    classes: list[int]
    count: int
    cocycles: list[int]
    class_of: dict[int, int]


def h1_z2(A: FiniteGroupTable) -> H1Result:
    """Cohomology set ``H^1(<sigma>, A)``.

    Convention: ``z' = c^-1 z sigma(c)``; the mirrored convention gives the
    same number of classes.
    """
    s = A.sigma
    cocycles = [z for z in range(A.order) if A.mul(z, s[z]) == A.identity]
    class_of: dict[int, int] = {}
    reps: list[int] = []
    for z in cocycles:
        if z in class_of:
            continue
        reps.append(z)
        for c in range(A.order):
            class_of[A.mul(A.mul(A.inv(c), z), s[c])] = z
    return H1Result(reps, len(reps), cocycles, class_of)


@dataclass
class SemidirectReport:
    count: int  # conjugacy classes of (z, sigma) with square identity
    map_from_h1: dict[int, int]  # H^1 representative -> conjugacy class id
    well_defined: bool
    surjective: bool
    injective: bool
    h1_count: int
    trivial_part_involution_classes: int  # classes of (a, 1) of order 2, reported only


def semidirect_order2_classes(A: FiniteGroupTable) -> SemidirectReport:
    """Conjugacy classes of square-identity elements ``(z, sigma)`` in ``A x| <sigma>``.

    The product is ``(a, g)(b, h) = (a g(b), gh)``.  Each cocycle ``z`` gives
    such an element; the induced map from ``H^1`` classes is checked to be
    well defined and onto.
    """
    m = A.order
    s = A.sigma
    elems = [(a, t) for t in (0, 1) for a in range(m)]

    def act(t, b):
        return s[b] if t else b

    def mul(x, y):
        return (A.mul(x[0], act(x[1], y[0])), (x[1] + y[1]) % 2)

    def inv(x):
        a, t = x
        return (act(t, A.inv(a)), t)

    ident = (A.identity, 0)

    def conj_class(x) -> frozenset:
        return frozenset(mul(mul(g, x), inv(g)) for g in elems)

    twisted = [x for x in elems if x[1] == 1 and mul(x, x) == ident]
    class_ids: dict[frozenset, int] = {}
    for x in twisted:
        class_ids.setdefault(conj_class(x), len(class_ids))

    h1 = h1_z2(A)
    by_element = {x: class_ids[conj_class(x)] for x in twisted}
    well_defined = all(
        len({by_element[(z, 1)] for z in h1.cocycles if h1.class_of[z] == rep}) == 1 for rep in h1.classes
    )
    mapping = {rep: by_element[(rep, 1)] for rep in h1.classes}
    surjective = set(mapping.values()) == set(class_ids.values())
    injective = len(set(mapping.values())) == len(mapping)

    plain = {conj_class(x) for x in elems if x[1] == 0 and x != ident and mul(x, x) == ident}
    return SemidirectReport(len(class_ids), mapping, well_defined, surjective, injective, h1.count, len(plain))


# ---------------------------------------------------------------------------
# 2x2 matrices over Z or Z[zeta]
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntMatrix2:
    """``[[a, b], [c, d]]`` with integer or :class:`CycloNum` entries."""

    a: object
    b: object
    c: object
    d: object

    @classmethod
    def of(cls, rows) -> "IntMatrix2":
        (a, b), (c, d) = rows
        return cls(_entry(a), _entry(b), _entry(c), _entry(d))

    @property
    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    def __matmul__(self, o: "IntMatrix2") -> "IntMatrix2":
        return IntMatrix2(*_mul(self.entries, o.entries))

    def scale(self, k) -> "IntMatrix2":
        return IntMatrix2(*(k * x for x in self.entries))

    def inverse(self) -> "IntMatrix2":
        det = self.det
        if isinstance(det, CycloNum):
            if det.norm() != 1:
                raise ValueError("determinant is not a unit of Z[zeta]")
            u = det.inverse()
            return IntMatrix2(u * self.d, -u * self.b, -u * self.c, u * self.a)
        if det not in (1, -1):
            raise ValueError("determinant is not a unit of Z")
        return IntMatrix2(det * self.d, -det * self.b, -det * self.c, det * self.a)

    def __eq__(self, other):
        if not isinstance(other, IntMatrix2):
            return NotImplemented
        return all(CycloNum.coerce(x) == CycloNum.coerce(y) for x, y in zip(self.entries, other.entries))

    def __hash__(self):
        return hash(tuple(CycloNum.coerce(x) for x in self.entries))

    def to_json(self) -> list:
        def enc(x):
            return x.to_json() if isinstance(x, CycloNum) else x

        return [[enc(self.a), enc(self.b)], [enc(self.c), enc(self.d)]]


def _entry(x):
    if isinstance(x, dict):
        return CycloNum.from_json(x)
    if isinstance(x, CycloNum):
        return x
    if isinstance(x, (int, Fraction)) and Fraction(x).denominator == 1:
        return int(x)
    raise ValueError(f"matrix entries must be integers or Z[zeta] elements, got {x!r}")


def _mul(p: tuple, q: tuple) -> tuple:
    a, b, c, d = p
    e, f, g, h = q
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


# Sanov generators of a free subgroup of index 12 in SL2(Z)
SANOV_A = IntMatrix2.of([[1, 2], [0, 1]])
SANOV_B = IntMatrix2.of([[1, 0], [2, 1]])


@dataclass
class FreeSearch:
    free_up_to_L: bool
    witness: tuple[str, ...] | None
    words_checked: int

    def witness_string(self) -> str | None:
        return None if self.witness is None else " ".join(self.witness)


def _letter_names(k: int) -> list[str]:
    base = "abcdefghijklmnopqrstuvwxyz"
    names = []
    for i in range(k):
        names += [base[i], base[i] + "^-1"]
    return names


def _too_big(entries: tuple, bound: int, integral: bool) -> bool:
    if integral:
        return max(abs(x) for x in entries) > bound
    return any(abs(x.a) > bound or abs(x.b) > bound for x in entries)


def _search_subtree(args) -> tuple[tuple[int, ...] | None, int]:
    letters, first, L, targets, bound, integral = args
    frontier = [((first,), letters[first])]
    checked = 0
    for _ in range(L):
        nxt = []
        for word, m in frontier:
            checked += 1
            if m in targets:
                return word, checked
            if len(word) == L:
                continue
            back = word[-1] ^ 1
            for j, g in enumerate(letters):
                if j == back:
                    continue
                p = _mul(m, g)
                if _too_big(p, bound, integral):
                    raise OverflowError("matrix entries exceed the configured bound")
                nxt.append((word + (j,), p))
        frontier = nxt
    return None, checked


def no_relation_search(
    gens: Sequence[IntMatrix2],
    L: int,
    center: Sequence | None = None,
    bound: int = 10**300,
    n_jobs: int = 1,
) -> FreeSearch:
    """Look for a nontrivial reduced word of length <= L equal to a central scalar.

    Without ``center`` only the identity counts as a relation.  Words are
    searched breadth-first, so a reported witness is a shortest one within
    its first-letter subtree.
    """
    if L < 1:
        raise ValueError("word length must be >= 1")
    letters = []
    for g in gens:
        letters += [g.entries, g.inverse().entries]
    scalars = [1] if center is None else list(center)
    integral = all(isinstance(x, int) for m in letters for x in m) and all(
        isinstance(s, int) or CycloNum.coerce(s).is_rational() for s in scalars
    )
    if integral:
        values = [int(CycloNum.coerce(s).a) for s in scalars]
        targets = {(v, 0, 0, v) for v in values}
    else:
        letters = [tuple(CycloNum.coerce(x) for x in m) for m in letters]
        targets = {tuple(CycloNum.coerce(x) for x in (s, 0, 0, s)) for s in scalars}

    jobs = [(letters, i, L, targets, bound, integral) for i in range(len(letters))]
    if n_jobs > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(_search_subtree, jobs))
    else:
        results = [_search_subtree(j) for j in jobs]
    names = _letter_names(len(gens))
    found = [w for w, _ in results if w is not None]
    checked = sum(c for _, c in results)
    if not found:
        return FreeSearch(True, None, checked)
    best = min(found, key=len)
    return FreeSearch(False, tuple(names[i] for i in best), checked)


def evaluate_word(gens: Sequence[IntMatrix2], word: Iterable[str]) -> IntMatrix2:
    """Multiply out a word such as ``("a", "b^-1", "a")``."""
    names = _letter_names(len(gens))
    mats = []
    for g in gens:
        mats += [g, g.inverse()]
    out = IntMatrix2(1, 0, 0, 1)
    for letter in word:
        out = out @ mats[names.index(letter)]
    return out


def _region(v: tuple[Fraction, Fraction]) -> int:
    x, y = abs(v[0]), abs(v[1])
    return 1 if x > y else 2 if y > x else 0


def _apply(m: IntMatrix2, v):
    return (m.a * v[0] + m.b * v[1], m.c * v[0] + m.d * v[1])


def _power(m: IntMatrix2, k: int) -> IntMatrix2:
    base = m if k >= 0 else m.inverse()
    out = IntMatrix2(1, 0, 0, 1)
    for _ in range(abs(k)):
        out = out @ base
    return out


def pingpong_witness(sample_points: Iterable, powers: Sequence[int] = (-3, -2, -1, 1, 2, 3)) -> bool:
    """Sampled ping-pong check for ``A = [[1,2],[0,1]]`` and ``B = [[1,0],[2,1]]``.

    With ``X1 = {|x| > |y|}`` and ``X2 = {|y| > |x|}``, every listed power of
    ``A`` must send the ``X2`` samples into ``X1`` and every power of ``B``
    the ``X1`` samples into ``X2``.  Evidence on samples, not a proof.
    """
    a_pows = [_power(SANOV_A, k) for k in powers]
    b_pows = [_power(SANOV_B, k) for k in powers]
    for raw in sample_points:
        v = (Fraction(raw[0]), Fraction(raw[1]))
        if v == (0, 0):
            raise ValueError("sample points must be nonzero")
        region = _region(v)
        if region == 2 and any(_region(_apply(m, v)) != 1 for m in a_pows):
            return False
        if region == 1 and any(_region(_apply(m, v)) != 2 for m in b_pows):
            return False
    return True


def distinct_mod_center(pairs: Iterable[tuple[IntMatrix2, IntMatrix2]]) -> list[bool]:
    """For each ``(g, h)``: ``g != zeta^k h`` for ``k = 0, 1, 2``."""
    scalars = [ZETA ** k for k in range(3)]
    return [all(g != h.scale(s) for s in scalars) for g, h in pairs]
