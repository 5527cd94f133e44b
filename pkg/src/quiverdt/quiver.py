"""Quivers, dimension vectors, Euler forms, slope stabilities and
superpotentials.

Conventions fixed here and used consistently everywhere else:

* a dimension vector is a tuple of nonnegative integers aligned with the
  quiver's declared vertex order;
* slopes are exact ``Fraction`` values compared exactly (wall-crossing is
  discontinuous in the slope, so floating point would be unsound);
* cycles of a superpotential are stored in traversal order: the word
  (a1, a2, ..., ak) means "follow a1, then a2, ...", so consecutive arrows
  satisfy head(a_i) = tail(a_{i+1}) and the cycle closes up.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Callable, Iterable, Optional, Sequence, Tuple


class VertexMismatchError(ValueError):
    """A dimension vector or stability refers to the wrong vertex set."""


class ZeroClassError(ValueError):
    """The zero dimension vector was passed where a nonzero class is required."""


@dataclass(frozen=True)
class Arrow:
    tail: str
    head: str
    label: str


@dataclass(frozen=True)
class DimVector:
    """Map vertex -> nonnegative integer, with the vertex order baked in."""

    vertices: Tuple[str, ...]
    values: Tuple[int, ...]

    def __post_init__(self):
        if len(self.vertices) != len(self.values):
            raise VertexMismatchError("dimension vector length mismatch")
        if any((not isinstance(x, int)) or x < 0 for x in self.values):
            raise ValueError(f"dimension vector entries must be integers >= 0: {self.values}")

    def __getitem__(self, vertex: str) -> int:
        try:
            return self.values[self.vertices.index(vertex)]
        except ValueError:
            raise VertexMismatchError(f"unknown vertex {vertex!r}") from None

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.values)

    def total(self) -> int:
        return sum(self.values)

    def content_gcd(self) -> int:
        return reduce(gcd, self.values, 0)

    def _check(self, other: "DimVector"):
        if self.vertices != other.vertices:
            raise VertexMismatchError(
                f"vertex mismatch: {self.vertices} vs {other.vertices}")

    def __add__(self, other: "DimVector") -> "DimVector":
        self._check(other)
        return DimVector(self.vertices,
                         tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "DimVector") -> "DimVector":
        self._check(other)
        return DimVector(self.vertices,
                         tuple(a - b for a, b in zip(self.values, other.values)))

    def __mul__(self, k: int) -> "DimVector":
        return DimVector(self.vertices, tuple(a * k for a in self.values))

    __rmul__ = __mul__

    def divide(self, m: int) -> "DimVector":
        if any(a % m for a in self.values):
            raise ValueError(f"{m} does not divide {self.values}")
        return DimVector(self.vertices, tuple(a // m for a in self.values))

    def leq(self, other: "DimVector") -> bool:
        self._check(other)
        return all(a <= b for a, b in zip(self.values, other.values))

    def dot(self, other: "DimVector") -> int:
        self._check(other)
        return sum(a * b for a, b in zip(self.values, other.values))

    def key(self) -> Tuple[int, ...]:
        return self.values

    def __repr__(self):
        return f"({','.join(map(str, self.values))})"


@dataclass(frozen=True)
class Stability:
    """Slope data: mu(d) = sum c(v) d(v) / sum r(v) d(v), with r > 0."""

    vertices: Tuple[str, ...]
    c: Tuple[Fraction, ...]
    r: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(Fraction(x) for x in self.c))
        object.__setattr__(self, "r", tuple(Fraction(x) for x in self.r))
        if len(self.c) != len(self.vertices) or len(self.r) != len(self.vertices):
            raise VertexMismatchError("stability data length mismatch")
        if any(x <= 0 for x in self.r):
            raise ValueError("stability requires r(v) > 0 for every vertex")

    def slope(self, d: DimVector) -> Fraction:
        if d.vertices != self.vertices:
            raise VertexMismatchError("stability and class use different vertex sets")
        if d.is_zero():
            raise ZeroClassError("slope undefined on zero class")
        num = sum(cv * dv for cv, dv in zip(self.c, d.values))
        den = sum(rv * dv for rv, dv in zip(self.r, d.values))
        return Fraction(num, den)

    def scaled(self, factor) -> "Stability":
        factor = Fraction(factor)
        if factor <= 0:
            raise ValueError("rescaling factor must be positive")
        return Stability(self.vertices,
                         tuple(factor * x for x in self.c),
                         tuple(factor * x for x in self.r))


def slope(s: Stability, d: DimVector) -> Fraction:
    return s.slope(d)


@dataclass(frozen=True)
class Quiver:
    """Finite directed multigraph with named vertices and labeled arrows.

    ``potential_terms`` optionally attaches a superpotential (a linear
    combination of cycles); it is validated on construction and exposed as
    a :class:`Superpotential` through the ``potential`` property.
    """

    vertices: Tuple[str, ...]
    arrows: Tuple[Arrow, ...]
    potential_terms: Tuple[Tuple[Fraction, Tuple[str, ...]], ...] = ()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arrows", tuple(
            a if isinstance(a, Arrow) else Arrow(*a) for a in self.arrows))
        object.__setattr__(self, "potential_terms", tuple(
            (Fraction(c), tuple(cyc)) for c, cyc in self.potential_terms))
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex names")
        vset = set(self.vertices)
        labels = [a.label for a in self.arrows]
        if len(set(labels)) != len(labels):
            raise ValueError("arrow labels must be unique")
        for a in self.arrows:
            if a.tail not in vset or a.head not in vset:
                raise VertexMismatchError(
                    f"arrow {a.label!r} uses undeclared vertex")
        if self.potential_terms:
            Superpotential(self, self.potential_terms)  # validates cycles

    @property
    def potential(self) -> Optional["Superpotential"]:
        if not self.potential_terms:
            return None
        return Superpotential(self, self.potential_terms)

    def has_potential(self) -> bool:
        return any(c != 0 for c, _ in self.potential_terms)

    def without_potential(self) -> "Quiver":
        if not self.potential_terms:
            return self
        return Quiver(self.vertices, self.arrows, (), self.name)

    def dim(self, values) -> DimVector:
        if isinstance(values, dict):
            missing = set(self.vertices) - set(values)
            extra = set(values) - set(self.vertices)
            if missing or extra:
                raise VertexMismatchError(
                    f"dimension vector keys differ from vertex set "
                    f"(missing {sorted(missing)}, extra {sorted(extra)})")
            values = tuple(int(values[v]) for v in self.vertices)
        return DimVector(self.vertices, tuple(int(x) for x in values))

    def zero(self) -> DimVector:
        return self.dim((0,) * len(self.vertices))

    def stability(self, c, r) -> Stability:
        if isinstance(c, dict):
            c = tuple(Fraction(c[v]) for v in self.vertices)
        if isinstance(r, dict):
            r = tuple(Fraction(r[v]) for v in self.vertices)
        return Stability(self.vertices, tuple(Fraction(x) for x in c),
                         tuple(Fraction(x) for x in r))

    def trivial_stability(self) -> Stability:
        n = len(self.vertices)
        return Stability(self.vertices, (Fraction(0),) * n, (Fraction(1),) * n)

    def arrow(self, label: str) -> Arrow:
        for a in self.arrows:
            if a.label == label:
                return a
        raise KeyError(f"unknown arrow label {label!r}")

    def arrow_labels(self) -> Tuple[str, ...]:
        return tuple(a.label for a in self.arrows)

    def _check(self, d: DimVector):
        if d.vertices != self.vertices:
            raise VertexMismatchError("class uses a different vertex set")

    def unit_classes(self):
        n = len(self.vertices)
        return [DimVector(self.vertices, tuple(int(i == j) for j in range(n)))
                for i in range(n)]


# ---------------------------------------------------------------------------
# Euler forms
# ---------------------------------------------------------------------------

def euler_form_nonsym(q: Quiver, d: DimVector, e: DimVector) -> int:
    """<d,e> = sum_v d(v)e(v) - sum_a d(tail a) e(head a).

    For representations without relations this is dim Hom - dim Ext^1.
    """
    q._check(d)
    q._check(e)
    d._check(e)
    total = d.dot(e)
    for a in q.arrows:
        total -= d[a.tail] * e[a.head]
    return total


def euler_form_antisym(q: Quiver, d: DimVector, e: DimVector) -> int:
    """Antisymmetrized Euler form
    chi(d,e) = sum_a (d(head a) e(tail a) - d(tail a) e(head a))."""
    q._check(d)
    q._check(e)
    d._check(e)
    total = 0
    for a in q.arrows:
        total += d[a.head] * e[a.tail] - d[a.tail] * e[a.head]
    return total


def is_generic(q: Quiver, s: Stability, box: DimVector):
    """Decide genericity inside the box: equal slopes force chi = 0.

    Returns (True, None) or (False, (d, e)) with a witness pair of
    equal-slope classes whose antisymmetrized Euler form is nonzero.
    """
    q._check(box)
    if any(b < 1 for b in box.values):
        raise ValueError("genericity box must be >= 1 in every component")
    by_slope = {}
    for d in classes_in_box(box):
        by_slope.setdefault(s.slope(d), []).append(d)
    for group in by_slope.values():
        for d, e in itertools.combinations(group, 2):
            if euler_form_antisym(q, d, e) != 0:
                return False, (d, e)
    return True, None


# ---------------------------------------------------------------------------
# class-lattice enumeration
# ---------------------------------------------------------------------------

def classes_in_box(box: DimVector, include_zero: bool = False):
    """All classes componentwise <= box, lexicographically ordered."""
    out = []
    for values in itertools.product(*(range(b + 1) for b in box.values)):
        d = DimVector(box.vertices, values)
        if include_zero or not d.is_zero():
            out.append(d)
    return out


def subclasses(d: DimVector):
    """Nonzero classes componentwise <= d."""
    return classes_in_box(d)


def vector_compositions(d: DimVector,
                        allowed: Optional[Callable[[DimVector], bool]] = None):
    """Ordered tuples of nonzero classes summing to d (lexicographic order).

    ``allowed`` filters the parts; the zero class is never a part.
    """
    if d.is_zero():
        raise ZeroClassError("compositions of the zero class are not enumerated")
    parts = [p for p in subclasses(d) if allowed is None or allowed(p)]

    def rec(remaining: DimVector):
        if remaining.is_zero():
            yield ()
            return
        for p in parts:
            if p.leq(remaining):
                for rest in rec(remaining - p):
                    yield (p,) + rest

    yield from rec(d)


def equal_slope_compositions(s: Stability, d: DimVector):
    """Compositions of d whose parts all share the slope of d."""
    mu = s.slope(d)
    return vector_compositions(d, allowed=lambda p: s.slope(p) == mu)


def decreasing_slope_compositions(s: Stability, d: DimVector):
    """Compositions of d with strictly decreasing part slopes and >= 2 parts.

    These are exactly the nontrivial Harder-Narasimhan types of class d.
    """
    parts = subclasses(d)

    def rec(remaining: DimVector, bound):
        if remaining.is_zero():
            yield ()
            return
        for p in parts:
            if p.leq(remaining):
                mu = s.slope(p)
                if bound is None or mu < bound:
                    for rest in rec(remaining - p, mu):
                        yield (p,) + rest

    for comp in rec(d, None):
        if len(comp) >= 2:
            yield comp


# ---------------------------------------------------------------------------
# superpotentials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Superpotential:
    """Linear combination of cycles, each stored in traversal order.

    Minimality (every cycle length >= 3) is enforced; the relations
    generated by cyclic derivatives then live in path-length >= 2.
    """

    quiver: Quiver
    terms: Tuple[Tuple[Fraction, Tuple[str, ...]], ...]

    def __post_init__(self):
        cleaned = []
        for coeff, cycle in self.terms:
            coeff = Fraction(coeff)
            cycle = tuple(cycle)
            if len(cycle) < 3:
                raise ValueError(
                    f"superpotential cycle {cycle} has length < 3 (not minimal)")
            arrows = [self.quiver.arrow(lbl) for lbl in cycle]
            for x, y in zip(arrows, arrows[1:] + arrows[:1]):
                if x.head != y.tail:
                    raise ValueError(
                        f"cycle {cycle} is not a closed path: "
                        f"{x.label} ends at {x.head}, {y.label} starts at {y.tail}")
            cleaned.append((coeff, cycle))
        object.__setattr__(self, "terms", tuple(cleaned))

    def is_zero(self) -> bool:
        return all(c == 0 for c, _ in self.terms)


def cyclic_derivative(w: Superpotential, a: str):
    """Cyclic derivative of the superpotential with respect to arrow ``a``.

    For each occurrence of ``a`` in a cycle, rotate the cycle (in traversal
    order) until ``a`` is first, delete it, and keep the remaining path.
    Returns a list of (coefficient, path) pairs with like paths merged and
    zero coefficients dropped.
    """
    if a not in w.quiver.arrow_labels():
        raise KeyError(f"unknown arrow label {a!r}")
    acc = {}
    for coeff, cycle in w.terms:
        k = len(cycle)
        for i, lbl in enumerate(cycle):
            if lbl != a:
                continue
            path = tuple(cycle[(i + 1 + j) % k] for j in range(k - 1))
            acc[path] = acc.get(path, Fraction(0)) + coeff
    return [(c, p) for p, c in sorted(acc.items()) if c != 0]


def _mat_mul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    if a and len(a[0]) != inner:
        raise ValueError("matrix shape mismatch")
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(inner)),
                           Fraction(0)) for j in range(cols))
                 for i in range(rows))


def potential_trace_eval(w: Superpotential, d: DimVector, assignment) -> Fraction:
    """Evaluate the invariant trace polynomial of the superpotential.

    ``assignment`` maps every arrow label to a matrix (sequence of rows of
    exact rationals) of shape d(head) x d(tail).  Returns
    sum_i coeff_i * Tr(A_{c_k} ... A_{c_1}) over the cycles.
    """
    w.quiver._check(d)
    mats = {}
    for arrow in w.quiver.arrows:
        if arrow.label not in assignment:
            raise KeyError(f"no matrix assigned to arrow {arrow.label!r}")
        raw = assignment[arrow.label]
        rows, cols = d[arrow.head], d[arrow.tail]
        mat = tuple(tuple(Fraction(x) for x in row) for row in raw)
        if len(mat) != rows or any(len(r) != cols for r in mat):
            raise ValueError(
                f"matrix for {arrow.label!r} must have shape {rows}x{cols}")
        mats[arrow.label] = mat
    total = Fraction(0)
    for coeff, cycle in w.terms:
        if coeff == 0:
            continue
        start = w.quiver.arrow(cycle[0]).tail
        n = d[start]
        if n == 0 or any(d[w.quiver.arrow(lbl).head] == 0 for lbl in cycle):
            continue  # an empty matrix factor kills the trace
        prod = tuple(tuple(Fraction(int(i == j)) for j in range(n))
                     for i in range(n))
        for lbl in cycle:
            prod = _mat_mul(mats[lbl], prod)
        total += coeff * sum(prod[i][i] for i in range(len(prod)))
    return total


# ---------------------------------------------------------------------------
# builtin quivers used throughout the tests and demos
# ---------------------------------------------------------------------------

def point_quiver() -> Quiver:
    return Quiver(("v",), (), name="point")


def one_loop_quiver() -> Quiver:
    return Quiver(("v",), (Arrow("v", "v", "x"),), name="one-loop")


def a2_quiver() -> Quiver:
    return Quiver(("v0", "v1"), (Arrow("v0", "v1", "a"),), name="A2")


def kronecker_quiver() -> Quiver:
    return Quiver(("v0", "v1"),
                  (Arrow("v0", "v1", "a1"), Arrow("v0", "v1", "a2")),
                  name="K2")


def conifold_quiver(with_potential: bool = True) -> Quiver:
    terms = ((Fraction(1), ("e1", "f1", "e2", "f2")),
             (Fraction(-1), ("e1", "f2", "e2", "f1"))) if with_potential else ()
    return Quiver(("v0", "v1"),
                  (Arrow("v0", "v1", "e1"), Arrow("v0", "v1", "e2"),
                   Arrow("v1", "v0", "f1"), Arrow("v1", "v0", "f2")),
                  terms, name="conifold")
