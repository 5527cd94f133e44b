"""Brute-force finite-field ground truth for the counting engine.

Everything in this module is deliberately dumb: representations are
enumerated as literal tuples of matrices over a small finite field,
subrepresentations as literal tuples of subspaces closed under the arrow
maps, and stability is tested straight from the definition.  The only
shortcuts taken are ones that do not change what is being counted (for
instance, if no class below d can violate semistability then no
representation of class d has to be scanned).

The module never imports the counting engine; agreement between the two
routes is asserted in the test suite, not here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .quiver import (DimVector, Quiver, Stability, ZeroClassError,
                     classes_in_box, euler_form_nonsym)


class CapExceededError(ValueError):
    """An oracle size cap was exceeded."""


class InterpolationError(ValueError):
    """Not enough feasible sample fields for the requested degree bound."""


STACKY_PRIMES = (2, 3, 5)
SMALL_PRIMES = (2, 3)
SAMPLE_FIELD_SIZES = (2, 3, 4, 5, 7, 8, 9, 11, 13)
DEFAULT_TUPLE_CAP = 300_000


# ---------------------------------------------------------------------------
# small finite fields, with table arithmetic for prime powers
# ---------------------------------------------------------------------------

def _factor_prime_power(q: int) -> Tuple[int, int]:
    for p in (2, 3, 5, 7, 11, 13):
        if q % p == 0:
            k = 0
            m = q
            while m % p == 0:
                m //= p
                k += 1
            if m != 1:
                break
            return p, k
    raise ValueError(f"{q} is not a supported prime power")


def _poly_mul_mod(a, b, modulus, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    # reduce by the monic modulus
    k = len(modulus) - 1
    while len(out) > k:
        lead = out[-1]
        if lead:
            shift = len(out) - 1 - k
            for i in range(k):
                out[shift + i] = (out[shift + i] - lead * modulus[i]) % p
        out.pop()
    return out


def _find_irreducible(p: int, k: int) -> List[int]:
    """Monic irreducible polynomial of degree k over F_p (ascending
    coefficients, leading 1 included)."""
    for tail in itertools.product(range(p), repeat=k):
        coeffs = list(tail) + [1]
        if _is_irreducible(coeffs, p):
            return coeffs
    raise RuntimeError("no irreducible polynomial found")


def _is_irreducible(coeffs: List[int], p: int) -> bool:
    k = len(coeffs) - 1
    if coeffs[0] == 0:
        return False
    if k == 1:
        return True
    # no roots
    for x in range(p):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % p
        if acc == 0:
            return False
    if k <= 3:
        return True
    # degree 4+ over tiny p: trial division by monic irreducibles of degree 2
    for tail in itertools.product(range(p), repeat=2):
        div = list(tail) + [1]
        if not _is_irreducible(div, p):
            continue
        if _poly_divides(div, coeffs, p):
            return False
    return True


def _poly_divides(div, poly, p) -> bool:
    rem = list(poly)
    k = len(div) - 1
    while len(rem) - 1 >= k:
        lead = rem[-1]
        if lead:
            shift = len(rem) - 1 - k
            for i in range(len(div)):
                rem[shift + i] = (rem[shift + i] - lead * div[i]) % p
        rem.pop()
    return all(c == 0 for c in rem)


class GF:
    """The field with q elements, q a prime power <= 13.

    Elements are integers 0..q-1; for prime powers they encode base-p
    digit vectors of residue polynomials, and arithmetic goes through
    precomputed tables.
    """

    _cache: Dict[int, "GF"] = {}

    def __new__(cls, q: int):
        if q in cls._cache:
            return cls._cache[q]
        self = super().__new__(cls)
        cls._cache[q] = self
        p, k = _factor_prime_power(q)
        self.q, self.p, self.k = q, p, k
        if k == 1:
            self.add_table = [[(a + b) % p for b in range(p)] for a in range(p)]
            self.mul_table = [[(a * b) % p for b in range(p)] for a in range(p)]
        else:
            modulus = _find_irreducible(p, k)
            def decode(n):
                digits = []
                for _ in range(k):
                    digits.append(n % p)
                    n //= p
                return digits
            def encode(digits):
                n = 0
                for d in reversed(digits):
                    n = n * p + d
                return n
            self.add_table = [[encode([(x + y) % p for x, y in
                                       zip(decode(a), decode(b))])
                               for b in range(q)] for a in range(q)]
            self.mul_table = [[0] * q for _ in range(q)]
            for a in range(q):
                for b in range(q):
                    prod = _poly_mul_mod(decode(a), decode(b), modulus, p)
                    prod += [0] * (k - len(prod))
                    self.mul_table[a][b] = encode(prod)
        self.neg_table = [0] * q
        for a in range(q):
            for b in range(q):
                if self.add_table[a][b] == 0:
                    self.neg_table[a] = b
                    break
        self.inv_table = [None] * q
        for a in range(1, q):
            for b in range(1, q):
                if self.mul_table[a][b] == 1:
                    self.inv_table[a] = b
                    break
        return self

    def add(self, a, b):
        return self.add_table[a][b]

    def mul(self, a, b):
        return self.mul_table[a][b]

    def neg(self, a):
        return self.neg_table[a]

    def sub(self, a, b):
        return self.add_table[a][self.neg_table[b]]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return self.inv_table[a]

    def __repr__(self):
        return f"GF({self.q})"


# ---------------------------------------------------------------------------
# matrices and subspaces over GF
# ---------------------------------------------------------------------------

def mat_vec(F: GF, mat, vec):
    return tuple(
        _dot(F, row, vec) for row in mat)


def _dot(F: GF, xs, ys):
    acc = 0
    for x, y in zip(xs, ys):
        acc = F.add(acc, F.mul(x, y))
    return acc


def all_matrices(F: GF, rows: int, cols: int):
    if rows == 0 or cols == 0:
        yield ((),) * rows if cols == 0 else tuple(() for _ in range(rows))
        return
    for entries in itertools.product(range(F.q), repeat=rows * cols):
        yield tuple(entries[r * cols:(r + 1) * cols] for r in range(rows))


def rank(F: GF, rows: Sequence[Tuple[int, ...]]) -> int:
    """Row rank by Gaussian elimination over F."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for col in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if m[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = F.inv(m[r][col])
        m[r] = [F.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                factor = m[i][col]
                m[i] = [F.sub(x, F.mul(factor, yv)) for x, yv in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


_subspace_cache: Dict[Tuple[int, int], Dict[int, List[frozenset]]] = {}


def subspaces(F: GF, n: int) -> Dict[int, List[frozenset]]:
    """All linear subspaces of F^n as vector sets, grouped by dimension."""
    key = (F.q, n)
    if key in _subspace_cache:
        return _subspace_cache[key]
    zero = (0,) * n
    by_dim: Dict[int, List[frozenset]] = {0: [frozenset({zero})]}
    vectors = [v for v in itertools.product(range(F.q), repeat=n) if any(v)]
    current = {frozenset({zero}): ()}
    for dim in range(1, n + 1):
        nxt = {}
        for span_set, basis in current.items():
            for v in vectors:
                if v in span_set:
                    continue
                new_basis = basis + (v,)
                new_set = frozenset(_span(F, new_basis, n))
                if new_set not in nxt:
                    nxt[new_set] = new_basis
        by_dim[dim] = list(nxt.keys())
        current = nxt
    _subspace_cache[key] = by_dim
    return by_dim


def _span(F: GF, basis, n: int):
    out = {(0,) * n}
    for v in basis:
        new = set()
        for w in out:
            for c in range(F.q):
                cv = tuple(F.mul(c, x) for x in v)
                new.add(tuple(F.add(a, b) for a, b in zip(w, cv)))
        out = new
    return out


def _basis_of(space: frozenset, F: GF, n: int):
    basis = []
    span_set = {(0,) * n}
    for v in sorted(space):
        if v not in span_set:
            basis.append(v)
            span_set = _span(F, basis, n)
            if len(span_set) == len(space):
                break
    return tuple(basis)


# ---------------------------------------------------------------------------
# representations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FqRep:
    """A representation over a finite field: one matrix per arrow, with
    shape d(head) x d(tail)."""
    quiver: Quiver
    q: int
    d: DimVector
    matrices: Tuple[Tuple[Tuple[int, ...], ...], ...]  # aligned with quiver.arrows

    def matrix(self, label: str):
        for a, m in zip(self.quiver.arrows, self.matrices):
            if a.label == label:
                return m
        raise KeyError(label)


@dataclass(frozen=True)
class FramedFqRep:
    rep: FqRep
    e: DimVector
    framing: Tuple[Tuple[Tuple[int, ...], ...], ...]  # sigma_v: d(v) x e(v)


def rep_tuple_count(quiver: Quiver, d: DimVector, q: int) -> int:
    return q ** sum(d[a.tail] * d[a.head] for a in quiver.arrows)


def enumerate_reps(quiver: Quiver, F: GF, d: DimVector):
    shapes = [(d[a.head], d[a.tail]) for a in quiver.arrows]
    pools = [list(all_matrices(F, r, c)) for r, c in shapes]
    for combo in itertools.product(*pools):
        yield FqRep(quiver, F.q, d, tuple(combo))


def _closed_subspace_tuples(rep: FqRep, F: GF, cls: DimVector):
    """Subspace tuples of the given class closed under all arrow maps."""
    d = rep.d
    per_vertex = [subspaces(F, d[v])[cls[v]] for v in rep.quiver.vertices]
    out = []
    for tup in itertools.product(*per_vertex):
        spaces = dict(zip(rep.quiver.vertices, tup))
        ok = True
        for a, m in zip(rep.quiver.arrows, rep.matrices):
            src = spaces[a.tail]
            dst = spaces[a.head]
            n_src = d[a.tail]
            for b in _basis_of(src, F, n_src):
                if mat_vec(F, m, b) not in dst:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(spaces)
    return out


def subrep_classes(rep: FqRep, F: GF, proper: bool = True,
                   nonzero: bool = True, restrict=None):
    """Classes realized by closed subspace tuples of the representation."""
    d = rep.d
    found = []
    for cls in classes_in_box(d, include_zero=not nonzero):
        if proper and cls == d:
            continue
        if restrict is not None and cls not in restrict:
            continue
        if _closed_subspace_tuples(rep, F, cls):
            found.append(cls)
    return found


# ---------------------------------------------------------------------------
# GL orders
# ---------------------------------------------------------------------------

def gl_order(n: int, q: int) -> int:
    """|GL(n, F_q)|, counted literally when small and by the classical
    product otherwise."""
    if n == 0:
        return 1
    F = GF(q)
    if q ** (n * n) <= 10_000:
        count = 0
        for m in all_matrices(F, n, n):
            if rank(F, m) == n:
                count += 1
        return count
    total = 1
    for i in range(n):
        total *= q ** n - q ** i
    return total


def _gl_product(d: DimVector, q: int) -> int:
    total = 1
    for n in d.values:
        total *= gl_order(n, q)
    return total


# ---------------------------------------------------------------------------
# oracle counts
# ---------------------------------------------------------------------------

def stacky_count_oracle(quiver: Quiver, d: DimVector, p: int) -> Fraction:
    """(number of arrow-matrix tuples) / |prod_v GL(d(v))| over F_p."""
    quiver._check(d)
    if d.total() > 4:
        raise CapExceededError("size cap exceeded: sum d <= 4 for stacky counts")
    if p not in STACKY_PRIMES:
        raise CapExceededError(f"prime {p} not in {STACKY_PRIMES}")
    if d.is_zero():
        return Fraction(1)
    F = GF(p)
    total = rep_tuple_count(quiver, d, p)
    if total <= 50_000:
        count = sum(1 for _ in enumerate_reps(quiver, F, d))
        assert count == total
        total = count
    return Fraction(total, _gl_product(d, p))


def semistable_count_oracle(quiver: Quiver, s: Stability, d: DimVector,
                            p: int) -> Fraction:
    """Stacky count of slope-semistable representations by brute force.

    A representation is semistable iff no closed subspace tuple realizes a
    class of strictly larger slope; only classes that could violate are
    scanned.
    """
    quiver._check(d)
    if d.is_zero():
        raise ZeroClassError("semistable count undefined on zero class")
    if d.total() > 3:
        raise CapExceededError("size cap exceeded: sum d <= 3 for semistable counts")
    if p not in SMALL_PRIMES:
        raise CapExceededError(f"prime {p} not in {SMALL_PRIMES}")
    F = GF(p)
    mu = s.slope(d)
    violating = [c for c in classes_in_box(d)
                 if c != d and s.slope(c) > mu]
    if not violating:
        return Fraction(rep_tuple_count(quiver, d, p), _gl_product(d, p))
    count = 0
    for rep in enumerate_reps(quiver, F, d):
        if not subrep_classes(rep, F, restrict=set(violating)):
            count += 1
    return Fraction(count, _gl_product(d, p))


def hall_twist_oracle(quiver: Quiver, d1: DimVector, d3: DimVector,
                      p: int) -> Fraction:
    """Stacky number of pairs (E, subrepresentation of class d1 with
    quotient class d3), the finite-field shadow of the Hall product."""
    quiver._check(d1)
    quiver._check(d3)
    if (d1 + d3).total() > 3:
        raise CapExceededError("size cap exceeded: sum(d1+d3) <= 3 for Hall twists")
    if p not in SMALL_PRIMES:
        raise CapExceededError(f"prime {p} not in {SMALL_PRIMES}")
    d = d1 + d3
    if d.is_zero():
        return Fraction(1)
    F = GF(p)
    total = 0
    for rep in enumerate_reps(quiver, F, d):
        if d1.is_zero():
            total += 1
        else:
            total += len(_closed_subspace_tuples(rep, F, d1))
    return Fraction(total, _gl_product(d, p))


def _framing_pools(F: GF, d: DimVector, e: DimVector):
    return [list(all_matrices(F, d.values[i], e.values[i]))
            for i in range(len(d.values))]


def framed_stable_count_oracle(quiver: Quiver, s: Stability, d: DimVector,
                               e: DimVector, p: int) -> int:
    """Number of stable framed representations divided by |prod GL(d)|.

    Stability of (E, sigma): every proper nonzero subrepresentation E' has
    slope <= mu(E); if sigma factors through E' the inequality is strict;
    and sigma is not identically zero (framing by a zero map is excluded,
    mirroring the nonzero-morphism requirement on the sheaf side).  Stable
    framed objects have trivial stabilizer, so the quotient is an integer.
    """
    quiver._check(d)
    quiver._check(e)
    if quiver.has_potential():
        raise CapExceededError("framed oracle requires W = 0")
    if d.total() > 3 or e.total() > 5:
        raise CapExceededError(
            "size cap exceeded: sum d <= 3 and sum e <= 5 for framed counts")
    if d.is_zero():
        raise ZeroClassError("framed count undefined on zero class")
    F = GF(p)
    if e.is_zero():
        return 0
    mu = s.slope(d)
    candidates = [c for c in classes_in_box(d) if c != d]
    killers = [c for c in candidates if s.slope(c) > mu]
    blockers = [c for c in candidates if s.slope(c) == mu]
    sigma_pools = _framing_pools(F, d, e)
    count = 0
    for rep in enumerate_reps(quiver, F, d):
        if killers and subrep_classes(rep, F, restrict=set(killers)):
            continue
        blocking_tuples = []
        for c in blockers:
            blocking_tuples.extend(_closed_subspace_tuples(rep, F, c))
        for sigma in itertools.product(*sigma_pools):
            if all(all(x == 0 for row in m for x in row) for m in sigma):
                continue
            if any(_sigma_factors(F, sigma, spaces, d, e, quiver)
                   for spaces in blocking_tuples):
                continue
            count += 1
    total = Fraction(count, _gl_product(d, p))
    if total.denominator != 1:
        raise AssertionError(
            f"stable framed count {total} is not an integer; stabilizers "
            f"of stable framed objects should be trivial")
    return int(total)


def _sigma_factors(F: GF, sigma, spaces, d: DimVector, e: DimVector,
                   quiver: Quiver) -> bool:
    for i, v in enumerate(quiver.vertices):
        space = spaces[v]
        mat = sigma[i]
        for col in range(e.values[i]):
            vec = tuple(mat[row][col] for row in range(d.values[i]))
            if vec not in space:
                return False
    return True


def _framed_tuple_count(quiver: Quiver, d: DimVector, e: DimVector,
                        q: int) -> int:
    return rep_tuple_count(quiver, d, q) * q ** d.dot(e)


def ndt_direct(quiver: Quiver, s: Stability, d: DimVector, e: DimVector,
               tuple_cap: int = DEFAULT_TUPLE_CAP) -> Fraction:
    """Framed invariant by counting: interpolate the stable framed count
    as a polynomial in q, evaluate at q = 1, and attach the smoothness
    sign (-1)^{e.d - <d,d>}.

    The framed moduli for W = 0 is smooth of dimension e.d - <d,d>, so the
    point count is a polynomial of at most that degree; one extra sample
    point is used as a polynomiality check whenever it is affordable.
    """
    degree = e.dot(d) - euler_form_nonsym(quiver, d, d)
    if degree < 0:
        for p in SMALL_PRIMES:
            if framed_stable_count_oracle(quiver, s, d, e, p) != 0:
                raise AssertionError("negative expected dimension but stable "
                                     "framed objects exist")
        return Fraction(0)
    feasible = [q for q in SAMPLE_FIELD_SIZES
                if _framed_tuple_count(quiver, d, e, q) <= tuple_cap]
    if len(feasible) < degree + 1:
        raise InterpolationError(
            f"interpolation degree bound exceeded: need {degree + 1} sample "
            f"fields, only {len(feasible)} feasible")
    sample = feasible[:min(degree + 2, len(feasible))]
    points = [(q, framed_stable_count_oracle(quiver, s, d, e, q))
              for q in sample]
    base = points[:degree + 1]
    value_at_1 = _lagrange_eval(base, Fraction(1))
    for q_extra, n_extra in points[degree + 1:]:
        if _lagrange_eval(base, Fraction(q_extra)) != n_extra:
            raise AssertionError(
                "framed counts do not fit a polynomial of the expected degree")
    sign = (-1) ** (e.dot(d) - euler_form_nonsym(quiver, d, d))
    return sign * value_at_1


def _lagrange_eval(points, x: Fraction) -> Fraction:
    total = Fraction(0)
    for i, (xi, yi) in enumerate(points):
        term = Fraction(yi)
        for j, (xj, _) in enumerate(points):
            if i != j:
                term *= Fraction(x - xj, xi - xj)
        total += term
    return total


def gaussian_binomial(n: int, k: int, q: int) -> Fraction:
    """Gaussian binomial coefficient [n choose k]_q as an exact value."""
    if k < 0 or k > n:
        return Fraction(0)
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return Fraction(num, den)
