"""Combinatorics of wall-crossing: the S and U coefficients, labeled-tree
enumeration, the V coefficient, and the transformation law taking a DT
table at one slope stability to any other.

The transformation is evaluated in flattened form: summing the V-weighted
tree formula over all labeled class assignments k: {1..n} -> C and all
orientations cancels the 1/n! in V against the n! relabelings, leaving a
sum over ordered class tuples and trees whose edges point from smaller to
larger label.  The unflattened V form is kept (``v_coeff``) and the two are
checked against each other in the test suite.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, List, Sequence, Tuple

from .hall import DTTable
from .quiver import (DimVector, Quiver, Stability, ZeroClassError,
                     euler_form_antisym, vector_compositions)


class MissingTableEntryError(KeyError):
    pass


# ---------------------------------------------------------------------------
# S and U coefficients
# ---------------------------------------------------------------------------

def s_coeff(classes: Sequence[DimVector], tau: Stability,
            tautilde: Stability) -> int:
    """S(a_1,...,a_n; tau, tautilde) in {-1, 0, 1}.

    Nonzero iff every adjacent position i satisfies one of
      (a) tau(a_i) <= tau(a_{i+1}) and tautilde(a_1+..+a_i) > tautilde(rest),
      (b) tau(a_i) >  tau(a_{i+1}) and tautilde(a_1+..+a_i) <= tautilde(rest),
    in which case S = (-1)^{#positions satisfying (a)}.
    """
    classes = list(classes)
    if not classes:
        raise ValueError("S coefficient needs at least one class")
    if any(c.is_zero() for c in classes):
        raise ZeroClassError("S coefficient requires nonzero classes")
    n = len(classes)
    r = 0
    for i in range(n - 1):
        left = classes[0]
        for c in classes[1:i + 1]:
            left = left + c
        right = classes[i + 1]
        for c in classes[i + 2:]:
            right = right + c
        tau_i, tau_next = tau.slope(classes[i]), tau.slope(classes[i + 1])
        tt_left, tt_right = tautilde.slope(left), tautilde.slope(right)
        if tau_i <= tau_next and tt_left > tt_right:
            r += 1
        elif tau_i > tau_next and tt_left <= tt_right:
            pass
        else:
            return 0
    return (-1) ** r


def _chains(n: int, length: int):
    """Strictly increasing chains 0 = x_0 < x_1 < ... < x_len = n."""
    for mids in itertools.combinations(range(1, n), length - 1):
        yield (0,) + mids + (n,)


def u_coeff(classes: Sequence[DimVector], tau: Stability,
            tautilde: Stability) -> Fraction:
    """U(a_1,...,a_n; tau, tautilde): the weighted sum over double splittings.

    Enumerates 1 <= l <= m <= n with chains a_* (grouping the a's into m
    consecutive blocks b_i) and b_* (grouping the b's into l blocks g_i),
    subject to tau being constant on each b-block (equal to tau of its
    parts) and tautilde(g_i) = tautilde(total) for every i.  Each
    admissible splitting contributes
    (-1)^{l-1}/l * prod_i S(b-block_i; tau, tautilde) * prod_i 1/(block size)!.
    """
    classes = list(classes)
    if not classes:
        raise ValueError("U coefficient needs at least one class")
    if any(c.is_zero() for c in classes):
        raise ZeroClassError("U coefficient requires nonzero classes")
    n = len(classes)
    total = classes[0]
    for c in classes[1:]:
        total = total + c
    tt_total = tautilde.slope(total)
    tau_slopes = [tau.slope(c) for c in classes]

    result = Fraction(0)
    for m in range(1, n + 1):
        for a_chain in _chains(n, m):
            betas = []
            ok = True
            for i in range(m):
                lo, hi = a_chain[i], a_chain[i + 1]
                beta = classes[lo]
                for c in classes[lo + 1:hi]:
                    beta = beta + c
                mu_beta = tau.slope(beta)
                if any(tau_slopes[j] != mu_beta for j in range(lo, hi)):
                    ok = False
                    break
                betas.append(beta)
            if not ok:
                continue
            block_factor = Fraction(1)
            for i in range(m):
                block_factor /= factorial(a_chain[i + 1] - a_chain[i])
            for l in range(1, m + 1):
                for b_chain in _chains(m, l):
                    gammas_ok = True
                    s_product = 1
                    for i in range(l):
                        lo, hi = b_chain[i], b_chain[i + 1]
                        gamma = betas[lo]
                        for b in betas[lo + 1:hi]:
                            gamma = gamma + b
                        if tautilde.slope(gamma) != tt_total:
                            gammas_ok = False
                            break
                        s_product *= s_coeff(betas[lo:hi], tau, tautilde)
                        if s_product == 0:
                            break
                    if not gammas_ok or s_product == 0:
                        continue
                    result += (Fraction((-1) ** (l - 1), l)
                               * s_product * block_factor)
    return result


# ---------------------------------------------------------------------------
# trees
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrientedTree:
    """Tree on vertices 1..n with directed edges; the underlying undirected
    graph must be connected and acyclic."""

    n: int
    edges: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(
            (int(i), int(j)) for i, j in self.edges))
        if self.n < 1:
            raise ValueError("tree needs at least one vertex")
        if len(self.edges) != self.n - 1:
            raise ValueError("a tree on n vertices has n - 1 edges")
        seen = {1}
        adj: Dict[int, List[int]] = {v: [] for v in range(1, self.n + 1)}
        for i, j in self.edges:
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"edge ({i},{j}) out of range")
            adj[i].append(j)
            adj[j].append(i)
        stack = [1]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != self.n:
            raise ValueError("tree is not connected")

    def vertices(self):
        return range(1, self.n + 1)


def _tree_from_pruefer(seq: Tuple[int, ...], n: int) -> Tuple[Tuple[int, int], ...]:
    degree = [1] * (n + 1)
    for v in seq:
        degree[v] += 1
    leaves = [v for v in range(1, n + 1) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((min(leaf, v), max(leaf, v)))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    last = sorted(leaves)
    edges.append((last[0], last[1]))
    return tuple(sorted(edges))


def enumerate_ordered_trees(n: int) -> List[OrientedTree]:
    """All labeled trees on {1..n}, each edge oriented small -> large.

    There are n^{n-2} of them for n >= 2 (Cayley), one for n = 1.  Trees
    are produced from Pruefer sequences, so the count is automatic.
    """
    if n <= 0:
        raise ValueError("n must be >= 1")
    if n == 1:
        return [OrientedTree(1, ())]
    if n == 2:
        return [OrientedTree(2, ((1, 2),))]
    out = []
    for seq in itertools.product(range(1, n + 1), repeat=n - 2):
        out.append(OrientedTree(n, _tree_from_pruefer(seq, n)))
    return out


def linear_extensions(tree: OrientedTree):
    """Orderings i_1..i_n of the vertices with every edge i_a -> i_b
    appearing with a < b (i.e. linear extensions of the edge order)."""
    succ: Dict[int, List[int]] = {v: [] for v in tree.vertices()}
    indeg = {v: 0 for v in tree.vertices()}
    for i, j in tree.edges:
        succ[i].append(j)
        indeg[j] += 1

    def rec(available, order):
        if not available:
            yield tuple(order)
            return
        for v in sorted(available):
            order.append(v)
            newly = []
            for w in succ[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    newly.append(w)
            nxt = (available - {v}) | set(newly)
            yield from rec(nxt, order)
            for w in succ[v]:
                indeg[w] += 1
            order.pop()

    roots = {v for v in tree.vertices() if indeg[v] == 0}
    yield from rec(roots, [])


def v_coeff(tree: OrientedTree, kappa: Dict[int, DimVector], tau: Stability,
            tautilde: Stability) -> Fraction:
    """V(I, Gamma, kappa; tau, tautilde) = 1/(2^{n-1} n!) times the sum of
    U over all orderings of the vertices compatible with the edges."""
    if set(kappa) != set(tree.vertices()):
        raise ValueError("class assignment does not match tree vertices")
    n = tree.n
    total = Fraction(0)
    for order in linear_extensions(tree):
        total += u_coeff([kappa[v] for v in order], tau, tautilde)
    return total / (2 ** (n - 1) * factorial(n))


# ---------------------------------------------------------------------------
# the transformation law
# ---------------------------------------------------------------------------

def transform_dt(table: DTTable, tau: Stability, tautilde: Stability,
                 target: DimVector) -> Fraction:
    """DT value of ``target`` at ``tautilde`` from a DT table at ``tau``.

    Flattened tree sum: over n >= 1, ordered tuples (a_1,...,a_n) of
    nonzero classes summing to target, and trees with edges oriented
    small -> large,
      (-1)^{n-1} / 2^{n-1} * U(a_1..a_n; tau, tautilde)
      * (-1)^{sum_{i<j} |chi(a_i,a_j)|} * prod_edges chi(a_i, a_j)
      * prod_i DT^{a_i}(tau).
    Every class componentwise below the target must be present in the
    table.
    """
    if target.is_zero():
        raise ZeroClassError("transform undefined on zero class")
    quiver = table.quiver
    quiver._check(target)
    result = Fraction(0)
    for parts in vector_compositions(target):
        n = len(parts)
        dt_product = Fraction(1)
        try:
            for p in parts:
                dt_product *= table[p]
        except KeyError as exc:
            raise MissingTableEntryError(str(exc)) from exc
        if dt_product == 0:
            continue
        u = u_coeff(parts, tau, tautilde)
        if u == 0:
            continue
        chi = [[euler_form_antisym(quiver, parts[i], parts[j])
                for j in range(n)] for i in range(n)]
        sign_exp = sum(abs(chi[i][j])
                       for i in range(n) for j in range(i + 1, n))
        tree_sum = Fraction(0)
        for tree in enumerate_ordered_trees(n):
            prod = 1
            for i, j in tree.edges:
                prod *= chi[i - 1][j - 1]
                if prod == 0:
                    break
            tree_sum += prod
        if tree_sum == 0:
            continue
        result += (Fraction((-1) ** (n - 1), 2 ** (n - 1)) * u
                   * (-1) ** sign_exp * tree_sum * dt_product)
    return result


def transform_table(table: DTTable, tau: Stability, tautilde: Stability) -> DTTable:
    """Apply :func:`transform_dt` to every class of the table's box."""
    entries = {d: transform_dt(table, tau, tautilde, d) for d in table.entries}
    return DTTable(table.quiver, tautilde, table.box, entries, kind=table.kind)
