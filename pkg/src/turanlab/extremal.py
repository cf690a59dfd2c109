"""Exact Turán numbers by branch-and-bound over the edges of the complete host.

Every copy of every forbidden graph inside ``complete(k, n)`` is enumerated
once, as a bitmask over candidate edges, and filed under its last edge in
colex order.  The search then decides the candidate edges in that order, so
adding edge ``i`` only has to look at the copies that end at ``i``.
"""

from __future__ import annotations

import itertools
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .constructions import hom_image_family
from .core import (
    Hypergraph,
    UniformityError,
    VertexMap,
    contains_copy,
    edge_density,
    has_homomorphism,
    make_hypergraph,
)

log = logging.getLogger(__name__)


class SearchInvariantError(RuntimeError):
    """A computed result contradicts a proven property; the search is wrong."""


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int | None = None
    max_time: float | None = None

    @property
    def unlimited(self) -> bool:
        return self.max_nodes is None and self.max_time is None

    def to_json(self) -> dict:
        return {"max_nodes": self.max_nodes, "max_time": self.max_time}


UNLIMITED = SearchBudget()


@dataclass
class ExtremalResult:
    n: int
    k: int
    value: int
    witness: Hypergraph
    optimal: bool
    nodes_explored: int
    family: list[Hypergraph]
    relation: str = "copy"
    budget: SearchBudget = field(default_factory=SearchBudget)

    @property
    def density(self) -> Fraction:
        return Fraction(self.value, comb(self.n, self.k))


def candidate_edges(n: int, k: int) -> list[tuple[int, ...]]:
    """All k-subsets of ``range(n)`` in colex order."""
    return sorted(itertools.combinations(range(n), k), key=lambda e: e[::-1])


def _strip_isolated(F: Hypergraph) -> Hypergraph:
    used = sorted({v for e in F.edges for v in e})
    index = {v: i for i, v in enumerate(used)}
    return make_hypergraph(F.k, len(used), ([index[v] for v in e] for e in F.edges))


def copy_masks(n: int, F: Hypergraph, index: dict[tuple[int, ...], int]) -> set[int]:
    """Edge-index bitmasks of every copy of F in the complete k-graph on n vertices."""
    if F.n > n:
        return set()
    core = _strip_isolated(F)
    v = core.n
    labelled = set()
    for perm in itertools.permutations(range(v)):
        labelled.add(tuple(sorted(tuple(sorted(perm[x] for x in e)) for e in core.edges)))
    out = set()
    for subset in itertools.combinations(range(n), v):
        for edges in labelled:
            m = 0
            for e in edges:
                m |= 1 << index[tuple(subset[x] for x in e)]
            out.add(m)
    return out


def _validate_family(n: int, family: Sequence[Hypergraph]) -> int:
    if not family:
        raise ValueError("forbidden family is empty")
    ks = {F.k for F in family}
    if len(ks) != 1:
        raise UniformityError(f"family mixes uniformities {sorted(ks)}")
    k = ks.pop()
    if n < k:
        raise ValueError(f"host size n={n} is smaller than uniformity k={k}")
    for F in family:
        if F.num_edges == 0 and F.n <= n:
            raise ValueError("an edgeless forbidden graph is contained in every host")
    return k


class _Truncated(Exception):
    pass


def _run_subtree(
    m: int,
    ending: list[list[int]],
    start: int,
    included: int,
    count: int,
    max_nodes: int | None,
    deadline: float | None,
) -> tuple[int, int, int, bool]:
    """Depth-first search below a fixed prefix.

    Returns (best value, best mask, nodes, completed); best value is -1 if
    the subtree holds nothing.
    """
    best = -1
    best_mask = 0
    nodes = 0

    def dfs(i: int, inc: int, cnt: int) -> None:
        nonlocal best, best_mask, nodes
        nodes += 1
        if max_nodes is not None and nodes > max_nodes:
            raise _Truncated
        if deadline is not None and (nodes & 1023) == 0 and time.monotonic() > deadline:
            raise _Truncated
        if cnt + (m - i) <= best:
            return
        if i == m:
            best, best_mask = cnt, inc
            return
        with_i = inc | (1 << i)
        for c in ending[i]:
            if c & with_i == c:
                break
        else:
            dfs(i + 1, with_i, cnt + 1)
        dfs(i + 1, inc, cnt)

    try:
        dfs(start, included, count)
        completed = True
    except _Truncated:
        completed = False
    return best, best_mask, nodes, completed


def _prefixes(m: int, ending: list[list[int]], depth: int) -> list[tuple[int, int]]:
    """Valid (included mask, count) after deciding the first ``depth`` edges, in DFS order."""
    out = []

    def rec(i: int, inc: int, cnt: int) -> None:
        if i == depth:
            out.append((inc, cnt))
            return
        with_i = inc | (1 << i)
        if all(c & with_i != c for c in ending[i]):
            rec(i + 1, with_i, cnt + 1)
        rec(i + 1, inc, cnt)

    rec(0, 0, 0)
    return out


def _search(
    n: int,
    k: int,
    family: Sequence[Hypergraph],
    budget: SearchBudget,
    threads: int,
) -> tuple[int, Hypergraph, bool, int]:
    edges = candidate_edges(n, k)
    m = len(edges)
    index = {e: i for i, e in enumerate(edges)}
    copies: set[int] = set()
    for F in family:
        copies |= copy_masks(n, F, index)
    ending: list[list[int]] = [[] for _ in range(m)]
    for c in copies:
        ending[c.bit_length() - 1].append(c)
    for lst in ending:
        lst.sort()
    log.debug("n=%d k=%d: %d candidate edges, %d forbidden copies", n, k, m, len(copies))

    deadline = None if budget.max_time is None else time.monotonic() + budget.max_time
    # a shared node budget would make truncation schedule-dependent
    if threads > 1 and budget.max_nodes is None and m > 8:
        depth = min(m, 6)
        prefixes = _prefixes(m, ending, depth)
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_run_subtree, m, ending, depth, inc, cnt, None, deadline)
                for inc, cnt in prefixes
            ]
            results = [f.result() for f in futures]
        best, best_mask, nodes, completed = -1, 0, 0, True
        for value, mask, sub_nodes, sub_done in results:
            nodes += sub_nodes
            completed = completed and sub_done
            if value > best:
                best, best_mask = value, mask
    else:
        best, best_mask, nodes, completed = _run_subtree(
            m, ending, 0, 0, 0, budget.max_nodes, deadline
        )
    if best < 0:
        best, best_mask = 0, 0
    witness = make_hypergraph(k, n, (edges[i] for i in range(m) if best_mask >> i & 1))
    return best, witness, completed, nodes


def turan_number(
    n: int,
    family: Sequence[Hypergraph],
    budget: SearchBudget = UNLIMITED,
    threads: int = 1,
) -> ExtremalResult:
    """ex(n, family): most edges of an n-vertex k-graph containing no member.

    With a finite budget the best graph found so far is returned with
    ``optimal=False``.
    """
    family = list(family)
    k = _validate_family(n, family)
    value, witness, optimal, nodes = _search(n, k, family, budget, threads)
    for F in family:
        if contains_copy(witness, F) is not None:
            raise SearchInvariantError(f"witness for ex({n}) contains a forbidden graph")
    return ExtremalResult(n, k, value, witness, optimal, nodes, family, "copy", budget)


def hom_turan_number(
    t: int,
    F: Hypergraph,
    budget: SearchBudget = UNLIMITED,
    threads: int = 1,
) -> ExtremalResult:
    """Most edges of a t-vertex k-graph that admits no homomorphism from F."""
    k = _validate_family(t, [F])
    images = hom_image_family(F)
    value, witness, optimal, nodes = _search(t, k, images, budget, threads)
    if has_homomorphism(F, witness) is not None:
        raise SearchInvariantError(f"witness for ex_hom({t}) receives a homomorphism")
    return ExtremalResult(t, k, value, witness, optimal, nodes, [F], "hom", budget)


@dataclass(frozen=True)
class DensityPoint:
    n: int
    ex: int
    ratio: Fraction
    optimal: bool


@dataclass
class DensitySeq:
    family: list[Hypergraph]
    points: list[DensityPoint]
    relation: str = "copy"

    def csv_rows(self) -> list[list]:
        k = self.family[0].k
        return [
            [p.n, p.ex, comb(p.n, k), p.ratio.numerator, p.ratio.denominator, str(p.optimal).lower()]
            for p in self.points
        ]


def density_seq(
    family: Sequence[Hypergraph],
    n_from: int,
    n_to: int,
    budget: SearchBudget = UNLIMITED,
    hom: bool = False,
    threads: int = 1,
) -> DensitySeq:
    """ex(n)/C(n,k) for n in ``n_from..n_to``; ``hom`` uses ex_hom of the single member."""
    family = list(family)
    if hom and len(family) != 1:
        raise ValueError("the homomorphic variant takes exactly one forbidden graph")
    k = _validate_family(n_from, family)
    points = []
    for n in range(n_from, n_to + 1):
        if hom:
            res = hom_turan_number(n, family[0], budget, threads)
        else:
            res = turan_number(n, family, budget, threads)
        points.append(DensityPoint(n, res.value, Fraction(res.value, comb(n, k)), res.optimal))
    for a, b in zip(points, points[1:]):
        if a.optimal and b.optimal and b.ratio > a.ratio:
            raise SearchInvariantError(
                f"density increased from n={a.n} ({a.ratio}) to n={b.n} ({b.ratio})"
            )
    return DensitySeq(family, points, "hom" if hom else "copy")


@dataclass
class LowerBound:
    certified: bool
    witness: Hypergraph
    density: Fraction | None
    violation: tuple[int, VertexMap] | None = None  # (family index, embedding)


def lower_bound_from_construction(H: Hypergraph, family: Sequence[Hypergraph]) -> LowerBound:
    """Certify ``H`` as family-free; its density is then a lower bound at n = |V(H)|."""
    for idx, F in enumerate(family):
        if F.k != H.k:
            raise UniformityError(f"uniformity mismatch: {F.k} vs {H.k}")
        emb = contains_copy(H, F)
        if emb is not None:
            return LowerBound(False, H, None, (idx, emb))
    return LowerBound(True, H, edge_density(H))


@dataclass
class DensityBracket:
    lower: Fraction
    lower_witness: Hypergraph
    n_lower: int
    upper: Fraction
    upper_result: ExtremalResult
    n_upper: int

    @property
    def upper_optimal(self) -> bool:
        return self.upper_result.optimal


def pad_vertices(H: Hypergraph, n: int) -> Hypergraph:
    if n < H.n:
        raise ValueError(f"cannot pad {H.n} vertices down to {n}")
    return make_hypergraph(H.k, n, H.edges, H.provenance)


def bracket(
    family: Sequence[Hypergraph],
    construction: Hypergraph,
    n: int,
    budget: SearchBudget = UNLIMITED,
    threads: int = 1,
) -> DensityBracket:
    """Pair a certified construction density with the exact ex(n)/C(n,k).

    A construction on fewer than ``n`` vertices is padded with isolated
    vertices, so both ends refer to the same host size.
    """
    family = list(family)
    if construction.n < n:
        construction = pad_vertices(construction, n)
    lb = lower_bound_from_construction(construction, family)
    if not lb.certified:
        assert lb.violation is not None
        raise ValueError(f"construction contains forbidden member #{lb.violation[0]}")
    assert lb.density is not None
    upper = turan_number(n, family, budget, threads)
    br = DensityBracket(lb.density, construction, construction.n, upper.density, upper, n)
    # finite monotonicity: ex(N)/C(N,k) <= ex(n)/C(n,k) for N >= n
    if upper.optimal and br.n_lower >= br.n_upper and br.lower > br.upper:
        raise SearchInvariantError(f"bracket inverted: {br.lower} > {br.upper}")
    return br
