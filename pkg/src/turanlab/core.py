"""Hypergraph data model and the search primitives everything else is built on.

Vertices are always ``0..n-1``.  Edges are stored as sorted tuples and, for
the inner loops, as integer bitmasks over the vertex set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence

EMBEDDING = "embedding"
HOMOMORPHISM = "homomorphism"


class HypergraphError(ValueError):
    """Invalid hypergraph data.  ``code`` names the violated invariant."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class UniformityError(ValueError):
    pass


@dataclass(frozen=True)
class Provenance:
    """Where a generated hypergraph came from.

    ``name_map`` sends readable vertex names (``"v_{2,1}"``, ``"t"``,
    ``"a_3"``...) to vertex ids.
    """

    family: str
    parameters: tuple[int, ...] = ()
    name_map: Mapping[str, int] | None = field(default=None, compare=False)

    def to_json(self) -> dict:
        out: dict = {"family": self.family, "parameters": list(self.parameters)}
        if self.name_map is not None:
            out["name_map"] = dict(self.name_map)
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "Provenance":
        name_map = data.get("name_map")
        return cls(
            family=str(data["family"]),
            parameters=tuple(int(p) for p in data.get("parameters", ())),
            name_map=None if name_map is None else {str(a): int(b) for a, b in name_map.items()},
        )


@dataclass(frozen=True)
class Hypergraph:
    k: int
    n: int
    edges: tuple[tuple[int, ...], ...]
    provenance: Provenance | None = field(default=None, compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_masks(self) -> tuple[int, ...]:
        return tuple(_mask(e) for e in self.edges)

    @cached_property
    def mask_set(self) -> frozenset[int]:
        return frozenset(self.edge_masks)

    @cached_property
    def incidence(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        inc: list[list[tuple[int, ...]]] = [[] for _ in range(self.n)]
        for e in self.edges:
            for v in e:
                inc[v].append(e)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(x) for x in self.incidence)

    @cached_property
    def neighbor_masks(self) -> tuple[int, ...]:
        """For each vertex, the mask of vertices sharing an edge with it."""
        out = [0] * self.n
        for e, m in zip(self.edges, self.edge_masks):
            for v in e:
                out[v] |= m
        return tuple(m & ~(1 << v) for v, m in enumerate(out))

    @cached_property
    def link_table(self) -> dict[int, int]:
        """(k-1)-set mask -> mask of vertices completing it to an edge."""
        table: dict[int, int] = {}
        for e, m in zip(self.edges, self.edge_masks):
            for v in e:
                key = m ^ (1 << v)
                table[key] = table.get(key, 0) | (1 << v)
        return table

    def has_edge(self, vertices: Iterable[int]) -> bool:
        return _mask(vertices) in self.mask_set

    def with_provenance(self, provenance: Provenance | None) -> "Hypergraph":
        return Hypergraph(self.k, self.n, self.edges, provenance)


def _mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def make_hypergraph(
    k: int,
    n: int,
    edges: Iterable[Iterable[int]],
    provenance: Provenance | None = None,
) -> Hypergraph:
    """Build a normalized hypergraph; duplicate edges collapse to one.

    Raises HypergraphError with code ``repeated_vertex``,
    ``wrong_cardinality`` or ``vertex_out_of_range`` for a bad edge.
    """
    if not isinstance(k, int) or k < 2:
        raise HypergraphError("invalid_uniformity", f"uniformity must be an integer >= 2, got {k!r}")
    if not isinstance(n, int) or n < 0:
        raise HypergraphError("invalid_size", f"vertex count must be an integer >= 0, got {n!r}")
    seen: set[tuple[int, ...]] = set()
    for raw in edges:
        e = tuple(int(v) for v in raw)
        if len(set(e)) != len(e):
            raise HypergraphError("repeated_vertex", f"edge {list(e)} repeats a vertex")
        if len(e) != k:
            raise HypergraphError("wrong_cardinality", f"edge {list(e)} has {len(e)} vertices, expected {k}")
        for v in e:
            if not 0 <= v < n:
                raise HypergraphError("vertex_out_of_range", f"vertex {v} of edge {list(e)} not in 0..{n - 1}")
        seen.add(tuple(sorted(e)))
    return Hypergraph(k, n, tuple(sorted(seen)), provenance)


def empty_hypergraph(k: int, n: int) -> Hypergraph:
    return make_hypergraph(k, n, [])


def _check_subset(H: Hypergraph, S: Sequence[int], size: int) -> tuple[int, ...]:
    s = tuple(sorted(int(v) for v in S))
    if len(s) != size or len(set(s)) != size:
        raise HypergraphError("wrong_cardinality", f"expected {size} distinct vertices, got {list(S)}")
    for v in s:
        if not 0 <= v < H.n:
            raise HypergraphError("vertex_out_of_range", f"vertex {v} not in 0..{H.n - 1}")
    return s


def link(H: Hypergraph, S: Sequence[int]) -> set[int]:
    """Vertices ``v`` with ``S + {v}`` an edge.  Its size is the codegree of S."""
    s = _check_subset(H, S, H.k - 1)
    return set(iter_bits(H.link_table.get(_mask(s), 0)))


def common_link(H: Hypergraph, tuples: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """All (k-1)-sets lying inside ``link(H, S)`` for every ``S`` in ``tuples``."""
    common = (1 << H.n) - 1
    for S in tuples:
        s = _check_subset(H, S, H.k - 1)
        common &= H.link_table.get(_mask(s), 0)
    return list(itertools.combinations(iter_bits(common), H.k - 1))


def min_degree(H: Hypergraph) -> int:
    if H.n == 0:
        raise HypergraphError("invalid_size", "minimum degree of a hypergraph with no vertices")
    return min(H.degrees)


def edge_density(H: Hypergraph) -> Fraction:
    if H.n < H.k:
        raise HypergraphError("invalid_size", f"density needs n >= k, got n={H.n}, k={H.k}")
    return Fraction(H.num_edges, comb(H.n, H.k))


# ---------------------------------------------------------------------------
# Vertex maps


@dataclass(frozen=True)
class VertexMap:
    source_size: int
    image: tuple[int, ...]
    kind: str = EMBEDDING

    def __call__(self, v: int) -> int:
        return self.image[v]

    def to_json(self) -> dict:
        return {"kind": self.kind, "source_size": self.source_size, "image": list(self.image)}


def map_violation(vmap: VertexMap, F: Hypergraph, H: Hypergraph) -> str | None:
    """Return a reason code if ``vmap`` is not a valid map F -> H, else None."""
    if vmap.source_size != F.n or len(vmap.image) != F.n:
        return "not_total"
    if any(not 0 <= x < H.n for x in vmap.image):
        return "out_of_range"
    if vmap.kind == EMBEDDING and len(set(vmap.image)) != F.n:
        return "not_injective"
    edges = set(H.edges)
    for e in F.edges:
        img = tuple(sorted(vmap.image[v] for v in e))
        if len(set(img)) != len(img):
            return "edge_collapsed"
        if img not in edges:
            return "edge_not_preserved"
    return None


def check_map(vmap: VertexMap, F: Hypergraph, H: Hypergraph) -> bool:
    return map_violation(vmap, F, H) is None


def _require_same_k(A: Hypergraph, B: Hypergraph) -> None:
    if A.k != B.k:
        raise UniformityError(f"uniformity mismatch: {A.k} vs {B.k}")


# ---------------------------------------------------------------------------
# Backtracking search for edge-preserving maps


@dataclass
class _Plan:
    order: list[int]
    closing_edges: list[list[tuple[int, ...]]]
    anchor: list[tuple[int, ...] | None]
    placed_nbrs: list[list[int]]


def _plan(F: Hypergraph) -> _Plan:
    """Most-constrained-first vertex order for matching F."""
    n = F.n
    placed: set[int] = set()
    order: list[int] = []
    deg = F.degrees
    nbr = F.neighbor_masks
    remaining = set(range(n))
    while remaining:
        best = None
        best_key = None
        for u in remaining:
            closed = sum(1 for e in F.incidence[u] if all(w in placed or w == u for w in e))
            touching = sum(1 for w in iter_bits(nbr[u]) if w in placed)
            key = (closed, touching, deg[u], -u)
            if best_key is None or key > best_key:
                best, best_key = u, key
        assert best is not None
        order.append(best)
        placed.add(best)
        remaining.discard(best)

    pos = {v: p for p, v in enumerate(order)}
    closing_edges: list[list[tuple[int, ...]]] = [[] for _ in order]
    for e in F.edges:
        closing_edges[max(pos[v] for v in e)].append(e)
    anchor: list[tuple[int, ...] | None] = []
    placed_nbrs: list[list[int]] = []
    for p, u in enumerate(order):
        anchor.append(tuple(w for w in closing_edges[p][0] if w != u) if closing_edges[p] else None)
        placed_nbrs.append([w for w in iter_bits(nbr[u]) if pos[w] < p])
    return _Plan(order, closing_edges, anchor, placed_nbrs)


def _iter_maps(F: Hypergraph, H: Hypergraph, injective: bool) -> Iterator[tuple[int, ...]]:
    """Yield every edge-preserving map F -> H (injective ones if requested)."""
    if F.n == 0:
        yield ()
        return
    if H.n == 0 or (injective and F.n > H.n):
        return
    plan = _plan(F)
    order = plan.order
    full = (1 << H.n) - 1
    mask_set = H.mask_set
    link_table = H.link_table
    nbrs = H.neighbor_masks
    if injective:
        hdeg = H.degrees
        deg_ok = [_mask(x for x in range(H.n) if hdeg[x] >= F.degrees[u]) for u in order]
    else:
        deg_ok = [full] * len(order)
    img = [-1] * F.n
    last = len(order)

    def rec(p: int, used: int) -> Iterator[tuple[int, ...]]:
        if p == last:
            yield tuple(img)
            return
        u = order[p]
        anc = plan.anchor[p]
        if anc is not None:
            key = 0
            for w in anc:
                key |= 1 << img[w]
            cand = link_table.get(key, 0)
        else:
            cand = full
            for w in plan.placed_nbrs[p]:
                cand &= nbrs[img[w]]
        cand &= deg_ok[p]
        if injective:
            cand &= ~used
        closing = plan.closing_edges[p]
        while cand:
            low = cand & -cand
            cand ^= low
            x = low.bit_length() - 1
            img[u] = x
            ok = True
            for e in closing:
                m = 0
                for w in e:
                    m |= 1 << img[w]
                if m not in mask_set:
                    ok = False
                    break
            if ok:
                yield from rec(p + 1, used | low)
        img[u] = -1

    yield from rec(0, 0)


def iter_embeddings(H: Hypergraph, F: Hypergraph) -> Iterator[VertexMap]:
    _require_same_k(H, F)
    for image in _iter_maps(F, H, injective=True):
        yield VertexMap(F.n, image, EMBEDDING)


def iter_homomorphisms(F: Hypergraph, H: Hypergraph) -> Iterator[VertexMap]:
    _require_same_k(F, H)
    for image in _iter_maps(F, H, injective=False):
        yield VertexMap(F.n, image, HOMOMORPHISM)


def contains_copy(H: Hypergraph, F: Hypergraph) -> VertexMap | None:
    """An injective edge-preserving map F -> H, or None if H is F-free."""
    return next(iter_embeddings(H, F), None)


def has_homomorphism(F: Hypergraph, H: Hypergraph) -> VertexMap | None:
    return next(iter_homomorphisms(F, H), None)


def automorphism_count(F: Hypergraph) -> int:
    return sum(1 for _ in _iter_maps(F, F, injective=True))


def count_copies(H: Hypergraph, F: Hypergraph) -> int:
    """Number of unlabeled copies: embeddings divided by |Aut(F)|."""
    _require_same_k(H, F)
    embeddings = sum(1 for _ in _iter_maps(F, H, injective=True))
    aut = automorphism_count(F)
    assert embeddings % aut == 0
    return embeddings // aut


def is_k_partite(F: Hypergraph) -> list[list[int]] | None:
    """Partition V(F) into k classes with every edge meeting each class once."""
    k = F.k
    order = _plan(F).order
    pos = {v: p for p, v in enumerate(order)}
    closing: list[list[tuple[int, ...]]] = [[] for _ in order]
    touching: list[list[tuple[int, ...]]] = [list(F.incidence[u]) for u in order]
    for e in F.edges:
        closing[max(pos[v] for v in e)].append(e)
    color = [-1] * F.n

    def rec(p: int, used_colors: int) -> bool:
        if p == len(order):
            return True
        u = order[p]
        # colors are interchangeable, so only open one new color at a time
        for c in range(min(k, used_colors + 1)):
            clash = False
            for e in touching[p]:
                if any(color[w] == c for w in e if w != u):
                    clash = True
                    break
            if clash:
                continue
            color[u] = c
            if rec(p + 1, max(used_colors, c + 1)):
                return True
        color[u] = -1
        return False

    if not rec(0, 0):
        return None
    parts: list[list[int]] = [[] for _ in range(k)]
    for v in range(F.n):
        parts[color[v]].append(v)
    return parts


# ---------------------------------------------------------------------------
# Canonical labeling


def _refine(H: Hypergraph, colors: list[int]) -> list[int]:
    inc = H.incidence
    ncells = len(set(colors))
    while True:
        sigs = []
        for v in range(H.n):
            around = sorted(tuple(sorted(colors[w] for w in e if w != v)) for e in inc[v])
            sigs.append((colors[v], tuple(around)))
        rank = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [rank[s] for s in sigs]
        if len(rank) == ncells:
            return new
        colors, ncells = new, len(rank)


def _individualize(colors: list[int], v: int) -> list[int]:
    keys = [(c, x != v) for x, c in enumerate(colors)]
    rank = {s: i for i, s in enumerate(sorted(set(keys)))}
    return [rank[s] for s in keys]


def _orbit_partition(n: int, gens: list[tuple[int, ...]]) -> list[int]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for x in range(n):
            a, b = find(x), find(g[x])
            if a != b:
                parent[a] = b
    return [find(x) for x in range(n)]


def _canonical_key(H: Hypergraph) -> tuple:
    n = H.n
    if n == 0:
        return (H.k, 0, ())

    def encode(labels: list[int]) -> tuple:
        return tuple(sorted(tuple(sorted(labels[v] for v in e)) for e in H.edges))

    best: list = [None, None]  # encoding, labels
    autos: list[tuple[int, ...]] = []

    def search(colors: list[int], prefix: tuple[int, ...]) -> None:
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        if len(cells) == n:
            enc = encode(colors)
            if best[0] is None or enc < best[0]:
                best[0], best[1] = enc, colors
            elif enc == best[0]:
                inv = [0] * n
                for v, lab in enumerate(best[1]):
                    inv[lab] = v
                autos.append(tuple(inv[colors[x]] for x in range(n)))
            return
        target = min((c for c in cells if len(cells[c]) > 1), key=lambda c: (len(cells[c]), c))
        explored: list[int] = []
        for v in cells[target]:
            if explored:
                stab = [g for g in autos if all(g[p] == p for p in prefix)]
                if stab:
                    orbit = _orbit_partition(n, stab)
                    if any(orbit[w] == orbit[v] for w in explored):
                        continue
            search(_refine(H, _individualize(colors, v)), prefix + (v,))
            explored.append(v)

    search(_refine(H, [0] * n), ())
    return (H.k, n, best[0])


def canonical_form(H: Hypergraph) -> bytes:
    """Isomorphism-invariant label: equal for two hypergraphs iff isomorphic."""
    k, n, edges = _canonical_key(H)
    body = ";".join(",".join(str(v) for v in e) for e in edges)
    return f"{k}|{n}|{body}".encode("ascii")


def relabel(H: Hypergraph, perm: Sequence[int]) -> Hypergraph:
    """Image of H under the vertex bijection ``v -> perm[v]``."""
    return make_hypergraph(H.k, H.n, ([perm[v] for v in e] for e in H.edges))


def is_isomorphic(A: Hypergraph, B: Hypergraph) -> bool:
    return canonical_form(A) == canonical_form(B)
