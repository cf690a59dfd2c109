"""Generators for ladders, zycles, blow-ups and the other families used in the proofs.

Numbering is row-major over the natural coordinates: ``v_{i,j}`` with ``i``
ascending then ``j`` ascending, and tail/fan vertices last.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .core import (
    Hypergraph,
    HypergraphError,
    Provenance,
    canonical_form,
    make_hypergraph,
)


@dataclass(frozen=True)
class BlowupMap:
    base: Hypergraph
    t: int
    class_of: tuple[int, ...]

    def preimages(self, v: int) -> list[int]:
        return [x for x, c in enumerate(self.class_of) if c == v]


def _need(cond: bool, message: str) -> None:
    if not cond:
        raise HypergraphError("invalid_parameters", message)


def _rows(k: int, ell: int, start: int = 0) -> tuple[list[list[int]], dict[str, int]]:
    rows = []
    names = {}
    for i in range(ell):
        row = []
        for j in range(k - 1):
            v = i * (k - 1) + j
            row.append(v)
            names[f"v_{{{i + start},{j + 1}}}"] = v
        rows.append(row)
    return rows, names


def ladder(k: int, ell: int) -> Hypergraph:
    """Ladder of length ``ell``: rung ``i`` plus any single vertex of rung
    ``i+1`` is an edge, and the top rung is closed off by the tail ``t``."""
    _need(k >= 2 and ell >= 1, f"ladder needs k >= 2 and length >= 1, got k={k}, length={ell}")
    rows, names = _rows(k, ell, start=1)
    tail = ell * (k - 1)
    names["t"] = tail
    edges = [rows[i] + [x] for i in range(ell - 1) for x in rows[i + 1]]
    edges.append(rows[-1] + [tail])
    return make_hypergraph(k, tail + 1, edges, Provenance("ladder", (k, ell), names))


def ladder_fan(k: int, ell: int, m: int) -> Hypergraph:
    """Ladder whose tail is replaced by ``m`` vertices, each closing the top rung."""
    _need(k >= 2 and ell >= 1 and m >= 1, f"ladder_fan needs k >= 2, length >= 1, m >= 1; got {k}, {ell}, {m}")
    rows, names = _rows(k, ell, start=1)
    base = ell * (k - 1)
    fan = list(range(base, base + m))
    for idx, v in enumerate(fan):
        names[f"t_{idx + 1}"] = v
    edges = [rows[i] + [x] for i in range(ell - 1) for x in rows[i + 1]]
    edges += [rows[-1] + [t] for t in fan]
    return make_hypergraph(k, base + m, edges, Provenance("ladder_fan", (k, ell, m), names))


def fan_vertices(H: Hypergraph) -> list[int]:
    """The tail set of a ``ladder_fan`` output."""
    if H.provenance is None or H.provenance.family != "ladder_fan" or H.provenance.name_map is None:
        raise ValueError("not a ladder_fan construction")
    return sorted(v for name, v in H.provenance.name_map.items() if name.startswith("t_"))


def zycle(k: int, ell: int) -> Hypergraph:
    """Cyclic ladder: rung indices run over Z/ell.

    For ``k = 2, ell = 2`` the two defining edges coincide, so the result has
    a single edge.
    """
    _need(k >= 2 and ell >= 2, f"zycle needs k >= 2 and length >= 2, got k={k}, length={ell}")
    rows, names = _rows(k, ell, start=0)
    edges = [rows[i] + [x] for i in range(ell) for x in rows[(i + 1) % ell]]
    return make_hypergraph(k, ell * (k - 1), edges, Provenance("zycle", (k, ell), names))


def blow_up(F: Hypergraph, t: int) -> tuple[Hypergraph, BlowupMap]:
    """Replace every vertex by ``t`` copies; copy ``c`` of ``v`` is ``v*t + c``."""
    _need(isinstance(t, int) and t >= 1, f"blow-up factor must be >= 1, got {t}")
    class_of = tuple(v for v in range(F.n) for _ in range(t))
    edges = [
        [v * t + c for v, c in zip(e, choice)]
        for e in F.edges
        for choice in itertools.product(range(t), repeat=F.k)
    ]
    names = {f"x_{{{v},{c}}}": v * t + c for v in range(F.n) for c in range(t)}
    H = make_hypergraph(F.k, F.n * t, edges, Provenance("blow_up", (F.k, F.n, t), names))
    return H, BlowupMap(F, t, class_of)


def complete(k: int, r: int) -> Hypergraph:
    _need(k >= 2 and r >= k, f"complete graph needs r >= k >= 2, got k={k}, r={r}")
    return make_hypergraph(k, r, itertools.combinations(range(r), k), Provenance("complete", (k, r)))


def complete_partite(k: int, sizes: Sequence[int]) -> Hypergraph:
    _need(len(sizes) == k, f"expected {k} part sizes, got {len(sizes)}")
    _need(all(s >= 0 for s in sizes), f"part sizes must be >= 0, got {list(sizes)}")
    parts = []
    names = {}
    nxt = 0
    for i, s in enumerate(sizes):
        part = list(range(nxt, nxt + s))
        for j, v in enumerate(part):
            names[f"p_{{{i + 1},{j + 1}}}"] = v
        parts.append(part)
        nxt += s
    return make_hypergraph(
        k, nxt, itertools.product(*parts), Provenance("complete_partite", (k, *sizes), names)
    )


def dj_construction(n: int) -> Hypergraph:
    """Two-sided 3-graph on A = {a_1..a_floor(n/2)}, B = {b_1..b_ceil(n/2)}.

    Edges are the triples ``a_i b_j a_c`` and ``a_i b_j b_c`` with ``i, j < c``.
    A occupies ids ``0..|A|-1``, B the rest.
    """
    _need(n >= 3, f"DJ construction needs n >= 3, got {n}")
    na, nb = n // 2, n - n // 2

    def a(i: int) -> int:
        return i - 1

    def b(j: int) -> int:
        return na + j - 1

    edges = []
    for c in range(1, na + 1):
        for i in range(1, c):
            for j in range(1, min(c, nb + 1)):
                edges.append((a(i), b(j), a(c)))
    for c in range(1, nb + 1):
        for i in range(1, min(c, na + 1)):
            for j in range(1, c):
                edges.append((a(i), b(j), b(c)))
    names = {f"a_{i}": a(i) for i in range(1, na + 1)}
    names.update({f"b_{j}": b(j) for j in range(1, nb + 1)})
    return make_hypergraph(3, n, edges, Provenance("dj", (n,), names))


def _quotient_partitions(F: Hypergraph):
    """Block assignments of V(F) that never merge two vertices of one edge."""
    nbr = F.neighbor_masks
    block_of = [-1] * F.n
    blocks: list[int] = []  # member masks

    def rec(v: int):
        if v == F.n:
            yield tuple(block_of)
            return
        for b, members in enumerate(blocks):
            if members & nbr[v]:
                continue
            block_of[v] = b
            blocks[b] = members | (1 << v)
            yield from rec(v + 1)
            blocks[b] = members
        block_of[v] = len(blocks)
        blocks.append(1 << v)
        yield from rec(v + 1)
        blocks.pop()
        block_of[v] = -1

    yield from rec(0)


def quotient(F: Hypergraph, block_of: Sequence[int]) -> Hypergraph:
    nblocks = max(block_of) + 1 if block_of else 0
    edges = [[block_of[v] for v in e] for e in F.edges]
    return make_hypergraph(F.k, nblocks, edges, Provenance("quotient", tuple(block_of)))


def hom_image_family(F: Hypergraph) -> list[Hypergraph]:
    """Quotient images of F, one per isomorphism class.

    A host contains a homomorphic image of F on at most |V(F)| vertices iff
    it contains one of these quotients, so this list stands in for the full
    family when forbidding.  Sorted by vertex count descending, so F itself
    comes first.
    """
    seen: dict[bytes, Hypergraph] = {}
    for block_of in _quotient_partitions(F):
        Q = quotient(F, block_of)
        label = canonical_form(Q)
        if label not in seen:
            seen[label] = Q
    return [seen[lab] for lab in sorted(seen, key=lambda lab: (-seen[lab].n, lab))]


def nearly_balanced_parts(T: Sequence[int], k: int) -> list[list[int]]:
    """Split sorted ``T`` into ``k`` consecutive parts of size floor or ceil of |T|/k,
    larger parts first."""
    T = sorted(T)
    q, r = divmod(len(T), k)
    parts, start = [], 0
    for i in range(k):
        size = q + (1 if i < r else 0)
        parts.append(T[start:start + size])
        start += size
    return parts


def augment_tail(
    H: Hypergraph,
    T: Sequence[int],
    parts: Sequence[Sequence[int]] | None = None,
    balanced: bool = False,
) -> Hypergraph:
    """H plus every transversal edge of ``parts`` (a partition of T into k classes).

    With ``parts=None`` the nearly balanced split of T is used.
    """
    k = H.k
    T = sorted(set(T))
    if any(not 0 <= v < H.n for v in T):
        raise HypergraphError("vertex_out_of_range", f"tail set {T} not inside 0..{H.n - 1}")
    if parts is None:
        parts = nearly_balanced_parts(T, k)
    parts = [sorted(p) for p in parts]
    flat = [v for p in parts for v in p]
    if len(parts) != k or sorted(flat) != T:
        raise HypergraphError("invalid_partition", f"parts {parts} do not partition {T} into {k} classes")
    if balanced:
        sizes = [len(p) for p in parts]
        if max(sizes) - min(sizes) > 1:
            raise HypergraphError("invalid_partition", f"parts sizes {sizes} are not nearly balanced")
    edges = list(H.edges) + list(itertools.product(*parts))
    return make_hypergraph(
        k, H.n, edges, Provenance("augmented", tuple(len(p) for p in parts))
    )
