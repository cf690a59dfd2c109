"""Finite, certificate-producing versions of the constructive proof steps.

Each ``verify_*`` procedure returns a :class:`Report`; producers and the
validators that check their output are kept on separate code paths.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb, lcm
from typing import Any, Sequence

from .constructions import (
    BlowupMap,
    augment_tail,
    blow_up,
    dj_construction,
    hom_image_family,
    ladder,
    nearly_balanced_parts,
    zycle,
)
from .core import (
    HOMOMORPHISM,
    Hypergraph,
    VertexMap,
    canonical_form,
    check_map,
    contains_copy,
    count_copies,
    edge_density,
    iter_bits,
    make_hypergraph,
    map_violation,
)
from .extremal import UNLIMITED, SearchBudget, turan_number
from .formats import to_json_obj as hypergraph_json


@dataclass
class Report:
    procedure: str
    inputs: dict[str, Any]
    hypotheses: list[dict[str, Any]] = field(default_factory=list)
    conclusion: dict[str, Any] = field(default_factory=dict)
    certificates: list[dict[str, Any]] = field(default_factory=list)
    falsification: dict[str, Any] | None = None

    @property
    def hypotheses_hold(self) -> bool:
        return all(h["holds"] for h in self.hypotheses)

    @property
    def conclusion_holds(self) -> bool:
        return bool(self.conclusion.get("holds"))

    @property
    def falsified(self) -> bool:
        return self.falsification is not None

    def to_json(self) -> dict[str, Any]:
        return {
            "procedure": self.procedure,
            "inputs": self.inputs,
            "hypotheses": self.hypotheses,
            "conclusion": self.conclusion,
            "certificates": self.certificates,
            "falsification": self.falsification,
        }


def _frac(x) -> dict[str, int]:
    return {"num": x.numerator, "den": x.denominator}


# ---------------------------------------------------------------------------
# Ladder embeddings and zycle homomorphisms


@dataclass(frozen=True)
class LadderEmbedding:
    length: int
    rungs: tuple[tuple[int, ...], ...]  # rung 1 first
    tail: int
    target: Hypergraph


@dataclass(frozen=True)
class ZycleHom:
    length: int
    target: Hypergraph
    map: VertexMap

    @property
    def k(self) -> int:
        return self.target.k


def ladder_violation(emb: LadderEmbedding) -> str | None:
    """Check ``emb`` directly against the ladder definition."""
    H, k = emb.target, emb.target.k
    if emb.length < 1 or len(emb.rungs) != emb.length:
        return "wrong_length"
    if any(len(r) != k - 1 for r in emb.rungs):
        return "wrong_rung_size"
    verts = [v for r in emb.rungs for v in r] + [emb.tail]
    if len(set(verts)) != len(verts):
        return "repeated_vertex"
    if any(not 0 <= v < H.n for v in verts):
        return "out_of_range"
    edges = set(H.edges)
    for lower, upper in zip(emb.rungs, emb.rungs[1:]):
        for x in upper:
            if tuple(sorted(lower + (x,))) not in edges:
                return "missing_rung_edge"
    if tuple(sorted(emb.rungs[-1] + (emb.tail,))) not in edges:
        return "missing_tail_edge"
    return None


def ladder_embedding_from_map(k: int, ell: int, vmap: VertexMap, target: Hypergraph) -> LadderEmbedding:
    """Read a map out of ``ladder(k, ell)`` (row-major numbering) as rungs and tail."""
    rungs = tuple(
        tuple(vmap.image[i * (k - 1) + j] for j in range(k - 1)) for i in range(ell)
    )
    return LadderEmbedding(ell, rungs, vmap.image[ell * (k - 1)], target)


def extract_zycle_from_blowup(H: Hypergraph, bmap: BlowupMap, ladder_copy: LadderEmbedding) -> ZycleHom:
    """Fold a long ladder in a blow-up of H into a zycle homomorphism into H.

    Rung class sets are (k-1)-subsets of V(H), so a ladder with more than
    C(|V(H)|, k-1) rungs repeats one.  The rungs between the first repeat
    close up into a zycle whose image lies in H.
    """
    k = H.k
    if bmap.base != H:
        raise ValueError("blow-up map does not belong to H")
    if len(bmap.class_of) != ladder_copy.target.n:
        raise ValueError("blow-up map does not cover the ladder's host")
    bound = comb(H.n, k - 1)
    if ladder_copy.length < bound + 1:
        raise ValueError(f"ladder of length {ladder_copy.length} cannot force a repeat; need {bound + 1}")
    f = bmap.class_of
    seen: dict[frozenset[int], int] = {}
    first = second = -1
    for i, rung in enumerate(ladder_copy.rungs):
        classes = frozenset(f[v] for v in rung)
        if len(classes) != k - 1:
            raise ValueError(f"rung {i + 1} is not rainbow under the class map")
        if classes in seen:
            first, second = seen[classes], i
            break
        seen[classes] = i
    assert first >= 0, "pigeonhole guarantees a repeat"
    length = second - first
    # consecutive rungs span an edge together, so their class sets differ
    assert length >= 2
    image = tuple(
        f[ladder_copy.rungs[first + r][j]] for r in range(length) for j in range(k - 1)
    )
    zh = ZycleHom(length, H, VertexMap(length * (k - 1), image, HOMOMORPHISM))
    if not check_map(zh.map, zycle(k, length), H):
        raise AssertionError("folded zycle map is not a homomorphism")
    return zh


def cycle_up(base: ZycleHom, M: int) -> ZycleHom:
    """Wind a zycle homomorphism around M / base.length times."""
    if M < 2 or M % base.length:
        raise ValueError(f"target length {M} is not a multiple of {base.length}")
    k = base.k
    image = tuple(
        base.map.image[(i % base.length) * (k - 1) + j] for i in range(M) for j in range(k - 1)
    )
    return ZycleHom(M, base.target, VertexMap(M * (k - 1), image, HOMOMORPHISM))


def common_length(lengths: Sequence[int]) -> int:
    """Smallest zycle length every given length divides."""
    return lcm(*lengths)


def find_ladder_in_blowup(H: Hypergraph, t: int | None = None, max_t: int = 8):
    """Search blow-ups of H for a ladder long enough to force a repeated rung class.

    Returns ``(t, blow-up map, LadderEmbedding)`` or None.
    """
    k = H.k
    ell = comb(H.n, k - 1) + 1
    L = ladder(k, ell)
    t0 = t if t is not None else max(1, -(-L.n // max(H.n, 1)))
    for tt in range(t0, (t if t is not None else max_t) + 1):
        B, bmap = blow_up(H, tt)
        vmap = contains_copy(B, L)
        if vmap is not None:
            return tt, bmap, ladder_embedding_from_map(k, ell, vmap, B)
    return None


def blowup_zycle_pipeline(H: Hypergraph, target_length: int, t: int | None = None) -> Report:
    """blow-up -> ladder search -> pigeonhole fold -> cycle up to ``target_length``."""
    report = Report("pipeline", {"host": hypergraph_json(H), "target_length": target_length, "t": t})
    found = find_ladder_in_blowup(H, t)
    report.hypotheses.append({
        "name": "ladder_in_blowup",
        "statement": f"some blow-up of H contains ladder of length C({H.n},{H.k - 1})+1",
        "holds": found is not None,
    })
    if found is None:
        report.conclusion = {"statement": "no long ladder found in the searched blow-ups", "holds": False}
        return report
    tt, bmap, emb = found
    lv = ladder_violation(emb)
    base = extract_zycle_from_blowup(H, bmap, emb)
    report.certificates.append({
        "kind": "ladder_in_blowup",
        "t": tt,
        "rungs": [list(r) for r in emb.rungs],
        "tail": emb.tail,
        "valid": lv is None,
    })
    report.certificates.append({"kind": "base_zycle_hom", "length": base.length, "map": base.map.to_json()})
    bound = comb(H.n, H.k - 1)
    if target_length % base.length:
        report.conclusion = {
            "statement": f"base length {base.length} does not divide {target_length}",
            "holds": False,
            "suggested_length": common_length([base.length, target_length]),
        }
        return report
    up = cycle_up(base, target_length)
    violation = map_violation(up.map, zycle(H.k, target_length), H)
    report.certificates.append({"kind": "cycled_zycle_hom", "length": up.length, "map": up.map.to_json()})
    holds = violation is None and lv is None and 2 <= base.length <= bound
    report.conclusion = {
        "statement": f"zycle({H.k},{target_length}) maps homomorphically into H",
        "holds": holds,
        "base_length": base.length,
        "base_length_bound": bound,
    }
    if not holds:
        report.falsification = {"ladder": lv, "cycled_map": violation, "base_length": base.length}
    return report


# ---------------------------------------------------------------------------
# Greedy ladder embedding under codegree conditions


@dataclass(frozen=True)
class GreedyResult:
    embedding: LadderEmbedding | None
    depth: int  # rungs placed on the deepest branch

    @property
    def success(self) -> bool:
        return self.embedding is not None


def rungs_below(H: Hypergraph, rung: Sequence[int], forbidden: int = 0) -> list[tuple[int, ...]]:
    """(k-1)-sets W avoiding ``forbidden`` with ``W + {x}`` an edge for every x in ``rung``.

    Equivalently W is an edge of every vertex link of the rung.
    """
    common: set[int] | None = None
    for x in rung:
        bit = 1 << x
        here = {m ^ bit for m in H.edge_masks if m & bit}
        common = here if common is None else common & here
    if not common:
        return []
    return sorted(tuple(iter_bits(w)) for w in common if not w & forbidden)


def greedy_ladder_embed(H: Hypergraph, ell: int, backtrack: bool = True) -> GreedyResult:
    """Build a ladder top-down: an edge gives the top rung and tail, then each
    lower rung is a fresh (k-1)-set in the common link of the rung above.

    ``backtrack=False`` commits to the first choice at every step.
    """
    if ell < 1:
        raise ValueError("ladder length must be >= 1")
    k = H.k
    deepest = 0
    rungs: list[tuple[int, ...]] = []  # top rung first

    def descend(used: int) -> bool:
        nonlocal deepest
        deepest = max(deepest, len(rungs))
        if len(rungs) == ell:
            return True
        for w in rungs_below(H, rungs[-1], used):
            rungs.append(w)
            if descend(used | sum(1 << v for v in w)):
                return True
            rungs.pop()
            if not backtrack:
                return False
        return False

    for e in H.edges:
        for tail in e:
            top = tuple(v for v in e if v != tail)
            rungs.append(top)
            if descend(sum(1 << v for v in e)):
                emb = LadderEmbedding(ell, tuple(reversed(rungs)), tail, H)
                return GreedyResult(emb, ell)
            rungs.pop()
            if not backtrack:
                return GreedyResult(None, deepest)
    return GreedyResult(None, deepest)


# ---------------------------------------------------------------------------
# Report-producing procedures


def verify_dj_zycle_free(n: int, ell_max: int) -> Report:
    if n < 4:
        raise ValueError("DJ check needs n >= 4")
    H = dj_construction(n)
    density = edge_density(H)
    report = Report("dj", {"n": n, "zycle_max": ell_max})
    free_all = True
    for ell in range(2, ell_max + 1):
        emb = contains_copy(H, zycle(3, ell))
        report.certificates.append({"zycle_length": ell, "free": emb is None})
        if emb is not None:
            free_all = False
            report.falsification = {"zycle_length": ell, "embedding": emb.to_json()}
            break
    report.conclusion = {
        "statement": f"dj_construction({n}) contains no zycle(3, l) for 2 <= l <= {ell_max}",
        "holds": free_all,
        "density": _frac(density),
        "edges": H.num_edges,
    }
    return report


def tail_codegree_free(H: Hypergraph, T: Sequence[int]) -> tuple[int, ...] | None:
    """A (k-1)-subset of T lying in an edge of H, or None."""
    tmask = sum(1 << v for v in T)
    for e, m in zip(H.edges, H.edge_masks):
        inside = m & tmask
        if bin(inside).count("1") >= H.k - 1:
            return tuple(itertools.islice(iter_bits(inside), H.k - 1))
    return None


def verify_augment_ladder_free(
    H: Hypergraph,
    ell: int,
    T: Sequence[int],
    parts: Sequence[Sequence[int]] | None = None,
) -> Report:
    """Check the tail-augmentation step on a concrete host.

    Hypotheses checked: (a) no (k-1)-subset of T lies in an edge of H;
    (b) H avoids every quotient of ``ladder(k, ell)``.  Conclusion: H plus
    a complete k-partite graph on T is ``ladder(k, ell+1)``-free.
    """
    k = H.k
    T = sorted(T)
    if parts is None:
        parts = nearly_balanced_parts(T, k)
    report = Report("augment", {
        "host": hypergraph_json(H), "length": ell, "tail": T, "parts": [list(p) for p in parts],
    })
    bad = tail_codegree_free(H, T)
    report.hypotheses.append({
        "name": "tail_sets_uncovered",
        "statement": f"no {k - 1}-subset of T lies in an edge of H",
        "holds": bad is None,
        "witness": None if bad is None else list(bad),
    })
    hit = None
    for idx, Q in enumerate(hom_image_family(ladder(k, ell))):
        emb = contains_copy(H, Q)
        if emb is not None:
            hit = {"member": idx, "member_graph": hypergraph_json(Q), "embedding": emb.to_json()}
            break
    report.hypotheses.append({
        "name": "quotient_family_free",
        "statement": f"H contains no quotient image of ladder({k},{ell})",
        "holds": hit is None,
        "witness": hit,
    })
    H2 = augment_tail(H, T, parts)
    emb = contains_copy(H2, ladder(k, ell + 1))
    report.conclusion = {
        "statement": f"augmented host is ladder({k},{ell + 1})-free",
        "holds": emb is None,
        "augmented_edges": H2.num_edges,
    }
    if emb is not None:
        report.certificates.append({"kind": "ladder_in_augmented", "embedding": emb.to_json()})
        if report.hypotheses_hold:
            report.falsification = {"embedding": emb.to_json()}
    return report


def strict_monotonicity_experiment(
    k: int, ell: int, n: int, budget: SearchBudget = UNLIMITED, threads: int = 1
) -> Report:
    """ex(n) for the quotient family of ladder(k, ell), for ladder(k, ell), and for ladder(k, ell+1).

    Only ex(n, ladder ell) <= ex(n, ladder ell+1) is asserted; it follows from
    the shorter ladder sitting inside the longer one.  Strictness is reported.
    """
    report = Report("monotonicity", {"k": k, "length": ell, "n": n, "budget": budget.to_json()})
    fam = hom_image_family(ladder(k, ell))
    r_fam = turan_number(n, fam, budget, threads)
    r_short = turan_number(n, [ladder(k, ell)], budget, threads)
    r_long = turan_number(n, [ladder(k, ell + 1)], budget, threads)
    for name, r in (("quotient_family", r_fam), ("ladder", r_short), ("ladder_next", r_long)):
        report.certificates.append({
            "quantity": name,
            "value": r.value,
            "density": _frac(r.density),
            "optimal": r.optimal,
            "witness": hypergraph_json(r.witness),
        })
    all_optimal = r_fam.optimal and r_short.optimal and r_long.optimal
    report.hypotheses.append({"name": "searches_complete", "statement": "all three searches finished", "holds": all_optimal})
    holds = r_short.value <= r_long.value if all_optimal else None
    report.conclusion = {
        "statement": f"ex({n}, ladder({k},{ell})) <= ex({n}, ladder({k},{ell + 1}))",
        "holds": holds,
        "family_strictly_below_next": r_fam.value < r_long.value if all_optimal else None,
        "ladder_strictly_below_next": r_short.value < r_long.value if all_optimal else None,
    }
    if all_optimal and r_short.value > r_long.value:
        report.falsification = {"ex_ladder": r_short.value, "ex_ladder_next": r_long.value}
    return report


SUPERSAT_CAP = 12


def iter_hosts_up_to_iso(n: int, k: int, edge_floor: int = 0, cap: int = SUPERSAT_CAP):
    """One representative per isomorphism class of k-graphs on n vertices with
    at least ``edge_floor`` edges."""
    cands = list(itertools.combinations(range(n), k))
    if len(cands) > cap:
        raise ValueError(f"C({n},{k}) = {len(cands)} candidate edges exceeds the cap of {cap}")
    seen: set[bytes] = set()
    for size in range(max(edge_floor, 0), len(cands) + 1):
        for chosen in itertools.combinations(cands, size):
            H = make_hypergraph(k, n, chosen)
            label = canonical_form(H)
            if label not in seen:
                seen.add(label)
                yield H


def supersaturation_scan(F: Hypergraph, n: int, edge_floor: int, cap: int = SUPERSAT_CAP) -> Report:
    """Fewest copies of F over all n-vertex hosts with at least ``edge_floor`` edges."""
    report = Report("supersat", {"pattern": hypergraph_json(F), "n": n, "edge_floor": edge_floor, "cap": cap})
    best = None
    best_host = None
    hosts = 0
    for H in iter_hosts_up_to_iso(n, F.k, edge_floor, cap):
        hosts += 1
        c = count_copies(H, F)
        if best is None or c < best:
            best, best_host = c, H
    ex = turan_number(n, [F]).value if n >= F.k and F.num_edges else None
    above = ex is not None and edge_floor > ex
    report.hypotheses.append({
        "name": "floor_above_extremal",
        "statement": f"edge_floor > ex({n}, F)",
        "holds": above,
        "ex": ex,
    })
    report.conclusion = {
        "statement": "minimum number of copies of F over qualifying hosts",
        "holds": best is not None and (not above or best >= 1),
        "minimum": best,
        "hosts_examined": hosts,
    }
    if best_host is not None:
        report.certificates.append({"kind": "minimizer", "host": hypergraph_json(best_host)})
    if above and best == 0:
        report.falsification = {"host": hypergraph_json(best_host)}
    return report


def min_copies(report: Report) -> int | None:
    return report.conclusion.get("minimum")
