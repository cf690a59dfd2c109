from fractions import Fraction
from math import comb

import pytest

from turanlab.constructions import (
    blow_up,
    complete,
    complete_partite,
    fan_vertices,
    ladder,
    ladder_fan,
    zycle,
)
from turanlab.core import HOMOMORPHISM, VertexMap, check_map, contains_copy, make_hypergraph
from turanlab.extremal import turan_number
from turanlab.verify import (
    LadderEmbedding,
    ZycleHom,
    blowup_zycle_pipeline,
    common_length,
    cycle_up,
    extract_zycle_from_blowup,
    find_ladder_in_blowup,
    greedy_ladder_embed,
    ladder_embedding_from_map,
    ladder_violation,
    rungs_below,
    strict_monotonicity_experiment,
    supersaturation_scan,
    verify_augment_ladder_free,
    verify_dj_zycle_free,
)

from oracles import brute_ex_top_down, brute_min_copies

EDGE = make_hypergraph(3, 3, [[0, 1, 2]])


def zycle_reduction(length, target_len):
    """The index-reduction hom zycle(3, target_len) -> zycle(3, length)."""
    image = tuple((i % length) * 2 + j for i in range(target_len) for j in range(2))
    return VertexMap(target_len * 2, image, HOMOMORPHISM)


@pytest.mark.parametrize("H", [zycle(3, 2), complete(3, 4)])
def test_extract_from_blowup(H):
    t, bmap, emb = find_ladder_in_blowup(H)
    assert emb.length == comb(4, 2) + 1
    assert ladder_violation(emb) is None
    zh = extract_zycle_from_blowup(H, bmap, emb)
    assert 2 <= zh.length <= comb(4, 2)
    assert check_map(zh.map, zycle(3, zh.length), H)


def test_extract_rejects_short_ladder():
    H = complete(3, 4)
    B, bmap = blow_up(H, 2)
    m = contains_copy(B, ladder(3, 3))
    emb = ladder_embedding_from_map(3, 3, m, B)
    with pytest.raises(ValueError):
        extract_zycle_from_blowup(H, bmap, emb)


def test_extract_rejects_foreign_map():
    H = complete(3, 4)
    t, bmap, emb = find_ladder_in_blowup(H)
    _, other = blow_up(complete(3, 5), t)
    with pytest.raises(ValueError):
        extract_zycle_from_blowup(complete(3, 5), other, emb)


def test_cycle_up():
    Z2 = zycle(3, 2)
    base = ZycleHom(2, Z2, VertexMap(4, (0, 1, 2, 3), HOMOMORPHISM))
    up = cycle_up(base, 6)
    assert up.length == 6 and check_map(up.map, zycle(3, 6), Z2)
    assert up.map == zycle_reduction(2, 6)
    Z3 = zycle(3, 3)
    base3 = ZycleHom(3, Z3, VertexMap(6, tuple(range(6)), HOMOMORPHISM))
    assert cycle_up(base3, 3).map.image == tuple(range(6))
    with pytest.raises(ValueError):
        cycle_up(base, 3)
    assert common_length([2, 3, 4]) == 12


def test_cycle_up_repeats_edge_images():
    Z2 = zycle(3, 2)
    base = ZycleHom(2, Z2, VertexMap(4, (1, 0, 3, 2), HOMOMORPHISM))
    up = cycle_up(base, 8)
    base_imgs = [tuple(sorted(base.map.image[v] for v in e)) for e in zycle(3, 2).edges]
    up_imgs = [tuple(sorted(up.map.image[v] for v in e)) for e in zycle(3, 8).edges]
    assert sorted(up_imgs) == sorted(base_imgs * 4)


@pytest.mark.parametrize("H", [zycle(3, 2), complete(3, 4)])
def test_pipeline_end_to_end(H):
    rep = blowup_zycle_pipeline(H, 6)
    assert rep.conclusion["holds"] and not rep.falsified
    assert rep.conclusion["base_length"] <= 6
    cert = rep.certificates[-1]
    vm = VertexMap(cert["map"]["source_size"], tuple(cert["map"]["image"]), HOMOMORPHISM)
    assert check_map(vm, zycle(3, 6), H)


def test_pipeline_non_multiple_reports():
    rep = blowup_zycle_pipeline(complete(3, 4), 5)
    assert rep.conclusion["holds"] is False
    assert rep.conclusion["suggested_length"] == 10
    assert not rep.falsified


def test_greedy_examples():
    r = greedy_ladder_embed(complete(3, 9), 3)
    assert r.success and ladder_violation(r.embedding) is None
    r = greedy_ladder_embed(ladder(3, 4), 4)
    assert r.success and ladder_violation(r.embedding) is None
    r = greedy_ladder_embed(complete_partite(3, [3, 3, 3]), 2)
    assert not r.success and r.depth == 1
    assert contains_copy(complete_partite(3, [3, 3, 3]), ladder(3, 2)) is None


@pytest.mark.parametrize("r", [4, 5])
def test_greedy_complete_range(r):
    for ell in range(1, 4):
        res = greedy_ladder_embed(complete(3, r), ell)
        assert res.success == (2 * ell + 1 <= r)
        if res.success:
            assert ladder_violation(res.embedding) is None


def test_greedy_without_backtracking():
    assert greedy_ladder_embed(complete(3, 7), 3, backtrack=False).success
    # the first top edge of ladder(3,4) is a bottom-rung edge; committing to it fails
    strict = greedy_ladder_embed(ladder(3, 4), 4, backtrack=False)
    assert not strict.success
    assert greedy_ladder_embed(ladder(3, 4), 4).success


def test_rungs_below():
    L = ladder(3, 2)
    m = L.provenance.name_map
    top = (m["v_{2,1}"], m["v_{2,2}"])
    assert rungs_below(L, top) == [(m["v_{1,1}"], m["v_{1,2}"])]


def test_ladder_violation_detects_problems():
    L = ladder(3, 2)
    good = LadderEmbedding(2, ((0, 1), (2, 3)), 4, L)
    assert ladder_violation(good) is None
    assert ladder_violation(LadderEmbedding(2, ((0, 1), (2, 3)), 3, L)) == "repeated_vertex"
    assert ladder_violation(LadderEmbedding(2, ((2, 3), (0, 1)), 4, L)) == "missing_rung_edge"


@pytest.mark.parametrize("n", [4, 6, 8, 10, 12])
def test_dj_zycle_free(n):
    rep = verify_dj_zycle_free(n, 3)
    assert rep.conclusion["holds"] and not rep.falsified
    assert rep.conclusion["density"] == {"num": 1, "den": 2}


def test_dj_small():
    rep = verify_dj_zycle_free(4, 2)
    assert rep.conclusion["holds"] and rep.conclusion["edges"] == 2


def test_augment_empty_host():
    H = make_hypergraph(3, 8, [])
    rep = verify_augment_ladder_free(H, 1, range(6))
    assert rep.hypotheses_hold and rep.conclusion_holds
    assert rep.conclusion["augmented_edges"] == 8


def test_augment_edge_inside_tail():
    H = make_hypergraph(3, 8, [[0, 1, 6]])
    rep = verify_augment_ladder_free(H, 1, range(6))
    assert rep.hypotheses[0]["holds"] is False
    assert rep.hypotheses[0]["witness"] == [0, 1]
    assert not rep.falsified


@pytest.mark.parametrize("ell_fan,m", [(1, 4), (2, 6)])
def test_augment_fan_scenarios(ell_fan, m):
    H = ladder_fan(3, ell_fan, m)
    rep = verify_augment_ladder_free(H, ell_fan + 1, fan_vertices(H))
    assert rep.hypotheses_hold and rep.conclusion_holds


@pytest.mark.parametrize("ell_fan,m", [(1, 4), (2, 6)])
def test_augment_fan_same_length_fails_hypothesis(ell_fan, m):
    H = ladder_fan(3, ell_fan, m)
    rep = verify_augment_ladder_free(H, ell_fan, fan_vertices(H))
    assert rep.hypotheses[0]["holds"]
    assert rep.hypotheses[1]["holds"] is False
    assert rep.conclusion_holds is False
    assert not rep.falsified


def test_strict_monotonicity_experiment():
    rep = strict_monotonicity_experiment(3, 1, 5)
    vals = {c["quantity"]: c["value"] for c in rep.certificates}
    assert vals["ladder"] == 0 and vals["ladder_next"] >= 1
    assert rep.conclusion["holds"]
    rep = strict_monotonicity_experiment(3, 1, 6)
    vals = {c["quantity"]: c["value"] for c in rep.certificates}
    assert vals["ladder_next"] == brute_ex_top_down(6, 3, [ladder(3, 2)]) == 10
    rep = strict_monotonicity_experiment(3, 2, 6)
    vals = {c["quantity"]: c["value"] for c in rep.certificates}
    assert vals["ladder"] <= vals["ladder_next"] == comb(6, 3)
    assert rep.conclusion["holds"] and not rep.falsified


def test_supersaturation_scan():
    assert supersaturation_scan(EDGE, 4, 1).conclusion["minimum"] == 1
    assert supersaturation_scan(complete(3, 4), 4, 4).conclusion["minimum"] == 1
    ex5 = turan_number(5, [complete(3, 4)]).value
    rep = supersaturation_scan(complete(3, 4), 5, ex5 + 1)
    assert rep.hypotheses[0]["holds"]
    assert rep.conclusion["minimum"] == brute_min_copies(5, 3, complete(3, 4), ex5 + 1) == 1
    # at the extremal count itself the minimum drops to zero
    assert supersaturation_scan(complete(3, 4), 5, ex5).conclusion["minimum"] == 0
    with pytest.raises(ValueError):
        supersaturation_scan(EDGE, 6, 1)
