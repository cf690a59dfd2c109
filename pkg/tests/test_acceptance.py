"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the summary lines.
"""

import itertools
import os
import random
import subprocess
import sys
import time
from fractions import Fraction
from functools import lru_cache
from math import comb

import pytest

from turanlab.constructions import (
    blow_up,
    complete,
    complete_partite,
    dj_construction,
    fan_vertices,
    hom_image_family,
    ladder,
    ladder_fan,
    zycle,
)
from turanlab.core import (
    HOMOMORPHISM,
    VertexMap,
    canonical_form,
    check_map,
    contains_copy,
    edge_density,
    is_k_partite,
    make_hypergraph,
)
from turanlab.extremal import hom_turan_number, turan_number
from turanlab.formats import dumps_json, dumps_khg, loads_json, loads_khg, parse_hypergraph_file
from turanlab.verify import (
    blowup_zycle_pipeline,
    greedy_ladder_embed,
    ladder_violation,
    verify_augment_ladder_free,
    verify_dj_zycle_free,
)

from oracles import brute_contains, brute_ex, brute_isomorphic

pytestmark = pytest.mark.acceptance

EDGE = make_hypergraph(3, 3, [[0, 1, 2]])
K4 = complete(3, 4)

FAMILIES = {
    "edge": [EDGE],
    "K4": [K4],
    "L2": [ladder(3, 2)],
    "Z2": [zycle(3, 2)],
    "L2-quotients": hom_image_family(ladder(3, 2)),
}


def report(num, title, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'} criterion {num:>2}: {title}"
    if detail:
        line += f" ({detail})"
    print("\n" + line)
    assert ok, line


@lru_cache(maxsize=None)
def ex_point(n, name):
    return turan_number(n, FAMILIES[name])


def test_01_oracle_equivalence():
    start = time.perf_counter()
    mismatches = []
    for n in (4, 5):
        for name, fam in FAMILIES.items():
            res = ex_point(n, name)
            expected = brute_ex(n, 3, fam)
            if not res.optimal or res.value != expected:
                mismatches.append((n, name, res.value, expected))
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 120
    report(1, "turan_number equals naive subset enumeration", ok,
           f"10 points, {len(mismatches)} mismatches, {elapsed:.1f}s")


def test_02_fixed_values():
    edge_vals = [turan_number(n, [EDGE]).value for n in range(3, 8)]
    k4 = turan_number(4, [K4])
    ok = edge_vals == [0] * 5 and k4.value == 3 and k4.optimal
    report(2, "ex(n, edge)=0 for n=3..7 and ex(4, K4)=3", ok, f"edge {edge_vals}, K4 {k4.value}")


def test_03_monotonicity():
    bad = []
    for name in FAMILIES:
        ratios = [Fraction(ex_point(n, name).value, comb(n, 3)) for n in (4, 5)]
        if ratios != sorted(ratios, reverse=True):
            bad.append(name)
    edge = [Fraction(turan_number(n, [EDGE]).value, comb(n, 3)) for n in range(3, 8)]
    if edge != sorted(edge, reverse=True):
        bad.append("edge 3..7")
    hom = [hom_turan_number(n, zycle(3, 2)) for n in (4, 5, 6)]
    hom_ratios = [Fraction(r.value, comb(r.n, 3)) for r in hom]
    if not all(r.optimal for r in hom) or hom_ratios != sorted(hom_ratios, reverse=True):
        bad.append("hom Z2")
    report(3, "exact density ratios non-increasing in n", not bad,
           f"hom Z2 ratios {[str(r) for r in hom_ratios]}, violations {bad}")


def test_04_construction_fidelity():
    bad = []
    for k in (3, 4, 5):
        for ell in range(1, 7):
            L = ladder(k, ell)
            if (L.n, L.num_edges) != (ell * (k - 1) + 1, (ell - 1) * (k - 1) + 1):
                bad.append(("ladder", k, ell))
            for m in (1, 2, 3):
                Lf = ladder_fan(k, ell, m)
                if (Lf.n, Lf.num_edges) != (ell * (k - 1) + m, (ell - 1) * (k - 1) + m):
                    bad.append(("fan", k, ell, m))
            if ell >= 2:
                Z = zycle(k, ell)
                if (Z.n, Z.num_edges) != (ell * (k - 1), ell * (k - 1)):
                    bad.append(("zycle", k, ell))
    for F in (EDGE, ladder(3, 2), zycle(3, 2)):
        for t in (1, 2, 3):
            B, _ = blow_up(F, t)
            if (B.n, B.num_edges) != (F.n * t, F.num_edges * t ** F.k):
                bad.append(("blowup", F.n, t))
    report(4, "ladder/fan/zycle/blow-up size formulas", not bad, f"{len(bad)} mismatches")


def test_05_zycle_complete_coincidence():
    by_label = canonical_form(zycle(3, 2)) == canonical_form(K4)
    by_brute = brute_isomorphic(zycle(3, 2), K4)
    report(5, "zycle(3,2) isomorphic to complete(3,4)", by_label and by_brute,
           f"canonical {by_label}, relabeling {by_brute}")


def test_06_dj_lower_bound():
    start = time.perf_counter()
    failures = []
    for n in range(4, 13, 2):
        D = dj_construction(n)
        for ell in (2, 3, 4):
            if contains_copy(D, zycle(3, ell)) is not None:
                failures.append((n, ell))
        rep = verify_dj_zycle_free(n, 4)
        if not rep.conclusion["holds"] or rep.falsified:
            failures.append((n, "report"))
    dens = edge_density(dj_construction(12))
    elapsed = time.perf_counter() - start
    ok = not failures and Fraction(2, 5) < dens <= Fraction(1, 2) and elapsed < 300
    report(6, "DJ(n) zycle-free for even n<=12, density(DJ(12)) in (2/5, 1/2]", ok,
           f"density {dens}, failures {failures}, {elapsed:.1f}s")


def test_07_partiteness_endpoints():
    got = {k: (is_k_partite(ladder(k, 1)) is not None, is_k_partite(ladder(k, 2)) is None) for k in (3, 4, 5)}
    ok = all(a and b for a, b in got.values())
    report(7, "ladder(k,1) k-partite, ladder(k,2) not, k=3..5", ok, str(got))


def test_08_blowup_pipeline():
    start = time.perf_counter()
    details = []
    ok = True
    for name, H in (("Z2", zycle(3, 2)), ("K4", K4)):
        rep = blowup_zycle_pipeline(H, 6)
        cert = rep.certificates[-1]
        vm = VertexMap(cert["map"]["source_size"], tuple(cert["map"]["image"]), HOMOMORPHISM)
        base = rep.conclusion.get("base_length")
        good = rep.conclusion["holds"] and check_map(vm, zycle(3, 6), H) and base is not None and base <= comb(4, 2)
        ok = ok and good
        details.append(f"{name} base {base}")
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 60
    report(8, "blow-up -> ladder -> extraction -> cycle_up(6) hom passes check_map", ok,
           f"{', '.join(details)}, {elapsed:.1f}s")


def test_09_augmentation():
    scenarios = [
        ("empty 8, T=6, len 1", make_hypergraph(3, 8, []), 1, list(range(6))),
        ("fan(3,1,4), len 2", ladder_fan(3, 1, 4), 2, None),
        ("fan(3,2,6), len 3", ladder_fan(3, 2, 6), 3, None),
    ]
    results = []
    for label, H, ell, T in scenarios:
        rep = verify_augment_ladder_free(H, ell, fan_vertices(H) if T is None else T)
        results.append(rep.hypotheses_hold and rep.conclusion_holds)
    mutated = make_hypergraph(3, 8, [[0, 1, 6]])
    rep = verify_augment_ladder_free(mutated, 1, range(6))
    mutated_ok = rep.hypotheses[0]["holds"] is False and not rep.falsified
    ok = all(results) and mutated_ok
    report(9, "augmentation passes on fixtures; edge inside T flagged as hypothesis failure", ok,
           f"fixtures {results}, mutated reported as hypothesis failure {mutated_ok}")


def test_10_greedy():
    outcomes = []
    for ell in range(1, 5):
        r = greedy_ladder_embed(complete(3, 2 * ell + 1), ell)
        outcomes.append(r.success and ladder_violation(r.embedding) is None)
    fail = greedy_ladder_embed(complete_partite(3, [3, 3, 3]), 2)
    ok = all(outcomes) and not fail.success and fail.depth == 1
    report(10, "greedy embeds into complete(3,2l+1), stops on K(3,3,3) at l=2", ok,
           f"successes {outcomes}, partite depth {fail.depth}")


def test_11_witness_fuzz():
    rng = random.Random(11)
    pool = [
        EDGE,
        K4,
        ladder(3, 2),
        zycle(3, 2),
        ladder_fan(3, 1, 2),
        make_hypergraph(3, 4, [[0, 1, 2], [0, 1, 3]]),
        make_hypergraph(3, 4, [[0, 1, 2], [1, 2, 3]]),
        make_hypergraph(3, 5, [[0, 1, 2], [2, 3, 4]]),
        make_hypergraph(3, 4, [[0, 1, 2], [0, 1, 3], [0, 2, 3]]),
    ]
    violations = 0
    for _ in range(500):
        family = rng.sample(pool, rng.randint(1, 2))
        res = turan_number(5, family)
        W = res.witness
        if W.n != 5 or W.num_edges != res.value or any(brute_contains(W, F) for F in family):
            violations += 1
    report(11, "500 random witnesses at n=5 pass brute freeness re-check", violations == 0,
           f"{violations} violations")


def _cli(*args, threads=1, cwd):
    env = dict(os.environ)
    env.pop("TURAN_THREADS", None)
    return subprocess.run(
        [sys.executable, "-m", "turanlab", *args, "--threads", str(threads)],
        cwd=cwd, env=env, capture_output=True,
    )


def test_12_cli_roundtrip_and_determinism(tmp_path):
    rng = random.Random(12)
    gen_cmds = []
    for k in (3, 4):
        for ell in (1, 2, 3):
            gen_cmds.append(["ladder", "--k", str(k), "--len", str(ell)])
            gen_cmds.append(["ladderfan", "--k", str(k), "--len", str(ell), "--m", "3"])
        for ell in (2, 3, 4):
            gen_cmds.append(["zycle", "--k", str(k), "--len", str(ell)])
        for r in (k, k + 1, k + 2):
            gen_cmds.append(["complete", "--k", str(k), "--r", str(r)])
    for n in range(3, 11):
        gen_cmds.append(["dj", "--n", str(n)])
    gen_cmds.append(["partite", "--k", "3", "--sizes", "2,2,2"])
    gen_cmds.append(["partite", "--k", "3", "--sizes", "1,2,3"])
    gen_cmds.append(["partite", "--k", "4", "--sizes", "1,1,2,2"])
    roundtrip_bad = []
    for i, gen_args in enumerate(gen_cmds):
        fmt = "khg" if i % 2 == 0 else "json"
        path = tmp_path / f"fx{i}.{fmt}"
        proc = _cli("gen", *gen_args, "--format", fmt, "-o", str(path), cwd=tmp_path)
        if proc.returncode != 0:
            roundtrip_bad.append((gen_args, proc.stderr.decode()))
            continue
        text = path.read_text()
        H = parse_hypergraph_file(path)
        dump = dumps_khg if fmt == "khg" else dumps_json
        load = loads_khg if fmt == "khg" else loads_json
        if dump(H) != text or load(dump(H)) != H or load(dump(H)).provenance != H.provenance:
            roundtrip_bad.append(gen_args)
    # top up with random hosts that carry no provenance
    n_random = 50 - len(gen_cmds)
    for _ in range(n_random):
        n = rng.randint(3, 7)
        cands = list(itertools.combinations(range(n), 3))
        H = make_hypergraph(3, n, rng.sample(cands, rng.randint(0, len(cands))))
        for dump, load in ((dumps_khg, loads_khg), (dumps_json, loads_json)):
            if load(dump(H)) != H or dump(load(dump(H))) != dump(H):
                roundtrip_bad.append(("random", H))
    n_fixtures = len(gen_cmds) + n_random

    fixtures = {"edge": EDGE, "K4": K4, "L2": ladder(3, 2), "Z2": zycle(3, 2)}
    for name, H in fixtures.items():
        (tmp_path / f"{name}.khg").write_text(dumps_khg(H))
    for i, Q in enumerate(FAMILIES["L2-quotients"]):
        (tmp_path / f"Q{i}.khg").write_text(dumps_khg(Q))
    quot = [a for i in range(len(FAMILIES["L2-quotients"])) for a in ("--forbid", f"Q{i}.khg")]
    commands = []
    for n in (4, 5):
        for name in fixtures:
            commands.append(["ex", "--n", str(n), "--forbid", f"{name}.khg"])
        commands.append(["ex", "--n", str(n), *quot])
    for n in range(4, 13, 2):
        commands.append(["verify", "dj", "--n", str(n), "--zycle-max", "4"])
    for name in ("Z2", "K4"):
        commands.append(["verify", "pipeline", "--host", f"{name}.khg", "--cycle-to", "6"])

    nondeterministic = []
    for j, cmd in enumerate(commands):
        outs = []
        for run, threads in enumerate((1, 1, 4)):
            out = tmp_path / f"out{j}_{run}.json"
            proc = _cli(*cmd, "-o", str(out), threads=threads, cwd=tmp_path)
            outs.append((proc.returncode, out.read_bytes() if out.exists() else None))
        if outs[0][0] != 0 or outs[0][1] is None or len(set(outs)) != 1:
            nondeterministic.append(" ".join(cmd))
    ok = n_fixtures >= 50 and not roundtrip_bad and not nondeterministic
    report(12, "CLI read/write identity and byte-identical reruns (threads 1, 1, 4)", ok,
           f"{n_fixtures} fixtures, {len(roundtrip_bad)} round-trip failures, "
           f"{len(commands)} commands, nondeterministic {nondeterministic}")
