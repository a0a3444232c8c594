"""Acceptance gate: each criterion runs at its stated tolerance.

Every test prints one PASS line (visible with ``pytest -s`` or in captured
output); a failed assertion is the FAIL signal.  The shared corpus covers
rooted and unrooted instances with |X| in [4, 8], m in {2, 3} and x in
{0, 1, 2}, four seeds per cell: 240 instances, all oracle-tractable.
"""

import os
import random
import time
from dataclasses import dataclass

import pytest

import mafkit as mk

from helpers import approximate, random_forest


@dataclass
class Record:
    spec: mk.GenSpec
    inst: mk.Instance
    opt: int
    minres: "mk.MinKResult"
    approx: "mk.ApproxResult"


def _build_corpus():
    records = []
    for rooted in (True, False):
        taxa = range(3, 8) if rooted else range(4, 9)  # |X| spans 4..8 both ways
        for n in taxa:
            for m in (2, 3):
                for x in (0, 1, 2):
                    for s in range(4):
                        spec = mk.GenSpec(
                            n=n, m=m, x=x, seed=1009 * s + 13 * n + 7 * m + x,
                            rooted=rooted,
                        )
                        inst = mk.generate_instance(spec)
                        opt = mk.brute_force_maf(inst).opt_order
                        minres = mk.find_min_k(inst)
                        records.append(
                            Record(spec, inst, opt, minres, approximate(inst))
                        )
    return records


@pytest.fixture(scope="module")
def corpus():
    t0 = time.perf_counter()
    records = _build_corpus()
    elapsed = time.perf_counter() - t0
    print(f"\n[corpus] {len(records)} instances solved three ways in {elapsed:.1f}s")
    return records


def test_criterion_1_oracle_exactness(corpus):
    assert len(corpus) >= 200
    wrong = [r for r in corpus if r.minres.order != r.opt]
    assert not wrong, [(r.spec, r.opt, r.minres.order) for r in wrong[:5]]
    assert all(r.minres.af.verify(r.inst) for r in corpus)
    print(f"criterion 1 PASS: find_min_k == oracle on {len(corpus)}/{len(corpus)} instances")


def test_criterion_2_approximation_ratio(corpus):
    worst_rooted = 0.0
    worst_unrooted = 0.0
    for r in corpus:
        limit = 3 if r.spec.rooted else 4
        assert r.approx.order <= limit * r.opt, (r.spec, r.approx.order, r.opt)
        ratio = r.approx.order / r.opt
        if r.spec.rooted:
            worst_rooted = max(worst_rooted, ratio)
        else:
            worst_unrooted = max(worst_unrooted, ratio)
    assert worst_rooted <= 3.0
    print(
        "criterion 2 PASS: zero ratio violations "
        f"(worst rooted {worst_rooted:.3f} <= 3, worst unrooted {worst_unrooted:.3f} <= 4)"
    )


def test_criterion_3_search_tree_bound(corpus):
    for r in corpus:
        base = 3 if r.spec.rooted else 4
        for st in r.minres.attempts:
            assert st.leaves <= base**st.k, (r.spec, st.k, st.leaves)
            assert st.max_depth <= st.k
    total = sum(len(r.minres.attempts) for r in corpus)
    print(f"criterion 3 PASS: leaves <= {{3,4}}^k with no slack across {total} searches")


def test_criterion_4_generation_bound(corpus):
    rooted = [r for r in corpus if r.spec.rooted]
    assert len(rooted) >= 50
    for r in rooted:
        assert r.opt <= r.spec.order_bound(), (r.spec, r.opt)
    print(f"criterion 4 PASS: oracle order <= x*(m-1)+1 on {len(rooted)} rooted instances")


def test_criterion_5_reduction_preservation(corpus):
    sample = corpus[::2]  # every other record: 120 instances
    assert len(sample) >= 100
    for r in sample:
        reduced, _ = mk.reduce_instance(r.inst)
        assert mk.brute_force_maf(reduced).opt_order == r.opt, r.spec
    print(f"criterion 5 PASS: optimum preserved by reduction on {len(sample)} instances")


def test_criterion_6_throughput():
    inst = mk.generate_instance(mk.GenSpec(n=50, m=5, x=2, seed=606))
    t0 = time.perf_counter()
    res = mk.approx_rmaf(inst)
    amaf_s = time.perf_counter() - t0
    assert res.order >= 1
    assert amaf_s < 2.0, f"amaf on t50-5 took {amaf_s:.2f}s (>2x the 1s target)"

    pmaf_times = []
    for seed in (41, 42):
        inst = mk.generate_instance(mk.GenSpec(n=40, m=2, x=5, seed=seed))
        t0 = time.perf_counter()
        ares = mk.approx_rmaf(inst)
        exact = mk.find_min_k(inst, max(1, ares.order // 3))
        dt = time.perf_counter() - t0
        pmaf_times.append(dt)
        assert exact.order <= 6
        assert dt < 120.0, f"pmaf on t40-2 took {dt:.1f}s (>2x the 60s target)"
    slow = amaf_s > 1.0 or any(t > 60.0 for t in pmaf_times)
    note = " (over 1x target, within 2x: reported)" if slow else ""
    print(
        f"criterion 6 PASS: amaf t50-5 {amaf_s*1000:.0f}ms, "
        f"pmaf t40-2 {max(pmaf_times):.2f}s max{note}"
    )


POACEAE_DIR = os.environ.get("MAF_POACEAE_DIR")
POACEAE_SETS = [
    ("rpoC2_waxy_ITS.nwk", 5),
    ("ndhF_phyB_rbcL.nwk", 8),
    ("ndhF_phyB_rbcL_rpoC2_ITS.nwk", 10),
]


@pytest.mark.skipif(
    not POACEAE_DIR,
    reason="optional check: set MAF_POACEAE_DIR to a directory with the three "
    "grass-locus tree files (see README)",
)
def test_criterion_7_poaceae_orders():
    for fname, want in POACEAE_SETS:
        path = os.path.join(POACEAE_DIR, fname)
        with open(path, encoding="utf-8") as fh:
            inst = mk.parse_instance(fh.read(), rooted=True, name=fname)
        res = mk.find_min_k(inst)
        assert res.order == want, (fname, res.order, want)
    print("criterion 7 PASS: published orders 5, 8, 10 reproduced")


def test_criterion_8_validity_suites(corpus):
    rng = random.Random(88)
    for _ in range(30):
        f = random_forest(rng, rng.randint(3, 8), rooted=rng.random() < 0.5)
        assert f.force_contract().same_structure(f)
    for _ in range(30):
        rooted = rng.random() < 0.5
        spec = mk.GenSpec(n=rng.randint(3, 9), m=2, x=1, seed=rng.randrange(10**6),
                          rooted=rooted)
        t = mk.generate_instance(spec).forests[0]
        text = mk.serialize(t)
        assert mk.parse_instance(text, rooted).forests[0].same_structure(t)
    for r in corpus[:40]:
        assert r.minres.af.verify(r.inst)
        assert mk.certify(r.approx.forest, r.inst).verify(r.inst)
    print("criterion 8 PASS: contraction, round-trip and certificate suites clean")
