"""Acceptance suite: one test per criterion, at the stated tolerances.

Each test prints a PASS line with its measurements (run pytest -s to see
them); a failure shows up as a normal pytest failure. The full-enumeration
reproduction is hours of work on many cores and only runs when
COLLAPSI_FULL_RUN=1 is set; everything else is desk scale.
"""

import os
import random
import statistics
import time

import pytest

from collapsi import deals, engine, harness, solver
from collapsi.engine import parse_state
from oracles import naive_destinations, plain_minimax, random_playout_state, random_state_with_face_up

FIG3_START = "JA2A/3JA4/2323/34A2 r(0,0) b(1,1) r"

TABLE_HISTOGRAM = {
    7: 24,
    8: 142_686,
    9: 87_936,
    10: 3_238_032,
    11: 5_505_996,
    12: 23_147_802,
    13: 12_127_044,
    14: 3_047_730,
}


def _report(name: str, detail: str) -> None:
    print(f"ACCEPTANCE PASS: {name} ({detail})")


def test_golden_deal():
    state = parse_state(FIG3_START)
    solver.warmup()
    start = time.perf_counter()
    result = solver.solve_score(state, pv=True)
    elapsed = time.perf_counter() - start
    assert result.score == 9
    assert solver.plies_to_end(state, result) == 7
    assert elapsed < 1.0
    _report("golden deal", f"score +9, win in 7 plies, {elapsed*1000:.1f} ms")


def test_enumeration_identities():
    assert deals.enumeration_total() == 15_765_750
    assert deals.weighted_total() == 47_297_250
    start = time.perf_counter()
    count, weight = deals.count_enumerated()
    elapsed = time.perf_counter() - start
    assert (count, weight) == (15_765_750, 47_297_250)
    assert elapsed < 60.0
    _report("enumeration identities", f"15,765,750 deals / 47,297,250 weighted in {elapsed:.1f} s")


def test_sampled_statistics():
    start = time.perf_counter()
    result = harness.run_sample(10_000, seed=1, workers=2)
    elapsed = time.perf_counter() - start
    stats = result.stats
    assert stats.deals_processed == 10_000
    red = stats.red_wins / 10_000
    assert 0.360 <= red <= 0.390
    buckets = stats.bucketed()
    twelve = buckets["12"] / 10_000
    assert 0.473 <= twelve <= 0.505
    assert buckets["<=6"] == 0
    assert max(stats.histogram) <= 14
    _report(
        "sampled statistics",
        f"red {red:.1%}, 12-ply {twelve:.1%}, <=6 bucket 0, {elapsed:.0f} s",
    )


def test_oracle_equivalence():
    start = time.perf_counter()
    rng = random.Random(90125)
    for _ in range(50):
        state = random_state_with_face_up(rng, 8)
        assert solver.solve_score(state).score == plain_minimax(state), engine.format_state(state)
    for _ in range(1000):
        state = random_playout_state(rng, rng.randrange(0, 13))
        got = {m.dest for m in engine.legal_moves(state)}
        assert got == naive_destinations(state), engine.format_state(state)
    elapsed = time.perf_counter() - start
    assert elapsed < 120.0
    _report("oracle equivalence", f"50 minimax states + 1000 move-gen states in {elapsed:.0f} s")


def test_symmetry_suite():
    start = time.perf_counter()
    rng = random.Random(271828)
    syms = engine.all_symmetries()
    for _ in range(100):
        deal = deals.random_deal(rng)
        base_score = solver.solve_score(deals.initial_state(deal)).score
        canon = engine.canonicalize(deal)[0]
        assert engine.canonicalize(canon)[0] == canon
        for sym in rng.sample(syms, 20):
            image = engine.transform_deal(deal, sym)
            assert solver.solve_score(deals.initial_state(image)).score == base_score
            assert engine.canonicalize(image)[0] == canon
    elapsed = time.perf_counter() - start
    assert elapsed < 300.0
    _report("symmetry suite", f"100 deals x 20 symmetries in {elapsed:.0f} s")


def test_determinism_across_workers_and_resume(tmp_path):
    sample_reports = set()
    for workers in (1, 4, os.cpu_count() or 2):
        result = harness.run_sample(300, seed=3, workers=workers)
        sample_reports.add(
            harness.emit_report(
                result.stats, "json", metadata={"n": 300, "seed": 3},
                std_errors=result.standard_errors,
            )
        )
    assert len(sample_reports) == 1

    shard = (123, 400_000)  # 40 deals
    exhaustive_reports = set()
    for workers in (1, 4, os.cpu_count() or 2):
        stats, completed = harness.run_exhaustive(*shard, workers=workers, block_size=8)
        assert completed
        exhaustive_reports.add(harness.emit_report(stats, "csv"))

    ckpt = str(tmp_path / "ckpt.json")
    harness.run_exhaustive(*shard, workers=4, block_size=8,
                           checkpoint_path=ckpt, stop_after_blocks=3)
    resumed, completed = harness.run_exhaustive(*shard, workers=1, block_size=8,
                                                checkpoint_path=ckpt)
    assert completed
    exhaustive_reports.add(harness.emit_report(resumed, "csv"))
    assert len(exhaustive_reports) == 1
    _report("determinism", "sample and exhaustive byte-identical across worker counts and kill/resume")


def test_performance_sanity():
    solver.warmup()
    rng = random.Random(8675309)
    times = []
    for _ in range(60):
        state = deals.initial_state(deals.random_deal(rng))
        start = time.perf_counter()
        solver.solve_score(state)
        times.append(time.perf_counter() - start)
    median = statistics.median(times)
    assert median < 0.180  # within 10x of the 18 ms reference
    _report("performance sanity", f"median fresh-deal solve {median*1000:.1f} ms")


def test_sharded_partial_verification():
    # desk-scale stand-in for the full run: shard counts are stable and mergeable
    shard_a = (0, 787_000)
    shard_b = (1, 787_000)
    first_a, _ = harness.run_exhaustive(*shard_a, block_size=8)
    again_a, _ = harness.run_exhaustive(*shard_a, workers=2, block_size=8)
    assert first_a == again_a
    stats_b, _ = harness.run_exhaustive(*shard_b, block_size=8)
    merged = harness.DealStats()
    merged.merge(first_a)
    merged.merge(stats_b)
    assert merged.deals_processed == first_a.deals_processed + stats_b.deals_processed
    assert merged.total_weight == first_a.total_weight + stats_b.total_weight
    _report("sharded partial verification", f"{merged.deals_processed} deals over two stable shards")


@pytest.mark.skipif(
    not os.environ.get("COLLAPSI_FULL_RUN"),
    reason="full 15.7M-deal run takes hours; set COLLAPSI_FULL_RUN=1 to enable",
)
def test_full_run_reproduces_reported_table(tmp_path):
    stats, completed = harness.run_exhaustive(
        0, 1, workers=os.cpu_count() or 1,
        checkpoint_path=str(tmp_path / "full.ckpt"), progress=True,
    )
    assert completed
    assert stats.deals_processed == 15_765_750
    assert stats.histogram == TABLE_HISTOGRAM
    assert stats.red_wins == 17_721_000
    assert stats.blue_wins == 29_576_250
    _report("full exhaustive run", "weighted game-length table reproduced exactly")
