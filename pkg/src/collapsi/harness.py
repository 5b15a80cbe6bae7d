"""Batch solving over enumerated or sampled deals, with checkpointing.

Deal-level parallelism over a process pool: workers solve independent blocks
and a single aggregator merges partial stats in block order, so the final
numbers depend only on the inputs, never on worker count or scheduling.
Progress goes to stderr; machine output stays on stdout.
"""

from __future__ import annotations

import hashlib
import json
import math
import multiprocessing
import os
import random
import sys
import time
from dataclasses import dataclass, field

from . import deals, solver
from .engine import CELLS, format_deal, parse_deal

CHECKPOINT_BLOCK = 10_000
SAMPLE_BLOCK = 250

# histogram keys in report order: "<=6" then exact ply counts
BUCKET_LABELS = ("<=6",) + tuple(str(p) for p in range(7, 15))


class CheckpointError(RuntimeError):
    """Checkpoint file is corrupt or belongs to a different run."""


@dataclass
class DealStats:
    """Weighted game-length histogram; merge is associative and commutative."""

    histogram: dict[int, int] = field(default_factory=dict)  # exact plies -> weight
    red_wins: int = 0
    blue_wins: int = 0
    deals_processed: int = 0

    def add(self, plies: int, weight: int, red_won: bool) -> None:
        self.histogram[plies] = self.histogram.get(plies, 0) + weight
        if red_won:
            self.red_wins += weight
        else:
            self.blue_wins += weight
        self.deals_processed += 1

    def merge(self, other: "DealStats") -> None:
        for plies, weight in other.histogram.items():
            self.histogram[plies] = self.histogram.get(plies, 0) + weight
        self.red_wins += other.red_wins
        self.blue_wins += other.blue_wins
        self.deals_processed += other.deals_processed

    @property
    def total_weight(self) -> int:
        return self.red_wins + self.blue_wins

    def bucketed(self) -> dict[str, int]:
        """Histogram with plies <= 6 folded into one bucket, in report order."""
        out = {label: 0 for label in BUCKET_LABELS}
        for plies, weight in self.histogram.items():
            out["<=6" if plies <= 6 else str(plies)] += weight
        return out

    def to_json_dict(self) -> dict:
        return {
            "histogram": {str(p): w for p, w in sorted(self.histogram.items())},
            "red_wins": self.red_wins,
            "blue_wins": self.blue_wins,
            "deals_processed": self.deals_processed,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "DealStats":
        return cls(
            histogram={int(p): w for p, w in data["histogram"].items()},
            red_wins=data["red_wins"],
            blue_wins=data["blue_wins"],
            deals_processed=data["deals_processed"],
        )


def _solve_deal_into(stats: DealStats, deal, weight: int) -> None:
    result = solver.solve_score(deals.initial_state(deal))
    stats.add(CELLS - abs(result.score), weight, result.score > 0)


# -- exhaustive runs ---------------------------------------------------------


def shard_size(shard_index: int, shard_count: int) -> int:
    """Number of enumeration indices i with i % shard_count == shard_index."""
    total = deals.enumeration_total()
    if not 0 <= shard_index < shard_count:
        raise ValueError(f"shard must satisfy 0 <= k < n, got {shard_index}/{shard_count}")
    return (total - shard_index + shard_count - 1) // shard_count


def _exhaustive_block(args: tuple[int, int, int, int]) -> DealStats:
    shard_index, shard_count, first, count = args
    stats = DealStats()
    for j in range(first, first + count):
        index = shard_index + shard_count * j
        _solve_deal_into(stats, deals.deal_at(index), deals.DealIndex.from_global(index).weight)
    return stats


def _digest(payload: dict) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


def _write_checkpoint(path: str, payload: dict) -> None:
    payload = dict(payload, digest=_digest(payload))
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        json.dump(payload, fh, sort_keys=True)
    os.replace(tmp, path)


def _read_checkpoint(path: str, expected: dict) -> dict:
    with open(path) as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CheckpointError(f"checkpoint {path} is not valid JSON: {exc}") from exc
    digest = payload.pop("digest", None)
    if digest != _digest(payload):
        raise CheckpointError(f"checkpoint {path} failed its digest check")
    for key, value in expected.items():
        if payload.get(key) != value:
            raise CheckpointError(
                f"checkpoint {path} was written for {key}={payload.get(key)!r}, expected {value!r}"
            )
    return payload


def _progress(enabled: bool, done: int, total: int, started: float) -> None:
    if not enabled:
        return
    elapsed = time.monotonic() - started
    rate = done / elapsed if elapsed > 0 else 0.0
    print(f"\r{done}/{total} deals, {rate:.0f} deals/s", end="", file=sys.stderr, flush=True)


def _map_blocks(worker, block_args, workers: int):
    """Yield worker(args) results in block order, optionally via a pool."""
    if workers <= 1:
        for args in block_args:
            yield worker(args)
        return
    with multiprocessing.Pool(workers) as pool:
        yield from pool.imap(worker, block_args)


def run_exhaustive(
    shard_index: int = 0,
    shard_count: int = 1,
    *,
    workers: int = 1,
    checkpoint_path: str | None = None,
    block_size: int = CHECKPOINT_BLOCK,
    stop_after_blocks: int | None = None,
    progress: bool = False,
) -> tuple[DealStats, bool]:
    """Solve every deal of the shard, resumable via checkpoint.

    Returns (stats, completed). Stats after completion are identical for any
    worker count and for any interrupt/resume pattern.
    """
    total = shard_size(shard_index, shard_count)
    blocks_total = math.ceil(total / block_size)
    meta = {
        "kind": "exhaustive",
        "shard": [shard_index, shard_count],
        "block_size": block_size,
        "enumeration_total": deals.enumeration_total(),
    }
    stats = DealStats()
    blocks_done = 0
    if checkpoint_path and os.path.exists(checkpoint_path):
        payload = _read_checkpoint(checkpoint_path, meta)
        stats = DealStats.from_json_dict(payload["stats"])
        blocks_done = payload["blocks_done"]

    solver.warmup()  # compile before forking workers
    started = time.monotonic()
    done_before = blocks_done
    block_args = [
        (shard_index, shard_count, b * block_size, min(block_size, total - b * block_size))
        for b in range(blocks_done, blocks_total)
    ]
    if stop_after_blocks is not None:
        block_args = block_args[:stop_after_blocks]
    for block_stats in _map_blocks(_exhaustive_block, block_args, workers):
        stats.merge(block_stats)
        blocks_done += 1
        if checkpoint_path:
            _write_checkpoint(checkpoint_path, dict(meta, blocks_done=blocks_done, stats=stats.to_json_dict()))
        _progress(progress, stats.deals_processed, total, started)
    if progress and blocks_done > done_before:
        print(file=sys.stderr)
    return stats, blocks_done == blocks_total


# -- sampled runs ------------------------------------------------------------


@dataclass
class SampleResult:
    stats: DealStats
    standard_errors: dict[str, float]  # bucket label / red / blue -> SE of proportion


def _sample_block(deal_strings: list[str]) -> DealStats:
    stats = DealStats()
    for text in deal_strings:
        _solve_deal_into(stats, parse_deal(text), 1)
    return stats


def standard_errors(stats: DealStats) -> dict[str, float]:
    """Binomial standard error of each bucket proportion (weight-1 samples)."""
    n = stats.deals_processed
    out: dict[str, float] = {}
    shares = dict(stats.bucketed())
    shares["red"] = stats.red_wins
    shares["blue"] = stats.blue_wins
    for label, count in shares.items():
        p = count / n if n else 0.0
        out[label] = math.sqrt(p * (1.0 - p) / n) if n else 0.0
    return out


def run_sample(
    n: int,
    seed: int,
    *,
    workers: int = 1,
    block_size: int = SAMPLE_BLOCK,
    progress: bool = False,
) -> SampleResult:
    """Solve n uniform random deals (weight 1). Deterministic in (n, seed)."""
    if n < 1:
        raise ValueError("sample size must be >= 1")
    rng = random.Random(seed)
    texts = [format_deal(deals.random_deal(rng)) for _ in range(n)]
    blocks = [texts[i : i + block_size] for i in range(0, n, block_size)]
    solver.warmup()
    stats = DealStats()
    started = time.monotonic()
    for block_stats in _map_blocks(_sample_block, blocks, workers):
        stats.merge(block_stats)
        _progress(progress, stats.deals_processed, n, started)
    if progress:
        print(file=sys.stderr)
    return SampleResult(stats=stats, standard_errors=standard_errors(stats))


# -- reports -----------------------------------------------------------------


def emit_report(
    stats: DealStats,
    fmt: str,
    *,
    metadata: dict | None = None,
    std_errors: dict[str, float] | None = None,
) -> str:
    """Render stats as csv (plies,weighted_count,percent) or json."""
    if fmt == "csv":
        lines = ["plies,weighted_count,percent"]
        total = stats.total_weight
        if stats.deals_processed:
            for label, weight in stats.bucketed().items():
                pct = 100.0 * weight / total if total else 0.0
                lines.append(f"{label},{weight},{pct:.1f}")
        return "\n".join(lines) + "\n"
    if fmt == "json":
        total = stats.total_weight
        doc = {
            "stats": stats.to_json_dict(),
            "buckets": stats.bucketed(),
            "percentages": {
                label: round(100.0 * weight / total, 1) if total else 0.0
                for label, weight in stats.bucketed().items()
            },
            "red_share": round(100.0 * stats.red_wins / total, 1) if total else 0.0,
            "blue_share": round(100.0 * stats.blue_wins / total, 1) if total else 0.0,
            "metadata": metadata or {},
        }
        if std_errors is not None:
            doc["standard_errors"] = std_errors
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    raise ValueError(f"unknown report format: {fmt!r}")


def parse_report(text: str) -> DealStats:
    """Recover DealStats from a json report (round-trip of emit_report)."""
    return DealStats.from_json_dict(json.loads(text)["stats"])
