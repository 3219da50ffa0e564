"""Exhaustive class censuses over [1, S].

A census counts, for every class of a composite map, how many n in [1, S]
belong to it. The range is cut into fixed-size chunks, chunks are classified
on a pool of worker threads against a shared read-only residue cache, and
the per-chunk counts are merged in ascending range order. Counting is exact
integer arithmetic, so the result is identical for every chunk size and
worker count.

Long runs can periodically write a checkpoint file (a small versioned JSON
document covering the completed contiguous prefix); a run resumed from a
checkpoint finishes with byte-identical counts.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from typing import Callable

import numpy as np

from .classifier import (
    ClassLabel,
    ResidueCache,
    _descend_residues,
    basis_for,
    build_residue_cache,
    classify_fast,
    labels_for,
)
from .kernel import (
    DEFAULT_STEP_BUDGET,
    MapKind,
    NatOverflowError,
    StepBudgetExceeded,
    validate_nat,
)

CHECKPOINT_VERSION = 1

_VECTOR_SPAN = 1 << 20  # cap on arange size inside a chunk
_U64_LIMIT = 2**64      # members at or above this bypass the vector sweep


class CensusAbortError(RuntimeError):
    """A census member failed to classify; the whole run is abandoned.

    Skipping the member silently would break the count identity and could
    hide a genuine counterexample, so the offending n is surfaced instead.
    """

    def __init__(self, n: int, cause: Exception):
        super().__init__(f"census aborted at n={n}: {cause}")
        self.n = n


class CheckpointError(ValueError):
    """A checkpoint file is unreadable, malformed, or does not match the run."""


def decimal_fraction(count: int, total: int, places: int = 6) -> str:
    """Exact fixed-place decimal rendering of count/total (half-even)."""
    scale = 10**places
    q, r = divmod(count * scale, total)
    if 2 * r > total or (2 * r == total and q & 1):
        q += 1
    whole, frac = divmod(q, scale)
    return f"{whole}.{frac:0{places}d}"


@dataclass(frozen=True)
class ClassCounts:
    """Per-class counts over an inclusive range of starting numbers.

    The counts always sum to the range width; an empty range (hi == lo - 1)
    is the merge identity.
    """

    map_kind: MapKind
    lo: int
    hi: int
    counts: dict[ClassLabel, int]

    def __post_init__(self):
        expected = labels_for(self.map_kind)
        if set(self.counts) != set(expected):
            raise ValueError(
                f"counts must cover exactly the classes {[int(l) for l in expected]}"
            )
        canonical = {}
        for label in expected:
            c = self.counts[label]
            if not isinstance(c, int) or isinstance(c, bool) or c < 0:
                raise ValueError(f"invalid count for class {int(label)}: {c!r}")
            canonical[label] = c
        object.__setattr__(self, "counts", canonical)
        span = self.hi - self.lo + 1
        if span < 0:
            raise ValueError(f"invalid range [{self.lo}, {self.hi}]")
        if sum(canonical.values()) != span:
            raise ValueError(
                f"counts sum to {sum(canonical.values())}, range [{self.lo}, {self.hi}] "
                f"holds {span} numbers"
            )

    @classmethod
    def empty(cls, map_kind: MapKind, at: int = 1) -> "ClassCounts":
        """The empty counts positioned just before ``at``."""
        return cls(map_kind, at, at - 1, {label: 0 for label in labels_for(map_kind)})

    @property
    def is_empty(self) -> bool:
        return self.hi < self.lo

    @property
    def total(self) -> int:
        return self.hi - self.lo + 1


def merge(a: ClassCounts, b: ClassCounts) -> ClassCounts:
    """Combine counts over adjacent ranges; commutative, empty is identity."""
    if a.map_kind is not b.map_kind:
        raise ValueError(f"map mismatch: {a.map_kind.value} vs {b.map_kind.value}")
    if a.is_empty:
        return b if not b.is_empty else a
    if b.is_empty:
        return a
    first, second = (a, b) if a.lo <= b.lo else (b, a)
    if first.hi + 1 != second.lo:
        raise ValueError(
            f"ranges [{first.lo}, {first.hi}] and [{second.lo}, {second.hi}] "
            "are not disjoint and adjacent"
        )
    summed = {label: first.counts[label] + second.counts[label] for label in first.counts}
    return ClassCounts(a.map_kind, first.lo, second.hi, summed)


def census_chunk(
    map_kind: MapKind,
    lo: int,
    hi: int,
    cache: ResidueCache,
    max_steps: int = DEFAULT_STEP_BUDGET,
) -> ClassCounts:
    """Classify every n in [lo, hi] and tally the classes.

    Members below the cache bound are table lookups; the rest descend into
    the cache in a vectorized sweep. Any member that fails aborts the chunk
    with the offending n.
    """
    labels = labels_for(map_kind)
    basis = basis_for(map_kind)
    if cache.basis is not basis:
        raise ValueError(
            f"cache basis {cache.basis.value} does not match map {map_kind.value}"
        )
    validate_nat(lo)
    validate_nat(hi)
    if lo > hi:
        raise ValueError(f"empty chunk [{lo}, {hi}]")

    modulus = cache.modulus
    residue_totals = np.zeros(modulus, dtype=np.int64)
    vector_hi = min(hi, _U64_LIMIT - 1)
    for a in range(lo, vector_hi + 1, _VECTOR_SPAN):
        b = min(vector_hi, a + _VECTOR_SPAN - 1)
        # built as offset + iota: an arange stop of exactly 2**64 would not fit
        ns = np.uint64(a) + np.arange(b - a + 1, dtype=np.uint64)
        cached = ns < cache.bound
        if cached.any():
            residues = cache.entries(ns[cached])
            residue_totals += np.bincount(residues, minlength=modulus)
        if not cached.all():
            above = ns[~cached]
            try:
                residues = _descend_residues(
                    basis,
                    above,
                    floor=cache.bound,
                    vec_lookup=cache.entries,
                    scalar_entry=cache.entry,
                    max_steps=max_steps,
                )
            except (NatOverflowError, StepBudgetExceeded) as e:
                raise CensusAbortError(e.n, e) from e
            residue_totals += np.bincount(residues, minlength=modulus)
    # members beyond uint64 range classify one by one in exact arithmetic
    for n in range(max(lo, _U64_LIMIT), hi + 1):
        try:
            outcome = classify_fast(map_kind, n, cache, max_steps)
        except (NatOverflowError, StepBudgetExceeded) as e:
            raise CensusAbortError(e.n, e) from e
        residue_totals[labels.index(outcome.label)] += 1
    counts = {label: int(residue_totals[r]) for r, label in enumerate(labels)}
    return ClassCounts(map_kind, lo, hi, counts)


@dataclass(frozen=True)
class EngineInfo:
    """How a census was executed; informational only."""

    chunk_size: int
    workers: int
    cache_bound: int
    max_steps: int
    elapsed_seconds: float


@dataclass(frozen=True)
class CensusResult:
    """Counts and exact fractions for a completed census over [1, S]."""

    counts: ClassCounts
    fractions: dict[ClassLabel, Fraction]
    engine: EngineInfo

    @property
    def map_kind(self) -> MapKind:
        return self.counts.map_kind

    @property
    def s(self) -> int:
        return self.counts.hi

    def decimal_fractions(self, places: int = 6) -> dict[ClassLabel, str]:
        return {
            label: decimal_fraction(count, self.s, places)
            for label, count in self.counts.counts.items()
        }


@dataclass(frozen=True)
class SeriesPoint:
    """Cumulative counts and fractions at one sample point of a series."""

    s: int
    counts: dict[ClassLabel, int]
    fractions: dict[ClassLabel, Fraction]

    def decimal_fractions(self, places: int = 6) -> dict[ClassLabel, str]:
        return {
            label: decimal_fraction(count, self.s, places)
            for label, count in self.counts.items()
        }


@dataclass(frozen=True)
class Checkpoint:
    """Resumable census state: the completed contiguous prefix [1, next_n-1]."""

    map_kind: MapKind
    target: int
    next_n: int
    counts: dict[ClassLabel, int]
    cache_bound: int
    created_at: str
    version: int = CHECKPOINT_VERSION


_CHECKPOINT_FIELDS = {
    "format_version",
    "map",
    "target_s",
    "next_n",
    "partial_counts",
    "cache_bound",
    "created_at",
}


def save_checkpoint(checkpoint: Checkpoint, path) -> None:
    """Write a checkpoint atomically (temp file + rename)."""
    doc = {
        "format_version": checkpoint.version,
        "map": checkpoint.map_kind.value,
        "target_s": checkpoint.target,
        "next_n": checkpoint.next_n,
        "partial_counts": {str(int(l)): c for l, c in checkpoint.counts.items()},
        "cache_bound": checkpoint.cache_bound,
        "created_at": checkpoint.created_at,
    }
    path = os.fspath(path)
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")
    os.replace(tmp, path)


def _require_int(doc: dict, key: str) -> int:
    v = doc[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise CheckpointError(f"checkpoint field {key!r} must be an integer")
    return v


def load_checkpoint(path) -> Checkpoint:
    """Read and strictly validate a checkpoint file."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
    except OSError as e:
        raise CheckpointError(f"cannot read checkpoint: {e}") from e
    except json.JSONDecodeError as e:
        raise CheckpointError(f"checkpoint is not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise CheckpointError("checkpoint must be a JSON object")
    unknown = set(doc) - _CHECKPOINT_FIELDS
    if unknown:
        raise CheckpointError(f"unknown checkpoint fields: {sorted(unknown)}")
    missing = _CHECKPOINT_FIELDS - set(doc)
    if missing:
        raise CheckpointError(f"missing checkpoint fields: {sorted(missing)}")
    version = _require_int(doc, "format_version")
    if version != CHECKPOINT_VERSION:
        raise CheckpointError(
            f"unsupported checkpoint version {version} (expected {CHECKPOINT_VERSION})"
        )
    try:
        map_kind = MapKind(doc["map"])
        labels = labels_for(map_kind)
    except ValueError as e:
        raise CheckpointError(f"invalid checkpoint map: {doc['map']!r}") from e
    target = _require_int(doc, "target_s")
    next_n = _require_int(doc, "next_n")
    cache_bound = _require_int(doc, "cache_bound")
    if target < 1 or not 1 <= next_n <= target + 1 or cache_bound < 2:
        raise CheckpointError("checkpoint range fields out of bounds")
    raw_counts = doc["partial_counts"]
    if not isinstance(raw_counts, dict) or set(raw_counts) != {
        str(int(l)) for l in labels
    }:
        raise CheckpointError("partial_counts must hold exactly the map's classes")
    counts = {}
    for label in labels:
        c = raw_counts[str(int(label))]
        if not isinstance(c, int) or isinstance(c, bool) or c < 0:
            raise CheckpointError(f"invalid partial count for class {int(label)}")
        counts[label] = c
    if sum(counts.values()) != next_n - 1:
        raise CheckpointError("partial counts do not cover [1, next_n - 1]")
    created_at = doc["created_at"]
    if not isinstance(created_at, str):
        raise CheckpointError("created_at must be a string")
    return Checkpoint(map_kind, target, next_n, counts, cache_bound, created_at, version)


@dataclass(frozen=True)
class CensusConfig:
    """Engine knobs. None of them changes the result, only how it is computed."""

    chunk_size: int = 1 << 16
    workers: int | None = None  # default: one per CPU
    cache_bound: int = 1 << 25
    max_steps: int = DEFAULT_STEP_BUDGET
    checkpoint_interval: float = 10.0  # seconds between checkpoint writes
    progress: Callable[[int, int], None] | None = None  # (done_through, target)


def _validate_config(config: CensusConfig) -> int:
    if config.chunk_size < 1:
        raise ValueError(f"chunk_size must be >= 1, got {config.chunk_size}")
    if config.cache_bound < 2:
        raise ValueError(f"cache_bound must be >= 2, got {config.cache_bound}")
    workers = config.workers if config.workers is not None else (os.cpu_count() or 1)
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {config.workers}")
    return workers


def _utc_now() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


def run_census(
    map_kind: MapKind,
    s: int,
    config: CensusConfig | None = None,
    checkpoint_path=None,
    resume: bool = False,
) -> CensusResult:
    """Count class memberships over [1, s].

    Chunks are classified concurrently but merged strictly in ascending
    range order, so the counts are independent of chunk size, worker count,
    and scheduling. With a ``checkpoint_path`` the completed prefix is saved
    at most once per ``checkpoint_interval``, plus once at completion;
    ``resume=True`` continues from such a file after checking that its
    version, map, and target match.
    """
    config = config or CensusConfig()
    labels = labels_for(map_kind)
    validate_nat(s)
    workers = _validate_config(config)
    started = time.perf_counter()

    if resume:
        if checkpoint_path is None:
            raise CheckpointError("resume requested without a checkpoint path")
        cp = load_checkpoint(checkpoint_path)
        if cp.map_kind is not map_kind:
            raise CheckpointError(
                f"checkpoint is for map {cp.map_kind.value}, requested {map_kind.value}"
            )
        if cp.target != s:
            raise CheckpointError(f"checkpoint targets S={cp.target}, requested S={s}")
        total = ClassCounts(map_kind, 1, cp.next_n - 1, dict(cp.counts))
    else:
        total = ClassCounts.empty(map_kind, at=1)

    bound = max(2, min(config.cache_bound, s + 1))
    try:
        cache = build_residue_cache(basis_for(map_kind), bound, config.max_steps)
    except (NatOverflowError, StepBudgetExceeded) as e:
        raise CensusAbortError(e.n, e) from e

    chunk = config.chunk_size
    start_n = total.hi + 1
    chunks = [(lo, min(lo + chunk - 1, s)) for lo in range(start_n, s + 1, chunk)]

    last_write = time.monotonic()
    wrote_any = False

    def write_checkpoint() -> None:
        nonlocal wrote_any
        save_checkpoint(
            Checkpoint(map_kind, s, total.hi + 1, dict(total.counts), bound, _utc_now()),
            checkpoint_path,
        )
        wrote_any = True

    def absorb(part: ClassCounts) -> None:
        nonlocal total, last_write
        total = merge(total, part)
        if (
            checkpoint_path is not None
            and time.monotonic() - last_write >= config.checkpoint_interval
        ):
            write_checkpoint()
            last_write = time.monotonic()
        if config.progress is not None:
            config.progress(total.hi, s)

    if workers == 1 or len(chunks) <= 1:
        for lo, hi in chunks:
            absorb(census_chunk(map_kind, lo, hi, cache, config.max_steps))
    else:
        window = 4 * workers
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pending: dict = {}
            ready: dict[int, ClassCounts] = {}
            next_merge = 0
            submitted = 0
            try:
                while next_merge < len(chunks):
                    while submitted < len(chunks) and len(pending) < window:
                        lo, hi = chunks[submitted]
                        fut = pool.submit(
                            census_chunk, map_kind, lo, hi, cache, config.max_steps
                        )
                        pending[fut] = submitted
                        submitted += 1
                    done, _ = wait(pending, return_when=FIRST_COMPLETED)
                    for fut in done:
                        ready[pending.pop(fut)] = fut.result()
                    while next_merge in ready:
                        absorb(ready.pop(next_merge))
                        next_merge += 1
            except BaseException:
                for fut in pending:
                    fut.cancel()
                raise

    if total.lo != 1 or total.hi != s:
        raise RuntimeError(f"census covered [{total.lo}, {total.hi}], expected [1, {s}]")
    if sum(total.counts.values()) != s:
        raise RuntimeError("class counts do not sum to S")
    if checkpoint_path is not None:
        write_checkpoint()

    fractions = {label: Fraction(total.counts[label], s) for label in labels}
    engine = EngineInfo(
        chunk_size=chunk,
        workers=workers,
        cache_bound=bound,
        max_steps=config.max_steps,
        elapsed_seconds=time.perf_counter() - started,
    )
    return CensusResult(total, fractions, engine)


def _series_samples(s_max: int, points: int, spacing: str) -> list[int]:
    if spacing == "linear":
        return [(i * s_max) // points for i in range(1, points + 1)]
    if spacing == "log":
        samples = []
        for i in range(1, points + 1):
            v = min(s_max, max(1, round(s_max ** (i / points))))
            if not samples or v > samples[-1]:
                samples.append(v)
        if samples[-1] != s_max:
            samples.append(s_max)
        return samples
    raise ValueError(f"spacing must be 'log' or 'linear', got {spacing!r}")


def run_series(
    map_kind: MapKind,
    s_max: int,
    points: int = 10,
    spacing: str = "log",
    config: CensusConfig | None = None,
) -> list[SeriesPoint]:
    """Cumulative class fractions at sample points up to s_max.

    One ascending pass; the final point always lands on s_max and carries
    exactly the counts :func:`run_census` would report there. Log spacing
    collapses duplicate sample points, so fewer than ``points`` entries can
    come back for small ranges.
    """
    config = config or CensusConfig()
    labels = labels_for(map_kind)
    validate_nat(s_max)
    if not isinstance(points, int) or isinstance(points, bool) or points < 1:
        raise ValueError(f"points must be a positive integer, got {points!r}")
    if s_max < points:
        raise ValueError(f"need s_max >= points, got s_max={s_max}, points={points}")
    _validate_config(config)
    samples = _series_samples(s_max, points, spacing)

    bound = max(2, min(config.cache_bound, s_max + 1))
    try:
        cache = build_residue_cache(basis_for(map_kind), bound, config.max_steps)
    except (NatOverflowError, StepBudgetExceeded) as e:
        raise CensusAbortError(e.n, e) from e

    total = ClassCounts.empty(map_kind, at=1)
    out = []
    for sample in samples:
        for lo in range(total.hi + 1, sample + 1, config.chunk_size):
            hi = min(sample, lo + config.chunk_size - 1)
            total = merge(total, census_chunk(map_kind, lo, hi, cache, config.max_steps))
        fractions = {label: Fraction(total.counts[label], sample) for label in labels}
        out.append(SeriesPoint(sample, dict(total.counts), fractions))
    return out
