"""Support counting over goal partitions and the rule quality criteria.

All criteria are derived from exact integer counts in one place, so every
caller — miner, oracle, CLI — sees bit-identical floats for the same counts.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .errors import ConfigError

try:
    import numpy as _np
except ImportError:  # pragma: no cover - numpy is an optional accelerator
    _np = None


@dataclass(frozen=True)
class SupportResult:
    """Per-goal record counts for one premise."""

    per_goal: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.per_goal)


@dataclass(frozen=True)
class CriteriaWeights:
    """Weights of the four criteria blended into the quality score."""

    p1: float = 1.0  # overall frequency
    p2: float = 1.0  # in-goal frequency
    p3: float = 1.0  # confidence
    p4: float = 1.0  # correlation

    def __post_init__(self) -> None:
        weights = self.as_tuple()
        if any(w < 0 for w in weights):
            raise ConfigError("criteria weights must be non-negative")
        if not any(w > 0 for w in weights):
            raise ConfigError("at least one criteria weight must be positive")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p1, self.p2, self.p3, self.p4)


UNIT_WEIGHTS = CriteriaWeights()


@dataclass(frozen=True)
class RuleMetrics:
    f_g: float
    f_all: float
    confidence: float
    lift: float
    correlation: float
    quality: float


# streaming block for the array kernel: keeps the working set cache-resident
# so per-record cost stays flat from thousands to millions of records
_BLOCK = 65536


def _count(premise: int, records) -> int:
    """Records whose bit set contains the premise. Exact integer count on
    both representations, so the two paths are interchangeable."""
    if _np is not None and isinstance(records, _np.ndarray):
        n = records.shape[0]
        if n <= _BLOCK:
            return int(_np.count_nonzero((records & premise) == premise))
        masked = _np.empty(_BLOCK, dtype=records.dtype)
        hits = _np.empty(_BLOCK, dtype=_np.bool_)
        total = 0
        for start in range(0, n, _BLOCK):
            view = records[start : start + _BLOCK]
            k = view.shape[0]
            _np.bitwise_and(view, premise, out=masked[:k])
            _np.equal(masked[:k], premise, out=hits[:k])
            total += int(_np.count_nonzero(hits[:k]))
        return total
    x = premise
    return sum((x & r) == x for r in records)


class ScanPool:
    """Splits partition scans across worker threads.

    Chunk counts are exact integers reduced in submission order, so results
    are identical for any worker count. CPython's interpreter lock serializes
    the pure-Python inner loop; the pool expresses the partition-parallel
    structure and only pays off on runtimes without that lock.
    """

    def __init__(self, threads: int, chunk_size: int = 100_000):
        if threads < 1:
            raise ConfigError("thread count must be >= 1")
        if chunk_size < 1:
            raise ConfigError("chunk size must be >= 1")
        self.threads = threads
        self.chunk_size = chunk_size
        self._executor = ThreadPoolExecutor(max_workers=threads)

    def count(self, premise: int, partitions: Sequence[Sequence[int]]) -> tuple[int, ...]:
        futures = []
        for part in partitions:
            chunks = []
            for start in range(0, len(part), self.chunk_size):
                chunk = part[start : start + self.chunk_size]
                chunks.append(self._executor.submit(_count, premise, chunk))
            futures.append(chunks)
        return tuple(sum(f.result() for f in chunks) for chunks in futures)

    def close(self) -> None:
        self._executor.shutdown()

    def __enter__(self) -> "ScanPool":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


def support(premise: int, pdb, pool: ScanPool | None = None) -> SupportResult:
    """Count the records containing every premise bit, per goal partition.

    One scan yields the counts for all goals; the empty premise (0) matches
    everything and returns the partition sizes.
    """
    if premise < 0:
        raise ValueError("premise must be non-negative")
    partitions = pdb.scan_partitions
    if pool is not None:
        return SupportResult(pool.count(premise, partitions))
    return SupportResult(tuple(_count(premise, part) for part in partitions))


def quality(
    f_all: float,
    f_g: float,
    confidence: float,
    correlation: float,
    weights: CriteriaWeights = UNIT_WEIGHTS,
) -> float:
    """Weighted blend of the four criteria."""
    return (
        weights.p1 * f_all
        + weights.p2 * f_g
        + weights.p3 * confidence
        + weights.p4 * correlation
    )


def compute_metrics(
    sup_k: int,
    sup: int,
    n_k: int,
    total: int,
    weights: CriteriaWeights = UNIT_WEIGHTS,
) -> RuleMetrics:
    """Derive all rule criteria for one premise/goal pair from exact counts.

    Correlation rescales lift onto [-1, 1]: negative side is lift - 1,
    positive side divides the excess by the attainable maximum, so 1.0 means
    the premise occurs only inside the goal and -1.0 means never.
    """
    if n_k <= 0:
        raise ValueError("empty goal partition")
    if sup <= 0:
        raise ValueError("premise has no support")
    if not (0 <= sup_k <= min(sup, n_k) and max(sup, n_k) <= total):
        raise ValueError("inconsistent support counts")
    f_g = sup_k / n_k
    f_all = sup_k / total
    confidence = sup_k / sup
    # One correctly-rounded division of exact integer products: duplicated
    # databases then yield bit-identical floats, not merely close ones.
    lift = (sup_k * total) / (sup * n_k)
    if n_k == total:
        correlation = 0.0  # single populated goal: lift is identically 1
    elif lift <= 1.0:
        correlation = lift - 1.0
    else:
        correlation = (lift - 1.0) / (total / n_k - 1.0)
    return RuleMetrics(
        f_g=f_g,
        f_all=f_all,
        confidence=confidence,
        lift=lift,
        correlation=correlation,
        quality=quality(f_all, f_g, confidence, correlation, weights),
    )


def recommended_min_correlation(p: float) -> float:
    """Correlation threshold guaranteeing confidence > 0.5 for a goal whose
    outside/inside record ratio is ``p``; rises from 0 toward 0.5 as the
    goal gets rarer."""
    if p <= 0:
        raise ValueError("partition ratio must be positive")
    return (p - 1.0) / (2.0 * p)
