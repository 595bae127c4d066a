"""Set-based reference miner used to cross-check the bit-code engine on
small instances.

Records are explicit property-index sets and support is subset counting,
so nothing here touches the engine's integer scan kernels. Shared with the
engine is only the closed-form criteria arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .engine import MiningConfig, Rule, RuleSet
from .metrics import SupportResult, compute_metrics

ENUMERATION_LIMIT = 2_000_000


@dataclass(frozen=True)
class SetRecord:
    """One record as an explicit set of property indices plus its goal."""

    properties: frozenset[int]
    goal: int

    @classmethod
    def from_code(cls, code: int, goal: int) -> "SetRecord":
        indices = set()
        index = 0
        while code:
            if code & 1:
                indices.add(index)
            code >>= 1
            index += 1
        return cls(frozenset(indices), goal)


def from_database(pdb) -> list[SetRecord]:
    """Explicit-set view of a partitioned database, in record order."""
    records = []
    for goal, part in enumerate(pdb.partitions):
        records.extend(SetRecord.from_code(code, goal) for code in part)
    return records


def oracle_support(
    premise: Iterable[int], records: Sequence[SetRecord], n_goals: int | None = None
) -> SupportResult:
    """Subset-containment counting per goal."""
    wanted = frozenset(premise)
    if n_goals is None:
        n_goals = max((r.goal for r in records), default=-1) + 1
    counts = [0] * n_goals
    for record in records:
        if wanted <= record.properties:
            counts[record.goal] += 1
    return SupportResult(tuple(counts))


def _code(indices: Sequence[int]) -> int:
    return sum(1 << i for i in indices)


def _partition_sizes(records: Sequence[SetRecord], n_goals: int) -> list[int]:
    sizes = [0] * n_goals
    for record in records:
        sizes[record.goal] += 1
    return sizes


def oracle_mine(
    records: Sequence[SetRecord], n_goals: int, config: MiningConfig | None = None
) -> RuleSet:
    """Reference search mirroring the engine's semantics on explicit sets.

    Premises are ascending index tuples extended only past their largest
    index; candidacy, retention, and finality rules match ``engine.mine``.
    """
    if config is None:
        config = MiningConfig()
    total = len(records)
    sizes = _partition_sizes(records, n_goals)
    observed = sorted({i for r in records for i in r.properties})

    def metrics_for(indices: tuple[int, ...], goal: int):
        result = oracle_support(indices, records, n_goals)
        if result.total == 0:
            return None, result
        return (
            compute_metrics(result.per_goal[goal], result.total, sizes[goal], total, config.weights),
            result,
        )

    per_goal: list[list[Rule]] = []
    for goal in range(n_goals):
        if not 0 < sizes[goal] < total:
            per_goal.append([])
            continue
        candidates: list[tuple[int, ...]] = []
        by_premise: dict[tuple[int, ...], Rule] = {}
        for i in observed:
            metrics, result = metrics_for((i,), goal)
            if metrics is not None and metrics.correlation > config.min_corr:
                candidates.append((i,))
        top_index = candidates[-1][0] if candidates else -1

        def finalize(indices: tuple[int, ...], metrics) -> bool:
            if metrics.correlation >= config.corr_stop:
                return True
            if metrics.f_all < config.min_f_all:
                return True
            return indices[-1] >= top_index

        level: list[tuple[int, ...]] = []
        for indices in candidates:
            metrics, result = metrics_for(indices, goal)
            by_premise[indices] = Rule(
                _code(indices),
                1,
                goal,
                result.per_goal[goal],
                result.total,
                metrics,
                finalize(indices, metrics),
            )
            level.append(indices)
        rules = [by_premise[p] for p in level]
        while level and (config.max_premise_len is None or len(level[0]) < config.max_premise_len):
            grown: list[tuple[int, ...]] = []
            for indices in level:
                if by_premise[indices].final:
                    continue
                for candidate in candidates:
                    j = candidate[0]
                    if j <= indices[-1]:
                        continue
                    extended = indices + (j,)
                    metrics, result = metrics_for(extended, goal)
                    if metrics is None or metrics.correlation < config.min_corr:
                        continue
                    by_premise[extended] = Rule(
                        _code(extended),
                        len(extended),
                        goal,
                        result.per_goal[goal],
                        result.total,
                        metrics,
                        finalize(extended, metrics),
                    )
                    grown.append(extended)
            if not grown:
                break
            grown.sort(key=_code)
            rules.extend(by_premise[p] for p in grown)
            level = grown
        per_goal.append(rules)
    empty = tuple(() for _ in per_goal)
    return RuleSet(tuple(tuple(rules) for rules in per_goal), empty)


def oracle_enumerate(
    records: Sequence[SetRecord],
    max_len: int,
    config: MiningConfig | None = None,
    n_goals: int | None = None,
) -> list[Rule]:
    """Every premise of up to ``max_len`` observed properties, evaluated for
    every populated goal; only zero-support premises are skipped.

    Errors out when the premise space is too large to enumerate.
    """
    if config is None:
        config = MiningConfig()
    if n_goals is None:
        n_goals = max((r.goal for r in records), default=-1) + 1
    total = len(records)
    sizes = _partition_sizes(records, n_goals)
    observed = sorted({i for r in records for i in r.properties})
    width = min(max_len, len(observed))
    space = sum(comb(len(observed), length) for length in range(1, width + 1))
    if space > ENUMERATION_LIMIT:
        raise ValueError(f"enumeration infeasible: about {space} premise sets")
    rules = []
    for length in range(1, width + 1):
        for indices in combinations(observed, length):
            result = oracle_support(indices, records, n_goals)
            if result.total == 0:
                continue
            for goal in range(n_goals):
                if sizes[goal] == 0:
                    continue
                metrics = compute_metrics(
                    result.per_goal[goal], result.total, sizes[goal], total, config.weights
                )
                rules.append(
                    Rule(
                        _code(indices),
                        length,
                        goal,
                        result.per_goal[goal],
                        result.total,
                        metrics,
                        False,
                    )
                )
    rules.sort(key=lambda r: (r.goal, r.premise_len, r.premise))
    return rules
