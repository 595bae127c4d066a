import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from goalrules import (
    ConfigError,
    CriteriaWeights,
    ScanPool,
    SupportResult,
    UNIT_WEIGHTS,
    compute_metrics,
    quality,
    recommended_min_correlation,
    support,
)
from conftest import build_pdb, random_pdb


class TestSupport:
    def db(self):
        # records 0b101, 0b111 in goal 0; 0b011 in goal 1
        return build_pdb([[5, 7], [3]], m=3)

    def test_premise_contained(self):
        result = support(5, self.db())
        assert result.per_goal == (2, 0)
        assert result.total == 2

    def test_empty_premise_matches_everything(self):
        assert support(0, self.db()).per_goal == (2, 1)

    def test_single_bits(self):
        db = self.db()
        assert support(1, db).per_goal == (2, 1)
        assert support(2, db).per_goal == (1, 1)
        assert support(4, db).per_goal == (2, 0)

    def test_unused_bit_has_no_support(self):
        assert support(8, self.db()).per_goal == (0, 0)

    def test_negative_premise_rejected(self):
        with pytest.raises(ValueError, match="non-negative"):
            support(-1, self.db())

    def test_empty_partition(self):
        assert support(1, build_pdb([[1], []], m=1)).per_goal == (1, 0)

    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=60, deadline=None)
    def test_anti_monotone_under_premise_growth(self, seed):
        rng = random.Random(seed)
        pdb = random_pdb(rng)
        m = len(pdb.catalog)
        x = rng.randrange(0, 1 << m)
        z = x | rng.randrange(0, 1 << m)
        sup_x = support(x, pdb).per_goal
        sup_z = support(z, pdb).per_goal
        assert all(a <= b for a, b in zip(sup_z, sup_x))

    @pytest.mark.parametrize("threads,chunk", [(1, 100_000), (2, 7), (4, 3), (3, 1)])
    def test_pool_matches_sequential(self, threads, chunk):
        rng = random.Random(17)
        pdb = random_pdb(rng, max_part=40)
        premises = [rng.randrange(0, 1 << len(pdb.catalog)) for _ in range(10)]
        with ScanPool(threads, chunk_size=chunk) as pool:
            for premise in premises:
                assert support(premise, pdb, pool) == support(premise, pdb)

    def test_pool_matches_on_pure_path(self, pure_scan):
        pdb = build_pdb([[5, 7, 5, 1], [3, 3]], m=3)
        with ScanPool(3, chunk_size=2) as pool:
            assert support(5, pdb, pool).per_goal == (3, 0)

    @pytest.mark.parametrize("threads,chunk", [(0, 10), (2, 0)])
    def test_pool_validation(self, threads, chunk):
        with pytest.raises(ConfigError):
            ScanPool(threads, chunk_size=chunk)


class TestWeights:
    def test_defaults_are_unit(self):
        assert CriteriaWeights().as_tuple() == (1.0, 1.0, 1.0, 1.0)
        assert UNIT_WEIGHTS.as_tuple() == (1.0, 1.0, 1.0, 1.0)

    def test_negative_rejected(self):
        with pytest.raises(ConfigError, match="non-negative"):
            CriteriaWeights(p2=-0.1)

    def test_all_zero_rejected(self):
        with pytest.raises(ConfigError, match="at least one"):
            CriteriaWeights(0.0, 0.0, 0.0, 0.0)

    def test_projection_weights(self):
        assert quality(0.2, 0.4, 0.6, 0.1, CriteriaWeights(0, 0, 1, 0)) == 0.6
        assert quality(0.2, 0.4, 0.6, 0.1, CriteriaWeights(2, 0, 0, 0)) == 0.4


class TestComputeMetrics:
    def test_plain_case(self):
        m = compute_metrics(3, 4, 5, 10)
        assert m.f_g == 0.6
        assert m.f_all == 0.3
        assert m.confidence == 0.75
        assert m.lift == 1.5
        assert m.correlation == 0.5  # (1.5 - 1) / (2 - 1)
        assert m.quality == 0.3 + 0.6 + 0.75 + 0.5

    def test_zero_goal_support_pins_negative_one(self):
        m = compute_metrics(0, 4, 5, 10)
        assert (m.f_g, m.f_all, m.confidence, m.lift) == (0.0, 0.0, 0.0, 0.0)
        assert m.correlation == -1.0

    def test_independence_pins_zero(self):
        m = compute_metrics(2, 4, 5, 10)
        assert m.lift == 1.0
        assert m.correlation == 0.0

    def test_negative_branch_is_lift_minus_one(self):
        m = compute_metrics(1, 4, 5, 10)
        assert m.lift == 0.5
        assert m.correlation == -0.5

    def test_premise_only_in_goal_pins_one(self):
        m = compute_metrics(4, 4, 5, 15)
        assert m.lift == 3.0  # equals the attainable maximum N / n_k
        assert m.correlation == 1.0

    def test_single_populated_goal_has_zero_correlation(self):
        m = compute_metrics(4, 4, 10, 10)
        assert m.confidence == 1.0
        assert m.correlation == 0.0

    @pytest.mark.parametrize(
        "args,msg",
        [
            ((1, 0, 5, 10), "no support"),
            ((1, 4, 0, 10), "empty goal partition"),
            ((5, 4, 5, 10), "inconsistent"),
            ((2, 4, 5, 3), "inconsistent"),
            ((-1, 4, 5, 10), "inconsistent"),
        ],
    )
    def test_rejects_bad_counts(self, args, msg):
        with pytest.raises(ValueError, match=msg):
            compute_metrics(*args)

    @given(
        total=st.integers(2, 400),
        data=st.data(),
    )
    @settings(max_examples=200, deadline=None)
    def test_linear_relations(self, total, data):
        n_k = data.draw(st.integers(1, total))
        sup = data.draw(st.integers(1, total))
        sup_k = data.draw(st.integers(0, min(sup, n_k)))
        m = compute_metrics(sup_k, sup, n_k, total)
        assert abs(m.f_all - m.f_g * (n_k / total)) <= 1e-12
        assert abs(m.f_all - m.confidence * (sup / total)) <= 1e-12
        assert abs(m.lift - m.confidence * (total / n_k)) <= 1e-12
        assert -1.0 <= m.correlation <= 1.0
        if n_k < total:
            if m.lift > 1.0:
                assert m.correlation > 0.0
            elif m.lift < 1.0:
                assert m.correlation < 0.0
            else:
                assert m.correlation == 0.0
        assert m.quality == quality(m.f_all, m.f_g, m.confidence, m.correlation)

    @given(
        total=st.integers(3, 300),
        data=st.data(),
    )
    @settings(max_examples=100, deadline=None)
    def test_correlation_monotone_in_goal_support(self, total, data):
        n_k = data.draw(st.integers(1, total - 1))
        sup = data.draw(st.integers(2, total))
        a = data.draw(st.integers(0, min(sup, n_k) - 1))
        b = data.draw(st.integers(a + 1, min(sup, n_k)))
        low = compute_metrics(a, sup, n_k, total)
        high = compute_metrics(b, sup, n_k, total)
        assert high.correlation > low.correlation

    def test_duplication_gives_identical_floats(self):
        base = compute_metrics(3, 7, 11, 29)
        for factor in (2, 10, 1000):
            scaled = compute_metrics(3 * factor, 7 * factor, 11 * factor, 29 * factor)
            assert scaled == base


class TestRecommendedMinCorrelation:
    @pytest.mark.parametrize("p,expected", [(1.0, 0.0), (2.0, 0.25), (4.0, 0.375)])
    def test_values(self, p, expected):
        assert recommended_min_correlation(p) == expected

    def test_stays_below_half(self):
        assert recommended_min_correlation(1e9) < 0.5

    @pytest.mark.parametrize("p", [0.0, -1.0])
    def test_rejects_non_positive(self, p):
        with pytest.raises(ValueError):
            recommended_min_correlation(p)

    @given(
        total=st.integers(4, 500),
        nk_seed=st.integers(0, 10**6),
        sup_seed=st.integers(0, 10**6),
        gap=st.integers(0, 10**6),
    )
    @settings(max_examples=200, deadline=None)
    def test_threshold_guarantees_majority_confidence(self, total, nk_seed, sup_seed, gap):
        # the guarantee is about minority goal classes (n_k <= N/2); for a
        # majority goal the recommended threshold goes negative and carries
        # no confidence promise
        n_k = 1 + nk_seed % (total // 2)
        sup = 1 + sup_seed % total
        cap = min(sup, n_k)
        # bias sup_k toward the top so the threshold is actually exceeded
        sup_k = cap - (gap % (cap + 1)) // 2
        metrics = compute_metrics(sup_k, sup, n_k, total)
        p = (total - n_k) / n_k
        if metrics.correlation > recommended_min_correlation(p):
            assert metrics.confidence > 0.5

    def test_threshold_exceeded_case_is_reachable(self):
        # conf 0.75, lift 1.5 on an even split: corr 0.5 > threshold 0
        metrics = compute_metrics(3, 4, 5, 10)
        assert metrics.correlation > recommended_min_correlation(1.0)
        assert metrics.confidence > 0.5


class TestSupportResult:
    def test_total(self):
        assert SupportResult((2, 0, 5)).total == 7
        assert SupportResult(()).total == 0
