import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from collatz_census import (
    ClassLabel,
    MapKind,
    NatOverflowError,
    StepBudgetExceeded,
    build_residue_cache,
    classify_direct,
    classify_fast,
    cr_step,
    labels_for,
    pdcr_step,
    residue_to_label,
    stopping_time,
    verify_range,
)
from oracles import oracle_label, oracle_stopping


@pytest.fixture(scope="module")
def cr_cache():
    return build_residue_cache(MapKind.CR, 1 << 16)


@pytest.fixture(scope="module")
def pdcr_cache():
    return build_residue_cache(MapKind.PDCR, 1 << 16)


class TestResidueToLabel:
    @pytest.mark.parametrize(
        "map_kind, residue, label",
        [
            (MapKind.CR3, 0, 1),
            (MapKind.CR3, 1, 2),
            (MapKind.CR3, 2, 4),
            (MapKind.PDCR2, 0, 1),
            (MapKind.PDCR2, 1, 2),
        ],
    )
    def test_table(self, map_kind, residue, label):
        assert residue_to_label(map_kind, residue) == label

    @pytest.mark.parametrize(
        "map_kind, residue", [(MapKind.CR3, 3), (MapKind.PDCR2, 2), (MapKind.CR3, -1)]
    )
    def test_out_of_range(self, map_kind, residue):
        with pytest.raises(ValueError):
            residue_to_label(map_kind, residue)

    def test_rejects_base_maps(self):
        with pytest.raises(ValueError):
            residue_to_label(MapKind.CR, 0)
        with pytest.raises(ValueError):
            labels_for(MapKind.PDCR)

    def test_residues_consistent_with_fixed_points(self):
        # each fixed point's own stopping-time residue maps back to itself
        assert [stopping_time(MapKind.CR, x).steps for x in (1, 2, 4)] == [0, 1, 2]
        assert [stopping_time(MapKind.PDCR, x).steps for x in (1, 2)] == [0, 1]


class TestClassifyDirect:
    @pytest.mark.parametrize(
        "map_kind, n, label",
        [
            (MapKind.CR3, 1, 1),
            (MapKind.CR3, 3, 2),
            (MapKind.CR3, 5, 4),
            (MapKind.PDCR2, 3, 2),
            (MapKind.PDCR2, 5, 1),
        ],
    )
    def test_examples(self, map_kind, n, label):
        outcome = classify_direct(map_kind, n)
        assert outcome.label == label
        assert outcome.path == "direct"

    def test_step_counts(self):
        # 3 -> 16 -> 2 -> 2: the third application reproduces its input
        assert classify_direct(MapKind.CR3, 3).composite_steps == 3
        assert classify_direct(MapKind.CR3, 4).composite_steps == 1
        assert classify_direct(MapKind.CR3, 8).composite_steps == 2

    def test_rejects_base_maps(self):
        with pytest.raises(ValueError):
            classify_direct(MapKind.CR, 5)

    def test_budget(self):
        with pytest.raises(StepBudgetExceeded):
            classify_direct(MapKind.CR3, 27, max_steps=3)

    @given(st.integers(1, 10**5))
    @settings(max_examples=100)
    def test_budget_stability(self, n):
        # a just-sufficient budget succeeds; doubling it changes nothing
        outcome = classify_direct(MapKind.CR3, n)
        exact = classify_direct(MapKind.CR3, n, max_steps=outcome.composite_steps)
        doubled = classify_direct(MapKind.CR3, n, max_steps=2 * outcome.composite_steps)
        assert exact.label == doubled.label == outcome.label
        with pytest.raises(StepBudgetExceeded):
            classify_direct(MapKind.CR3, n, max_steps=outcome.composite_steps - 1)

    def test_partitions_of_the_two_maps_differ(self):
        # 1 and 8 share a cr3 class but split under pdcr2; the two
        # partitions carry no per-number correspondence
        assert classify_direct(MapKind.CR3, 1).label == 1
        assert classify_direct(MapKind.CR3, 8).label == 1
        assert classify_direct(MapKind.PDCR2, 1).label == 1
        assert classify_direct(MapKind.PDCR2, 8).label == 2

    def test_fixed_points_classify_to_themselves(self, cr_cache, pdcr_cache):
        for x in (1, 2, 4):
            assert classify_direct(MapKind.CR3, x).label == x
            assert classify_fast(MapKind.CR3, x, cr_cache).label == x
        for x in (1, 2):
            assert classify_direct(MapKind.PDCR2, x).label == x
            assert classify_fast(MapKind.PDCR2, x, pdcr_cache).label == x


class TestResidueCache:
    def test_minimal_bound(self):
        cache = build_residue_cache(MapKind.CR, 2)
        assert cache.entry(1) == 0

    def test_cr_entries_to_ten(self):
        cache = build_residue_cache(MapKind.CR, 10)
        assert [cache.entry(n) for n in range(1, 10)] == [0, 1, 1, 2, 2, 2, 1, 0, 1]

    def test_pdcr_entries_to_five(self):
        cache = build_residue_cache(MapKind.PDCR, 5)
        assert [cache.entry(n) for n in range(1, 5)] == [0, 1, 1, 0]

    def test_rejects_bad_bound(self):
        with pytest.raises(ValueError):
            build_residue_cache(MapKind.CR, 1)

    def test_rejects_composite_basis(self):
        with pytest.raises(ValueError):
            build_residue_cache(MapKind.CR3, 100)

    def test_entry_range_checked(self, cr_cache):
        with pytest.raises(ValueError):
            cr_cache.entry(0)
        with pytest.raises(ValueError):
            cr_cache.entry(cr_cache.bound)

    def test_vector_gather_matches_scalar(self, cr_cache):
        ns = np.arange(1, 5000, dtype=np.uint64)
        gathered = cr_cache.entries(ns)
        assert [cr_cache.entry(int(n)) for n in ns] == list(gathered)

    def test_vector_gather_range_checked(self, cr_cache):
        with pytest.raises(ValueError):
            cr_cache.entries(np.array([cr_cache.bound], dtype=np.uint64))

    def test_immutable_after_build(self, cr_cache):
        with pytest.raises(ValueError):
            cr_cache._packed[0] = 0

    def test_sampled_entries_match_stopping_times(self, cr_cache, pdcr_cache):
        rng = random.Random(20260809)
        for cache, basis in ((cr_cache, MapKind.CR), (pdcr_cache, MapKind.PDCR)):
            for n in rng.sample(range(1, cache.bound), 10_000):
                assert cache.entry(n) == stopping_time(basis, n).residue

    def test_spot_entries_against_oracle(self, cr_cache):
        rng = random.Random(7)
        for n in rng.sample(range(1, cr_cache.bound), 500):
            assert cr_cache.entry(n) == oracle_stopping(n, "cr") % 3

    @given(n=st.integers(2, (1 << 16) - 1))
    @settings(max_examples=200)
    def test_residue_additivity(self, n, cr_cache, pdcr_cache):
        # one step advances the residue by one in the basis modulus
        nxt = cr_step(n)
        if nxt < cr_cache.bound:
            assert cr_cache.entry(n) == (1 + cr_cache.entry(nxt)) % 3
        nxt = pdcr_step(n)
        if nxt < pdcr_cache.bound:
            assert pdcr_cache.entry(n) == (1 + pdcr_cache.entry(nxt)) % 2


class TestClassifyFast:
    @pytest.mark.parametrize(
        "map_kind, n, label",
        [(MapKind.CR3, 27, 1), (MapKind.CR3, 8, 1), (MapKind.PDCR2, 8, 2)],
    )
    def test_examples(self, map_kind, n, label, cr_cache, pdcr_cache):
        cache = cr_cache if map_kind is MapKind.CR3 else pdcr_cache
        outcome = classify_fast(map_kind, n, cache)
        assert outcome.label == label
        assert outcome.path == "fast"
        assert outcome.composite_steps is None

    def test_above_bound_descends_into_cache(self):
        cache = build_residue_cache(MapKind.CR, 10)
        assert classify_fast(MapKind.CR3, 27, cache).label == 1
        assert classify_fast(MapKind.CR3, 97, cache).label == ClassLabel(
            oracle_label(97, "cr3")
        )

    def test_basis_mismatch(self, pdcr_cache):
        with pytest.raises(ValueError):
            classify_fast(MapKind.CR3, 5, pdcr_cache)

    def test_budget_above_bound(self):
        cache = build_residue_cache(MapKind.CR, 4)
        with pytest.raises(StepBudgetExceeded) as exc:
            classify_fast(MapKind.CR3, 27, cache, max_steps=5)
        assert exc.value.n == 27

    def test_overflow_names_queried_number(self, cr_cache):
        big = 2**127 + 1  # odd; trajectory immediately leaves 128 bits
        with pytest.raises(NatOverflowError) as exc:
            classify_fast(MapKind.CR3, big, cr_cache)
        assert exc.value.n == big

    def test_uint64_overflowing_start_still_classifies(self, cr_cache):
        # forces the big-int lane of the vectorized sweep's scalar twin
        n = 2**63 + 1
        fast = classify_fast(MapKind.CR3, n, cr_cache)
        direct = classify_direct(MapKind.CR3, n)
        assert fast.label == direct.label

    @given(
        n=st.integers(1, 10**6),
        map_kind=st.sampled_from([MapKind.CR3, MapKind.PDCR2]),
    )
    @settings(max_examples=150, deadline=None)
    def test_agrees_with_direct_and_oracle(self, n, map_kind, cr_cache, pdcr_cache):
        cache = cr_cache if map_kind is MapKind.CR3 else pdcr_cache
        fast = classify_fast(map_kind, n, cache)
        assert fast.label == classify_direct(map_kind, n).label
        assert fast.label == oracle_label(n, map_kind.value)


class TestVerifyRange:
    def test_cr3_small_range(self, cr_cache):
        assert verify_range(MapKind.CR3, 1, 100, cr_cache) == []

    def test_pdcr2_small_range(self, pdcr_cache):
        assert verify_range(MapKind.PDCR2, 1, 100, pdcr_cache) == []

    def test_single_fixed_point(self, cr_cache):
        assert verify_range(MapKind.CR3, 4, 4, cr_cache) == []

    def test_straddles_cache_bound(self):
        cache = build_residue_cache(MapKind.CR, 50)
        assert verify_range(MapKind.CR3, 1, 200, cache) == []

    def test_rejects_empty_range(self, cr_cache):
        with pytest.raises(ValueError):
            verify_range(MapKind.CR3, 10, 9, cr_cache)

    def test_failing_member_is_reported(self, cr_cache):
        # a budget every member blows through turns the whole range into mismatches
        assert verify_range(MapKind.CR3, 27, 27, cr_cache, max_steps=0) == [27]
