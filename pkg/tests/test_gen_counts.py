from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from helpers import L, S, expected_groups_kind_first, lr_oracle, poisson_weight_oracle
from tempobench.core import ClauseKind
from tempobench.gen import (
    BASE_LENGTHS,
    GenerationError,
    GroupSpec,
    apportion,
    group_counts_poisson,
    group_counts_uniform,
    poisson_weights,
)


def by_group(groups: list[GroupSpec]) -> dict:
    return {(g.length, g.kind): g.count for g in groups}


def kind_total(groups, kind) -> int:
    return sum(g.count for g in groups if g.kind is kind)


def test_uniform_100_half_split():
    got = by_group(group_counts_uniform(100, BASE_LENGTHS, 0.5))
    # base 8 everywhere, remainder 4 lands on the length-2/3 groups of both kinds
    expected = {(length, kind): 8 for length in BASE_LENGTHS for kind in (L, S)}
    for length in (2, 3):
        expected[(length, L)] = 9
        expected[(length, S)] = 9
    assert got == expected
    assert sum(got.values()) == 100


def test_uniform_divisible_case_has_no_remainder():
    got = by_group(group_counts_uniform(48, BASE_LENGTHS, 0.5))
    assert set(got.values()) == {4}


def test_uniform_ninety_ten_exact_kind_totals():
    groups = group_counts_uniform(100, BASE_LENGTHS, 0.9)
    assert kind_total(groups, L) == 90
    assert kind_total(groups, S) == 10
    assert sum(g.count for g in groups) == 100


def test_uniform_base_is_floor_of_share():
    # base count per (length, kind) group is floor(n * share_kind / |lengths|)
    for share in (0.5, 0.9, 0.65, 0.35):
        groups = group_counts_uniform(100, BASE_LENGTHS, share)
        for kind, kind_share in ((L, share), (S, 1 - share)):
            base = int(Fraction(100) * Fraction(kind_share) / len(BASE_LENGTHS))
            counts = [g.count for g in groups if g.kind is kind]
            assert min(counts) in (base, base + 1)
            assert all(c in (base, base + 1) for c in counts)


def test_uniform_rejects_too_few_clauses():
    with pytest.raises(GenerationError):
        group_counts_uniform(11, BASE_LENGTHS, 0.5)
    group_counts_uniform(12, BASE_LENGTHS, 0.5)


def test_uniform_rejects_degenerate_share():
    with pytest.raises(GenerationError):
        group_counts_uniform(100, BASE_LENGTHS, 0.0)
    with pytest.raises(GenerationError):
        group_counts_uniform(100, BASE_LENGTHS, 1.0)


def test_poisson_peaks_at_length_three():
    groups = group_counts_poisson(100, BASE_LENGTHS, 3.5, 0.5)
    per_len = {}
    for g in groups:
        per_len[g.length] = per_len.get(g.length, 0) + g.count
    assert max(per_len, key=per_len.get) == 3
    # direct pmf argmax cross-check: pmf(k; 3.5) maximal at k = 3 over the set
    weights = poisson_weight_oracle(BASE_LENGTHS, 3.5)
    assert BASE_LENGTHS[max(range(len(weights)), key=lambda i: weights[i])] == 3


def test_poisson_single_length_takes_everything():
    groups = group_counts_poisson(100, [4], 3.5, 0.5)
    assert by_group(groups) == {(4, L): 50, (4, S): 50}


def test_poisson_thousand_matches_rational_oracle():
    groups = group_counts_poisson(1000, BASE_LENGTHS, 3.5, 0.5)
    weights = poisson_weight_oracle(BASE_LENGTHS, 3.5)
    expected = expected_groups_kind_first(1000, BASE_LENGTHS, 0.5, weights)
    assert by_group(groups) == expected
    assert sum(g.count for g in groups) == 1000
    # per-length share stays within 1/1000 of the normalised pmf
    total_weight = sum(weights)
    per_len = {}
    for g in groups:
        per_len[g.length] = per_len.get(g.length, 0) + g.count
    for length, w in zip(BASE_LENGTHS, weights):
        assert abs(Fraction(per_len[length], 1000) - w / total_weight) < Fraction(1, 1000)


def test_poisson_weights_are_exact_rationals():
    weights = poisson_weights((2, 3), 3.5)
    assert weights == [Fraction(7, 2) ** 2 / 2, Fraction(7, 2) ** 3 / 6]


def test_apportion_matches_independent_oracle_on_examples():
    cases = [
        (100, [Fraction(1)] * 6),
        (50, [Fraction(1, 100), Fraction(33, 100), Fraction(33, 100), Fraction(33, 100)]),
        (17, [Fraction(3), Fraction(1), Fraction(5)]),
        (0, [Fraction(1), Fraction(2)]),
    ]
    for total, weights in cases:
        assert apportion(total, weights) == lr_oracle(total, weights)


@settings(max_examples=300)
@given(
    total=st.integers(min_value=0, max_value=5000),
    raw=st.lists(st.integers(min_value=0, max_value=1000), min_size=1, max_size=8),
)
def test_apportion_properties(total, raw):
    if sum(raw) == 0:
        raw[0] = 1
    weights = [Fraction(w) for w in raw]
    counts = apportion(total, weights)
    assert sum(counts) == total
    assert counts == lr_oracle(total, weights)
    weight_sum = sum(weights)
    for count, w in zip(counts, weights):
        quota = Fraction(total) * w / weight_sum
        assert quota - 1 < count < quota + 1


@settings(max_examples=200)
@given(
    n=st.integers(min_value=12, max_value=4000),
    share_pct=st.integers(min_value=1, max_value=99),
)
def test_uniform_kind_totals_are_largest_remainder_exact(n, share_pct):
    share = Fraction(share_pct, 100)
    groups = group_counts_uniform(n, BASE_LENGTHS, share)
    live_expected, safe_expected = lr_oracle(n, [share, 1 - share])
    assert kind_total(groups, L) == live_expected
    assert kind_total(groups, S) == safe_expected
    assert sum(g.count for g in groups) == n
