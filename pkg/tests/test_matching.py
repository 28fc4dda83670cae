"""Window predicate, anchor search, and largest-match behavior."""

from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acsm import (
    DistanceMetric,
    MatchResult,
    MatcherSpec,
    Scope,
    candidate_window,
    distance,
    exact_equal,
    find_anchor,
    interval_equal,
    largest_match,
    matches,
)
from helpers import grid, random_square, worked_pair

HAMMING = DistanceMetric.HAMMING_FRACTION
MAD = DistanceMetric.MEAN_ABS_DIFF
NMAD = DistanceMetric.NORMALIZED_MEAN_ABS_DIFF


class TestExactEqual:
    def test_single_cell_windows(self):
        a = grid([[1, 2], [3, 4]], 10)
        b = grid([[9, 9], [9, 4]], 10)
        assert exact_equal(a, 2, 2, b, 2, 2, 1)
        assert not exact_equal(a, 2, 2, b, 2, 2, 2)

    def test_full_window_match(self):
        a, _ = worked_pair()
        assert exact_equal(a, 2, 2, a, 2, 2, 2)

    def test_window_must_fit(self):
        a, b = worked_pair()
        with pytest.raises(ValueError, match="outside"):
            exact_equal(a, 2, 2, b, 2, 2, 3)
        with pytest.raises(ValueError, match="outside"):
            exact_equal(a, 1, 2, b, 2, 2, 2)
        with pytest.raises(ValueError, match=">= 1"):
            exact_equal(a, 1, 1, b, 1, 1, 0)


class TestIntervalEqual:
    def test_compares_only_sampled_offsets(self):
        a = grid([[1, 2], [3, 4]], 10)
        b = grid([[1, 9], [9, 9]], 10)
        # step 2 on a side-2 window leaves just the top-left cells (offset 0, 0)
        assert interval_equal(a, 2, 2, b, 2, 2, 2, 2)
        assert not interval_equal(a, 2, 2, b, 2, 2, 2, 1)

    def test_side_three_step_two_checks_four_cells(self):
        a = grid([[1, 9, 2], [9, 9, 9], [3, 9, 4]], 10)
        b = grid([[1, 0, 2], [0, 0, 0], [3, 0, 4]], 10)
        assert interval_equal(a, 3, 3, b, 3, 3, 3, 2)
        b2 = grid([[1, 0, 2], [0, 0, 0], [3, 0, 5]], 10)
        assert not interval_equal(a, 3, 3, b2, 3, 3, 3, 2)

    def test_step_one_is_exact(self):
        rng = np.random.default_rng(7)
        for _ in range(40):
            a = random_square(rng, 4, 3)
            b = random_square(rng, 4, 3)
            assert interval_equal(a, 4, 4, b, 4, 4, 4, 1) == exact_equal(a, 4, 4, b, 4, 4, 4)

    def test_huge_step_reduces_to_top_left_cell(self):
        rng = np.random.default_rng(8)
        for _ in range(40):
            a = random_square(rng, 3, 4)
            b = random_square(rng, 3, 4)
            expect = a.symbol(1, 1) == b.symbol(1, 1)
            assert interval_equal(a, 3, 3, b, 3, 3, 3, 5) == expect

    def test_rejects_non_positive_step(self):
        a, b = worked_pair()
        with pytest.raises(ValueError):
            interval_equal(a, 1, 1, b, 1, 1, 1, 0)


class TestDistance:
    def test_worked_values(self):
        a, b = worked_pair()
        assert distance(a, 2, 2, b, 2, 2, 2, HAMMING) == 0.25
        assert distance(a, 2, 2, b, 2, 2, 2, MAD) == 0.25
        assert distance(a, 2, 2, b, 2, 2, 2, NMAD) == 0.05

    def test_identical_windows_are_at_zero(self):
        a, _ = worked_pair()
        for metric in (HAMMING, MAD, NMAD):
            assert distance(a, 2, 2, a, 2, 2, 2, metric) == 0.0

    def test_one_letter_alphabet_normalized_distance_is_zero(self):
        a = grid([[0, 0], [0, 0]], 1)
        assert distance(a, 2, 2, a, 2, 2, 2, NMAD) == 0.0

    def test_alphabet_mismatch_is_an_error(self):
        a = grid([[1]], 3)
        b = grid([[1]], 4)
        with pytest.raises(ValueError, match="alphabet mismatch"):
            distance(a, 1, 1, b, 1, 1, 1, HAMMING)


class TestMatches:
    def test_distance_threshold_is_strict(self):
        a, b = worked_pair()
        # the worked windows sit exactly at hamming distance 0.25
        at = MatcherSpec.distance(HAMMING, 0.25)
        above = MatcherSpec.distance(HAMMING, 0.2500001)
        assert not matches(a, 2, 2, b, 2, 2, 2, at)
        assert matches(a, 2, 2, b, 2, 2, 2, above)

    def test_dispatches_all_matcher_kinds(self):
        a, b = worked_pair()
        assert matches(a, 1, 1, b, 1, 1, 1, MatcherSpec.exact())
        assert matches(a, 2, 2, b, 2, 2, 2, MatcherSpec.interval(2))
        assert matches(a, 2, 2, b, 2, 2, 2, MatcherSpec.distance(MAD, 0.5))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**9), st.sampled_from([0.1, 0.25, 0.3, 0.5, 1.0]))
    def test_distance_matcher_agrees_with_distance_value(self, seed, tau):
        rng = np.random.default_rng(seed)
        s = int(rng.integers(1, 5))
        a = random_square(rng, s, 5)
        b = random_square(rng, s, 5)
        for metric in (HAMMING, MAD, NMAD):
            got = matches(a, s, s, b, s, s, s, MatcherSpec.distance(metric, tau))
            assert got == (distance(a, s, s, b, s, s, s, metric) < tau)


class TestCandidateWindow:
    def test_global_scope_admits_every_feasible_anchor(self):
        win = candidate_window(Scope.GLOBAL, 2, 1, 1, 5)
        assert (win.k_lo, win.k_hi, win.h_lo, win.h_hi) == (2, 5, 2, 5)

    def test_neighborhood_is_clipped(self):
        win = candidate_window(Scope.neighborhood(3), 1, 1, 5, 5)
        assert (win.k_lo, win.k_hi, win.h_lo, win.h_hi) == (1, 2, 4, 5)

    def test_window_can_be_empty(self):
        win = candidate_window(Scope.neighborhood(1), 3, 2, 2, 5)
        assert win.is_empty
        assert list(win.positions()) == []

    def test_positions_are_row_major(self):
        win = candidate_window(Scope.neighborhood(3), 1, 2, 2, 5)
        assert list(win.positions()) == [
            (1, 1), (1, 2), (1, 3),
            (2, 1), (2, 2), (2, 3),
            (3, 1), (3, 2), (3, 3),
        ]


class TestFindAnchor:
    def test_finds_distant_copy_globally(self):
        a = grid([[7, 0], [0, 0]], 8)
        b = grid([[0, 0], [0, 7]], 8)
        assert find_anchor(a, 1, 1, 1, b, Scope.GLOBAL, MatcherSpec.exact()) == (2, 2)

    def test_tight_neighborhood_misses_it(self):
        a = grid([[7, 0], [0, 0]], 8)
        b = grid([[0, 0], [0, 7]], 8)
        assert find_anchor(a, 1, 1, 1, b, Scope.neighborhood(1), MatcherSpec.exact()) is None

    def test_first_match_in_scan_order_wins(self):
        a = grid([[5]], 6)
        b = grid([[5, 0], [0, 5]], 6)
        assert find_anchor(a, 1, 1, 1, b, Scope.GLOBAL, MatcherSpec.exact()) == (1, 1)

    def test_empty_candidate_window_returns_none(self):
        # the query anchor sits beyond the smaller search matrix, so a
        # radius-0 neighborhood around it holds no feasible anchor at all
        a = grid([[1] * 4] * 4, 2)
        b = grid([[1, 1], [1, 1]], 2)
        assert find_anchor(a, 4, 4, 1, b, Scope.neighborhood(1), MatcherSpec.exact()) is None
        assert find_anchor(a, 4, 4, 1, b, Scope.GLOBAL, MatcherSpec.exact()) == (1, 1)

    def test_search_matrix_must_be_square(self):
        a = grid([[1]], 2)
        b = grid([[1, 0, 1], [0, 1, 0]], 2)
        with pytest.raises(ValueError, match="square"):
            find_anchor(a, 1, 1, 1, b, Scope.GLOBAL, MatcherSpec.exact())


class TestLargestMatch:
    def test_self_match_takes_the_whole_corner_window(self):
        a, _ = worked_pair()
        r = largest_match(a, 2, 2, a, 1, Scope.GLOBAL, MatcherSpec.exact())
        assert r == MatchResult(4, (2, 2, 2))

    def test_alpha_can_rule_everything_out(self):
        a, b = worked_pair()
        r = largest_match(a, 2, 2, b, 2, Scope.GLOBAL, MatcherSpec.exact())
        assert r == MatchResult(0)

    def test_single_cell_fallback(self):
        a, b = worked_pair()
        r = largest_match(a, 1, 2, b, 1, Scope.GLOBAL, MatcherSpec.exact())
        assert r == MatchResult(1, (1, 2, 1))

    def test_no_match_anywhere(self):
        a = grid([[1, 1], [1, 1]], 3)
        b = grid([[2, 2], [2, 2]], 3)
        r = largest_match(a, 2, 2, b, 1, Scope.GLOBAL, MatcherSpec.exact())
        assert r == MatchResult(0)

    def test_self_anchor_lower_bound_in_tightest_neighborhood(self):
        rng = np.random.default_rng(5)
        a = random_square(rng, 6, 4)
        for i in range(1, 7):
            for j in range(1, 7):
                r = largest_match(a, i, j, a, 1, Scope.neighborhood(1), MatcherSpec.exact())
                assert r.w == min(i, j) ** 2

    def test_w_never_decreases_with_tau(self):
        rng = np.random.default_rng(6)
        taus = [0.05, 0.1, 0.2, 0.4, 0.8]
        for _ in range(10):
            a = random_square(rng, 6, 4)
            b = random_square(rng, 6, 4)
            i = int(rng.integers(1, 7))
            j = int(rng.integers(1, 7))
            widths = [
                largest_match(a, i, j, b, 1, Scope.GLOBAL, MatcherSpec.distance(MAD, t)).w
                for t in taus
            ]
            assert widths == sorted(widths)

    def test_w_never_decreases_with_epsilon(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            a = random_square(rng, 6, 4)
            b = random_square(rng, 6, 4)
            i = int(rng.integers(1, 7))
            j = int(rng.integers(1, 7))
            widths = [
                largest_match(
                    a, i, j, b, 1, Scope.neighborhood(e), MatcherSpec.distance(HAMMING, 0.3)
                ).w
                for e in (1, 3, 5, 9, 13)
            ]
            assert widths == sorted(widths)

    def test_global_scope_dominates_neighborhoods(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            a = random_square(rng, 6, 4)
            b = random_square(rng, 6, 4)
            i = int(rng.integers(1, 7))
            j = int(rng.integers(1, 7))
            local = largest_match(a, i, j, b, 1, Scope.neighborhood(5), MatcherSpec.exact())
            full = largest_match(a, i, j, b, 1, Scope.GLOBAL, MatcherSpec.exact())
            assert full.w >= local.w

    def test_exact_threshold_hamming_equals_exact_matching(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            a = random_square(rng, 5, 2)
            b = random_square(rng, 5, 2)
            tau = 1.0 / (2 * 5 * 5)
            for i, j in ((1, 1), (3, 4), (5, 5)):
                exact = largest_match(a, i, j, b, 1, Scope.GLOBAL, MatcherSpec.exact())
                close = largest_match(
                    a, i, j, b, 1, Scope.GLOBAL, MatcherSpec.distance(HAMMING, tau)
                )
                assert exact == close

    def test_results_do_not_depend_on_evaluation_order(self):
        rng = np.random.default_rng(10)
        a = random_square(rng, 6, 3)
        b = random_square(rng, 6, 3)
        anchors = [(i, j) for i in range(1, 7) for j in range(1, 7)]

        def at(ij):
            return largest_match(a, ij[0], ij[1], b, 1, Scope.GLOBAL, MatcherSpec.exact())

        sequential = [at(ij) for ij in anchors]
        with ThreadPoolExecutor(max_workers=4) as pool:
            threaded = list(pool.map(at, anchors))
        assert sequential == threaded
