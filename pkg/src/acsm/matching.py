"""Window predicates, anchor search, and the largest-match scan.

All coordinates are 1-based bottom-right anchors, matching the core types.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

import numpy as np

from . import _kernels
from .core import DistanceMetric, MatchResult, MatcherSpec, Scope, SymbolMatrix

__all__ = [
    "CandidateWindow",
    "candidate_window",
    "distance",
    "exact_equal",
    "find_anchor",
    "interval_equal",
    "largest_match",
    "matches",
]

_METRIC_CODES = {
    DistanceMetric.HAMMING_FRACTION: _kernels.METRIC_HAMMING,
    DistanceMetric.MEAN_ABS_DIFF: _kernels.METRIC_MAD,
    DistanceMetric.NORMALIZED_MEAN_ABS_DIFF: _kernels.METRIC_NMAD,
}


def matcher_codes(matcher: MatcherSpec) -> Tuple[int, int, int, float]:
    """Translate a MatcherSpec into the integer codes the kernels take."""
    if matcher.kind == "exact":
        return _kernels.MATCHER_EXACT, 1, 0, 0.0
    if matcher.kind == "interval":
        return _kernels.MATCHER_INTERVAL, matcher.step, 0, 0.0
    return _kernels.MATCHER_DISTANCE, 1, _METRIC_CODES[matcher.metric], matcher.tau


def _check_window(name: str, mat: SymbolMatrix, i: int, j: int, s: int) -> None:
    if s < 1:
        raise ValueError(f"window side must be >= 1, got {s}")
    if not (s <= i <= mat.rows and s <= j <= mat.cols):
        raise ValueError(
            f"side-{s} window anchored at ({i}, {j}) falls outside "
            f"the {mat.rows}x{mat.cols} matrix {name}"
        )


def exact_equal(a: SymbolMatrix, i: int, j: int, b: SymbolMatrix, k: int, h: int, s: int) -> bool:
    """True when the side-s windows anchored at (i, j) in a and (k, h) in b agree cell for cell."""
    _check_window("a", a, i, j, s)
    _check_window("b", b, k, h, s)
    return bool(
        _kernels.window_match(
            a.symbols, b.symbols, i, j, k, h, s, _kernels.MATCHER_EXACT, 1, 0, 0
        )
    )


def interval_equal(
    a: SymbolMatrix, i: int, j: int, b: SymbolMatrix, k: int, h: int, s: int, step: int
) -> bool:
    """Exact comparison restricted to window offsets that are multiples of step on both axes.

    A step of 1 is plain exact equality; a step of at least s leaves only the
    top-left cell of each window.
    """
    if step < 1:
        raise ValueError(f"interval step must be >= 1, got {step}")
    _check_window("a", a, i, j, s)
    _check_window("b", b, k, h, s)
    return bool(
        _kernels.window_match(
            a.symbols, b.symbols, i, j, k, h, s, _kernels.MATCHER_INTERVAL, step, 0, 0
        )
    )


def distance(
    a: SymbolMatrix, i: int, j: int, b: SymbolMatrix, k: int, h: int, s: int,
    metric: DistanceMetric,
) -> float:
    """Distance between two side-s windows under the given metric.

    Identical windows are at distance 0.  Raises ValueError when the two
    matrices use different alphabets or a window does not fit.
    """
    if a.alphabet_size != b.alphabet_size:
        raise ValueError(
            f"alphabet mismatch: {a.alphabet_size} vs {b.alphabet_size}"
        )
    _check_window("a", a, i, j, s)
    _check_window("b", b, k, h, s)
    aw = a.symbols[i - s : i, j - s : j]
    bw = b.symbols[k - s : k, h - s : h]
    if metric is DistanceMetric.HAMMING_FRACTION:
        return int(np.count_nonzero(aw != bw)) / (s * s)
    total = int(np.abs(aw.astype(np.int64) - bw.astype(np.int64)).sum())
    if metric is DistanceMetric.MEAN_ABS_DIFF:
        return total / (s * s)
    if a.alphabet_size == 1:
        return 0.0
    return total / (s * s * (a.alphabet_size - 1))


def matches(
    a: SymbolMatrix, i: int, j: int, b: SymbolMatrix, k: int, h: int, s: int,
    matcher: MatcherSpec,
) -> bool:
    """Apply a matcher to one window pair.

    Distance matchers accept strictly below tau, so a window pair exactly at
    the threshold does not match.
    """
    if matcher.kind == "exact":
        return exact_equal(a, i, j, b, k, h, s)
    if matcher.kind == "interval":
        return interval_equal(a, i, j, b, k, h, s, matcher.step)
    return distance(a, i, j, b, k, h, s, matcher.metric) < matcher.tau


@dataclass(frozen=True)
class CandidateWindow:
    """Inclusive 1-based anchor ranges searched in the second matrix; may be empty."""

    k_lo: int
    k_hi: int
    h_lo: int
    h_hi: int

    @property
    def is_empty(self) -> bool:
        return self.k_lo > self.k_hi or self.h_lo > self.h_hi

    def positions(self) -> Iterator[Tuple[int, int]]:
        """Anchors in scan order (row-major)."""
        for k in range(self.k_lo, self.k_hi + 1):
            for h in range(self.h_lo, self.h_hi + 1):
                yield k, h


def candidate_window(scope: Scope, s: int, i: int, j: int, m: int) -> CandidateWindow:
    """Anchor ranges for a side-s window around (i, j) in an m x m matrix.

    Global scope admits every anchor that fits; a neighborhood admits anchors
    within its radius of (i, j), clipped to the matrix.
    """
    if scope.kind == "global":
        return CandidateWindow(s, m, s, m)
    r = scope.radius
    return CandidateWindow(max(s, i - r), min(m, i + r), max(s, j - r), min(m, j + r))


def find_anchor(
    a: SymbolMatrix, i: int, j: int, s: int, b: SymbolMatrix,
    scope: Scope, matcher: MatcherSpec,
) -> Optional[Tuple[int, int]]:
    """First anchor (k, h), in row-major scan order, whose window matches.

    Args:
        a: query matrix holding the side-s window anchored at (i, j).
        i, j: 1-based bottom-right anchor in ``a``; requires s <= min(i, j).
        s: window side.
        b: square matrix searched for a matching window.
        scope: where anchors are considered.
        matcher: window predicate.

    Returns None when no candidate matches (including an empty candidate
    window).  Ties are impossible: the scan order is deterministic.
    """
    if not b.is_square:
        raise ValueError(f"search matrix must be square, got {b.rows}x{b.cols}")
    if matcher.kind == "distance" and a.alphabet_size != b.alphabet_size:
        raise ValueError(
            f"alphabet mismatch: {a.alphabet_size} vs {b.alphabet_size}"
        )
    _check_window("a", a, i, j, s)
    win = candidate_window(scope, s, i, j, b.rows)
    if win.is_empty:
        return None
    code, step, metric, tau = matcher_codes(matcher)
    k, h = _kernels.anchor_scan(
        a.symbols, b.symbols, i, j, s,
        win.k_lo, win.k_hi, win.h_lo, win.h_hi,
        code, step, metric, tau, a.alphabet_size,
    )
    if k == 0:
        return None
    return int(k), int(h)


def largest_match(
    a: SymbolMatrix, i: int, j: int, b: SymbolMatrix,
    alpha: int, scope: Scope, matcher: MatcherSpec,
) -> MatchResult:
    """Largest window anchored at (i, j) in a that matches somewhere in b.

    Sides descend from min(i, j, m) to the smallest side whose area reaches
    alpha; the first side with a match wins, with the anchor chosen by
    find_anchor's scan order.  Returns MatchResult(0) when nothing matches.
    """
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    if not b.is_square:
        raise ValueError(f"search matrix must be square, got {b.rows}x{b.cols}")
    if matcher.kind == "distance" and a.alphabet_size != b.alphabet_size:
        raise ValueError(
            f"alphabet mismatch: {a.alphabet_size} vs {b.alphabet_size}"
        )
    if not (1 <= i <= a.rows and 1 <= j <= a.cols):
        raise ValueError(f"anchor ({i}, {j}) outside the {a.rows}x{a.cols} matrix a")
    min_side = math.isqrt(alpha - 1) + 1
    radius = a.rows + b.rows if scope.kind == "global" else scope.radius
    code, step, metric, tau = matcher_codes(matcher)
    k, h, s = _kernels.largest_scan(
        a.symbols, b.symbols, i, j, min_side, radius, code, step, metric, tau,
        a.alphabet_size,
    )
    if s == 0:
        return MatchResult(0)
    return MatchResult(int(s) * int(s), (int(k), int(h), int(s)))
