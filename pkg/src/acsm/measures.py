"""The ACSM measure family: exact, interval-sampled, and neighborhood-restricted.

Each measure sums, over every anchor of the query matrix, the area of the
largest window that matches somewhere in the other matrix, divides by the
anchor count, and folds the two directions into one dissimilarity in [0, 1].
The similarity itself is kept as an exact rational (integer numerator over
n * n).  ``oracle_acsm`` recomputes the whole pipeline naively and is the
reference the fast path is tested against; it deliberately shares no scan
code with it.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

import numpy as np

from . import _kernels
from .core import (
    DistanceMetric,
    MatcherSpec,
    MeasureParams,
    Scope,
    SimilarityReport,
    SymbolMatrix,
)
from .matching import matcher_codes

__all__ = [
    "MeasureKind",
    "acsm_similarity",
    "approx_acsm",
    "dissimilarity",
    "eacsm",
    "oracle_acsm",
    "parse_metric",
    "s_max",
]


def s_max(n: int, m: int, alpha: int) -> Fraction:
    """Largest similarity value an n x n query can reach against an m x m matrix.

    Every anchor of a self-match contributes min(i, j, m) squared, except
    anchors whose largest window stays below area alpha, which contribute
    nothing.
    """
    if n < 1 or m < 1:
        raise ValueError(f"matrix sides must be >= 1, got n={n} m={m}")
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    total = 0
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            c = min(i, j, m)
            if c * c >= alpha:
                total += c * c
    return Fraction(total, n * n)


def _dissimilarity_exact(
    s_ab: Fraction, s_ba: Fraction, n: int, m: int, alpha: int
) -> Fraction:
    cap_ab = s_max(n, m, alpha)
    cap_ba = s_max(m, n, alpha)
    if cap_ab == 0 or cap_ba == 0:
        raise ValueError(
            f"alpha {alpha} admits no submatrices between {n}x{n} and {m}x{m} matrices"
        )
    d = 1 - (s_ab / cap_ab + s_ba / cap_ba) / 2
    return min(max(d, Fraction(0)), Fraction(1))


def dissimilarity(s_ab: Fraction, s_ba: Fraction, n: int, m: int, alpha: int) -> float:
    """Symmetric dissimilarity in [0, 1] from the two directed similarities.

    Both directions are normalized by their own attainable maximum and
    averaged.  Raises ValueError when alpha rules out every window.
    """
    return float(_dissimilarity_exact(Fraction(s_ab), Fraction(s_ba), n, m, alpha))


def _require_comparable(a: SymbolMatrix, b: SymbolMatrix) -> None:
    if not a.is_square:
        raise ValueError(f"query matrix must be square, got {a.rows}x{a.cols}")
    if not b.is_square:
        raise ValueError(f"second matrix must be square, got {b.rows}x{b.cols}")
    if a.alphabet_size != b.alphabet_size:
        raise ValueError(
            f"alphabet mismatch: {a.alphabet_size} vs {b.alphabet_size}"
        )


def _directed_scan(
    a: SymbolMatrix, b: SymbolMatrix, params: MeasureParams
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    radius = a.rows + b.rows if params.scope.kind == "global" else params.scope.radius
    code, step, metric, tau = matcher_codes(params.matcher)
    return _kernels.full_scan(
        a.symbols, b.symbols, params.min_side, radius, code, step, metric, tau,
        a.alphabet_size,
    )


def _directed_stats(
    w: np.ndarray, ak: np.ndarray, ah: np.ndarray, asd: np.ndarray
) -> Tuple[int, float, float]:
    n = w.shape[0]
    numerator = int(w.sum())
    mask = w > 0
    matched = int(np.count_nonzero(mask))
    # Anchors fit in 21 bits each for any matrix this package can hold, so a
    # packed int64 key is enough to count distinct (k, h, s) triples.
    packed = (
        (ak[mask].astype(np.int64) << 42)
        | (ah[mask].astype(np.int64) << 21)
        | asd[mask].astype(np.int64)
    )
    distinct = int(np.unique(packed).size)
    return numerator, matched / (n * n), distinct / (n * n)


def _run_measure(a: SymbolMatrix, b: SymbolMatrix, params: MeasureParams) -> SimilarityReport:
    _require_comparable(a, b)
    n = a.rows
    m = b.rows
    started = time.perf_counter()
    w_f, ak_f, ah_f, as_f = _directed_scan(a, b, params)
    w_b, ak_b, ah_b, as_b = _directed_scan(b, a, params)
    num_f, p1_f, p2_f = _directed_stats(w_f, ak_f, ah_f, as_f)
    num_b, p1_b, p2_b = _directed_stats(w_b, ak_b, ah_b, as_b)
    s_ab = Fraction(num_f, n * n)
    s_ba = Fraction(num_b, m * m)
    d = _dissimilarity_exact(s_ab, s_ba, n, m, params.alpha)
    gated_f = params.p0 > 0 and min(p1_f, p2_f) < params.p0
    gated_b = params.p0 > 0 and min(p1_b, p2_b) < params.p0
    if gated_f or gated_b:
        # The gate flags an unreliable match distribution; either direction
        # tripping it pins the pair to maximal dissimilarity, which also
        # keeps the value symmetric.
        d = Fraction(1)
    elapsed = time.perf_counter() - started
    return SimilarityReport(
        s_numerator=num_f,
        s_denominator=n * n,
        s_normalized=float(s_ab / s_max(n, m, params.alpha)),
        dissimilarity=float(d),
        p1=p1_f,
        p2=p2_f,
        gated=gated_f,
        elapsed=elapsed,
        w_areas=w_f,
        anchor_k=ak_f,
        anchor_h=ah_f,
        anchor_s=as_f,
    )


def acsm_similarity(a: SymbolMatrix, b: SymbolMatrix, alpha: int = 1) -> SimilarityReport:
    """Exact measure: global anchor search with cell-for-cell window equality."""
    params = MeasureParams(alpha, Scope.GLOBAL, MatcherSpec.exact())
    return _run_measure(a, b, params)


def approx_acsm(
    a: SymbolMatrix, b: SymbolMatrix, alpha: int = 1, step: int = 1
) -> SimilarityReport:
    """Interval-sampled measure: global search comparing every step-th cell.

    A step of 1 reproduces acsm_similarity exactly.
    """
    params = MeasureParams(alpha, Scope.GLOBAL, MatcherSpec.interval(step))
    return _run_measure(a, b, params)


def eacsm(
    a: SymbolMatrix,
    b: SymbolMatrix,
    alpha: int,
    epsilon: int,
    metric: DistanceMetric,
    tau: float,
    p0: float = 0.0,
) -> SimilarityReport:
    """Neighborhood measure: anchors near (i, j), windows within distance tau.

    When p0 > 0 and either direction matches too rarely (min(p1, p2) < p0)
    the pair is declared maximally dissimilar, overriding the formula.
    """
    params = MeasureParams(
        alpha, Scope.neighborhood(epsilon), MatcherSpec.distance(metric, tau), p0
    )
    return _run_measure(a, b, params)


# ---------------------------------------------------------------------------
# Reference implementation.  Everything below recomputes the measure from
# the definitions with plain slicing and no shared scan code; it exists to
# test the fast path and is far too slow for real inputs.
# ---------------------------------------------------------------------------


def _oracle_window_ok(
    aw: np.ndarray, bw: np.ndarray, matcher: MatcherSpec, alphabet_size: int
) -> bool:
    if matcher.kind == "exact":
        return bool(np.array_equal(aw, bw))
    if matcher.kind == "interval":
        step = matcher.step
        return bool(np.array_equal(aw[::step, ::step], bw[::step, ::step]))
    s = aw.shape[0]
    if matcher.metric is DistanceMetric.HAMMING_FRACTION:
        d = int(np.count_nonzero(aw != bw)) / (s * s)
    else:
        total = int(np.abs(aw.astype(np.int64) - bw.astype(np.int64)).sum())
        if matcher.metric is DistanceMetric.MEAN_ABS_DIFF:
            d = total / (s * s)
        elif alphabet_size == 1:
            d = 0.0
        else:
            d = total / (s * s * (alphabet_size - 1))
    return d < matcher.tau


def _oracle_directed(
    a: SymbolMatrix, b: SymbolMatrix, alpha: int, scope: Scope, matcher: MatcherSpec
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    n = a.rows
    m = b.rows
    grid_a = a.symbols
    grid_b = b.symbols
    min_side = math.isqrt(alpha - 1) + 1
    w = np.zeros((n, n), dtype=np.int64)
    ak = np.zeros((n, n), dtype=np.int64)
    ah = np.zeros((n, n), dtype=np.int64)
    asd = np.zeros((n, n), dtype=np.int64)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for s in range(min(i, j, m), min_side - 1, -1):
                if scope.kind == "global":
                    k_range = range(s, m + 1)
                    h_range = range(s, m + 1)
                else:
                    r = scope.epsilon // 2
                    k_range = range(max(s, i - r), min(m, i + r) + 1)
                    h_range = range(max(s, j - r), min(m, j + r) + 1)
                aw = grid_a[i - s : i, j - s : j]
                hit = None
                for k in k_range:
                    for h in h_range:
                        bw = grid_b[k - s : k, h - s : h]
                        if _oracle_window_ok(aw, bw, matcher, a.alphabet_size):
                            hit = (k, h)
                            break
                    if hit:
                        break
                if hit:
                    w[i - 1, j - 1] = s * s
                    ak[i - 1, j - 1] = hit[0]
                    ah[i - 1, j - 1] = hit[1]
                    asd[i - 1, j - 1] = s
                    break
    return w, ak, ah, asd


def _oracle_stats(w, ak, ah, asd) -> Tuple[int, float, float]:
    n = w.shape[0]
    numerator = 0
    matched = 0
    triples = set()
    for i in range(n):
        for j in range(n):
            numerator += int(w[i, j])
            if w[i, j] > 0:
                matched += 1
                triples.add((int(ak[i, j]), int(ah[i, j]), int(asd[i, j])))
    return numerator, matched / (n * n), len(triples) / (n * n)


def _oracle_cap(n: int, m: int, alpha: int) -> Fraction:
    total = 0
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            side = min(i, j, m)
            if side * side >= alpha:
                total += side * side
    return Fraction(total, n * n)


def oracle_acsm(
    a: SymbolMatrix,
    b: SymbolMatrix,
    alpha: int,
    scope: Scope,
    matcher: MatcherSpec,
    p0: float = 0.0,
) -> SimilarityReport:
    """Naive reference measure covering any scope and matcher combination.

    The optional p0 mirrors the gate of eacsm so gated reports can be
    compared too; it defaults to 0 (gate off).
    """
    _require_comparable(a, b)
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    n = a.rows
    m = b.rows
    started = time.perf_counter()
    w_f, ak_f, ah_f, as_f = _oracle_directed(a, b, alpha, scope, matcher)
    w_b, ak_b, ah_b, as_b = _oracle_directed(b, a, alpha, scope, matcher)
    num_f, p1_f, p2_f = _oracle_stats(w_f, ak_f, ah_f, as_f)
    num_b, p1_b, p2_b = _oracle_stats(w_b, ak_b, ah_b, as_b)
    cap_ab = _oracle_cap(n, m, alpha)
    cap_ba = _oracle_cap(m, n, alpha)
    if cap_ab == 0 or cap_ba == 0:
        raise ValueError(
            f"alpha {alpha} admits no submatrices between {n}x{n} and {m}x{m} matrices"
        )
    s_ab = Fraction(num_f, n * n)
    s_ba = Fraction(num_b, m * m)
    d = 1 - (s_ab / cap_ab + s_ba / cap_ba) / 2
    d = min(max(d, Fraction(0)), Fraction(1))
    gated_f = p0 > 0 and min(p1_f, p2_f) < p0
    gated_b = p0 > 0 and min(p1_b, p2_b) < p0
    if gated_f or gated_b:
        d = Fraction(1)
    elapsed = time.perf_counter() - started
    return SimilarityReport(
        s_numerator=num_f,
        s_denominator=n * n,
        s_normalized=float(s_ab / cap_ab),
        dissimilarity=float(d),
        p1=p1_f,
        p2=p2_f,
        gated=gated_f,
        elapsed=elapsed,
        w_areas=w_f,
        anchor_k=ak_f,
        anchor_h=ah_f,
        anchor_s=as_f,
    )


_METRIC_ALIASES = {
    "hamming": DistanceMetric.HAMMING_FRACTION,
    "mad": DistanceMetric.MEAN_ABS_DIFF,
    "nmad": DistanceMetric.NORMALIZED_MEAN_ABS_DIFF,
}


def parse_metric(name: str) -> DistanceMetric:
    """Accept both the short command-line aliases and the full metric names."""
    if name in _METRIC_ALIASES:
        return _METRIC_ALIASES[name]
    try:
        return DistanceMetric(name)
    except ValueError:
        raise ValueError(
            f"unknown metric {name!r}; choose from "
            f"{sorted(_METRIC_ALIASES)} or the full names"
        ) from None


@dataclass(frozen=True)
class MeasureKind:
    """A fully parameterized measure choice, as selected on the command line."""

    name: str
    alpha: int = 1
    step: Optional[int] = None
    epsilon: Optional[int] = None
    metric: Optional[DistanceMetric] = None
    tau: Optional[float] = None
    p0: float = 0.0

    def __post_init__(self) -> None:
        if self.name not in ("acsm", "approx", "eacsm"):
            raise ValueError(f"unknown measure {self.name!r}")
        if self.name == "acsm" and not (
            self.step is None and self.epsilon is None
            and self.metric is None and self.tau is None and self.p0 == 0.0
        ):
            raise ValueError("acsm takes only alpha")
        if self.name == "approx":
            if self.step is None:
                raise ValueError("approx needs an interval step")
            if self.epsilon is not None or self.metric is not None or self.tau is not None:
                raise ValueError("approx takes only alpha and an interval step")
        if self.name == "eacsm":
            if self.epsilon is None or self.metric is None or self.tau is None:
                raise ValueError("eacsm needs epsilon, metric, and tau")
            if self.step is not None:
                raise ValueError("eacsm takes no interval step")
        # Delegate range checks to the shared parameter types.
        self.params()

    @classmethod
    def acsm(cls, alpha: int = 1) -> "MeasureKind":
        return cls("acsm", alpha)

    @classmethod
    def approx(cls, alpha: int, step: int) -> "MeasureKind":
        return cls("approx", alpha, step=step)

    @classmethod
    def eacsm(
        cls, alpha: int, epsilon: int, metric: DistanceMetric, tau: float, p0: float = 0.0
    ) -> "MeasureKind":
        return cls("eacsm", alpha, epsilon=epsilon, metric=metric, tau=tau, p0=p0)

    def params(self) -> MeasureParams:
        if self.name == "acsm":
            return MeasureParams(self.alpha, Scope.GLOBAL, MatcherSpec.exact())
        if self.name == "approx":
            return MeasureParams(self.alpha, Scope.GLOBAL, MatcherSpec.interval(self.step))
        return MeasureParams(
            self.alpha,
            Scope.neighborhood(self.epsilon),
            MatcherSpec.distance(self.metric, self.tau),
            self.p0,
        )

    def compute(self, a: SymbolMatrix, b: SymbolMatrix) -> SimilarityReport:
        return _run_measure(a, b, self.params())

    def describe(self) -> Dict[str, object]:
        """Parameter echo for reports, in a stable order."""
        if self.name == "acsm":
            return {"alpha": self.alpha}
        if self.name == "approx":
            return {"alpha": self.alpha, "interval": self.step}
        return {
            "alpha": self.alpha,
            "epsilon": self.epsilon,
            "metric": self.metric.value,
            "tau": self.tau,
            "p0": self.p0,
        }
