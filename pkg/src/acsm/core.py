"""Domain types shared by the matching and measure layers.

Matrices hold integer symbol codes drawn from a finite alphabet.  All
coordinates in the public API are 1-based, and a window of side ``s``
anchored at ``(i, j)`` occupies rows ``i - s + 1 .. i`` and columns
``j - s + 1 .. j`` (the anchor is the bottom-right corner).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import ClassVar, Optional, Sequence, Tuple

import numpy as np

__all__ = [
    "DistanceMetric",
    "MatchResult",
    "MatcherSpec",
    "MeasureParams",
    "Scope",
    "similarity_report_fields",
    "SimilarityReport",
    "SymbolMatrix",
    "index_bounds",
    "validate_matrix",
]

SYMBOL_DTYPE = np.int32


class DistanceMetric(Enum):
    """Window distances used by threshold matching.

    ``HAMMING_FRACTION`` is the fraction of mismatching cells,
    ``MEAN_ABS_DIFF`` the mean absolute symbol difference, and
    ``NORMALIZED_MEAN_ABS_DIFF`` the latter divided by the largest
    possible symbol difference (defined as 0 for one-letter alphabets).
    """

    HAMMING_FRACTION = "hamming_fraction"
    MEAN_ABS_DIFF = "mean_abs_diff"
    NORMALIZED_MEAN_ABS_DIFF = "normalized_mean_abs_diff"


@dataclass(frozen=True, eq=False)
class SymbolMatrix:
    """A rows x cols grid of integer symbols in ``[0, alphabet_size)``.

    Loaders may produce rectangular grids; the similarity measures insist
    on square inputs at call time.  The backing array is read-only.
    """

    rows: int
    cols: int
    alphabet_size: int
    symbols: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"matrix dimensions must be >= 1, got {self.rows}x{self.cols}")
        if self.alphabet_size < 1:
            raise ValueError(f"alphabet size must be >= 1, got {self.alphabet_size}")
        arr = np.ascontiguousarray(self.symbols, dtype=SYMBOL_DTYPE)
        if arr.shape != (self.rows, self.cols):
            raise ValueError(
                f"expected {self.rows * self.cols} symbols, got {arr.size}"
            )
        lo = int(arr.min())
        hi = int(arr.max())
        if lo < 0:
            raise ValueError(f"symbol {lo} is negative")
        if hi >= self.alphabet_size:
            raise ValueError(f"symbol {hi} >= alphabet size {self.alphabet_size}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "symbols", arr)

    @classmethod
    def from_grid(
        cls, grid: Sequence[Sequence[int]], alphabet_size: Optional[int] = None
    ) -> "SymbolMatrix":
        """Build a matrix from nested rows, inferring the alphabet as max + 1."""
        arr = np.array(grid, dtype=SYMBOL_DTYPE)
        if arr.ndim != 2:
            raise ValueError("grid must be two-dimensional")
        if alphabet_size is None:
            alphabet_size = int(arr.max()) + 1 if arr.size else 1
        return cls(arr.shape[0], arr.shape[1], alphabet_size, arr)

    def with_alphabet(self, alphabet_size: int) -> "SymbolMatrix":
        """Return the same grid read against a (usually larger) alphabet."""
        return SymbolMatrix(self.rows, self.cols, alphabet_size, self.symbols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def symbol(self, i: int, j: int) -> int:
        """1-based cell accessor."""
        if not (1 <= i <= self.rows and 1 <= j <= self.cols):
            raise ValueError(f"cell ({i}, {j}) outside {self.rows}x{self.cols} matrix")
        return int(self.symbols[i - 1, j - 1])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymbolMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.alphabet_size == other.alphabet_size
            and bool(np.array_equal(self.symbols, other.symbols))
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.alphabet_size, self.symbols.tobytes()))


def validate_matrix(
    rows: int, cols: int, alphabet_size: int, symbols: Sequence[int]
) -> SymbolMatrix:
    """Check a flat row-major symbol sequence and wrap it as a SymbolMatrix.

    Raises ValueError when the dimensions are non-positive, the symbol count
    does not equal rows * cols, or any symbol falls outside [0, alphabet_size).
    """
    if rows < 1 or cols < 1:
        raise ValueError(f"matrix dimensions must be >= 1, got {rows}x{cols}")
    flat = np.asarray(list(symbols), dtype=np.int64)
    if flat.ndim != 1 or flat.size != rows * cols:
        raise ValueError(f"expected {rows * cols} symbols, got {flat.size}")
    return SymbolMatrix(rows, cols, alphabet_size, flat.reshape(rows, cols))


def index_bounds(i: int, j: int, n: int, m: int) -> int:
    """Largest window side usable at anchor (i, j) of an n x n matrix searched in an m x m one.

    The window must fit inside the first matrix above and left of the anchor,
    and no window larger than m x m can occur in the second matrix, so the
    cap is min(i, j, m).
    """
    if n < 1 or m < 1:
        raise ValueError(f"matrix sides must be >= 1, got n={n} m={m}")
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"anchor ({i}, {j}) outside 1..{n}")
    return min(i, j, m)


@dataclass(frozen=True)
class MatchResult:
    """Outcome of the largest-match search at one anchor.

    ``w`` is the matched area (0 when nothing of at least the minimum area
    matched) and ``anchor`` the 1-based bottom-right corner (k, h) plus side s
    of the first matching window found, or None when ``w`` is 0.
    """

    w: int
    anchor: Optional[Tuple[int, int, int]] = None

    def __post_init__(self) -> None:
        if self.w < 0:
            raise ValueError(f"matched area must be >= 0, got {self.w}")
        if (self.w == 0) != (self.anchor is None):
            raise ValueError("anchor must be present exactly when w > 0")
        if self.anchor is not None:
            k, h, s = self.anchor
            if s < 1 or k < s or h < s:
                raise ValueError(f"anchor {self.anchor} cannot hold a side-{s} window")
            if self.w != s * s:
                raise ValueError(f"w={self.w} does not equal s*s for s={s}")


@dataclass(frozen=True)
class Scope:
    """Where candidate anchors are searched in the second matrix.

    ``Scope.GLOBAL`` scans every feasible anchor.  ``Scope.neighborhood(eps)``
    restricts anchors to a square window of odd side ``eps`` centred on the
    query anchor, clipped to the matrix.
    """

    kind: str
    epsilon: Optional[int] = None

    GLOBAL: ClassVar["Scope"]

    def __post_init__(self) -> None:
        if self.kind not in ("global", "neighborhood"):
            raise ValueError(f"unknown scope kind {self.kind!r}")
        if self.kind == "global":
            if self.epsilon is not None:
                raise ValueError("global scope takes no epsilon")
        else:
            if self.epsilon is None or self.epsilon < 1 or self.epsilon % 2 == 0:
                raise ValueError(f"epsilon must be an odd integer >= 1, got {self.epsilon}")

    @classmethod
    def neighborhood(cls, epsilon: int) -> "Scope":
        return cls("neighborhood", epsilon)

    @property
    def radius(self) -> int:
        """Half-width of the neighborhood window."""
        if self.kind != "neighborhood":
            raise ValueError("global scope has no radius")
        return self.epsilon // 2


Scope.GLOBAL = Scope("global")


@dataclass(frozen=True)
class MatcherSpec:
    """How two equal-sided windows are compared.

    ``exact()`` requires cell-for-cell equality, ``interval(step)`` compares
    only cells whose window offsets are multiples of ``step`` on both axes,
    and ``distance(metric, tau)`` accepts windows whose distance is strictly
    below ``tau``.
    """

    kind: str
    step: Optional[int] = None
    metric: Optional[DistanceMetric] = None
    tau: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind not in ("exact", "interval", "distance"):
            raise ValueError(f"unknown matcher kind {self.kind!r}")
        if self.kind == "exact":
            if self.step is not None or self.metric is not None or self.tau is not None:
                raise ValueError("exact matcher takes no parameters")
        elif self.kind == "interval":
            if self.step is None or self.step < 1:
                raise ValueError(f"interval step must be >= 1, got {self.step}")
            if self.metric is not None or self.tau is not None:
                raise ValueError("interval matcher takes only a step")
        else:
            if self.metric is None:
                raise ValueError("distance matcher needs a metric")
            if self.tau is None or not self.tau > 0:
                raise ValueError(f"tau must be > 0, got {self.tau}")
            if self.step is not None:
                raise ValueError("distance matcher takes no step")

    @classmethod
    def exact(cls) -> "MatcherSpec":
        return cls("exact")

    @classmethod
    def interval(cls, step: int) -> "MatcherSpec":
        return cls("interval", step=step)

    @classmethod
    def distance(cls, metric: DistanceMetric, tau: float) -> "MatcherSpec":
        return cls("distance", metric=metric, tau=tau)


@dataclass(frozen=True)
class MeasureParams:
    """Complete configuration of one measure evaluation."""

    alpha: int
    scope: Scope
    matcher: MatcherSpec
    p0: float = 0.0

    def __post_init__(self) -> None:
        if self.alpha < 1:
            raise ValueError(f"alpha must be >= 1, got {self.alpha}")
        if not (0.0 <= self.p0 <= 1.0):
            raise ValueError(f"p0 must lie in [0, 1], got {self.p0}")

    @property
    def min_side(self) -> int:
        """Smallest window side whose area reaches alpha."""
        return math.isqrt(self.alpha - 1) + 1


def similarity_report_fields() -> Tuple[str, ...]:
    """Scalar report fields in presentation order."""
    return (
        "s_numerator",
        "s_denominator",
        "s_normalized",
        "dissimilarity",
        "p1",
        "p2",
        "gated",
        "elapsed",
    )


@dataclass(frozen=True, eq=False)
class SimilarityReport:
    """Everything one directed measure evaluation produced.

    ``s_numerator / s_denominator`` is the exact rational similarity of the
    query matrix against the other one (the denominator is always n * n,
    kept unreduced).  ``dissimilarity`` combines both directions and is 1
    when the frequency gate tripped in either.  ``w_map`` exposes the
    per-anchor results as MatchResult objects; the raw arrays are kept so
    large reports stay cheap.  ``elapsed`` (seconds) is ignored by equality.
    """

    s_numerator: int
    s_denominator: int
    s_normalized: float
    dissimilarity: float
    p1: float
    p2: float
    gated: bool
    elapsed: float
    w_areas: np.ndarray = field(repr=False)
    anchor_k: np.ndarray = field(repr=False)
    anchor_h: np.ndarray = field(repr=False)
    anchor_s: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        for name in ("w_areas", "anchor_k", "anchor_h", "anchor_s"):
            arr = getattr(self, name)
            if arr.shape != self.w_areas.shape:
                raise ValueError(f"{name} shape {arr.shape} does not match w_areas")
            arr.setflags(write=False)

    @cached_property
    def w_map(self) -> Tuple[Tuple[MatchResult, ...], ...]:
        """Grid of MatchResult, indexed [i - 1][j - 1]."""
        n = self.w_areas.shape[0]
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                w = int(self.w_areas[i, j])
                if w == 0:
                    row.append(MatchResult(0))
                else:
                    anchor = (
                        int(self.anchor_k[i, j]),
                        int(self.anchor_h[i, j]),
                        int(self.anchor_s[i, j]),
                    )
                    row.append(MatchResult(w, anchor))
            rows.append(tuple(row))
        return tuple(rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimilarityReport):
            return NotImplemented
        return (
            self.s_numerator == other.s_numerator
            and self.s_denominator == other.s_denominator
            and self.s_normalized == other.s_normalized
            and self.dissimilarity == other.dissimilarity
            and self.p1 == other.p1
            and self.p2 == other.p2
            and self.gated == other.gated
            and bool(np.array_equal(self.w_areas, other.w_areas))
            and bool(np.array_equal(self.anchor_k, other.anchor_k))
            and bool(np.array_equal(self.anchor_h, other.anchor_h))
            and bool(np.array_equal(self.anchor_s, other.anchor_s))
        )
