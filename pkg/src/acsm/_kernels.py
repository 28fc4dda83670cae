"""Compiled window-scan loops behind the matching and measure layers.

Everything here works on 0-based C-contiguous int32 arrays but takes the
1-based anchor coordinates used by the public API.  The scan order is the
observable contract: sides descend, anchors go row-major, first hit wins.
"""

import numpy as np
from numba import njit

MATCHER_EXACT = 0
MATCHER_INTERVAL = 1
MATCHER_DISTANCE = 2

METRIC_HAMMING = 0
METRIC_MAD = 1
METRIC_NMAD = 2


@njit(cache=True)
def distance_threshold(s, metric, tau, alphabet_size):
    # Smallest integer cell total whose window distance is already >= tau.
    # Accumulated totals are compared against it so a scan can stop early
    # without ever disagreeing with the full-window division.
    if metric == METRIC_HAMMING:
        denom = s * s
        max_total = s * s
    elif metric == METRIC_MAD:
        denom = s * s
        max_total = s * s * (alphabet_size - 1)
    else:
        denom = s * s * (alphabet_size - 1)
        max_total = s * s * (alphabet_size - 1)
    if denom == 0 or tau * denom > max_total + 1:
        # One-letter alphabets have distance 0 by definition; a huge tau
        # accepts every window.  Either way the threshold is unreachable.
        return max_total + 1
    t = int(tau * denom)
    while t > 0 and (t - 1) / denom >= tau:
        t -= 1
    while t / denom < tau:
        t += 1
    return t


@njit(cache=True)
def window_match(a, b, i, j, k, h, s, matcher, step, metric, threshold):
    if matcher == MATCHER_EXACT:
        for r in range(s):
            ar = i - s + r
            br = k - s + r
            for c in range(s):
                if a[ar, j - s + c] != b[br, h - s + c]:
                    return False
        return True
    if matcher == MATCHER_INTERVAL:
        for r in range(0, s, step):
            ar = i - s + r
            br = k - s + r
            for c in range(0, s, step):
                if a[ar, j - s + c] != b[br, h - s + c]:
                    return False
        return True
    total = 0
    for r in range(s):
        ar = i - s + r
        br = k - s + r
        for c in range(s):
            av = a[ar, j - s + c]
            bv = b[br, h - s + c]
            if metric == METRIC_HAMMING:
                if av != bv:
                    total += 1
            elif av >= bv:
                total += av - bv
            else:
                total += bv - av
            if total >= threshold:
                return False
    return True


@njit(cache=True)
def anchor_scan(a, b, i, j, s, k_lo, k_hi, h_lo, h_hi, matcher, step, metric, tau, alphabet_size):
    threshold = 0
    if matcher == MATCHER_DISTANCE:
        threshold = distance_threshold(s, metric, tau, alphabet_size)
    for k in range(k_lo, k_hi + 1):
        for h in range(h_lo, h_hi + 1):
            if window_match(a, b, i, j, k, h, s, matcher, step, metric, threshold):
                return k, h
    return 0, 0


@njit(cache=True)
def largest_scan(a, b, i, j, min_side, radius, matcher, step, metric, tau, alphabet_size):
    m = b.shape[0]
    for s in range(min(i, j, m), min_side - 1, -1):
        k_lo = max(s, i - radius)
        k_hi = min(m, i + radius)
        h_lo = max(s, j - radius)
        h_hi = min(m, j + radius)
        if k_lo > k_hi or h_lo > h_hi:
            continue
        k, h = anchor_scan(
            a, b, i, j, s, k_lo, k_hi, h_lo, h_hi, matcher, step, metric, tau, alphabet_size
        )
        if k > 0:
            return k, h, s
    return 0, 0, 0


@njit(cache=True)
def full_scan(a, b, min_side, radius, matcher, step, metric, tau, alphabet_size):
    n = a.shape[0]
    w = np.zeros((n, n), dtype=np.int64)
    ak = np.zeros((n, n), dtype=np.int64)
    ah = np.zeros((n, n), dtype=np.int64)
    asd = np.zeros((n, n), dtype=np.int64)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            k, h, s = largest_scan(
                a, b, i, j, min_side, radius, matcher, step, metric, tau, alphabet_size
            )
            if s > 0:
                w[i - 1, j - 1] = s * s
                ak[i - 1, j - 1] = k
                ah[i - 1, j - 1] = h
                asd[i - 1, j - 1] = s
    return w, ak, ah, asd
