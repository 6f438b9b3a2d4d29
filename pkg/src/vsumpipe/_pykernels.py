"""Pure-numpy fallback for the dynamic-programming hot loops.

Must stay numerically interchangeable with the compiled versions in
_ckernels.pyx: same arithmetic, same first-minimum (earlier index)
tie-breaking, same strict-improvement rule in the knapsack table.
"""

from __future__ import annotations

import numpy as np

BACKEND = "pure"


def kts_scatter(gram: np.ndarray) -> np.ndarray:
    """Intra-segment scatter table from a Gram matrix.

    Returns S of shape (T+1, T+1) with S[a, b] = scatter of the half-open
    segment [a, b): sum of K(i,i) over the segment minus the segment-mean
    of the K block.
    """
    k = np.asarray(gram, dtype=np.float64)
    t = k.shape[0]
    diag_csum = np.concatenate([[0.0], np.cumsum(np.diag(k))])
    block = np.zeros((t + 1, t + 1))
    block[1:, 1:] = np.cumsum(np.cumsum(k, axis=0), axis=1)
    s = np.zeros((t + 1, t + 1))
    a = np.arange(t + 1).reshape(-1, 1)
    b = np.arange(t + 1).reshape(1, -1)
    length = b - a
    valid = length > 0
    diag_b = np.diag(block).reshape(1, -1)
    diag_a = np.diag(block).reshape(-1, 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        mean_term = (diag_b - block - block.T + diag_a) / length
    s[valid] = ((diag_csum.reshape(1, -1) - diag_csum.reshape(-1, 1)) - mean_term)[valid]
    return s


def kts_dp(scatter: np.ndarray, m_max: int, band: int) -> tuple:
    """Fill the segmentation DP table.

    cost[m, t] = minimal total scatter splitting [0, t) into m segments of
    length >= 1 (and <= band when band > 0); prev[m, t] is the argmin
    boundary, ties broken toward the smaller t'.
    """
    t_total = scatter.shape[0] - 1
    cost = np.full((m_max + 1, t_total + 1), np.inf)
    prev = np.zeros((m_max + 1, t_total + 1), dtype=np.int64)
    cost[0, 0] = 0.0
    for m in range(1, m_max + 1):
        for t in range(m, t_total + 1):
            lo = m - 1
            if band > 0:
                lo = max(lo, t - band)
            if lo > t - 1:
                continue
            cand = cost[m - 1, lo:t] + scatter[lo:t, t]
            j = int(np.argmin(cand))
            cost[m, t] = cand[j]
            prev[m, t] = lo + j
    return cost, prev


def knapsack_table(values: np.ndarray, weights: np.ndarray, capacity: int) -> np.ndarray:
    """0/1 knapsack DP table, items scanned in index order.

    dp[i, c] = best value using items < i within capacity c; an item is
    taken only when it strictly improves, so ties prefer "skip".
    """
    values = np.asarray(values, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.int64)
    n = values.shape[0]
    dp = np.zeros((n + 1, capacity + 1))
    for i in range(n):
        w = int(weights[i])
        v = float(values[i])
        dp[i + 1] = dp[i]
        if w <= capacity:
            cand = dp[i, : capacity + 1 - w] + v
            better = cand > dp[i, w:]
            dp[i + 1, w:] = np.where(better, cand, dp[i, w:])
    return dp
