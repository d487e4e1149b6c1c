"""Inner loops with a numba path and a pure-numpy path.

Set ``DMIAT_DISABLE_NUMBA=1`` (or run without numba installed) to use the
numpy versions.  Both paths accumulate in the same order so they agree
bit-for-bit on the values the callers compare.
"""
import math
import os

import numpy as np

# slack applied to every criterion comparison, shared with the test oracles
EPS = 1e-12

KIND_ENTROPY = 0
KIND_LIFT = 1

_disabled = os.environ.get("DMIAT_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    if _disabled:
        raise ImportError
    from numba import njit
    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False


# ---------------------------------------------------------------- numpy path

def scan_prefix_numpy(labels, values, target, n_classes, kind, threshold, base_rate, min_support, min_hits):
    """Largest qualifying prefix of a sorted column.

    Candidate subsets hold at least ``min_support`` rows, of which at least
    ``min_hits`` carry the target class.  Returns ``(b, target_count, stat)``
    where rows ``0..b`` form the subset, or ``(-1, 0, nan)``.  ``stat`` is the
    subset entropy or lift.
    """
    n = labels.shape[0]
    if n < 2:
        return -1, 0, math.nan
    sizes = np.arange(1, n, dtype=np.int64)
    ok = (values[:-1] < values[1:]) & (sizes >= min_support)
    if not ok.any():
        return -1, 0, math.nan
    hit = np.cumsum(labels == target)[:-1]
    ok &= hit >= min_hits
    if kind == KIND_LIFT:
        stat = (hit / sizes) / base_rate
        ok &= stat >= threshold - EPS
    else:
        onehot = np.zeros((n - 1, n_classes), dtype=np.int64)
        onehot[np.arange(n - 1), labels[:-1]] = 1
        counts = np.cumsum(onehot, axis=0)
        stat = np.zeros(n - 1)
        for c in range(n_classes):
            p = counts[:, c] / sizes
            nz = counts[:, c] > 0
            stat[nz] += -(p[nz] * np.log2(p[nz]))
        ok &= (stat <= threshold + EPS) & (hit >= counts.max(axis=1))
    idx = np.flatnonzero(ok)
    if idx.size == 0:
        return -1, 0, math.nan
    b = int(idx[-1])
    return b, int(hit[b]), float(stat[b])


def best_split_numpy(labels, values, lo, hi, n_classes):
    """Boundary in ``[lo, hi)`` minimising weighted class entropy.

    Only boundary points are tried: cuts between distinct values, skipping
    those whose two neighbouring value runs are pure in the same class.
    Returns ``(b, weighted_entropy)`` with rows ``lo..b`` on the left, or
    ``(-1, inf)``.
    """
    seg_l = labels[lo:hi]
    seg_v = values[lo:hi]
    n = seg_l.shape[0]
    if n < 2:
        return -1, math.inf
    cand = seg_v[:-1] < seg_v[1:]
    if not cand.any():
        return -1, math.inf
    # run-level purity: run id per row, pure runs carry their class
    run = np.concatenate(([0], np.cumsum(cand)))
    n_runs = run[-1] + 1
    first = seg_l[np.concatenate(([0], np.flatnonzero(cand) + 1))]
    pure = np.ones(n_runs, dtype=bool)
    np.logical_and.at(pure, run, seg_l == first[run])
    runclass = np.where(pure, first, -1)
    left_run = run[:-1]
    same = pure[left_run] & pure[np.minimum(left_run + 1, n_runs - 1)] & (
        runclass[left_run] == runclass[np.minimum(left_run + 1, n_runs - 1)])
    cand &= ~same
    if not cand.any():
        return -1, math.inf
    onehot = np.zeros((n, n_classes), dtype=np.int64)
    onehot[np.arange(n), seg_l] = 1
    left = np.cumsum(onehot, axis=0)[:-1]
    total = left[-1] + onehot[-1]
    right = total - left
    nl = np.arange(1, n, dtype=np.float64)
    nr = n - nl
    el = np.zeros(n - 1)
    er = np.zeros(n - 1)
    for c in range(n_classes):
        pl = left[:, c] / nl
        pr = right[:, c] / nr
        m = left[:, c] > 0
        el[m] += -(pl[m] * np.log2(pl[m]))
        m = right[:, c] > 0
        er[m] += -(pr[m] * np.log2(pr[m]))
    w = (nl * el + nr * er) / n
    best, best_b = math.inf, -1
    for i in np.flatnonzero(cand):
        if w[i] < best - EPS:
            best, best_b = w[i], i
    return lo + int(best_b), float(best)


def knn_predict_numpy(train_X, train_y, test_X, k, n_classes):
    out = np.empty(test_X.shape[0], dtype=np.int64)
    kk = min(k, train_X.shape[0])
    for i in range(test_X.shape[0]):
        d = np.zeros(train_X.shape[0])
        for j in range(train_X.shape[1]):
            diff = train_X[:, j] - test_X[i, j]
            d += diff * diff
        nearest = np.argsort(d, kind="stable")[:kk]
        votes = np.bincount(train_y[nearest], minlength=n_classes)
        out[i] = int(np.argmax(votes))
    return out


# ---------------------------------------------------------------- numba path

if HAS_NUMBA:

    @njit(cache=True)
    def scan_prefix_numba(labels, values, target, n_classes, kind, threshold, base_rate, min_support, min_hits):
        n = labels.shape[0]
        counts = np.zeros(n_classes, dtype=np.int64)
        best_b, best_hit, best_stat = -1, 0, math.nan
        for b in range(n - 1):
            counts[labels[b]] += 1
            size = b + 1
            if size < min_support or not values[b] < values[b + 1]:
                continue
            hit = counts[target]
            if hit < min_hits:
                continue
            if kind == KIND_LIFT:
                stat = (hit / size) / base_rate
                if stat >= threshold - EPS:
                    best_b, best_hit, best_stat = b, hit, stat
            else:
                stat = 0.0
                top = 0
                for c in range(n_classes):
                    if counts[c] > 0:
                        p = counts[c] / size
                        stat += -(p * math.log2(p))
                        if counts[c] > top:
                            top = counts[c]
                if stat <= threshold + EPS and hit >= top:
                    best_b, best_hit, best_stat = b, hit, stat
        return best_b, best_hit, best_stat

    @njit(cache=True)
    def best_split_numba(labels, values, lo, hi, n_classes):
        n = hi - lo
        if n < 2:
            return -1, math.inf
        total = np.zeros(n_classes, dtype=np.int64)
        for i in range(lo, hi):
            total[labels[i]] += 1
        left = np.zeros(n_classes, dtype=np.int64)
        best, best_b = math.inf, -1
        # purity of the run that ends at i, and of the run that starts at i + 1
        run_start = lo
        for b in range(lo, hi - 1):
            left[labels[b]] += 1
            if not values[b] < values[b + 1]:
                continue
            lpure = True
            for r in range(run_start, b + 1):
                if labels[r] != labels[run_start]:
                    lpure = False
                    break
            nxt = b + 1
            end = nxt
            rpure = True
            while end < hi and values[end] == values[nxt]:
                if labels[end] != labels[nxt]:
                    rpure = False
                end += 1
            skip = lpure and rpure and labels[run_start] == labels[nxt]
            run_start = b + 1
            if skip:
                continue
            nl = float(b + 1 - lo)
            nr = float(n) - nl
            el = 0.0
            er = 0.0
            for c in range(n_classes):
                if left[c] > 0:
                    p = left[c] / nl
                    el += -(p * math.log2(p))
                rc = total[c] - left[c]
                if rc > 0:
                    p = rc / nr
                    er += -(p * math.log2(p))
            w = (nl * el + nr * er) / n
            if w < best - EPS:
                best, best_b = w, b
        return best_b, best

    @njit(cache=True)
    def knn_predict_numba(train_X, train_y, test_X, k, n_classes):
        n_train, n_feat = train_X.shape
        out = np.empty(test_X.shape[0], dtype=np.int64)
        kk = min(k, n_train)
        d = np.empty(n_train)
        for i in range(test_X.shape[0]):
            for t in range(n_train):
                d[t] = 0.0
            for j in range(n_feat):
                x = test_X[i, j]
                for t in range(n_train):
                    diff = train_X[t, j] - x
                    d[t] += diff * diff
            votes = np.zeros(n_classes, dtype=np.int64)
            taken = np.zeros(n_train, dtype=np.bool_)
            for _ in range(kk):
                arg = -1
                for t in range(n_train):
                    if not taken[t] and (arg < 0 or d[t] < d[arg]):
                        arg = t
                taken[arg] = True
                votes[train_y[arg]] += 1
            best = 0
            for c in range(1, n_classes):
                if votes[c] > votes[best]:
                    best = c
            out[i] = best
        return out

    scan_prefix = scan_prefix_numba
    best_split = best_split_numba
    knn_predict = knn_predict_numba
else:
    scan_prefix_numba = best_split_numba = knn_predict_numba = None
    scan_prefix = scan_prefix_numpy
    best_split = best_split_numpy
    knn_predict = knn_predict_numpy

BACKEND = "numba" if HAS_NUMBA else "numpy"
