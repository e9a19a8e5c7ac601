"""Independent reference implementations used only by the tests.

Everything here goes through explicit d x d matrices, double loops or
closed-form moment identities, never through the library's fast paths.
"""

import math

import numpy as np


def brute_sigma_hat_k(Y, k):
    """Sigma_hat_{n,k} = n^{-1} sum_{i<=k} Y_i Y_i' as a d x d matrix."""
    n, d = Y.shape
    s = np.zeros((d, d))
    for i in range(k):
        s += np.outer(Y[i], Y[i])
    return s / n


def brute_bilinear(Y, v, w):
    return float(v @ brute_sigma_hat_k(Y, Y.shape[0]) @ w)


def brute_raw_path(Y, v, w, sigma0):
    """D_nk = v'(n Sigma_hat_{n,k} - k Sigma_0)w, k = 1..n."""
    n = Y.shape[0]
    return np.array([v @ (n * brute_sigma_hat_k(Y, k) - k * sigma0) @ w for k in range(1, n + 1)])


def brute_bridge(Y, v, w):
    n = Y.shape[0]
    raw = brute_raw_path(Y, v, w, np.zeros((Y.shape[1], Y.shape[1]))) / math.sqrt(n)
    return np.array([raw[k - 1] - k / n * raw[-1] for k in range(1, n + 1)])


def brute_cross_lrv(Y, pair_r, pair_s, m, kind="bartlett"):
    """Gamma(0) + 2 sum_h w_h Gamma(h) by explicit loops over v'Y_iY_i'w."""
    n = Y.shape[0]
    xr = [pair_r[0] @ np.outer(Y[i], Y[i]) @ pair_r[1] for i in range(n)]
    xs = [pair_s[0] @ np.outer(Y[i], Y[i]) @ pair_s[1] for i in range(n)]
    mr, ms = sum(xr) / n, sum(xs) / n

    def gamma(h):
        return sum((xr[k] - mr) * (xs[k + h] - ms) for k in range(n - h)) / n

    total = gamma(0)
    for h in range(1, m + 1):
        wt = 1.0 if kind == "truncated" else 1.0 - h / (m + 1)
        total += 2 * wt * gamma(h)
    return total


def _cross_acf(a, b, h, sigma2):
    """sigma^2 sum_j a_j b_{j+h} for any integer h."""
    if h < 0:
        return _cross_acf(b, a, -h, sigma2)
    if h >= len(b):
        return 0.0
    return sigma2 * float(np.dot(a[: len(b) - h], b[h:]))


def _fourth_cum(a, b, c, d, h):
    """sum_j a_j b_j c_{j+h} d_{j+h} for any integer h."""
    if h < 0:
        return _fourth_cum(c, d, a, b, -h)
    J1 = len(a)
    if h >= J1:
        return 0.0
    return float(np.sum(a[: J1 - h] * b[: J1 - h] * c[h:] * d[h:]))


def cumulant_beta(cv1, cw1, cv2, cw2, sigma2, gamma4):
    """sum over all lags h of Cov(y_0(v1) y_0(w1), y_h(v2) y_h(w2)).

    Uses the product-moment formula for linear processes:
    Cov = g_{v1 v2}(h) g_{w1 w2}(h) + g_{v1 w2}(h) g_{w1 v2}(h) + kappa4 sum_j ...
    with kappa4 = gamma4 - 3 sigma^4.
    """
    J = len(cv1) - 1
    k4 = gamma4 - 3 * sigma2**2
    total = 0.0
    for h in range(-J, J + 1):
        total += _cross_acf(cv1, cv2, h, sigma2) * _cross_acf(cw1, cw2, h, sigma2)
        total += _cross_acf(cv1, cw2, h, sigma2) * _cross_acf(cw1, cv2, h, sigma2)
        total += k4 * _fourth_cum(cv1, cw1, cv2, cw2, h)
    return total


def walk_suprema(n_steps, n_walks, seed, chunk=2000):
    """max_k |S_k|/sqrt(n) and max_k |S_k - (k/n) S_n|/sqrt(n) for Gaussian random walks."""
    rng = np.random.Generator(np.random.Philox(seed))
    bm, br = [], []
    k = np.arange(1, n_steps + 1) / n_steps
    for start in range(0, n_walks, chunk):
        r = min(chunk, n_walks - start)
        s = np.cumsum(rng.standard_normal((r, n_steps), dtype=np.float32), axis=1, dtype=np.float64)
        bm.append(np.abs(s).max(axis=1))
        br.append(np.abs(s - k * s[:, -1:]).max(axis=1))
    scale = math.sqrt(n_steps)
    return np.concatenate(bm) / scale, np.concatenate(br) / scale
