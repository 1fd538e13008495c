"""Exact nearest-neighbor scan kernels.

Per query row: the two smallest distances to the reference set and the
index of the nearest reference row. Ties keep the lowest reference index;
the second-smallest may equal the smallest when reference rows repeat.

Compiled with numba by default; set SYNTHAUDIT_NO_NUMBA=1 for the pure
numpy fallback (same outputs for hamming, within float tolerance for
euclidean where summation order differs).
"""
import os

import numpy as np

_USE_NUMBA = os.environ.get("SYNTHAUDIT_NO_NUMBA", "") != "1"


def _nn_two_hamming_py(Q, R):
    nq, d = Q.shape
    d1 = np.empty(nq)
    d2 = np.empty(nq)
    idx = np.empty(nq, dtype=np.int64)
    big = d + 1
    for start in range(0, nq, 256):
        block = Q[start:start + 256]
        D = (block[:, None, :] != R[None, :, :]).sum(axis=2)
        rows = np.arange(block.shape[0])
        i1 = D.argmin(axis=1)
        v1 = D[rows, i1]
        D2 = D.astype(np.int64)
        D2[rows, i1] = big
        v2 = D2.min(axis=1)
        d1[start:start + 256] = v1
        d2[start:start + 256] = v2
        idx[start:start + 256] = i1
    return d1, idx, d2


def _nn_two_euclid_py(Q, R):
    nq = Q.shape[0]
    d1 = np.empty(nq)
    d2 = np.empty(nq)
    idx = np.empty(nq, dtype=np.int64)
    for start in range(0, nq, 256):
        block = Q[start:start + 256]
        D = ((block[:, None, :] - R[None, :, :]) ** 2).sum(axis=2)
        rows = np.arange(block.shape[0])
        i1 = D.argmin(axis=1)
        v1 = D[rows, i1]
        D2 = D.copy()
        D2[rows, i1] = np.inf
        v2 = D2.min(axis=1)
        d1[start:start + 256] = np.sqrt(v1)
        d2[start:start + 256] = np.sqrt(v2)
        idx[start:start + 256] = i1
    return d1, idx, d2


if _USE_NUMBA:
    from numba import njit, prange

    @njit(cache=True, parallel=True)
    def _nn_two_hamming_nb(Q, R):  # pragma: no cover - exercised via wrapper
        nq, d = Q.shape
        nr = R.shape[0]
        d1 = np.empty(nq)
        d2 = np.empty(nq)
        idx = np.empty(nq, dtype=np.int64)
        for i in prange(nq):
            b1 = d + 1
            b2 = d + 1
            bi = -1
            for j in range(nr):
                s = 0
                for c in range(d):
                    if Q[i, c] != R[j, c]:
                        s += 1
                        if s > b2:
                            break
                if s < b1:
                    b2 = b1
                    b1 = s
                    bi = j
                elif s < b2:
                    b2 = s
            d1[i] = b1
            idx[i] = bi
            d2[i] = b2
        return d1, idx, d2

    @njit(cache=True, parallel=True)
    def _nn_two_euclid_nb(Q, R):  # pragma: no cover - exercised via wrapper
        nq, d = Q.shape
        nr = R.shape[0]
        d1 = np.empty(nq)
        d2 = np.empty(nq)
        idx = np.empty(nq, dtype=np.int64)
        for i in prange(nq):
            b1 = np.inf
            b2 = np.inf
            bi = -1
            for j in range(nr):
                s = 0.0
                for c in range(d):
                    diff = Q[i, c] - R[j, c]
                    s += diff * diff
                    if s > b2:
                        break
                if s < b1:
                    b2 = b1
                    b1 = s
                    bi = j
                elif s < b2:
                    b2 = s
            d1[i] = np.sqrt(b1)
            idx[i] = bi
            d2[i] = np.sqrt(b2)
        return d1, idx, d2


def nn_two_hamming(Q: np.ndarray, R: np.ndarray):
    Q = np.ascontiguousarray(Q)
    R = np.ascontiguousarray(R)
    if _USE_NUMBA:
        return _nn_two_hamming_nb(Q, R)
    return _nn_two_hamming_py(Q, R)


def nn_two_euclid(Q: np.ndarray, R: np.ndarray):
    Q = np.ascontiguousarray(Q, dtype=np.float64)
    R = np.ascontiguousarray(R, dtype=np.float64)
    if _USE_NUMBA:
        return _nn_two_euclid_nb(Q, R)
    return _nn_two_euclid_py(Q, R)
