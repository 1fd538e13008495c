"""Diagonal-covariance Gaussian mixtures fitted with EM.

Categorical datasets are encoded before fitting: one-hot by default, or
ordinal (the support index as a float) for bin-labeled columns where the
label order carries geometry. The variance floor is applied as an M-step
clip, i.e. the M-step maximizes over the floored parameter set, so the
log-likelihood is non-decreasing at every iteration and the fit asserts
that.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import seeds
from .tabular.schema import CAT, Dataset

_LOG2PI = float(np.log(2.0 * np.pi))


ENCODINGS = ("onehot", "ordinal", "surprise")


def surprise_table(ds: Dataset) -> tuple[np.ndarray, ...]:
    """Per-column code -> standardized -ln(frequency) lookup, fit on ``ds``.

    Rows made of rare categories map to large coordinates, so low-density
    rows become geometric extremes that a diagonal GMM can isolate. Each
    column is z-scored over the rows of ``ds`` so that only values rare
    relative to their own column stand out. Codes unseen in ``ds`` get the
    most-surprising raw coordinate, -ln(1/n).
    """
    tables = []
    for col, arr in zip(ds.schema, ds.cols):
        if col.kind != CAT:
            raise ValueError("surprise encoding needs categorical columns")
        counts = np.bincount(arr, minlength=len(col.support)).astype(np.float64)
        coord = -np.log(np.maximum(counts, 1.0) / ds.n_rows)
        p = counts / ds.n_rows
        mean = p @ coord
        # centered but not rescaled: nats of surprise are comparable
        # across columns, and rescaling would amplify columns whose
        # frequencies are all ordinary
        tables.append(coord - mean)
    return tuple(tables)


def encode_points(ds: Dataset, encoding: str = "onehot",
                  tables: tuple[np.ndarray, ...] | None = None) -> np.ndarray:
    """Dataset rows as float points for mixture fitting."""
    if encoding not in ENCODINGS:
        raise ValueError(f"unknown encoding {encoding!r}")
    if encoding == "surprise":
        if tables is None:
            tables = surprise_table(ds)
        return np.stack([t[arr] for t, arr in zip(tables, ds.cols)], axis=1)
    blocks = []
    for col, arr in zip(ds.schema, ds.cols):
        if col.kind != CAT:
            blocks.append(np.asarray(arr, dtype=np.float64)[:, None])
        elif encoding == "ordinal":
            blocks.append(arr.astype(np.float64)[:, None])
        else:
            card = len(col.support)
            hot = np.zeros((arr.shape[0], card))
            hot[np.arange(arr.shape[0]), arr] = 1.0
            blocks.append(hot)
    return np.concatenate(blocks, axis=1)


@dataclass(frozen=True)
class GmmModel:
    weights: np.ndarray      # (k,)
    means: np.ndarray        # (k, d)
    variances: np.ndarray    # (k, d), all >= floor
    floor: float
    encoding: str
    schema: tuple = ()
    ll_history: tuple[float, ...] = ()
    # frequency lookup frozen at fit time, used by the surprise encoding
    enc_tables: tuple[np.ndarray, ...] | None = None

    @property
    def k(self) -> int:
        return self.weights.shape[0]


def _log_resp(model_w, means, variances, X):
    """Returns (log responsibilities, total log-likelihood)."""
    # (n, k): log w_k + log N(x | mu_k, diag var_k)
    lp = np.empty((X.shape[0], means.shape[0]))
    with np.errstate(divide="ignore"):
        logw = np.log(model_w)
    for k in range(means.shape[0]):
        if model_w[k] <= 0.0:
            lp[:, k] = -np.inf
            continue
        diff = X - means[k]
        lp[:, k] = logw[k] - 0.5 * np.sum(
            diff * diff / variances[k] + np.log(variances[k]) + _LOG2PI, axis=1
        )
    top = lp.max(axis=1, keepdims=True)
    norm = top[:, 0] + np.log(np.exp(lp - top).sum(axis=1))
    return lp - norm[:, None], float(norm.sum())


def _kmeanspp(X, k, r, first: int | None = None):
    n = X.shape[0]
    i0 = int(r.integers(n)) if first is None else first
    centers = [X[i0].copy()]
    for _ in range(1, k):
        c = np.stack(centers)
        d2 = np.min(((X[:, None, :] - c[None]) ** 2).sum(axis=2), axis=1)
        total = d2.sum()
        if total <= 0.0:
            centers.append(X[int(r.integers(n))].copy())
        else:
            centers.append(X[int(r.choice(n, p=d2 / total))].copy())
    return np.stack(centers)


def fit_gmm(ds, k: int, max_iters: int = 200, tol: float = 1e-8,
            seed: int = 0, encoding: str = "onehot",
            floor: float = 1e-6, init: str = "kmeanspp") -> GmmModel:
    """Fit a k-component diagonal GMM with EM from a k-means++ start.

    ``ds`` is a Dataset or a float array of shape (n, d).
    """
    enc_tables = None
    if isinstance(ds, Dataset):
        if encoding == "surprise":
            enc_tables = surprise_table(ds)
        X = encode_points(ds, encoding, enc_tables)
        schema = ds.schema
    else:
        X = np.asarray(ds, dtype=np.float64)
        schema = ()
    n, d = X.shape
    if k < 1:
        raise ValueError("k must be positive")
    if n < 1:
        raise ValueError("cannot fit on empty data")
    r = seeds.rng(seed, "fit_gmm", n, d, k)

    if init == "extreme":
        # anchor the first center on the most extreme row so a small
        # far-out mode survives initialization in every restart
        first = int(np.argmax((X * X).sum(axis=1)))
    elif init == "kmeanspp":
        first = None
    else:
        raise ValueError(f"unknown init {init!r}")
    centers = _kmeanspp(X, k, r, first)
    # a few Lloyd rounds settle the centers before EM takes over
    assign = None
    for _ in range(10):
        d2 = ((X[:, None, :] - centers[None]) ** 2).sum(axis=2)
        new_assign = d2.argmin(axis=1)
        if assign is not None and np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for j in range(k):
            mask = assign == j
            if mask.any():
                centers[j] = X[mask].mean(axis=0)
    global_var = np.maximum(X.var(axis=0), floor)
    weights = np.zeros(k)
    means = centers.copy()
    variances = np.tile(global_var, (k, 1))
    for j in range(k):
        mask = assign == j
        cnt = int(mask.sum())
        weights[j] = cnt / n
        if cnt > 0:
            means[j] = X[mask].mean(axis=0)
            variances[j] = np.maximum(X[mask].var(axis=0), floor)

    history = []
    prev = -np.inf
    for _ in range(max_iters):
        log_r, ll = _log_resp(weights, means, variances, X)
        # constrained M-step keeps this exact, slack is float noise only
        assert ll >= prev - 1e-8 * max(1.0, abs(prev)), "log-likelihood decreased"
        history.append(ll)
        if ll - prev <= tol * max(1.0, abs(prev)) and len(history) > 1:
            break
        prev = ll
        resp = np.exp(log_r)
        nk = resp.sum(axis=0)
        weights = nk / n
        for j in range(k):
            if nk[j] <= 1e-12:
                # dead component: keep previous mean and variance
                continue
            means[j] = resp[:, j] @ X / nk[j]
            ex2 = resp[:, j] @ (X * X) / nk[j]
            variances[j] = np.maximum(ex2 - means[j] ** 2, floor)
        weights = weights / weights.sum()

    return GmmModel(weights=weights, means=means, variances=variances,
                    floor=floor, encoding=encoding, schema=schema,
                    ll_history=tuple(history), enc_tables=enc_tables)


def fit_gmm_best(ds, k: int, restarts: int = 1, seed: int = 0,
                 **kwargs) -> GmmModel:
    """Run ``fit_gmm`` from several seeds and keep the best likelihood.

    EM is local: a single run can merge nearby modes depending on where
    k-means++ lands. Restarting and comparing final log-likelihood is the
    standard remedy.
    """
    best = None
    for i in range(restarts):
        m = fit_gmm(ds, k, seed=seeds.derive(seed, "restart", i), **kwargs)
        if best is None or m.ll_history[-1] > best.ll_history[-1]:
            best = m
    return best


def responsibilities(model: GmmModel, ds) -> np.ndarray:
    X = encode_points(ds, model.encoding, model.enc_tables) \
        if isinstance(ds, Dataset) else np.asarray(ds, dtype=np.float64)
    log_r, _ = _log_resp(model.weights, model.means, model.variances, X)
    return np.exp(log_r)


def predict(model: GmmModel, ds) -> np.ndarray:
    """Most responsible component per row; ties take the lowest id."""
    return responsibilities(model, ds).argmax(axis=1).astype(np.int64)


def smallest_clusters(model, assignments, budget: int) -> list[int]:
    """Greedily pick cluster ids by ascending size while the running total
    stays within ``budget``. Ties break toward the lower id. ``model`` may
    be a GmmModel or a plain component count."""
    k = model.k if isinstance(model, GmmModel) else int(model)
    sizes = np.bincount(np.asarray(assignments), minlength=k)
    order = sorted(range(k), key=lambda j: (sizes[j], j))
    chosen, total = [], 0
    for j in order:
        if sizes[j] == 0:
            # an empty cluster selects no rows; including it would also
            # make a zero budget return a nonempty id set
            continue
        if total + sizes[j] > budget:
            break
        chosen.append(j)
        total += int(sizes[j])
    return sorted(chosen)
