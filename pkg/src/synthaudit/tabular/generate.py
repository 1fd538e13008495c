"""Reference dataset generators and the train/test split.

Two families: isotropic standard-normal point clouds (``gen_gauss``) and
CensusLite, a synthetic categorical microdata table with a fixed profile
mixture. CensusLite is built so that eight correlated profiles carry most
of the mass while two rare, tightly-held profiles own exclusive region
codes; per-column flips spread each profile over a cloud of nearby cells.
"""
from __future__ import annotations

import numpy as np

from .. import seeds
from .schema import CAT, Column, Dataset, from_arrays, num_column

GAUSS_RANGE = 1e9

CENSUS_COLUMNS = (
    ("region", 10),
    ("occupation", 4),
    ("education", 4),
    ("age_band", 4),
    ("urban", 2),
    ("insured", 2),
)
_PREFIX = {"region": "r", "occupation": "o", "education": "e",
           "age_band": "a", "urban": "u", "insured": "i"}

# Profile centers as codes per column, one region code per profile. The
# last two profiles are rare and are the only ones centered on regions
# 8 and 9. Each non-region value is used by the same number of common
# profiles, so the rare region codes are the only rare categories.
_PROFILES = np.array([
    [0, 0, 0, 0, 0, 0],
    [1, 1, 1, 1, 0, 1],
    [2, 2, 2, 2, 1, 0],
    [3, 3, 3, 3, 1, 1],
    [4, 0, 3, 1, 0, 1],
    [5, 1, 2, 0, 1, 0],
    [6, 2, 1, 3, 0, 1],
    [7, 3, 0, 2, 1, 0],
    [8, 1, 2, 3, 0, 1],
    [9, 2, 1, 1, 1, 0],
], dtype=np.int32)
_N_RARE = 2
_WEIGHTS = np.array([0.11375] * 8 + [0.045] * _N_RARE)
# Per-column probability that a common-profile row deviates to a uniform
# value. The first column is sticky so the rare-region markers stay clean.
_FLIP = np.array([0.02, 0.10, 0.10, 0.10, 0.08, 0.08])
# Rare-profile rows are near-exact copies of their center: a single small
# flip rate on every column keeps the two rare clusters tight.
_RARE_FLIP = 0.01


def census_schema() -> tuple[Column, ...]:
    return tuple(
        Column(name, CAT, tuple(f"{_PREFIX[name]}{i}" for i in range(card)))
        for name, card in CENSUS_COLUMNS
    )


def gen_gauss(dim: int, n: int, seed: int) -> Dataset:
    """n iid points from the standard normal in ``dim`` dimensions."""
    if dim < 1 or n < 1:
        raise ValueError("dim and n must be positive")
    r = seeds.rng(seed, "gen_gauss", dim, n)
    points = r.standard_normal((n, dim))
    schema = tuple(num_column(f"x{i}", -GAUSS_RANGE, GAUSS_RANGE) for i in range(dim))
    return from_arrays(schema, [points[:, i] for i in range(dim)],
                       provenance=f"gen_gauss(dim={dim}, n={n}, seed={seed})")


def gen_censuslite(n: int, seed: int) -> Dataset:
    if n < 1:
        raise ValueError("n must be positive")
    r = seeds.rng(seed, "gen_censuslite", n)
    profile = r.choice(len(_WEIGHTS), size=n, p=_WEIGHTS)
    rare = profile >= len(_WEIGHTS) - _N_RARE
    cols = []
    for c, (_, card) in enumerate(CENSUS_COLUMNS):
        uniform = r.integers(0, card, size=n, dtype=np.int32)
        flip = r.random(n) < np.where(rare, _RARE_FLIP, _FLIP[c])
        base = _PROFILES[profile, c]
        cols.append(np.where(flip, uniform, base).astype(np.int32))
    return from_arrays(census_schema(), cols,
                       provenance=f"gen_censuslite(n={n}, seed={seed})")


def split_indices(n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Disjoint half/half index split, each half in source order."""
    perm = seeds.rng(seed, "split", n).permutation(n)
    half = n // 2
    return np.sort(perm[:half]), np.sort(perm[half:])


def split(ds: Dataset, seed: int) -> tuple[Dataset, Dataset]:
    idx_train, idx_test = split_indices(ds.n_rows, seed)
    return ds.select(idx_train), ds.select(idx_test)
