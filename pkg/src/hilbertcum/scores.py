"""Scalar scores in [0, 1] for covariate vectors, via the Hilbert curve.

The pipeline is jitter -> normalize -> :func:`hilbert_scores`.  Each row of
the normalized matrix is rounded onto the ``2**b`` lattice, encoded as a
position along the curve, and the positions are rescaled affinely so the
smallest becomes 0 and the largest 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .hilbert import CurveParams, encode_points

__all__ = [
    "NORMALIZATIONS",
    "DegenerateColumnError",
    "InsufficientDataError",
    "ScoreVector",
    "apply_jitter",
    "default_bits_per_dim",
    "hilbert_scores",
    "normalize",
    "quantize",
]

NORMALIZATIONS = ("minmax", "maxdiv", "none")


class DegenerateColumnError(ValueError):
    """A covariate column cannot be mapped onto [0, 1]."""


class InsufficientDataError(ValueError):
    pass


@dataclass
class ScoreVector:
    """Scores with the sort order they induce.

    ``scores[permutation]`` is strictly increasing, ``indices[i]`` is the
    Hilbert position of row ``i`` before rescaling.
    """

    scores: np.ndarray
    permutation: np.ndarray
    indices: list
    bits_per_dim: int
    order: tuple

    def __len__(self):
        return len(self.scores)


def _column_label(names, j):
    if names is not None:
        return f"{names[j]!r} (column {j})"
    return f"column {j}"


def normalize(values, mode: str = "minmax", names: Optional[Sequence[str]] = None) -> np.ndarray:
    """Map each column onto [0, 1].

    ``minmax`` sends the column minimum to 0 and the maximum to 1; ``maxdiv``
    divides by the column maximum (zero stays zero); ``none`` only checks that
    the values already lie in [0, 1].
    """
    x = np.array(values, dtype=float, copy=True)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise ValueError(f"expected a 2-D covariate matrix, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("covariates contain missing or non-finite values")
    if mode not in NORMALIZATIONS:
        raise ValueError(f"unknown normalization {mode!r}; choose from {NORMALIZATIONS}")

    lo = x.min(axis=0)
    hi = x.max(axis=0)
    for j in range(x.shape[1]):
        if mode == "minmax":
            if not hi[j] > lo[j]:
                raise DegenerateColumnError(f"{_column_label(names, j)} is constant; cannot rescale min-max")
            x[:, j] = (x[:, j] - lo[j]) / (hi[j] - lo[j])
        elif mode == "maxdiv":
            if lo[j] < 0 or not hi[j] > 0:
                raise DegenerateColumnError(
                    f"{_column_label(names, j)} needs min >= 0 and max > 0 to divide by the max "
                    f"(min={lo[j]!r}, max={hi[j]!r})"
                )
            x[:, j] = x[:, j] / hi[j]
        elif lo[j] < 0 or hi[j] > 1:
            raise DegenerateColumnError(f"{_column_label(names, j)} lies outside [0, 1]")
    return x


def apply_jitter(values, seed: int = 0, rel_magnitude: float = 1e-8, columns=None) -> np.ndarray:
    """Perturb entries by independent uniform draws in +-rel_magnitude*scale.

    ``scale`` is the column range (max - min), falling back to max|x| and then
    to 1 for constant columns.  Draws come from numpy's PCG64 seeded with
    ``seed``, so a given (seed, rel_magnitude, shape) always reproduces the
    same output.  ``columns`` restricts the perturbation to a subset.
    """
    x = np.array(values, dtype=float, copy=True)
    if rel_magnitude < 0:
        raise ValueError("rel_magnitude must be non-negative")
    if rel_magnitude == 0:
        return x
    squeeze = x.ndim == 1
    if squeeze:
        x = x[:, None]
    rng = np.random.Generator(np.random.PCG64(seed))
    noise = rng.uniform(-1.0, 1.0, size=x.shape)
    scale = x.max(axis=0) - x.min(axis=0)
    absmax = np.abs(x).max(axis=0)
    scale = np.where(scale > 0, scale, np.where(absmax > 0, absmax, 1.0))
    cols = range(x.shape[1]) if columns is None else columns
    for j in cols:
        x[:, j] += rel_magnitude * scale[j] * noise[:, j]
    return x[:, 0] if squeeze else x


def default_bits_per_dim(p: int) -> int:
    # 64-bit positions for p <= 64, one bit per axis beyond that
    return max(1, 64 // p) if p <= 64 else 1


def quantize(values, bits_per_dim: int) -> np.ndarray:
    """Round [0, 1] values to the nearest of ``2**b`` lattice levels."""
    top = (1 << bits_per_dim) - 1
    x = np.asarray(values, dtype=float)
    if bits_per_dim <= 52:
        q = np.floor(x * top + 0.5)
        return np.clip(q, 0, top).astype(np.uint64)
    # float64 cannot carry more than 53 bits; round through exact ints
    out = np.empty(x.shape, dtype=np.uint64)
    flat = out.reshape(-1)
    for k, v in enumerate(x.reshape(-1).tolist()):
        flat[k] = min(max(int(np.floor(v * top + 0.5)), 0), top)
    return out


def hilbert_scores(values, bits_per_dim: Optional[int] = None, order: Optional[Sequence[int]] = None) -> ScoreVector:
    """Scores in [0, 1] from an already-normalized ``(m, p)`` matrix.

    ``order`` lists the columns in the order the curve visits the dimensions
    (default: as given).  Rows that land on the same lattice cell are ordered
    by row position, and their scores nudged apart by one ulp each so that
    all scores stay strictly distinct.
    """
    x = np.asarray(values, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    m, p = x.shape
    if m < 2:
        raise InsufficientDataError(f"need at least 2 rows to score, got {m}")
    if order is None:
        order = tuple(range(p))
    else:
        order = tuple(int(j) for j in order)
        if sorted(order) != list(range(p)):
            raise ValueError(f"order must be a permutation of range({p}), got {order}")
    b = default_bits_per_dim(p) if bits_per_dim is None else int(bits_per_dim)

    lattice = quantize(x[:, list(order)], b)
    indices = encode_points(CurveParams(p, b), lattice)
    perm = np.array(sorted(range(m), key=lambda i: (indices[i], i)), dtype=np.intp)

    lo, hi = indices[perm[0]], indices[perm[-1]]
    if hi == lo:
        # every row in one cell: fall back to row order
        ranked = np.linspace(0.0, 1.0, m)
    else:
        span = hi - lo
        ranked = np.array([(indices[i] - lo) / span for i in perm])
        _make_strict(ranked)
    scores = np.empty(m)
    scores[perm] = ranked
    return ScoreVector(scores=scores, permutation=perm, indices=indices, bits_per_dim=b, order=order)


def _make_strict(s: np.ndarray) -> None:
    """Nudge a non-decreasing array in place into a strictly increasing one within [0, 1]."""
    for k in range(1, len(s)):
        if s[k] <= s[k - 1]:
            s[k] = np.nextafter(s[k - 1], np.inf)
    if s[-1] > 1.0:
        s[-1] = 1.0
        for k in range(len(s) - 2, -1, -1):
            if s[k] >= s[k + 1]:
                s[k] = np.nextafter(s[k + 1], -np.inf)
            else:
                break
