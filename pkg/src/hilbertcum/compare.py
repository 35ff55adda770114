"""Score covariates along the Hilbert curve, then run a cumulative comparison."""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .cumstat_full import CumulativeGraphFull, FullComparisonInput, cumulative_graph_full
from .cumstat_two import CumulativeGraphTwo, compare_blocks
from .scores import ScoreVector, apply_jitter, hilbert_scores, normalize

__all__ = ["compare_full", "compare_two", "score_covariates"]


def score_covariates(covariates, *, order: Optional[Sequence[int]] = None, reverse: bool = False,
                     normalization: str = "minmax", jitter_seed: int = 0, jitter_rel: float = 1e-8,
                     jitter_columns=None, bits_per_dim: Optional[int] = None,
                     names: Optional[Sequence[str]] = None) -> ScoreVector:
    """Jitter, normalize and encode covariates into scores in [0, 1].

    ``order`` gives the column visited first, second, ...; ``reverse`` flips
    whichever order is in effect.
    """
    x = np.asarray(covariates, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    x = apply_jitter(x, seed=jitter_seed, rel_magnitude=jitter_rel, columns=jitter_columns)
    x = normalize(x, normalization, names=names)
    cols = list(range(x.shape[1])) if order is None else list(order)
    if reverse:
        cols = cols[::-1]
    return hilbert_scores(x, bits_per_dim=bits_per_dim, order=cols)


def _score_config(sv: ScoreVector, kw) -> dict:
    # "order" records the effective curve order, after any reversal
    cfg = {k: v for k, v in kw.items() if k not in ("names", "order")}
    cfg.update(bits_per_dim=sv.bits_per_dim, order=list(sv.order))
    return cfg


def compare_full(covariates, responses, subpop, weights=None, **score_kw) -> CumulativeGraphFull:
    """Subpopulation versus full population, conditioning on all covariates.

    ``subpop`` is a boolean mask or an array of row indices.
    """
    r = np.asarray(responses, dtype=float)
    m = r.shape[0]
    w = np.ones(m) if weights is None else np.asarray(weights, dtype=float)
    mask = np.asarray(subpop)
    if mask.dtype != bool:
        idx = mask.astype(np.intp)
        mask = np.zeros(m, dtype=bool)
        mask[idx] = True
    if mask.shape != (m,):
        raise ValueError("subpopulation mask must have one entry per row")
    if not mask.any():
        raise ValueError("subpopulation is empty")

    sv = score_covariates(covariates, **score_kw)
    perm = sv.permutation
    inp = FullComparisonInput(
        scores=sv.scores[perm],
        responses=r[perm],
        weights=w[perm],
        subpop=np.flatnonzero(mask[perm]),
    )
    graph = cumulative_graph_full(inp)
    graph.extra.update(_score_config(sv, score_kw))
    return graph


def compare_two(covariates, responses, labels, weights=None, **score_kw) -> CumulativeGraphTwo:
    """Subpopulation 0 versus subpopulation 1; rows labelled -1 are ignored.

    Scores are computed on the union of the two subpopulations.
    """
    lab = np.asarray(labels, dtype=int)
    keep = (lab == 0) | (lab == 1)
    x = np.asarray(covariates, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    r = np.asarray(responses, dtype=float)[keep]
    w = np.ones(int(keep.sum())) if weights is None else np.asarray(weights, dtype=float)[keep]
    lab = lab[keep]

    sv = score_covariates(x[keep], **score_kw)
    perm = sv.permutation
    graph = compare_blocks(sv.scores[perm], r[perm], w[perm], lab[perm])
    graph.extra.update(_score_config(sv, score_kw))
    return graph
