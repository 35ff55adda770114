"""Cumulative deviation of a subpopulation from the full population.

Inputs are scores ``S`` (strictly increasing), responses ``R`` and positive
weights ``W`` for the ``m`` members of the full population, together with the
positions of the ``n`` subpopulation members among them (0-based here).

Every full-population member is assigned to the subpopulation member whose
score is nearest, using midpoints between consecutive subpopulation scores as
bin boundaries; the bin's weighted mean response is what the subpopulation
member is compared against.  The graph plots the cumulative weighted
difference against the cumulative subpopulation weight.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "CumulativeGraphFull",
    "FullComparisonInput",
    "bin_full_population",
    "bin_assignment",
    "cumulative_graph_full",
    "ks_kuiper",
    "plugin_variance",
    "pooled_sums",
    "sigma_full",
]


def ks_kuiper(ordinates) -> tuple[float, float]:
    """Kolmogorov-Smirnov and Kuiper statistics of a cumulative graph.

    The graph starts at an implicit ordinate of 0, which enters both the
    maximum and the minimum.
    """
    c = np.asarray(ordinates, dtype=float)
    if c.size == 0:
        raise ValueError("ks_kuiper needs at least one ordinate")
    if not np.all(np.isfinite(c)):
        raise ValueError("ordinates must be finite")
    g = float(np.max(np.abs(c)))
    h = float(max(0.0, c.max()) - min(0.0, c.min()))
    return g, h


@dataclass
class FullComparisonInput:
    scores: np.ndarray
    responses: np.ndarray
    weights: np.ndarray
    subpop: np.ndarray

    def __post_init__(self):
        self.scores = np.asarray(self.scores, dtype=float)
        self.responses = np.asarray(self.responses, dtype=float)
        m = self.scores.shape[0]
        if self.weights is None:
            self.weights = np.ones(m)
        self.weights = np.asarray(self.weights, dtype=float)
        self.subpop = np.asarray(self.subpop, dtype=np.intp)
        if self.scores.ndim != 1 or self.responses.shape != (m,) or self.weights.shape != (m,):
            raise ValueError("scores, responses and weights must be 1-D arrays of equal length")
        if m == 0:
            raise ValueError("empty population")
        if not np.all(np.diff(self.scores) > 0):
            raise ValueError("scores must be strictly increasing")
        if not np.all(np.isfinite(self.responses)):
            raise ValueError("responses must be finite")
        if not np.all(self.weights > 0):
            raise ValueError("weights must be strictly positive")
        if self.subpop.ndim != 1 or self.subpop.size == 0:
            raise ValueError("subpopulation must be a non-empty 1-D array of indices")
        if self.subpop[0] < 0 or self.subpop[-1] >= m or not np.all(np.diff(self.subpop) > 0):
            raise ValueError("subpopulation indices must be strictly increasing and within range")

    @property
    def m(self) -> int:
        return self.scores.shape[0]

    @property
    def n(self) -> int:
        return self.subpop.shape[0]


def bin_assignment(inp: FullComparisonInput) -> np.ndarray:
    """Bin number (0..n-1) of every full-population member."""
    s_sub = inp.scores[inp.subpop]
    edges = (s_sub[:-1] + s_sub[1:]) / 2
    # bin k holds edges[k-1] < S <= edges[k]
    return np.searchsorted(edges, inp.scores, side="left")


def bin_full_population(inp: FullComparisonInput) -> np.ndarray:
    """Weighted mean full-population response in each subpopulation member's bin."""
    bins = bin_assignment(inp)
    num = np.bincount(bins, weights=inp.weights * inp.responses, minlength=inp.n)
    den = np.bincount(bins, weights=inp.weights, minlength=inp.n)
    return num / den


def _bernoulli(responses) -> bool:
    return bool(np.all((responses >= 0) & (responses <= 1)))


def pooled_sums(values, pool: int) -> np.ndarray:
    """Sum of each entry with up to ``pool`` neighbours on either side."""
    values = np.asarray(values, dtype=float)
    if pool == 0:
        return values
    full = np.convolve(values, np.ones(2 * pool + 1))
    return full[pool:pool + values.size]


def plugin_variance(s0, s1, s2, sq, bernoulli: bool, unbiased: bool) -> np.ndarray:
    """Per-member response variance from weighted sums over a group.

    ``s0, s1, s2, sq`` are sums of w, w*r, w*r**2 and w**2.  Responses in
    [0, 1] get ``p(1-p)`` with ``p`` the weighted mean, others the weighted
    sample variance.  ``unbiased`` applies the reliability-weight correction
    ``s0**2 / (s0**2 - sq)`` (``n/(n-1)`` for unit weights) to groups of
    more than one member; a lone member's estimate is 0 either way.
    """
    s0 = np.asarray(s0, dtype=float)
    mean = s1 / s0
    v = mean * (1 - mean) if bernoulli else s2 / s0 - mean**2
    v = np.maximum(v, 0.0)
    if unbiased:
        d = s0**2 - sq
        ok = d > 1e-12 * s0**2
        v = np.where(ok, v * s0**2 / np.where(ok, d, 1.0), v)
    return v


def sigma_full(inp: FullComparisonInput, bins=None, pool: int = 0, unbiased: bool = True) -> float:
    """Plug-in scale of the graph's endpoint under the null hypothesis.

    Bins are treated as independent.  The member responses of bin k get the
    variance :func:`plugin_variance` estimates from bin k together with
    ``pool`` neighbouring bins on each side.  The variance of
    ``R[i_k] - Rtilde[i_k]`` follows by linearity, and the endpoint variance
    sums those with squared normalized subpopulation weights.

    ``pool=0, unbiased=False`` is the plain plug-in ``Rtilde(1-Rtilde)``,
    which runs low when bins hold only a few members.
    """
    if pool < 0:
        raise ValueError("pool must be non-negative")
    if bins is None:
        bins = bin_assignment(inp)
    w, r, n = inp.weights, inp.responses, inp.n
    sums = lambda x: np.bincount(bins, weights=x, minlength=n)  # noqa: E731
    total = sums(w)
    sq = sums(w**2)
    v = plugin_variance(pooled_sums(total, pool), pooled_sums(sums(w * r), pool),
                        pooled_sums(sums(w * r**2), pool), pooled_sums(sq, pool), _bernoulli(r), unbiased)
    w_own = w[inp.subpop]
    var_k = v * ((1 - w_own / total) ** 2 + (sq - w_own**2) / total**2)
    w_sub = w_own.sum()
    return float(math.sqrt(max(np.sum((w_own / w_sub) ** 2 * var_k), 0.0)))


@dataclass
class CumulativeGraphFull:
    abscissae: np.ndarray
    ordinates: np.ndarray
    cumulative_sub: np.ndarray
    cumulative_full: np.ndarray
    binned: np.ndarray
    sigma: float
    ks: float
    kuiper: float
    m: int
    n: int
    extra: dict = field(default_factory=dict)

    @property
    def ks_over_sigma(self) -> float:
        return self.ks / self.sigma if self.sigma > 0 else math.nan

    @property
    def kuiper_over_sigma(self) -> float:
        return self.kuiper / self.sigma if self.sigma > 0 else math.nan


def cumulative_graph_full(inp: FullComparisonInput, pool: int = 0, unbiased: bool = True) -> CumulativeGraphFull:
    """Cumulative graph, summary statistics and sigma for one comparison.

    ``pool`` and ``unbiased`` are passed to :func:`sigma_full`.
    """
    bins = bin_assignment(inp)
    binned = bin_full_population(inp)
    w_sub = inp.weights[inp.subpop]
    r_sub = inp.responses[inp.subpop]
    cum_w = np.cumsum(w_sub)
    total = cum_w[-1]
    f = np.cumsum(w_sub * r_sub) / total
    f_tilde = np.cumsum(w_sub * binned) / total
    a = cum_w / total
    ordinates = f - f_tilde
    g, h = ks_kuiper(ordinates)
    return CumulativeGraphFull(
        abscissae=a,
        ordinates=ordinates,
        cumulative_sub=f,
        cumulative_full=f_tilde,
        binned=binned,
        sigma=sigma_full(inp, bins, pool, unbiased),
        ks=g,
        kuiper=h,
        m=inp.m,
        n=inp.n,
    )
