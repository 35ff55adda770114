"""Cumulative differences between two disjoint subpopulations.

Samples sorted by score are collapsed into maximal runs ("blocks") sharing a
label.  Each block of one subpopulation is compared with the averaged
neighbouring blocks of the other, which gives a sequence of differences
``D`` (always subpopulation 0 minus subpopulation 1) with weights ``W``; the
graph accumulates ``W*D`` against ``W``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cumstat_full import ks_kuiper, plugin_variance, pooled_sums

__all__ = [
    "Block",
    "CumulativeGraphTwo",
    "DegenerateInterleavingError",
    "PairedDifferences",
    "build_blocks",
    "compare_blocks",
    "cumulative_graph_two",
    "pair_differences",
    "sigma_two",
]


class DegenerateInterleavingError(ValueError):
    """The blocks do not interleave enough to form a single difference."""


@dataclass
class Block:
    label: int
    score: float
    response: float
    weight: float
    members_response: np.ndarray
    members_weight: np.ndarray

    @property
    def size(self) -> int:
        return len(self.members_weight)


def build_blocks(scores, responses, weights, labels) -> list[Block]:
    """Collapse maximal same-label runs of score-sorted samples into blocks."""
    s = np.asarray(scores, dtype=float)
    r = np.asarray(responses, dtype=float)
    lab = np.asarray(labels)
    m = s.shape[0]
    w = np.ones(m) if weights is None else np.asarray(weights, dtype=float)
    if r.shape != (m,) or w.shape != (m,) or lab.shape != (m,):
        raise ValueError("scores, responses, weights and labels must have equal length")
    if m == 0:
        raise ValueError("no samples")
    if not np.all(np.diff(s) > 0):
        raise ValueError("scores must be strictly increasing")
    if not np.all(w > 0):
        raise ValueError("weights must be strictly positive")
    if not np.all(np.isin(lab, (0, 1))):
        raise ValueError("labels must be 0 or 1")
    if np.all(lab == lab[0]):
        raise ValueError(f"only subpopulation {int(lab[0])} is present; nothing to compare")

    starts = np.flatnonzero(np.r_[True, lab[1:] != lab[:-1]])
    stops = np.r_[starts[1:], m]
    blocks = []
    for a, b in zip(starts, stops):
        ww, rr = w[a:b], r[a:b]
        t = ww.sum()
        blocks.append(Block(
            label=int(lab[a]),
            score=float(np.dot(ww, s[a:b]) / t),
            response=float(np.dot(ww, rr) / t),
            weight=float(t),
            members_response=rr.copy(),
            members_weight=ww.copy(),
        ))
    return blocks


@dataclass
class PairedDifferences:
    d: np.ndarray
    w: np.ndarray
    # terms[j] lists (block position, coefficient) with d[j] = sum coef * block.response
    terms: list = field(default_factory=list, repr=False)

    def __len__(self):
        return len(self.d)


def pair_differences(blocks: list[Block]) -> PairedDifferences:
    """Interleaved differences and their weights.

    With the blocks of each label numbered in score order, the even entries
    compare the label-1 block ``k`` with the average of the label-0 blocks on
    either side, and the odd entries compare the label-0 block ``k+1`` with
    the label-1 blocks on either side.  Only entries whose three blocks exist
    are emitted.  If the first block carries label 1 the roles are swapped and
    the differences negated, so the sign is always 0 minus 1.
    """
    for prev, nxt in zip(blocks, blocks[1:]):
        if prev.label == nxt.label:
            raise ValueError("consecutive blocks must alternate labels")
    flip = blocks[0].label == 1
    first = [i for i, blk in enumerate(blocks) if blk.label == (1 if flip else 0)]
    second = [i for i, blk in enumerate(blocks) if blk.label == (0 if flip else 1)]
    k0, k1 = len(first), len(second)
    if k0 < 2 or k1 < 1:
        raise DegenerateInterleavingError(
            f"need a block of one subpopulation between two of the other; got {len(blocks)} block(s)"
        )
    sign = -1.0 if flip else 1.0

    d, w, terms = [], [], []
    rt = lambda i: (blocks[i].response, blocks[i].weight)  # noqa: E731
    for k in range(k0 - 1):
        if k <= k1 - 1:
            a, c, b = first[k], second[k], first[k + 1]
            (ra, ta), (rc, tc), (rb, tb) = rt(a), rt(c), rt(b)
            d.append(sign * (ra + rb - 2 * rc) / 2)
            w.append((ta + tb + 2 * tc) / 2)
            terms.append([(a, sign * 0.5), (b, sign * 0.5), (c, -sign)])
        if k + 1 <= k1 - 1:
            a, b, c = second[k], second[k + 1], first[k + 1]
            (ra, ta), (rb, tb), (rc, tc) = rt(a), rt(b), rt(c)
            d.append(sign * (2 * rc - ra - rb) / 2)
            w.append((2 * tc + ta + tb) / 2)
            terms.append([(c, sign), (a, -sign * 0.5), (b, -sign * 0.5)])
    return PairedDifferences(d=np.array(d), w=np.array(w), terms=terms)


def sigma_two(blocks: list[Block], diffs: PairedDifferences, pool: int = 1, unbiased: bool = True) -> float:
    """Plug-in null scale of the graph's endpoint.

    The endpoint is a fixed linear combination of block mean responses; its
    variance is the sum of squared coefficients times each block mean's
    plug-in variance, blocks being independent.  Member variances come from
    :func:`plugin_variance` over the block and ``pool`` neighbouring blocks
    on each side.  Neighbours matter here: blocks are often single samples,
    and with ``pool=0`` a singleton 0/1 block contributes nothing, which
    makes sigma far too small for sparse interleavings.
    """
    if pool < 0:
        raise ValueError("pool must be non-negative")
    total = float(np.sum(diffs.w))
    coef = np.zeros(len(blocks))
    for wj, term in zip(diffs.w, diffs.terms):
        for pos, c in term:
            coef[pos] += wj * c / total
    bernoulli = all(np.all((b.members_response >= 0) & (b.members_response <= 1)) for b in blocks)
    t = np.array([b.weight for b in blocks])
    sq = np.array([np.sum(b.members_weight**2) for b in blocks])
    s1 = np.array([np.dot(b.members_weight, b.members_response) for b in blocks])
    s2 = np.array([np.dot(b.members_weight, b.members_response**2) for b in blocks])
    v = plugin_variance(pooled_sums(t, pool), pooled_sums(s1, pool), pooled_sums(s2, pool),
                        pooled_sums(sq, pool), bernoulli, unbiased)
    return float(math.sqrt(max(np.dot(coef**2, v * sq / t**2), 0.0)))


@dataclass
class CumulativeGraphTwo:
    abscissae: np.ndarray
    ordinates: np.ndarray
    sigma: float
    ks: float
    kuiper: float
    n: int
    n0: int = 0
    n1: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def ks_over_sigma(self) -> float:
        return self.ks / self.sigma if self.sigma > 0 else math.nan

    @property
    def kuiper_over_sigma(self) -> float:
        return self.kuiper / self.sigma if self.sigma > 0 else math.nan


def cumulative_graph_two(diffs: PairedDifferences, blocks: list[Block] | None = None,
                         pool: int = 1, unbiased: bool = True) -> CumulativeGraphTwo:
    """Cumulative graph of the differences; sigma needs the blocks too."""
    if len(diffs) == 0:
        raise ValueError("no differences to accumulate")
    cum_w = np.cumsum(diffs.w)
    total = cum_w[-1]
    a = cum_w / total
    c = np.cumsum(diffs.w * diffs.d) / total
    g, h = ks_kuiper(c)
    sigma = sigma_two(blocks, diffs, pool, unbiased) if blocks is not None else math.nan
    return CumulativeGraphTwo(abscissae=a, ordinates=c, sigma=sigma, ks=g, kuiper=h, n=len(diffs))


def compare_blocks(scores, responses, weights, labels, pool: int = 1, unbiased: bool = True) -> CumulativeGraphTwo:
    """Blocks, differences and graph in one call, for score-sorted samples."""
    blocks = build_blocks(scores, responses, weights, labels)
    graph = cumulative_graph_two(pair_differences(blocks), blocks, pool, unbiased)
    lab = np.asarray(labels)
    graph.n0 = int(np.sum(lab == 0))
    graph.n1 = int(np.sum(lab == 1))
    return graph
