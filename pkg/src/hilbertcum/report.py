"""SVG plots and JSON summaries of cumulative graphs.

SVG output is built as plain text so that the same input always yields the
same bytes.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional
from xml.sax.saxutils import escape

import numpy as np

__all__ = [
    "RenderConfig",
    "SCHEMA",
    "SummaryGraph",
    "TRIANGLE_MULTIPLIER",
    "caption",
    "format_sig",
    "graph_from_summary",
    "render_graph",
    "render_ordering_scatter",
    "summary",
]

SCHEMA = "hilbertcum.summary/1"

# 95% quantile of the supremum of |standard Brownian motion| over [0, 1]
TRIANGLE_MULTIPLIER = 2.2414

DEFAULT_TITLE = "subpop. deviation is the slope as a function of A_k"


@dataclass
class RenderConfig:
    title: str = DEFAULT_TITLE
    triangle_multiplier: float = TRIANGLE_MULTIPLIER
    width: int = 480
    height: int = 360

    def __post_init__(self):
        if not self.triangle_multiplier > 0:
            raise ValueError("triangle_multiplier must be positive")
        if self.width < 100 or self.height < 100:
            raise ValueError("image must be at least 100x100")


@dataclass
class SummaryGraph:
    """A graph rebuilt from a JSON summary; enough to render it again."""

    abscissae: np.ndarray
    ordinates: np.ndarray
    sigma: float
    ks: float
    kuiper: float
    n: int
    m: Optional[int] = None
    kind: str = "full"


def format_sig(x: float, digits: int = 4) -> str:
    """Four significant digits, trailing zeros kept (5 -> '5.000')."""
    if x is None or not math.isfinite(x):
        return "n/a"
    return f"{x:#.{digits}g}"


def _ratio(a, sigma):
    return a / sigma if sigma > 0 else math.nan


def caption(graph) -> str:
    g, h, s = graph.ks, graph.kuiper, graph.sigma
    text = f"G = {format_sig(g)}; H = {format_sig(h)}"
    if s > 0:
        return text + f"; G/σ = {format_sig(g / s)}; H/σ = {format_sig(h / s)}"
    return text + "; G/σ and H/σ not applicable (σ = 0, no triangle)"


def _num(v: float) -> str:
    return f"{v:.3f}"


def render_graph(graph, cfg: Optional[RenderConfig] = None) -> str:
    """Cumulative graph from the origin through every (A_k, ordinate_k).

    A triangle with its base on the vertical axis spans +-multiplier*sigma,
    marking the size of deviation that would be significant at about 95%.
    """
    cfg = cfg or RenderConfig()
    a = np.asarray(graph.abscissae, dtype=float)
    c = np.asarray(graph.ordinates, dtype=float)
    sigma = float(graph.sigma) if graph.sigma is not None else 0.0
    half = cfg.triangle_multiplier * sigma if sigma > 0 else 0.0

    ymin = min(0.0, float(c.min()), -half)
    ymax = max(0.0, float(c.max()), half)
    if ymax - ymin <= 0:
        ymin, ymax = -1.0, 1.0
    pad = 0.05 * (ymax - ymin)
    ymin, ymax = ymin - pad, ymax + pad

    left, right, top, bottom = 60, 20, 40, 60
    pw = cfg.width - left - right
    ph = cfg.height - top - bottom
    sx = lambda x: left + pw * x  # noqa: E731
    sy = lambda y: top + ph * (ymax - y) / (ymax - ymin)  # noqa: E731

    pts = " ".join(f"{_num(sx(x))},{_num(sy(y))}" for x, y in zip([0.0, *a], [0.0, *c]))
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{cfg.width}" height="{cfg.height}" '
        f'viewBox="0 0 {cfg.width} {cfg.height}">',
        f'<rect x="0" y="0" width="{cfg.width}" height="{cfg.height}" fill="white"/>',
        f'<text x="{cfg.width / 2:.1f}" y="22" text-anchor="middle" font-size="13" '
        f'font-family="sans-serif">{escape(cfg.title)}</text>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black" stroke-width="1"/>',
        f'<line x1="{left}" y1="{_num(sy(0.0))}" x2="{left + pw}" y2="{_num(sy(0.0))}" '
        'stroke="gray" stroke-width="0.5" stroke-dasharray="4,3"/>',
    ]
    for tick in (0.0, 0.5, 1.0):
        out.append(f'<text x="{_num(sx(tick))}" y="{top + ph + 16}" text-anchor="middle" font-size="11" '
                   f'font-family="sans-serif">{tick:g}</text>')
    for tick in (ymin + pad, 0.0, ymax - pad):
        out.append(f'<text x="{left - 6}" y="{_num(sy(tick) + 4)}" text-anchor="end" font-size="11" '
                   f'font-family="sans-serif">{format_sig(tick, 3)}</text>')
    if half > 0:
        apex = sx(0.04)
        out.append(f'<polygon class="triangle" points="{_num(sx(0.0))},{_num(sy(half))} {_num(apex)},'
                   f'{_num(sy(0.0))} {_num(sx(0.0))},{_num(sy(-half))}" fill="none" stroke="black" stroke-width="1"/>')
    out.append(f'<polyline class="graph" points="{pts}" fill="none" stroke="black" stroke-width="1.2"/>')
    out.append(f'<text class="caption" x="{cfg.width / 2:.1f}" y="{cfg.height - 14}" text-anchor="middle" '
               f'font-size="12" font-family="sans-serif">{escape(caption(graph))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_ordering_scatter(covariates, scores, cfg: Optional[RenderConfig] = None, subpop=None,
                            labels=None, names=("x", "y")) -> str:
    """Two covariates as a scatter plot shaded by position along the curve.

    Later points along the curve are darker.  Subpopulation members (a boolean
    mask) are drawn large; with ``labels`` given, subpopulation 0 is blue and
    1 is red, and unlabelled rows are skipped.
    """
    cfg = cfg or RenderConfig(title="ordering along the Hilbert curve")
    x = np.asarray(covariates, dtype=float)
    if x.ndim != 2 or x.shape[1] != 2:
        raise ValueError(f"need exactly two covariate columns, got shape {x.shape}")
    s = np.asarray(getattr(scores, "scores", scores), dtype=float)
    m = x.shape[0]
    if s.shape != (m,):
        raise ValueError("one score per row is required")
    rank = np.empty(m)
    rank[np.argsort(s, kind="stable")] = np.arange(m)
    level = rank / max(m - 1, 1)
    big = np.zeros(m, dtype=bool) if subpop is None else np.asarray(subpop, dtype=bool)

    lo, hi = x.min(axis=0), x.max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    u = (x - lo) / span
    left, right, top, bottom = 50, 20, 40, 50
    pw = cfg.width - left - right
    ph = cfg.height - top - bottom

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{cfg.width}" height="{cfg.height}" '
        f'viewBox="0 0 {cfg.width} {cfg.height}">',
        f'<rect x="0" y="0" width="{cfg.width}" height="{cfg.height}" fill="white"/>',
        f'<text x="{cfg.width / 2:.1f}" y="22" text-anchor="middle" font-size="13" '
        f'font-family="sans-serif">{escape(cfg.title)}</text>',
        f'<text x="{left + pw / 2:.1f}" y="{cfg.height - 12}" text-anchor="middle" font-size="11" '
        f'font-family="sans-serif">{escape(str(names[0]))}</text>',
        f'<text x="14" y="{top + ph / 2:.1f}" text-anchor="middle" font-size="11" font-family="sans-serif" '
        f'transform="rotate(-90 14 {top + ph / 2:.1f})">{escape(str(names[1]))}</text>',
    ]
    # small points first so subpopulation members stay visible on top
    draw = sorted(range(m), key=lambda i: (bool(big[i]), rank[i]))
    for i in draw:
        if labels is not None and labels[i] not in (0, 1):
            continue
        shade = 90.0 * (1.0 - level[i])
        if labels is None:
            fill = f"rgb({shade:.6f}%,{shade:.6f}%,{shade:.6f}%)"
        elif labels[i] == 0:
            fill = f"rgb(0%,0%,{100.0 - 0.6 * (100.0 - shade):.6f}%)"
        else:
            fill = f"rgb({100.0 - 0.6 * (100.0 - shade):.6f}%,0%,0%)"
        r = 3.0 if big[i] else 1.5
        out.append(f'<circle cx="{_num(left + pw * u[i, 0])}" cy="{_num(top + ph * (1 - u[i, 1]))}" '
                   f'r="{r}" fill="{fill}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def summary(graph, kind: str, config: Optional[dict] = None) -> dict:
    """JSON-ready summary of a comparison."""
    doc = {
        "schema": SCHEMA,
        "kind": kind,
        "n": int(graph.n),
        "m": int(getattr(graph, "m", 0) or (getattr(graph, "n0", 0) + getattr(graph, "n1", 0))),
        "G": float(graph.ks),
        "H": float(graph.kuiper),
        "sigma": float(graph.sigma),
        "G_over_sigma": _finite_or_none(_ratio(graph.ks, graph.sigma)),
        "H_over_sigma": _finite_or_none(_ratio(graph.kuiper, graph.sigma)),
        "abscissae": [float(v) for v in graph.abscissae],
        "ordinates": [float(v) for v in graph.ordinates],
        "config": dict(config or {}),
    }
    if kind == "two":
        doc["n0"] = int(getattr(graph, "n0", 0))
        doc["n1"] = int(getattr(graph, "n1", 0))
    return doc


def _finite_or_none(x):
    return float(x) if math.isfinite(x) else None


def graph_from_summary(doc) -> SummaryGraph:
    if isinstance(doc, str):
        doc = json.loads(doc)
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unsupported summary schema {doc.get('schema')!r}")
    return SummaryGraph(
        abscissae=np.array(doc["abscissae"], dtype=float),
        ordinates=np.array(doc["ordinates"], dtype=float),
        sigma=float(doc["sigma"]),
        ks=float(doc["G"]),
        kuiper=float(doc["H"]),
        n=int(doc["n"]),
        m=doc.get("m"),
        kind=doc.get("kind", "full"),
    )
