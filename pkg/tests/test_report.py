import json
import re

import numpy as np
import pytest

from hilbertcum.compare import compare_full, score_covariates
from hilbertcum.hilbert import CurveParams, decode_index
from hilbertcum.report import (
    TRIANGLE_MULTIPLIER,
    RenderConfig,
    SummaryGraph,
    caption,
    format_sig,
    graph_from_summary,
    render_graph,
    render_ordering_scatter,
    summary,
)
from oracles import sup_brownian_cdf


def graph(a, c, sigma, n=None):
    c = np.asarray(c, dtype=float)
    ks = float(np.max(np.abs(c)))
    h = float(max(0, c.max()) - min(0, c.min()))
    return SummaryGraph(np.asarray(a, dtype=float), c, sigma, ks, h, n or len(c))


def polyline(svg):
    pts = re.search(r'<polyline class="graph" points="([^"]*)"', svg).group(1).split()
    return [tuple(map(float, p.split(","))) for p in pts]


def test_format_sig():
    assert format_sig(5) == "5.000"
    assert format_sig(0.39237) == "0.3924"
    assert format_sig(15.663) == "15.66"
    assert format_sig(float("nan")) == "n/a"


def test_caption_ratio():
    assert "G/σ = 5.000" in caption(graph([1.0], [0.25], 0.05))
    assert "not applicable" in caption(graph([1.0], [0.25], 0.0))


def test_zero_graph_is_flat():
    pts = polyline(render_graph(graph([0.25, 0.5, 0.75, 1.0], [0, 0, 0, 0], 0.0)))
    assert len(pts) == 5 and len({y for _, y in pts}) == 1


def test_single_point_graph():
    svg = render_graph(graph([1.0], [0.25], 0.1))
    pts = polyline(svg)
    assert len(pts) == 2 and pts[1][0] > pts[0][0] and pts[1][1] < pts[0][1]


def test_triangle_only_with_sigma():
    assert 'class="triangle"' in render_graph(graph([1.0], [0.25], 0.1))
    assert 'class="triangle"' not in render_graph(graph([1.0], [0.25], 0.0))


def test_triangle_multiplier_is_the_sup_brownian_quantile():
    assert sup_brownian_cdf(TRIANGLE_MULTIPLIER) == pytest.approx(0.95, abs=1e-4)


def test_json_round_trip_is_byte_stable():
    rng = np.random.default_rng(1)
    x = rng.uniform(size=(300, 2))
    r = (rng.uniform(size=300) < 0.5).astype(float)
    g = compare_full(x, r, rng.uniform(size=300) < 0.2)
    cfg = RenderConfig(title="t", triangle_multiplier=2.0)
    doc = json.loads(json.dumps(summary(g, "full", g.extra)))
    assert doc["G"] == g.ks and doc["n"] == g.n and doc["m"] == 300
    assert render_graph(graph_from_summary(doc), cfg) == render_graph(g, cfg)
    with pytest.raises(ValueError):
        graph_from_summary({**doc, "schema": "other"})


def test_sigma_zero_summary_uses_null():
    doc = summary(graph([1.0], [0.25], 0.0), "full")
    assert doc["G_over_sigma"] is None
    json.dumps(doc, allow_nan=False)


def fills(svg):
    out = []
    for m in re.finditer(r'<circle cx="([^"]+)" cy="([^"]+)" r="([^"]+)" fill="rgb\(([^%]+)%', svg):
        out.append((float(m.group(1)), float(m.group(2)), float(m.group(3)), float(m.group(4))))
    return out


def test_scatter_intensity_follows_rank():
    rng = np.random.default_rng(2)
    x = rng.uniform(size=(100, 2))
    sv = score_covariates(x)
    circles = fills(render_ordering_scatter(x, sv))
    shade = [c[3] for c in circles]
    # drawn in rank order, getting darker
    assert all(b < a for a, b in zip(shade, shade[1:]))
    assert {c[2] for c in circles} == {1.5}


def test_scatter_grid_follows_curve():
    side = 8
    pts = np.array([(i, j) for i in range(side) for j in range(side)], dtype=float)
    sv = score_covariates(pts, jitter_rel=0, bits_per_dim=3)
    circles = fills(render_ordering_scatter(pts, sv, RenderConfig(width=500, height=500)))
    circles.sort(key=lambda c: -c[3])
    cells = [(round((c[0] - 50) / 430 * 7), round((1 - (c[1] - 40) / 410) * 7)) for c in circles]
    assert all(abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1 for a, b in zip(cells, cells[1:]))
    assert cells == [decode_index(CurveParams(2, 3), k) for k in range(side * side)]


def test_scatter_marks_subpopulation_and_labels():
    x = np.array([[0, 0], [1, 0], [0, 1], [1, 1.0]])
    s = np.array([0.0, 0.3, 0.6, 1.0])
    sizes = sorted(c[2] for c in fills(render_ordering_scatter(x, s, subpop=[True, False, False, False])))
    assert sizes == [1.5, 1.5, 1.5, 3.0]
    svg = render_ordering_scatter(x, s, labels=np.array([0, 1, -1, 0]))
    assert svg.count("<circle") == 3


def test_scatter_wrong_columns():
    with pytest.raises(ValueError):
        render_ordering_scatter(np.zeros((4, 3)), np.arange(4.0))
