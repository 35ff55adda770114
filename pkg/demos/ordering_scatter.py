"""
What the Hilbert ordering looks like
====================================

Shade each point by its position along the curve: light points come first,
dark points last.  On a regular grid the shading walks cell to cell without
ever jumping; on random points, neighbours in the plane mostly get
neighbouring scores.

Usage: python demos/ordering_scatter.py [output-directory]
"""
import sys
from pathlib import Path

import numpy as np

from hilbertcum import RenderConfig, render_ordering_scatter, score_covariates

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(exist_ok=True)

# A 16 x 16 grid scored at 4 bits per axis gets exactly the curve's order.
side = 16
grid = np.array([(i, j) for i in range(side) for j in range(side)], dtype=float)
sv = score_covariates(grid, jitter_rel=0, bits_per_dim=4)
path = grid[sv.permutation].astype(int)
steps = np.abs(np.diff(path, axis=0)).sum(axis=1)
print(f"grid: {len(steps)} steps, all of length one: {bool(np.all(steps == 1))}")
(out / "ordering_grid.svg").write_text(
    render_ordering_scatter(grid, sv, RenderConfig(title="16 x 16 grid", width=420, height=420)))

# Random points, with a random fifth of them drawn large as a subpopulation.
rng = np.random.default_rng(1)
x = rng.uniform(size=(2000, 2))
sv = score_covariates(x)
sub = rng.uniform(size=2000) < 0.2
(out / "ordering_random.svg").write_text(render_ordering_scatter(x, sv, subpop=sub, names=("x0", "x1")))

# Locality in numbers: score gaps between consecutive points along the curve
# against their distance in the plane.
order = sv.permutation
near = np.linalg.norm(np.diff(x[order], axis=0), axis=1)
print(f"median planar distance between curve neighbours: {np.median(near):.4f}")
print(f"median planar distance between random pairs:     "
      f"{np.median(np.linalg.norm(x - x[rng.permutation(2000)], axis=1)):.4f}")
print(f"plots written to {out}/")
