"""Synthetic populations with a known deviation (or none).

Covariates are i.i.d. uniform on (-1, 1) mapped to (0, 1); responses are the
unit step of the projection onto a random Gaussian direction, so about half
the population responds.  The subpopulation is a uniform random subset,
optionally forced to respond always.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ingest import Dataset

__all__ = ["SynthConfig", "generate"]


@dataclass(frozen=True)
class SynthConfig:
    m: int = 1000
    n: int = 100
    p: int = 2
    seed: int = 0
    force_subpop_ones: bool = True

    def __post_init__(self):
        if not 1 <= self.n < self.m:
            raise ValueError(f"need 1 <= n < m, got n={self.n}, m={self.m}")
        if self.p < 1:
            raise ValueError(f"p must be positive, got {self.p}")


def generate(config: SynthConfig) -> tuple[Dataset, np.ndarray]:
    """Draw one synthetic dataset; returns it with the sorted subpopulation rows."""
    rng = np.random.Generator(np.random.PCG64(config.seed))
    m, p = config.m, config.p
    a = rng.uniform(-1.0, 1.0, size=(m, p))
    v = rng.standard_normal(p)
    proj = a @ v
    # the step function is undefined at exactly 0; redraw such rows
    while np.any(proj == 0):
        bad = proj == 0
        a[bad] = rng.uniform(-1.0, 1.0, size=(int(bad.sum()), p))
        proj = a @ v
    responses = (proj > 0).astype(float)
    subpop = np.sort(rng.choice(m, size=config.n, replace=False))
    if config.force_subpop_ones:
        responses[subpop] = 1.0
    flags = np.zeros(m, dtype=bool)
    flags[subpop] = True
    data = Dataset(
        covariates=(a + 1) / 2,
        responses=responses,
        weights=np.ones(m),
        covariate_names=[f"x{j}" for j in range(p)],
        subsets={"subpop": flags},
    )
    return data, subpop
