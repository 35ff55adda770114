"""Comparing subpopulations while conditioning on several covariates.

Covariate vectors are ordered along a Hilbert space-filling curve, and the
resulting scalar scores feed cumulative-difference graphs summarized by
Kolmogorov-Smirnov and Kuiper statistics.
"""
from .compare import compare_full, compare_two, score_covariates
from .cumstat_full import (
    CumulativeGraphFull,
    FullComparisonInput,
    bin_full_population,
    cumulative_graph_full,
    ks_kuiper,
    sigma_full,
)
from .cumstat_two import (
    Block,
    CumulativeGraphTwo,
    PairedDifferences,
    build_blocks,
    compare_blocks,
    cumulative_graph_two,
    pair_differences,
    sigma_two,
)
from .hilbert import CurveParams, decode_index, decode_points, encode_point, encode_points
from .ingest import ColumnSpec, Dataset, acs_filter, kdd_filter, load_csv, write_csv
from .report import (
    RenderConfig,
    caption,
    graph_from_summary,
    render_graph,
    render_ordering_scatter,
    summary,
)
from .scores import ScoreVector, apply_jitter, hilbert_scores, normalize
from .synth import SynthConfig, generate

__version__ = "0.1.0"
