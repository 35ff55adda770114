"""Reading observations from CSV, plus filters for two public datasets.

The KDD Cup 1998 and American Community Survey recipes take a raw table (a
``pandas.DataFrame`` read from the user's own download) and return a
:class:`Dataset`.  Each recipe is split in two: ``*_rows`` filters the raw
table and keeps its columns, ``*_filter`` builds the dataset from it.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import pandas as pd

__all__ = [
    "ColumnSpec",
    "Dataset",
    "IngestError",
    "MISSING",
    "acs_filter",
    "acs_rows",
    "adjustment_factor",
    "kdd_filter",
    "kdd_rows",
    "load_csv",
    "write_csv",
]

MISSING = ("", "NA", "NaN", "nan", "N/A", ".")


class IngestError(ValueError):
    """Bad input file or table.  ``rows`` holds 1-based data row numbers."""

    def __init__(self, message, column=None, rows=()):
        super().__init__(message)
        self.column = column
        self.rows = list(rows)


@dataclass
class Dataset:
    """Covariates, responses and weights for ``m`` observations.

    ``labels`` marks membership for a two-subpopulation comparison: 0 or 1,
    with -1 for rows in neither.  ``subsets`` holds named boolean masks for
    comparisons against the full population.
    """

    covariates: np.ndarray
    responses: np.ndarray
    weights: np.ndarray = None
    covariate_names: list = None
    labels: Optional[np.ndarray] = None
    subsets: dict = field(default_factory=dict)

    def __post_init__(self):
        self.covariates = np.asarray(self.covariates, dtype=float)
        if self.covariates.ndim == 1:
            self.covariates = self.covariates[:, None]
        self.responses = np.asarray(self.responses, dtype=float)
        m, p = self.covariates.shape
        if self.weights is None:
            self.weights = np.ones(m)
        self.weights = np.asarray(self.weights, dtype=float)
        if self.covariate_names is None:
            self.covariate_names = [f"x{j}" for j in range(p)]
        self.covariate_names = list(self.covariate_names)
        if self.responses.shape != (m,) or self.weights.shape != (m,):
            raise ValueError("responses and weights must have one entry per covariate row")
        if len(self.covariate_names) != p:
            raise ValueError(f"{len(self.covariate_names)} covariate names for {p} columns")
        if not np.all(self.weights > 0):
            raise ValueError("weights must be strictly positive")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=int)
            if self.labels.shape != (m,) or not np.all(np.isin(self.labels, (-1, 0, 1))):
                raise ValueError("labels must be one of -1, 0, 1 per row")
        self.subsets = {k: np.asarray(v, dtype=bool) for k, v in self.subsets.items()}

    @property
    def m(self) -> int:
        return self.covariates.shape[0]

    @property
    def p(self) -> int:
        return self.covariates.shape[1]

    def columns(self, names: Sequence[str]) -> np.ndarray:
        idx = [self.covariate_names.index(c) for c in names]
        return self.covariates[:, idx]


@dataclass
class ColumnSpec:
    covariate_columns: Sequence[str]
    # None: responses are not read and default to 0
    response_column: Optional[str] = None
    weight_column: Optional[str] = None
    label_column: Optional[str] = None
    # raw label value -> 0 or 1; anything else becomes -1
    label_values: Optional[dict] = None
    subset_columns: Sequence[str] = ()
    missing: Sequence[str] = MISSING
    delimiter: str = ","

    def __post_init__(self):
        names = list(self.covariate_columns)
        names += [c for c in (self.response_column, self.weight_column, self.label_column) if c]
        if len(set(names)) != len(names):
            raise ValueError(f"column names must be distinct: {names}")
        if not self.covariate_columns:
            raise ValueError("at least one covariate column is required")


def _parse(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        return np.nan
    return v if np.isfinite(v) else np.nan


def _numeric(frame: pd.DataFrame, column: str, missing) -> tuple[pd.Series, np.ndarray]:
    raw = frame[column].astype(str).str.strip()
    absent = raw.isin(list(missing)).to_numpy()
    # float() rounds correctly; pandas' fast parser can be off by an ulp
    values = pd.Series([_parse(v) for v in raw.where(~absent, "nan")], index=frame.index, dtype=float)
    bad = values.isna().to_numpy() & ~absent
    return values, absent | bad


def _require(frame: pd.DataFrame, columns) -> None:
    for c in columns:
        if c not in frame.columns:
            raise IngestError(f"missing column {c!r}", column=c)


def _reject(column, mask, what):
    rows = (np.flatnonzero(mask) + 1).tolist()
    shown = ", ".join(map(str, rows[:10])) + (" ..." if len(rows) > 10 else "")
    raise IngestError(f"column {column!r}: {what} in data row(s) {shown}", column=column, rows=rows)


def load_csv(path, spec: ColumnSpec) -> Dataset:
    """Read a CSV with a header row into a :class:`Dataset`.

    Rows whose covariates, response or weight are missing or non-numeric are
    rejected with their 1-based data row numbers; so are non-positive weights.
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, sep=spec.delimiter, encoding="utf-8")
    except (pd.errors.ParserError, UnicodeDecodeError) as exc:
        raise IngestError(f"cannot parse {path}: {exc}") from exc
    frame.columns = [c.strip() for c in frame.columns]
    used = [*spec.covariate_columns]
    used += [c for c in (spec.response_column, spec.weight_column, spec.label_column) if c]
    _require(frame, used + list(spec.subset_columns))

    def column(name):
        values, bad = _numeric(frame, name, spec.missing)
        if bad.any():
            _reject(name, bad, "missing or non-numeric value")
        return values.to_numpy(dtype=float)

    covariates = np.column_stack([column(c) for c in spec.covariate_columns])
    responses = column(spec.response_column) if spec.response_column else np.zeros(len(frame))
    if spec.weight_column:
        weights = column(spec.weight_column)
        if np.any(weights <= 0):
            _reject(spec.weight_column, weights <= 0, "non-positive weight")
    else:
        weights = np.ones(len(frame))

    labels = None
    if spec.label_column:
        raw = frame[spec.label_column].astype(str).str.strip()
        mapping = spec.label_values or {"0": 0, "1": 1}
        labels = np.array([mapping.get(v, -1) for v in raw], dtype=int)
    subsets = {c: _truthy(frame[c], spec.missing) for c in spec.subset_columns}
    return Dataset(
        covariates=covariates,
        responses=responses,
        weights=weights,
        covariate_names=list(spec.covariate_columns),
        labels=labels,
        subsets=subsets,
    )


def write_csv(data: Dataset, path) -> None:
    """Canonical CSV: covariates, response, weight, then label and subsets."""
    header = [*data.covariate_names, "response", "weight"]
    if data.labels is not None:
        header.append("label")
    names = sorted(data.subsets)
    header += names
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(header)
        for i in range(data.m):
            row = [repr(float(v)) for v in data.covariates[i]]
            row += [repr(float(data.responses[i])), repr(float(data.weights[i]))]
            if data.labels is not None:
                row.append(str(int(data.labels[i])))
            row += [str(int(data.subsets[k][i])) for k in names]
            out.writerow(row)


def _truthy(series: pd.Series, missing=MISSING) -> np.ndarray:
    raw = series.astype(str).str.strip()
    num = pd.to_numeric(raw, errors="coerce")
    flag = np.where(num.notna(), num.fillna(0) != 0, ~raw.isin(list(missing)) & ~raw.str.lower().isin(["false", "no"]))
    return np.asarray(flag, dtype=bool)


def _present(frame: pd.DataFrame, column: str, missing) -> np.ndarray:
    if pd.api.types.is_numeric_dtype(frame[column]):
        return frame[column].notna().to_numpy()
    values, bad = _numeric(frame, column, missing)
    return ~bad


KDD_COVARIATES = ("AGE", "IC3", "MARR1")


def kdd_rows(raw: pd.DataFrame, folding_col: str, normal_col: str, response_col: str = "TARGET_B",
             covariates: Sequence[str] = KDD_COVARIATES, missing=MISSING) -> pd.DataFrame:
    """Rows with all covariates present that received at least one mailing type.

    Which raw columns flag the folding-card and normal-card mailings depends
    on the user's extract, so both are parameters.
    """
    _require(raw, [*covariates, folding_col, normal_col, response_col])
    keep = np.ones(len(raw), dtype=bool)
    for c in covariates:
        keep &= _present(raw, c, missing)
    mailed = _truthy(raw[folding_col], missing) | _truthy(raw[normal_col], missing)
    return raw.loc[keep & mailed]


def kdd_filter(raw: pd.DataFrame, folding_col: str, normal_col: str, response_col: str = "TARGET_B",
               covariates: Sequence[str] = KDD_COVARIATES, missing=MISSING) -> Dataset:
    """KDD Cup 1998 mailing experiment as a :class:`Dataset`.

    Subsets ``folding``, ``normal`` and ``both`` are the exclusive mailing
    groups; labels are 0 for folding only, 1 for normal only, -1 for both.
    """
    rows = kdd_rows(raw, folding_col, normal_col, response_col, covariates, missing)
    fold = _truthy(rows[folding_col], missing)
    norm = _truthy(rows[normal_col], missing)
    covs = np.column_stack([_numeric(rows, c, missing)[0].to_numpy(dtype=float) for c in covariates])
    labels = np.where(fold & ~norm, 0, np.where(norm & ~fold, 1, -1))
    return Dataset(
        covariates=covs,
        responses=_truthy(rows[response_col], missing).astype(float),
        covariate_names=list(covariates),
        labels=labels,
        subsets={"folding": fold & ~norm, "normal": norm & ~fold, "both": fold & norm},
    )


def adjustment_factor(adjinc) -> np.ndarray:
    """Income adjustment factor; integer codes like 1010145 mean 1.010145."""
    a = np.asarray(adjinc, dtype=float)
    return np.where(a > 100, a / 1e6, a)


def acs_rows(raw: pd.DataFrame, county_col: str = "COUNTY", missing=MISSING) -> pd.DataFrame:
    """Households with positive weight, positive income and a known adjustment."""
    _require(raw, ["WGTP", "HINCP", "ADJINC", "MV", "NOC", county_col])
    wgtp, bad_w = _numeric(raw, "WGTP", missing)
    hincp, bad_h = _numeric(raw, "HINCP", missing)
    keep = ~bad_w & (wgtp.fillna(0).to_numpy() > 0)
    # zero income is dropped; negative income too, as its log is undefined
    keep &= ~bad_h & (hincp.fillna(0).to_numpy() > 0)
    keep &= _present(raw, "ADJINC", missing)
    return raw.loc[keep]


def acs_filter(raw: pd.DataFrame, response_col: str, county: Optional[object] = None,
               county_col: str = "COUNTY", controls: Sequence[str] = ("MV", "NOC"),
               missing=MISSING) -> Dataset:
    """American Community Survey households as a weighted :class:`Dataset`.

    Covariates are ``log_income`` (log of HINCP times the adjustment factor)
    followed by ``controls``.  Rows missing the response or a control are
    dropped.  With ``county`` given, subset ``county`` marks its households.
    """
    rows = acs_rows(raw, county_col, missing)
    _require(rows, [response_col, *controls])
    keep = _present(rows, response_col, missing)
    for c in controls:
        keep &= _present(rows, c, missing)
    rows = rows.loc[keep]
    num = lambda c: _numeric(rows, c, missing)[0].to_numpy(dtype=float)  # noqa: E731
    income = num("HINCP") * adjustment_factor(num("ADJINC"))
    covs = np.column_stack([np.log(income), *[num(c) for c in controls]])
    subsets = {}
    if county is not None:
        subsets["county"] = (rows[county_col].astype(str).str.strip() == str(county)).to_numpy()
    return Dataset(
        covariates=covs,
        responses=num(response_col),
        weights=num("WGTP"),
        covariate_names=["log_income", *controls],
        subsets=subsets,
    )
