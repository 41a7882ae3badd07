"""Run the four-method battery over every (outcome, region, indicator) cell.

A matrix never fails atomically: each cell either holds a method result or
a machine-readable skip tag, and their counts always add up to the grid
size. Output order is fixed by the configuration regardless of how cells
are computed.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, fields

from .errors import (
    ConfigError,
    DegenerateInputError,
    InsufficientDataError,
    InsufficientOverlapError,
    NonContiguousYearsError,
    ParseError,
    SingularDesignError,
)
from .info import (
    DEFAULT_MIC_ALPHA,
    DEFAULT_MIC_CLUMPS,
    MIC_NORMALIZATIONS,
    STRATEGIES,
    MicResult,
    MutualInfoResult,
    default_mi_bins,
    mic,
    mutual_information,
)
from .linear import PearsonResult, pearson
from .panel import (
    BUILTIN_INDICATORS,
    DEFAULT_MIN_OVERLAP,
    AgeGroup,
    PanelDataset,
    age_group_of_code,
    align_pair,
    _classify_code,
)
from .temporal import GrangerResult, lag_sweep

logger = logging.getLogger(__name__)

METHODS = ("pearson", "mutual_information", "granger", "mic")

SKIP_MISSING_SERIES = "missing-series"
SKIP_INSUFFICIENT_OVERLAP = "insufficient-overlap"
SKIP_DEGENERATE = "degenerate-input"
SKIP_NON_CONTIGUOUS = "non-contiguous-years"
SKIP_INSUFFICIENT_DATA = "insufficient-data"
SKIP_SINGULAR = "singular-design"

_BUILTIN_ORDER = {ind.code: i for i, ind in enumerate(BUILTIN_INDICATORS)}


@dataclass(frozen=True)
class BatteryConfig:
    """Everything a battery run depends on, echoed into every export.

    Empty outcome/indicator tuples are rejected at validation time; the
    CLI fills them from the dataset (every burden code, every other code)
    before running.
    """

    methods: tuple[str, ...] = METHODS
    outcomes: tuple[str, ...] = ()
    indicators: tuple[str, ...] = ()
    min_overlap: int = DEFAULT_MIN_OVERLAP
    max_lag: int = 5
    difference_first: bool = False
    granger_reverse: bool = False
    mi_bins: int | None = None
    mi_strategy: str = "equal-frequency"
    mic_alpha: float = DEFAULT_MIC_ALPHA
    mic_clumps: int = DEFAULT_MIC_CLUMPS
    mic_normalization: str = "min-entropy-grid"

    @classmethod
    def from_dict(cls, doc: dict) -> "BatteryConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        doc = dict(doc)
        for key in ("methods", "outcomes", "indicators"):
            if key in doc:
                doc[key] = tuple(doc[key])
        try:
            return cls(**doc)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def from_file(cls, path) -> "BatteryConfig":
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"config is not valid JSON: {exc}") from None
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object of key/value pairs")
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        return {
            f.name: list(v) if isinstance(v := getattr(self, f.name), tuple) else v
            for f in fields(self)
        }

    def validate(self, dataset: PanelDataset) -> None:
        """Reject bad configurations before any cell is computed."""
        if not self.methods:
            raise ConfigError("config selects no methods")
        bad = [m for m in self.methods if m not in METHODS]
        if bad:
            raise ConfigError(f"unknown methods {bad}; choose from {METHODS}")
        if not self.outcomes:
            raise ConfigError("config selects no outcome codes")
        if not self.indicators:
            raise ConfigError("config selects no indicator codes")
        known = set(dataset.codes())
        missing = [c for c in (*self.outcomes, *self.indicators) if c not in known]
        if missing:
            raise ConfigError(f"codes not present in the dataset: {missing}")
        if self.min_overlap < 3:
            raise ConfigError(f"min_overlap must be >= 3, got {self.min_overlap}")
        if self.max_lag < 1:
            raise ConfigError(f"max_lag must be >= 1, got {self.max_lag}")
        if self.mi_strategy not in STRATEGIES:
            raise ConfigError(f"mi_strategy must be one of {STRATEGIES}")
        if self.mi_bins is not None and self.mi_bins < 2:
            raise ConfigError(f"mi_bins must be >= 2, got {self.mi_bins}")
        if self.mic_normalization not in MIC_NORMALIZATIONS:
            raise ConfigError(
                f"mic_normalization must be one of {MIC_NORMALIZATIONS}"
            )
        if not 0.0 < self.mic_alpha <= 1.0:
            raise ConfigError(f"mic_alpha must be in (0, 1], got {self.mic_alpha}")
        if self.mic_clumps < 1:
            raise ConfigError(f"mic_clumps must be >= 1, got {self.mic_clumps}")


@dataclass(frozen=True)
class MatrixCell:
    """One computed cell: the method result plus its aligned sample size."""

    n: int
    result: PearsonResult | MutualInfoResult | GrangerResult | MicResult


@dataclass
class ResultMatrix:
    """Regions x indicators grid of one method's results for one outcome."""

    method: str
    age_group: AgeGroup
    outcome: str
    rows: tuple[str, ...]
    cols: tuple[str, ...]
    cells: dict[tuple[str, str], MatrixCell] = field(default_factory=dict)
    skips: dict[tuple[str, str], str] = field(default_factory=dict)

    def complete(self) -> bool:
        return len(self.cells) + len(self.skips) == len(self.rows) * len(self.cols)


def canonical_columns(codes) -> tuple[str, ...]:
    """Built-in codes in registry order first, then the rest as given."""
    codes = list(codes)
    builtin = sorted((c for c in codes if c in _BUILTIN_ORDER),
                     key=_BUILTIN_ORDER.__getitem__)
    return tuple(builtin + [c for c in codes if c not in _BUILTIN_ORDER])


def _compute_cell(method: str, pair, config: BatteryConfig) -> MatrixCell:
    if method == "pearson":
        return MatrixCell(pair.n, pearson(pair))
    if method == "mutual_information":
        bins = config.mi_bins or default_mi_bins(pair.n)
        return MatrixCell(pair.n, mutual_information(pair, bins, config.mi_strategy))
    if method == "mic":
        return MatrixCell(pair.n, mic(pair, config.mic_alpha, config.mic_clumps,
                                      config.mic_normalization))
    if method == "granger":
        directed = pair.swapped() if config.granger_reverse else pair
        sweep = lag_sweep(directed, config.max_lag, config.difference_first)
        return MatrixCell(pair.n, sweep.best)
    raise ConfigError(f"unknown method {method!r}")


_SKIP_TAGS = (
    (InsufficientOverlapError, SKIP_INSUFFICIENT_OVERLAP),
    (DegenerateInputError, SKIP_DEGENERATE),
    (NonContiguousYearsError, SKIP_NON_CONTIGUOUS),
    (InsufficientDataError, SKIP_INSUFFICIENT_DATA),
    (SingularDesignError, SKIP_SINGULAR),
)
_SKIP_EXCEPTIONS = tuple(err for err, _ in _SKIP_TAGS)


def run_battery(dataset: PanelDataset, config: BatteryConfig) -> list[ResultMatrix]:
    """One ResultMatrix per configured method and outcome.

    Deterministic for a fixed (dataset, config): matrices come out in
    method-major, outcome-minor configuration order, rows in dataset
    region order, columns in canonical indicator order.
    """
    config.validate(dataset)
    cols = canonical_columns(config.indicators)
    matrices: list[ResultMatrix] = []
    for method in config.methods:
        for outcome in config.outcomes:
            matrix = ResultMatrix(
                method=method,
                age_group=age_group_of_code(outcome),
                outcome=outcome,
                rows=dataset.regions,
                cols=cols,
            )
            for region in matrix.rows:
                outcome_series = dataset.series(region, outcome)
                for code in cols:
                    indicator_series = dataset.series(region, code)
                    key = (region, code)
                    if outcome_series is None or indicator_series is None:
                        matrix.skips[key] = SKIP_MISSING_SERIES
                        continue
                    try:
                        pair = align_pair(indicator_series, outcome_series,
                                          config.min_overlap)
                        matrix.cells[key] = _compute_cell(method, pair, config)
                    except _SKIP_EXCEPTIONS as exc:
                        for err_type, tag in _SKIP_TAGS:
                            if isinstance(exc, err_type):
                                matrix.skips[key] = tag
                                break
            logger.debug(
                "%s / %s: %d cells, %d skips",
                method, outcome, len(matrix.cells), len(matrix.skips),
            )
            matrices.append(matrix)
    return matrices


def summarize_lags(matrices) -> dict[tuple[str, str], dict[int, int]]:
    """Best-lag counts per (indicator category, outcome), pooled over
    regions and over the indicators in each category."""
    summary: dict[tuple[str, str], dict[int, int]] = {}
    for matrix in matrices:
        if matrix.method != "granger":
            raise TypeError(
                f"lag summary needs granger matrices, got {matrix.method!r}"
            )
        for (_, code), cell in matrix.cells.items():
            category = _classify_code(code).category
            lags = summary.setdefault((category, matrix.outcome), {})
            lag = cell.result.lag
            lags[lag] = lags.get(lag, 0) + 1
    return {
        key: dict(sorted(summary[key].items()))
        for key in sorted(summary)
    }
