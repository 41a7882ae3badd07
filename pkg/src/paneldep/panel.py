"""Panel model: regions x indicator codes x calendar years.

Heterogeneous annual series (wide indicator CSVs, long outcome CSVs) are
normalized into a single :class:`PanelDataset`. Alignment of two series
onto their jointly populated years (pairwise deletion) is the entry point
for every pairwise method in the battery.
"""

from __future__ import annotations

import csv
import difflib
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources

from .errors import (
    DomainError,
    DuplicateKeyError,
    InsufficientOverlapError,
    MappingError,
    NotFoundError,
    ParseError,
)

CATEGORIES = ("Economic", "Education", "Society", "Technology", "MentalHealth")

DEFAULT_REGION = "global"

#: Minimum jointly populated years unless the caller overrides it; below
#: roughly ten annual points the lagged and grid-based methods are noise.
DEFAULT_MIN_OVERLAP = 10


class AgeGroup(Enum):
    """The three age strata an outcome series may carry."""

    AGE_20_39 = "20-39"
    AGE_40_PLUS = "40+"
    ALL_AGES = "all"


_AGE_ALIASES = {
    "20-39": AgeGroup.AGE_20_39,
    "20-39 years": AgeGroup.AGE_20_39,
    "20 to 39": AgeGroup.AGE_20_39,
    "40+": AgeGroup.AGE_40_PLUS,
    "40+ years": AgeGroup.AGE_40_PLUS,
    "40 plus": AgeGroup.AGE_40_PLUS,
    "all": AgeGroup.ALL_AGES,
    "all ages": AgeGroup.ALL_AGES,
}


def parse_age_group(text: str) -> AgeGroup:
    """Map an age-group string from an input file onto an AgeGroup."""
    try:
        return _AGE_ALIASES[text.strip().lower()]
    except KeyError:
        raise MappingError(
            f"unknown age group {text!r}; expected one of "
            f"{sorted(set(_AGE_ALIASES))}"
        ) from None


@dataclass(frozen=True)
class IndicatorCode:
    code: str
    name: str
    category: str
    units: str

    def __post_init__(self):
        if self.category not in CATEGORIES:
            raise DomainError(
                f"category {self.category!r} not in {CATEGORIES}"
            )


#: The built-in socioeconomic indicator registry. Callers may add their own
#: codes on top; these eighteen are the canonical set.
BUILTIN_INDICATORS = (
    IndicatorCode("E1", "GDP", "Economic", "Current US$"),
    IndicatorCode("E2", "GDP per capita", "Economic", "Current US$"),
    IndicatorCode("E3", "Inflation, consumer prices", "Economic", "%"),
    IndicatorCode("E4", "Employment in industry", "Economic", "%"),
    IndicatorCode("E5", "Employment in services", "Economic", "%"),
    IndicatorCode("E6", "Employment in agriculture", "Economic", "%"),
    IndicatorCode("ED1", "School enrollment, primary", "Education", "%"),
    IndicatorCode("ED2", "School enrollment, secondary", "Education", "%"),
    IndicatorCode("ED3", "School enrollment, tertiary", "Education", "%"),
    IndicatorCode("ED4", "Government expenditure on education, total", "Education", "%"),
    IndicatorCode("S1", "Life expectancy at birth, total", "Society", "Years"),
    IndicatorCode("S2", "Unemployment, total", "Society", "%"),
    IndicatorCode("S3", "Prevalence of undernourishment", "Society", "%"),
    IndicatorCode("T1", "Individuals using the Internet", "Technology", "%"),
    IndicatorCode("T2", "Mobile cellular subscriptions", "Technology", "per 100 people"),
    IndicatorCode("T3", "Fixed broadband subscriptions", "Technology", "per 100 people"),
    IndicatorCode("T4", "Secure Internet servers", "Technology", "per 1 million people"),
    IndicatorCode("T5", "ICT goods exports", "Technology", "%"),
)

_BY_CODE = {ind.code: ind for ind in BUILTIN_INDICATORS}
_BY_NAME = {ind.name.lower(): ind for ind in BUILTIN_INDICATORS}


def indicator_lookup(key: str) -> IndicatorCode:
    """Resolve a built-in indicator by code ("E2") or full name.

    Name matching is case-insensitive. Unknown keys raise NotFoundError
    carrying the nearest known codes/names.
    """
    if key in _BY_CODE:
        return _BY_CODE[key]
    low = key.strip().lower()
    if low in _BY_NAME:
        return _BY_NAME[low]
    if low.upper() in _BY_CODE:
        return _BY_CODE[low.upper()]
    universe = list(_BY_CODE) + [ind.name for ind in BUILTIN_INDICATORS]
    nearest = difflib.get_close_matches(key, universe, n=3, cutoff=0.3)
    raise NotFoundError(
        f"unknown indicator {key!r}" + (f"; nearest: {nearest}" if nearest else ""),
        nearest=nearest,
    )


def _classify_code(code: str) -> IndicatorCode:
    """Build an IndicatorCode for a code outside the built-in registry.

    Outcome codes produced by the long-format parser look like
    "cause|measure|age" and always land in MentalHealth; anything else is
    classified by code prefix, falling back to MentalHealth.
    """
    if code in _BY_CODE:
        return _BY_CODE[code]
    if "|" in code:
        cause, _, rest = code.partition("|")
        measure, _, age = rest.partition("|")
        name = f"{cause} ({measure}, ages {age})" if age else code
        return IndicatorCode(code, name, "MentalHealth", measure or "")
    for prefix, category in (("ED", "Education"), ("E", "Economic"),
                             ("S", "Society"), ("T", "Technology")):
        if code.startswith(prefix):
            return IndicatorCode(code, code, category, "")
    return IndicatorCode(code, code, "MentalHealth", "")


def age_group_of_code(code: str) -> AgeGroup:
    """Age stratum encoded in an outcome code; AllAges when not encoded."""
    if "|" in code:
        tag = code.rsplit("|", 1)[1]
        for group in AgeGroup:
            if group.value == tag:
                return group
    return AgeGroup.ALL_AGES


@dataclass(frozen=True)
class AnnualSeries:
    """Calendar years and one optional value per year."""

    years: tuple[int, ...]
    values: tuple[float | None, ...]

    def __post_init__(self):
        if len(self.years) != len(self.values):
            raise DomainError("years and values differ in length")
        if any(b <= a for a, b in zip(self.years, self.years[1:])):
            raise DomainError("years must be strictly increasing")
        if all(v is None for v in self.values):
            raise DomainError("series has no values at all")

    def present(self) -> dict[int, float]:
        """Year -> value for the non-missing entries, in year order."""
        return {y: v for y, v in zip(self.years, self.values) if v is not None}

    @property
    def n_present(self) -> int:
        return sum(v is not None for v in self.values)


@dataclass(frozen=True)
class AlignedPair:
    """Two gap-free value sequences over the same years."""

    x: tuple[float, ...]
    y: tuple[float, ...]
    years: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.years)

    def swapped(self) -> "AlignedPair":
        return AlignedPair(self.y, self.x, self.years)


def align_pair(a: AnnualSeries, b: AnnualSeries,
               min_overlap: int = DEFAULT_MIN_OVERLAP) -> AlignedPair:
    """Restrict two series to the years where both have values.

    Raises InsufficientOverlapError (carrying the actual count) when fewer
    than ``min_overlap`` jointly populated years remain.
    """
    if min_overlap < 3:
        raise DomainError(f"min_overlap must be >= 3, got {min_overlap}")
    pa, pb = a.present(), b.present()
    common = [y for y in pa if y in pb]
    if len(common) < min_overlap:
        raise InsufficientOverlapError(
            f"only {len(common)} jointly populated years, need {min_overlap}",
            overlap=len(common),
        )
    return AlignedPair(
        x=tuple(pa[y] for y in common),
        y=tuple(pb[y] for y in common),
        years=tuple(common),
    )


@dataclass
class PanelDataset:
    """Immutable-by-convention panel of (region, code) -> AnnualSeries."""

    regions: tuple[str, ...]
    indicators: tuple[IndicatorCode, ...]
    cells: dict[tuple[str, str], AnnualSeries] = field(default_factory=dict)

    def __post_init__(self):
        known = {ind.code for ind in self.indicators}
        for region, code in self.cells:
            if code not in known:
                raise DomainError(f"cell code {code!r} not in indicator list")
            if region not in self.regions:
                raise DomainError(f"cell region {region!r} not in region list")

    def codes(self) -> tuple[str, ...]:
        return tuple(ind.code for ind in self.indicators)

    def indicator(self, code: str) -> IndicatorCode:
        for ind in self.indicators:
            if ind.code == code:
                return ind
        raise NotFoundError(f"code {code!r} not in dataset")

    def series(self, region: str, code: str) -> AnnualSeries | None:
        return self.cells.get((region, code))

    def restrict_region(self, region: str) -> "PanelDataset":
        if region not in self.regions:
            raise NotFoundError(f"region {region!r} not in dataset")
        cells = {k: v for k, v in self.cells.items() if k[0] == region}
        keep = {code for _, code in cells}
        return PanelDataset(
            regions=(region,),
            indicators=tuple(i for i in self.indicators if i.code in keep),
            cells=cells,
        )

    def merge(self, other: "PanelDataset") -> "PanelDataset":
        """Union of two panels, e.g. indicator series plus outcome series.

        Region and code order: self first, then whatever ``other`` adds.
        A (region, code) pair present in both is a duplicate-key error.
        """
        overlap = self.cells.keys() & other.cells.keys()
        if overlap:
            raise DuplicateKeyError(
                f"series present in both panels: {sorted(overlap)[:3]}"
            )
        regions = list(self.regions)
        regions += [r for r in other.regions if r not in regions]
        known = {i.code for i in self.indicators}
        indicators = list(self.indicators)
        indicators += [i for i in other.indicators if i.code not in known]
        return PanelDataset(tuple(regions), tuple(indicators),
                            {**self.cells, **other.cells})

    # -- serialization ----------------------------------------------------

    def to_json(self) -> str:
        """Canonical full-fidelity snapshot; see from_json for the inverse."""
        doc = {
            "regions": list(self.regions),
            "indicators": [
                {"code": i.code, "name": i.name,
                 "category": i.category, "units": i.units}
                for i in self.indicators
            ],
            "cells": [
                {
                    "region": region,
                    "code": code,
                    "years": list(s.years),
                    "values": list(s.values),
                }
                for (region, code), s in self.cells.items()
            ],
        }
        return json.dumps(doc, indent=1, sort_keys=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "PanelDataset":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"panel snapshot is not valid JSON: {exc}") from None
        try:
            indicators = tuple(
                IndicatorCode(d["code"], d["name"], d["category"], d["units"])
                for d in doc["indicators"]
            )
            cells = {
                (c["region"], c["code"]): AnnualSeries(
                    tuple(c["years"]),
                    tuple(None if v is None else float(v) for v in c["values"]),
                )
                for c in doc["cells"]
            }
            return cls(tuple(doc["regions"]), indicators, cells)
        except (KeyError, TypeError) as exc:
            raise ParseError(f"panel snapshot missing field: {exc}") from None

    def to_wdi_csv(self) -> str:
        """Wide CSV over the union of all years; missing marker "-"."""
        all_years = sorted({y for s in self.cells.values() for y in s.years})
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["code", "region"] + [str(y) for y in all_years])
        for ind in self.indicators:
            for region in self.regions:
                s = self.cells.get((region, ind.code))
                if s is None:
                    continue
                present = s.present()
                row = [ind.code, region]
                for y in all_years:
                    v = present.get(y)
                    row.append("-" if v is None else repr(v))
                writer.writerow(row)
        return out.getvalue()

    def fingerprint(self) -> str:
        """Content hash of the canonical snapshot (reproducibility anchor)."""
        return hashlib.sha256(self.to_json().encode()).hexdigest()


def _parse_number(cell: str, line_no: int, col_name: str) -> float | None:
    cell = cell.strip()
    if cell in ("-", ""):
        return None
    try:
        value = float(cell)
    except ValueError:
        raise ParseError(
            f"line {line_no}, column {col_name!r}: {cell!r} is not numeric "
            f"and not the missing marker '-'"
        ) from None
    if math.isnan(value) or math.isinf(value):
        raise ParseError(f"line {line_no}, column {col_name!r}: non-finite value")
    return value


def parse_wdi_wide(text: str, default_region: str = DEFAULT_REGION) -> PanelDataset:
    """Parse a wide indicator CSV: code [, region], then one column per year.

    The region column is optional; rows without it are assigned
    ``default_region``. Missing cells are "-" or empty.
    """
    reader = csv.reader(io.StringIO(text))
    rows = []
    for row in reader:
        if row and any(f.strip() for f in row):
            rows.append((reader.line_num, row))
    if not rows:
        raise ParseError("no header: input is empty")
    header = rows[0][1]
    if len(header) < 2:
        raise ParseError("line 1: header needs a code column and year columns")
    has_region = not _looks_like_year(header[1])
    first_year_col = 2 if has_region else 1
    years = []
    for idx, cell in enumerate(header[first_year_col:], start=first_year_col):
        if not _looks_like_year(cell):
            raise ParseError(
                f"line 1: header column {idx + 1} is {cell.strip()!r}, "
                f"expected a four-digit year"
            )
        years.append(int(cell.strip()))
    if not years:
        raise ParseError("line 1: header contains no year columns")
    if any(b <= a for a, b in zip(years, years[1:])):
        raise ParseError("line 1: year columns must be strictly increasing")

    regions: list[str] = []
    indicators: list[IndicatorCode] = []
    seen_codes: set[str] = set()
    cells: dict[tuple[str, str], AnnualSeries] = {}
    for line_no, row in rows[1:]:
        if len(row) != len(header):
            raise ParseError(
                f"line {line_no}: {len(row)} fields, header has {len(header)}"
            )
        code = row[0].strip()
        if not code:
            raise ParseError(f"line {line_no}: empty indicator code")
        region = row[1].strip() if has_region else default_region
        region = region or default_region
        key = (region, code)
        if key in cells:
            raise DuplicateKeyError(
                f"line {line_no}: duplicate series for region {region!r}, "
                f"code {code!r}"
            )
        values = tuple(
            _parse_number(cell, line_no, str(year))
            for year, cell in zip(years, row[first_year_col:])
        )
        if all(v is None for v in values):
            raise ParseError(f"line {line_no}: series {code!r} has no values")
        cells[key] = AnnualSeries(tuple(years), values)
        if region not in regions:
            regions.append(region)
        if code not in seen_codes:
            seen_codes.add(code)
            indicators.append(_classify_code(code))
    if not cells:
        raise ParseError("no data rows after header")
    return PanelDataset(tuple(regions), tuple(indicators), cells)


def _looks_like_year(cell: str) -> bool:
    cell = cell.strip()
    return len(cell) == 4 and cell.isdigit()


GBD_HEADER = ("location", "age_group", "cause", "measure", "year", "value")
GBD_MEASURES = ("DALYs", "YLLs", "YLDs", "prevalence", "deaths")


def outcome_code(cause: str, measure: str, age: AgeGroup) -> str:
    """Synthetic outcome code for one (cause, measure, age stratum)."""
    return f"{cause}|{measure}|{age.value}"


def parse_gbd_long(text: str) -> PanelDataset:
    """Parse a long outcome CSV into one series per (location, outcome code).

    Expected header: location,age_group,cause,measure,year,value. Each
    distinct (cause, measure, age group) becomes its own outcome code.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("no header: input is empty") from None
    if tuple(h.strip() for h in header) != GBD_HEADER:
        raise ParseError(
            f"line 1: expected header {','.join(GBD_HEADER)!r}, "
            f"got {','.join(header)!r}"
        )

    regions: list[str] = []
    codes: list[str] = []
    points: dict[tuple[str, str], dict[int, float]] = {}
    for line_no, row in enumerate(reader, start=2):
        if not row or not any(f.strip() for f in row):
            continue
        if len(row) != len(GBD_HEADER):
            raise ParseError(f"line {line_no}: expected {len(GBD_HEADER)} fields")
        location, age_text, cause, measure, year_text, value_text = (
            f.strip() for f in row
        )
        if measure not in GBD_MEASURES:
            raise ParseError(
                f"line {line_no}: measure {measure!r} not in {GBD_MEASURES}"
            )
        age = parse_age_group(age_text)
        try:
            year = int(year_text)
        except ValueError:
            raise ParseError(f"line {line_no}: year {year_text!r} is not an integer") from None
        value = _parse_number(value_text, line_no, "value")
        if value is None:
            raise ParseError(f"line {line_no}: value is missing")
        code = outcome_code(cause, measure, age)
        key = (location, code)
        series = points.setdefault(key, {})
        if year in series:
            raise DuplicateKeyError(
                f"line {line_no}: duplicate record for {location!r}, "
                f"{cause!r}, {age.value!r}, {measure!r}, year {year}"
            )
        series[year] = value
        if location not in regions:
            regions.append(location)
        if code not in codes:
            codes.append(code)
    if not points:
        raise ParseError("no data rows after header")

    cells = {
        key: AnnualSeries(tuple(sorted(by_year)),
                          tuple(by_year[y] for y in sorted(by_year)))
        for key, by_year in points.items()
    }
    return PanelDataset(
        tuple(regions),
        tuple(_classify_code(c) for c in codes),
        cells,
    )


# -- bundled fixture -------------------------------------------------------

FIXTURE_YEARS = tuple(range(1991, 2024))

#: Synthetic outcome series shipped next to the fixture for self-testing.
#: Values are generated, not observed; the cause name says so.
SYNTHETIC_CAUSE = "synthetic-burden"


def _fixture_text() -> str:
    return (resources.files("paneldep") / "data" / "table_wdi.csv").read_text()


def synthetic_outcome_series() -> dict[str, AnnualSeries]:
    """Deterministic made-up burden series, one per age stratum.

    Smooth trend plus a bounded oscillation, rounded to one decimal so the
    CSV round trip is exact. Spans every fixture year with no gaps, which
    keeps the lagged methods applicable.
    """
    spans = {
        AgeGroup.ALL_AGES: (1200.0, 5.0, -0.06, 35.0, 0.55, 0.0),
        AgeGroup.AGE_20_39: (950.0, 7.5, 0.0, 45.0, 0.5, 0.4),
        AgeGroup.AGE_40_PLUS: (1400.0, 3.0, 0.0, 25.0, 0.75, 1.0),
    }
    out = {}
    for age, (base, slope, quad, amp, freq, phase) in spans.items():
        values = tuple(
            round(base + slope * i + quad * i * i + amp * math.sin(freq * i + phase), 1)
            for i in range(len(FIXTURE_YEARS))
        )
        out[outcome_code(SYNTHETIC_CAUSE, "DALYs", age)] = AnnualSeries(
            FIXTURE_YEARS, values
        )
    return out


def load_fixture(with_outcomes: bool = False) -> PanelDataset:
    """The bundled annual-indicator panel (15 series, 1991-2023).

    With ``with_outcomes`` three synthetic outcome series are appended so a
    full analysis run has something to explain.
    """
    ds = parse_wdi_wide(_fixture_text())
    # The bundled file stores E1 in trillions and E2 in thousands of US$.
    indicators = tuple(
        IndicatorCode(i.code, i.name, i.category, "trillion US$") if i.code == "E1"
        else IndicatorCode(i.code, i.name, i.category, "thousand US$") if i.code == "E2"
        else i
        for i in ds.indicators
    )
    cells = dict(ds.cells)
    if with_outcomes:
        extra = synthetic_outcome_series()
        indicators = indicators + tuple(_classify_code(c) for c in extra)
        for code, series in extra.items():
            cells[(DEFAULT_REGION, code)] = series
    return PanelDataset(ds.regions, indicators, cells)
