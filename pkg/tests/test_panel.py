import pytest
from hypothesis import given, strategies as st

from paneldep.errors import (
    DomainError,
    DuplicateKeyError,
    InsufficientOverlapError,
    MappingError,
    NotFoundError,
    ParseError,
)
from paneldep.panel import (
    AgeGroup,
    AnnualSeries,
    BUILTIN_INDICATORS,
    PanelDataset,
    age_group_of_code,
    align_pair,
    indicator_lookup,
    load_fixture,
    outcome_code,
    parse_gbd_long,
    parse_wdi_wide,
)

WDI_SMALL = """code,region,2000,2001,2002,2003
E1,global,1.0,2.0,-,4.0
S1,global,60.0,61.0,62.0,63.0
"""

GBD_SMALL = """location,age_group,cause,measure,year,value
R1,20-39,depressive,DALYs,2000,512.0
R1,20-39,depressive,DALYs,2001,530.5
R1,40+,depressive,DALYs,2000,210.0
"""


class TestIndicatorRegistry:
    def test_eighteen_builtins(self):
        assert len(BUILTIN_INDICATORS) == 18
        codes = [i.code for i in BUILTIN_INDICATORS]
        assert codes == [
            "E1", "E2", "E3", "E4", "E5", "E6",
            "ED1", "ED2", "ED3", "ED4",
            "S1", "S2", "S3",
            "T1", "T2", "T3", "T4", "T5",
        ]
        assert len(set(codes)) == 18

    def test_lookup_by_code(self):
        ind = indicator_lookup("E2")
        assert (ind.code, ind.name, ind.category, ind.units) == (
            "E2", "GDP per capita", "Economic", "Current US$"
        )

    def test_lookup_by_name_case_insensitive(self):
        assert indicator_lookup("Unemployment, total").code == "S2"
        assert indicator_lookup("unemployment, TOTAL").code == "S2"

    def test_lookup_unknown_lists_nearest(self):
        with pytest.raises(NotFoundError) as exc_info:
            indicator_lookup("Z9")
        assert isinstance(exc_info.value.nearest, list)

    def test_lookup_near_miss_suggests(self):
        with pytest.raises(NotFoundError) as exc_info:
            indicator_lookup("GDP per capit")
        assert "GDP per capita" in exc_info.value.nearest


class TestAnnualSeries:
    def test_rejects_unsorted_years(self):
        with pytest.raises(DomainError):
            AnnualSeries((2001, 2000), (1.0, 2.0))

    def test_rejects_duplicate_years(self):
        with pytest.raises(DomainError):
            AnnualSeries((2000, 2000), (1.0, 2.0))

    def test_rejects_all_missing(self):
        with pytest.raises(DomainError):
            AnnualSeries((2000, 2001), (None, None))


class TestParseWdi:
    def test_small_panel(self):
        ds = parse_wdi_wide(WDI_SMALL)
        assert ds.regions == ("global",)
        assert ds.codes() == ("E1", "S1")
        series = ds.series("global", "E1")
        assert series.years == (2000, 2001, 2002, 2003)
        assert series.values == (1.0, 2.0, None, 4.0)

    def test_region_column_optional(self):
        ds = parse_wdi_wide("code,2000,2001\nE1,1.0,2.0\n")
        assert ds.regions == ("global",)
        ds2 = parse_wdi_wide("code,2000,2001\nE1,1.0,2.0\n", default_region="R7")
        assert ds2.regions == ("R7",)

    def test_empty_file_is_no_header(self):
        with pytest.raises(ParseError, match="no header"):
            parse_wdi_wide("")

    def test_bad_year_header(self):
        with pytest.raises(ParseError, match="line 1"):
            parse_wdi_wide("code,region,20x0\nE1,global,1.0\n")

    def test_non_numeric_cell_cites_location(self):
        with pytest.raises(ParseError, match="line 2.*2001"):
            parse_wdi_wide("code,region,2000,2001\nE1,global,1.0,oops\n")

    def test_line_numbers_survive_blank_lines(self):
        text = "code,region,2000,2001\n\nE1,global,1.0,2.0\n\nE2,global,bad,1.0\n"
        with pytest.raises(ParseError, match="line 5"):
            parse_wdi_wide(text)

    def test_duplicate_series_rejected(self):
        text = "code,region,2000,2001\nE1,global,1.0,2.0\nE1,global,3.0,4.0\n"
        with pytest.raises(DuplicateKeyError):
            parse_wdi_wide(text)

    def test_roundtrip_wdi_csv(self):
        ds = parse_wdi_wide(WDI_SMALL)
        again = parse_wdi_wide(ds.to_wdi_csv())
        assert again == ds

    def test_roundtrip_json(self):
        ds = parse_wdi_wide(WDI_SMALL)
        assert PanelDataset.from_json(ds.to_json()) == ds


class TestParseGbd:
    def test_single_record(self):
        ds = parse_gbd_long(
            "location,age_group,cause,measure,year,value\n"
            "R1,20-39,depressive,DALYs,2000,512.0\n"
        )
        code = outcome_code("depressive", "DALYs", AgeGroup.AGE_20_39)
        series = ds.series("R1", code)
        assert series.years == (2000,)
        assert series.values == (512.0,)

    def test_years_sorted(self):
        ds = parse_gbd_long(
            "location,age_group,cause,measure,year,value\n"
            "R1,all,anxiety,DALYs,2005,9.0\n"
            "R1,all,anxiety,DALYs,2003,7.0\n"
        )
        series = ds.series("R1", outcome_code("anxiety", "DALYs", AgeGroup.ALL_AGES))
        assert series.years == (2003, 2005)
        assert series.values == (7.0, 9.0)

    def test_age_groups_become_distinct_codes(self):
        ds = parse_gbd_long(GBD_SMALL)
        codes = ds.codes()
        assert outcome_code("depressive", "DALYs", AgeGroup.AGE_20_39) in codes
        assert outcome_code("depressive", "DALYs", AgeGroup.AGE_40_PLUS) in codes
        assert len(codes) == 2

    def test_outcome_age_recovered_from_code(self):
        assert age_group_of_code("depressive|DALYs|20-39") is AgeGroup.AGE_20_39
        assert age_group_of_code("depressive|DALYs|40+") is AgeGroup.AGE_40_PLUS
        assert age_group_of_code("E1") is AgeGroup.ALL_AGES

    def test_unknown_age_group(self):
        with pytest.raises(MappingError):
            parse_gbd_long(
                "location,age_group,cause,measure,year,value\n"
                "R1,youth,depressive,DALYs,2000,1.0\n"
            )

    def test_duplicate_record(self):
        text = (
            "location,age_group,cause,measure,year,value\n"
            "R1,all,anxiety,DALYs,2005,9.0\n"
            "R1,all,anxiety,DALYs,2005,9.0\n"
        )
        with pytest.raises(DuplicateKeyError):
            parse_gbd_long(text)

    def test_roundtrip_json(self):
        ds = parse_gbd_long(GBD_SMALL)
        assert PanelDataset.from_json(ds.to_json()) == ds


def series_over(years, values):
    return AnnualSeries(tuple(years), tuple(values))


class TestAlignPair:
    def test_interval_intersection(self):
        a = series_over(range(1990, 2001), [float(i) for i in range(11)])
        b = series_over(range(1995, 2006), [float(i) for i in range(11)])
        pair = align_pair(a, b, min_overlap=3)
        assert pair.years == tuple(range(1995, 2001))
        assert pair.n == 6

    def test_gap_dropped_pairwise(self):
        values = [float(i) for i in range(11)]
        values[7] = None  # 1997 missing
        a = series_over(range(1990, 2001), values)
        b = series_over(range(1995, 2006), [float(i) for i in range(11)])
        pair = align_pair(a, b, min_overlap=3)
        assert 1997 not in pair.years
        assert pair.n == 5

    def test_insufficient_overlap_carries_count(self):
        a = series_over([2000, 2001], [1.0, 2.0])
        b = series_over([2001, 2002], [1.0, 2.0])
        with pytest.raises(InsufficientOverlapError) as exc_info:
            align_pair(a, b, min_overlap=10)
        assert exc_info.value.overlap == 1

    def test_min_overlap_floor(self):
        a = series_over([2000, 2001, 2002], [1.0, 2.0, 3.0])
        with pytest.raises(DomainError):
            align_pair(a, a, min_overlap=2)

    @given(st.data())
    def test_symmetry_of_year_coverage(self, data):
        years = sorted(data.draw(st.sets(st.integers(1950, 2050), min_size=8, max_size=40)))
        mask_a = data.draw(st.lists(st.booleans(), min_size=len(years), max_size=len(years)))
        mask_b = data.draw(st.lists(st.booleans(), min_size=len(years), max_size=len(years)))
        va = [float(i) if m else None for i, m in enumerate(mask_a)]
        vb = [float(i) * 2 if m else None for i, m in enumerate(mask_b)]
        if not any(va):
            va[0] = 0.5
        if not any(vb):
            vb[0] = 0.5
        a = series_over(years, va)
        b = series_over(years, vb)
        try:
            forward = align_pair(a, b, min_overlap=3)
        except InsufficientOverlapError:
            with pytest.raises(InsufficientOverlapError):
                align_pair(b, a, min_overlap=3)
            return
        backward = align_pair(b, a, min_overlap=3)
        assert forward.years == backward.years
        # every jointly populated year is present, none invented
        joint = set(a.present()) & set(b.present())
        assert set(forward.years) == joint


class TestMerge:
    def test_union_preserves_order(self):
        indicators = parse_wdi_wide(WDI_SMALL)
        outcomes = parse_gbd_long(GBD_SMALL)
        merged = indicators.merge(outcomes)
        assert merged.regions == ("global", "R1")
        assert merged.codes()[:2] == ("E1", "S1")
        assert len(merged.codes()) == 4
        assert merged.series("global", "E1") == indicators.series("global", "E1")

    def test_duplicate_series_rejected(self):
        ds = parse_wdi_wide(WDI_SMALL)
        with pytest.raises(DuplicateKeyError):
            ds.merge(ds)

    def test_merged_panel_roundtrips(self):
        merged = parse_wdi_wide(WDI_SMALL).merge(parse_gbd_long(GBD_SMALL))
        assert PanelDataset.from_json(merged.to_json()) == merged


class TestFixture:
    def test_fifteen_series_thirtythree_years(self):
        ds = load_fixture()
        assert len(ds.indicators) == 15
        assert ds.regions == ("global",)
        for code in ds.codes():
            assert ds.series("global", code).years == tuple(range(1991, 2024))

    def test_missing_pattern_anchors(self):
        ds = load_fixture()
        ed4 = ds.series("global", "ED4").present()
        assert min(ed4) == 1999 and max(ed4) == 2022
        s3 = ds.series("global", "S3").present()
        assert min(s3) == 2001 and s3[2001] == 13.0
        t4 = ds.series("global", "T4").present()
        assert min(t4) == 2010 and t4[2010] == 185.2
        t5 = ds.series("global", "T5").present()
        assert (min(t5), max(t5)) == (2000, 2022)
        for code in ("T1", "T3"):
            assert min(ds.series("global", code).present()) == 2005

    def test_spot_values(self):
        ds = load_fixture()
        assert ds.series("global", "E1").present()[1991] == 23.9
        assert ds.series("global", "T4").present()[2023] == 15466.2

    def test_fixture_json_roundtrip_is_identical(self):
        ds = load_fixture()
        assert PanelDataset.from_json(ds.to_json()) == ds

    def test_fixture_csv_roundtrip_preserves_data(self):
        # The wide CSV has no units column, so the loader's units notes are
        # the one thing a CSV round trip cannot carry.
        ds = load_fixture()
        again = parse_wdi_wide(ds.to_wdi_csv())
        assert again.regions == ds.regions
        assert again.cells == ds.cells
        assert again.codes() == ds.codes()
        assert again.to_wdi_csv() == ds.to_wdi_csv()

    def test_outcome_variant_adds_three_series(self):
        ds = load_fixture(with_outcomes=True)
        assert len(ds.indicators) == 18
        burden_codes = [i.code for i in ds.indicators if i.category == "MentalHealth"]
        assert len(burden_codes) == 3
        ages = {age_group_of_code(c) for c in burden_codes}
        assert ages == {AgeGroup.ALL_AGES, AgeGroup.AGE_20_39, AgeGroup.AGE_40_PLUS}
        for code in burden_codes:
            series = ds.series("global", code)
            assert series.years == tuple(range(1991, 2024))
            assert series.n_present == 33
