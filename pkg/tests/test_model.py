import pytest
from hypothesis import given
from hypothesis import strategies as st

from acs_toolkit.errors import DatasetIdError, InvalidNameError, LineRangeError
from acs_toolkit.model import (
    ColumnDef,
    GeoRecord,
    Jam,
    Numeric,
    Release,
    SubjectRef,
    TableShell,
    make_column_id,
    make_dataset_id,
    parse_dataset_id,
    slugify,
)


class TestSlugify:
    def test_drops_and(self):
        assert slugify("Age and Sex") == "age-sex"

    def test_keeps_by(self):
        assert slugify("Median Age by Sex") == "median-age-by-sex"

    @pytest.mark.parametrize(
        "title,expected",
        [
            ("Income in the Past 12 Months", "income-in-the-past-12-months"),
            ("  Means of Transportation to Work ", "means-of-transportation-to-work"),
            ("HOUSING   UNITS", "housing-units"),
            ("Sex by Age (Detail)", "sex-by-age-detail"),
        ],
    )
    def test_examples(self, title, expected):
        assert slugify(title) == expected

    def test_empty_rejected(self):
        with pytest.raises(InvalidNameError):
            slugify("   ")

    def test_stopwords_only_rejected(self):
        with pytest.raises(InvalidNameError):
            slugify("and")

    @given(st.text(min_size=1))
    def test_output_shape(self, text):
        try:
            slug = slugify(text)
        except InvalidNameError:
            return
        assert slug == slug.lower()
        assert " " not in slug
        assert not slug.startswith("-") and not slug.endswith("-")
        assert "--" not in slug


class TestColumnIds:
    def test_estimate_token(self):
        assert make_column_id("B01002", 3) == "b01002_003"

    def test_moe_token(self):
        assert make_column_id("B01002", 3, "moe") == "b01002_003_moe"

    @pytest.mark.parametrize("line", [0, -1, 1000])
    def test_line_bounds(self, line):
        with pytest.raises(LineRangeError):
            make_column_id("B01002", line)

    def test_column_def_fills_ids(self):
        col = ColumnDef(table_id="B01002", line=3, display_name="Female:")
        assert col.column_id == "b01002_003"
        assert col.moe_column_id == "b01002_003_moe"

    def test_column_def_rejects_wrong_id(self):
        with pytest.raises(ValueError):
            ColumnDef(table_id="B01002", line=3, display_name="x", column_id="b01002_004")


class TestRelease:
    def test_dirname(self):
        assert Release(2014, "5yr").dirname == "2014_5yr"

    def test_period_digit(self):
        assert Release(2014, "1yr").period_digit == "1"

    def test_bad_period(self):
        with pytest.raises(ValueError):
            Release(2014, "2yr")

    def test_year_before_program(self):
        with pytest.raises(ValueError):
            Release(2004, "1yr")


class TestTableShell:
    def make(self, **overrides):
        base = dict(
            table_id="B01002",
            subject_id="01",
            sequence=1,
            start_position=5,
            cell_count=10,
            title="Median Age by Sex",
            universe="Total population",
            slug="median-age-by-sex",
        )
        base.update(overrides)
        return TableShell(**base)

    def test_end_position(self):
        assert self.make().end_position == 15

    def test_subject_must_embed(self):
        with pytest.raises(ValueError):
            self.make(subject_id="02")

    def test_bad_table_id(self):
        with pytest.raises(ValueError):
            self.make(table_id="b01002")

    def test_zero_cells(self):
        with pytest.raises(ValueError):
            self.make(cell_count=0)


class TestDatasetIds:
    def test_compose(self):
        release = Release(2014, "5yr")
        subject = SubjectRef("01", "Age and Sex", "age-sex")
        shell = TableShell(
            table_id="B01002",
            subject_id="01",
            sequence=1,
            start_position=5,
            cell_count=10,
            title="Median Age by Sex",
            universe="Total population",
            slug="median-age-by-sex",
        )
        assert (
            make_dataset_id(release, subject, shell)
            == "us.gov.census.acs.2014.5yr.age-sex.median-age-by-sex"
        )

    def test_parse_round_trip(self):
        release, subject_slug, table_slug = parse_dataset_id(
            "us.gov.census.acs.2014.5yr.age-sex.median-age-by-sex"
        )
        assert release == Release(2014, "5yr")
        assert subject_slug == "age-sex"
        assert table_slug == "median-age-by-sex"

    @pytest.mark.parametrize(
        "bad",
        [
            "us.gov.census.acs.2014.5yr.age-sex",  # 7 segments
            "eu.gov.census.acs.2014.5yr.age-sex.median-age",  # wrong prefix
            "us.gov.census.acs.x.5yr.age-sex.median-age",  # bad year
            "us.gov.census.acs.2014.2yr.age-sex.median-age",  # bad period
            "us.gov.census.acs.2014.5yr.age-sex.Median-Age",  # bad slug
            "us.gov.census.acs.2004.5yr.age-sex.median-age",  # year predates program
        ],
    )
    def test_parse_rejects(self, bad):
        with pytest.raises(DatasetIdError):
            parse_dataset_id(bad)


class TestCells:
    def test_geo_record_validation(self):
        with pytest.raises(ValueError):
            GeoRecord(stusab="A1", logrecno=1, geoid="g", name="n", sumlevel="040")
        with pytest.raises(ValueError):
            GeoRecord(stusab="AA", logrecno=0, geoid="g", name="n", sumlevel="040")
        with pytest.raises(ValueError):
            GeoRecord(stusab="AA", logrecno=1, geoid="g", name="n", sumlevel="40")

    def test_numeric_must_be_finite(self):
        with pytest.raises(ValueError):
            Numeric(float("inf"))

    def test_jam_keeps_token(self):
        assert Jam("-666666666").token == "-666666666"
