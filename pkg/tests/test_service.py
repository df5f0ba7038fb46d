"""HTTP contract: endpoints, bodies, status codes, error shapes."""

import pytest

from conftest import MEDIAN_AGE_ID, PLANTED_TABLE_ID


class TestBrowse:
    def test_releases(self, client):
        r = client.get("/releases")
        assert r.status_code == 200
        assert r.json() == [{"year": 2014, "period": "5yr"}]

    def test_subjects(self, client):
        r = client.get("/releases/2014/5yr/subjects")
        assert r.status_code == 200
        body = r.json()
        assert {s["subject_id"]: s["table_count"] for s in body} == {"01": 5, "08": 5}
        assert body[0]["slug"] == "age-sex"

    def test_unknown_release_subjects(self, client):
        r = client.get("/releases/2019/5yr/subjects")
        assert r.status_code == 404
        assert set(r.json()) == {"error", "detail"}

    def test_table_detail_mirrors_dictionary(self, client, catalog):
        r = client.get(f"/tables/{MEDIAN_AGE_ID}")
        assert r.status_code == 200
        body = r.json()
        entry = catalog.entry(MEDIAN_AGE_ID)
        assert body["table_id"] == "B01002"
        assert body["title"] == entry.entry.title
        assert body["universe"] == entry.entry.universe
        assert body["cell_count"] == entry.entry.cell_count
        assert body["columns"]["001"]["moe_column_id"] == "b01002_001_moe"

    def test_unknown_table_detail(self, client):
        r = client.get("/tables/us.gov.census.acs.2014.5yr.no.table")
        assert r.status_code == 404
        assert r.json()["error"] == "unknown_dataset"


class TestRows:
    def test_paged_rows(self, client):
        r = client.get(f"/tables/{MEDIAN_AGE_ID}/rows", params={"page_size": 7})
        assert r.status_code == 200
        body = r.json()
        assert body["total"] == 600
        assert len(body["rows"]) == 7
        assert body["rows"][0]["geoid"] == "04000US01"
        # MOE field rides right next to its estimate in every row object
        assert "b01002_001" in body["rows"][0]
        assert "b01002_001_moe" in body["rows"][0]

    def test_filters(self, client):
        r = client.get(
            f"/tables/{MEDIAN_AGE_ID}/rows",
            params={"sumlevel": "040", "stusab": "CC"},
        )
        body = r.json()
        assert body["total"] == 1
        assert body["rows"][0]["name"] == "State CC"

    def test_beyond_range_is_empty_not_error(self, client):
        r = client.get(f"/tables/{MEDIAN_AGE_ID}/rows", params={"page": 9999})
        assert r.status_code == 200
        assert r.json()["total"] == 600
        assert r.json()["rows"] == []

    def test_non_integer_page_is_400(self, client):
        r = client.get(f"/tables/{MEDIAN_AGE_ID}/rows", params={"page": "x"})
        assert r.status_code == 400
        assert set(r.json()) == {"error", "detail"}

    def test_oversized_page_size_is_400(self, client):
        r = client.get(f"/tables/{MEDIAN_AGE_ID}/rows", params={"page_size": 1001})
        assert r.status_code == 400
        assert r.json()["error"] == "invalid_query"


class TestStats:
    def test_planted_cell_moe_stats(self, client):
        r = client.get(
            f"/tables/{PLANTED_TABLE_ID}/stats/b08001_004",
            params={"stusab": "AA", "geoid": "04000US01"},
        )
        assert r.status_code == 200
        body = r.json()
        assert body["total_rows"] == 1
        moe = body["moe"]
        assert moe["estimate"] == 60
        assert moe["moe"] == 48
        assert moe["cv_percent"] == pytest.approx(48.6, abs=0.05)
        assert moe["ci_low"] == 12
        assert moe["ci_high"] == 108

    def test_all_rows_descriptive_only(self, client):
        r = client.get(f"/tables/{MEDIAN_AGE_ID}/stats/b01002_001")
        body = r.json()
        assert body["moe"] is None
        assert body["descriptive"]["count"] + body["descriptive"]["nulls"] == 600

    def test_moe_column_redirect_is_400(self, client):
        r = client.get(f"/tables/{MEDIAN_AGE_ID}/stats/b01002_001_moe")
        assert r.status_code == 400
        assert r.json()["error"] == "moe_column"
        assert "b01002_001" in r.json()["detail"]

    def test_unknown_column_is_404(self, client):
        r = client.get(f"/tables/{MEDIAN_AGE_ID}/stats/b99999_001")
        assert r.status_code == 404
        assert r.json()["error"] == "unknown_column"


class TestSearchEndpoint:
    def test_median_age(self, client):
        r = client.get("/search", params={"q": "median age"})
        assert r.status_code == 200
        assert [h["dataset_id"] for h in r.json()] == [MEDIAN_AGE_ID]

    def test_hit_shape(self, client):
        (hit,) = client.get("/search", params={"q": "median age"}).json()
        assert set(hit) == {"dataset_id", "matched_field", "snippet"}

    def test_blank_query_is_400(self, client):
        r = client.get("/search", params={"q": "  "})
        assert r.status_code == 400

    def test_missing_query_is_400(self, client):
        r = client.get("/search")
        assert r.status_code == 400
        assert r.json()["error"] == "invalid_request"


class TestExportEndpoint:
    def test_bytes_equal_table_file(self, client, build_result):
        r = client.get(f"/tables/{MEDIAN_AGE_ID}/export")
        assert r.status_code == 200
        assert r.headers["content-type"].startswith("text/csv")
        assert MEDIAN_AGE_ID in r.headers["content-disposition"]
        assert r.content == build_result.table_paths[MEDIAN_AGE_ID].read_bytes()

    def test_filtered_export_parses(self, client):
        r = client.get(f"/tables/{MEDIAN_AGE_ID}/export", params={"sumlevel": "040"})
        lines = r.text.splitlines()
        assert len(lines) == 4  # header + one state row per state
        assert lines[0].startswith("name,geoid,stusab,sumlevel,b01002_001,b01002_001_moe")

    def test_unknown_dataset_is_404(self, client):
        r = client.get("/tables/us.gov.census.acs.2014.5yr.no.table/export")
        assert r.status_code == 404


class TestReadOnly:
    def test_repeated_requests_identical(self, client):
        first = client.get(f"/tables/{MEDIAN_AGE_ID}/rows", params={"page_size": 13})
        second = client.get(f"/tables/{MEDIAN_AGE_ID}/rows", params={"page_size": 13})
        assert first.content == second.content

    def test_no_ui_mounted_by_default(self, client):
        assert client.get("/ui/").status_code == 404
