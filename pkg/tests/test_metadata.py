import json
import logging

import pytest

from acs_toolkit.errors import DanglingColumnError, DictionaryError, MissingSubjectError
from acs_toolkit.metadata import (
    SUBJECT_TABLE_SOFT_LIMIT,
    Dictionary,
    build_dictionary,
    emit_dictionary,
    load_dictionary,
    validate_dictionary,
)
from acs_toolkit.model import ColumnDef, Release, SubjectRef, TableShell

RELEASE = Release(2014, "5yr")
SUBJECT = SubjectRef("01", "Age and Sex", "age-sex")


def shells_and_columns():
    shells = [
        TableShell("B01001", "01", 1, 1, 2, "Sex by Age", "Total population", "sex-by-age"),
        TableShell("B01002", "01", 1, 3, 1, "Median Age by Sex", "Total population",
                   "median-age-by-sex"),
    ]
    columns = [
        ColumnDef("B01001", 1, "Total:"),
        ColumnDef("B01001", 2, "Male:"),
        ColumnDef("B01002", 1, "Median age --"),
    ]
    return shells, columns


def test_build_structure():
    shells, columns = shells_and_columns()
    dictionary = build_dictionary(RELEASE, shells, columns, [SUBJECT])
    assert list(dictionary.subjects) == ["01"]
    subject = dictionary.subjects["01"]
    assert subject.slug == "age-sex"
    assert list(subject.tables) == ["B01001", "B01002"]
    entry = subject.tables["B01001"]
    assert entry.cell_count == 2
    assert list(entry.columns) == ["001", "002"]
    assert entry.columns["002"].moe_column_id == "b01001_002_moe"


def test_column_without_shell_rejected():
    shells, columns = shells_and_columns()
    columns.append(ColumnDef("B01099", 1, "Total:"))
    with pytest.raises(DanglingColumnError, match="B01099"):
        build_dictionary(RELEASE, shells, columns, [SUBJECT])


def test_shell_without_subject_rejected():
    shells, columns = shells_and_columns()
    with pytest.raises(MissingSubjectError, match="01"):
        build_dictionary(RELEASE, shells, columns, [])


def test_payload_round_trip():
    shells, columns = shells_and_columns()
    dictionary = build_dictionary(RELEASE, shells, columns, [SUBJECT])
    rebuilt = Dictionary.from_payload(dictionary.to_payload())
    assert rebuilt == dictionary


def test_emit_and_load_byte_stable(tmp_path):
    shells, columns = shells_and_columns()
    dictionary = build_dictionary(RELEASE, shells, columns, [SUBJECT])
    path = emit_dictionary(dictionary, tmp_path / "dictionary.json")
    first = path.read_bytes()
    assert first.endswith(b"\n")
    emit_dictionary(load_dictionary(path), path)
    assert path.read_bytes() == first


def test_payload_orders_lines_zero_padded(tmp_path):
    shells = [TableShell("B01001", "01", 1, 1, 12, "Sex by Age", "Total population",
                         "sex-by-age")]
    columns = [ColumnDef("B01001", line, f"Line {line}:") for line in range(1, 13)]
    dictionary = build_dictionary(RELEASE, shells, columns, [SUBJECT])
    path = emit_dictionary(dictionary, tmp_path / "d.json")
    keys = list(json.loads(path.read_text())["subjects"]["01"]["tables"]["B01001"]["columns"])
    assert keys == [f"{n:03d}" for n in range(1, 13)]


def test_malformed_payload_rejected():
    with pytest.raises(DictionaryError):
        Dictionary.from_payload({"release": {"year": 2014}})


def test_find_by_slugs():
    shells, columns = shells_and_columns()
    dictionary = build_dictionary(RELEASE, shells, columns, [SUBJECT])
    found = dictionary.find_by_slugs("age-sex", "median-age-by-sex")
    assert found is not None
    assert found[1] == "B01002"
    assert dictionary.find_by_slugs("age-sex", "nope") is None


def test_soft_limit_warns(caplog):
    shells = [
        TableShell(f"B01{n:03d}", "01", 1, 1 + (n - 1), 1, f"Table Number {n}",
                   "Total population", f"table-number-{n}")
        for n in range(1, SUBJECT_TABLE_SOFT_LIMIT + 2)
    ]
    columns = [ColumnDef(s.table_id, 1, "Total:") for s in shells]
    with caplog.at_level(logging.WARNING):
        dictionary = build_dictionary(RELEASE, shells, columns, [SUBJECT])
    assert "01" in caplog.text
    # warn-only: the dictionary still carries every table
    assert len(dictionary.subjects["01"].tables) == SUBJECT_TABLE_SOFT_LIMIT + 1


class FakeTable:
    def __init__(self, table_id, data_header):
        self.table_id = table_id
        self.data_header = tuple(data_header)


def test_validate_agreement():
    shells, columns = shells_and_columns()
    dictionary = build_dictionary(RELEASE, shells, columns, [SUBJECT])
    tables = [
        FakeTable("B01001", ["b01001_001", "b01001_001_moe", "b01001_002", "b01001_002_moe"]),
        FakeTable("B01002", ["b01002_001", "b01002_001_moe"]),
    ]
    report = validate_dictionary(dictionary, tables)
    assert report.ok
    assert report.empty


def test_validate_reports_both_directions():
    shells, columns = shells_and_columns()
    dictionary = build_dictionary(RELEASE, shells, columns, [SUBJECT])
    tables = [
        # b01001_002 missing from the table; b01001_003 unknown to the dictionary
        FakeTable("B01001", ["b01001_001", "b01001_001_moe", "b01001_003", "b01001_003_moe"]),
        FakeTable("B01002", ["b01002_001", "b01002_001_moe"]),
    ]
    report = validate_dictionary(dictionary, tables)
    assert not report.ok
    assert report.missing_in_dictionary == ("b01001_003",)
    assert report.missing_in_tables == ("b01001_002",)
    assert any("b01001_003" in line for line in report.lines())


def test_validate_ignores_moe_and_annotation_tokens():
    shells, columns = shells_and_columns()
    dictionary = build_dictionary(RELEASE, shells, columns, [SUBJECT])
    tables = [
        FakeTable("B01001", [
            "b01001_001", "b01001_001_moe", "b01001_001_ann", "b01001_001_moe_ann",
            "b01001_002", "b01001_002_moe", "b01001_002_ann", "b01001_002_moe_ann",
        ]),
        FakeTable("B01002", ["b01002_001", "b01002_001_moe"]),
    ]
    assert validate_dictionary(dictionary, tables).ok
