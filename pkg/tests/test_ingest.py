from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tab2bot import ColumnStats, InferenceConfig, ParseConfig, column_profile, parse_table, write_table_csv
from tab2bot.errors import (
    ColumnOutOfRangeError,
    DuplicateHeaderError,
    EmptyInputError,
    EncodingError,
    NonRectangularError,
)
from tab2bot.ingest import RawTable

from .oracles import csv_reference_parse, naive_distinct


def test_minimal_csv():
    table = parse_table(b"a,b\n1,x\n2,y")
    assert table.headers == ("a", "b")
    assert table.rows == (("1", "x"), ("2", "y"))


def test_quoted_delimiter_matches_reference_parser():
    data = b'a,b\n"1,5",x'
    table = parse_table(data)
    expected = csv_reference_parse(data)
    assert list(table.headers) == expected[0]
    assert [list(r) for r in table.rows] == expected[1:]
    assert table.rows == (("1,5", "x"),)


@pytest.mark.parametrize(
    "data",
    [
        b'a,b\n"he said ""hi""",2',
        b'a,b\n"line1\nline2",2',
        b"a,b\r\n1,2\r\n3,4\r\n",
        b'a,b\n"",2',
        b"a,b\n1,2\n",
        b'a,b\n",",2',
    ],
)
def test_rfc4180_cases_match_reference_parser(data):
    table = parse_table(data)
    expected = csv_reference_parse(data)
    assert [list(table.headers)] + [list(r) for r in table.rows] == expected


def test_non_rectangular_row_reported():
    with pytest.raises(NonRectangularError) as err:
        parse_table(b"a,b\n1")
    assert err.value.row_index == 1
    assert err.value.expected == 2
    assert err.value.got == 1


def test_duplicate_header_after_normalization():
    with pytest.raises(DuplicateHeaderError):
        parse_table(b"a, A\n1,2")
    with pytest.raises(DuplicateHeaderError):
        parse_table(b"x y,x  y\n1,2")


def test_empty_inputs():
    with pytest.raises(EmptyInputError):
        parse_table(b"")
    with pytest.raises(EmptyInputError):
        parse_table(b"\n\n")


def test_encoding_error_offset():
    with pytest.raises(EncodingError) as err:
        parse_table(b"a,b\n\xff,2")
    assert err.value.offset == 4


def test_header_only_table_is_valid():
    table = parse_table(b"a,b\n")
    assert table.headers == ("a", "b")
    assert table.rows == ()


def test_no_header_synthesizes_names():
    table = parse_table(b"1,2\n3,4", ParseConfig(has_header=False))
    assert table.headers == ("col_1", "col_2")
    assert table.rows == (("1", "2"), ("3", "4"))


def test_empty_header_cells_get_positional_names():
    table = parse_table(b"a,,c\n1,2,3")
    assert table.headers == ("a", "col_2", "c")


def test_max_rows_cap():
    table = parse_table(b"a\n1\n2\n3", ParseConfig(max_rows=2))
    assert table.rows == (("1",), ("2",))


def test_blank_lines_skipped():
    table = parse_table(b"a,b\n1,2\n\n3,4\n")
    assert table.rows == (("1", "2"), ("3", "4"))


def test_custom_delimiter():
    table = parse_table(b"a;b\n1;2", ParseConfig(delimiter=";"))
    assert table.rows == (("1", "2"),)


def test_parse_determinism(sample_bytes):
    assert parse_table(sample_bytes) == parse_table(sample_bytes)


# --- column profiling -----------------------------------------------------------


def _single_column_table(cells: list[str]) -> RawTable:
    return RawTable(name="t", headers=("c",), rows=tuple((c,) for c in cells))


def test_profile_numeric_column():
    # Brute force over the 4 cells: distinct {1, 2}; 3 non-empty, all numeric.
    stats = column_profile(_single_column_table(["1", "2", "2", ""]), 0)
    assert stats.non_empty_count == 3
    assert stats.diversity == 2
    assert stats.numeric_parse_count == 3
    assert stats.datetime_parse_count == 0


def test_profile_empty_column():
    stats = column_profile(_single_column_table(["", ""]), 0)
    assert stats.non_empty_count == 0
    assert stats.diversity == 0


def test_profile_datetime_and_lowercase_null_is_a_value():
    # "n/a" is not among the default (case-sensitive) null markers.
    stats = column_profile(_single_column_table(["2021-01-01", "n/a"]), 0)
    assert stats.datetime_parse_count == 1
    assert stats.numeric_parse_count == 0
    assert stats.diversity == 2


def test_profile_null_markers_excluded():
    stats = column_profile(_single_column_table(["NA", "N/A", "null", "", "x"]), 0)
    assert stats.non_empty_count == 1
    assert stats.diversity == 1


def test_profile_custom_null_markers():
    cfg = InferenceConfig(null_markers=("", "-"))
    stats = column_profile(_single_column_table(["-", "NA", "x"]), 0, cfg)
    assert stats.non_empty_count == 2
    assert stats.distinct_values == {"NA", "x"}


def test_profile_column_out_of_range():
    with pytest.raises(ColumnOutOfRangeError):
        column_profile(_single_column_table(["1"]), 3)


def test_profile_invariants_and_oracle(sample_table):
    for col in range(len(sample_table.headers)):
        stats = column_profile(sample_table, col)
        cells = sample_table.column(col)
        assert stats.distinct_values == naive_distinct(cells)
        assert stats.diversity <= stats.non_empty_count <= sample_table.row_count
        assert stats.numeric_parse_count <= stats.non_empty_count
        assert stats.datetime_parse_count <= stats.non_empty_count


def test_column_stats_diversity_property():
    stats = ColumnStats(column_index=0, distinct_values={"a", "b"})
    assert stats.diversity == 2


# --- writer round trip ------------------------------------------------------------


_cell = st.text(
    alphabet=st.characters(blacklist_categories=("Cs",), blacklist_characters="\x00"),
    max_size=8,
)


@st.composite
def _tables(draw):
    width = draw(st.integers(min_value=1, max_value=4))
    headers = tuple(f"h{i}" for i in range(width))
    n_rows = draw(st.integers(min_value=0, max_value=6))
    rows = tuple(
        tuple(draw(_cell) for _ in range(width)) for _ in range(n_rows)
    )
    return RawTable(name="t", headers=headers, rows=rows)


@settings(max_examples=60, deadline=None)
@given(_tables())
def test_write_parse_round_trip(table):
    text = write_table_csv(table)
    parsed = parse_table(text.encode("utf-8"), name="t")
    assert parsed.headers == table.headers
    assert parsed.rows == table.rows


def test_sample_round_trip(sample_table):
    text = write_table_csv(sample_table)
    assert parse_table(text.encode("utf-8"), name="city_sites") == sample_table
