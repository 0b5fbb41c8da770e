from __future__ import annotations

import pytest

from tab2bot.values import (
    compile_date_format,
    format_number,
    is_datetime,
    is_numeric,
    normalize_identifier,
    parse_datetime,
    parse_number,
    tokenize,
)


@pytest.mark.parametrize(
    "text", ["0", "1", "42", "+4", "-17", "0.5", "-0.5", ".5", "5.", "12345.6789"]
)
def test_numeric_grammar_accepts(text):
    assert is_numeric(text)


@pytest.mark.parametrize(
    "text",
    ["", " ", "1 000", "1,000", "1e5", "abc", "--1", "1.2.3", "+", "-", ".", "4x", " 42"],
)
def test_numeric_grammar_rejects(text):
    assert not is_numeric(text)


def test_numeric_grammar_custom_separator():
    assert is_numeric("1,5", decimal_separator=",")
    assert not is_numeric("1.5", decimal_separator=",")
    assert parse_number("1,5", decimal_separator=",") == 1.5


def test_parse_number_values():
    assert parse_number("42") == 42.0
    assert parse_number("-0.5") == -0.5
    assert parse_number("5.") == 5.0
    assert parse_number(".5") == 0.5
    with pytest.raises(ValueError):
        parse_number("1e5")


def test_date_format_compile_iso():
    shape, directive = compile_date_format("YYYY-MM-DD")
    assert shape.fullmatch("2021-01-31")
    assert directive == "%Y-%m-%d"


def test_datetime_matching_defaults():
    formats = ("YYYY-MM-DD", "YYYY-MM-DDThh:mm:ss", "DD/MM/YYYY")
    assert is_datetime("2021-01-01", formats)
    assert is_datetime("2021-01-01T10:20:30", formats)
    assert is_datetime("31/12/2020", formats)
    assert not is_datetime("2021-1-1", formats)  # padding is part of the shape
    assert not is_datetime("2021-13-01", formats)  # month out of range
    assert not is_datetime("2021/01/01", formats)
    assert not is_datetime("hello", formats)


def test_parse_datetime_first_format_wins():
    parsed = parse_datetime("01/02/2021", ("DD/MM/YYYY",))
    assert parsed is not None
    assert (parsed.day, parsed.month, parsed.year) == (1, 2, 2021)


@pytest.mark.parametrize(
    ("raw", "expected"),
    [
        ("  Foo  Bar ", "foo_bar"),
        ("City", "city"),
        ("Population (2022)", "population_2022"),
        ("a\tb", "a_b"),
        ("__x__", "x"),
        ("", ""),
    ],
)
def test_normalize_identifier(raw, expected):
    assert normalize_identifier(raw) == expected


def test_tokenize_strips_punctuation_and_case():
    assert tokenize("Show ROWS, where city is {value}!") == [
        "show",
        "rows",
        "where",
        "city",
        "is",
        "value",
    ]
    assert tokenize("") == []


def test_format_number():
    assert format_number(42.0) == "42"
    assert format_number(4.5) == "4.5"
    assert format_number(-3.0) == "-3"
