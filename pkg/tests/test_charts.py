from qadams.charts import ChartEntry, ChartMap, ExtChart, to_ascii, to_svg

import pytest


def sample():
    ch = ExtChart(3, 3, 6, name="demo", min_t=-1, max_stem=4)
    ch.set(0, 0, ChartEntry(1, (), (), ("1",)))
    ch.set(1, 2, ChartEntry(0, (1, 2)))
    ch.set(2, 4, ChartEntry.fp(1, flags=("AMBIGUOUS_EXTENSION",)))
    return ch


def test_json_roundtrip():
    ch = sample()
    back = ExtChart.from_json(ch.to_json())
    assert back.to_json() == ch.to_json()
    assert back.entries == ch.entries


def test_window():
    ch = sample()
    assert ch.in_window(0, -1) and not ch.in_window(0, 5) and not ch.in_window(4, 4)
    assert (0, 5) not in set(ch.cells())


def test_zero_entries_dropped():
    ch = sample()
    ch.set(1, 2, ChartEntry())
    assert (1, 2) not in ch.entries


def test_describe():
    assert ChartEntry(2, (1, 1, 3)).describe() == "Z^2 + (F_p)^2 + Z/p^3"
    assert ChartEntry().describe() == "0"


def test_renderers():
    ch = sample()
    txt = to_ascii(ch)
    assert txt.startswith("# demo p=3")
    svg = to_svg(ch)
    assert "<svg" in svg and ">?</text>" in svg


def test_chart_map_validation():
    a = ExtChart(2, 0, 0, {(0, 0): ChartEntry.fp(1)})
    b = ExtChart(2, 0, 0, {(0, 0): ChartEntry(1)})
    ChartMap(b, a, {(0, 0): [[1]]}).validate()
    with pytest.raises(ValueError):
        ChartMap(a, b, {(0, 0): [[1]]}).validate()  # F_p -> Z is zero over Z_(p)
    with pytest.raises(ValueError):
        ChartMap(a, b, {(0, 0): [[1, 0]]}).validate()
