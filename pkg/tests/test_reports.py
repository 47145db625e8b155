import json

import numpy as np
import pytest

from bergman_jets.core.errors import PreconditionError
from bergman_jets.utils.reports import parse_p_range, to_csv_text, to_json_text, write_report


@pytest.mark.parametrize(
    "text, step, expected",
    [
        ("8..24:4", 1, [8, 12, 16, 20, 24]),
        ("8..12", 2, [8, 10, 12]),
        (" 6 .. 9 ", 1, [6, 7, 8, 9]),
        ("10", 4, [10]),
    ],
)
def test_parse_p_range(text, step, expected):
    assert parse_p_range(text, step) == expected


@pytest.mark.parametrize("text", ["16..8", "8..", "a..b", "8..16:0", ""])
def test_bad_p_range(text):
    with pytest.raises(PreconditionError):
        parse_p_range(text)


def test_json_is_deterministic():
    payload = {"b": 1, "a": float("nan"), "c": 1 + 2j, "d": np.float64(0.5), "e": (np.int64(3),)}
    text = to_json_text(payload)
    assert text.startswith('{\n  "a": "nan"')
    assert text.endswith("\n")
    data = json.loads(text)
    assert data["c"] == {"re": 1.0, "im": 2.0}
    assert data["d"] == 0.5
    assert data["e"] == [3]


def test_csv_rows_sorted_by_p():
    rows = [
        {"p": 12, "quantity": "x", "value": 0.25, "target": 0.0, "ratio": None, "notes": ""},
        {"p": 8, "quantity": "x", "value": 0.5, "target": 0.0, "ratio": None, "notes": "first"},
    ]
    lines = to_csv_text(rows).splitlines()
    assert lines[0] == "p,quantity,value,target,ratio,notes"
    assert lines[1].startswith("8,x,0.5")
    assert lines[2].startswith("12,x,0.25")


def test_write_report(tmp_path):
    payload = {"experiment": "demo", "rows": [{"p": 8, "quantity": "x", "value": 1.0}]}
    written = write_report(payload, tmp_path / "out", "demo")
    assert [p.name for p in written] == ["demo.json", "demo.csv"]
    assert json.loads(written[0].read_text())["experiment"] == "demo"
    only_json = write_report(payload, tmp_path / "json", "demo", "json")
    assert [p.name for p in only_json] == ["demo.json"]
