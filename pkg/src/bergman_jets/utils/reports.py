"""Report writers (CSV via pandas, JSON) and p-range parsing."""

from __future__ import annotations

import json
import math
import re
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from ..core.errors import PreconditionError

REPORT_COLUMNS = ["p", "quantity", "value", "target", "ratio", "notes"]

_RANGE = re.compile(r"^\s*(\d+)\s*(?:\.\.\s*(\d+)\s*(?::\s*(\d+)\s*)?)?$")


def parse_p_range(text: str, default_step: int = 1) -> List[int]:
    """
    Parse ``a``, ``a..b`` or ``a..b:step`` (inclusive bounds).

    Raises:
        PreconditionError: If the text is malformed or the range is empty
    """
    match = _RANGE.match(text or "")
    if not match:
        raise PreconditionError(f"malformed p-range {text!r}, expected a..b or a..b:step")
    start = int(match.group(1))
    stop = int(match.group(2)) if match.group(2) else start
    step = int(match.group(3)) if match.group(3) else default_step
    if step < 1:
        raise PreconditionError("p-range step must be positive")
    values = list(range(start, stop + 1, step))
    if not values:
        raise PreconditionError(f"empty p-range {text!r}")
    return values


def _clean(value: Any) -> Any:
    """JSON-safe scalars: numpy types unwrapped, complex split, nan/inf as strings."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, complex):
        return {"re": _clean(value.real), "im": _clean(value.imag)}
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def to_json_text(payload: Dict[str, Any]) -> str:
    """Deterministic JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(_clean(payload), ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def rows_frame(rows: List[Dict[str, Any]]) -> pd.DataFrame:
    frame = pd.DataFrame(rows, columns=REPORT_COLUMNS)
    return frame.sort_values(["p", "quantity"], kind="mergesort").reset_index(drop=True)


def to_csv_text(rows: List[Dict[str, Any]]) -> str:
    return rows_frame(rows).to_csv(index=False, float_format="%.12g", lineterminator="\n")


def write_report(
    payload: Dict[str, Any],
    out: Optional[str | Path],
    stem: str,
    fmt: str = "csv",
) -> List[Path]:
    """
    Write a report under ``out``: ``stem.json`` always, plus ``stem.csv`` for row reports.

    Args:
        payload: Report dictionary; its "rows" become the CSV table
        out: Output directory (created if missing)
        stem: File name without extension
        fmt: "csv" or "json"

    Returns:
        Paths written
    """
    directory = Path(out)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    json_path = directory / f"{stem}.json"
    json_path.write_text(to_json_text(payload), encoding="utf-8")
    written.append(json_path)
    if fmt == "csv" and "rows" in payload:
        csv_path = directory / f"{stem}.csv"
        csv_path.write_text(to_csv_text(payload["rows"]), encoding="utf-8")
        written.append(csv_path)
    return written
