from __future__ import annotations
import io
import json
import logging
import os
from typing import Optional

import pandas as pd

from ptolab.errors import MatrixParseError, StructuralError
from ptolab.types import DistanceMatrix

log = logging.getLogger("Ptolab.Parse")


def parse_matrix(data: bytes, fmt: Optional[str] = None) -> DistanceMatrix:
    """
    Build a validated DistanceMatrix from JSON ({"labels": [...], "d": [[...]]})
    or CSV (header row of labels, optional leading label column) bytes.
    The format is sniffed from the first non-blank character when `fmt` is None.
    """

    # ---------------- helpers ----------------
    def clean_text(b: bytes) -> str:
        try:
            txt = b.decode("utf-8-sig")
        except UnicodeDecodeError as e:
            raise MatrixParseError(f"Matrix input is not UTF-8 text (byte {e.start}): {e.reason}") from e
        return txt.replace("\r\n", "\n").replace("\r", "\n").strip()

    def from_json(txt: str) -> DistanceMatrix:
        try:
            obj = json.loads(txt)
        except json.JSONDecodeError as e:
            raise MatrixParseError(f"Matrix JSON is malformed: {e}") from e
        # report files wrap the matrix under "matrix"
        if isinstance(obj, dict) and "matrix" in obj and isinstance(obj["matrix"], dict):
            obj = obj["matrix"]
        if not isinstance(obj, dict) or "d" not in obj:
            raise MatrixParseError("Matrix JSON needs a 'd' field (and usually 'labels')")
        d = obj["d"]
        labels = obj.get("labels") or [str(i) for i in range(len(d))]
        return DistanceMatrix(labels=tuple(labels), d=d)

    def from_csv(txt: str) -> DistanceMatrix:
        try:
            df = pd.read_csv(io.StringIO(txt), dtype=str)
        except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise MatrixParseError(f"Matrix CSV is malformed: {e}") from e
        # a leading label column shows up as one extra column
        if df.shape[1] == df.shape[0] + 1:
            df = df.set_index(df.columns[0])
        labels = [str(c).strip() for c in df.columns]
        try:
            values = df.apply(lambda col: col.str.strip().astype(float)).to_numpy(dtype=float)
        except (ValueError, AttributeError) as e:
            raise MatrixParseError(f"Matrix CSV has non-numeric entries: {e}") from e
        return DistanceMatrix(labels=tuple(labels), d=values)

    # ---------------- dispatch ----------------
    txt = clean_text(data)
    if not txt:
        raise MatrixParseError("Matrix input is empty")
    if fmt is None:
        fmt = "json" if txt[0] in "{[" else "csv"
    fmt = fmt.lower()
    try:
        if fmt == "json":
            return from_json(txt)
        if fmt == "csv":
            return from_csv(txt)
    except StructuralError:
        raise
    except (TypeError, ValueError) as e:
        raise MatrixParseError(f"Could not read {fmt} matrix: {e}") from e
    raise MatrixParseError(f"Unknown matrix format '{fmt}' (expected json or csv)")


def load_matrix(path: str, fmt: Optional[str] = None) -> DistanceMatrix:
    if fmt is None:
        ext = os.path.splitext(path)[1].lower()
        fmt = {".json": "json", ".csv": "csv"}.get(ext)
    with open(path, "rb") as f:
        data = f.read()
    D = parse_matrix(data, fmt)
    log.debug(f"Loaded {D.n}-point matrix from {path}")
    return D
