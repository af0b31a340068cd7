from __future__ import annotations
import dataclasses
import enum
import json
import logging
import math
from typing import Any, Dict, Iterable, Optional, Sequence

import numpy as np
import pandas as pd

import ptolab
from ptolab.types import DistanceMatrix

log = logging.getLogger("Ptolab.IO")

SCHEMA_VERSION = 1
CSV_FLOAT_FORMAT = "%.17g"
JSON_FLOAT_FORMAT = ".17g"


def json_float(x: float) -> str:
    """Finite float with 17 significant digits, always spelled as a JSON float."""
    text = format(x, JSON_FLOAT_FORMAT)
    if not any(ch in text for ch in ".e"):
        text += ".0"
    return text


class ReportEncoder(json.JSONEncoder):
    """`json.JSONEncoder` that writes floats through `json_float` instead of repr."""

    def iterencode(self, o, _one_shot=False):
        def floatstr(x: float) -> str:
            if not math.isfinite(x):
                raise ValueError(f"Out of range float value {x!r}")
            return json_float(x)

        encoder = json.encoder.encode_basestring_ascii if self.ensure_ascii else json.encoder.encode_basestring
        markers = {} if self.check_circular else None
        return json.encoder._make_iterencode(
            markers, self.default, encoder, self.indent, floatstr, self.key_separator,
            self.item_separator, self.sort_keys, self.skipkeys, _one_shot,
        )(o, 0)


def schema_name(command: str) -> str:
    return f"ptolab.{command}/{SCHEMA_VERSION}"


def _float(x: float):
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(x)


def to_jsonable(obj: Any) -> Any:
    """Plain JSON values from reports: dataclasses, numpy values, tuples, enums and matrices."""
    if isinstance(obj, DistanceMatrix):
        return {"labels": list(obj.labels), "d": to_jsonable(obj.d)}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)
               if not f.name.startswith("_")}
        return out
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    return obj


def dumps_report(command: str, payload: Dict[str, Any]) -> str:
    """
    Versioned JSON report. Keys are sorted and finite floats carry 17 significant digits, so
    identical inputs give byte-identical output that reads back exactly.
    """
    body = {"schema": schema_name(command), "version": ptolab.__version__}
    body.update(to_jsonable(payload))
    return json.dumps(body, cls=ReportEncoder, sort_keys=True, indent=2, allow_nan=False) + "\n"


def matrix_to_json(D: DistanceMatrix, command: str = "matrix", extra: Optional[Dict[str, Any]] = None) -> str:
    payload = {"labels": list(D.labels), "d": D.d}
    if extra:
        payload.update(extra)
    return dumps_report(command, payload)


def write_matrix_csv(D: DistanceMatrix, path_or_buf) -> None:
    df = pd.DataFrame(D.d, columns=list(D.labels))
    df.to_csv(path_or_buf, index=False, float_format=CSV_FLOAT_FORMAT)


def write_table_csv(columns: Sequence[str], rows: Iterable[Sequence[Any]], path_or_buf) -> None:
    df = pd.DataFrame([list(r) for r in rows], columns=list(columns))
    df.to_csv(path_or_buf, index=False, float_format=CSV_FLOAT_FORMAT)
    log.debug(f"Wrote {len(df)} rows x {len(df.columns)} columns")
