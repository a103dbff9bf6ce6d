from __future__ import annotations
import io
import json
from fractions import Fraction
from typing import Any, Dict, Sequence, Union

import pandas as pd
from pydantic import BaseModel

from src.core.utils import format_float
from src.spectrum.frequencies import SignVector, SpectrumReport, spectrum_frame


def plain_value(value: Any) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, Fraction):
        return format_float(float(value))
    if isinstance(value, complex):
        return [format_float(value.real), format_float(value.imag)]
    if isinstance(value, SignVector):
        return value.as_csv()
    if isinstance(value, BaseModel):
        return _record(value)
    if isinstance(value, dict):
        return {str(k): plain_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain_value(v) for v in value]
    if hasattr(value, "item"):
        return plain_value(value.item())
    return value


def _record(model: BaseModel) -> Dict[str, Any]:
    """Field-ordered plain dict; Fractions also get an exact `<name>_exact` string."""
    out: Dict[str, Any] = {}
    for name in type(model).model_fields:
        value = getattr(model, name)
        if name == "wall_time_seconds" and value is None:
            continue
        out[name] = plain_value(value)
        if isinstance(value, Fraction):
            out[f"{name}_exact"] = f"{value.numerator}/{value.denominator}"
    return out


def _frame(result) -> pd.DataFrame:
    if isinstance(result, pd.DataFrame):
        return result
    rows = result if isinstance(result, (list, tuple)) else [result]
    if rows and all(isinstance(r, SpectrumReport) for r in rows):
        return spectrum_frame(rows)
    records = []
    for row in rows:
        rec = _record(row) if isinstance(row, BaseModel) else dict(row)
        records.append({k: (json.dumps(v) if isinstance(v, (dict, list)) else v) for k, v in rec.items()})
    return pd.DataFrame.from_records(records)


def emit_report(result: Union[BaseModel, Sequence[BaseModel], pd.DataFrame], fmt: str = "json") -> str:
    """Serialize a result (CountResult, OracleResult, SpectrumReport list, ...) as JSON or CSV."""
    if fmt == "json":
        if isinstance(result, pd.DataFrame):
            payload: Any = [plain_value(r) for r in result.to_dict(orient="records")]
        elif isinstance(result, (list, tuple)):
            payload = [plain_value(r) for r in result]
        else:
            payload = plain_value(result)
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        _frame(result).to_csv(buf, index=False, lineterminator="\n", float_format="%.12g")
        return buf.getvalue()
    raise ValueError(f"unknown report format {fmt!r}")

