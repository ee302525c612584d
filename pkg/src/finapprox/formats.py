"""Reading and writing the JSON and CSV file formats."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

from finapprox.errors import DomainError, ParseError
from finapprox.profile import RearrangementProfile
from finapprox.stepfn import SampledFunction, StepFunction, ingest_samples

SPACING_RTOL = 1e-9


def fmt(x: float) -> str:
    """17 significant digits, round-trip safe; ``inf`` for infinities."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def function_from_dict(data: Any) -> StepFunction | RearrangementProfile:
    try:
        if isinstance(data, dict) and "atoms" in data:
            return StepFunction.from_dict(data)
        if isinstance(data, dict) and "pieces" in data:
            return RearrangementProfile.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed function record: {exc}") from exc
    raise ParseError('expected an object with "atoms" or "pieces"')


def parse_samples_csv(text: str) -> SampledFunction:
    """Parse ``x,value`` rows with uniformly spaced, strictly increasing ``x``."""
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r and any(c.strip() for c in r)]
    if not rows or [c.strip() for c in rows[0]] != ["x", "value"]:
        raise ParseError('sample CSV must start with the header "x,value"')
    try:
        xs = [float(r[0]) for r in rows[1:]]
        vs = [float(r[1]) for r in rows[1:]]
    except (IndexError, ValueError) as exc:
        raise ParseError(f"bad sample row: {exc}") from exc
    if len(xs) < 2:
        raise ParseError("need at least two samples to infer the spacing")
    h = xs[1] - xs[0]
    if not h > 0.0:
        raise ParseError("x must be strictly increasing")
    for i in range(1, len(xs)):
        step = xs[i] - xs[i - 1]
        if abs(step - h) > SPACING_RTOL * abs(h):
            raise ParseError(f"non-uniform spacing at row {i + 1}: {step!r} vs {h!r}")
    try:
        return SampledFunction(xs[0], h, vs)
    except DomainError as exc:
        raise ParseError(str(exc)) from exc


def load_function(path: str | Path) -> StepFunction | RearrangementProfile:
    """Step function or profile from JSON, or a step function from sample CSV."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if path.suffix.lower() == ".csv":
        return ingest_samples(parse_samples_csv(text), 0.0)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    try:
        return function_from_dict(data)
    except DomainError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def load_function_list(path: str | Path) -> list[StepFunction | RearrangementProfile]:
    """A JSON list of functions, ``{"functions": [...]}``, or a single function."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return [load_function(path)]
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if isinstance(data, dict) and "functions" in data:
        data = data["functions"]
    items = data if isinstance(data, list) else [data]
    try:
        return [function_from_dict(d) for d in items]
    except DomainError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def to_json(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=False) + "\n"
