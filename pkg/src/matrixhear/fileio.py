"""Language-neutral file formats.

Matrix file (plain text)::

    # optional comment lines
    N [d]
    a11 a12 ... a1N
    a22 ... a2N
    ...
    aNN

Row ``i`` lists the upper triangle from the diagonal, 17 significant digits.
With ``d`` given, entries beyond the band must be zero.

Spectral file (JSON): ``{"format": "matrixhear-spectra", "version": 1,
"kind": "nested", "spectra": [[...], ...]}`` or, for sliding windows,
``"kind": "sliding"`` with ``d``, ``window_size``, ``head`` and ``windows``.
Every array is ascending.

Signs file (JSON): ``{"format": "matrixhear-signs", "version": 1, "gauge":
"last-entry-positive", ...}`` holding one of ``per_step`` (nested sign
vectors), ``column_signs`` (one sign per column after the first, for the
banded and redundant sliding schemes) or ``head`` plus ``windows`` (minimal
sliding scheme; window signs refer to the gauge of each window's leading
``d x d`` block).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ParseError
from .sliding import SlidingSigns, SlidingSpectralData
from .spectral import Gauge, SignIndicators, SpectralData, SymmetricMatrix

SPECTRA_FORMAT = "matrixhear-spectra"
SIGNS_FORMAT = "matrixhear-signs"
VERSION = 1
REPORT_SCHEMA = 1


def _num(x) -> str:
    return "%.17g" % float(x)


def format_matrix(m: SymmetricMatrix) -> str:
    a = m.full()
    head = f"{m.n}" if m.bandwidth is None else f"{m.n} {m.bandwidth}"
    rows = [" ".join(_num(v) for v in a[i, i:]) for i in range(m.n)]
    return "\n".join([head] + rows) + "\n"


def parse_matrix(text: str) -> SymmetricMatrix:
    lines = [(k, ln.split()) for k, ln in enumerate(text.splitlines(), start=1)
             if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ParseError("empty matrix file", 1)
    k0, head = lines[0]
    try:
        nums = [int(t) for t in head]
    except ValueError:
        raise ParseError("header must be 'N' or 'N d'", k0) from None
    if len(nums) not in (1, 2) or nums[0] < 1 or (len(nums) == 2 and nums[1] < 0):
        raise ParseError("header must be 'N' or 'N d'", k0)
    n = nums[0]
    d = nums[1] if len(nums) == 2 else None
    rows = lines[1:]
    if len(rows) != n:
        line = rows[n][0] if len(rows) > n else (rows[-1][0] + 1 if rows else k0 + 1)
        raise ParseError(f"expected {n} rows, got {len(rows)}", line)
    entries = []
    for i, (k, toks) in enumerate(rows):
        if len(toks) != n - i:
            raise ParseError(f"row {i + 1} needs {n - i} values, got {len(toks)}", k)
        try:
            vals = [float(t) for t in toks]
        except ValueError:
            raise ParseError("non-numeric entry", k) from None
        if not np.all(np.isfinite(vals)):
            raise ParseError("non-finite entry", k)
        if d is not None and any(v != 0.0 for v in vals[d + 1:]):
            raise ParseError(f"entry outside bandwidth {d}", k)
        entries.extend(vals)
    return SymmetricMatrix(n, np.array(entries), d)


def _dump(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def _floats(arr):
    return [float(x) for x in np.asarray(arr, dtype=float)]


def format_spectra(data) -> str:
    if isinstance(data, SlidingSpectralData):
        obj = {"format": SPECTRA_FORMAT, "version": VERSION, "kind": "sliding",
               "d": data.d, "window_size": data.window_size,
               "head": [_floats(s) for s in data.head_spectra],
               "windows": [_floats(s) for s in data.window_spectra]}
    else:
        obj = {"format": SPECTRA_FORMAT, "version": VERSION, "kind": "nested",
               "spectra": [_floats(s) for s in data]}
    return _dump(obj)


def canonical_spectra(text: str, digits: int = 12) -> str:
    """Reformat a spectral file with every value rounded to ``digits``
    significant digits relative to the largest magnitude in the file.

    Round trips perturb eigenvalues at the 1e-15 level, so equality of
    spectral files is only meaningful after this normalisation.
    """
    data = parse_spectra(text)
    arrs = (list(data.head_spectra) + list(data.window_spectra)
            if isinstance(data, SlidingSpectralData) else list(data))
    scale = max((float(np.max(np.abs(a))) for a in arrs if a.size), default=0.0)
    decimals = digits - 1 - (int(np.floor(np.log10(scale))) if scale > 0 else 0)

    def rnd(a):
        return np.round(a, decimals) + 0.0

    if isinstance(data, SlidingSpectralData):
        data = SlidingSpectralData(tuple(rnd(a) for a in data.head_spectra),
                                   tuple(rnd(a) for a in data.window_spectra),
                                   data.window_size, data.d)
    else:
        data = SpectralData(tuple(rnd(a) for a in data))
    return format_spectra(data)


def _load_json(text, fmt):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    if not isinstance(obj, dict) or obj.get("format") != fmt:
        raise ParseError(f"not a {fmt} file")
    if obj.get("version") != VERSION:
        raise ParseError(f"unsupported version {obj.get('version')!r}")
    return obj


def _ascending(arrs, what):
    out = []
    for k, s in enumerate(arrs):
        try:
            a = np.asarray(s, dtype=float).ravel()
        except (TypeError, ValueError):
            raise ParseError(f"{what} {k + 1} is not numeric") from None
        if np.any(np.diff(a) < 0) or not np.all(np.isfinite(a)):
            raise ParseError(f"{what} {k + 1} is not ascending and finite")
        out.append(a)
    return out


def parse_spectra(text: str):
    obj = _load_json(text, SPECTRA_FORMAT)
    try:
        if obj.get("kind", "nested") == "nested":
            return SpectralData(tuple(_ascending(obj["spectra"], "spectrum")))
        if obj["kind"] == "sliding":
            return SlidingSpectralData(tuple(_ascending(obj["head"], "head spectrum")),
                                       tuple(_ascending(obj["windows"], "window spectrum")),
                                       int(obj["window_size"]), int(obj["d"]))
    except KeyError as exc:
        raise ParseError(f"missing field {exc.args[0]!r}") from None
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    raise ParseError(f"unknown kind {obj['kind']!r}")


def format_signs(signs=None, column_signs=None, d=None) -> str:
    obj = {"format": SIGNS_FORMAT, "version": VERSION, "gauge": Gauge.LAST_ENTRY_POSITIVE.value}
    if isinstance(signs, SignIndicators):
        obj["gauge"] = Gauge(signs.gauge).value
        obj["per_step"] = [[int(x) for x in s] for s in signs]
    elif isinstance(signs, SlidingSigns):
        obj["head"] = [[int(x) for x in s] for s in signs.head]
        obj["windows"] = [[int(x) for x in s] for s in signs.windows]
    if column_signs is not None:
        obj["d"] = d
        obj["column_signs"] = [int(x) for x in column_signs]
    return _dump(obj)


def _sign_lists(arrs, what):
    out = []
    for s in arrs:
        a = np.asarray(s).ravel()
        if a.size and not np.all(np.isin(a, (-1, 1))):
            raise ParseError(f"{what} must hold only +1 and -1")
        out.append(a.astype(int))
    return out


def parse_signs(text: str) -> dict:
    """Returns a dict with any of ``per_step`` (SignIndicators),
    ``sliding`` (SlidingSigns), ``column_signs`` (list) and ``d``."""
    obj = _load_json(text, SIGNS_FORMAT)
    try:
        gauge = Gauge(obj.get("gauge", Gauge.LAST_ENTRY_POSITIVE.value))
    except ValueError:
        raise ParseError(f"unknown gauge {obj.get('gauge')!r}") from None
    out = {"gauge": gauge}
    try:
        if "per_step" in obj:
            out["per_step"] = SignIndicators(tuple(_sign_lists(obj["per_step"], "per_step")), gauge)
        if "windows" in obj:
            out["sliding"] = SlidingSigns(tuple(_sign_lists(obj.get("head", []), "head")),
                                          tuple(_sign_lists(obj["windows"], "windows")))
        if "column_signs" in obj:
            out["column_signs"] = [int(x) for x in _sign_lists([obj["column_signs"]], "column_signs")[0]]
            out["d"] = obj.get("d")
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    return out


def read_text(path) -> str:
    return Path(path).read_text(encoding="utf-8")


def write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def report_line(event: str, **fields) -> str:
    """One JSON-lines record; numpy values are converted to plain JSON."""

    def plain(x):
        if isinstance(x, dict):
            return {str(k): plain(v) for k, v in x.items()}
        if isinstance(x, (list, tuple, np.ndarray)):
            return [plain(v) for v in x]
        if isinstance(x, (np.integer,)):
            return int(x)
        if isinstance(x, (np.floating,)):
            return float(x)
        if isinstance(x, np.bool_):
            return bool(x)
        return x

    return json.dumps({"schema": REPORT_SCHEMA, "event": event, **plain(fields)})
