"""Command-line interface.

Exit codes: 0 ok, 1 other reconstruction failure, 2 usage, 3 parse error,
4 not regular, 5 no solution, 6 ambiguous, 7 inconsistent or not
interlacing, 8 gauge ambiguous, 9 not a pentadiagonal step.
Set ``MATRIXHEAR_LOG`` (``DEBUG``, ``INFO``, ...) for log output on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import fileio
from .banded import ALPHA_TOL, alpha_condition, column_signs_of, reconstruct_banded
from .curves import DEFAULT_SAMPLES, format_curves, pentadiagonal_step_context, trace_curves
from .errors import (
    Ambiguous,
    GaugeAmbiguous,
    Inconsistent,
    NoSolution,
    NotInterlacing,
    NotPentaStep,
    NotRegular,
    ParseError,
    ReconstructionError,
)
from .oracle import InstanceSpec, gen_random_banded
from .sliding import (
    SlidingSpectralData,
    data_counts,
    extract_sliding,
    extract_sliding_signs,
    reconstruct_sliding_minimal,
    reconstruct_sliding_optimal,
)
from .spectral import (
    REGULAR_TOL,
    Gauge,
    SymmetricMatrix,
    as_array,
    eig_sym,
    extract_sign_indicators,
    extract_spectral_data,
)
from .telescopic import reconstruct_full, spectrum_residual

log = logging.getLogger("matrixhear")

METHODS = ("telescopic", "banded", "penta-lines", "penta-conics",
           "sliding-minimal", "sliding-optimal")

EXIT_OK, EXIT_OTHER, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 3
EXIT_NOT_REGULAR, EXIT_NO_SOLUTION, EXIT_AMBIGUOUS = 4, 5, 6
EXIT_INCONSISTENT, EXIT_GAUGE, EXIT_NOT_PENTA = 7, 8, 9

_EXIT_FOR = [
    (ParseError, EXIT_PARSE),
    (NotRegular, EXIT_NOT_REGULAR),
    (NoSolution, EXIT_NO_SOLUTION),
    (Ambiguous, EXIT_AMBIGUOUS),
    (Inconsistent, EXIT_INCONSISTENT),
    (NotInterlacing, EXIT_INCONSISTENT),
    (GaugeAmbiguous, EXIT_GAUGE),
    (NotPentaStep, EXIT_NOT_PENTA),
]


class UsageError(Exception):
    pass


def exit_code_for(exc) -> int:
    for cls, code in _EXIT_FOR:
        if isinstance(exc, cls):
            return code
    return EXIT_OTHER


def _parse_inline_signs(text):
    """``"+-++"`` or ``"1,-1,1"``."""
    text = text.strip()
    if text and set(text) <= {"+", "-"}:
        return [1 if c == "+" else -1 for c in text]
    try:
        vals = [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"cannot read column signs {text!r}") from None
    if not all(v in (1, -1) for v in vals):
        raise UsageError("column signs must be +1 or -1")
    return vals


def _emit(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        fileio.write_text(path, text)


# -- extract ----------------------------------------------------------------


def cmd_extract(args) -> int:
    m = fileio.parse_matrix(fileio.read_text(args.matrix))
    d = args.d if args.d is not None else m.bandwidth
    if args.window is not None:
        if d is None:
            raise UsageError("--window needs --d or a banded matrix file")
        data = extract_sliding(m, d, args.window)
    else:
        data = extract_spectral_data(m)
    _emit(args.output, fileio.format_spectra(data))
    if args.signs:
        if args.window is not None and args.window == d + 1:
            text = fileio.format_signs(extract_sliding_signs(m, d))
        elif args.window is not None:
            text = fileio.format_signs(column_signs=column_signs_of(m, d), d=d)
        else:
            per = extract_sign_indicators(m, Gauge(args.gauge), args.tol)
            cs = column_signs_of(m, d) if d is not None else None
            text = fileio.format_signs(per, column_signs=cs, d=d)
        fileio.write_text(args.signs, text)
    log.info("extracted %s", args.matrix)
    return EXIT_OK


# -- reconstruct ------------------------------------------------------------


def _load_sign_data(args):
    signs = fileio.parse_signs(fileio.read_text(args.signs)) if args.signs else {}
    if args.column_signs:
        signs["column_signs"] = _parse_inline_signs(args.column_signs)
    return signs


def _default_method(data):
    if isinstance(data, SlidingSpectralData):
        return "sliding-minimal" if data.minimal else "sliding-optimal"
    return "telescopic"


def _need(signs, key, method):
    if key not in signs:
        raise UsageError(f"method {method} needs {key.replace('_', ' ')}")
    return signs[key]


def run_reconstruct(data, method, signs, d=None, eps=None, tol=REGULAR_TOL):
    """Reconstruct and return ``(matrix, report_records)``."""
    records = []
    sliding = isinstance(data, SlidingSpectralData)
    if sliding != method.startswith("sliding"):
        raise UsageError(f"method {method} does not fit this spectral file")
    if method == "telescopic":
        m, steps = reconstruct_full(data, _need(signs, "per_step", method), tol, full_output=True)
    elif method in ("banded", "penta-lines", "penta-conics"):
        if method != "banded":
            d = 2
        if d is None:
            d = signs.get("d")
        if d is None:
            raise UsageError("method banded needs --d")
        inner = {"banded": "search", "penta-lines": "lines", "penta-conics": "conics"}[method]
        m, steps = reconstruct_banded(data, d, _need(signs, "column_signs", method), eps,
                                      full_output=True, method=inner)
    elif method == "sliding-minimal":
        m = reconstruct_sliding_minimal(data, _need(signs, "sliding", method))
        steps = []
    else:
        m, counts = reconstruct_sliding_optimal(data, _need(signs, "column_signs", method),
                                                full_output=True)
        steps = []
        records += [{"event": "window", "k": k + 1, "candidates": c} for k, c in enumerate(counts)]
    for st in steps:
        records.append({"event": "step", "n": st.n, "kind": st.kind, "signs": list(st.signs),
                        "candidates": st.candidates, "residual": st.spectrum_residual,
                        "flags": st.flags})
    if sliding:
        a = m.full()
        w = data.window_size
        res = [spectrum_residual(a[k:k + w, k:k + w], s) for k, s in enumerate(data.window_spectra)]
        res += [spectrum_residual(a[:k + 1, :k + 1], s) for k, s in enumerate(data.head_spectra)]
        counts = data_counts(data.N, data.d)
        records.append({"event": "counts", "values": data.count(), **counts})
    else:
        a = m.full()
        res = [spectrum_residual(a[:k + 1, :k + 1], s) for k, s in enumerate(data)]
    records.append({"event": "result", "status": "ok", "method": method,
                    "max_spectrum_residual": max(res)})
    return m, records


def cmd_reconstruct(args) -> int:
    data = fileio.parse_spectra(fileio.read_text(args.spectra))
    method = args.method or _default_method(data)
    signs = _load_sign_data(args)
    lines = []
    try:
        m, records = run_reconstruct(data, method, signs, args.d, args.eps, args.tol)
    except Ambiguous as exc:
        branches = [SymmetricMatrix.from_array(as_array(b)).entries.tolist() for b in exc.branches]
        lines.append(fileio.report_line("ambiguous", message=str(exc), branches=branches))
        _write_report(args.report, lines)
        raise
    except ReconstructionError as exc:
        lines.append(fileio.report_line("error", type=type(exc).__name__, message=str(exc)))
        _write_report(args.report, lines)
        raise
    _emit(args.output, fileio.format_matrix(m))
    lines += [fileio.report_line(r.pop("event"), **r) for r in records]
    _write_report(args.report, lines)
    return EXIT_OK


def _write_report(path, lines):
    if path:
        fileio.write_text(path, "\n".join(lines) + ("\n" if lines else ""))


# -- verify -----------------------------------------------------------------


def _verify_one(job):
    """Round trip one matrix; returns a JSON-ready dict."""
    name, a, method, d = job
    m = SymmetricMatrix.from_array(a, d)
    try:
        if method == "telescopic":
            data = extract_spectral_data(m)
            signs = {"per_step": extract_sign_indicators(m)}
        elif method.startswith("sliding"):
            w = d + 1 if method == "sliding-minimal" else d + 2
            data = extract_sliding(m, d, w)
            signs = ({"sliding": extract_sliding_signs(m, d)} if w == d + 1
                     else {"column_signs": column_signs_of(m, d)})
        else:
            data = extract_spectral_data(m)
            signs = {"column_signs": column_signs_of(m, d)}
        out, _ = run_reconstruct(data, method, signs, d)
        err = float(np.max(np.abs(out.full() - m.full())))
        return {"name": name, "status": "ok", "max_abs_error": err}
    except ReconstructionError as exc:
        return {"name": name, "status": type(exc).__name__, "message": str(exc)}


def cmd_verify(args) -> int:
    method = args.method or "telescopic"
    if method in ("penta-lines", "penta-conics"):
        args.d = 2
    needs_d = method != "telescopic"
    if needs_d and args.d is None and args.random:
        raise UsageError(f"method {method} needs --d")
    jobs = []
    for path in args.matrices:
        m = fileio.parse_matrix(fileio.read_text(path))
        d = args.d if args.d is not None else m.bandwidth
        if needs_d and d is None:
            raise UsageError(f"method {method} needs --d or a banded matrix file")
        jobs.append((path, m.full(), method, d))
    for k in range(args.random):
        spec = InstanceSpec(args.n, args.d, seed=args.seed + k)
        jobs.append((f"seed={args.seed + k}", gen_random_banded(spec).full(), method, args.d))
    if not jobs:
        raise UsageError("nothing to verify: give matrix files or --random")
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_verify_one, jobs))
    else:
        results = [_verify_one(j) for j in jobs]
    worst = 0.0
    bad = 0
    for r in results:
        print(fileio.report_line("verify", **r))
        if r["status"] != "ok" or r["max_abs_error"] > args.max_error:
            bad += 1
        else:
            worst = max(worst, r["max_abs_error"])
    print(fileio.report_line("summary", total=len(results), failed=bad, worst=worst))
    return EXIT_OK if bad == 0 else EXIT_OTHER


# -- trace-curves and bench-alpha -------------------------------------------


def cmd_trace_curves(args) -> int:
    m = fileio.parse_matrix(fileio.read_text(args.matrix))
    minor, mu = pentadiagonal_step_context(m, args.step)
    _emit(args.output, format_curves(trace_curves(minor, mu, args.samples)))
    return EXIT_OK


def cmd_bench_alpha(args) -> int:
    """Count alpha-condition hits over every step of random pentadiagonal matrices."""
    hits, steps = 0, 0
    for k in range(args.count):
        a = gen_random_banded(InstanceSpec(args.n, 2, seed=args.seed + k)).full()
        for n in range(3, args.n):
            steps += 1
            if alpha_condition(eig_sym(a[:n, :n]), args.alpha_tol):
                hits += 1
                log.info("alpha-condition at seed %d step %d", args.seed + k, n)
    print(json.dumps({"matrices": args.count, "n": args.n, "steps": steps, "alpha_hits": hits}))
    return EXIT_OK


# -- entry point ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="matrixhear",
                                description="Rebuild symmetric matrices from minor spectra.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--d", type=int, help="bandwidth")
        sp.add_argument("--tol", type=float, default=REGULAR_TOL, help="regularity tolerance")
        sp.add_argument("--gauge", choices=[g.value for g in Gauge],
                        default=Gauge.LAST_ENTRY_POSITIVE.value)
        sp.add_argument("--seed", type=int, default=0)

    e = sub.add_parser("extract", help="matrix file -> spectral file (+ signs)")
    e.add_argument("matrix")
    e.add_argument("-o", "--output", default="-")
    e.add_argument("--signs", help="also write a signs file")
    e.add_argument("--window", type=int, help="sliding window size (d+1 or d+2)")
    common(e)
    e.set_defaults(func=cmd_extract)

    r = sub.add_parser("reconstruct", help="spectral file + signs -> matrix file")
    r.add_argument("spectra")
    r.add_argument("-o", "--output", default="-")
    r.add_argument("--signs", help="signs file")
    r.add_argument("--column-signs", help="inline column signs, e.g. '+-+' or '1,-1,1'")
    r.add_argument("--method", choices=METHODS)
    r.add_argument("--eps", type=float)
    r.add_argument("--report", help="JSON-lines report path")
    common(r)
    r.set_defaults(func=cmd_reconstruct)

    v = sub.add_parser("verify", help="round-trip matrices through extract and reconstruct")
    v.add_argument("matrices", nargs="*")
    v.add_argument("--method", choices=METHODS)
    v.add_argument("--random", type=int, default=0, help="also test this many seeded instances")
    v.add_argument("--n", type=int, default=8)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--max-error", type=float, default=1e-8)
    common(v)
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("trace-curves", help="CSV samples of the curves of one pentadiagonal step")
    t.add_argument("matrix")
    t.add_argument("--step", type=int, required=True, help="size n of the minor being grown")
    t.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    t.add_argument("-o", "--output", default="-")
    common(t)
    t.set_defaults(func=cmd_trace_curves)

    b = sub.add_parser("bench-alpha", help="alpha-condition incidence on random pentadiagonals")
    b.add_argument("--count", type=int, default=1000)
    b.add_argument("--n", type=int, default=10)
    b.add_argument("--alpha-tol", type=float, default=ALPHA_TOL)
    common(b)
    b.set_defaults(func=cmd_bench_alpha)
    return p


def main(argv=None) -> int:
    level = os.environ.get("MATRIXHEAR_LOG")
    if level:
        logging.basicConfig(level=level.upper(), stream=sys.stderr,
                            format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"matrixhear: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ReconstructionError, ValueError) as exc:
        code = exit_code_for(exc) if isinstance(exc, ReconstructionError) else EXIT_OTHER
        print(f"matrixhear: {type(exc).__name__}: {exc}", file=sys.stderr)
        return code
    except OSError as exc:
        print(f"matrixhear: {exc}", file=sys.stderr)
        return EXIT_OTHER


if __name__ == "__main__":
    sys.exit(main())
