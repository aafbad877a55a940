"""Sampled plane curves of one pentadiagonal step, for plotting.

The plane holds the last two entries ``(x, y)`` of the new column.  Curves:
the circle of radius ``R``, the ``2n`` lines ``<w_r, (x, y)> = +-xi_r``, the
two conics and the candidate points.
"""

from __future__ import annotations

import numpy as np

from .banded import _xi_and_r2, conic_forms, penta_lines_step
from .errors import NotPentaStep
from .spectral import as_array, eig_sym, step_scalars

DEFAULT_SAMPLES = 201


def pentadiagonal_step_context(m, step):
    """Minor ``A^(step)`` and ``sigma(A^(step+1))`` of a matrix whose new column
    is supported on its last two entries."""
    a = as_array(m)
    N = a.shape[0]
    if not 2 <= step < N:
        raise NotPentaStep(f"step {step} needs 2 <= step < {N}")
    col = a[:step, step]
    if np.any(col[:-2] != 0.0):
        raise NotPentaStep(f"column {step + 1} has entries outside the pentadiagonal band")
    minor = a[:step, :step]
    outside = np.abs(np.subtract.outer(np.arange(step), np.arange(step))) > 2
    if np.any(outside & (minor != 0.0)):
        raise NotPentaStep("the minor is not pentadiagonal")
    return minor, eig_sym(a[: step + 1, : step + 1]).values


def _conic_samples(q, samples):
    """Polar samples of ``a x^2 + 2 b x y + c y^2 = rhs`` (where defined)."""
    t = np.linspace(0.0, 2.0 * np.pi, samples)
    c, s = np.cos(t), np.sin(t)
    den = q.a * c * c + 2.0 * q.b * c * s + q.c * s * s
    with np.errstate(divide="ignore", invalid="ignore"):
        r2 = q.rhs / den
    ok = np.isfinite(r2) & (r2 >= 0)
    r = np.sqrt(r2[ok])
    return t[ok], r * c[ok], r * s[ok]


def trace_curves(minor, sigma_np1, samples=DEFAULT_SAMPLES, extent=1.5):
    """Rows ``(curve_id, t, x, y)``.

    Lines are sampled over ``|t| <= extent * R`` along their direction;
    circle and conics use the polar angle as ``t``.  Candidate points carry
    their index as ``t``.
    """
    A = as_array(minor)
    eig = eig_sym(A)
    xi, R2, _, _ = _xi_and_r2(eig, sigma_np1)
    R = np.sqrt(R2)
    rows = []
    t = np.linspace(0.0, 2.0 * np.pi, samples)
    rows += [("circle", ti, R * np.cos(ti), R * np.sin(ti)) for ti in t]
    W = eig.vectors[-2:, :]
    span = np.linspace(-extent * max(R, 1e-12), extent * max(R, 1e-12), samples)
    for r in range(W.shape[1]):
        w = W[:, r]
        nw = np.linalg.norm(w)
        if nw == 0:
            continue
        u = w / nw
        perp = np.array([-u[1], u[0]])
        for tag, off in (("+", xi[r]), ("-", -xi[r])):
            base = off / nw * u
            rows += [(f"line{r + 1}{tag}", ti, *(base + ti * perp)) for ti in span]
    q1, q2 = conic_forms(A, step_scalars(eig.values, sigma_np1))
    for name, q in (("conic1", q1), ("conic2", q2)):
        ts, xs, ys = _conic_samples(q, samples)
        rows += [(name, ti, x, y) for ti, x, y in zip(ts, xs, ys)]
    cands = penta_lines_step(eig, sigma_np1)
    rows += [("candidate", float(k), c[-2], c[-1]) for k, c in enumerate(cands.columns)]
    return rows


def format_curves(rows) -> str:
    out = ["curve_id,t,x,y"]
    out += ["%s,%.17g,%.17g,%.17g" % (cid, t, x, y) for cid, t, x, y in rows]
    return "\n".join(out) + "\n"
