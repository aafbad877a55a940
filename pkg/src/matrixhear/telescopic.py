"""Inductive reconstruction: grow ``A^(n)`` to ``A^(n+1)`` one column at a time.

Each step needs the eigendecomposition of the current minor, the spectrum of
the next one and one sign per eigenvector.  The new column is
``a = sum_r s_r xi_r v(r)`` and the eigenvectors of the grown minor follow from
``b_{k,r} = s_r xi_r / (mu_k - lam_r) * b_{k,n+1}``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .cauchy import xi_squared
from .errors import DegenerateM2, Inconsistent, NotInterlacing, NotRegular
from .spectral import (
    INTERLACE_TOL,
    REGULAR_TOL,
    EigDecomp,
    Gauge,
    SignIndicators,
    SpectralData,
    SymmetricMatrix,
    _sign,
    apply_gauge,
    as_array,
    as_spectrum,
    interlacing_violation,
    pair_gaps,
)

HARD_GAP_TOL = 1e-10


class NearIrregularWarning(UserWarning):
    """A step ran with spectral gaps between the hard and soft regularity limits."""


@dataclass(frozen=True)
class StepResult:
    """Outcome of one telescopic step.

    ``b_coeffs[k]`` holds the coordinates of the ``k``-th new eigenvector in
    the basis ``(v(1), 0), ..., (v(n), 0), e_{n+1}``.
    """

    column: np.ndarray
    h: float
    eig_next: EigDecomp
    b_coeffs: np.ndarray
    warnings: tuple = ()

    def assemble(self, prev) -> np.ndarray:
        """``A^(n+1)`` built from the previous minor, the column and ``h``."""
        prev = as_array(prev)
        n = prev.shape[0]
        out = np.empty((n + 1, n + 1))
        out[:n, :n] = prev
        out[:n, n] = out[n, :n] = self.column
        out[n, n] = self.h
        return out


@dataclass(frozen=True)
class StepRecord:
    """Per-step provenance kept by the chained reconstructions."""

    n: int
    signs: tuple
    kind: str = "regular"
    spectrum_residual: float = 0.0
    candidates: int = 1
    flags: dict = field(default_factory=dict)


def _scale(*spectra):
    vals = np.concatenate([np.ravel(s) for s in spectra])
    return max(1.0, float(np.ptp(vals))) if vals.size else 1.0


def check_step(sigma_n, sigma_np1, tol=REGULAR_TOL):
    """Validate a spectrum pair; returns warning strings for near-irregular gaps."""
    lam, mu = as_spectrum(sigma_n), as_spectrum(sigma_np1)
    if mu.size != lam.size + 1:
        raise ValueError("sigma_np1 must have exactly one more value than sigma_n")
    if interlacing_violation(lam, mu) > INTERLACE_TOL:
        raise NotInterlacing("spectra do not interlace")
    if lam.size == 0:
        return ()
    scale = _scale(lam, mu)
    inner, cross = pair_gaps(lam, mu)
    gap = min(inner, cross)
    if gap < HARD_GAP_TOL * scale:
        raise NotRegular(f"spectral gap {gap:.3g} below {HARD_GAP_TOL:g}")
    if gap < tol * scale:
        return (f"near-irregular step: gap {gap:.3g}",)
    return ()


def basis_step(vectors, sigma_n, sigma_np1, signs, xi2=None):
    """Telescopic step in an arbitrary orthonormal basis.

    ``vectors`` is ``(rows, k)`` with orthonormal columns spanning the part of
    the minor the new column lives in; ``sigma_n`` holds the ``k`` matching
    eigenvalues and ``sigma_np1`` the ``k + 1`` eigenvalues of the grown
    problem.  Returns ``(column, new_vectors, b)`` where ``new_vectors`` is
    ``(rows + 1, k + 1)``.
    """
    v = np.asarray(vectors, dtype=float)
    lam, mu = as_spectrum(sigma_n), as_spectrum(sigma_np1)
    rows, k = v.shape
    if k == 0:
        new = np.zeros((rows + 1, 1))
        new[-1, 0] = 1.0
        return np.zeros(rows), new, np.ones((1, 1))
    if xi2 is None:
        xi2 = xi_squared(lam, mu)
    proj = np.asarray(signs, dtype=float) * np.sqrt(xi2)
    column = v @ proj
    b = np.empty((k + 1, k + 1))
    b[:, :k] = proj[None, :] / np.subtract.outer(mu, lam)
    b[:, k] = 1.0
    b /= np.linalg.norm(b, axis=1)[:, None]
    new = np.zeros((rows + 1, k + 1))
    new[:rows] = v @ b[:, :k].T
    new[rows] = b[:, k]
    return column, new, b


def telescopic_step(eig_n: EigDecomp, sigma_np1, signs, tol=REGULAR_TOL) -> StepResult:
    """Grow the minor described by ``eig_n`` by one row and column.

    ``signs[r]`` is the sign of ``<a|v(r)>`` in the gauge of ``eig_n``.  Gaps
    below ``1e-10`` (relative) raise ``NotRegular``; gaps below ``tol`` only
    produce a warning.
    """
    lam, mu = as_spectrum(eig_n.values), as_spectrum(sigma_np1)
    signs = np.asarray(signs, dtype=int).ravel()
    if signs.size != lam.size:
        raise ValueError(f"expected {lam.size} signs, got {signs.size}")
    notes = check_step(lam, mu, tol)
    for msg in notes:
        warnings.warn(msg, NearIrregularWarning, stacklevel=2)
    column, new, b = basis_step(eig_n.vectors, lam, mu, signs)
    h = float(mu.sum() - lam.sum())
    vectors = new if Gauge(eig_n.gauge) is Gauge.CUSTOM else apply_gauge(new)
    return StepResult(column, h, EigDecomp(mu.copy(), vectors, eig_n.gauge), b, notes)


def base_decomp(value) -> EigDecomp:
    return EigDecomp(np.array([float(value)]), np.ones((1, 1)))


def _check_chain(sd: SpectralData):
    for n, (small, big) in enumerate(zip(sd, list(sd)[1:]), start=1):
        if interlacing_violation(small, big) > INTERLACE_TOL:
            raise Inconsistent(f"spectra of minors {n} and {n + 1} do not interlace")


def spectrum_residual(matrix, spectrum) -> float:
    """Largest eigenvalue mismatch, relative to ``max(1, diameter)``."""
    got = np.linalg.eigvalsh(as_array(matrix))
    spectrum = np.asarray(spectrum)
    return float(np.max(np.abs(got - spectrum)) / _scale(spectrum))


def reconstruct_full(sd: SpectralData, signs: SignIndicators, tol=REGULAR_TOL,
                     basis_choice=None, full_output=False):
    """Rebuild the matrix from all nested minor spectra and sign indicators.

    Non-regular steps with a single degeneracy block are handed to
    :func:`matrixhear.degenerate.degenerate_step`; the signs for such a step
    are the entries of the full sign vector at the indices of the reduced
    problem.  With ``full_output=True`` a list of :class:`StepRecord` is
    returned alongside the matrix.
    """
    from .degenerate import classify_degeneracy, degenerate_step, reduced_sign_indices

    if len(signs) != len(sd) - 1:
        raise ValueError(f"expected {len(sd) - 1} sign vectors, got {len(signs)}")
    _check_chain(sd)
    a = np.array([[float(sd[0][0])]])
    eig = base_decomp(sd[0][0])
    records = []
    for n in range(1, len(sd)):
        mu = sd[n]
        s = np.asarray(signs[n - 1])
        block = classify_degeneracy(eig.values, mu)
        if block.case is None:
            step = telescopic_step(eig, mu, s, tol)
            used, kind = s, "regular"
        else:
            used = s[reduced_sign_indices(block, n)]
            step = degenerate_step(eig, mu, block, used, basis_choice)
            kind = f"degenerate-{block.case.value}"
        a = step.assemble(a)
        eig = step.eig_next
        records.append(StepRecord(n, tuple(int(x) for x in used), kind,
                                  spectrum_residual(a, mu), 1,
                                  {"warnings": list(step.warnings)}))
    out = SymmetricMatrix.from_array(a)
    return (out, records) if full_output else out


def signs_2to3(m2, col3, tol=REGULAR_TOL):
    """Sign indicators of the third column, read off the matrix entries.

    Returns ``(s1, s2)`` in the last-entry-positive gauge.  With
    ``s = Sign(A12)`` and ``alpha = -s sqrt((lam2 - A11) / (A11 - lam1))``,
    ``s1 = Sign(-s |alpha| A13 + A23)`` and ``s2 = Sign(s A13 + |alpha| A23)``.
    """
    m2 = as_array(m2)
    if m2.shape != (2, 2):
        raise ValueError("m2 must be 2x2")
    a11, a12, a22 = m2[0, 0], m2[0, 1], m2[1, 1]
    a13, a23 = np.asarray(col3, dtype=float).ravel()
    scale = max(1.0, abs(a11), abs(a22), abs(a12))
    if abs(a12) <= tol * scale:
        raise DegenerateM2("A12 vanishes; the 2x2 minor is not regular")
    half = 0.5 * (a11 - a22)
    rad = np.hypot(half, a12)
    # lam2 - a11 = rad - half and a11 - lam1 = rad + half, without cancellation
    if half > 0:
        up, down = a12 * a12 / (rad + half), rad + half
    else:
        up, down = rad - half, a12 * a12 / (rad - half)
    s = 1 if a12 >= 0 else -1
    alpha = np.sqrt(up / down)
    s1 = int(_sign(-s * alpha * a13 + a23))
    s2 = int(_sign(s * a13 + alpha * a23))
    return s1, s2
