"""Cauchy-matrix machinery behind the column-norm formulas.

``C(x, y)[i, j] = 1 / (x[i] - y[j])``.  In a telescopic step ``x`` holds the
first ``n`` eigenvalues of the larger minor and ``y`` the spectrum of the
smaller one.  Products of spectral gaps are accumulated as log-magnitudes with
a separate sign so that long products neither overflow nor underflow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IllConditioned, NotInterlacing
from .spectral import as_spectrum

GAP_TOL = 1e-10
NEGATIVE_TOL = 1e-12


def _gap_scale(*arrays):
    vals = np.concatenate([np.ravel(a) for a in arrays])
    return max(1.0, float(np.ptp(vals))) if vals.size else 1.0


@dataclass(frozen=True)
class CauchyPair:
    x: np.ndarray
    y: np.ndarray
    gap_tol: float = GAP_TOL

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).ravel()
        y = np.asarray(self.y, dtype=float).ravel()
        if x.size != y.size:
            raise ValueError("x and y must have the same length")
        if np.any(np.diff(x) <= 0) or np.any(np.diff(y) <= 0):
            raise ValueError("x and y must be strictly increasing")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        gap = np.min(np.abs(np.subtract.outer(x, y)))
        if gap < self.gap_tol * _gap_scale(x, y):
            raise IllConditioned(f"|x_i - y_j| = {gap:.3g} below the gap tolerance")

    @property
    def n(self):
        return self.x.size

    def matrix(self):
        return cauchy_matrix(self.x, self.y)


def cauchy_matrix(x, y):
    return 1.0 / np.subtract.outer(np.asarray(x, float), np.asarray(y, float))


def signed_log_prod(factors, axis=-1):
    """``(sign, log|prod|)`` of a product along ``axis``."""
    factors = np.asarray(factors, dtype=float)
    sign = np.prod(np.sign(factors), axis=axis)
    with np.errstate(divide="ignore"):
        logmag = np.sum(np.log(np.abs(factors)), axis=axis)
    return sign, logmag


def _ratio_of_products(num, den):
    """Row-wise ``prod(num) / prod(den)``; rows may be padded with ones."""
    sn, ln = signed_log_prod(num)
    sd, ld = signed_log_prod(den)
    return sn * sd * np.exp(ln - ld)


def _off_diagonal(diff):
    """Drop the diagonal of a square difference matrix, one row per point."""
    n = diff.shape[0]
    if n <= 1:
        return np.ones((n, 1))
    return diff[~np.eye(n, dtype=bool)].reshape(n, n - 1)


def cauchy_inverse(cp: CauchyPair) -> np.ndarray:
    """Closed-form inverse of ``C(x, y)``.

    ``inv[i, j] = L_i R_j / (y_i - x_j)`` with
    ``L_i = prod_k (y_i - x_k) / prod_{k != i} (y_i - y_k)`` and
    ``R_j = prod_k (x_j - y_k) / prod_{k != j} (x_j - x_k)``.
    """
    x, y = cp.x, cp.y
    left = _ratio_of_products(np.subtract.outer(y, x), _off_diagonal(np.subtract.outer(y, y)))
    right = _ratio_of_products(np.subtract.outer(x, y), _off_diagonal(np.subtract.outer(x, x)))
    return left[:, None] * right[None, :] / np.subtract.outer(y, x)


def _check_pair(sigma_n, sigma_np1):
    lam, mu = as_spectrum(sigma_n), as_spectrum(sigma_np1)
    if mu.size != lam.size + 1:
        raise ValueError("sigma_np1 must have exactly one more value than sigma_n")
    return lam, mu


def xi_squared(sigma_n, sigma_np1) -> np.ndarray:
    """Squared projections of the new column on the eigenvectors of the smaller minor.

    ``xi_r^2 = -prod_k (lam_r - mu_k) / prod_{k != r} (lam_r - lam_k)``.
    Tiny negative round-off is clipped to zero; anything below ``-1e-12``
    relative to the spectral scale means the spectra do not interlace.
    """
    lam, mu = _check_pair(sigma_n, sigma_np1)
    vals = -_ratio_of_products(np.subtract.outer(lam, mu), _off_diagonal(np.subtract.outer(lam, lam)))
    scale = _gap_scale(lam, mu) ** 2
    if np.any(vals < -NEGATIVE_TOL * scale):
        raise NotInterlacing(f"negative squared projection {vals.min():.3g}")
    return np.maximum(vals, 0.0)


def eigvec_last_entry_sq(sigma_n, sigma_np1) -> np.ndarray:
    """Squared last entries of the eigenvectors of the larger minor.

    ``|b_k|^2 = prod_r (mu_k - lam_r) / prod_{r != k} (mu_k - mu_r)``, an
    instance of the eigenvector-eigenvalue identity.
    """
    lam, mu = _check_pair(sigma_n, sigma_np1)
    vals = _ratio_of_products(np.subtract.outer(mu, lam), _off_diagonal(np.subtract.outer(mu, mu)))
    if np.any(vals < -NEGATIVE_TOL):
        raise NotInterlacing(f"negative squared eigenvector entry {vals.min():.3g}")
    return np.clip(vals, 0.0, 1.0)


def consistency_residual(sigma_n, sigma_np1, h) -> float:
    """Residual of the last secular equation after solving the first ``n`` with ``C^-1``.

    The first ``n`` equations are solved with the explicit Cauchy inverse, not
    with the closed-form ``xi_squared``, so a vanishing residual is a genuine
    check of the over-determined system.
    """
    lam, mu = _check_pair(sigma_n, sigma_np1)
    inv = cauchy_inverse(CauchyPair(mu[:-1], lam, gap_tol=0.0))
    xi2 = inv @ (mu[:-1] - h)
    top = mu[-1]
    lhs = top - h
    rhs = np.sum(xi2 / (top - lam))
    return float(abs(lhs - rhs))


# -- identity suite ---------------------------------------------------------


def elementary_symmetric(values, m):
    """``e_m`` of ``values`` (``e_0 = 1``)."""
    if m == 0:
        return 1.0
    if m > len(values):
        return 0.0
    coeffs = np.poly(values)  # monic, coeffs[m] = (-1)^m e_m
    return float((-1) ** m * coeffs[m])


def vandermonde(t):
    """``V[i, j] = t_j ** i``: rows are powers, columns are points."""
    t = np.asarray(t, dtype=float)
    return np.vander(t, increasing=True).T


def vandermonde_inverse(t):
    """Closed-form inverse of :func:`vandermonde`.

    ``inv[i, j] = (-1)^(n-j) e_{n-j}(t without t_i) / prod_{k != i} (t_i - t_k)``
    with 1-based ``j``.
    """
    t = np.asarray(t, dtype=float)
    n = t.size
    out = np.empty((n, n))
    for i in range(n):
        rest = np.delete(t, i)
        den = np.prod(t[i] - rest)
        for j in range(1, n + 1):
            out[i, j - 1] = (-1) ** (n - j) * elementary_symmetric(rest, n - j) / den
    return out


def power_sum_over_differences(t, m):
    """``sum_k t_k^m / prod_{i != k} (t_k - t_i)``."""
    t = np.asarray(t, dtype=float)
    den = np.prod(_off_diagonal(np.subtract.outer(t, t)), axis=1)
    terms = t ** m / den
    return float(terms.sum()), float(np.abs(terms).sum())


def _rel(lhs, rhs, scale):
    return float(abs(lhs - rhs) / (1.0 + abs(rhs) + scale))


def cauchy_identity_suite(cp: CauchyPair, x_extra=None) -> dict:
    """Evaluate both sides of the Cauchy/Vandermonde identities numerically.

    Each entry is a residual normalised by the magnitude of the summands, so
    it measures round-off rather than the size of the numbers involved.
    ``x_extra`` is the additional point used by the column-norm identity; by
    default it is placed one unit above every entry of ``x`` and ``y``.
    Identities that divide by ``x`` or ``y`` are skipped (``None``) when an
    entry is zero.  ``"max"`` is the largest residual computed.
    """
    x, y, n = cp.x, cp.y, cp.n
    c = cp.matrix()
    inv = cauchy_inverse(cp)
    absc, absinv = np.abs(c), np.abs(inv)
    res = {}

    res["inverse"] = float(np.max(np.abs(c @ inv - np.eye(n)) / (1.0 + absc @ absinv)))
    res["element_sum"] = _rel(inv.sum(), np.sum(x - y), absinv.sum())

    nonzero = np.all(x != 0) and np.all(y != 0)
    if nonzero:
        px, py = np.prod(x), np.prod(y)
        s = np.sum(x - y)
        scale_1x = (absinv @ (1.0 / np.abs(x))).sum()
        scale_1y = ((1.0 / np.abs(y)) @ absinv).sum()
        res["inverse_x_sum"] = max(
            _rel((inv / x[None, :]).sum(), 1.0 - py / px, scale_1x),
            _rel((inv / y[:, None]).sum(), px / py - 1.0, scale_1y),
        )
        res["weighted_inverse_sum"] = max(
            _rel((y[:, None] * inv / x[None, :]).sum(), py / px * s,
                 (np.abs(y)[:, None] * absinv / np.abs(x)[None, :]).sum()),
            _rel((inv * x[None, :] / y[:, None]).sum(), px / py * s,
                 (absinv * np.abs(x)[None, :] / np.abs(y)[:, None]).sum()),
        )
        res["combined"] = _rel(((inv @ (x - s)) / y).sum(), s,
                               ((absinv @ np.abs(x - s)) / np.abs(y)).sum())
    else:
        res["inverse_x_sum"] = res["weighted_inverse_sum"] = res["combined"] = None

    # C = -P Vx^-1 Vy Q^-1
    p_diag = np.prod(_off_diagonal(np.subtract.outer(x, x)), axis=1)
    q_diag = np.prod(np.subtract.outer(y, x), axis=1)
    vx_inv, vy = vandermonde_inverse(x), vandermonde(y)
    rebuilt = -(p_diag[:, None] * (vx_inv @ vy)) / q_diag[None, :]
    scale = (np.abs(p_diag)[:, None] * (np.abs(vx_inv) @ np.abs(vy))) / np.abs(q_diag)[None, :]
    res["vandermonde_decomposition"] = float(np.max(np.abs(rebuilt - c) / (1.0 + scale)))

    vx = vandermonde(x)
    res["vandermonde_inverse"] = float(
        np.max(np.abs(vx_inv @ vx - np.eye(n)) / (1.0 + np.abs(vx_inv) @ np.abs(vx)))
    )

    worst = 0.0
    for m in range(n + 1):
        got, scale = power_sum_over_differences(x, m)
        want = 0.0 if m < n - 1 else (1.0 if m == n - 1 else float(x.sum()))
        worst = max(worst, _rel(got, want, scale))
    res["power_sums"] = worst

    if np.all(x != 0):
        den = x * np.prod(_off_diagonal(np.subtract.outer(x, x)), axis=1)
        terms = 1.0 / den
        res["reciprocal_sum"] = _rel(terms.sum(), -((-1) ** n) / np.prod(x), np.abs(terms).sum())
    else:
        res["reciprocal_sum"] = None

    # column-norm identity: x has an extra point, h = sum(x) - sum(y)
    if x_extra is None:
        x_extra = max(np.max(np.abs(x)), np.max(np.abs(y))) + 1.0
    xs = np.append(x, x_extra)
    h = xs.sum() - y.sum()
    lhs = inv @ (x - h)
    rhs = -_ratio_of_products(np.subtract.outer(y, xs), _off_diagonal(np.subtract.outer(y, y)))
    scale = absinv @ np.abs(x - h)
    res["column_norm"] = float(np.max(np.abs(lhs - rhs) / (1.0 + np.abs(rhs) + scale)))

    res["max"] = max(v for v in res.values() if v is not None)
    return res

