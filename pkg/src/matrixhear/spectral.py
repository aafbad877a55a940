"""Core types, the symmetric eigensolver and forward extraction of spectral data.

Indices in this module are 0-based.  ``sigma[n - 1]`` is the spectrum of the
top-left ``n x n`` minor, and the column appended when growing the minor of
size ``n`` is ``A[:n, n]``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import GaugeAmbiguous, NonConvergence, ZeroSpectrum

INTERLACE_TOL = 1e-9
REGULAR_TOL = 1e-7
GAUGE_ZERO_TOL = 1e-10
SHIFT_THRESHOLD = 1e-8
MAX_SWEEPS = 100


class Gauge(str, enum.Enum):
    LAST_ENTRY_POSITIVE = "last-entry-positive"
    CUSTOM = "custom"


@dataclass(frozen=True)
class SymmetricMatrix:
    """Dense real symmetric matrix with optional bandwidth metadata.

    Only the upper triangle is stored (row-major, diagonal included); ``full``
    materialises the symmetric array.  When ``bandwidth`` is set, entries with
    ``|i - j| > bandwidth`` are forced to exactly zero.
    """

    n: int
    entries: np.ndarray
    bandwidth: int | None = None

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float).ravel()
        if self.n < 1:
            raise ValueError("dimension must be >= 1")
        if entries.size != self.n * (self.n + 1) // 2:
            raise ValueError(
                f"expected {self.n * (self.n + 1) // 2} upper-triangle values, got {entries.size}"
            )
        if self.bandwidth is not None:
            if self.bandwidth < 0:
                raise ValueError("bandwidth must be non-negative")
            iu, ju = np.triu_indices(self.n)
            entries[(ju - iu) > self.bandwidth] = 0.0
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_array(cls, array, bandwidth=None):
        a = np.asarray(array, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("expected a square 2-D array")
        return cls(a.shape[0], a[np.triu_indices(a.shape[0])], bandwidth)

    def full(self) -> np.ndarray:
        out = np.zeros((self.n, self.n))
        iu = np.triu_indices(self.n)
        out[iu] = self.entries
        out.T[iu] = self.entries
        return out

    def minor(self, size: int, start: int = 0) -> "SymmetricMatrix":
        """Principal submatrix of ``size`` rows starting at row ``start``."""
        a = self.full()[start:start + size, start:start + size]
        return SymmetricMatrix.from_array(a, self.bandwidth)

    def __array__(self, dtype=None, copy=None):
        out = self.full()
        return out if dtype is None else out.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, SymmetricMatrix):
            return NotImplemented
        return (self.n == other.n and self.bandwidth == other.bandwidth
                and np.array_equal(self.entries, other.entries))

    __hash__ = None


def as_array(m) -> np.ndarray:
    """Dense float array for a ``SymmetricMatrix`` or any square array-like."""
    if isinstance(m, SymmetricMatrix):
        return m.full()
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    return a


def as_spectrum(values) -> np.ndarray:
    s = np.asarray(values, dtype=float).ravel()
    if not np.all(np.isfinite(s)):
        raise ValueError("spectrum contains non-finite values")
    if np.any(np.diff(s) < 0):
        raise ValueError("spectrum must be sorted ascending")
    return s


@dataclass(frozen=True)
class EigDecomp:
    values: np.ndarray
    vectors: np.ndarray
    gauge: Gauge = Gauge.LAST_ENTRY_POSITIVE

    @property
    def n(self) -> int:
        return len(self.values)

    def matrix(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.T


@dataclass(frozen=True)
class SpectralData:
    """Spectra of the nested main minors, ``spectra[k]`` having ``k + 1`` values."""

    spectra: tuple

    def __post_init__(self):
        spectra = tuple(as_spectrum(s) for s in self.spectra)
        for k, s in enumerate(spectra):
            if len(s) != k + 1:
                raise ValueError(f"spectrum {k + 1} has {len(s)} values, expected {k + 1}")
        object.__setattr__(self, "spectra", spectra)

    @property
    def n(self) -> int:
        return len(self.spectra)

    def __getitem__(self, k):
        return self.spectra[k]

    def __len__(self):
        return len(self.spectra)

    def __iter__(self):
        return iter(self.spectra)

    def interlacing_violation(self) -> float:
        """Largest interlacing violation relative to the spectral diameter."""
        worst = 0.0
        for small, big in zip(self.spectra, self.spectra[1:]):
            worst = max(worst, interlacing_violation(small, big))
        return worst


@dataclass(frozen=True)
class SignIndicators:
    """Sign vectors ``per_step[n - 1]`` (length ``n``) for growing minor ``n`` to ``n + 1``."""

    per_step: tuple
    gauge: Gauge = Gauge.LAST_ENTRY_POSITIVE

    def __post_init__(self):
        steps = []
        for k, s in enumerate(self.per_step):
            arr = np.asarray(s, dtype=int).ravel()
            if not np.all(np.abs(arr) == 1):
                raise ValueError("sign indicators must be +1 or -1")
            if len(arr) != k + 1:
                raise ValueError(f"sign vector {k + 1} has length {len(arr)}")
            steps.append(arr)
        object.__setattr__(self, "per_step", tuple(steps))

    def __getitem__(self, k):
        return self.per_step[k]

    def __len__(self):
        return len(self.per_step)


@dataclass(frozen=True)
class StepScalars:
    """Trace-identity quantities for one telescopic step.

    ``cubic_rho`` is ``<a|A^(n)|a>`` and ``inv_rho`` is ``<a|(A^(n) + shift)^-1|a>``;
    ``shift`` is non-zero only when the minor spectrum touched zero and was
    translated to keep the inverse form defined.
    """

    h: float
    R2: float
    cubic_rho: float
    inv_rho: float | None
    shift: float = 0.0


@dataclass(frozen=True)
class RegularityReport:
    min_gap: np.ndarray = field(repr=False)
    min_cross_gap: np.ndarray = field(repr=False)
    tol: float = REGULAR_TOL

    @property
    def regular(self) -> bool:
        return bool(np.all(self.min_gap > self.tol) and np.all(self.min_cross_gap > self.tol))

    def irregular_steps(self):
        """0-based indices ``n`` where minor ``n + 1`` or the pair ``(n + 1, n + 2)`` fails."""
        bad = set(np.flatnonzero(self.min_gap <= self.tol))
        bad |= set(np.flatnonzero(self.min_cross_gap <= self.tol))
        return sorted(int(b) for b in bad)

    def __bool__(self):
        return self.regular


# -- eigensolver ------------------------------------------------------------


try:
    from numba import njit
except ImportError:  # pragma: no cover - pure Python fallback, same arithmetic
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


@njit(cache=True)
def _jacobi_kernel(a, max_sweeps):
    n = a.shape[0]
    v = np.eye(n)
    scale = max(1.0, np.sqrt((a * a).sum()))
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += a[p, q] * a[p, q]
        if np.sqrt(off) <= 1e-16 * n * scale:
            return np.diag(a).copy(), v, True
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    return np.diag(a).copy(), v, False


def apply_gauge(vectors: np.ndarray, gauge=Gauge.LAST_ENTRY_POSITIVE) -> np.ndarray:
    """Flip columns so the last entry with magnitude above 1e-10 is positive."""
    vectors = np.array(vectors, dtype=float)
    if Gauge(gauge) is Gauge.CUSTOM:
        return vectors
    for j in range(vectors.shape[1]):
        nz = np.flatnonzero(np.abs(vectors[:, j]) > GAUGE_ZERO_TOL)
        if nz.size and vectors[nz[-1], j] < 0:
            vectors[:, j] = -vectors[:, j]
    return vectors


def eig_sym(m, gauge=Gauge.LAST_ENTRY_POSITIVE, max_sweeps=MAX_SWEEPS) -> EigDecomp:
    """Eigendecomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Sweeps visit the pairs ``(p, q)``, ``p < q``, in row order, so results are
    reproducible across platforms.  Eigenvalues are returned ascending with the
    requested gauge applied to the eigenvectors.
    """
    a = as_array(m)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    a = 0.5 * (a + a.T)
    values, vectors, converged = _jacobi_kernel(np.ascontiguousarray(a), max_sweeps)
    if not converged:
        raise NonConvergence(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
    order = np.argsort(values, kind="stable")
    return EigDecomp(values[order], apply_gauge(vectors[:, order], gauge), Gauge(gauge))


# -- forward extraction -----------------------------------------------------


def extract_spectral_data(m) -> SpectralData:
    a = as_array(m)
    return SpectralData(tuple(eig_sym(a[:k, :k]).values for k in range(1, a.shape[0] + 1)))


def _sign(x):
    return np.where(np.asarray(x) >= 0, 1, -1)


def has_gauge(values, tol=REGULAR_TOL) -> bool:
    values = np.asarray(values)
    scale = max(1.0, float(np.ptp(values))) if values.size else 1.0
    return values.size < 2 or bool(np.min(np.diff(values)) > tol * scale)


def extract_sign_indicators(m, gauge=Gauge.LAST_ENTRY_POSITIVE, tol=REGULAR_TOL) -> SignIndicators:
    """Signs of the projections of each new column on the gauged minor eigenvectors."""
    a = as_array(m)
    steps = []
    for n in range(1, a.shape[0]):
        eig = eig_sym(a[:n, :n], gauge)
        if Gauge(gauge) is Gauge.LAST_ENTRY_POSITIVE and not has_gauge(eig.values, tol):
            raise GaugeAmbiguous(f"minor of size {n} has a degenerate spectrum")
        steps.append(_sign(eig.vectors.T @ a[:n, n]))
    return SignIndicators(tuple(steps), Gauge(gauge))


# -- spectral relations -----------------------------------------------------


def diameter(*spectra) -> float:
    vals = np.concatenate([np.ravel(s) for s in spectra])
    return float(np.ptp(vals)) if vals.size else 0.0


def interlacing_violation(small, big) -> float:
    """Worst violation of ``big[k] <= small[k] <= big[k + 1]``, relative to the diameter."""
    small, big = np.asarray(small), np.asarray(big)
    scale = max(1.0, diameter(small, big))
    lower = np.max(big[:-1] - small, initial=0.0)
    upper = np.max(small - big[1:], initial=0.0)
    return max(lower, upper, 0.0) / scale


def interlaces(small, big, tol=INTERLACE_TOL) -> bool:
    return interlacing_violation(small, big) <= tol


def _shift_for(values) -> float:
    if np.any(np.abs(values) < SHIFT_THRESHOLD):
        return 1.0 + abs(float(np.min(values)))
    return 0.0


def step_scalars(sigma_n, sigma_np1, minor=None, shift="auto") -> StepScalars:
    """Diagonal entry, squared column norm and the two quadratic-form values.

    With ``shift="auto"`` a spectrum touching zero is translated by
    ``1 + |min(sigma_n)|`` before forming the inverse quadratic form; pass
    ``shift=None`` to get ``ZeroSpectrum`` instead, or a number to force one.
    ``minor`` is accepted for call-site symmetry with the conic step; every
    quantity here follows from the two spectra alone.
    """
    lam, mu = as_spectrum(sigma_n), as_spectrum(sigma_np1)
    if len(mu) != len(lam) + 1:
        raise ValueError("sigma_np1 must have exactly one more value than sigma_n")
    h = mu.sum() - lam.sum()
    R2 = 0.5 * ((mu ** 2).sum() - (lam ** 2).sum() - h * h)
    cubic = ((mu ** 3).sum() - (lam ** 3).sum() - 3.0 * h * R2 - h ** 3) / 3.0

    if shift == "auto":
        c = _shift_for(lam)
    elif shift is None:
        if np.any(np.abs(lam) < SHIFT_THRESHOLD):
            raise ZeroSpectrum("zero eigenvalue in the minor spectrum")
        c = 0.0
    else:
        c = float(shift)
    # det A^(n+1) / det A^(n) as a product of ratios keeps the magnitude tame
    ls, ms = lam + c, mu + c
    ratio = ms[-1] * np.prod(ms[:-1] / ls)
    inv_rho = (h + c) - ratio
    return StepScalars(float(h), float(max(R2, 0.0)), float(cubic), float(inv_rho), float(c))


def check_regular(sd, tol=REGULAR_TOL) -> RegularityReport:
    """Per-minor minimum eigenvalue gap and minimum distance to the next spectrum."""
    spectra = list(sd)
    gaps = np.array([np.min(np.diff(s)) if len(s) > 1 else np.inf for s in spectra])
    cross = np.array([
        np.min(np.abs(np.subtract.outer(s, t))) for s, t in zip(spectra, spectra[1:])
    ])
    return RegularityReport(gaps, cross, tol)


def pair_gaps(sigma_n, sigma_np1):
    """``(min gap within sigma_n, min distance between the two spectra)``."""
    lam, mu = np.asarray(sigma_n), np.asarray(sigma_np1)
    inner = float(np.min(np.diff(lam))) if len(lam) > 1 else np.inf
    cross = float(np.min(np.abs(np.subtract.outer(lam, mu))))
    return inner, cross
