"""Banded reconstruction: the new column of a ``d``-banded matrix has only
``d`` non-zero entries, which over-determines the sign indicators.

Every candidate column is ``a(s) = V (s * xi)``.  A sign vector is admissible
when the leading ``n - d`` entries of ``a(s)`` vanish, tested as
``| ||a_tail||^2 - R2 | <= eps`` (``||a(s)||^2 = R2`` for every ``s``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .cauchy import xi_squared
from .errors import Ambiguous, NoIntersection, NoSolution, NotInterlacing, NotPentaStep, NotRegular
from .spectral import (
    EigDecomp,
    SpectralData,
    StepScalars,
    SymmetricMatrix,
    _sign,
    as_array,
    as_spectrum,
    eig_sym,
    step_scalars,
)
from .telescopic import StepRecord, base_decomp, spectrum_residual, telescopic_step

DEDUP_TOL = 1e-9
ALPHA_TOL = 1e-6
COMMUTE_TOL = 1e-7
MAX_BRANCHES = 256


def default_eps(n, R2):
    return max(1e-12, 1e-12 * n * R2)


@dataclass(frozen=True)
class Hyperplane:
    """``<normal, a_tail> = offset`` in the space of the last ``d`` entries."""

    normal: np.ndarray
    offset: float

    def distance(self):
        nn = float(np.linalg.norm(self.normal))
        return np.inf if nn == 0 else abs(self.offset) / nn


def hyperplanes(eig_n: EigDecomp, xi, d):
    """The ``2n`` hyperplanes ``H_r^{+-}`` for one step."""
    tails = eig_n.vectors[-d:, :]
    out = []
    for r, x in enumerate(np.asarray(xi, dtype=float)):
        out.append(Hyperplane(tails[:, r].copy(), float(x)))
        out.append(Hyperplane(tails[:, r].copy(), -float(x)))
    return out


@dataclass(frozen=True)
class ConicForm:
    """``a x^2 + 2 b x y + c y^2 = rhs``."""

    a: float
    b: float
    c: float
    rhs: float

    def matrix(self):
        return np.array([[self.a, self.b], [self.b, self.c]])

    def residual(self, x, y):
        return self.a * x * x + 2 * self.b * x * y + self.c * y * y - self.rhs

    def circle_points(self, R2, tol=1e-12):
        """Intersections with ``x^2 + y^2 = R2``; ``None`` if the whole circle fits."""
        R2 = max(R2, 0.0)
        if R2 == 0.0:
            return np.zeros((1, 2)) if abs(self.rhs) <= tol else np.empty((0, 2))
        half = 0.5 * (self.a - self.c)
        amp = np.hypot(half, self.b)
        rhs = self.rhs / R2 - 0.5 * (self.a + self.c)
        scale = max(1.0, abs(self.a), abs(self.b), abs(self.c), abs(self.rhs / R2))
        if amp <= tol * scale:
            return None if abs(rhs) <= 1e-9 * scale else np.empty((0, 2))
        ratio = rhs / amp
        if abs(ratio) > 1.0 + 1e-9:
            return np.empty((0, 2))
        phi = np.arctan2(self.b, half)
        dt = np.arccos(np.clip(ratio, -1.0, 1.0))
        ts = 0.5 * np.array([phi + dt, phi - dt])
        ts = np.concatenate([ts, ts + np.pi])
        R = np.sqrt(R2)
        return _dedup_points(np.column_stack([R * np.cos(ts), R * np.sin(ts)]))


def _dedup_points(pts, tol=DEDUP_TOL):
    keep = []
    for p in pts:
        if all(np.max(np.abs(p - q)) > tol * max(1.0, np.max(np.abs(q))) for q in keep):
            keep.append(p)
    return np.array(keep).reshape(-1, 2)


@dataclass
class CandidateSet:
    """Admissible columns of one step, in canonical sign order (``+1`` first)."""

    columns: np.ndarray
    signs: np.ndarray
    residuals: np.ndarray
    flags: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.columns)

    @property
    def too_many(self) -> bool:
        return len(self) > 2

    def is_antipodal(self, tol=1e-9) -> bool:
        if len(self) == 0:
            return True
        return all(np.min(np.max(np.abs(self.columns + c), axis=1)) <= tol for c in self.columns)

    def same_as(self, other, tol=1e-7) -> bool:
        """Point-set equality of the candidate columns."""
        if len(self) != len(other):
            return False
        for c in self.columns:
            if np.min(np.max(np.abs(other.columns - c), axis=1)) > tol:
                return False
        return True


def _empty(n):
    return CandidateSet(np.empty((0, n)), np.empty((0, n), dtype=int), np.empty(0))


def _canonical(n, signs, columns, residuals, flags=None):
    """Sort by sign tuple (``+1`` before ``-1``) and merge near-equal columns."""
    if not signs:
        out = _empty(n)
        out.flags.update(flags or {})
        return out
    order = sorted(range(len(signs)), key=lambda i: tuple(-np.asarray(signs[i])))
    kept = []
    for i in order:
        c = columns[i]
        if all(np.max(np.abs(c - columns[j])) >= DEDUP_TOL for j in kept):
            kept.append(i)
    return CandidateSet(
        np.array([columns[i] for i in kept]),
        np.array([signs[i] for i in kept], dtype=int),
        np.array([residuals[i] for i in kept]),
        dict(flags or {}),
    )


def candidate_column(vectors, xi, signs):
    """``a(s) = sum_r s_r xi_r v(r)``."""
    return vectors @ (np.asarray(signs) * xi)


def sphere_residual(column, d, R2):
    tail = column[-d:] if d > 0 else column[:0]
    return abs(float(tail @ tail) - R2)


def _xi_and_r2(eig_n, sigma_np1):
    lam, mu = as_spectrum(eig_n.values), as_spectrum(sigma_np1)
    xi = np.sqrt(xi_squared(lam, mu))
    return xi, float(np.sum(xi * xi)), lam, mu


def banded_step(eig_n: EigDecomp, sigma_np1, d, eps=None) -> CandidateSet:
    """All sign vectors whose column is supported on the last ``d`` entries.

    Instead of scanning ``2^n`` sign vectors, the tail ``x`` is solved from
    ``d`` well-conditioned projections (all ``2^d`` sign choices), the other
    signs are read off ``<w_r, x>`` and branched only when ambiguous, and each
    survivor is checked with the same sphere test as the exhaustive search.
    Raises ``NoSolution`` when nothing survives.
    """
    xi, R2, lam, _ = _xi_and_r2(eig_n, sigma_np1)
    n = lam.size
    V = eig_n.vectors
    eps = default_eps(n, R2) if eps is None else eps
    if n <= d:
        signs = [np.array(s) for s in itertools.product((1, -1), repeat=n)]
        cols = [candidate_column(V, xi, s) for s in signs]
        return _canonical(n, signs, cols, [sphere_residual(c, min(d, n), R2) for c in cols],
                          {"head": True})

    W = V[-d:, :]  # column r is the tail w_r of v(r)
    _, _, piv = scipy.linalg.qr(W, mode="economic", pivoting=True)
    S = np.sort(piv[:d])
    WS = W[:, S]
    smin = np.linalg.svd(WS, compute_uv=False)[-1]
    if smin == 0:
        raise NoSolution("tail vectors do not span the band")
    rest = np.setdiff1d(np.arange(n), S)
    # an admissible s has |s_r xi_r - <w_r, x_true>| <= sqrt(eps) for every r,
    # so x solved from S is off by at most sqrt(d eps) / smin
    root = np.sqrt(eps)
    slack = 2.0 * root * (1.0 + np.sqrt(d) * np.linalg.norm(W[:, rest], axis=0) / smin) + 1e-12

    found = {}
    for sS in itertools.product((1, -1), repeat=d):
        sS = np.array(sS)
        x = np.linalg.solve(WS.T, sS * xi[S])
        proj = W[:, rest].T @ x
        options = []
        for p, xr, tol in zip(proj, xi[rest], slack):
            opts = tuple(sg for sg in (1, -1) if abs(p - sg * xr) <= tol)
            if not opts:
                break
            options.append(opts)
        else:
            for choice in itertools.product(*options):
                s = np.empty(n, dtype=int)
                s[S] = sS
                s[rest] = choice
                key = tuple(s)
                if key in found:
                    continue
                col = candidate_column(V, xi, s)
                res = sphere_residual(col, d, R2)
                if res <= eps:
                    found[key] = (col, res)
    if not found:
        raise NoSolution(f"no column of bandwidth {d} matches the spectral data")
    keys = list(found)
    return _canonical(n, [np.array(k) for k in keys], [found[k][0] for k in keys],
                      [found[k][1] for k in keys])


# -- pentadiagonal ----------------------------------------------------------


def _line_points(w, c, R2):
    """Points of the circle on the lines ``<w, x> = +-c``."""
    nw = float(np.linalg.norm(w))
    if nw == 0:
        return np.empty((0, 2))
    u = w / nw
    perp = np.array([-u[1], u[0]])
    dist = c / nw
    h2 = R2 - dist * dist
    if h2 < -1e-12 * max(1.0, R2):
        return np.empty((0, 2))
    h = np.sqrt(max(h2, 0.0))
    pts = [sd * dist * u + sh * h * perp for sd in (1, -1) for sh in (1, -1)]
    return _dedup_points(np.array(pts))


def penta_lines_step(eig_n: EigDecomp, sigma_np1, tol=1e-7) -> CandidateSet:
    """Pentadiagonal step by intersecting the ``2n`` lines with the circle.

    The four circle points on the lines of the best-conditioned eigenvector
    are kept when they lie on one of the two lines of every other
    eigenvector.  ``flags["alpha"]`` carries the alpha-condition witness.
    """
    xi, R2, lam, _ = _xi_and_r2(eig_n, sigma_np1)
    n = lam.size
    V = eig_n.vectors
    if n == 1:
        pts = np.array([[0.0, np.sqrt(R2)], [0.0, -np.sqrt(R2)]])
        cols = [np.array([p[1]]) for p in pts]
        signs = [np.array([int(_sign(c[0]))]) for c in cols]
        return _canonical(1, signs, cols, [0.0, 0.0])
    W = V[-2:, :]
    R = np.sqrt(R2)
    r0 = int(np.argmax(np.sum(W * W, axis=0)))
    pts = _line_points(W[:, r0], xi[r0], R2)
    if len(pts) == 0:
        raise NoIntersection("a line misses the circle")
    scale = tol * max(1.0, R)
    signs, cols, res = [], [], []
    for p in pts:
        proj = W.T @ p
        err = np.abs(np.abs(proj) - xi)
        if np.all(err <= scale):
            col = np.zeros(n)
            col[-2:] = p
            signs.append(_sign(proj).astype(int))
            cols.append(col)
            res.append(float(err.max()))
    if not signs:
        raise NoIntersection("the lines have no common point on the circle")
    out = _canonical(n, signs, cols, res, {"alpha": alpha_condition(eig_n)})
    return out


@dataclass(frozen=True)
class AlphaWitness:
    """``indices`` (0-based) form the set on which ``v_{n-1}/v_n = alpha``."""

    indices: tuple
    alpha: float
    S: float


def alpha_condition(eig_n: EigDecomp, tol=ALPHA_TOL):
    """Detect the slope pattern ``{alpha, -1/alpha}`` of the last two rows.

    Works with line angles ``theta_r = atan2(v_{n-1}, v_n)`` modulo ``pi`` so
    vertical slopes need no special case.  Returns an :class:`AlphaWitness`
    (the class containing the first eigenvector is the ``alpha`` class) or
    ``None``.
    """
    V = np.asarray(eig_n.vectors)
    if V.shape[0] < 2:
        return None
    th = np.mod(np.arctan2(V[-2, :], V[-1, :]), np.pi)
    quarter = np.mod(th, np.pi / 2)
    ref = quarter[0]
    diff = np.mod(quarter - ref + np.pi / 4, np.pi / 2) - np.pi / 4
    if np.max(np.abs(diff)) > tol:
        return None
    th0 = th[0]
    d0 = np.abs(np.mod(th - th0 + np.pi / 2, np.pi) - np.pi / 2)
    cls = d0 <= np.pi / 4
    if cls.all() or not cls.any():
        return None
    S = float(np.sum(V[-1, cls] ** 2))
    alpha = float(np.tan(th0)) if abs(np.cos(th0)) > 1e-15 else np.inf
    return AlphaWitness(tuple(int(i) for i in np.flatnonzero(cls)), alpha, S)


def conic_forms(minor, scalars: StepScalars):
    """The two conics on ``(a_{n-1}, a_n)`` from the cubic and inverse traces.

    The second form uses the inverse of ``A^(n) + shift``, matching
    ``scalars.inv_rho``.
    """
    A = as_array(minor)
    n = A.shape[0]
    if n < 2:
        raise ValueError("conic forms need a minor of size >= 2")
    h = scalars.h
    q1 = ConicForm(A[-2, -2] + h, A[-2, -1], A[-1, -1] + h, scalars.cubic_rho + h * scalars.R2)
    Ainv = np.linalg.inv(A + scalars.shift * np.eye(n))
    q2 = ConicForm(Ainv[-2, -2], Ainv[-2, -1], Ainv[-1, -1], scalars.inv_rho)
    return q1, q2


def penta_degenerate_residual(q1: ConicForm, q2: ConicForm, relative=True) -> float:
    """``a1 b2 - a2 b1 + c2 b1 - c1 b2``: zero iff the two forms commute."""
    r = q1.a * q2.b - q2.a * q1.b + q2.c * q1.b - q1.c * q2.b
    if relative:
        r /= max(1e-300, np.linalg.norm(q1.matrix()) * np.linalg.norm(q2.matrix()))
    return float(abs(r))


def penta_conics_step(minor, scalars: StepScalars, tol=1e-7) -> CandidateSet:
    """Pentadiagonal step from the circle and the two conics.

    Returns the circle points shared by both conics.  ``flags`` records the
    commutator residual and whether it is below ``COMMUTE_TOL``.
    """
    A = as_array(minor)
    n = A.shape[0]
    R2 = scalars.R2
    q1, q2 = conic_forms(A, scalars)
    deg = penta_degenerate_residual(q1, q2)
    p1, p2 = q1.circle_points(R2), q2.circle_points(R2)
    if p1 is None and p2 is None:
        raise NoIntersection("both conics coincide with the circle")
    if p1 is None:
        common = p2
    elif p2 is None:
        common = p1
    else:
        R = np.sqrt(max(R2, 0.0))
        thr = tol * max(1.0, R)
        common = [p for p in p1 if len(p2) and np.min(np.max(np.abs(p2 - p), axis=1)) <= thr]
        common = np.array(common).reshape(-1, 2)
    if len(common) == 0:
        raise NoIntersection("the conics share no point on the circle")
    V = eig_sym(A).vectors
    cols, signs, res = [], [], []
    for p in common:
        col = np.zeros(n)
        col[-2:] = p
        cols.append(col)
        signs.append(_sign(V.T @ col).astype(int))
        res.append(max(abs(q1.residual(*p)), abs(q2.residual(*p))))
    return _canonical(n, signs, cols, res,
                      {"penta_degenerate": deg, "commuting": deg <= COMMUTE_TOL})


@dataclass(frozen=True)
class FeasibilityReport:
    ratios: np.ndarray
    R: float
    violating: tuple

    @property
    def feasible(self) -> bool:
        return not self.violating

    def __bool__(self):
        return self.feasible


def feasibility_certificate(eig_n: EigDecomp, xi, R, d, rtol=1e-9) -> FeasibilityReport:
    """Every hyperplane ``H_r`` must reach the sphere of radius ``R``."""
    xi = np.abs(np.asarray(xi, dtype=float))
    tails = np.linalg.norm(eig_n.vectors[-d:, :], axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(xi == 0, 0.0, xi / tails)
    bad = tuple(int(r) for r in np.flatnonzero(ratios > R * (1 + rtol) + 1e-12))
    return FeasibilityReport(ratios, float(R), bad)


# -- chained reconstruction -------------------------------------------------


def outer_index(n, d):
    """Row of the outermost band entry in the column appended to minor ``n``."""
    return max(0, n - d)


def column_signs_of(m, d):
    """Sign of the outermost band entry of every column after the first."""
    a = as_array(m)
    return [int(_sign(a[outer_index(n, d), n])) for n in range(1, a.shape[0])]


@dataclass
class _Branch:
    matrix: np.ndarray
    eig: EigDecomp
    records: list


def _step_candidates(br, mu, d, eps, method):
    if method == "search":
        return banded_step(br.eig, mu, d, eps)
    n = br.matrix.shape[0]
    if d != 2 or n < 2:
        raise NotPentaStep(f"method {method!r} needs d = 2 and a minor of size >= 2")
    if method == "lines":
        return penta_lines_step(br.eig, mu)
    if method == "conics":
        return penta_conics_step(br.matrix, step_scalars(br.eig.values, mu))
    raise ValueError(f"unknown method {method!r}")


def _flag_summary(cands):
    out = {"too_many": bool(cands.too_many)}
    if cands.flags.get("alpha") is not None:
        w = cands.flags["alpha"]
        out["alpha"] = {"indices": list(w.indices), "alpha": w.alpha, "S": w.S}
    if "penta_degenerate" in cands.flags:
        out["penta_degenerate"] = cands.flags["penta_degenerate"]
        out["commuting"] = bool(cands.flags["commuting"])
    return out


def reconstruct_banded(sd: SpectralData, d, column_signs, eps=None, head_signs=None,
                       full_output=False, method="search"):
    """Chain banded steps, fixing each antipodal pair with ``column_signs``.

    ``column_signs[n - 1]`` is the sign of the outermost band entry of the
    column appended to the minor of size ``n``.  Steps with ``n <= d`` admit
    every sign vector: ``head_signs`` (full sign vectors) selects one, and
    without it all head branches compatible with ``column_signs`` are kept
    until later steps rule them out.  ``method`` picks the per-step solver
    for ``n > d``: ``"search"`` (pruned sign search), or for ``d = 2`` the
    line (``"lines"``) or conic (``"conics"``) intersections.  Raises ``Ambiguous`` with the competing
    matrices when more than one branch survives and ``NoSolution`` when none
    does.
    """
    N = len(sd)
    if len(column_signs) != N - 1:
        raise ValueError(f"expected {N - 1} column signs, got {len(column_signs)}")
    a0 = np.array([[float(sd[0][0])]])
    branches = [_Branch(a0, base_decomp(sd[0][0]), [])]
    last_error = None
    for n in range(1, N):
        mu = sd[n]
        want = int(column_signs[n - 1])
        nxt = []
        for br in branches:
            try:
                if n <= d and head_signs is not None:
                    options = [np.asarray(head_signs[n - 1], dtype=int)]
                    cands = None
                else:
                    cands = (banded_step(br.eig, mu, d, eps) if n <= d
                             else _step_candidates(br, mu, d, eps, method))
                    options = [s for s, c in zip(cands.signs, cands.columns)
                               if _sign(c[outer_index(n, d)]) == want]
            except (NoSolution, NotInterlacing, NotRegular) as exc:
                last_error = exc
                continue
            for s in options:
                step = telescopic_step(br.eig, mu, s)
                col = step.column.copy()
                if n > d:
                    col[: n - d] = 0.0
                mat = np.empty((n + 1, n + 1))
                mat[:n, :n] = br.matrix
                mat[:n, n] = mat[n, :n] = col
                mat[n, n] = step.h
                rec = StepRecord(n, tuple(int(x) for x in s), "banded",
                                 spectrum_residual(mat, mu),
                                 len(cands) if cands is not None else 1,
                                 _flag_summary(cands) if cands is not None else {})
                nxt.append(_Branch(mat, step.eig_next, br.records + [rec]))
        if not nxt:
            raise NoSolution(f"no admissible column at step {n} -> {n + 1}") from last_error
        if len(nxt) > MAX_BRANCHES:
            raise Ambiguous(f"more than {MAX_BRANCHES} branches at step {n}",
                            [SymmetricMatrix.from_array(b.matrix) for b in nxt])
        branches = nxt
    if len(branches) > 1:
        raise Ambiguous(f"{len(branches)} matrices match the data",
                        [SymmetricMatrix.from_array(b.matrix, d) for b in branches])
    out = SymmetricMatrix.from_array(branches[0].matrix, d)
    return (out, branches[0].records) if full_output else out
