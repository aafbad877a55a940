"""Independent checks: exhaustive sign enumeration, seeded instance
generators and constructors for the special instances used in the tests.

Random instances come from numpy's PCG64 bit generator (``numpy.random.PCG64``
seeded with the integer seed), drawing in-band upper-triangle entries
row-major from ``uniform(lo, hi)``.  A rejected draw is followed by the next
draw from the same stream, so a seed always maps to one matrix.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .banded import (
    CandidateSet,
    _canonical,
    _xi_and_r2,
    candidate_column,
    conic_forms,
    default_eps,
    penta_degenerate_residual,
    sphere_residual,
)
from .errors import CannotSatisfyMargin, TooLarge
from .spectral import (
    EigDecomp,
    SymmetricMatrix,
    apply_gauge,
    as_array,
    check_regular,
    eig_sym,
    extract_spectral_data,
    step_scalars,
)

MAX_BRUTE_N = 20
MAX_ATTEMPTS = 100


@dataclass(frozen=True)
class InstanceSpec:
    n: int
    d: int | None = None
    seed: int = 0
    entry_range: tuple = (-1.0, 1.0)
    regularity_margin: float = 1e-6

    @property
    def bandwidth(self):
        return self.n - 1 if self.d is None else min(self.d, self.n - 1)


def _draw_banded(rng, n, d, lo, hi):
    a = np.zeros((n, n))
    for i in range(n):
        for j in range(i, min(n, i + d + 1)):
            a[i, j] = a[j, i] = rng.uniform(lo, hi)
    return a


def gen_random_banded(spec: InstanceSpec) -> SymmetricMatrix:
    """Seeded random symmetric matrix with bandwidth ``spec.d`` whose nested
    spectra are regular with gaps above ``spec.regularity_margin``."""
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    d = spec.bandwidth
    lo, hi = spec.entry_range
    for _ in range(MAX_ATTEMPTS):
        a = _draw_banded(rng, spec.n, d, lo, hi)
        rep = check_regular(extract_spectral_data(a), spec.regularity_margin)
        if rep.regular:
            return SymmetricMatrix.from_array(a, spec.d)
    raise CannotSatisfyMargin(
        f"no regular instance with margin {spec.regularity_margin:g} in {MAX_ATTEMPTS} draws"
    )


def brute_force_step(eig_n: EigDecomp, sigma_np1, accept) -> CandidateSet:
    """Scan all ``2^n`` sign vectors and keep the columns ``accept`` likes.

    ``accept(column, xi, R2)`` returns a bool or a float residual (kept when
    not ``False``/``None``).  Results are deduplicated like ``banded_step``.
    """
    xi, R2, lam, _ = _xi_and_r2(eig_n, sigma_np1)
    n = lam.size
    if n > MAX_BRUTE_N:
        raise TooLarge(f"2^{n} sign vectors exceed the enumeration cap")
    V = eig_n.vectors
    signs, cols, res = [], [], []
    for s in itertools.product((1, -1), repeat=n):
        s = np.array(s)
        col = candidate_column(V, xi, s)
        verdict = accept(col, xi, R2)
        if verdict is False or verdict is None:
            continue
        signs.append(s)
        cols.append(col)
        res.append(0.0 if verdict is True else float(verdict))
    return _canonical(n, signs, cols, res)


def accept_all(col, xi, R2):
    return True


def accept_banded(d, eps=None):
    """The sphere test used by ``banded_step``."""

    def accept(col, xi, R2):
        e = default_eps(len(col), R2) if eps is None else eps
        if len(col) <= d:
            return sphere_residual(col, len(col), R2)
        res = sphere_residual(col, d, R2)
        return res if res <= e else False

    return accept


def all_steps_oracle(m):
    """Eigendecompositions of every minor of ``m`` (index ``n - 1`` for size ``n``)."""
    a = as_array(m)
    return [eig_sym(a[:n, :n]) for n in range(1, a.shape[0] + 1)]


# -- constructed instances --------------------------------------------------


def _orthogonal(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def alpha_condition_instance(n=4, alpha=0.7, seed=0):
    """Pentadiagonal-compatible minor whose eigenvectors satisfy the alpha-condition.

    The last two rows of the orthogonal matrix are built from two fixed
    directions: columns in the first class end in ``(alpha, 1) t_r`` and the
    rest in ``(-1, alpha) t_r``.  Returns an ``EigDecomp`` (``n >= 2``).
    """
    rng = np.random.default_rng(seed)
    k = max(1, n // 2)
    u = np.array([alpha, 1.0]) / np.hypot(alpha, 1.0)
    w = np.array([-1.0, alpha]) / np.hypot(alpha, 1.0)
    # an orthogonal Q with last two rows [u c^T ; w e^T] where c, e orthonormal
    # and supported on disjoint index sets of sizes k and n - k
    c = np.zeros(n)
    c[:k] = rng.standard_normal(k)
    c /= np.linalg.norm(c)
    e = np.zeros(n)
    e[k:] = rng.standard_normal(n - k)
    e /= np.linalg.norm(e)
    rows = np.outer(u, c) + np.outer(w, e)  # 2 x n with orthonormal rows
    q_rows, _ = np.linalg.qr(rows.T)
    comp = np.linalg.qr(np.column_stack([q_rows, rng.standard_normal((n, n - 2))]))[0][:, 2:]
    Q = np.vstack([comp.T, rows])
    values = np.sort(rng.uniform(-2, 2, n))
    return EigDecomp(values, apply_gauge(Q))


def penta_degenerate_instance(n=5, seed=0, entry=(1, 2)):
    """Pentadiagonal ``n x n`` minor whose two conic forms commute.

    One band entry (``entry``, 0-based, kept symmetric) of a seeded random
    pentadiagonal matrix is tuned by root bracketing until the commutator of
    the forms vanishes.  A random two-entry column and diagonal complete the
    step; returns the ``(n + 1) x (n + 1)`` matrix.
    """
    rng = np.random.default_rng(seed)
    for _ in range(MAX_ATTEMPTS):
        base = _draw_banded(rng, n, 2, -1.0, 1.0)
        col = np.zeros(n)
        col[-2:] = rng.uniform(-1, 1, 2)
        h = rng.uniform(-1, 1)

        def grown(t):
            a = base.copy()
            a[entry] = a[entry[::-1]] = t
            out = np.zeros((n + 1, n + 1))
            out[:n, :n] = a
            out[:n, n] = out[n, :n] = col
            out[n, n] = h
            return out

        def f(t):
            g = grown(t)
            sc = step_scalars(np.linalg.eigvalsh(g[:n, :n]), np.linalg.eigvalsh(g))
            q1, q2 = conic_forms(g[:n, :n], sc)
            return q1.a * q2.b - q2.a * q1.b + q2.c * q1.b - q1.c * q2.b

        ts = np.linspace(-3, 3, 121)
        vals = [f(t) for t in ts]
        for t0, t1, f0, f1 in zip(ts, ts[1:], vals, vals[1:]):
            if np.sign(f0) != np.sign(f1):
                t = brentq(f, t0, t1, xtol=1e-15, rtol=1e-15)
                g = grown(t)
                sd = extract_spectral_data(g)
                if check_regular(sd, 1e-6).regular:
                    return SymmetricMatrix.from_array(g, 2)
    raise CannotSatisfyMargin("no commuting-forms instance found")


def degenerate_instance(case, m=1, n=None, N=None, seed=0, value=0.5):
    """Matrix whose minors of size ``n`` and ``n + 1`` realise a degeneracy case.

    The minor of size ``n`` has ``value`` with multiplicity ``m + 1`` (``m``
    may be 0 for cases II and III, giving a single shared value).  The column
    is orthogonal to that eigenspace for cases I to III and generic for IV;
    case I tunes the diagonal so ``value`` reappears in the reduced problem.
    Case II versus III follows from where the reduced spectrum falls, so the
    caller should check with ``classify_degeneracy``.  Further generic rows
    extend the matrix to ``N``.
    """
    rng = np.random.default_rng(seed)
    mult = m + 1
    n = n or mult + 2
    N = N or n + 1
    others = np.sort(rng.uniform(-3.0, 3.0, n - mult))
    others = others[np.abs(others - value) > 0.3] if others.size else others
    while others.size < n - mult:
        extra = rng.uniform(-3.0, 3.0)
        if abs(extra - value) > 0.3:
            others = np.sort(np.append(others, extra))
    D = np.concatenate([np.full(mult, value), others])
    Q = _orthogonal(rng, n)
    A = (Q * D) @ Q.T
    VR = Q[:, mult:]
    if case == "IV":
        a = rng.standard_normal(n)
        h = rng.standard_normal()
    else:
        c = rng.standard_normal(n - mult)
        a = VR @ c
        if case == "I":
            h = value + np.sum(c * c / (others - value)) if c.size else value
        else:
            h = rng.standard_normal()
    M = np.zeros((n + 1, n + 1))
    M[:n, :n] = A
    M[:n, n] = M[n, :n] = a
    M[n, n] = h
    for k in range(n + 1, N):
        G = np.zeros((k + 1, k + 1))
        G[:k, :k] = M
        G[:k, k] = G[k, :k] = rng.standard_normal(k)
        G[k, k] = rng.standard_normal()
        M = G
    return SymmetricMatrix.from_array(M)


__all__ = [
    "InstanceSpec",
    "gen_random_banded",
    "brute_force_step",
    "accept_all",
    "accept_banded",
    "all_steps_oracle",
    "alpha_condition_instance",
    "penta_degenerate_instance",
    "degenerate_instance",
    "penta_degenerate_residual",
]
