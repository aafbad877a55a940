"""Sliding-minor reconstructions of banded matrices.

Window ``M_k`` (1-based ``k``) is the principal submatrix of ``window_size``
rows starting at row ``k``.

* Minimal scheme, windows of size ``d + 1``: spectra of ``A^(1)..A^(d)`` and
  of ``M_1..M_{N-d}`` (``M_1 = A^(d+1)``), plus full sign vectors for the head
  steps and one length-``d`` sign vector per later window.
* Redundant scheme, windows of size ``d + 2``: spectra of ``A^(1)..A^(d+1)``
  and of ``M_1..M_{N-d-1}``, plus the sign of the outermost band entry of
  every column (``N - 1`` signs).  The zero corner of each window prunes the
  projection signs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .banded import _sign, banded_step, outer_index
from .errors import Ambiguous, BadWindow, NoSolution, NotInterlacing, NotRegular
from .spectral import (
    SignIndicators,
    SpectralData,
    SymmetricMatrix,
    as_array,
    as_spectrum,
    eig_sym,
    extract_sign_indicators,
)
from .telescopic import base_decomp, reconstruct_full, telescopic_step

MAX_BRANCHES = 256


def n_d(N, d):
    """Independent entries of an ``N x N`` matrix of bandwidth ``d``."""
    return (2 * N - d) * (d + 1) // 2


def data_counts(N, d):
    """Spectral values and signs consumed by the two schemes."""
    return {
        "N_D": n_d(N, d),
        "minimal_values": d * (d + 1) // 2 + (d + 1) * (N - d),
        "optimal_values": n_d(N, d) + N - d - 1,
        "minimal_signs": d * (d + 1) // 2 + d * (N - d - 1),
        "optimal_signs": N - 1,
    }


@dataclass(frozen=True)
class SlidingSpectralData:
    head_spectra: tuple
    window_spectra: tuple
    window_size: int
    d: int

    def __post_init__(self):
        d, w = self.d, self.window_size
        if w not in (d + 1, d + 2):
            raise BadWindow(f"window size must be d+1 or d+2, got {w} for d={d}")
        head = tuple(as_spectrum(s) for s in self.head_spectra)
        wins = tuple(as_spectrum(s) for s in self.window_spectra)
        n_head = d if w == d + 1 else d + 1
        if len(head) != n_head:
            raise BadWindow(f"expected {n_head} head spectra, got {len(head)}")
        for k, s in enumerate(head):
            if len(s) != k + 1:
                raise BadWindow(f"head spectrum {k + 1} has {len(s)} values")
        if not wins:
            raise BadWindow("no windows")
        for k, s in enumerate(wins):
            if len(s) != w:
                raise BadWindow(f"window {k + 1} has {len(s)} values, expected {w}")
        object.__setattr__(self, "head_spectra", head)
        object.__setattr__(self, "window_spectra", wins)
        key = "minimal_values" if self.minimal else "optimal_values"
        if self.count() != data_counts(self.N, d)[key]:
            raise BadWindow("spectral value count does not match the band structure")

    @property
    def minimal(self) -> bool:
        return self.window_size == self.d + 1

    @property
    def N(self) -> int:
        return len(self.window_spectra) + self.window_size - 1

    def count(self) -> int:
        return sum(len(s) for s in self.head_spectra) + sum(len(s) for s in self.window_spectra)


def extract_sliding(m, d, window_size) -> SlidingSpectralData:
    a = as_array(m)
    N = a.shape[0]
    w = window_size
    if w not in (d + 1, d + 2) or w > N or d < 1:
        raise BadWindow(f"window size {w} is not usable for N={N}, d={d}")
    n_head = d if w == d + 1 else d + 1
    head = tuple(eig_sym(a[:k, :k]).values for k in range(1, n_head + 1))
    wins = tuple(eig_sym(a[k:k + w, k:k + w]).values for k in range(N - w + 1))
    return SlidingSpectralData(head, wins, w, d)


@dataclass(frozen=True)
class SlidingSigns:
    """Sign data of the minimal scheme.

    ``head[n - 1]`` (length ``n``) grows ``A^(n)`` for ``n = 1..d``;
    ``windows[k - 2]`` (length ``d``) grows ``M_k`` from its leading
    ``d x d`` block for ``k = 2..N-d``, in that block's own gauge.
    """

    head: tuple
    windows: tuple

    def count(self) -> int:
        return sum(len(s) for s in self.head) + sum(len(s) for s in self.windows)


def extract_sliding_signs(m, d) -> SlidingSigns:
    a = as_array(m)
    N = a.shape[0]
    head = extract_sign_indicators(a[: d + 1, : d + 1]).per_step
    wins = []
    for k in range(1, N - d):
        block = eig_sym(a[k:k + d, k:k + d])
        wins.append(_sign(block.vectors.T @ a[k:k + d, k + d]).astype(int))
    return SlidingSigns(tuple(head), tuple(wins))


def reconstruct_sliding_minimal(sd: SlidingSpectralData, signs: SlidingSigns) -> SymmetricMatrix:
    """Head by full telescopic steps, then one telescopic step per window."""
    if not sd.minimal:
        raise BadWindow("the minimal scheme needs windows of size d + 1")
    d, N = sd.d, sd.N
    if len(signs.head) != d or len(signs.windows) != N - d - 1:
        raise ValueError("sign data does not match the window layout")
    head = SpectralData(sd.head_spectra + (sd.window_spectra[0],))
    a = np.zeros((N, N))
    a[: d + 1, : d + 1] = reconstruct_full(head, SignIndicators(signs.head)).full()
    for k in range(1, N - d):
        block = eig_sym(a[k:k + d, k:k + d])
        step = telescopic_step(block, sd.window_spectra[k], signs.windows[k - 1])
        j = k + d
        a[k:j, j] = a[j, k:j] = step.column
        a[j, j] = step.h
    return SymmetricMatrix.from_array(a, d)


def _head_branches(spectra, d, column_signs, head_signs):
    """All ``A^(d+1)`` consistent with the head spectra and column signs."""
    branches = [np.array([[float(spectra[0][0])]])]
    for n in range(1, len(spectra)):
        want = int(column_signs[n - 1])
        nxt = []
        for a in branches:
            eig = eig_sym(a) if n > 1 else base_decomp(a[0, 0])
            if head_signs is not None:
                options = [np.asarray(head_signs[n - 1], dtype=int)]
            else:
                cands = banded_step(eig, spectra[n], d)
                options = [s for s, c in zip(cands.signs, cands.columns)
                           if _sign(c[outer_index(n, d)]) == want]
            for s in options:
                step = telescopic_step(eig, spectra[n], s)
                nxt.append(step.assemble(a))
        branches = nxt
    return branches


def _grow_window(a, k, w, d, spectrum, want):
    """Candidates for the column closing window ``k`` (0-based start)."""
    n = w - 1
    block = eig_sym(a[k:k + n, k:k + n])
    cands = banded_step(block, spectrum, d)
    out = []
    for s, c in zip(cands.signs, cands.columns):
        if _sign(c[outer_index(n, d)]) != want:
            continue
        step = telescopic_step(block, spectrum, s)
        col = step.column.copy()
        col[: n - d] = 0.0
        out.append((col, step.h))
    return out, cands


def reconstruct_sliding_optimal(sd: SlidingSpectralData, column_signs, head_signs=None,
                                full_output=False):
    """Redundant scheme: every window step runs the banded sign search.

    ``column_signs[j - 1]`` is the sign of the outermost band entry of the
    0-based column ``j`` (``N - 1`` values).  Head steps are branched unless
    ``head_signs`` (full sign vectors for ``A^(1) -> ... -> A^(d+1)``) is
    given; branches that admit no later window are dropped.
    """
    if sd.minimal:
        raise BadWindow("the redundant scheme needs windows of size d + 2")
    d, N, w = sd.d, sd.N, sd.window_size
    if len(column_signs) != N - 1:
        raise ValueError(f"expected {N - 1} column signs, got {len(column_signs)}")
    heads = _head_branches(sd.head_spectra, d, column_signs, head_signs)
    branches = []
    for h in heads:
        a = np.zeros((N, N))
        a[: d + 1, : d + 1] = h
        branches.append((a, []))
    counts = []
    for k in range(N - w + 1):
        j = k + w - 1
        nxt = []
        for a, rec in branches:
            try:
                options, cands = _grow_window(a, k, w, d, sd.window_spectra[k],
                                              int(column_signs[j - 1]))
            except (NoSolution, NotInterlacing, NotRegular):
                continue
            for col, h in options:
                b = a.copy()
                b[k:j, j] = b[j, k:j] = col
                b[j, j] = h
                nxt.append((b, rec + [len(cands)]))
        if not nxt:
            raise NoSolution(f"window {k + 1} admits no banded column")
        if len(nxt) > MAX_BRANCHES:
            raise Ambiguous(f"more than {MAX_BRANCHES} branches at window {k + 1}",
                            [SymmetricMatrix.from_array(b, d) for b, _ in nxt])
        branches = nxt
    if len(branches) > 1:
        raise Ambiguous(f"{len(branches)} matrices match the sliding data",
                        [SymmetricMatrix.from_array(b, d) for b, _ in branches])
    a, counts = branches[0]
    out = SymmetricMatrix.from_array(a, d)
    return (out, counts) if full_output else out
