"""Steps whose spectra are degenerate or share a value.

A single block of equal eigenvalues ``lam`` occupies the 0-based indices
``B`` of the minor spectrum and ``K`` of the next spectrum.  The four
admissible positions of ``K`` relative to ``B`` (cases I to IV) each reduce
to a regular step on a smaller basis:

* I, II, III: the new column is orthogonal to the degenerate eigenspace of
  the minor, so the step runs on the remaining eigenvectors.  Case I keeps
  ``lam`` in the grown spectrum of the reduced problem.
* IV: the degenerate eigenspace loses one dimension.  A unit direction ``u``
  inside it (``basis_choice``) is kept in the reduced basis; its orthogonal
  complement inside the block carries over unchanged.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .cauchy import xi_squared
from .errors import (
    CaseMismatch,
    InconsistentSharedValue,
    MultiBlock,
    NotInterlacing,
)
from .spectral import EigDecomp, Gauge, apply_gauge, as_spectrum, interlacing_violation, INTERLACE_TOL
from .telescopic import StepResult, basis_step

DEGENERACY_TOL = 1e-8


class Case(str, enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"


@dataclass(frozen=True)
class DegeneracyBlock:
    """Position of the degenerate value.

    ``l`` is 1-based and ``m`` is the block length minus one, so the block of
    the minor spectrum is ``{l, ..., l + m}``.  ``case`` is ``None`` for a
    regular pair.
    """

    value: float
    l: int
    m: int
    case: Case | None

    @property
    def minor_indices(self) -> np.ndarray:
        """0-based indices of the block in the minor spectrum."""
        return np.arange(self.l - 1, self.l + self.m)

    @property
    def next_indices(self) -> np.ndarray:
        """0-based indices of the block in the grown spectrum."""
        start, stop = {
            Case.I: (0, self.m + 2),
            Case.II: (0, self.m + 1),
            Case.III: (1, self.m + 2),
            Case.IV: (1, self.m + 1),
        }[self.case]
        return np.arange(self.l - 1 + start, self.l - 1 + stop)


REGULAR = DegeneracyBlock(float("nan"), 0, -1, None)


def _clusters(values, tol):
    """Runs of values closer than ``tol``, as lists of indices (length >= 2)."""
    runs, cur = [], [0]
    for i in range(1, len(values)):
        if values[i] - values[cur[-1]] <= tol:
            cur.append(i)
        else:
            if len(cur) > 1:
                runs.append(cur)
            cur = [i]
    if len(cur) > 1:
        runs.append(cur)
    return runs


def classify_degeneracy(sigma_n, sigma_np1, tol=DEGENERACY_TOL) -> DegeneracyBlock:
    """Locate the degenerate or shared value of a spectrum pair.

    Values closer than ``tol * max(1, diameter)`` are treated as equal.
    """
    lam, mu = as_spectrum(sigma_n), as_spectrum(sigma_np1)
    if mu.size != lam.size + 1:
        raise ValueError("sigma_np1 must have exactly one more value than sigma_n")
    if lam.size == 0:
        return REGULAR
    both = np.concatenate([lam, mu])
    thr = tol * max(1.0, float(np.ptp(both)))

    special = [lam[c].mean() for c in _clusters(lam, thr)]
    special += [mu[c].mean() for c in _clusters(mu, thr)]
    dist = np.abs(np.subtract.outer(lam, mu))
    special += [lam[r] for r in np.unique(np.nonzero(dist <= thr)[0])]
    if not special:
        return REGULAR
    special = np.sort(special)
    if special[-1] - special[0] > thr:
        raise MultiBlock("more than one degenerate value in the spectrum pair")
    value = float(np.mean(special))

    B = np.flatnonzero(np.abs(lam - value) <= thr)
    K = np.flatnonzero(np.abs(mu - value) <= thr)
    if B.size == 0 or np.any(np.diff(B) != 1) or np.any(np.diff(K) != 1):
        raise NotInterlacing("degenerate value breaks interlacing")
    l, m = int(B[0]) + 1, int(B.size) - 1
    for case in Case:
        block = DegeneracyBlock(value, l, m, case)
        if case is Case.IV and m == 0:
            continue
        if np.array_equal(block.next_indices, K):
            return block
    raise NotInterlacing("degenerate block positions are incompatible with interlacing")


def _reduced_spectra(block: DegeneracyBlock, lam, mu):
    """Index set kept from the minor and the two reduced spectra."""
    B, K = block.minor_indices, block.next_indices
    keep_r = np.setdiff1d(np.arange(lam.size), B)
    mu_rest = np.delete(mu, K)
    if block.case is Case.I:
        big = np.sort(np.append(mu_rest, block.value))
        small = lam[keep_r]
    elif block.case in (Case.II, Case.III):
        big = mu_rest
        small = lam[keep_r]
    else:
        big = mu_rest
        small = np.sort(np.append(lam[keep_r], block.value))
    return keep_r, small, big


def reduced_sign_indices(block: DegeneracyBlock, n: int) -> np.ndarray:
    """Indices of a full length-``n`` sign vector that feed the reduced step.

    Case IV keeps the last eigenvector of the block (the default complement
    direction) at its sorted position.
    """
    B = block.minor_indices
    keep = np.setdiff1d(np.arange(n), B)
    if block.case is Case.IV:
        keep = np.sort(np.append(keep, B[-1]))
    return keep


def householder_complement(u) -> np.ndarray:
    """Orthonormal basis (columns) of the complement of unit vector ``u``.

    Uses the reflector sending ``u`` to the last axis, so ``u = e_last``
    returns the leading identity columns.
    """
    u = np.asarray(u, dtype=float).ravel()
    u = u / np.linalg.norm(u)
    k = u.size
    e = np.zeros(k)
    e[-1] = 1.0
    w = u - e
    nw = np.linalg.norm(w)
    if nw < 1e-14:
        return np.eye(k)[:, :-1]
    w /= nw
    H = np.eye(k) - 2.0 * np.outer(w, w)
    return H[:, :-1]


def degenerate_step(eig_n: EigDecomp, sigma_np1, block: DegeneracyBlock, signs,
                    basis_choice=None) -> StepResult:
    """One step for a pair with a single degeneracy block.

    ``signs`` covers the reduced problem only: the non-block eigenvectors for
    cases I to III, and additionally the complement direction (placed at the
    block's position) for case IV.  ``basis_choice`` is the unit vector ``u``
    in block coordinates for case IV; the default is the last block vector.
    ``b_coeffs`` of the result is the change of basis from the extended old
    eigenvectors to the new ones.
    """
    lam, mu = as_spectrum(eig_n.values), as_spectrum(sigma_np1)
    if block.case is None:
        raise CaseMismatch("regular pair; use telescopic_step")
    if interlacing_violation(lam, mu) > INTERLACE_TOL:
        raise NotInterlacing("spectra do not interlace")
    B, K = block.minor_indices, block.next_indices
    if B[-1] >= lam.size or K[-1] >= mu.size:
        raise CaseMismatch("block indices fall outside the spectra")
    thr = DEGENERACY_TOL * max(1.0, float(np.ptp(np.concatenate([lam, mu]))))
    if np.any(np.abs(lam[B] - block.value) > thr) or np.any(np.abs(mu[K] - block.value) > thr):
        raise CaseMismatch(f"spectra do not carry case {block.case.value} at l={block.l}")

    n = lam.size
    V = eig_n.vectors
    keep_r, small, big = _reduced_spectra(block, lam, mu)
    signs = np.asarray(signs, dtype=int).ravel()
    if signs.size != small.size:
        raise ValueError(f"expected {small.size} reduced signs, got {signs.size}")

    VB = V[:, B]
    if block.case is Case.IV:
        u = np.zeros(B.size) if basis_choice is None else np.asarray(basis_choice, float)
        if basis_choice is None:
            u[-1] = 1.0
        if u.shape != (B.size,) or np.linalg.norm(u) == 0:
            raise ValueError("basis_choice must be a non-zero vector over the block")
        u = u / np.linalg.norm(u)
        w = VB @ u
        carried = VB @ householder_complement(u)
        pos = int(np.searchsorted(lam[keep_r], block.value))
        basis = np.insert(V[:, keep_r], pos, w, axis=1)
    else:
        carried = VB
        basis = V[:, keep_r]

    try:
        xi2 = xi_squared(small, big)
    except NotInterlacing as exc:
        raise InconsistentSharedValue(str(exc)) from exc
    column, new_red, _ = basis_step(basis, small, big, signs, xi2)

    h = float(mu.sum() - lam.sum())

    rows = V.shape[0]
    carried_ext = np.vstack([carried, np.zeros((1, carried.shape[1]))])
    vectors = np.zeros((rows + 1, mu.size))
    carried_cols = K[:carried.shape[1]] if block.case is Case.I else K
    red_cols = np.setdiff1d(np.arange(mu.size), carried_cols)
    vectors[:, carried_cols] = carried_ext
    vectors[:, red_cols] = new_red
    if Gauge(eig_n.gauge) is not Gauge.CUSTOM:
        vectors = apply_gauge(vectors)

    old_ext = np.zeros((rows + 1, n + 1))
    old_ext[:rows, :n] = V
    old_ext[rows, n] = 1.0
    b = (old_ext.T @ vectors).T
    values = mu.copy()
    values[K] = block.value
    return StepResult(column, h, EigDecomp(values, vectors, eig_n.gauge), b, ())
