import itertools
import warnings

import numpy as np
import pytest

from matrixhear.errors import DegenerateM2, Inconsistent, NotInterlacing, NotRegular
from matrixhear.oracle import InstanceSpec, gen_random_banded
from matrixhear.spectral import (
    EigDecomp,
    Gauge,
    SignIndicators,
    SpectralData,
    eig_sym,
    extract_sign_indicators,
    extract_spectral_data,
)
from matrixhear.telescopic import (
    NearIrregularWarning,
    base_decomp,
    reconstruct_full,
    signs_2to3,
    telescopic_step,
)


def regular_matrix(n, seed):
    return gen_random_banded(InstanceSpec(n, seed=seed)).full()


def test_first_step_example():
    step = telescopic_step(base_decomp(1.0), [0.0, 3.0], [1])
    np.testing.assert_allclose(step.column, [np.sqrt(2.0)])
    assert step.h == pytest.approx(2.0)
    np.testing.assert_allclose(step.assemble([[1.0]]), [[1, np.sqrt(2)], [np.sqrt(2), 2]])
    flipped = telescopic_step(base_decomp(1.0), [0.0, 3.0], [-1])
    np.testing.assert_allclose(flipped.column, [-np.sqrt(2.0)])


def test_step_reproduces_source_column_and_eigenvectors():
    a = regular_matrix(5, 11)
    eig = eig_sym(a[:4, :4])
    s = extract_sign_indicators(a)[3]
    step = telescopic_step(eig, np.linalg.eigvalsh(a), s)
    assert np.max(np.abs(step.column - a[:4, 4])) <= 1e-9
    assert step.h == pytest.approx(a[4, 4], abs=1e-9)
    ref = eig_sym(a)
    np.testing.assert_allclose(step.eig_next.vectors, ref.vectors, atol=1e-9)
    np.testing.assert_allclose(np.linalg.eigvalsh(step.assemble(a[:4, :4])), ref.values, atol=1e-9)


def test_b_coeffs_expand_new_eigenvectors():
    a = regular_matrix(5, 12)
    eig = eig_sym(a[:4, :4])
    step = telescopic_step(eig, np.linalg.eigvalsh(a), extract_sign_indicators(a)[3])
    basis = np.zeros((5, 5))
    basis[:4, :4] = eig.vectors
    basis[4, 4] = 1.0
    rebuilt = basis @ step.b_coeffs.T
    np.testing.assert_allclose(np.abs(rebuilt), np.abs(step.eig_next.vectors), atol=1e-10)


def test_gauge_independence():
    a = regular_matrix(5, 13)
    eig = eig_sym(a[:4, :4])
    s = extract_sign_indicators(a)[3]
    flip = np.array([1, -1, 1, -1])
    custom = EigDecomp(eig.values, eig.vectors * flip, Gauge.CUSTOM)
    base = telescopic_step(eig, np.linalg.eigvalsh(a), s)
    other = telescopic_step(custom, np.linalg.eigvalsh(a), s * flip)
    assert np.max(np.abs(base.column - other.column)) <= 1e-12


def test_rank_two_perturbation():
    a = regular_matrix(6, 14)
    n = 5
    tilde = np.zeros((n + 1, n + 1))
    tilde[:n, :n] = a[:n, :n]
    tilde[n, n] = a[n, n]
    sv = np.linalg.svd(a - tilde, compute_uv=False)
    assert sv[2] <= 1e-10


def test_step_errors():
    with pytest.raises(NotInterlacing):
        telescopic_step(base_decomp(5.0), [0.0, 3.0], [1])
    with pytest.raises(NotRegular):
        telescopic_step(base_decomp(0.0), [0.0, 3.0], [1])
    with pytest.raises(ValueError):
        telescopic_step(base_decomp(1.0), [0.0, 3.0], [1, 1])


def test_near_irregular_step_warns():
    with pytest.warns(NearIrregularWarning):
        step = telescopic_step(base_decomp(1.0), [1.0 - 1e-9, 3.0], [1])
    assert step.warnings


@pytest.mark.parametrize("seed", range(10))
def test_reconstruct_full_round_trip(seed):
    a = regular_matrix(8, seed)
    m, records = reconstruct_full(extract_spectral_data(a), extract_sign_indicators(a),
                                  full_output=True)
    assert np.max(np.abs(m.full() - a)) <= 1e-8
    assert max(r.spectrum_residual for r in records) <= 1e-8


def test_reconstruct_full_distinct_diagonal():
    d = np.diag([1.0, 2.0, 3.0])
    d[0, 1] = d[1, 0] = 0.5
    d[1, 2] = d[2, 1] = 0.25
    out = reconstruct_full(extract_spectral_data(d), extract_sign_indicators(d))
    np.testing.assert_allclose(out.full(), d, atol=1e-12)


def test_flipped_sign_changes_result():
    a = regular_matrix(8, 21)
    sd = extract_spectral_data(a)
    s = extract_sign_indicators(a)
    steps = [v.copy() for v in s]
    steps[4][2] *= -1
    other = reconstruct_full(sd, SignIndicators(tuple(steps)))
    assert np.max(np.abs(other.full() - a)) > 1e-6
    np.testing.assert_allclose(np.linalg.eigvalsh(other.full()), sd[-1], atol=1e-9)


def test_reconstruct_full_inconsistent():
    sd = SpectralData(([5.0], [0.0, 3.0]))
    with pytest.raises(Inconsistent):
        reconstruct_full(sd, SignIndicators(([1],)))


def brute_signs_3x3(a):
    """The one sign pair whose telescopic step reproduces the third column."""
    eig = eig_sym(a[:2, :2])
    mu = np.linalg.eigvalsh(a)
    hits = []
    for s in itertools.product((1, -1), repeat=2):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            col = telescopic_step(eig, mu, s).column
        if np.max(np.abs(col - a[:2, 2])) <= 1e-9:
            hits.append(s)
    return hits


def test_signs_2to3_matches_extraction_and_brute_force():
    rng = np.random.default_rng(0)
    for _ in range(200):
        a = rng.uniform(-1, 1, (3, 3))
        a = a + a.T
        got = signs_2to3(a[:2, :2], a[:2, 2])
        assert list(got) == extract_sign_indicators(a)[1].tolist()
        assert brute_signs_3x3(a) == [got]


def test_signs_2to3_antipodal():
    a = regular_matrix(3, 5)
    s = signs_2to3(a[:2, :2], a[:2, 2])
    t = signs_2to3(a[:2, :2], -a[:2, 2])
    col = telescopic_step(eig_sym(a[:2, :2]), np.linalg.eigvalsh(a), t).column
    assert tuple(-x for x in s) == t
    np.testing.assert_allclose(col, -a[:2, 2], atol=1e-10)


def test_signs_2to3_degenerate():
    with pytest.raises(DegenerateM2):
        signs_2to3(np.diag([1.0, 2.0]), [0.3, 0.4])
