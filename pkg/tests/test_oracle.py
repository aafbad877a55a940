from pathlib import Path

import numpy as np
import pytest

from matrixhear.banded import banded_step, penta_lines_step
from matrixhear.errors import CannotSatisfyMargin, TooLarge
from matrixhear.fileio import parse_matrix
from matrixhear.oracle import (
    InstanceSpec,
    accept_all,
    accept_banded,
    all_steps_oracle,
    brute_force_step,
    gen_random_banded,
)
from matrixhear.spectral import check_regular, eig_sym, extract_sign_indicators, extract_spectral_data
from matrixhear.telescopic import telescopic_step

DATA = Path(__file__).parent / "data"


def test_golden_instance_is_frozen():
    golden = parse_matrix((DATA / "golden_seed0_n6_d2.txt").read_text())
    fresh = gen_random_banded(InstanceSpec(6, 2, seed=0))
    np.testing.assert_array_equal(fresh.full(), golden.full())


def test_generator_is_deterministic_and_regular():
    a = gen_random_banded(InstanceSpec(7, 2, seed=5))
    b = gen_random_banded(InstanceSpec(7, 2, seed=5))
    assert a == b
    assert check_regular(extract_spectral_data(a), 1e-6).regular
    full = gen_random_banded(InstanceSpec(5, d=4, seed=1)).full()
    assert np.all(full[np.triu_indices(5)] != 0)
    lo, hi = 2.0, 3.0
    m = gen_random_banded(InstanceSpec(4, 1, seed=2, entry_range=(lo, hi))).full()
    band = m[np.abs(np.subtract.outer(range(4), range(4))) <= 1]
    assert np.all((band >= lo) & (band <= hi))


def test_generator_gives_up():
    with pytest.raises(CannotSatisfyMargin):
        gen_random_banded(InstanceSpec(8, 1, seed=0, regularity_margin=10.0))


def test_brute_force_counts():
    a = gen_random_banded(InstanceSpec(6, 2, seed=1)).full()
    eig, mu = eig_sym(a[:3, :3]), np.linalg.eigvalsh(a[:4, :4])
    assert len(brute_force_step(eig, mu, accept_all)) == 8
    bf = brute_force_step(eig, mu, accept_banded(2))
    assert bf.same_as(penta_lines_step(eig, mu))
    j = gen_random_banded(InstanceSpec(6, 1, seed=1)).full()
    eig, mu = eig_sym(j[:4, :4]), np.linalg.eigvalsh(j[:5, :5])
    assert len(brute_force_step(eig, mu, accept_banded(1))) == 2


def test_brute_force_cap():
    eig = eig_sym(np.diag(np.arange(21.0)))
    with pytest.raises(TooLarge):
        brute_force_step(eig, np.arange(22.0) - 0.5, accept_all)


@pytest.mark.parametrize("seed", range(20))
def test_banded_step_equals_brute_force(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 4))
    N = int(rng.integers(d + 2, 11 if d == 1 else 15))
    a = gen_random_banded(InstanceSpec(N, d, seed=seed)).full()
    n = int(rng.integers(d + 1, N))
    eig, mu = eig_sym(a[:n, :n]), np.linalg.eigvalsh(a[: n + 1, : n + 1])
    fast, slow = banded_step(eig, mu, d), brute_force_step(eig, mu, accept_banded(d))
    np.testing.assert_array_equal(fast.signs, slow.signs)
    np.testing.assert_array_equal(fast.columns, slow.columns)


def test_true_signs_are_the_matching_brute_force_member():
    a = gen_random_banded(InstanceSpec(6, seed=4)).full()
    eigs = all_steps_oracle(a)
    s = extract_sign_indicators(a)
    for n in range(1, 6):
        mu = eigs[n].values
        col = telescopic_step(eigs[n - 1], mu, s[n - 1]).column
        every = brute_force_step(eigs[n - 1], mu, accept_all)
        match = [k for k, c in enumerate(every.columns) if np.max(np.abs(c - a[:n, n])) <= 1e-9]
        assert len(match) == 1
        np.testing.assert_array_equal(every.signs[match[0]], s[n - 1])
        np.testing.assert_allclose(col, a[:n, n], atol=1e-9)
