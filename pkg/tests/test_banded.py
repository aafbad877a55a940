import numpy as np
import pytest

from matrixhear.banded import (
    alpha_condition,
    banded_step,
    column_signs_of,
    conic_forms,
    feasibility_certificate,
    hyperplanes,
    penta_conics_step,
    penta_degenerate_residual,
    penta_lines_step,
    reconstruct_banded,
)
from matrixhear.errors import Ambiguous, NoSolution
from matrixhear.oracle import (
    InstanceSpec,
    alpha_condition_instance,
    gen_random_banded,
    penta_degenerate_instance,
)
from matrixhear.spectral import eig_sym, extract_sign_indicators, extract_spectral_data, step_scalars
from matrixhear.cauchy import xi_squared


def banded(n, d, seed):
    return gen_random_banded(InstanceSpec(n, d, seed=seed)).full()


def step_data(a, n):
    return eig_sym(a[:n, :n]), np.linalg.eigvalsh(a[: n + 1, : n + 1])


def test_jacobi_candidates_are_plus_minus_last_entry():
    a = banded(7, 1, 0)
    for n in range(2, 7):
        c = banded_step(*step_data(a, n), 1)
        assert len(c) == 2
        expect = np.zeros(n)
        expect[-1] = abs(a[n - 1, n])
        np.testing.assert_allclose(np.sort(c.columns, axis=0), np.sort([expect, -expect], axis=0),
                                   atol=1e-10)


def test_pentadiagonal_step_two_antipodal_candidates():
    a = banded(6, 2, 0)
    c = banded_step(*step_data(a, 4), 2)
    assert len(c) == 2 and c.is_antipodal()
    assert min(np.max(np.abs(col - a[:4, 4])) for col in c.columns) <= 1e-9
    assert not c.too_many


def test_full_matrix_data_has_no_jacobi_solution():
    a = gen_random_banded(InstanceSpec(6, seed=3)).full()
    with pytest.raises(NoSolution):
        banded_step(*step_data(a, 4), 1)


def test_head_steps_return_all_sign_vectors():
    a = banded(6, 2, 1)
    c = banded_step(*step_data(a, 2), 2)
    assert len(c) == 4 and c.flags["head"]


def test_lines_step_generic_and_n2():
    a = banded(8, 2, 2)
    for n in range(3, 8):
        c = penta_lines_step(*step_data(a, n))
        assert len(c) == 2 and c.is_antipodal()
        assert c.flags["alpha"] is None
    assert len(penta_lines_step(*step_data(a, 2))) == 4


def test_alpha_condition_on_2x2_and_constructed_instance():
    eig = eig_sym(np.array([[0.3, 0.8], [0.8, -0.5]]))
    w = alpha_condition(eig)
    assert w is not None and w.indices == (0,)
    eig4 = alpha_condition_instance(4, alpha=0.7, seed=0)
    w = alpha_condition(eig4)
    assert w is not None
    assert w.alpha == pytest.approx(0.7, rel=1e-9)
    assert w.alpha ** 2 == pytest.approx(1 / w.S - 1, rel=1e-9)


def test_alpha_instance_gives_four_line_candidates():
    eig = alpha_condition_instance(4, alpha=0.7, seed=0)
    A = eig.matrix()
    col = np.zeros(4)
    col[-2:] = [0.4, -0.3]
    big = np.zeros((5, 5))
    big[:4, :4] = A
    big[:4, 4] = big[4, :4] = col
    big[4, 4] = 0.2
    mu = np.linalg.eigvalsh(big)
    lines = penta_lines_step(eig, mu)
    assert len(lines) == 4
    assert len(banded_step(eig, mu, 2)) == 4
    # alpha-condition implies the commuting-forms condition
    q1, q2 = conic_forms(A, step_scalars(eig.values, mu))
    assert penta_degenerate_residual(q1, q2) <= 1e-7


def test_no_alpha_hits_on_random_pentadiagonals():
    hits = 0
    for seed in range(300):
        a = banded(8, 2, seed)
        hits += sum(alpha_condition(eig_sym(a[:n, :n])) is not None for n in range(3, 8))
    assert hits == 0


def test_conics_agree_with_lines():
    for seed in range(30):
        a = banded(7, 2, seed)
        for n in range(3, 7):
            eig, mu = step_data(a, n)
            lines = penta_lines_step(eig, mu)
            conics = penta_conics_step(a[:n, :n], step_scalars(eig.values, mu))
            assert lines.same_as(conics, tol=1e-7)
            np.testing.assert_array_equal(lines.signs, conics.signs)


def test_conics_n2_degenerate():
    a = banded(5, 2, 4)
    eig, mu = step_data(a, 2)
    c = penta_conics_step(a[:2, :2], step_scalars(eig.values, mu))
    assert len(c) == 4 and c.flags["commuting"]


def test_penta_degenerate_instance():
    m = penta_degenerate_instance(5, seed=0).full()
    eig, mu = step_data(m, 5)
    conics = penta_conics_step(m[:5, :5], step_scalars(eig.values, mu))
    lines = penta_lines_step(eig, mu)
    assert conics.flags["commuting"] and len(conics) == 4
    assert len(lines) == 2 and lines.flags["alpha"] is None


def test_hyperplanes_and_feasibility():
    a = banded(6, 2, 5)
    eig, mu = step_data(a, 4)
    xi = np.sqrt(xi_squared(eig.values, mu))
    hp = hyperplanes(eig, xi, 2)
    assert len(hp) == 8
    R = np.linalg.norm(a[:4, 4])
    assert max(h.distance() for h in hp) <= R * (1 + 1e-9)
    assert feasibility_certificate(eig, xi, R, 2).feasible
    assert feasibility_certificate(eig, np.zeros(4), 0.0, 2).feasible


def test_feasibility_fails_for_full_matrices():
    fails = 0
    for seed in range(20):
        a = gen_random_banded(InstanceSpec(7, seed=seed)).full()
        eig, mu = step_data(a, 6)
        xi = np.sqrt(xi_squared(eig.values, mu))
        fails += not feasibility_certificate(eig, xi, np.linalg.norm(a[:6, 6]), 2).feasible
    assert fails > 10


@pytest.mark.parametrize("d,N,tol", [(1, 8, 1e-8), (2, 10, 1e-8), (3, 12, 1e-7)])
def test_reconstruct_banded_round_trip(d, N, tol):
    for seed in range(3):
        a = banded(N, d, seed)
        out = reconstruct_banded(extract_spectral_data(a), d, column_signs_of(a, d))
        assert np.max(np.abs(out.full() - a)) <= tol
        assert out.bandwidth == d


@pytest.mark.parametrize("method", ["lines", "conics"])
def test_reconstruct_banded_penta_methods(method):
    a = banded(9, 2, 7)
    out = reconstruct_banded(extract_spectral_data(a), 2, column_signs_of(a, 2), method=method)
    assert np.max(np.abs(out.full() - a)) <= 1e-8


def test_flipped_column_sign_negates_column():
    a = banded(8, 2, 8)
    cs = column_signs_of(a, 2)
    cs[5] = -cs[5]
    out = reconstruct_banded(extract_spectral_data(a), 2, cs).full()
    j = 6
    np.testing.assert_allclose(out[:j, j], -a[:j, j], atol=1e-8)
    np.testing.assert_allclose(np.linalg.eigvalsh(out), np.linalg.eigvalsh(a), atol=1e-9)


def test_reconstruct_banded_ambiguous_without_head_signs():
    # every step of a 3x3 matrix with d = 2 is a head step: column signs leave two branches
    a = banded(3, 2, 0)
    sd = extract_spectral_data(a)
    with pytest.raises(Ambiguous) as exc:
        reconstruct_banded(sd, 2, column_signs_of(a, 2))
    assert len(exc.value.branches) == 2
    assert min(np.max(np.abs(b.full() - a)) for b in exc.value.branches) <= 1e-10
    for b in exc.value.branches:
        np.testing.assert_allclose(np.linalg.eigvalsh(b.full()), sd[-1], atol=1e-10)
    out = reconstruct_banded(sd, 2, column_signs_of(a, 2), head_signs=list(extract_sign_indicators(a)))
    assert np.max(np.abs(out.full() - a)) <= 1e-10


def test_reconstruct_banded_infeasible():
    a = gen_random_banded(InstanceSpec(6, seed=1)).full()
    with pytest.raises(NoSolution):
        reconstruct_banded(extract_spectral_data(a), 1, column_signs_of(a, 1))
