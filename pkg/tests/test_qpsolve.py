import itertools
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

import polmax as pm
from polmax.qpsolve import DegenerateFreeSetError, InfeasibleProblemError


def grid_minimum_objective(nbar, dim, step):
    """Independent brute-force oracle: enumerate every distribution on the
    step-resolution simplex grid with mean exactly nbar and return the
    smallest value of sum p_N^2/(N+1)."""
    units = round(1.0 / step)
    mean_units = round(nbar / step)
    assert abs(units * step - 1.0) < 1e-12 and abs(mean_units * step - nbar) < 1e-12
    weights = 1.0 / np.arange(1.0, dim + 2.0)
    best = math.inf
    ns = range(0, units + 1)
    for tail in itertools.product(*[ns] * (dim - 1)):  # k_2 .. k_dim
        mean_rest = sum(n * k for n, k in zip(range(2, dim + 1), tail))
        if mean_rest > mean_units:
            continue
        k1 = mean_units - mean_rest
        k0 = units - k1 - sum(tail)
        if k1 < 0 or k0 < 0:
            continue
        ks = np.array([k0, k1, *tail], dtype=float) * step
        best = min(best, float((ks * ks) @ weights))
    return best


class TestBuildProblem:
    def test_fields(self):
        problem = pm.build_problem(1.0, 2)
        assert_allclose(problem.hessian_diag, [2.0, 1.0, 2.0 / 3.0], rtol=1e-16)
        assert problem.rhs == (1.0, 1.0)
        assert_allclose(problem.constraint_matrix, [[1, 1, 1], [0, 1, 2]])
        assert np.all(np.diff(problem.hessian_diag) < 0)

    def test_trivial_problem(self):
        solution = pm.solve(pm.build_problem(0.0, 0))
        assert_allclose(solution.dist.probs, [1.0])

    def test_infeasible_mean(self):
        with pytest.raises(InfeasibleProblemError, match="largest feasible mean is 2"):
            pm.build_problem(3.0, 2)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            pm.build_problem(-1.0, 5)
        with pytest.raises(ValueError):
            pm.build_problem(1.0, -1)


class TestKktEqualitySolve:
    def test_three_point_window_reproduces_parabola(self):
        problem = pm.build_problem(1.0, 25)
        p_free, lam = pm.kkt_equality_solve(problem, [0, 1, 2])
        assert_allclose(p_free, [0.3, 0.4, 0.3], rtol=1e-14)
        assert_allclose(lam, (0.6, -0.2), rtol=1e-13)

    def test_two_point_solution(self):
        problem = pm.build_problem(0.5, 10)
        p_free, lam = pm.kkt_equality_solve(problem, [0, 1])
        assert_allclose(p_free, [0.5, 0.5], rtol=1e-14)
        # analytic multipliers: p_0 = lam0/2, p_1 = lam0 + lam1
        assert_allclose(lam, (1.0, -0.5), rtol=1e-13)

    def test_multipliers_reproduce_free_components(self):
        problem = pm.build_problem(3.3, 12)
        idx = [0, 2, 3, 5, 8]
        p_free, lam = pm.kkt_equality_solve(problem, idx)
        n = np.array(idx, dtype=float)
        assert_allclose(p_free, (lam[0] + lam[1] * n) * (n + 1.0) / 2.0, rtol=1e-12)

    def test_single_index_is_degenerate(self):
        problem = pm.build_problem(1.0, 10)
        with pytest.raises(DegenerateFreeSetError):
            pm.kkt_equality_solve(problem, [5])

    def test_repeated_indices_rejected(self):
        problem = pm.build_problem(1.0, 10)
        with pytest.raises(DegenerateFreeSetError):
            pm.kkt_equality_solve(problem, [2, 2])


class TestSolve:
    def test_integer_mean_matches_parabola(self):
        solution = pm.solve(pm.build_problem(1.0, 25))
        expected = np.zeros(26)
        expected[:3] = [0.3, 0.4, 0.3]
        assert_allclose(solution.dist.probs, expected, atol=1e-15)
        assert abs(solution.objective - 0.2) <= 1e-15

    def test_vacuum_vertex(self):
        solution = pm.solve(pm.build_problem(0.0, 5))
        assert_allclose(solution.dist.probs, [1, 0, 0, 0, 0, 0])
        assert solution.kkt_residuals.max_residual() <= 1e-12

    def test_full_vertex(self):
        solution = pm.solve(pm.build_problem(5.0, 5))
        assert solution.dist.probs[5] == 1.0
        assert solution.kkt_residuals.max_residual() <= 1e-12

    def test_small_mean_two_point_support(self):
        solution = pm.solve(pm.build_problem(0.2, 4))
        assert_allclose(solution.dist.probs, [0.8, 0.2, 0, 0, 0], atol=1e-15)
        assert pm.support_size(solution) == 2

    def test_clamps_to_exact_zero(self):
        probs = pm.solve(pm.build_problem(3.0, 25)).dist.probs
        assert np.all(probs[7:] == 0.0)

    @pytest.mark.parametrize("nbar", [0.2, 0.5, 0.7, 1.0])
    def test_grid_oracle_optimality(self, nbar):
        solution = pm.solve(pm.build_problem(nbar, 4))
        assert solution.objective <= grid_minimum_objective(nbar, 4, 0.01) + 1e-12

    @pytest.mark.parametrize("m", range(1, 10))
    def test_matches_closed_form_at_integer_means(self, m):
        solution = pm.solve(pm.build_problem(float(m), 25))
        expected = np.zeros(26)
        closed = pm.optimal_distribution(float(m)).probs
        expected[: closed.size] = closed
        assert np.abs(solution.dist.probs - expected).max() <= 1e-8

    @pytest.mark.parametrize("m", range(0, 21))
    def test_degree_matches_closed_form(self, m):
        solution = pm.solve(pm.build_problem(float(m), 2 * m + 4))
        got = pm.hs_degree(solution.dist).value
        assert abs(got - pm.degree_optimal_closed_form(float(m)).value) <= 1e-10

    @pytest.mark.parametrize("m", range(1, 10))
    def test_support_size_law_integer(self, m):
        assert pm.support_size(pm.solve(pm.build_problem(float(m), 25))) == 2 * m + 1

    def test_support_size_law_fractional(self):
        for i in range(1, 101):
            nbar = round(0.1 * i, 10)
            solution = pm.solve(pm.build_problem(nbar, int(math.ceil(2 * nbar)) + 4))
            lo = math.floor(2 * nbar) + 1
            assert pm.support_size(solution) in (lo, lo + 1), nbar

    def test_degree_strictly_increases_with_mean(self):
        values = []
        for i in range(1, 101):
            nbar = round(0.1 * i, 10)
            solution = pm.solve(pm.build_problem(nbar, int(math.ceil(2 * nbar)) + 4))
            values.append(1.0 - solution.objective)
        assert np.all(np.diff(values) > 0)

    @pytest.mark.parametrize("m", range(1, 10))
    def test_truncation_insensitive(self, m):
        at25 = pm.solve(pm.build_problem(float(m), 25)).dist.probs
        at50 = pm.solve(pm.build_problem(float(m), 50)).dist.probs
        assert np.abs(at50[:26] - at25).max() <= 1e-10
        assert np.all(at50[26:] == 0.0)

    @pytest.mark.parametrize("nbar", [0.3, 1.7, 4.25, 8.9])
    def test_free_components_affine_after_weighting(self, nbar):
        # on the support, p_N/(N+1) is affine in N: second differences vanish
        probs = pm.solve(pm.build_problem(nbar, 25)).dist.probs
        support = np.flatnonzero(probs > 1e-10)
        ratio = probs[support] / (support + 1.0)
        second = np.diff(ratio, n=2)
        if second.size:  # supports of fewer than 3 points are trivially affine
            assert np.abs(second).max() <= 1e-10

    def test_iteration_budget_enforced(self):
        with pytest.raises(pm.ConvergenceError):
            pm.solve(pm.build_problem(0.2, 4), max_iter=1)

    def test_mean_constraint_met(self):
        solution = pm.solve(pm.build_problem(6.3, 30))
        mean, _ = pm.distribution_moments(solution.dist)
        assert abs(mean - 6.3) <= 1e-12


class TestVerifyKkt:
    def test_solver_output_passes(self):
        problem = pm.build_problem(1.0, 25)
        report = pm.verify_kkt(problem, pm.solve(problem), tol=1e-10)
        assert report.passed
        assert report.residuals.max_residual() <= 1e-10

    def test_wrong_multipliers_fail_stationarity(self):
        problem = pm.build_problem(0.5, 2)
        good = pm.solve(problem)
        forged = pm.QpSolution(
            dist=good.dist,
            multipliers=(0.0, 0.0),
            active_set=good.active_set,
            objective=good.objective,
            kkt_residuals=good.kkt_residuals,
            iterations=good.iterations,
        )
        report = pm.verify_kkt(problem, forged, tol=1e-10)
        assert not report.passed
        assert report.residuals.stationarity > 1e-10
        assert report.residuals.primal_eq <= 1e-10

    def test_feasible_but_suboptimal_point_fails_dual(self):
        problem = pm.build_problem(1.0, 2)
        dist = pm.n_photon_distribution(1, dim=2)
        # stationarity on the support fixes lam0 + lam1 = h_1 = 1; no such
        # line keeps every bound multiplier non-negative
        candidate = pm.QpSolution(
            dist=dist,
            multipliers=(0.0, 1.0),
            active_set=(0, 2),
            objective=0.5,
            kkt_residuals=pm.KktResiduals(0.0, 0.0, 0.0, 0.0),
            iterations=0,
        )
        report = pm.verify_kkt(problem, candidate, tol=1e-10)
        assert not report.passed
        assert report.residuals.primal_eq <= 1e-12
        assert report.residuals.stationarity <= 1e-12
        assert report.residuals.dual_feasibility > 1.0
        assert candidate.objective > pm.solve(problem).objective

    def test_random_instances_pass(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            dim = int(rng.integers(2, 101))
            nbar = float(rng.uniform(1e-3, dim / 2.0))
            problem = pm.build_problem(nbar, dim)
            report = pm.verify_kkt(problem, pm.solve(problem), tol=1e-10)
            assert report.passed, (nbar, dim)


def test_solution_distribution_is_valid():
    solution = pm.solve(pm.build_problem(2.7, 12))
    dist = solution.dist
    assert np.all(dist.probs >= 0.0)
    assert abs(dist.probs.sum() - 1.0) <= max(dist.tail_bound, 1e-12)
    assert dist.declared_mean == 2.7
    assert set(solution.active_set) == set(np.flatnonzero(dist.probs == 0.0))
