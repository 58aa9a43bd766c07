"""Variational objectives, their gradients, and the PD-cone maximizer."""

import math

import numpy as np
import pytest

from qrelent import (
    DimMismatchError,
    HermitianMatrix,
    OptimizeConfig,
    PdMatrix,
    entropy,
    fenchel_value,
    lieb_gradient,
    lieb_objective,
    mat_exp,
    mat_log,
    maximize_lieb,
    maximize_variational,
    random_pd,
    trace_exp_log,
    trace_product,
    validate_pd,
    variational_gradient,
    variational_objective,
)
from qrelent.convexity import sample_lieb_instance
from conftest import (
    as_pd,
    central_difference,
    random_unitary,
    sample_hermitian,
    sample_pd,
    trial_rng,
    unit_direction,
)


def commuting_pair(rng, dim):
    """Random (H, A) diagonal in the same basis, with the diagonal scalars."""
    u = random_unitary(rng, dim)
    h_diag = rng.uniform(-2.0, 2.0, size=dim)
    a_diag = rng.uniform(0.2, 3.0, size=dim)
    h = HermitianMatrix(u @ np.diag(h_diag) @ u.conj().T)
    a = as_pd(u @ np.diag(a_diag) @ u.conj().T)
    return h, a, h_diag, a_diag


class TestTraceExpLog:
    def test_zero_h_gives_trace(self):
        a = random_pd(4, 71, 0.1)
        assert trace_exp_log(HermitianMatrix.zeros(4), a) == pytest.approx(
            a.trace(), rel=1e-12
        )

    def test_commuting_diagonal(self):
        h = HermitianMatrix.diagonal([1.0, 0.0])
        a = PdMatrix.identity(2)
        assert trace_exp_log(h, a) == pytest.approx(math.e + 1.0, rel=1e-14)

    def test_commuting_random_scalar_sum_oracle(self):
        h, a, h_diag, a_diag = commuting_pair(trial_rng(72, 0), 5)
        expected = float(np.sum(a_diag * np.exp(h_diag)))
        assert trace_exp_log(h, a) == pytest.approx(expected, rel=1e-10)

    def test_strictly_positive(self):
        rng = trial_rng(73, 0)
        assert trace_exp_log(sample_hermitian(rng, 4, 3.0), sample_pd(rng, 4, 0.1)) > 0.0

    def test_matches_dense_exponential_route(self):
        rng = trial_rng(76, 0)
        h = sample_hermitian(rng, 5, 3.0)
        a = sample_pd(rng, 5, 0.1)
        dense = mat_exp(h + mat_log(a)).trace()
        assert abs(trace_exp_log(h, a) - dense) <= 1e-10 * (1.0 + abs(dense))

    def test_overflow_guard(self):
        with pytest.raises(OverflowError):
            trace_exp_log(HermitianMatrix.diagonal([705.0]), PdMatrix.identity(1))

    def test_dim_mismatch(self):
        with pytest.raises(DimMismatchError):
            trace_exp_log(HermitianMatrix.zeros(2), PdMatrix.identity(3))

    def test_homogeneity_in_a(self):
        rng = trial_rng(74, 0)
        h = sample_hermitian(rng, 4, 3.0)
        a = sample_pd(rng, 4, 0.1)
        base = trace_exp_log(h, a)
        for t in (0.2, 1.0, 9.0):
            assert trace_exp_log(h, a.scaled(t)) == pytest.approx(t * base, rel=1e-9)

    def test_shift_in_h(self):
        rng = trial_rng(75, 0)
        h = sample_hermitian(rng, 4, 3.0)
        a = sample_pd(rng, 4, 0.1)
        base = trace_exp_log(h, a)
        for c in (-2.0, 0.7):
            shifted = h + HermitianMatrix.identity(4) * c
            assert trace_exp_log(shifted, a) == pytest.approx(
                math.exp(c) * base, rel=1e-9
            )


class TestVariationalObjective:
    def test_equals_trace_at_maximizer(self):
        y = random_pd(4, 81, 0.1)
        assert abs(variational_objective(y, y) - y.trace()) <= 1e-10 * (
            1.0 + abs(y.trace())
        )

    def test_identity_pair(self):
        i5 = PdMatrix.identity(5)
        assert variational_objective(i5, i5) == pytest.approx(5.0, abs=1e-12)

    def test_upper_bound_by_trace(self):
        for i in range(50):
            rng = trial_rng(82, i)
            x = sample_pd(rng, 4, 0.1)
            y = sample_pd(rng, 4, 0.1)
            assert variational_objective(x, y) <= y.trace() + 1e-10 * (
                1.0 + abs(y.trace())
            )

    def test_cross_check_via_divergence(self):
        from qrelent import relative_entropy

        rng = trial_rng(83, 0)
        x = sample_pd(rng, 4, 0.1)
        y = sample_pd(rng, 4, 0.1)
        alt = y.trace() - relative_entropy(x, y).value
        assert variational_objective(x, y) == pytest.approx(alt, rel=1e-11, abs=1e-11)


class TestVariationalGradient:
    def test_zero_at_maximizer(self):
        y = random_pd(4, 84, 0.1)
        assert variational_gradient(y, y).frobenius_norm() == 0.0

    def test_identity_point(self):
        g = variational_gradient(
            PdMatrix.identity(2), PdMatrix.diagonal([math.e, math.e])
        )
        np.testing.assert_allclose(g.entries, np.eye(2), atol=1e-14)

    @pytest.mark.parametrize("i", range(20))
    def test_matches_central_differences(self, i):
        rng = trial_rng(85, i)
        x = sample_pd(rng, 4, 0.1)
        y = sample_pd(rng, 4, 0.1)
        v = unit_direction(rng, 4)
        fd = central_difference(
            lambda m: variational_objective(as_pd(m.entries), y), x.base, v
        )
        ip = trace_product(variational_gradient(x, y), v)
        assert fd == pytest.approx(ip, rel=1e-5)


class TestMaximizeVariational:
    def test_identity_target_from_scaled_start(self):
        res = maximize_variational(PdMatrix.identity(3), PdMatrix.identity(3).scaled(2.0))
        assert res.converged
        assert res.value == pytest.approx(3.0, rel=1e-10)
        assert (res.maximizer.base - HermitianMatrix.identity(3)).frobenius_norm() <= 1e-6

    def test_random_target(self):
        y = random_pd(4, 86, 0.1)
        res = maximize_variational(y, PdMatrix.identity(4))
        assert res.converged
        assert res.value == pytest.approx(y.trace(), rel=1e-6)
        assert (res.maximizer.base - y.base).frobenius_norm() <= 1e-4 * (
            1.0 + y.frobenius_norm()
        )

    def test_known_diagonal_value(self):
        res = maximize_variational(PdMatrix.diagonal([5.0, 0.2]))
        assert res.converged
        assert res.value == pytest.approx(5.2, rel=1e-6)

    def test_monotone_ascent_history(self):
        y = random_pd(5, 87, 0.1)
        res = maximize_variational(y)
        hist = res.objective_history
        assert len(hist) == res.iters + 1
        assert all(b >= a - 1e-12 for a, b in zip(hist, hist[1:]))

    def test_converged_implies_gradient_below_tolerance(self):
        y = random_pd(4, 88, 0.1)
        cfg = OptimizeConfig.for_scale(y.frobenius_norm())
        res = maximize_variational(y, cfg=cfg)
        assert res.converged
        assert res.grad_norm_final <= cfg.grad_tol

    def test_not_converged_returns_result(self):
        y = random_pd(4, 89, 0.1)
        cfg = OptimizeConfig(grad_tol=1e-8 * (1 + y.frobenius_norm()), max_iters=2)
        res = maximize_variational(y, cfg=cfg)
        assert not res.converged
        assert res.iters <= 2
        assert res.maximizer.min_eigenvalue > 0.0

    def test_zero_iterations_at_the_maximizer(self):
        y = PdMatrix.identity(4)
        res = maximize_variational(y, y)
        assert res.converged
        assert res.iters == 0


class TestLiebObjective:
    def test_zero_h_at_x_equals_a(self):
        a = random_pd(4, 91, 0.1)
        assert lieb_objective(a, HermitianMatrix.zeros(4), a) == pytest.approx(
            a.trace(), rel=1e-11
        )

    def test_identity_x_and_a(self):
        h = sample_hermitian(trial_rng(92, 0), 3, 3.0)
        i3 = PdMatrix.identity(3)
        assert lieb_objective(i3, h, i3) == pytest.approx(h.trace() + 3.0, rel=1e-12)

    def test_upper_bound_by_trace_exp_log(self):
        for i in range(50):
            rng = trial_rng(93, i)
            x = sample_pd(rng, 4, 0.1)
            h = sample_hermitian(rng, 4, 3.0)
            a = sample_pd(rng, 4, 0.1)
            bound = trace_exp_log(h, a)
            assert lieb_objective(x, h, a) <= bound + 1e-9 * (1.0 + abs(bound))

    def test_two_algebraic_routes_agree(self):
        # divergence-breakdown route vs expanded tr(X(H + log A) - X log X + X)
        rng = trial_rng(94, 0)
        x = sample_pd(rng, 4, 0.1)
        h = sample_hermitian(rng, 4, 3.0)
        a = sample_pd(rng, 4, 0.1)
        expanded = (
            trace_product(x, h + mat_log(a)) - entropy(x) + x.trace()
        )
        assert lieb_objective(x, h, a) == pytest.approx(expanded, rel=1e-11, abs=1e-11)

    @pytest.mark.parametrize("i", range(20))
    def test_gradient_matches_central_differences(self, i):
        rng = trial_rng(95, i)
        h, a = sample_lieb_instance(rng, 4)
        x = sample_pd(rng, 4, 0.1)
        v = unit_direction(rng, 4)
        fd = central_difference(
            lambda m: lieb_objective(as_pd(m.entries), h, a), x.base, v
        )
        ip = trace_product(lieb_gradient(x, h, a), v)
        assert fd == pytest.approx(ip, rel=1e-5)

    def test_gradient_vanishes_at_closed_form_point(self):
        rng = trial_rng(96, 0)
        h, a = sample_lieb_instance(rng, 4)
        x_star = mat_exp(h + mat_log(a))
        assert lieb_gradient(x_star, h, a).frobenius_norm() <= 1e-10


class TestMaximizeLieb:
    def test_zero_h_reduces_to_variational(self):
        a = random_pd(4, 97, 0.1)
        res = maximize_lieb(HermitianMatrix.zeros(4), a)
        assert res.converged
        assert res.value == pytest.approx(a.trace(), rel=1e-6)
        assert (res.maximizer.base - a.base).frobenius_norm() <= 1e-4 * (
            1.0 + a.frobenius_norm()
        )

    @pytest.mark.parametrize("i", range(10))
    def test_matches_closed_form_oracle(self, i):
        rng = trial_rng(98, i)
        h, a = sample_lieb_instance(rng, 4)
        res = maximize_lieb(h, a)
        assert res.converged
        direct = trace_exp_log(h, a)
        x_star = mat_exp(h + mat_log(a))
        assert res.value == pytest.approx(direct, rel=1e-6)
        gap = (res.maximizer.base - x_star.base).frobenius_norm()
        assert gap <= 1e-4 * (1.0 + x_star.frobenius_norm())

    def test_commuting_diagonal_scalar_sum(self):
        h, a, h_diag, a_diag = commuting_pair(trial_rng(99, 0), 4)
        res = maximize_lieb(h, a)
        assert res.converged
        expected = float(np.sum(a_diag * np.exp(h_diag)))
        assert res.value == pytest.approx(expected, rel=1e-8)

    def test_monotone_ascent_history(self):
        rng = trial_rng(100, 0)
        h, a = sample_lieb_instance(rng, 4)
        hist = maximize_lieb(h, a).objective_history
        assert all(b >= a_ - 1e-12 for a_, b in zip(hist, hist[1:]))


class TestFenchelValue:
    def test_zero_h(self):
        a = random_pd(3, 101, 0.1)
        assert fenchel_value(HermitianMatrix.zeros(3), a) == pytest.approx(
            a.trace(), rel=1e-12
        )

    def test_aliases_trace_exp_log_exactly(self):
        for i in range(100):
            rng = trial_rng(102, i)
            h = sample_hermitian(rng, 3, 3.0)
            a = sample_pd(rng, 3, 0.1)
            assert fenchel_value(h, a) == trace_exp_log(h, a)

    def test_midpoint_convexity_in_h(self):
        for i in range(25):
            rng = trial_rng(103, i)
            a = sample_pd(rng, 4, 0.1)
            h1 = sample_hermitian(rng, 4, 3.0)
            h2 = sample_hermitian(rng, 4, 3.0)
            mid = (h1 + h2) * 0.5
            lhs = fenchel_value(mid, a)
            rhs = 0.5 * (fenchel_value(h1, a) + fenchel_value(h2, a))
            assert lhs <= rhs + 1e-10 * (1.0 + abs(rhs))


class TestOptimizeConfig:
    def test_for_scale(self):
        cfg = OptimizeConfig.for_scale(3.0)
        assert cfg.grad_tol == pytest.approx(4e-8)
        assert cfg.max_iters == 5000
        assert cfg.step_init == 1.0
        assert cfg.backtrack_factor == 0.5
        assert cfg.armijo_c == 1e-4
        assert cfg.eig_floor == 1e-10

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"grad_tol": 0.0},
            {"grad_tol": 1e-8, "max_iters": 0},
            {"grad_tol": 1e-8, "step_init": -1.0},
            {"grad_tol": 1e-8, "backtrack_factor": 1.0},
            {"grad_tol": 1e-8, "armijo_c": 0.0},
            {"grad_tol": 1e-8, "eig_floor": 0.0},
        ],
    )
    def test_rejects_out_of_range_fields(self, kwargs):
        with pytest.raises(ValueError):
            OptimizeConfig(**kwargs)


def test_maximizer_respects_eigenvalue_floor():
    # drive toward a near-singular target; iterates stay clipped
    y = validate_pd(HermitianMatrix.diagonal([4.0, 1e-4]))
    res = maximize_variational(y)
    assert res.maximizer.min_eigenvalue >= 1e-10
    assert res.converged
