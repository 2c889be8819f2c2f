import numpy as np
import pytest

from itofourier.basis import BasisSystem, Interval
from itofourier.coefficients import CoefficientTensor, coefficient_tensor
from itofourier.errors import DomainError
from itofourier.kernel import IntegralSpec, Weight, constant_spec, kernel_l2_norm_sq
from itofourier.validation import (grid_allowance, moment_check, sample_differences,
                                   strong_error_estimate)

UNIT = Interval(0.0, 1.0)
LEG = BasisSystem.LEGENDRE


class TestStrongErrorEstimate:
    def test_k1_constant_weight_has_zero_difference(self):
        # a constant weight is captured exactly at any truncation order and
        # the left-point sum telescopes, so D vanishes identically
        spec = constant_spec(UNIT, (1,))
        diffs, _ = sample_differences(spec, LEG, (2,), 200, 128, seed=1)
        assert float(np.max(np.abs(diffs))) <= 1e-12

    def test_k2_distinct_components_matches_residual(self):
        spec = constant_spec(UNIT, (1, 2))
        report = strong_error_estimate(spec, LEG, (0, 0), 2000, 1024, seed=42)
        assert report.parseval == pytest.approx(0.25, abs=1e-12)
        assert report.bound_ms == pytest.approx(0.5, abs=1e-12)
        assert report.bound_2n is None
        assert report.samples == 2000
        window = 3.0 * report.std_error
        assert report.mean_sq_diff >= report.parseval - window
        assert report.mean_sq_diff <= report.parseval + report.grid_allowance + window
        assert report.passed

    def test_grid_error_slope_is_minus_one(self):
        # equal components, unit weights: the truncation is exact at p = 0 and
        # D = (1 - sum dW_l^2) / 2, whose second moment scales like 1/N
        spec = constant_spec(UNIT, (1, 1))
        msds = []
        steps = [2**6, 2**8, 2**10, 2**12]
        for n_steps in steps:
            diffs, _ = sample_differences(spec, LEG, (0, 0), 400, n_steps, seed=9)
            msds.append(float(np.mean(diffs**2)))
        slope = np.polyfit(np.log2(steps), np.log2(msds), 1)[0]
        assert -1.35 < slope < -0.65

    def test_equal_component_constant_weight_invariant_in_p(self):
        # with psi constant only the j = 0 coefficient of the weight survives,
        # so the expansion value is the same at every truncation order
        spec = constant_spec(UNIT, (1, 1))
        base, _ = sample_differences(spec, LEG, (0, 0), 150, 256, seed=3)
        for p in (1, 3):
            diffs, _ = sample_differences(spec, LEG, (p, p), 150, 256, seed=3)
            np.testing.assert_allclose(diffs, base, rtol=0, atol=1e-12)

    def test_mean_square_decreases_in_p_for_linear_weight(self):
        w = Weight((0.0, 1.0))
        spec = IntegralSpec(iv=UNIT, k=2, indices=(1, 1), weights=(w, w))
        msds = []
        for p in range(7):
            diffs, _ = sample_differences(spec, LEG, (p, p), 400, 1024, seed=17)
            msds.append(float(np.mean(diffs**2)))
        assert all(msds[i + 1] <= msds[i] * 1.05 + 1e-9 for i in range(len(msds) - 1))
        assert msds[-1] < msds[0]

    def test_pathwise_error_within_residual_window_high_p(self):
        w = Weight((0.0, 1.0))
        spec = IntegralSpec(iv=UNIT, k=2, indices=(1, 1), weights=(w, w))
        report = strong_error_estimate(spec, LEG, (12, 12), 500, 4096, seed=23)
        assert report.passed
        assert report.mean_sq_diff <= 10.0 * (report.parseval + report.grid_allowance)

    def test_preconditions(self):
        spec = constant_spec(UNIT, (0, 1))
        with pytest.raises(DomainError):
            strong_error_estimate(spec, LEG, (0, 0), 200, 64, seed=1)
        with pytest.raises(DomainError):
            strong_error_estimate(constant_spec(UNIT, (1, 2)), LEG, (0, 0), 99, 64, seed=1)

    def test_reproducible_and_thread_invariant(self):
        spec = constant_spec(UNIT, (1, 2))
        a = strong_error_estimate(spec, LEG, (1, 1), 300, 128, seed=5, threads=1)
        b = strong_error_estimate(spec, LEG, (1, 1), 300, 128, seed=5, threads=4)
        assert a == b

    def test_accepts_prebuilt_tensor(self):
        spec = constant_spec(UNIT, (1, 2))
        tensor = coefficient_tensor(spec, LEG, (0, 0))
        a = strong_error_estimate(spec, LEG, (0, 0), 150, 128, seed=2, tensor=tensor)
        b = strong_error_estimate(spec, LEG, (0, 0), 150, 128, seed=2)
        assert a == b


class TestMomentCheck:
    def test_n1_matches_strong_error_statistic(self):
        spec = constant_spec(UNIT, (1, 2))
        rep = strong_error_estimate(spec, LEG, (0, 0), 400, 256, seed=8)
        mom = moment_check(spec, LEG, (0, 0), 1, 400, 256, seed=8)
        assert mom.sample_moment == rep.mean_sq_diff
        assert mom.std_error == rep.std_error
        assert mom.moment_degree == 2
        assert mom.passed

    def test_n2_bound_holds(self):
        spec = constant_spec(UNIT, (1, 2))
        mom = moment_check(spec, LEG, (0, 0), 2, 1000, 1024, seed=13)
        assert mom.moment_degree == 4
        assert mom.passed
        # Gaussian-product heuristic: the sampled fourth moment sits far
        # below the analytic bound
        assert mom.sample_moment < mom.bound_2n / 10.0

    def test_zero_tensor_recovers_kernel_norm(self):
        spec = constant_spec(UNIT, (1,))
        zero = CoefficientTensor(spec=spec, basis=LEG, orders=(0,),
                                 values=np.zeros((1,)))
        mom = moment_check(spec, LEG, (0,), 1, 2000, 512, seed=21, tensor=zero)
        total = kernel_l2_norm_sq(spec)
        assert abs(mom.sample_moment - total) <= 3.0 * mom.std_error
        assert mom.parseval == pytest.approx(total)
        assert mom.passed

    def test_rejects_bad_degree(self):
        spec = constant_spec(UNIT, (1, 2))
        with pytest.raises(DomainError):
            moment_check(spec, LEG, (0, 0), 3, 200, 64, seed=1)


def test_grid_allowance_constant():
    assert grid_allowance(2, 1.0, 4096) == pytest.approx(4.0 / 4096.0)
    assert grid_allowance(3, 2.0, 64) == pytest.approx(9.0 * 4.0 / 64.0)
