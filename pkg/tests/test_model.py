"""Unit tests for parameter types and pointwise model terms."""

import math

import numpy as np
import pytest

from levyprey import (
    DelaySpec,
    DelayedState,
    HistorySpec,
    ModelParams,
    NoiseSpec,
    State,
    apply_jump,
    diffusion,
    drift,
    validate,
)

# published simulation column used throughout (extinction flavor), with the
# package-assumed transformation rates
FIG1_PARAMS = ModelParams(
    r1=0.7, r2=0.65, k1=100.0, k2=100.0, alpha1=0.3, alpha2=0.35,
    alpha3=0.5, beta=1e-4, delta=0.1, a1=0.05, a2=0.05,
)
FIG1_NOISE = NoiseSpec(sigma1=1e-4, sigma2=2e-4, sigma3=2e-4, q1=-0.04, q2=-0.006, q3=-0.008, lam=1.0)
TABLE_DELAYS = DelaySpec(0.5, 1.0, 1.5)


class TestDrift:
    def test_origin_is_equilibrium(self):
        f = drift(State(0, 0, 0), DelayedState(5, 7, 9, 11), FIG1_PARAMS)
        assert f == (0.0, 0.0, 0.0)

    def test_prey1_at_capacity_without_predator(self):
        # x at carrying capacity with delayed tap also at K1, no y, no z
        f = drift(State(100.0, 0.0, 0.0), DelayedState(100.0, 0.0, 100.0, 0.0), FIG1_PARAMS)
        assert f == (0.0, 0.0, 0.0)

    def test_hand_evaluated_rates(self):
        # independent hand sum, term by term:
        #   fx = 0.7*50*(1 - 0.5) - 0.3*50*10 + 1e-4*50*50*10 = 17.5 - 150 + 2.5
        #   fy = 0.65*50*(1 - 0.5) - 0.35*50*10 + 2.5        = 16.25 - 175 + 2.5
        #   fz = -0.1*10 - 0.5*100 + 0.05*50*10 + 0.05*50*10 = -1 - 50 + 25 + 25
        fx, fy, fz = drift(State(50, 50, 10), DelayedState(50, 50, 50, 50), FIG1_PARAMS)
        assert fx == pytest.approx(-130.0, abs=1e-12)
        assert fy == pytest.approx(-156.25, abs=1e-12)
        assert fz == pytest.approx(-1.0, abs=1e-12)

    def test_pure_and_zero_predator_forces_fz_zero(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            s = State(*rng.uniform(0, 50, 3))
            d = DelayedState(*rng.uniform(0, 50, 4))
            assert drift(s, d, FIG1_PARAMS) == drift(s, d, FIG1_PARAMS)
            s0 = State(s.x, s.y, 0.0)
            assert drift(s0, d, FIG1_PARAMS)[2] == 0.0

    def test_nonfinite_input_names_component(self):
        with pytest.raises(ValueError, match="state.y"):
            drift(State(1.0, math.nan, 1.0), DelayedState(1, 1, 1, 1), FIG1_PARAMS)
        with pytest.raises(ValueError, match="delayed.x_tau3"):
            drift(State(1, 1, 1), DelayedState(1, 1, math.inf, 1), FIG1_PARAMS)


class TestDiffusion:
    def test_vanishes_at_origin(self):
        assert diffusion(State(0, 0, 0), FIG1_NOISE) == (0.0, 0.0, 0.0)

    def test_direct_multiplication(self):
        n = NoiseSpec(0.1, 0.2, 0.3, 0, 0, 0)
        assert diffusion(State(10, 10, 10), n) == (1.0, 2.0, 3.0)

    def test_fig1_intensities(self):
        g = diffusion(State(50, 50, 10), FIG1_NOISE)
        assert g == pytest.approx((5e-3, 1e-2, 2e-3), rel=1e-12)


class TestApplyJump:
    def test_all_species_table_marks(self):
        out = apply_jump(State(10, 10, 10), ("x", "y", "z"), FIG1_NOISE)
        assert out == pytest.approx((9.6, 9.94, 9.92), rel=1e-12)

    def test_empty_subset_is_identity(self):
        assert apply_jump(State(10, 10, 10), (), FIG1_NOISE) == (10, 10, 10)

    def test_zero_is_absorbing(self):
        out = apply_jump(State(0.0, 5.0, 5.0), ("x", "y", "z"), FIG1_NOISE)
        assert out.x == 0.0
        assert out.y == pytest.approx(5 * (1 - 0.006))
        assert out.z == pytest.approx(5 * (1 - 0.008))

    def test_positivity_preserved_for_random_marks(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            q = rng.uniform(-0.999, 4.0, 3)
            n = NoiseSpec(0, 0, 0, q1=q[0], q2=q[1], q3=q[2])
            s = State(*rng.uniform(1e-8, 100.0, 3))
            out = apply_jump(s, ("x", "y", "z"), n)
            assert all(v > 0 for v in out)

    def test_unknown_species_rejected(self):
        with pytest.raises(ValueError, match="unknown species"):
            apply_jump(State(1, 1, 1), ("w",), FIG1_NOISE)


class TestTypeInvariants:
    def test_negative_rate_rejected(self):
        with pytest.raises(ValueError, match="r1"):
            ModelParams(r1=-0.1, r2=0.5, k1=1, k2=1, alpha1=0, alpha2=0,
                        alpha3=0, beta=0, delta=0, a1=0, a2=0)

    def test_zero_capacity_rejected(self):
        with pytest.raises(ValueError, match="k2"):
            ModelParams(r1=0.1, r2=0.5, k1=1, k2=0, alpha1=0, alpha2=0,
                        alpha3=0, beta=0, delta=0, a1=0, a2=0)

    def test_jump_mark_at_or_below_minus_one_rejected(self):
        with pytest.raises(ValueError, match="q1"):
            NoiseSpec(0, 0, 0, q1=-1.5, q2=0, q3=0)
        with pytest.raises(ValueError, match="q3"):
            NoiseSpec(0, 0, 0, q1=0, q2=0, q3=-1.0)

    def test_negative_delay_rejected(self):
        with pytest.raises(ValueError, match="tau2"):
            DelaySpec(0.5, -1.0, 0.5)

    def test_tau_max(self):
        assert DelaySpec(0.5, 1.0, 1.5).tau_max == 1.5
        assert DelaySpec(0, 0, 0).tau_max == 0

    def test_history_table_must_increase(self):
        with pytest.raises(ValueError, match="strictly increasing"):
            HistorySpec.from_table([(-1, 1, 1, 1), (-1, 2, 2, 2), (0, 3, 3, 3)])

    def test_history_negative_value_rejected(self):
        with pytest.raises(ValueError, match="negative"):
            HistorySpec.from_table([(-1, 1, -1, 1), (0, 1, 1, 1)])
        with pytest.raises(ValueError, match="y0"):
            HistorySpec.from_constant(1.0, -2.0, 3.0)

    def test_history_linear_interpolation(self):
        h = HistorySpec.from_table([(-1, 0, 0, 0), (0, 10, 10, 10)])
        assert h.value_at(-0.5) == pytest.approx((5, 5, 5))


class TestValidate:
    def test_fig1_fails_unique_solution_condition(self):
        report = validate(FIG1_PARAMS, FIG1_NOISE, TABLE_DELAYS)
        assert not report.ok
        failed = report.failed()
        assert len(failed) == 1
        assert "delta > alpha3" in failed[0].name

    def test_passes_when_delta_exceeds_alpha3(self):
        p = ModelParams(r1=0.7, r2=0.65, k1=100, k2=100, alpha1=0.3, alpha2=0.35,
                        alpha3=0.5, beta=1e-4, delta=0.6, a1=0.05, a2=0.05)
        assert validate(p, FIG1_NOISE, TABLE_DELAYS).ok

    def test_overall_pass_iff_every_check_passes(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            p = ModelParams(
                r1=rng.uniform(0, 2), r2=rng.uniform(0, 2),
                k1=rng.uniform(1, 200), k2=rng.uniform(1, 200),
                alpha1=rng.uniform(0, 1), alpha2=rng.uniform(0, 1),
                alpha3=rng.uniform(0, 1), beta=rng.uniform(0, 0.01),
                delta=rng.uniform(0, 1), a1=rng.uniform(0, 0.2), a2=rng.uniform(0, 0.2),
            )
            report = validate(p, FIG1_NOISE, TABLE_DELAYS)
            assert report.ok == all(c.passed for c in report.checks)
