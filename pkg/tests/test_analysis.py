import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ionjc import (
    InsufficientDataError,
    PropagatorParams,
    ReservoirSpec,
    coherent_dist,
    default_time_grid,
    extract_decay,
    fit_power_law,
    fock_dist,
    initial_block_state,
    pdown_trace,
    phenom_trace,
    propagate_block_analytic,
    rate_highT,
    revival_report,
)
from ionjc.analysis import RevivalReport
from ionjc.dynamics import TimeSeries

GAMMA0 = 0.127 / (2 * math.pi)

# Rephasing-time oracle for a coherent state with mean occupation 9: the
# neighbouring splittings realign when (Omega_10 - Omega_9) t = 2pi, i.e.
# g t / 2pi = 1 / (2 (sqrt(11) - sqrt(10))) = 3.2395.
REVIVAL_ESTIMATE = 3.2394512252618943


class TestExtractDecay:
    def make_samples(self, A, t_span=150.0, n=4000, omega=2 * math.sqrt(2)):
        p = PropagatorParams(A_n=A, Omega_n=omega, channel="dipole")
        t = np.linspace(0.0, t_span, n)
        r12, _ = propagate_block_analytic(p, 0.5, 0.5, t)
        return t, r12.real

    @pytest.mark.parametrize("target", [2.0, 4.0, 8.0])
    def test_recovers_known_rate(self, target):
        # A * t_span in [2, 8]: recovery within 1 percent
        A = target / 150.0
        t, y = self.make_samples(A)
        est = extract_decay(t, y, 2 * math.sqrt(2))
        assert est.a_hat == pytest.approx(A, rel=0.01)
        assert est.n_extrema >= 10

    def test_recovers_reference_rate(self):
        # frozen reference rate gamma0 * 2**0.7 from the n=1 dipole block
        A = 0.032835591915256396
        t, y = self.make_samples(A)
        est = extract_decay(t, y, 2 * math.sqrt(2))
        assert est.a_hat == pytest.approx(A, rel=0.01)
        assert est.stderr < 0.01 * A

    def test_undamped_rate_is_zero(self):
        t, y = self.make_samples(0.0)
        est = extract_decay(t, y, 2 * math.sqrt(2))
        assert abs(est.a_hat) <= 1e-6

    def test_pure_exponential_rejected(self):
        t = np.linspace(0, 150, 2000)
        y = np.exp(-0.05 * t)
        with pytest.raises(InsufficientDataError):
            extract_decay(t, y, 2.0)

    def test_too_few_periods_rejected(self):
        t = np.linspace(0, 2.0, 500)
        y = np.cos(2.0 * t)
        with pytest.raises(InsufficientDataError):
            extract_decay(t, y, 2.0)

    def test_bad_inputs(self):
        t = np.linspace(0, 100, 1000)
        with pytest.raises(ValueError):
            extract_decay(t, np.cos(t), 0.0)
        with pytest.raises(ValueError):
            extract_decay(t[:4], np.cos(t[:4]), 2.0)


class TestFitPowerLaw:
    def test_dipole_subohmic_maps_to_0p7(self):
        ns = np.arange(21)
        fit = fit_power_law(ns, rate_highT(ns.astype(float), "dipole", 0.4, GAMMA0))
        assert abs(fit.nu_hat - 0.7) <= 1e-12
        assert fit.residual_rms <= 1e-12
        assert fit.gamma0_hat == pytest.approx(GAMMA0, rel=1e-12)
        assert fit.n_range == (0, 20)

    def test_vibrational_radiation_field_maps_to_1(self):
        ns = np.arange(21)
        fit = fit_power_law(ns, rate_highT(ns.astype(float), "vibrational", 3.0, GAMMA0))
        assert abs(fit.nu_hat - 1.0) <= 1e-12

    def test_finite_temperature_fit_is_curved(self):
        from ionjc import rate

        ns = np.arange(21)
        spec = ReservoirSpec(T_tilde=1.0, d=0.4, channel="dipole")
        fit = fit_power_law(ns, rate(ns.astype(float), spec, GAMMA0))
        # the range law squeezes the local exponent between (d+1)/2 and 1+d/2
        assert 0.7 < fit.nu_hat < 1.2
        assert fit.residual_rms > 0.0

    @given(c=st.floats(min_value=1e-6, max_value=1e6))
    @settings(max_examples=60, deadline=None)
    def test_scale_equivariance(self, c):
        ns = np.arange(15)
        rates = rate_highT(ns.astype(float), "dipole", 0.8, GAMMA0)
        base = fit_power_law(ns, rates)
        scaled = fit_power_law(ns, c * rates)
        assert abs(scaled.nu_hat - base.nu_hat) <= 1e-12
        assert scaled.gamma0_hat == pytest.approx(c * base.gamma0_hat, rel=1e-11)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            fit_power_law(np.array([0, 1]), np.array([1.0, 2.0]))
        with pytest.raises(ValueError):
            fit_power_law(np.array([0, 1, 2]), np.array([1.0, 0.0, 2.0]))
        with pytest.raises(ValueError):
            fit_power_law(np.array([0, 1, 2]), np.array([1.0, -1.0, 2.0]))


class TestRevivalReport:
    def undamped_alpha3(self, t_max=5.0, samples=2000):
        dist = coherent_dist(3.0)
        return phenom_trace(dist, 0.0, 0.7, default_time_grid(t_max, samples))

    def damped_alpha3(self, t_max=5.0, samples=2000):
        dist = coherent_dist(3.0)
        st_ = initial_block_state(dist, "down")
        spec = ReservoirSpec(T_tilde=math.inf, d=0.4, channel="dipole")
        return pdown_trace(st_, spec, GAMMA0, default_time_grid(t_max, samples))

    def test_undamped_revival_near_rephasing_time(self):
        rep = revival_report(self.undamped_alpha3())
        assert rep.collapse_time is not None
        assert rep.revival_times, "expected at least one revival"
        assert rep.revival_times[0] == pytest.approx(REVIVAL_ESTIMATE, abs=0.3)

    def test_fock_trace_has_no_collapse(self):
        st_ = initial_block_state(fock_dist(1, 1), "down")
        spec = ReservoirSpec(T_tilde=math.inf, d=0.4, channel="dipole")
        ts = pdown_trace(st_, spec, GAMMA0, default_time_grid())
        rep = revival_report(ts)
        assert rep.collapse_time is None
        assert rep.revival_times == []

    def test_damping_shrinks_the_revival(self):
        undamped = revival_report(self.undamped_alpha3())
        damped = revival_report(self.damped_alpha3())
        assert damped.revival_times, "damped revival should still be detected"
        assert damped.revival_amplitudes[0] < undamped.revival_amplitudes[0]

    def test_time_shift_equivariance(self):
        # dyadic grid: every time value and the shift are exact binary floats,
        # so "shifted by exactly the prepended duration" is exact float equality
        dist = coherent_dist(3.0)
        grid = np.arange(1280) / 256.0
        base = phenom_trace(dist, 0.0, 0.7, grid)
        window = 0.25
        k = 137
        times = np.arange(1280 + k) / 256.0
        shifted_pop = np.concatenate([np.full(k, base.p_down[0]), base.p_down])
        shifted = TimeSeries(times=times, p_down=shifted_pop)
        rep = revival_report(base, window=window)
        rep_shift = revival_report(shifted, window=window)
        delta = k / 256.0
        assert rep_shift.collapse_time == rep.collapse_time + delta
        assert len(rep_shift.revival_times) == len(rep.revival_times)
        for a, b in zip(rep.revival_times, rep_shift.revival_times):
            assert b == a + delta

    def test_too_short_rejected(self):
        ts = TimeSeries(times=np.linspace(0, 1, 8), p_down=np.full(8, 1.0))
        with pytest.raises(InsufficientDataError):
            revival_report(ts)

    def test_flat_trace_rejected(self):
        ts = TimeSeries(times=np.linspace(0, 5, 500), p_down=np.full(500, 0.5))
        with pytest.raises(InsufficientDataError):
            revival_report(ts)

    def test_report_validation(self):
        with pytest.raises(ValueError):
            RevivalReport(collapse_time=1.0, revival_times=[2.0, 1.5],
                          revival_amplitudes=[0.2, 0.1])
        with pytest.raises(ValueError):
            RevivalReport(collapse_time=None, revival_times=[1.0],
                          revival_amplitudes=[1.5])

    def test_json_serialization(self):
        import json

        from ionjc.analysis import powerlaw_fit_to_json, revival_report_to_json

        rep = revival_report(self.undamped_alpha3())
        doc = json.loads(revival_report_to_json(rep))
        assert doc["revival_times"] == rep.revival_times
        assert doc["collapse_time"] == rep.collapse_time

        ns = np.arange(10)
        fit = fit_power_law(ns, rate_highT(ns.astype(float), "dipole", 0.4, GAMMA0))
        doc = json.loads(powerlaw_fit_to_json(fit, table=[[0, 1.0, 1.0]]))
        assert doc["nu_hat"] == fit.nu_hat
        assert doc["table"] == [[0, 1.0, 1.0]]
