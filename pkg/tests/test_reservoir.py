import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ionjc import (
    ReservoirSpec,
    ValidityWarning,
    calibrate_a,
    damping_kappa,
    rate,
    rate_highT,
    rate_split,
    rate_table,
    rate_table_to_csv,
    thermal_factor,
    thermal_factor_ratio,
)

GAMMA0 = 0.127 / (2 * math.pi)

# Frozen from a 50-digit Decimal evaluation of coth(1)/2.
HALF_COTH_1 = 0.65651764274966565

reservoir_params = st.tuples(
    st.floats(min_value=0.0, max_value=3.0),                       # d
    st.one_of(st.just(math.inf), st.floats(min_value=0.05, max_value=50.0)),  # T
)


class TestThermalFactor:
    def test_zero_temperature_limit(self):
        # coth saturates to 1 well before T_tilde ~ 1e-3
        for n in (0, 3, 40):
            assert thermal_factor(n, 1e-3) == pytest.approx(0.5, abs=1e-15)

    def test_unit_temperature(self):
        assert thermal_factor(0, 1.0) == pytest.approx(HALF_COTH_1, rel=1e-14)

    def test_infinite_temperature_sentinel(self):
        assert math.isinf(thermal_factor(2, math.inf))

    def test_ratio_high_T_limit(self):
        assert thermal_factor_ratio(3, math.inf) == pytest.approx(0.5, abs=0)

    def test_ratio_zero_T_limit(self):
        assert thermal_factor_ratio(3, 1e-3) == pytest.approx(1.0, abs=1e-15)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            thermal_factor(0, 0.0)
        with pytest.raises(ValueError):
            thermal_factor(0, -1.0)
        with pytest.raises(ValueError):
            thermal_factor(-1, 1.0)

    @given(params=reservoir_params, n=st.integers(min_value=0, max_value=100))
    @settings(max_examples=100, deadline=None)
    def test_ratio_range_law(self, params, n):
        _, T = params
        r = thermal_factor_ratio(n, T)
        assert (n + 1) ** -0.5 * (1 - 1e-12) <= r <= 1.0 + 1e-12


class TestDampingKappa:
    def test_ohmic_base(self):
        spec = ReservoirSpec(d=1.0, a_tilde=0.01)
        assert damping_kappa(0, spec) == pytest.approx(0.02, rel=1e-14)

    def test_quadratic(self):
        spec = ReservoirSpec(d=2.0, a_tilde=0.01)
        assert damping_kappa(3, spec) == pytest.approx(0.16, rel=1e-14)

    def test_fractional_power(self):
        # frozen: 0.01*(2*sqrt(2))**0.4
        spec = ReservoirSpec(d=0.4, a_tilde=0.01)
        assert damping_kappa(1, spec) == pytest.approx(0.015157165665103983, rel=1e-14)


class TestCalibration:
    def test_anchor_reproduced_through_kappa(self):
        spec = ReservoirSpec(T_tilde=2.0, d=0.4, channel="dipole")
        a = calibrate_a(GAMMA0, spec)
        spec_cal = ReservoirSpec(T_tilde=2.0, d=0.4, a_tilde=a, channel="dipole")
        rebuilt = damping_kappa(0, spec_cal) * thermal_factor(0, 2.0)
        assert rebuilt == pytest.approx(GAMMA0, rel=1e-13)

    def test_linearity_in_gamma0(self):
        spec = ReservoirSpec(T_tilde=1.5, d=0.7, channel="vibrational")
        assert calibrate_a(2 * GAMMA0, spec) == pytest.approx(2 * calibrate_a(GAMMA0, spec), rel=1e-14)

    def test_vibrational_needs_twice_the_constant(self):
        kwargs = dict(T_tilde=3.0, d=0.4)
        a_dip = calibrate_a(GAMMA0, ReservoirSpec(channel="dipole", **kwargs))
        a_vib = calibrate_a(GAMMA0, ReservoirSpec(channel="vibrational", **kwargs))
        assert a_vib == pytest.approx(2 * a_dip, rel=1e-14)

    def test_high_T_limit_returns_zero(self):
        spec = ReservoirSpec(T_tilde=math.inf, d=0.4, channel="dipole")
        assert calibrate_a(GAMMA0, spec) == 0.0
        # but the anchored rate is still gamma0
        assert rate(0, spec, GAMMA0) == pytest.approx(GAMMA0, abs=1e-15)

    def test_zero_frequency_term_in_anchor(self):
        k0 = GAMMA0 / 4
        spec = ReservoirSpec(T_tilde=2.0, d=0.4, kappa0_nbar0=k0, channel="dipole")
        a = calibrate_a(GAMMA0, spec)
        spec_cal = ReservoirSpec(T_tilde=2.0, d=0.4, a_tilde=a, kappa0_nbar0=k0, channel="dipole")
        rebuilt = damping_kappa(0, spec_cal) * thermal_factor(0, 2.0) + 2 * k0
        assert rebuilt == pytest.approx(GAMMA0, rel=1e-13)

    def test_domain_errors(self):
        spec = ReservoirSpec(T_tilde=1.0, channel="dipole")
        with pytest.raises(ValueError):
            calibrate_a(0.0, spec)
        with pytest.raises(ValueError):
            calibrate_a(GAMMA0, ReservoirSpec(channel="none"))
        overloaded = ReservoirSpec(T_tilde=1.0, kappa0_nbar0=GAMMA0, channel="dipole")
        with pytest.raises(ValueError):
            calibrate_a(GAMMA0, overloaded)


class TestRates:
    @given(params=reservoir_params, channel=st.sampled_from(["dipole", "vibrational"]))
    @settings(max_examples=100, deadline=None)
    def test_anchor(self, params, channel):
        d, T = params
        spec = ReservoirSpec(T_tilde=T, d=d, channel=channel)
        assert abs(rate(0, spec, GAMMA0) - GAMMA0) <= 1e-12

    def test_linear_ohmic_high_T(self):
        spec = ReservoirSpec(T_tilde=math.inf, d=1.0, channel="dipole")
        ns = np.arange(50, dtype=float)
        assert np.array_equal(rate(ns, spec, GAMMA0), GAMMA0 * (ns + 1.0))

    def test_fractional_power_value(self):
        # frozen: gamma0 * 2**0.7
        spec = ReservoirSpec(T_tilde=math.inf, d=0.4, channel="dipole")
        assert rate(1, spec, GAMMA0) == pytest.approx(0.032835591915256396, rel=1e-14)

    def test_channel_none_is_zero(self):
        spec = ReservoirSpec(channel="none")
        assert rate(5, spec) == 0.0

    @given(params=reservoir_params)
    @settings(max_examples=60, deadline=None)
    def test_dipole_range_law(self, params):
        d, T = params
        spec = ReservoirSpec(T_tilde=T, d=d, channel="dipole")
        ns = np.arange(101, dtype=float)
        rates = rate(ns, spec, GAMMA0)
        lo = GAMMA0 * (ns + 1.0) ** ((d + 1.0) / 2.0)
        hi = GAMMA0 * (ns + 1.0) ** (1.0 + d / 2.0)
        assert np.all(rates >= lo * (1 - 1e-12))
        assert np.all(rates <= hi * (1 + 1e-12))

    def test_zero_T_limit_reaches_upper_branch(self):
        spec = ReservoirSpec(T_tilde=1e-4, d=0.4, channel="dipole")
        ns = np.arange(30, dtype=float)
        hi = GAMMA0 * (ns + 1.0) ** (1.0 + 0.4 / 2.0)
        assert rate(ns, spec, GAMMA0) == pytest.approx(hi, rel=1e-12)

    @pytest.mark.parametrize("channel,d", [("dipole", 0.4), ("dipole", 1.0),
                                           ("vibrational", 2.4), ("vibrational", 3.0)])
    def test_high_T_consistency(self, channel, d):
        spec = ReservoirSpec(T_tilde=math.inf, d=d, channel=channel)
        ns = np.arange(101, dtype=float)
        diff = np.abs(rate(ns, spec, GAMMA0) - rate_highT(ns, channel, d, GAMMA0))
        assert np.max(diff) <= 1e-12

    def test_exact_power_law_at_high_T(self):
        # log-log increments must be affine to machine precision
        spec = ReservoirSpec(T_tilde=math.inf, d=0.4, channel="dipole")
        ns = np.arange(101, dtype=float)
        logs = np.log(rate(ns, spec, GAMMA0))
        slopes = np.diff(logs) / np.diff(np.log(ns + 1.0))
        assert np.max(np.abs(slopes - 0.7)) <= 1e-12

    def test_zero_frequency_term_adds_linear_part(self):
        k0 = GAMMA0 / 10
        spec = ReservoirSpec(T_tilde=math.inf, d=0.4, kappa0_nbar0=k0, channel="dipole")
        sym, zero = rate_split(3, spec, GAMMA0)
        assert zero == pytest.approx(2 * 4 * k0, rel=1e-14)
        assert rate(3, spec, GAMMA0) == pytest.approx(sym + zero, rel=1e-14)
        assert rate(0, spec, GAMMA0) == pytest.approx(GAMMA0, abs=1e-15)

    def test_split_has_no_zero_part_for_vibrational(self):
        spec = ReservoirSpec(T_tilde=2.0, d=1.0, channel="vibrational")
        sym, zero = rate_split(7, spec, GAMMA0)
        assert zero == 0.0
        assert sym == rate(7, spec, GAMMA0)

    def test_gamma0_required_for_damped_channels(self):
        spec = ReservoirSpec(T_tilde=2.0, channel="dipole")
        with pytest.raises(ValueError):
            rate(1, spec, 0.0)


class TestRateHighT:
    def test_linear_forms(self):
        ns = np.arange(20, dtype=float)
        assert np.array_equal(rate_highT(ns, "dipole", 1.0, GAMMA0), GAMMA0 * (ns + 1.0))
        assert np.array_equal(rate_highT(ns, "vibrational", 3.0, GAMMA0), GAMMA0 * (ns + 1.0))

    def test_flat_vibrational_ohmic(self):
        ns = np.arange(20, dtype=float)
        assert np.array_equal(rate_highT(ns, "vibrational", 1.0, GAMMA0),
                              np.full(20, GAMMA0))

    def test_fractional_value(self):
        # frozen: 4**0.7 = 2.6390158215457884
        assert rate_highT(3, "dipole", 0.4, GAMMA0) == pytest.approx(
            GAMMA0 * 2.6390158215457884, rel=1e-14)

    def test_rejects_undamped_channel(self):
        with pytest.raises(ValueError):
            rate_highT(0, "none", 1.0, GAMMA0)


class TestReservoirSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            ReservoirSpec(T_tilde=0.0)
        with pytest.raises(ValueError):
            ReservoirSpec(T_tilde=-2.0)
        with pytest.raises(ValueError):
            ReservoirSpec(d=math.nan)
        with pytest.raises(ValueError):
            ReservoirSpec(a_tilde=-0.1)
        with pytest.raises(ValueError):
            ReservoirSpec(kappa0_nbar0=-1.0)
        with pytest.raises(ValueError):
            ReservoirSpec(channel="thermal")

    def test_weak_coupling_warning(self):
        with pytest.warns(ValidityWarning, match="weak-coupling"):
            ReservoirSpec(a_tilde=0.5)


class TestRateTable:
    def test_columns_and_anchor(self):
        spec = ReservoirSpec(T_tilde=math.inf, d=0.4, channel="dipole")
        table = rate_table(spec, GAMMA0, 10)
        assert table.n.size == 11
        assert table.omega_tilde[0] == 2.0
        assert table.rate_tilde[0] == pytest.approx(GAMMA0, abs=1e-15)
        assert np.all(table.rate_tilde >= 0)
        assert np.all(np.isfinite(table.rate_tilde))

    def test_kappa_column_matches_calibration(self):
        spec = ReservoirSpec(T_tilde=2.0, d=1.0, channel="vibrational")
        table = rate_table(spec, GAMMA0, 5)
        a = calibrate_a(GAMMA0, spec)
        assert table.kappa_tilde[2] == pytest.approx(a * (2 * math.sqrt(3)), rel=1e-13)

    def test_none_channel_all_zero(self):
        table = rate_table(ReservoirSpec(channel="none"), 1.0, 6)
        assert np.all(table.rate_tilde == 0)
        assert np.all(table.kappa_tilde == 0)

    def test_vibrational_subohmic_rates_decrease(self):
        spec = ReservoirSpec(T_tilde=math.inf, d=0.4, channel="vibrational")
        table = rate_table(spec, GAMMA0, 20)
        assert np.all(np.diff(table.rate_tilde) < 0)

    def test_csv_header_and_shape(self):
        spec = ReservoirSpec(T_tilde=math.inf, d=1.0, channel="dipole")
        text = rate_table_to_csv(rate_table(spec, GAMMA0, 3))
        lines = text.strip().split("\n")
        assert lines[0] == "n,omega_tilde,kappa_tilde,f_ratio,rate_tilde"
        assert len(lines) == 5
        first = lines[1].split(",")
        assert first[0] == "0"
        assert float(first[1]) == 2.0
