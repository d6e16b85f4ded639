"""Tests for pi-pulse power algebra and the two-configuration extraction."""

import json
import math

import numpy as np
import pytest
from scipy.constants import hbar

from purcellnet.errors import InconsistentMeasurementError
from purcellnet.lossbudget import (
    ConfigId,
    ConfigMeasurement,
    PulseRecord,
    RabiCalib,
    coupling_q_from_power,
    effective_power,
    extract_budget,
    load_measurement,
    measurement_from_dict,
    measurement_to_dict,
    photon_number,
    synthesize_measurements,
)

TWO_PI = 2.0 * math.pi


class TestEffectivePower:
    def test_unit_pulse(self):
        assert effective_power(PulseRecord(1.0, 1.0, 0.0)) == 1.0

    def test_thirteen_db_attenuation(self):
        # the readout lines carry 13 dB more attenuation than the drive line
        ref = effective_power(PulseRecord(1.0, 1.0, 0.0))
        att = effective_power(PulseRecord(1.0, 1.0, 13.0))
        assert att / ref == 10 ** (-1.3)
        assert att / ref == pytest.approx(0.0501, abs=2e-4)

    def test_amplitude_square_law(self):
        one = effective_power(PulseRecord(1.0, 2e-9, 3.0))
        two = effective_power(PulseRecord(2.0, 2e-9, 3.0))
        assert two == pytest.approx(4 * one, rel=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            PulseRecord(0.0, 1.0)
        with pytest.raises(ValueError):
            PulseRecord(1.0, -1.0)
        with pytest.raises(ValueError):
            PulseRecord(1.0, 1.0, -3.0)


class TestCalibrationRelations:
    def test_unit_coupling_q(self):
        assert coupling_q_from_power(hbar / 4.0, 1.0) == pytest.approx(1.0, rel=1e-12)

    def test_power_square_law(self):
        q = coupling_q_from_power(1e-15, TWO_PI * 10e6)
        q_half_rabi = coupling_q_from_power(0.25e-15, TWO_PI * 5e6)
        assert q_half_rabi == pytest.approx(q, rel=1e-12)

    def test_direct_formula(self):
        p_in = 1e-15
        omega = TWO_PI * 10e6
        expected = 4.0 * p_in / (hbar * omega * omega)
        assert coupling_q_from_power(p_in, omega) == pytest.approx(expected, rel=1e-12)

    def test_photon_number_unity(self):
        assert photon_number(1e4, 1e5, 1e9) == pytest.approx(1.0, rel=1e-12)

    def test_photon_number_zero_q(self):
        assert photon_number(1e6, 0.0, 1e9) == 0.0

    def test_input_output_identity(self):
        # n from Omega, Ql directly equals n from input-output with
        # Q_c eliminated through the power relation
        omega_rabi = TWO_PI * 3.7e6
        omega_q = TWO_PI * 5.05e9
        q_l = 1.4e3
        p_in = 2.4e-16
        q_c = coupling_q_from_power(p_in, omega_rabi)
        n_direct = photon_number(omega_rabi, q_l, omega_q)
        n_io = (4.0 / (hbar * omega_q**2)) * (q_l**2 / q_c) * p_in
        assert n_io == pytest.approx(n_direct, rel=1e-12)

    def test_rabi_calib_consistency(self):
        omega_rabi = TWO_PI * 2e6
        omega_q = TWO_PI * 5e9
        q_l = 2e3
        p_in = 1e-16
        RabiCalib(
            omega_rabi=omega_rabi,
            q_loaded=q_l,
            omega_q=omega_q,
            n_bar=photon_number(omega_rabi, q_l, omega_q),
            q_coupling=coupling_q_from_power(p_in, omega_rabi),
            p_in_w=p_in,
        )
        with pytest.raises(ValueError):
            RabiCalib(
                omega_rabi=omega_rabi,
                q_loaded=q_l,
                omega_q=omega_q,
                n_bar=1.0,
                q_coupling=coupling_q_from_power(p_in, omega_rabi),
                p_in_w=p_in,
            )


class TestExtraction:
    def test_equal_powers_split_evenly(self):
        pulse = PulseRecord(1.0, 1.0)
        aw = ConfigMeasurement(ConfigId.ANTI_WISPE, 2e-6, pulse, pulse)
        w = ConfigMeasurement(ConfigId.WISPE, 3.8e-6, pulse, PulseRecord(10.0, 1.0))
        budget = extract_budget(aw, w)
        assert budget.gamma_d == pytest.approx(0.25e6, rel=1e-12)
        assert budget.gamma_r_anti_wispe == pytest.approx(0.25e6, rel=1e-12)

    def test_reference_round_trip(self):
        # forward-generate from a known quadruple, then recover it
        g_int, g_d = 1.0 / 100e-6, 1.0 / 2e-3
        g_r_aw, g_r_w = 1.0 / 1.05e-6, 1.0 / 1.59e-3
        aw, w = synthesize_measurements(g_int, g_d, g_r_aw, g_r_w)
        assert aw.t1_s == pytest.approx(1.05e-6, rel=1e-3)
        assert w.t1_s == pytest.approx(89.9e-6, rel=1e-2)
        budget = extract_budget(aw, w)
        assert budget.gamma_int == pytest.approx(g_int, rel=1e-9)
        assert budget.gamma_d == pytest.approx(g_d, rel=1e-9)
        assert budget.gamma_r_anti_wispe == pytest.approx(g_r_aw, rel=1e-9)
        assert budget.gamma_r_wispe == pytest.approx(g_r_w, rel=1e-9)
        assert budget.purcell_limit_wispe_s == pytest.approx(1.59e-3, rel=1e-9)

    def test_round_trip_property(self):
        rng = np.random.default_rng(1234)
        for _ in range(500):
            g_d = 10 ** rng.uniform(2, 6)
            g_r_aw = 10 ** rng.uniform(4, 7)
            g_int = rng.uniform(0.0, 0.01) * (g_d + g_r_aw)
            g_r_w = 10 ** rng.uniform(1, 5)
            if g_int <= 0:
                continue
            aw, w = synthesize_measurements(g_int, g_d, g_r_aw, g_r_w)
            budget = extract_budget(aw, w)
            for got, want in [
                (budget.gamma_int, g_int),
                (budget.gamma_d, g_d),
                (budget.gamma_r_anti_wispe, g_r_aw),
                (budget.gamma_r_wispe, g_r_w),
            ]:
                assert abs(got - want) <= 1e-9 * want

    def test_scale_invariance(self):
        aw, w = synthesize_measurements(1e4, 2e3, 9e5, 6e2)

        def scaled(m, factor):
            def scale(p):
                return PulseRecord(
                    p.amplitude_v * factor, p.duration_s, p.line_attenuation_db, p.port_id
                )

            return ConfigMeasurement(
                m.config_id, m.t1_s, scale(m.qubit_port_pulse), scale(m.readout_port_pulse)
            )

        a = extract_budget(aw, w)
        b = extract_budget(scaled(aw, 7.3), scaled(w, 7.3))
        assert b.gamma_int == pytest.approx(a.gamma_int, rel=1e-12)
        assert b.gamma_r_wispe == pytest.approx(a.gamma_r_wispe, rel=1e-12)

    def test_attenuation_convention_consistency(self):
        # 13 dB in the attenuation field equals a 10^(-1.3/2) amplitude factor
        aw, w = synthesize_measurements(1e4, 2e3, 9e5, 6e2)

        def with_attenuation(m):
            p = m.readout_port_pulse
            moved = PulseRecord(
                p.amplitude_v * 10 ** (1.3 / 2), p.duration_s, 13.0, p.port_id
            )
            return ConfigMeasurement(m.config_id, m.t1_s, m.qubit_port_pulse, moved)

        a = extract_budget(aw, w)
        b = extract_budget(with_attenuation(aw), with_attenuation(w))
        assert b.gamma_int == pytest.approx(a.gamma_int, rel=1e-9)
        assert b.gamma_r_wispe == pytest.approx(a.gamma_r_wispe, rel=1e-9)

    def test_longer_wispe_t1_never_decreases_internal_lifetime(self):
        aw, w0 = synthesize_measurements(1e4, 2e3, 9e5, 6e2)
        previous = 0.0
        for t1_w in np.linspace(w0.t1_s, 1.6 * w0.t1_s, 7):
            w = ConfigMeasurement(
                ConfigId.WISPE, float(t1_w), w0.qubit_port_pulse, w0.readout_port_pulse
            )
            budget = extract_budget(aw, w)
            if budget.gamma_int == 0.0:
                continue
            lifetime = 1.0 / budget.gamma_int
            assert lifetime >= previous
            previous = lifetime

    def test_inconsistent_measurements_raise(self):
        aw, w0 = synthesize_measurements(1e4, 2e3, 9e5, 6e2)
        w = ConfigMeasurement(
            ConfigId.WISPE, 10 * w0.t1_s, w0.qubit_port_pulse, w0.readout_port_pulse
        )
        with pytest.raises(InconsistentMeasurementError) as exc:
            extract_budget(aw, w)
        assert "internal losses" in exc.value.assumption

    def test_argument_order_enforced(self):
        aw, w = synthesize_measurements(1e4, 2e3, 9e5, 6e2)
        with pytest.raises(ValueError):
            extract_budget(w, aw)

    def test_qubit_a_consistency_range(self):
        # anti-wispe 1 us, wispe 80 us, wispe pulse records built from the
        # published 63.6 ratio with the 13 dB line difference: the protected
        # Purcell limit lands in the millisecond range
        qubit_pulse = PulseRecord(1.0, 1.0, 0.0)
        aw = ConfigMeasurement(
            ConfigId.ANTI_WISPE, 1e-6, qubit_pulse, PulseRecord(0.2, 1.0, 13.0)
        )
        w = ConfigMeasurement(
            ConfigId.WISPE, 80e-6, qubit_pulse, PulseRecord(math.sqrt(63.6), 1.0, 13.0)
        )
        budget = extract_budget(aw, w)
        assert 0.5e-3 <= budget.purcell_limit_wispe_s <= 5e-3
        assert budget.gamma_int > 0


class TestMeasurementFiles:
    def test_round_trip(self, tmp_path):
        aw, _ = synthesize_measurements(1e4, 2e3, 9e5, 6e2)
        path = tmp_path / "aw.json"
        path.write_text(json.dumps(measurement_to_dict(aw)))
        loaded = load_measurement(path)
        assert loaded.config_id is ConfigId.ANTI_WISPE
        assert loaded.t1_s == pytest.approx(aw.t1_s, rel=1e-12)
        assert loaded.readout_port_pulse.amplitude_v == aw.readout_port_pulse.amplitude_v

    def test_unit_fields(self):
        doc = {
            "config_id": "wispe",
            "t1_us": 80.0,
            "qubit_port_pulse": {"amplitude_v": 1.0, "duration_ns": 20.0, "attenuation_db": 0.0},
            "readout_port_pulse": {"amplitude_v": 8.0, "duration_ns": 20.0, "attenuation_db": 13.0},
        }
        m = measurement_from_dict(doc)
        assert m.t1_s == pytest.approx(80e-6)
        assert m.qubit_port_pulse.duration_s == pytest.approx(20e-9)

    def test_bad_config_id(self):
        with pytest.raises(ValueError):
            measurement_from_dict({"config_id": "protected", "t1_us": 1.0})

    def test_missing_pulse_field(self):
        doc = {
            "config_id": "wispe",
            "t1_us": 80.0,
            "qubit_port_pulse": {"amplitude_v": 1.0, "duration_ns": 20.0},
            "readout_port_pulse": {"amplitude_v": 8.0, "duration_ns": 20.0, "attenuation_db": 13.0},
        }
        with pytest.raises(ValueError):
            measurement_from_dict(doc)
