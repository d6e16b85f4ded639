"""Tests for lifetimes, sweeps, and sweet-spot detection."""

import io
import math

import numpy as np
import pytest

from purcellnet import presets
from purcellnet.analysis import (
    LIFETIME_GUARD_S,
    OPEN_CIRCUIT,
    AnalyticPurcellParams,
    SpotKind,
    analytic_purcell,
    find_sweet_spots,
    frequency_sweep,
    lifetime_from_admittance,
    port_position_sweep,
)
from purcellnet.errors import PassivityError, ResolutionError
from purcellnet.models import build_multi_mode, build_single_mode, build_tline_model
from purcellnet.network import ComplexImmittance, ImmittanceKind, TermShort

TWO_PI = 2.0 * math.pi


def adm(value):
    return ComplexImmittance(value, ImmittanceKind.ADMITTANCE)


class TestLifetime:
    def test_pure_resistive_load(self):
        # 100 fF into 50 ohm: T1 = 1e-13 / 0.02 = 5e-12 s
        t1 = lifetime_from_admittance(adm(0.02 + 0j), 100e-15)
        assert t1 == pytest.approx(5e-12, rel=1e-12)

    def test_zero_real_part_is_open(self):
        assert lifetime_from_admittance(adm(0.5j), 70e-15) is OPEN_CIRCUIT

    def test_guard_caps_absurd_lifetimes(self):
        assert lifetime_from_admittance(adm(1e-26 + 0j), 70e-15) is OPEN_CIRCUIT

    def test_negative_beyond_tolerance_raises(self):
        with pytest.raises(PassivityError):
            lifetime_from_admittance(adm(-1e-12 + 0j), 70e-15)

    def test_tiny_negative_is_floored_to_open(self):
        assert lifetime_from_admittance(adm(-1e-16 + 0j), 70e-15) is OPEN_CIRCUIT


class TestAnalyticPurcell:
    def test_reference_point(self):
        # g/2pi = 100 MHz, Delta/2pi = -2 GHz, kappa/2pi = 5 MHz
        # gamma/2pi = 5 MHz * (0.05)^2 = 12.5 kHz
        p = AnalyticPurcellParams(
            g=TWO_PI * 100e6, delta=-TWO_PI * 2e9, kappa_r=TWO_PI * 5e6
        )
        t1 = analytic_purcell(p)
        assert t1 == pytest.approx(1.0 / (TWO_PI * 12.5e3), rel=1e-12)
        assert p.dispersive_valid

    def test_doubling_detuning_quadruples_lifetime(self):
        base = AnalyticPurcellParams(g=1e8, delta=-2e9, kappa_r=1e7)
        double = AnalyticPurcellParams(g=1e8, delta=-4e9, kappa_r=1e7)
        assert analytic_purcell(double) == pytest.approx(4 * analytic_purcell(base), rel=1e-12)

    def test_zero_coupling_is_open(self):
        p = AnalyticPurcellParams(g=0.0, delta=-1e9, kappa_r=1e7)
        assert analytic_purcell(p) is OPEN_CIRCUIT

    def test_resonance_rejected(self):
        with pytest.raises(ValueError):
            AnalyticPurcellParams(g=1e8, delta=0.0, kappa_r=1e7)

    def test_dispersive_flag(self):
        p = AnalyticPurcellParams(g=1e9, delta=-2e9, kappa_r=1e7)
        assert not p.dispersive_valid


@pytest.fixture(scope="module")
def single_mode():
    p = presets.default_single_mode()
    return p, build_single_mode(p)


@pytest.fixture(scope="module")
def multi_mode():
    p = presets.default_multi_mode(3)
    return p, build_multi_mode(p)


class TestFrequencySweep:
    def test_single_mode_t1_dips_at_loaded_resonance(self, single_mode):
        p, net = single_mode
        sweep = frequency_sweep(net, p.cq, 1e9, 14e9, 4001)
        k = int(np.nanargmin(sweep.t1_s))
        assert 6.7e9 < sweep.freq_hz[k] < 7.0e9

    def test_multi_mode_t1_max_between_modes(self, multi_mode):
        p, net = multi_mode
        sweep = frequency_sweep(net, p.base.cq, 7.1e9, 13.9e9, 3001)
        k = int(np.nanargmax(np.where(np.isfinite(sweep.t1_s), sweep.t1_s, -1)))
        assert 0 < k < len(sweep.freq_hz) - 1

    def test_tline_near_port_t1_max_below_fundamental(self):
        p = presets.default_tline(port_frac=0.0)
        net = build_tline_model(p)
        sweep = frequency_sweep(net, p.cq, 1e9, 6.9e9, 3001)
        k = int(np.nanargmax(np.where(np.isfinite(sweep.t1_s), sweep.t1_s, -1)))
        f_spot = sweep.freq_hz[k]
        assert f_spot < 7e9
        assert 2.5e9 < f_spot < 4.5e9  # qubit-side tap protects around 3.5 GHz

    def test_markers_never_abort(self):
        sweep = frequency_sweep(TermShort(), 70e-15, 1e9, 2e9, 11)
        assert all(m == "singular" for m in sweep.markers)
        assert np.isnan(sweep.t1_s).all()

    def test_deterministic(self, single_mode):
        p, net = single_mode
        a = frequency_sweep(net, p.cq, 1e9, 10e9, 301)
        b = frequency_sweep(net, p.cq, 1e9, 10e9, 301)
        assert np.array_equal(a.y_real, b.y_real)
        assert np.array_equal(a.t1_s, b.t1_s)
        assert a.markers == b.markers

    def test_log_spacing(self, single_mode):
        p, net = single_mode
        sweep = frequency_sweep(net, p.cq, 1e9, 10e9, 101, spacing="log")
        ratios = sweep.freq_hz[1:] / sweep.freq_hz[:-1]
        assert np.allclose(ratios, ratios[0])

    def test_csv_shape(self, single_mode):
        p, net = single_mode
        sweep = frequency_sweep(net, p.cq, 1e9, 10e9, 21, port_pos_m=1.25e-3)
        buf = io.StringIO()
        sweep.write_csv(buf)
        lines = buf.getvalue().strip().split("\n")
        assert lines[0] == "freq_hz,port_pos_m,re_y_s,im_y_s,t1_s,marker"
        assert len(lines) == 22
        # 17 significant digits round-trip
        first = lines[1].split(",")
        assert float(first[0]) == sweep.freq_hz[0]
        assert float(first[2]) == sweep.y_real[0]


class TestSweetSpots:
    def test_single_mode_has_no_spots(self, single_mode):
        p, net = single_mode
        sweep = frequency_sweep(net, p.cq, 1.4e9, 15e9, 6001)
        assert find_sweet_spots(sweep, 7e9) == []

    def test_multi_mode_one_inter_mode_null(self, multi_mode):
        p, net = multi_mode
        sweep = frequency_sweep(net, p.base.cq, 1.4e9, 15.5e9, 6001)
        spots = [
            s
            for s in find_sweet_spots(sweep, 7e9)
            if s.kind is SpotKind.INTER_MODE and 7e9 < s.frequency_hz < 14e9
        ]
        assert len(spots) == 1
        assert spots[0].neighborhood_width_hz > 0

    def test_tline_near_port_below_fundamental_spot(self):
        p = presets.default_tline(port_frac=0.125)
        net = build_tline_model(p)
        sweep = frequency_sweep(net, p.cq, 1.4e9, 6.99e9, 4001)
        spots = find_sweet_spots(sweep, 7e9)
        assert any(s.kind is SpotKind.BELOW_FUNDAMENTAL for s in spots)

    def test_sparse_sweep_rejected(self, single_mode):
        p, net = single_mode
        sweep = frequency_sweep(net, p.cq, 1.4e9, 15e9, 101)
        with pytest.raises(ResolutionError):
            find_sweet_spots(sweep, 7e9)

    def test_coverage_required(self, single_mode):
        p, net = single_mode
        sweep = frequency_sweep(net, p.cq, 3e9, 15e9, 4001)
        with pytest.raises(ValueError):
            find_sweet_spots(sweep, 7e9)


class TestPortPositionSweep:
    def test_positions_tagged_and_ordered(self):
        p = presets.default_tline(port_frac=0.125)
        length = p.line.length
        xs = [0.1 * length, 0.2 * length]
        sweeps = port_position_sweep(p, xs, 1.4e9, 6.9e9, 501)
        assert [s.port_pos_m for s in sweeps] == xs
        assert all("port_pos_m" in s.model_tag for s in sweeps)

    def test_three_near_positions_monotone_spots(self):
        p = presets.default_tline(port_frac=0.125)
        length = p.line.length
        xs = [length / 8, length / 4, 3 * length / 8]
        sweeps = port_position_sweep(p, xs, 1.4e9, 6.99e9, 4001)
        freqs = []
        for s in sweeps:
            spots = [
                sp for sp in find_sweet_spots(s, 7e9) if sp.kind is SpotKind.BELOW_FUNDAMENTAL
            ]
            assert spots
            freqs.append(spots[0].frequency_hz)
        assert freqs[0] < freqs[1] < freqs[2]

    def test_far_end_has_no_below_fundamental_spot(self, single_mode):
        p_sm, net_sm = single_mode
        p = presets.default_tline(port_frac=1.0)
        (far,) = port_position_sweep(p, [p.line.length], 1.4e9, 6.99e9, 4001)
        spots = [
            sp for sp in find_sweet_spots(far, 7e9) if sp.kind is SpotKind.BELOW_FUNDAMENTAL
        ]
        assert spots == []
        # and the protected region is strictly worse than the single mode
        sm = frequency_sweep(net_sm, p_sm.cq, 1.4e9, 6.99e9, 4001)
        band = (far.freq_hz >= 2.1e9) & (far.freq_hz <= 6.3e9)
        assert np.all(far.t1_s[band] < sm.t1_s[band])

    def test_voltage_null_position_maximizes_t1(self):
        # at fixed f_q the best tap is where the qubit-frequency standing
        # wave has zero voltage: x*/l = 1 - f1/(2 f_q)
        p = presets.default_tline(port_frac=0.25)
        length = p.line.length
        f_q = 5e9
        u_star = 1 - 7e9 / (2 * f_q)
        xs = list(np.linspace(0.02, 0.98, 41) * length)
        xs.append(u_star * length)
        sweeps = port_position_sweep(p, xs, f_q - 1e6, f_q + 1e6, 3)
        t1_at_fq = [s.t1_s[1] for s in sweeps]
        best = int(np.nanargmax(np.where(np.isfinite(t1_at_fq), t1_at_fq, np.inf)))
        # the exact null evaluates as an open-circuit marker (inf)
        assert best == len(xs) - 1 or math.isinf(t1_at_fq[-1])

    def test_position_outside_line_rejected(self):
        p = presets.default_tline(port_frac=0.125)
        with pytest.raises(ValueError):
            port_position_sweep(p, [1.5 * p.line.length], 1e9, 2e9, 3)


class TestDispersiveScaling:
    def test_loglog_slope_is_two_near_resonance(self):
        # small coupling keeps g/|Delta| < 0.05 within the window where
        # the two-oscillator law holds
        from purcellnet import calibrate
        from purcellnet.network import input_admittance

        p = presets.default_single_mode(g_hz=1.75e6)
        net = build_single_mode(p)
        f_peak, _ = calibrate.lorentzian_fwhm(net, p.f_r, 40 * 5e6)
        dets = np.linspace(35e6, 60e6, 11)
        t1 = []
        for d in dets:
            y = input_admittance(net, TWO_PI * (f_peak - d))
            t1.append(lifetime_from_admittance(y, p.cq))
        slope = np.polyfit(np.log(dets), np.log(t1), 1)[0]
        assert abs(slope - 2.0) <= 0.05

    def test_network_matches_two_oscillator_law_near_resonance(self, single_mode):
        # the admittance lifetime and kappa (g/Delta)^2 agree to 10% while
        # |Delta| stays small against the resonator frequency
        from purcellnet import calibrate
        from purcellnet.network import input_admittance

        p, net = single_mode
        f_peak, fwhm = calibrate.lorentzian_fwhm(net, p.f_r, 40 * 5e6)
        g_hz = calibrate.avoided_crossing_g_hz(p, p.cq)
        for d in (40e6, 80e6, 120e6):
            y = input_admittance(net, TWO_PI * (f_peak - d))
            t1_net = lifetime_from_admittance(y, p.cq)
            t1_osc = analytic_purcell(
                AnalyticPurcellParams(
                    g=TWO_PI * g_hz, delta=-TWO_PI * d, kappa_r=TWO_PI * fwhm
                )
            )
            assert t1_net == pytest.approx(t1_osc, rel=0.10)
