"""Numerical extraction of linewidths and couplings from network responses.

These routines measure a model the way an experiment would: the loaded
linewidth comes from the full width at half maximum of Re[Y], and the
coupling strength from the minimum normal-mode splitting of the undriven
(lossless) coupled system.  Everything is deterministic.
"""

import math
from dataclasses import replace

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .network import (
    Capacitor,
    Inductor,
    NetworkTree,
    ParallelRLC,
    Series,
    Shunt,
    TermOpen,
    input_admittance,
    one_port,
)

TWO_PI = 2.0 * math.pi


def re_admittance(net: NetworkTree, f_hz: float) -> float:
    return input_admittance(net, TWO_PI * f_hz).value.real


def lorentzian_fwhm(
    net: NetworkTree, f_center_guess: float, span_hz: float, n_scan: int = 2001
) -> tuple[float, float]:
    """Peak frequency and FWHM of Re[Y] near f_center_guess.

    The scan window recenters on the peak and widens until both
    half-maximum crossings are bracketed; the peak itself is refined with
    a bounded scalar minimizer and the crossings with brentq.
    """
    center, span = f_center_guess, span_hz
    for _ in range(60):
        lo_edge = max(center - span / 2, span * 1e-3)
        fs = np.linspace(lo_edge, center + span / 2, n_scan)
        re = np.array([re_admittance(net, f) for f in fs])
        ipk = int(np.argmax(re))
        if ipk == 0 or ipk == len(fs) - 1:
            center = float(fs[ipk])  # track a peak that left the window
            continue
        half = re[ipk] / 2.0
        if re[:ipk].min() >= half or re[ipk:].min() >= half:
            span *= 2.0
            center = float(fs[ipk])
            continue
        break
    else:
        raise ValueError("could not isolate the Re[Y] peak; bad f_center_guess?")
    res = minimize_scalar(
        lambda f: -re_admittance(net, f),
        bounds=(fs[ipk - 1], fs[ipk + 1]),
        method="bounded",
        options={"xatol": span * 1e-9},
    )
    f_peak = float(res.x)
    half = re_admittance(net, f_peak) / 2.0

    def crossing(lo, hi):
        return brentq(lambda f: re_admittance(net, f) - half, lo, hi, xtol=span * 1e-9)

    below = np.nonzero(re[:ipk] < half)[0]
    above = np.nonzero(re[ipk:] < half)[0]
    f_lo = crossing(fs[below[-1]], f_peak)
    f_hi = crossing(f_peak, fs[ipk + above[0]])
    return f_peak, f_hi - f_lo


def extracted_kappa_hz(net: NetworkTree, f_center_guess: float, span_hz: float) -> float:
    """Loaded linewidth (FWHM of Re[Y], in Hz) near f_center_guess."""
    return lorentzian_fwhm(net, f_center_guess, span_hz)[1]


def solve_coupling_cap_for_kappa(
    make_net,
    ck_guess: float,
    target_kappa_hz: float,
    f_center_guess: float,
    span_factor: float = 40.0,
):
    """Coupling capacitance giving a target FWHM linewidth.

    `make_net(ck)` must build the network to measure.  kappa grows
    monotonically with ck (close to ck^2), so a bracketing root find on
    log(kappa) converges quickly.
    """
    span = span_factor * target_kappa_hz

    # root-find in u = log(ck / ck_guess); farad-scale x underflows brentq's
    # absolute xtol
    def log_err(u):
        ck = ck_guess * math.exp(u)
        return math.log(extracted_kappa_hz(make_net(ck), f_center_guess, span) / target_kappa_hz)

    lo, hi = -math.log(3.0), math.log(3.0)
    e_lo, e_hi = log_err(lo), log_err(hi)
    for _ in range(8):
        if e_lo < 0 < e_hi:
            break
        if e_lo > 0:
            lo -= math.log(3.0)
            e_lo = log_err(lo)
        if e_hi < 0:
            hi += math.log(3.0)
            e_hi = log_err(hi)
    else:
        raise ValueError("could not bracket the target linewidth")
    u_root = brentq(log_err, lo, hi, xtol=1e-7)
    return ck_guess * math.exp(u_root)


# --- coupling strength from the avoided crossing -----------------------------


def _lossless_variant(p) -> NetworkTree:
    """Single-mode network with the load replaced by an open."""
    tank = ParallelRLC(p.lr, p.cr)
    return Series(
        Capacitor(p.cg), Shunt(one_port(tank), Series(Capacitor(p.ckappa), TermOpen()))
    )


def _mode_frequencies(p, cq: float, f_q0: float, window: tuple[float, float], n_grid: int):
    """Real zeros of the total node susceptance for a bare qubit at f_q0."""
    net = _lossless_variant(p)
    lq = 1.0 / ((TWO_PI * f_q0) ** 2 * cq)

    def susceptance(f):
        w = TWO_PI * f
        return (w * cq - 1.0 / (w * lq)) + input_admittance(net, w).value.imag

    fs = np.linspace(window[0], window[1], n_grid)
    vals = np.array([susceptance(f) for f in fs])
    zeros = []
    for i in range(len(fs) - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            zeros.append(fs[i])
            continue
        if a * b < 0:
            root = brentq(susceptance, fs[i], fs[i + 1], xtol=1.0)
            # reject poles: brentq lands next to the discontinuity where the
            # magnitude stays comparable to the endpoints
            if abs(susceptance(root)) < 1e-3 * min(abs(a), abs(b)) + 1e-12:
                zeros.append(root)
    return zeros


def avoided_crossing_g_hz(
    p, cq: float, f_detune_span: float = 0.7e9, n_detunings: int = 29
) -> float:
    """Coupling strength from the minimum normal-mode splitting.

    Sweeps the bare qubit frequency through the resonator, measures the two
    hybridized mode frequencies at each step, and returns half the minimum
    splitting in Hz.
    """
    f_r = p.f_r
    window = (f_r - 1.6e9, f_r + 1.6e9)

    def splitting(f_q0):
        zeros = _mode_frequencies(p, cq, f_q0, window, 1601)
        if len(zeros) < 2:
            return np.nan
        zeros = sorted(zeros)
        gaps = [(hi - lo, lo, hi) for lo, hi in zip(zeros, zeros[1:])]
        return min(gaps)[0]

    f_q0s = np.linspace(f_r - f_detune_span / 2, f_r + f_detune_span / 2, n_detunings)
    gaps = np.array([splitting(f) for f in f_q0s])
    if np.any(np.isnan(gaps)):
        raise ValueError("mode tracking failed; widen the search window")
    k = int(np.argmin(gaps))
    lo = f_q0s[max(k - 1, 0)]
    hi = f_q0s[min(k + 1, len(f_q0s) - 1)]
    res = minimize_scalar(
        splitting, bounds=(lo, hi), method="bounded", options={"xatol": 1e4}
    )
    return float(min(res.fun, gaps[k])) / 2.0
