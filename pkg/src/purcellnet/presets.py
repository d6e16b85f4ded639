"""Reference default parameter sets shared by tests and the CLI.

The defaults target a 7 GHz half-wave readout resonator with a 5 MHz
loaded linewidth (coupling capacitance solved numerically against the
measured Re[Y] width), a 70 fF qubit, and a qubit-resonator coupling set
by formula to roughly 100 MHz.  cq and cg are calibration knobs, not
measured values.
"""

import math
from functools import lru_cache

from . import calibrate
from .models import (
    MultiModeParams,
    SingleModeParams,
    TLineModelParams,
    build_single_mode,
    build_tline_model,
    half_wave_mode_capacitance,
)
from .network import TransmissionLine

TWO_PI = 2.0 * math.pi

DEFAULT_F_R_HZ = 7e9
DEFAULT_KAPPA_HZ = 5e6  # loaded linewidth (FWHM), Hz
DEFAULT_G_HZ = 100e6
DEFAULT_CQ_F = 70e-15
DEFAULT_Z0_OHM = 50.0
DEFAULT_RLOAD_OHM = 50.0
DEFAULT_VP_M_S = 1.2e8


def coupling_cap_for_g(g_hz: float, cq: float, cr: float, f_r_hz: float) -> float:
    """Coupling capacitance giving coupling strength ~g between two
    parallel-LC oscillators: cg = 2 sqrt(cq cr) g / f_r."""
    return 2.0 * math.sqrt(cq * cr) * g_hz / f_r_hz


def _approx_ck_for_kappa(kappa_hz: float, cr: float, f_r_hz: float, rload: float) -> float:
    # small-coupling estimate kappa = w^2 ck^2 R / cr, used as the solver seed
    w = TWO_PI * f_r_hz
    return math.sqrt(TWO_PI * kappa_hz * cr / (w**2 * rload))


@lru_cache(maxsize=None)
def default_single_mode(
    f_r_hz: float = DEFAULT_F_R_HZ,
    kappa_hz: float = DEFAULT_KAPPA_HZ,
    g_hz: float = DEFAULT_G_HZ,
    cq: float = DEFAULT_CQ_F,
    z0: float = DEFAULT_Z0_OHM,
    rload: float = DEFAULT_RLOAD_OHM,
) -> SingleModeParams:
    cr = half_wave_mode_capacitance(f_r_hz, z0)
    lr = 1.0 / ((TWO_PI * f_r_hz) ** 2 * cr)
    cg = coupling_cap_for_g(g_hz, cq, cr, f_r_hz)
    guess = _approx_ck_for_kappa(kappa_hz, cr, f_r_hz, rload)

    def make_net(ck):
        return build_single_mode(
            SingleModeParams(cq=cq, cg=cg, lr=lr, cr=cr, ckappa=ck, rload=rload)
        )

    ck = calibrate.solve_coupling_cap_for_kappa(make_net, guess, kappa_hz, f_r_hz)
    return SingleModeParams(cq=cq, cg=cg, lr=lr, cr=cr, ckappa=ck, rload=rload)


def default_multi_mode(n_modes: int = 3, **kwargs) -> MultiModeParams:
    return MultiModeParams(base=default_single_mode(**kwargs), n_modes=n_modes)


@lru_cache(maxsize=None)
def default_tline(
    port_frac: float = 0.0,
    f1_hz: float = DEFAULT_F_R_HZ,
    kappa_hz: float = DEFAULT_KAPPA_HZ,
    g_hz: float = DEFAULT_G_HZ,
    cq: float = DEFAULT_CQ_F,
    z0: float = DEFAULT_Z0_OHM,
    rload: float = DEFAULT_RLOAD_OHM,
    vp: float = DEFAULT_VP_M_S,
    alpha: float = 0.0,
) -> TLineModelParams:
    """Full-line model with the tap at port_frac of the length.

    The coupling capacitance is solved so the loaded fundamental keeps the
    target linewidth at this tap position; near the mode-1 voltage node
    (port_frac -> 1/2) that solve has no solution.
    """
    length = vp / (2.0 * f1_hz)
    line = TransmissionLine(z0, length, vp, alpha)
    cr_equiv = half_wave_mode_capacitance(f1_hz, z0)
    cg = coupling_cap_for_g(g_hz, cq, cr_equiv, f1_hz)
    # mode-1 voltage at the tap scales the effective coupling
    tap_voltage = abs(math.cos(math.pi * port_frac))
    if tap_voltage < 0.05:
        raise ValueError("tap sits on the mode-1 voltage node; cannot reach target kappa")
    guess = _approx_ck_for_kappa(kappa_hz, cr_equiv, f1_hz, rload) / tap_voltage

    def make_net(ck):
        return build_tline_model(
            TLineModelParams(
                cq=cq,
                cg=cg,
                line=line,
                port_position=port_frac * length,
                ckappa=ck,
                rload=rload,
            )
        )

    ck = calibrate.solve_coupling_cap_for_kappa(make_net, guess, kappa_hz, f1_hz)
    return TLineModelParams(
        cq=cq, cg=cg, line=line, port_position=port_frac * length, ckappa=ck, rload=rload
    )
