"""Builders for the three canonical readout-circuit models.

All three describe what the qubit sees from its junction terminals; the
qubit's own shunt capacitance never appears in the tree (it enters through
T1 = C_q / Re[Y]).

single mode   : qubit --Cg-- node; node --(Lr || Cr)-- gnd;
                node --Ck-- Rload -- gnd
multi mode    : the single tank is replaced by a chain of parallel-LC
                sections stacked in series from the node to ground, one
                per resonator mode
full line     : qubit --Cg-- [line x] -- tap; tap --Ck-- Rload;
                tap -- [line (l - x)] -- open
"""

import math
import warnings
from dataclasses import dataclass, field

from .network import (
    Capacitor,
    Line,
    NetworkTree,
    ParallelRLC,
    Series,
    Shunt,
    TermOpen,
    TermResistor,
    TermShort,
    TransmissionLine,
    one_port,
)

TWO_PI = 2.0 * math.pi


def half_wave_line_capacitance(line: TransmissionLine) -> float:
    """Total capacitance of a line section: l / (z0 vp)."""
    return line.length / (line.z0 * line.vp)


def half_wave_mode_capacitance(f1_hz: float, z0: float) -> float:
    """Effective mode capacitance, C_line / 2, of a half-wave open-open
    resonator with fundamental f1 seen from one end: 1 / (4 f1 z0)."""
    return 1.0 / (4.0 * f1_hz * z0)


def _check_positive(name, value):
    if not (value > 0 and math.isfinite(value)):
        raise ValueError(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class SingleModeParams:
    """Lumped single-mode readout model parameters (SI units)."""

    cq: float  # qubit shunt capacitance, F
    cg: float  # qubit-resonator coupling, F
    lr: float  # resonator inductance, H
    cr: float  # resonator capacitance, F
    ckappa: float  # resonator-load coupling, F
    rload: float = 50.0  # ohms

    def __post_init__(self):
        for name in ("cq", "cg", "lr", "cr", "ckappa", "rload"):
            _check_positive(name, getattr(self, name))
        if not 1e9 <= self.f_r <= 30e9:
            warnings.warn(
                f"resonator frequency {self.f_r / 1e9:.3g} GHz outside the "
                "validated 1-30 GHz range",
                stacklevel=2,
            )

    @property
    def omega_r(self) -> float:
        return 1.0 / math.sqrt(self.lr * self.cr)

    @property
    def f_r(self) -> float:
        return self.omega_r / TWO_PI


def build_single_mode(p: SingleModeParams) -> NetworkTree:
    """Series(Cg, Shunt(Lr||Cr to ground, Series(Ck, Rload)))."""
    tank = ParallelRLC(p.lr, p.cr)
    return Series(
        Capacitor(p.cg),
        Shunt(one_port(tank), Series(Capacitor(p.ckappa), TermResistor(p.rload))),
    )


@dataclass(frozen=True)
class MultiModeParams:
    """Mode-stack truncation of a distributed resonator.

    `mode_frequencies_hz` defaults to harmonics n*f1 of a half-wave
    resonator.  `mode_capacitances_f` defaults to the cr/n ladder, which
    keeps the n = 1 stack identical to the single-mode model and places
    the 3-mode interference null near 9.3 GHz for a 7 GHz fundamental,
    closer to the untruncated-line null than uniform weights.
    `per_mode_loss_ohm` adds an optional parallel resistor per mode.
    """

    base: SingleModeParams
    n_modes: int = 3
    mode_frequencies_hz: tuple[float, ...] | None = None
    mode_capacitances_f: tuple[float, ...] | None = None
    per_mode_loss_ohm: tuple[float | None, ...] | None = None

    def __post_init__(self):
        if self.n_modes < 1:
            raise ValueError(f"n_modes must be >= 1, got {self.n_modes}")
        for name in ("mode_frequencies_hz", "mode_capacitances_f", "per_mode_loss_ohm"):
            values = getattr(self, name)
            if values is not None and len(values) != self.n_modes:
                raise ValueError(f"{name} must have n_modes={self.n_modes} entries")
        freqs = self.frequencies
        if any(b <= a for a, b in zip(freqs, freqs[1:])):
            raise ValueError("mode frequencies must be strictly increasing")

    @property
    def frequencies(self) -> tuple[float, ...]:
        if self.mode_frequencies_hz is not None:
            return self.mode_frequencies_hz
        return tuple((n + 1) * self.base.f_r for n in range(self.n_modes))

    @property
    def capacitances(self) -> tuple[float, ...]:
        if self.mode_capacitances_f is not None:
            return self.mode_capacitances_f
        return tuple(self.base.cr / (n + 1) for n in range(self.n_modes))

    @property
    def losses(self) -> tuple[float | None, ...]:
        return self.per_mode_loss_ohm or (None,) * self.n_modes


def mode_tanks(p: MultiModeParams) -> list[ParallelRLC]:
    tanks = []
    for f_n, c_n, r_n in zip(p.frequencies, p.capacitances, p.losses):
        w_n = TWO_PI * f_n
        tanks.append(ParallelRLC(1.0 / (w_n**2 * c_n), c_n, resistance=r_n))
    return tanks


def build_multi_mode(p: MultiModeParams) -> NetworkTree:
    """Series(Cg, Shunt(tank chain to ground, Series(Ck, Rload)))."""
    stack: NetworkTree = TermShort()
    for tank in reversed(mode_tanks(p)):
        stack = Series(tank, stack)
    return Series(
        Capacitor(p.base.cg),
        Shunt(stack, Series(Capacitor(p.base.ckappa), TermResistor(p.base.rload))),
    )


def open_line_foster_tree(
    line: TransmissionLine, n_modes: int, include_static_capacitance: bool = True
) -> NetworkTree:
    """Mode-stack approximant of an open-circuited line's input impedance.

    Uniform tank capacitances C_line/2 at harmonics n*f1 reproduce the
    open-open line exactly as n_modes grows, provided the series static
    capacitor C_line (the DC term of the expansion) is included.
    """
    if n_modes < 1:
        raise ValueError(f"n_modes must be >= 1, got {n_modes}")
    if line.alpha != 0.0:
        raise ValueError("Foster stack is defined for lossless lines")
    f1 = line.vp / (2.0 * line.length)
    c_n = half_wave_line_capacitance(line) / 2.0
    stack: NetworkTree = TermShort()
    for n in range(n_modes, 0, -1):
        w_n = TWO_PI * n * f1
        stack = Series(ParallelRLC(1.0 / (w_n**2 * c_n), c_n), stack)
    if include_static_capacitance:
        stack = Series(Capacitor(half_wave_line_capacitance(line)), stack)
    return stack


@dataclass(frozen=True)
class TLineModelParams:
    """Full transmission-line readout model with a movable tap."""

    cq: float
    cg: float
    line: TransmissionLine
    port_position: float  # meters from the qubit-coupled end, in [0, length]
    ckappa: float
    rload: float = 50.0

    def __post_init__(self):
        for name in ("cq", "cg", "ckappa", "rload"):
            _check_positive(name, getattr(self, name))
        if not 0 <= self.port_position <= self.line.length:
            raise ValueError(
                f"port_position {self.port_position!r} outside [0, {self.line.length!r}]"
            )

    @property
    def f1(self) -> float:
        return self.line.vp / (2.0 * self.line.length)


def build_tline_model(p: TLineModelParams) -> NetworkTree:
    """Series(Cg, Line(x, Shunt(Series(Ck, Rload), Line(l - x, open)))).

    The load taps the line at `port_position`; the remainder is an open
    stub.  A zero-length segment is an identity section.
    """
    seg = p.line
    near = TransmissionLine(seg.z0, p.port_position, seg.vp, seg.alpha)
    far = TransmissionLine(seg.z0, seg.length - p.port_position, seg.vp, seg.alpha)
    tap = Shunt(
        Series(Capacitor(p.ckappa), TermResistor(p.rload)),
        Line(far, TermOpen()),
    )
    return Series(Capacitor(p.cg), Line(near, tap))
