"""Qubit lifetime from admittance, frequency/position sweeps, sweet spots.

Lifetime follows T1 = C_q / Re[Y(omega)] with Y the admittance seen from the
qubit.  Exact (or numerically indistinguishable) opens are reported through
the OPEN_CIRCUIT sentinel instead of an unbounded number.
"""

import dataclasses
import enum
import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import PassivityError, ResolutionError, SingularityError
from .network import ComplexImmittance, ImmittanceKind, NetworkTree, input_admittance

TWO_PI = 2.0 * math.pi

# Below this conductance the real part is double-precision cancellation
# noise in a lossless network, not physics.
REAL_FLOOR_S = 1e-20

# Lifetimes beyond this are numerically meaningless and reported as open.
LIFETIME_GUARD_S = 1e10

PASSIVITY_TOL_S = 1e-15


class _OpenCircuit:
    """Sentinel for an infinite-lifetime (open-circuit) result."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "OPEN_CIRCUIT"


OPEN_CIRCUIT = _OpenCircuit()

Lifetime = float | _OpenCircuit


def lifetime_from_admittance(y: ComplexImmittance, cq: float) -> Lifetime:
    """T1 = cq / Re[Y].  Returns OPEN_CIRCUIT when Re[Y] is at the noise floor
    or the lifetime exceeds the guard; raises PassivityError on a negative
    real part beyond tolerance (a network bug, never physics)."""
    if cq <= 0:
        raise ValueError(f"cq must be positive, got {cq!r}")
    g = y.as_admittance().value.real
    if g < -PASSIVITY_TOL_S:
        raise PassivityError(f"Re[Y] = {g!r} S is negative beyond tolerance")
    if g <= REAL_FLOOR_S:
        return OPEN_CIRCUIT
    t1 = cq / g
    if t1 > LIFETIME_GUARD_S:
        return OPEN_CIRCUIT
    return t1


@dataclass(frozen=True)
class AnalyticPurcellParams:
    """Two-oscillator decay parameters: gamma = kappa_r (g/Delta)^2."""

    g: float  # coupling strength, rad/s
    delta: float  # detuning omega_q - omega_r, rad/s
    kappa_r: float  # resonator linewidth, rad/s

    def __post_init__(self):
        if self.delta == 0:
            raise ValueError("resonance: delta must be nonzero")
        if self.g < 0 or self.kappa_r <= 0:
            raise ValueError("g must be >= 0 and kappa_r > 0")

    @property
    def dispersive_valid(self) -> bool:
        return self.g / abs(self.delta) <= 0.3


def analytic_purcell(p: AnalyticPurcellParams) -> Lifetime:
    """Lifetime 1 / (kappa_r (g/Delta)^2), or OPEN_CIRCUIT beyond the guard."""
    if p.g == 0:
        return OPEN_CIRCUIT
    gamma = p.kappa_r * (p.g / p.delta) ** 2
    t1 = 1.0 / gamma
    if t1 > LIFETIME_GUARD_S:
        return OPEN_CIRCUIT
    return t1


# --- sweeps -----------------------------------------------------------------

MARKER_NONE = ""
MARKER_OPEN = "open"
MARKER_SINGULAR = "singular"


@dataclass(frozen=True, eq=False)
class SweepResult:
    """Frequency grid with Re/Im Y and T1 samples.

    t1_s holds +inf for open-circuit markers and NaN for singular points;
    `markers` carries the per-point marker strings ("", "open", "singular").
    """

    freq_hz: np.ndarray
    y_real: np.ndarray
    y_imag: np.ndarray
    t1_s: np.ndarray
    markers: tuple[str, ...]
    cq: float
    model_tag: str = ""
    spacing: str = "linear"
    port_pos_m: float | None = None

    def __post_init__(self):
        if len(self.freq_hz) < 2 or not np.all(np.diff(self.freq_hz) > 0):
            raise ValueError("frequency axis must be strictly increasing")

    def write_csv(self, fh) -> None:
        cols = ["freq_hz"]
        if self.port_pos_m is not None:
            cols.append("port_pos_m")
        cols += ["re_y_s", "im_y_s", "t1_s", "marker"]
        fh.write(",".join(cols) + "\n")
        for i, f in enumerate(self.freq_hz):
            row = [_fmt(f)]
            if self.port_pos_m is not None:
                row.append(_fmt(self.port_pos_m))
            marker = self.markers[i]
            if marker == MARKER_SINGULAR:
                row += ["", "", "", marker]
            else:
                t1 = "inf" if marker == MARKER_OPEN else _fmt(self.t1_s[i])
                row += [_fmt(self.y_real[i]), _fmt(self.y_imag[i]), t1, marker]
            fh.write(",".join(row) + "\n")


def _fmt(x: float) -> str:
    # 17 significant digits round-trips doubles exactly
    return f"{x:.17g}"


def frequency_grid(f_start: float, f_stop: float, n_points: int, spacing: str) -> np.ndarray:
    if not (0 < f_start < f_stop):
        raise ValueError("need 0 < f_start < f_stop")
    if n_points < 2:
        raise ValueError("need at least two sweep points")
    if spacing == "linear":
        return np.linspace(f_start, f_stop, n_points)
    if spacing == "log":
        return np.geomspace(f_start, f_stop, n_points)
    raise ValueError(f"unknown spacing {spacing!r}")


def frequency_sweep(
    net: NetworkTree,
    cq: float,
    f_start: float,
    f_stop: float,
    n_points: int,
    spacing: str = "linear",
    model_tag: str = "",
    port_pos_m: float | None = None,
) -> SweepResult:
    """Evaluate Y and T1 point by point; singularities become per-point
    markers and never abort the sweep.  Output is deterministic."""
    freqs = frequency_grid(f_start, f_stop, n_points, spacing)
    y_real = np.empty(n_points)
    y_imag = np.empty(n_points)
    t1 = np.empty(n_points)
    markers = []
    for i, f in enumerate(freqs):
        try:
            y = input_admittance(net, TWO_PI * f)
        except SingularityError:
            y_real[i] = np.nan
            y_imag[i] = np.nan
            t1[i] = np.nan
            markers.append(MARKER_SINGULAR)
            continue
        y_real[i] = y.value.real
        y_imag[i] = y.value.imag
        life = lifetime_from_admittance(y, cq)
        if life is OPEN_CIRCUIT:
            t1[i] = np.inf
            markers.append(MARKER_OPEN)
        else:
            t1[i] = life
            markers.append(MARKER_NONE)
    return SweepResult(
        freq_hz=freqs,
        y_real=y_real,
        y_imag=y_imag,
        t1_s=t1,
        markers=tuple(markers),
        cq=cq,
        model_tag=model_tag,
        spacing=spacing,
        port_pos_m=port_pos_m,
    )


def port_position_sweep(
    params,
    positions_m,
    f_start: float,
    f_stop: float,
    n_points: int,
    spacing: str = "linear",
) -> list[SweepResult]:
    """One frequency sweep per readout tap position along the line."""
    from .models import build_tline_model  # local import avoids a cycle

    length = params.line.length
    results = []
    for x in positions_m:
        if not (0 <= x <= length):
            raise ValueError(f"port position {x!r} outside [0, {length!r}]")
        p = replace(params, port_position=float(x))
        net = build_tline_model(p)
        tag = f"{params_tag(p)};port_pos_m={x:.9g}"
        results.append(
            frequency_sweep(
                net, p.cq, f_start, f_stop, n_points, spacing, model_tag=tag, port_pos_m=float(x)
            )
        )
    return results


def params_tag(params) -> str:
    """Short provenance string for a params dataclass."""
    name = type(params).__name__
    fields = ",".join(
        f"{f.name}={getattr(params, f.name)!r}"
        for f in dataclasses.fields(params)
        if not dataclasses.is_dataclass(getattr(params, f.name))
    )
    return f"{name}({fields})"


# --- sweet spots ------------------------------------------------------------


class SpotKind(enum.Enum):
    BELOW_FUNDAMENTAL = "belowFundamental"
    INTER_MODE = "interMode"


@dataclass(frozen=True)
class SweetSpot:
    frequency_hz: float
    t1_peak_s: float
    kind: SpotKind
    neighborhood_width_hz: float


MIN_POINTS_PER_OCTAVE = 50
PROMINENCE_RATIO = 10.0
BASELINE_OCTAVES = 0.5


def find_sweet_spots(sweep: SweepResult, f1: float) -> list[SweetSpot]:
    """Locate T1 local maxima with >= 10x prominence over a baseline read
    from the same sweep half an octave away, classified against f1.

    Raises ResolutionError below 50 points per octave and ValueError when
    the sweep does not cover [0.2 f1, f1).
    """
    f = sweep.freq_hz
    # the required band is half-open at f1, so an endpoint just below
    # the fundamental qualifies
    if f[0] > 0.2 * f1 * (1 + 1e-9) or f[-1] < 0.95 * f1:
        raise ValueError("sweep must cover at least [0.2*f1, f1)")
    octaves = math.log2(f[-1] / f[0])
    if (len(f) - 1) / octaves < MIN_POINTS_PER_OCTAVE:
        raise ResolutionError(
            f"{(len(f) - 1) / octaves:.1f} points per octave; need {MIN_POINTS_PER_OCTAVE}"
        )

    t1 = np.minimum(np.nan_to_num(sweep.t1_s, nan=0.0, posinf=LIFETIME_GUARD_S), LIFETIME_GUARD_S)
    finite = t1 > 0
    logf = np.log(f)
    with np.errstate(divide="ignore"):
        logt = np.where(finite, np.log(np.where(finite, t1, 1.0)), -np.inf)

    def baseline_at(fc: float) -> float | None:
        if fc < f[0] or fc > f[-1]:
            return None
        x = math.log(fc)
        sel = finite & (np.abs(logf - x) < math.log(2) * 0.25)
        if not np.any(sel):
            return None
        idx = np.nonzero(sel)[0]
        j = idx[np.argmin(np.abs(logf[idx] - x))]
        return float(t1[j])

    spots = []
    i = 1
    n = len(f)
    while i < n - 1:
        # collapse plateaus of equal capped values
        j = i
        while j + 1 < n - 1 and t1[j + 1] == t1[i]:
            j += 1
        if t1[i] > t1[i - 1] and (j + 1 < n) and t1[i] > t1[j + 1]:
            peak_idx = (i + j) // 2
            fpk = float(f[peak_idx])
            peak = float(t1[peak_idx])
            lo = baseline_at(fpk * 2 ** (-BASELINE_OCTAVES))
            hi = baseline_at(fpk * 2 ** (BASELINE_OCTAVES))
            sides = [b for b in (lo, hi) if b is not None and b > 0]
            if sides:
                baseline = math.exp(sum(math.log(b) for b in sides) / len(sides))
                prom = peak / baseline
                if prom >= PROMINENCE_RATIO:
                    width = _half_prominence_width(f, t1, peak_idx, peak, prom)
                    kind = (
                        SpotKind.BELOW_FUNDAMENTAL if fpk < f1 else SpotKind.INTER_MODE
                    )
                    spots.append(SweetSpot(fpk, peak, kind, width))
        i = j + 1
    return spots


def _half_prominence_width(f, t1, peak_idx, peak, prom) -> float:
    level = peak / math.sqrt(prom)
    left = f[0]
    for k in range(peak_idx - 1, -1, -1):
        if t1[k] < level:
            left = _log_cross(f[k], t1[k], f[k + 1], t1[k + 1], level)
            break
    right = f[-1]
    for k in range(peak_idx + 1, len(f)):
        if t1[k] < level:
            right = _log_cross(f[k - 1], t1[k - 1], f[k], t1[k], level)
            break
    return float(right - left)


def _log_cross(fa, ta, fb, tb, level):
    if ta <= 0 or tb <= 0 or ta == tb:
        return 0.5 * (fa + fb)
    u = (math.log(level) - math.log(ta)) / (math.log(tb) - math.log(ta))
    return fa + u * (fb - fa)


def sweet_spots_to_records(spots: list[SweetSpot]) -> list[dict]:
    return [
        {
            "frequency_hz": s.frequency_hz,
            "t1_peak_s": s.t1_peak_s,
            "kind": s.kind.value,
            "neighborhood_width_hz": s.neighborhood_width_hz,
        }
        for s in spots
    ]


def write_sweet_spots_json(spots: list[SweetSpot], fh) -> None:
    json.dump(sweet_spots_to_records(spots), fh, indent=2, sort_keys=True)
    fh.write("\n")
