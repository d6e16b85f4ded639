"""Port-placement figure of merit from co-registered gridded E-fields.

The per-voxel metric is |E_q . E_c| / (E_c . E_c) with conjugation on the
cavity field; good port regions have a weak qubit field where the cavity
field is strong, i.e. a small metric gated on large |E_c|^2.
"""

import json
import struct
from dataclasses import dataclass, replace

import numpy as np
from scipy import ndimage

from .errors import DegenerateFieldError, GridError

# below this fraction of the grid-max |E_c|^2 the metric is undefined
EPSILON_FIELD_FRACTION = 1e-6

DEFAULT_METRIC_QUANTILE = 0.05
DEFAULT_CAVITY_QUANTILE = 0.5


@dataclass(frozen=True, eq=False)
class FieldGrid:
    """Vector fields for the qubit and cavity modes on a rectilinear lattice.

    e_qubit and e_cavity have shape (nx, ny, nz, 3) complex; mask marks
    voxels inside the vacuum region (statistics ignore the rest).
    origin is the coordinate of voxel (0, 0, 0); lattice points sit at
    origin + index * spacing.
    """

    e_qubit: np.ndarray
    e_cavity: np.ndarray
    mask: np.ndarray
    spacing: tuple[float, float, float]
    origin: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        eq = np.asarray(self.e_qubit)
        ec = np.asarray(self.e_cavity)
        mask = np.asarray(self.mask)
        if eq.ndim != 4 or eq.shape[3] != 3:
            raise GridError(f"e_qubit must have shape (nx, ny, nz, 3), got {eq.shape}")
        if ec.shape != eq.shape:
            raise GridError(f"field shapes differ: {eq.shape} vs {ec.shape}")
        if mask.shape != eq.shape[:3]:
            raise GridError(f"mask shape {mask.shape} does not match grid {eq.shape[:3]}")
        if not mask.any():
            raise GridError("mask excludes every voxel")
        if any(s <= 0 for s in self.spacing):
            raise GridError(f"spacing must be positive, got {self.spacing}")

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.e_qubit.shape[:3]

    @property
    def voxel_volume_m3(self) -> float:
        sx, sy, sz = self.spacing
        return sx * sy * sz

    def coordinates(self, indices: np.ndarray) -> np.ndarray:
        """Lattice coordinates (meters) of an (n, 3) index array."""
        return np.asarray(self.origin) + np.asarray(indices) * np.asarray(self.spacing)


@dataclass(frozen=True)
class Region:
    """A connected candidate port region."""

    score: float  # worst (max) metric inside the region
    centroid_m: tuple[float, float, float]
    volume_m3: float
    voxel_count: int
    mean_cavity_power: float


@dataclass(frozen=True, eq=False)
class OverlapMap:
    metric: np.ndarray  # nan where undefined
    defined: np.ndarray  # bool
    cavity_power: np.ndarray  # |E_c|^2
    grid: FieldGrid
    candidate_regions: tuple[Region, ...] | None = None


def overlap_metric(grid: FieldGrid) -> OverlapMap:
    """Per-voxel |E_q . conj(E_c)| / (E_c . conj(E_c)); voxels where the
    cavity power is below the epsilon floor are flagged undefined."""
    dot = np.einsum("...k,...k->...", grid.e_qubit, np.conj(grid.e_cavity))
    power = np.einsum("...k,...k->...", grid.e_cavity, np.conj(grid.e_cavity)).real
    floor = EPSILON_FIELD_FRACTION * float(power[grid.mask].max(initial=0.0))
    defined = grid.mask & (power > floor)
    if not defined.any():
        raise DegenerateFieldError("cavity field is below the epsilon floor everywhere")
    metric = np.full(grid.dims, np.nan)
    metric[defined] = np.abs(dot[defined]) / power[defined]
    return OverlapMap(metric=metric, defined=defined, cavity_power=power, grid=grid)


_SIX_CONNECTED = ndimage.generate_binary_structure(3, 1)


def rank_port_regions(
    m: OverlapMap,
    min_volume_m3: float,
    metric_quantile: float = DEFAULT_METRIC_QUANTILE,
    cavity_quantile: float = DEFAULT_CAVITY_QUANTILE,
    mode: str = "min",
) -> OverlapMap:
    """Select, group, and rank candidate port regions.

    Voxels pass when their metric is at or below the `metric_quantile` of
    defined voxels (at or above 1 - metric_quantile in "max" mode) and
    their cavity power is at or above the `cavity_quantile`.  Passing
    voxels are grouped 6-connected; regions smaller than min_volume_m3
    are dropped; remaining regions are ranked best first by worst metric
    inside the region, ties broken by larger mean cavity power.
    """
    if mode not in ("min", "max"):
        raise ValueError(f"mode must be 'min' or 'max', got {mode!r}")
    vals = m.metric[m.defined]
    powers = m.cavity_power[m.defined]
    if mode == "min":
        metric_thr = np.quantile(vals, metric_quantile)
        passes = m.metric <= metric_thr
    else:
        metric_thr = np.quantile(vals, 1.0 - metric_quantile)
        passes = m.metric >= metric_thr
    cavity_thr = np.quantile(powers, cavity_quantile)
    sel = m.defined & passes & (m.cavity_power >= cavity_thr)

    labels, n_labels = ndimage.label(sel, structure=_SIX_CONNECTED)
    voxel_vol = m.grid.voxel_volume_m3
    regions = []
    for lbl in range(1, n_labels + 1):
        idx = np.argwhere(labels == lbl)
        volume = len(idx) * voxel_vol
        if volume < min_volume_m3:
            continue
        sub = m.metric[tuple(idx.T)]
        score = float(sub.max() if mode == "min" else sub.min())
        centroid = tuple(float(c) for c in m.grid.coordinates(idx).mean(axis=0))
        regions.append(
            Region(
                score=score,
                centroid_m=centroid,
                volume_m3=float(volume),
                voxel_count=len(idx),
                mean_cavity_power=float(m.cavity_power[tuple(idx.T)].mean()),
            )
        )
    reverse = mode == "max"
    regions.sort(
        key=lambda r: (-r.score if reverse else r.score, -r.mean_cavity_power)
    )
    return replace(m, candidate_regions=tuple(regions))


def regions_to_records(m: OverlapMap) -> list[dict]:
    if m.candidate_regions is None:
        return []
    return [
        {
            "rank": i + 1,
            "score": r.score,
            "centroid_m": list(r.centroid_m),
            "volume_m3": r.volume_m3,
            "voxel_count": r.voxel_count,
            "mean_cavity_power": r.mean_cavity_power,
        }
        for i, r in enumerate(m.candidate_regions)
    ]


def write_region_report(m: OverlapMap, fh) -> None:
    records = regions_to_records(m)
    doc = {"regions": records}
    if not records:
        doc["diagnostic"] = "no region satisfies the volume threshold"
    json.dump(doc, fh, indent=2, sort_keys=True)
    fh.write("\n")


# --- CSV ingestion ------------------------------------------------------------

CSV_HEADER = (
    "x_m,y_m,z_m,"
    "eqx_re,eqx_im,eqy_re,eqy_im,eqz_re,eqz_im,"
    "ecx_re,ecx_im,ecy_re,ecy_im,ecz_re,ecz_im,mask"
)


def _axis_from_values(values: np.ndarray, name: str) -> np.ndarray:
    axis = np.unique(values)
    if len(axis) > 1:
        steps = np.diff(axis)
        if not np.allclose(steps, steps[0], rtol=1e-6, atol=abs(steps[0]) * 1e-6):
            raise GridError(f"{name} coordinates are not uniformly spaced")
    return axis


def read_grid_csv(path) -> FieldGrid:
    """Read a grid from CSV with the documented 16-column header.

    The rows must fill a complete rectilinear lattice; errors carry the
    offending row number.
    """
    with open(path) as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise GridError(f"row 1: expected header {CSV_HEADER!r}")
        rows = []
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 16:
                raise GridError(f"row {lineno}: expected 16 columns, got {len(parts)}")
            try:
                rows.append([float(v) for v in parts])
            except ValueError as exc:
                raise GridError(f"row {lineno}: {exc}") from exc
    if not rows:
        raise GridError("row 2: no data rows")
    data = np.asarray(rows)
    xs = _axis_from_values(data[:, 0], "x")
    ys = _axis_from_values(data[:, 1], "y")
    zs = _axis_from_values(data[:, 2], "z")
    nx, ny, nz = len(xs), len(ys), len(zs)
    if len(data) != nx * ny * nz:
        raise GridError(
            f"grid is incomplete: {len(data)} rows for a {nx}x{ny}x{nz} lattice"
        )
    ix = np.searchsorted(xs, data[:, 0])
    iy = np.searchsorted(ys, data[:, 1])
    iz = np.searchsorted(zs, data[:, 2])
    seen = np.zeros((nx, ny, nz), dtype=bool)
    seen[ix, iy, iz] = True
    if not seen.all():
        raise GridError("grid is incomplete: duplicate or missing lattice points")
    eq = np.zeros((nx, ny, nz, 3), dtype=complex)
    ec = np.zeros((nx, ny, nz, 3), dtype=complex)
    mask = np.zeros((nx, ny, nz), dtype=bool)
    for k in range(3):
        eq[ix, iy, iz, k] = data[:, 3 + 2 * k] + 1j * data[:, 4 + 2 * k]
        ec[ix, iy, iz, k] = data[:, 9 + 2 * k] + 1j * data[:, 10 + 2 * k]
    mask[ix, iy, iz] = data[:, 15] != 0.0
    spacing = tuple(
        float(ax[1] - ax[0]) if len(ax) > 1 else 1.0 for ax in (xs, ys, zs)
    )
    return FieldGrid(
        e_qubit=eq,
        e_cavity=ec,
        mask=mask,
        spacing=spacing,
        origin=(float(xs[0]), float(ys[0]), float(zs[0])),
    )


def write_grid_csv(grid: FieldGrid, fh) -> None:
    fh.write(CSV_HEADER + "\n")
    nx, ny, nz = grid.dims
    ox, oy, oz = grid.origin
    sx, sy, sz = grid.spacing
    for i in range(nx):
        for j in range(ny):
            for k in range(nz):
                eq = grid.e_qubit[i, j, k]
                ec = grid.e_cavity[i, j, k]
                vals = [ox + i * sx, oy + j * sy, oz + k * sz]
                for v in eq:
                    vals += [v.real, v.imag]
                for v in ec:
                    vals += [v.real, v.imag]
                vals.append(1.0 if grid.mask[i, j, k] else 0.0)
                fh.write(",".join(f"{v:.17g}" for v in vals) + "\n")


def write_metric_csv(m: OverlapMap, fh) -> None:
    """Per-voxel metric as x_m,y_m,z_m,metric,defined rows."""
    fh.write("x_m,y_m,z_m,metric,defined\n")
    grid = m.grid
    nx, ny, nz = grid.dims
    ox, oy, oz = grid.origin
    sx, sy, sz = grid.spacing
    for i in range(nx):
        for j in range(ny):
            for k in range(nz):
                defined = bool(m.defined[i, j, k])
                metric = f"{m.metric[i, j, k]:.17g}" if defined else ""
                fh.write(
                    f"{ox + i * sx:.17g},{oy + j * sy:.17g},{oz + k * sz:.17g},"
                    f"{metric},{1 if defined else 0}\n"
                )


# --- binary format --------------------------------------------------------------
#
# 64-byte header, little endian:
#   bytes  0-7   magic b"PFGRID01"
#   bytes  8-11  uint32 version (1)
#   bytes 12-23  uint32 nx, ny, nz
#   bytes 24-63  zero padding
# payload, little endian, C order:
#   float64 sx, sy, sz, ox, oy, oz
#   complex128 e_qubit  (nx, ny, nz, 3)
#   complex128 e_cavity (nx, ny, nz, 3)
#   uint8 mask (nx, ny, nz), nonzero = inside vacuum

BINARY_MAGIC = b"PFGRID01"
_HEADER = struct.Struct("<8sIIII40x")


def write_grid_binary(grid: FieldGrid, path) -> None:
    nx, ny, nz = grid.dims
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(BINARY_MAGIC, 1, nx, ny, nz))
        np.asarray(list(grid.spacing) + list(grid.origin), dtype="<f8").tofile(fh)
        np.ascontiguousarray(grid.e_qubit, dtype="<c16").tofile(fh)
        np.ascontiguousarray(grid.e_cavity, dtype="<c16").tofile(fh)
        np.ascontiguousarray(grid.mask, dtype="u1").tofile(fh)


def read_grid_binary(path) -> FieldGrid:
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
        if len(raw) < _HEADER.size:
            raise GridError("file shorter than the 64-byte header")
        magic, version, nx, ny, nz = _HEADER.unpack(raw)
        if magic != BINARY_MAGIC:
            raise GridError(f"bad magic {magic!r}; expected {BINARY_MAGIC!r}")
        if version != 1:
            raise GridError(f"unsupported version {version}")
        geom = np.fromfile(fh, dtype="<f8", count=6)
        if len(geom) != 6:
            raise GridError("truncated geometry block")
        n = nx * ny * nz
        eq = np.fromfile(fh, dtype="<c16", count=3 * n)
        ec = np.fromfile(fh, dtype="<c16", count=3 * n)
        mask = np.fromfile(fh, dtype="u1", count=n)
        if len(eq) != 3 * n or len(ec) != 3 * n or len(mask) != n:
            raise GridError("truncated field payload")
    return FieldGrid(
        e_qubit=eq.reshape(nx, ny, nz, 3),
        e_cavity=ec.reshape(nx, ny, nz, 3),
        mask=mask.reshape(nx, ny, nz).astype(bool),
        spacing=tuple(float(v) for v in geom[:3]),
        origin=tuple(float(v) for v in geom[3:]),
    )


def read_grid(path) -> FieldGrid:
    """Dispatch on content: binary when the magic matches, else CSV."""
    with open(path, "rb") as fh:
        magic = fh.read(len(BINARY_MAGIC))
    if magic == BINARY_MAGIC:
        return read_grid_binary(path)
    return read_grid_csv(path)
