"""Batch command-line front end.

Subcommands: simulate, sweep-port, loss-budget, field-overlap.  Inputs are
unit-tagged JSON documents (GHz, fF, mm, ohms at the interface; SI inside);
outputs are CSV data files plus JSON sidecars, all listed in a run manifest.

Exit codes: 0 success, 2 usage, 3 input validation, 4 numeric/singularity,
5 inconsistent measurement.
"""

import argparse
import datetime
import hashlib
import json
import math
import sys
import warnings
from pathlib import Path

from . import __version__
from .analysis import (
    SweepResult,
    find_sweet_spots,
    frequency_sweep,
    port_position_sweep,
    sweet_spots_to_records,
    write_sweet_spots_json,
)
from .errors import (
    DegenerateFieldError,
    GridError,
    InconsistentMeasurementError,
    NetlistError,
    NumericOverflowError,
    PurcellNetError,
    ResolutionError,
    SingularityError,
)
from .fieldoverlap import (
    overlap_metric,
    rank_port_regions,
    read_grid,
    write_metric_csv,
    write_region_report,
)
from .lossbudget import ConfigId, extract_budget, load_measurement
from .models import (
    MultiModeParams,
    SingleModeParams,
    TLineModelParams,
    build_multi_mode,
    build_single_mode,
    build_tline_model,
    half_wave_mode_capacitance,
)
from .network import (
    Capacitor,
    Inductor,
    Line,
    ParallelRLC,
    Resistor,
    Series,
    Shunt,
    TermOpen,
    TermResistor,
    TermShort,
    TransmissionLine,
)
from .presets import coupling_cap_for_g

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_NUMERIC = 4
EXIT_INCONSISTENT = 5

TWO_PI = 2.0 * math.pi

GHZ = 1e9
MHZ = 1e6
FF = 1e-15
NH = 1e-9
MM = 1e-3


# --- netlist parsing ----------------------------------------------------------

_SWEEP_KEYS = {"f_start_ghz", "f_stop_ghz", "n_points", "spacing"}
_TOP_KEYS = {"model", "parameters", "sweep", "positions_frac"}

_MODEL_KEYS = {
    "singleMode": {
        "f_r_ghz",
        "z0_ohm",
        "lr_nh",
        "cr_ff",
        "cq_ff",
        "cg_ff",
        "g_mhz",
        "ckappa_ff",
        "kappa_mhz",
        "rload_ohm",
    },
    "multiMode": {
        "f_r_ghz",
        "z0_ohm",
        "lr_nh",
        "cr_ff",
        "cq_ff",
        "cg_ff",
        "g_mhz",
        "ckappa_ff",
        "kappa_mhz",
        "rload_ohm",
        "n_modes",
        "mode_frequencies_ghz",
        "mode_capacitances_ff",
        "per_mode_loss_ohm",
    },
    "tline": {
        "cq_ff",
        "cg_ff",
        "g_mhz",
        "ckappa_ff",
        "kappa_mhz",
        "z0_ohm",
        "length_mm",
        "vp_m_per_s",
        "f1_ghz",
        "rload_ohm",
        "alpha_np_per_m",
    },
    "customTree": {"tree", "cq_ff", "f1_ghz"},
}


def _reject_unknown(d: dict, allowed: set, where: str) -> None:
    unknown = set(d) - allowed
    if unknown:
        raise NetlistError(f"{where}: unknown keys {sorted(unknown)}")


def _need(d: dict, key: str, where: str):
    if key not in d:
        raise NetlistError(f"{where}: missing required key {key!r}")
    return d[key]


def _resonator_lc(params: dict, where: str) -> tuple[float, float]:
    if "lr_nh" in params or "cr_ff" in params:
        if not ("lr_nh" in params and "cr_ff" in params):
            raise NetlistError(f"{where}: lr_nh and cr_ff must be given together")
        return float(params["lr_nh"]) * NH, float(params["cr_ff"]) * FF
    f_r = float(_need(params, "f_r_ghz", where)) * GHZ
    z0 = float(params.get("z0_ohm", 50.0))
    cr = half_wave_mode_capacitance(f_r, z0)
    return 1.0 / ((TWO_PI * f_r) ** 2 * cr), cr


def _coupling_caps(params: dict, cq: float, lr: float, cr: float, where: str):
    f_r = 1.0 / (TWO_PI * math.sqrt(lr * cr))
    if "cg_ff" in params:
        cg = float(params["cg_ff"]) * FF
    elif "g_mhz" in params:
        cg = coupling_cap_for_g(float(params["g_mhz"]) * MHZ, cq, cr, f_r)
    else:
        raise NetlistError(f"{where}: give cg_ff or g_mhz")
    return cg


def _single_mode_from(params: dict, where: str) -> SingleModeParams:
    lr, cr = _resonator_lc(params, where)
    cq = float(_need(params, "cq_ff", where)) * FF
    cg = _coupling_caps(params, cq, lr, cr, where)
    rload = float(params.get("rload_ohm", 50.0))
    if "ckappa_ff" in params:
        ck = float(params["ckappa_ff"]) * FF
    elif "kappa_mhz" in params:
        from . import calibrate  # deferred: only needed when solving

        target = float(params["kappa_mhz"]) * MHZ
        f_r = 1.0 / (TWO_PI * math.sqrt(lr * cr))
        guess = math.sqrt(TWO_PI * target * cr / ((TWO_PI * f_r) ** 2 * rload))

        def make_net(ck_trial):
            return build_single_mode(
                SingleModeParams(cq=cq, cg=cg, lr=lr, cr=cr, ckappa=ck_trial, rload=rload)
            )

        ck = calibrate.solve_coupling_cap_for_kappa(make_net, guess, target, f_r)
    else:
        raise NetlistError(f"{where}: give ckappa_ff or kappa_mhz")
    return SingleModeParams(cq=cq, cg=cg, lr=lr, cr=cr, ckappa=ck, rload=rload)


def _tline_from(params: dict, port_position_m: float, where: str) -> TLineModelParams:
    z0 = float(params.get("z0_ohm", 50.0))
    alpha = float(params.get("alpha_np_per_m", 0.0))
    if "length_mm" in params and "vp_m_per_s" in params:
        length = float(params["length_mm"]) * MM
        vp = float(params["vp_m_per_s"])
    elif "length_mm" in params and "f1_ghz" in params:
        length = float(params["length_mm"]) * MM
        vp = 2.0 * length * float(params["f1_ghz"]) * GHZ
    elif "f1_ghz" in params and "vp_m_per_s" in params:
        vp = float(params["vp_m_per_s"])
        length = vp / (2.0 * float(params["f1_ghz"]) * GHZ)
    else:
        raise NetlistError(f"{where}: give two of length_mm, vp_m_per_s, f1_ghz")
    line = TransmissionLine(z0, length, vp, alpha)
    f1 = vp / (2.0 * length)
    cq = float(_need(params, "cq_ff", where)) * FF
    cr_equiv = half_wave_mode_capacitance(f1, z0)
    if "cg_ff" in params:
        cg = float(params["cg_ff"]) * FF
    elif "g_mhz" in params:
        cg = coupling_cap_for_g(float(params["g_mhz"]) * MHZ, cq, cr_equiv, f1)
    else:
        raise NetlistError(f"{where}: give cg_ff or g_mhz")
    rload = float(params.get("rload_ohm", 50.0))
    if "ckappa_ff" in params:
        ck = float(params["ckappa_ff"]) * FF
    elif "kappa_mhz" in params:
        from . import calibrate

        target = float(params["kappa_mhz"]) * MHZ
        guess = math.sqrt(TWO_PI * target * cr_equiv / ((TWO_PI * f1) ** 2 * rload))

        def make_net(ck_trial):
            return build_tline_model(
                TLineModelParams(
                    cq=cq,
                    cg=cg,
                    line=line,
                    port_position=port_position_m,
                    ckappa=ck_trial,
                    rload=rload,
                )
            )

        ck = calibrate.solve_coupling_cap_for_kappa(make_net, guess, target, f1)
    else:
        raise NetlistError(f"{where}: give ckappa_ff or kappa_mhz")
    return TLineModelParams(
        cq=cq, cg=cg, line=line, port_position=port_position_m, ckappa=ck, rload=rload
    )


_ELEMENT_KEYS = {
    "resistor": {"type", "r_ohm"},
    "capacitor": {"type", "c_ff"},
    "inductor": {"type", "l_nh"},
    "parallel_rlc": {"type", "r_ohm", "l_nh", "c_ff"},
    "tline": {"type", "z0_ohm", "length_mm", "vp_m_per_s", "alpha_np_per_m"},
}


def _element_from(d: dict, where: str):
    kind = _need(d, "type", where)
    if kind not in _ELEMENT_KEYS:
        raise NetlistError(f"{where}: unknown element type {kind!r}")
    _reject_unknown(d, _ELEMENT_KEYS[kind], where)
    try:
        if kind == "resistor":
            return Resistor(float(_need(d, "r_ohm", where)))
        if kind == "capacitor":
            return Capacitor(float(_need(d, "c_ff", where)) * FF)
        if kind == "inductor":
            return Inductor(float(_need(d, "l_nh", where)) * NH)
        if kind == "parallel_rlc":
            r = d.get("r_ohm")
            return ParallelRLC(
                float(_need(d, "l_nh", where)) * NH,
                float(_need(d, "c_ff", where)) * FF,
                resistance=None if r is None else float(r),
            )
        return TransmissionLine(
            float(_need(d, "z0_ohm", where)),
            float(_need(d, "length_mm", where)) * MM,
            float(_need(d, "vp_m_per_s", where)),
            float(d.get("alpha_np_per_m", 0.0)),
        )
    except (ValueError, PurcellNetError) as exc:
        raise NetlistError(f"{where}: {exc}") from exc


_NODE_KEYS = {
    "term_open": {"node"},
    "term_short": {"node"},
    "term_resistor": {"node", "r_ohm"},
    "series": {"node", "element", "rest"},
    "shunt": {"node", "branch", "rest"},
    "line": {"node", "element", "rest"},
}


def _tree_from(d: dict, where: str):
    if not isinstance(d, dict):
        raise NetlistError(f"{where}: tree node must be an object")
    kind = _need(d, "node", where)
    if kind not in _NODE_KEYS:
        raise NetlistError(f"{where}: unknown node kind {kind!r}")
    _reject_unknown(d, _NODE_KEYS[kind], where)
    try:
        if kind == "term_open":
            return TermOpen()
        if kind == "term_short":
            return TermShort()
        if kind == "term_resistor":
            return TermResistor(float(_need(d, "r_ohm", where)))
        if kind == "series":
            return Series(
                _element_from(_need(d, "element", where), where + ".element"),
                _tree_from(_need(d, "rest", where), where + ".rest"),
            )
        if kind == "shunt":
            return Shunt(
                _tree_from(_need(d, "branch", where), where + ".branch"),
                _tree_from(_need(d, "rest", where), where + ".rest"),
            )
        return Line(
            _element_from(_need(d, "element", where), where + ".element"),
            _tree_from(_need(d, "rest", where), where + ".rest"),
        )
    except PurcellNetError:
        raise
    except (TypeError, ValueError) as exc:
        raise NetlistError(f"{where}: {exc}") from exc


def load_netlist(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise NetlistError(f"{path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetlistError(
            f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise NetlistError(f"{path}: netlist must be a JSON object")
    _reject_unknown(doc, _TOP_KEYS, path)
    model = _need(doc, "model", str(path))
    if model not in _MODEL_KEYS:
        raise NetlistError(f"{path}: unknown model {model!r}")
    params = doc.get("parameters", {})
    if not isinstance(params, dict):
        raise NetlistError(f"{path}: parameters must be an object")
    _reject_unknown(params, _MODEL_KEYS[model], f"{path}:parameters")
    sweep = _need(doc, "sweep", str(path))
    _reject_unknown(sweep, _SWEEP_KEYS, f"{path}:sweep")
    for key in ("f_start_ghz", "f_stop_ghz"):
        _need(sweep, key, f"{path}:sweep")
    return doc


def _sweep_args(doc: dict, points_override: int | None):
    sweep = doc["sweep"]
    f_start = float(sweep["f_start_ghz"]) * GHZ
    f_stop = float(sweep["f_stop_ghz"]) * GHZ
    spacing = sweep.get("spacing", "linear")
    if spacing not in ("linear", "log"):
        raise NetlistError(f"sweep: unknown spacing {spacing!r}")
    n = points_override or sweep.get("n_points")
    if n is None:
        # default density: 2001 points per decade
        decades = math.log10(f_stop / f_start)
        n = max(2, int(round(2001 * max(decades, 0.1))))
    return f_start, f_stop, int(n), spacing


def _build_model(doc: dict, path):
    """Netlist -> (tree or None, params-or-None, cq, f1-or-None)."""
    model = doc["model"]
    params = doc.get("parameters", {})
    where = f"{path}:parameters"
    if model == "singleMode":
        p = _single_mode_from(params, where)
        return build_single_mode(p), p, p.cq, p.f_r
    if model == "multiMode":
        base = _single_mode_from(params, where)
        n_modes = int(params.get("n_modes", 3))
        freqs = params.get("mode_frequencies_ghz")
        caps = params.get("mode_capacitances_ff")
        losses = params.get("per_mode_loss_ohm")
        p = MultiModeParams(
            base=base,
            n_modes=n_modes,
            mode_frequencies_hz=tuple(f * GHZ for f in freqs) if freqs else None,
            mode_capacitances_f=tuple(c * FF for c in caps) if caps else None,
            per_mode_loss_ohm=tuple(
                None if r is None else float(r) for r in losses
            )
            if losses
            else None,
        )
        return build_multi_mode(p), p, base.cq, base.f_r
    if model == "tline":
        fracs = doc.get("positions_frac")
        if not fracs:
            raise NetlistError(f"{path}: tline model needs positions_frac")
        return None, params, float(_need(params, "cq_ff", where)) * FF, None
    # customTree
    tree = _tree_from(_need(params, "tree", where), f"{where}.tree")
    cq = float(_need(params, "cq_ff", where)) * FF
    f1 = params.get("f1_ghz")
    return tree, None, cq, None if f1 is None else float(f1) * GHZ


# --- manifest -------------------------------------------------------------------


def _sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def write_manifest(out_dir: Path, inputs: dict, files: list[Path], seed) -> Path:
    digest = _sha256_bytes(
        json.dumps(inputs, sort_keys=True, separators=(",", ":")).encode()
    )
    entries = [
        {"path": f.name, "sha256": _sha256_bytes(f.read_bytes())} for f in sorted(files)
    ]
    content_digest = _sha256_bytes(
        json.dumps([digest, entries], sort_keys=True, separators=(",", ":")).encode()
    )
    manifest = {
        "tool_version": __version__,
        "inputs_digest": digest,
        "content_digest": content_digest,
        "seed": seed,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "files": entries,
    }
    path = out_dir / "run_manifest.json"
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _write_sweep_outputs(out_dir: Path, stem: str, sweep: SweepResult, fmt: str) -> Path:
    if fmt == "json":
        path = out_dir / f"{stem}.json"
        records = {
            "freq_hz": list(sweep.freq_hz),
            "re_y_s": list(sweep.y_real),
            "im_y_s": list(sweep.y_imag),
            "t1_s": [None if m else t for t, m in zip(sweep.t1_s, sweep.markers)],
            "marker": list(sweep.markers),
            "model_tag": sweep.model_tag,
        }
        if sweep.port_pos_m is not None:
            records["port_pos_m"] = sweep.port_pos_m
        with open(path, "w") as fh:
            json.dump(records, fh, sort_keys=True)
            fh.write("\n")
    else:
        path = out_dir / f"{stem}.csv"
        with open(path, "w") as fh:
            sweep.write_csv(fh)
    return path


# --- commands --------------------------------------------------------------------


def cmd_simulate(args) -> int:
    doc = load_netlist(args.netlist)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    f_start, f_stop, n_points, spacing = _sweep_args(doc, args.points)
    model = doc["model"]
    if model == "tline":
        fracs = doc.get("positions_frac")
        if not fracs or len(fracs) != 1:
            raise NetlistError(
                "simulate runs one tline position; use sweep-port for families"
            )
        params = doc.get("parameters", {})
        p = _tline_from(params, 0.0, f"{args.netlist}:parameters")
        p = _tline_from(params, float(fracs[0]) * p.line.length, f"{args.netlist}:parameters")
        tree, cq, f1 = build_tline_model(p), p.cq, p.f1
    else:
        tree, _, cq, f1 = _build_model(doc, args.netlist)
    sweep = frequency_sweep(tree, cq, f_start, f_stop, n_points, spacing, model_tag=model)
    files = [_write_sweep_outputs(out_dir, "sweep", sweep, args.format)]
    spots_path = out_dir / "sweet_spots.json"
    if f1 is not None:
        try:
            spots = find_sweet_spots(sweep, f1)
        except (ValueError, ResolutionError) as exc:
            spots = None
            with open(spots_path, "w") as fh:
                json.dump({"spots": [], "note": str(exc)}, fh, indent=2, sort_keys=True)
                fh.write("\n")
        if spots is not None:
            with open(spots_path, "w") as fh:
                write_sweet_spots_json(spots, fh)
    else:
        with open(spots_path, "w") as fh:
            json.dump(
                {"spots": [], "note": "no fundamental known for this model"},
                fh,
                indent=2,
                sort_keys=True,
            )
            fh.write("\n")
    files.append(spots_path)
    write_manifest(out_dir, {"netlist": doc, "points": args.points, "format": args.format}, files, args.seed)
    print(f"wrote {len(files)} files to {out_dir}")
    return EXIT_OK


def cmd_sweep_port(args) -> int:
    doc = load_netlist(args.netlist)
    if doc["model"] != "tline":
        raise NetlistError("sweep-port requires model = tline")
    fracs = doc.get("positions_frac")
    if not fracs:
        raise NetlistError("sweep-port requires a nonempty positions_frac list")
    deduped = []
    for u in fracs:
        if u in deduped:
            warnings.warn(f"duplicate position {u} dropped")
        else:
            deduped.append(u)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    f_start, f_stop, n_points, spacing = _sweep_args(doc, args.points)
    params = doc.get("parameters", {})
    p0 = _tline_from(params, 0.0, f"{args.netlist}:parameters")
    length = p0.line.length
    positions = [float(u) * length for u in deduped]
    sweeps = port_position_sweep(p0, positions, f_start, f_stop, n_points, spacing)
    files = []
    summary = []
    combined = out_dir / "sweep_positions.csv"
    with open(combined, "w") as comb:
        comb.write("freq_hz,port_pos_m,re_y_s,im_y_s,t1_s,marker\n")
        for u, x, sweep in zip(deduped, positions, sweeps):
            stem = f"sweep_pos_{u:.6f}"
            files.append(_write_sweep_outputs(out_dir, stem, sweep, args.format))
            for i, f in enumerate(sweep.freq_hz):
                marker = sweep.markers[i]
                if marker == "singular":
                    row = [f"{f:.17g}", f"{x:.17g}", "", "", "", marker]
                else:
                    t1 = "inf" if marker == "open" else f"{sweep.t1_s[i]:.17g}"
                    row = [
                        f"{f:.17g}",
                        f"{x:.17g}",
                        f"{sweep.y_real[i]:.17g}",
                        f"{sweep.y_imag[i]:.17g}",
                        t1,
                        marker,
                    ]
                comb.write(",".join(row) + "\n")
            f1 = p0.f1
            try:
                spots = find_sweet_spots(sweep, f1)
            except (ValueError, ResolutionError):
                spots = []
            below = [s for s in spots if s.frequency_hz < f1]
            summary.append(
                {
                    "position_frac": u,
                    "position_m": x,
                    "spot_frequency_hz": below[0].frequency_hz if below else None,
                    "anti_wispe": not below,
                    "spots": sweet_spots_to_records(spots),
                }
            )
    files.append(combined)
    summary_path = out_dir / "position_summary.json"
    with open(summary_path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    files.append(summary_path)
    write_manifest(out_dir, {"netlist": doc, "points": args.points, "format": args.format}, files, args.seed)
    print(f"wrote {len(files)} files to {out_dir}")
    return EXIT_OK


def cmd_loss_budget(args) -> int:
    docs = [load_measurement(p) for p in args.measurements]
    by_id = {}
    for doc, path in zip(docs, args.measurements):
        if doc.config_id in by_id:
            print(f"error: duplicate {doc.config_id.value} document {path}", file=sys.stderr)
            return EXIT_USAGE
        by_id[doc.config_id] = doc
    missing = {c for c in ConfigId} - set(by_id)
    if missing:
        names = ", ".join(sorted(c.value for c in missing))
        print(
            f"usage: loss-budget needs exactly one wispe and one antiWispe document; missing {names}",
            file=sys.stderr,
        )
        return EXIT_USAGE
    budget = extract_budget(by_id[ConfigId.ANTI_WISPE], by_id[ConfigId.WISPE])
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "loss_budget.json"
    with open(path, "w") as fh:
        json.dump(budget.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    rows = [
        ("internal", budget.gamma_int),
        ("qubit drive port", budget.gamma_d),
        ("readout (wispe)", budget.gamma_r_wispe),
        ("readout (antiWispe)", budget.gamma_r_anti_wispe),
    ]
    print(f"{'loss channel':<22}{'rate (1/s)':>14}{'lifetime':>14}")
    for name, rate in rows:
        life = f"{1.0 / rate:.3e} s" if rate > 0 else "inf"
        print(f"{name:<22}{rate:>14.4e}{life:>14}")
    print(f"{'purcell limit (wispe)':<22}{'':>14}{budget.purcell_limit_wispe_s:>12.3e} s")
    write_manifest(
        out_dir,
        {"measurements": [str(Path(p).name) for p in args.measurements]},
        [path],
        args.seed,
    )
    return EXIT_OK


def cmd_field_overlap(args) -> int:
    grid = read_grid(args.grid)
    m = overlap_metric(grid)
    m = rank_port_regions(
        m,
        min_volume_m3=args.min_volume_mm3 * 1e-9,
        mode=args.ranking,
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    metric_path = out_dir / "overlap_metric.csv"
    with open(metric_path, "w") as fh:
        write_metric_csv(m, fh)
    region_path = out_dir / "port_regions.json"
    with open(region_path, "w") as fh:
        write_region_report(m, fh)
    write_manifest(
        out_dir,
        {
            "grid_sha256": _sha256_bytes(Path(args.grid).read_bytes()),
            "ranking": args.ranking,
            "min_volume_mm3": args.min_volume_mm3,
        },
        [metric_path, region_path],
        args.seed,
    )
    n = len(m.candidate_regions or ())
    print(f"{n} candidate region(s); wrote {metric_path.name}, {region_path.name}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="purcellnet",
        description="Readout-network lifetime sweeps, loss budgets, and port placement",
    )
    parser.add_argument("--out-dir", default=".", help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="seed recorded in the manifest")
    parser.add_argument("--points", type=int, default=None, help="override sweep point count")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="frequency sweep of one model netlist")
    p.add_argument("netlist")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep-port", help="tline sweeps over a family of tap positions")
    p.add_argument("netlist")
    p.set_defaults(func=cmd_sweep_port)

    p = sub.add_parser("loss-budget", help="extract a loss budget from two measurements")
    p.add_argument("measurements", nargs="+")
    p.set_defaults(func=cmd_loss_budget)

    p = sub.add_parser("field-overlap", help="port-placement metric from a field grid")
    p.add_argument("grid")
    p.add_argument("--min-volume-mm3", type=float, default=1.0)
    p.add_argument("--ranking", choices=("min", "max"), default="min")
    p.set_defaults(func=cmd_field_overlap)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except (NetlistError, GridError, DegenerateFieldError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SingularityError, NumericOverflowError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except InconsistentMeasurementError as exc:
        print(f"inconsistent measurement: {exc} (assumption: {exc.assumption})", file=sys.stderr)
        return EXIT_INCONSISTENT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def console_main() -> None:
    sys.exit(main())
