"""Command-line front end.

Subcommands:

* ``validate``   — run the self-consistency checks on the configured system
                   (focal relations, phase-law identities, lookup round
                   trips, polarization energy split); exit 0 iff all pass.
* ``synthesize`` — write the compensation phase maps and quantized cell
                   maps for both apertures at the design frequency.
* ``simulate``   — one state/feed/frequency scenario: pattern cut CSV plus
                   metrics JSON for each active hemisphere.
* ``sweep``      — every legal state/feed/frequency combination: beam
                   table CSV plus per-beam artifacts, with scan loss per
                   state/frequency/hemisphere.
* ``report``     — compare a beam table against geometric pointing
                   predictions and the measured reference targets.

Exit codes: 0 success, 1 domain failure (failed check, illegal scenario,
failed sweep rows), 2 usage or configuration failure.  All outputs are
deterministic for a fixed configuration.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, default_config, load_config
from .farfield import (
    BeamMetrics,
    HEMISPHERE_FORWARD,
    allowed_feed_ids,
    run_scenario,
    synthesize_cell_maps,
)
from .geometry import Point3, build_layout, mirror_feed, mirror_point, path_length
from .polarization import (
    GridOrientation,
    JonesVector,
    PolarizationState,
    grid_reflect,
    grid_transmit,
    rotate_pol_90,
    route,
)
from .synthesis import (
    bifocal_phase_unwrapped,
    single_focus_phase_unwrapped,
    ScanTarget,
    synthesize_fta,
    synthesize_ta,
    quantize,
    wavenumber,
    wrap_deg,
    write_cell_map_csv,
    write_phase_map_csv,
)
from .unitcell import CurveLibrary, builtin_curve_library, library_with_csv_overrides

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2

_STATES = {
    "x": PolarizationState.X,
    "y": PolarizationState.Y,
    "slant45": PolarizationState.SLANT45,
}


def _load(args) -> RunConfig:
    if args.config is None:
        return default_config()
    return load_config(args.config)


def _curves(cfg: RunConfig) -> CurveLibrary:
    if cfg.curves_source == "builtin":
        return builtin_curve_library()
    try:
        return library_with_csv_overrides(
            uc1_csv=cfg.uc1_curve_csv,
            uc2_csv=cfg.uc2_curve_csv,
            frequencies_ghz=cfg.frequencies_ghz,
        )
    except FileNotFoundError as exc:
        raise ConfigError(f"curve file not found: {exc.filename}") from exc


def _design_frequency(cfg: RunConfig) -> float:
    ordered = sorted(cfg.frequencies_ghz)
    return ordered[len(ordered) // 2]


def _fmt(value: float, nd: int = 4) -> str:
    if value is None or (isinstance(value, float) and math.isinf(value)):
        return ""
    return f"{value:.{nd}f}"


def _metrics_dict(state, feed_id, frequency, hemisphere, m: BeamMetrics) -> dict:
    def _num(v):
        return None if (isinstance(v, float) and not math.isfinite(v)) else v

    return {
        "state": state.value,
        "feed_id": feed_id,
        "frequency_ghz": frequency,
        "hemisphere": hemisphere,
        "peak_theta_deg": m.peak_theta_deg,
        "peak_phi_deg": m.peak_phi_deg,
        "directivity_dbi": m.directivity_dbi,
        "peak_gain_dbi": m.peak_gain_dbi,
        "sll_db": _num(m.sll_db),
        "beamwidth_3db_deg": m.beamwidth_3db_deg,
        "crosspol_peak_db": _num(m.crosspol_peak_db),
        "aperture_efficiency": m.aperture_efficiency,
    }


# --- validate ---------------------------------------------------------------


def _run_checks(cfg: RunConfig):
    """Yield (name, passed, detail) for every self-consistency check."""
    rng = np.random.default_rng(20240901)

    # layout construction doubles as the focal-relation check
    try:
        layout = build_layout(cfg.layout)
    except ValueError as exc:
        name = "focal_relation" if "focal" in str(exc) else "layout_valid"
        yield name, False, str(exc)
        return
    yield "focal_relation", abs(layout.F - 2 * layout.f - layout.h) == 0.0, (
        f"F = {layout.F}, 2f + h = {2 * layout.f + layout.h}"
    )

    x = layout.ta.x_centers()
    y = layout.ta.y_centers()
    sym = np.array_equal(x, -x[::-1]) and np.array_equal(y, -y[::-1])
    yield "aperture_grid_symmetry", sym, "element centers negate under index reflection"

    ok = True
    for feed in layout.feeds:
        m = mirror_feed(layout, feed)
        back = mirror_point(m, layout.f)
        if (back.x, back.y, back.z) != (
            feed.position.x,
            feed.position.y,
            feed.position.z,
        ):
            ok = False
    yield "mirror_involution", ok, "mirroring twice returns the feed"

    worst = 0.0
    for _ in range(64):
        fx, fy = rng.uniform(-180, 180, 2)
        ex, ey = rng.uniform(-170, 170, 2)
        feed_p = Point3(fx, fy, 0.0)
        elem = Point3(ex, ey, -layout.h)
        m = mirror_point(feed_p, layout.f)
        t = (layout.f - m.z) / (elem.z - m.z)
        spec_pt = Point3(m.x + t * (elem.x - m.x), m.y + t * (elem.y - m.y), layout.f)
        folded = path_length(feed_p, spec_pt) + path_length(spec_pt, elem)
        direct = path_length(m, elem)
        worst = max(worst, abs(folded - direct) / direct)
    yield "folded_path_image", worst < 1e-12, f"max rel dev {worst:.2e}"

    k0 = wavenumber(_design_frequency(cfg))
    vf1, vf2 = layout.virtual_feeds
    closed = bifocal_phase_unwrapped(layout.ta, vf1, vf2, k0)
    theta = 17.0
    m1 = single_focus_phase_unwrapped(layout.ta, vf1, ScanTarget(theta, 180.0), k0)
    m2 = single_focus_phase_unwrapped(layout.ta, vf2, ScanTarget(theta, 0.0), k0)
    rel = np.max(np.abs((m1 + m2) / 2.0 - closed) / np.abs(closed))
    yield "bifocal_mean_equivalence", rel < 1e-9, f"max rel dev {rel:.2e}"

    from .synthesis import bifocal_phase

    a = bifocal_phase(layout.ta, vf1, vf2, +theta, k0)
    b = bifocal_phase(layout.ta, vf1, vf2, -theta, k0)
    yield "bifocal_theta_independence", np.array_equal(a.phases_deg, b.phases_deg), (
        "deflection angle drops out of the symmetric average"
    )

    try:
        curves = _curves(cfg)
    except ConfigError as exc:
        yield "curves_loadable", False, str(exc)
        return
    for kind, label in (("uc1", "curve_roundtrip_ta"), ("uc2", "curve_roundtrip_fta")):
        worst = 0.0
        for f in cfg.frequencies_ghz:
            curve = curves.curve(kind, f)
            targets = np.arange(64) * (360.0 / 64)
            params, rot = curve.invert(targets)
            realized = curve.phase_at(params, rot)
            err = np.abs(wrap_deg(realized - targets + 180.0) - 180.0)
            worst = max(worst, float(err.max()))
        yield label, worst <= 1e-6, f"max round-trip error {worst:.2e} deg"

    worst = 0.0
    for _ in range(32):
        v = JonesVector(
            complex(rng.normal(), rng.normal()), complex(rng.normal(), rng.normal())
        )
        for g in GridOrientation:
            t = grid_transmit(v, g)
            r = grid_reflect(v, g)
            worst = max(worst, abs(t.norm_sq + r.norm_sq - v.norm_sq) / v.norm_sq)
    yield "grid_energy_split", worst < 1e-12, f"max rel energy defect {worst:.2e}"

    v = JonesVector(0.3 + 0.1j, -0.7 + 0.2j)
    w = v
    for _ in range(4):
        w = rotate_pol_90(w)
    yield "rotation_identity", (w.ex, w.ey) == (v.ex, v.ey), (
        "four rotations are the identity"
    )

    ok = True
    detail = []
    for state, fwd, back in (
        (PolarizationState.X, 1.0, 0.0),
        (PolarizationState.Y, 0.0, 1.0),
        (PolarizationState.SLANT45, math.sqrt(0.5), math.sqrt(0.5)),
    ):
        plan = route(state)
        if (plan.forward_amplitude, plan.backward_amplitude) != (fwd, back):
            ok = False
        if plan.output_polarization is not PolarizationState.Y:
            ok = False
        detail.append(f"{state.value}:{plan.forward_amplitude:.3f}/{plan.backward_amplitude:.3f}")
    yield "routing_table", ok, " ".join(detail)

    worst = 0.0
    for f in cfg.frequencies_ghz:
        maps = synthesize_cell_maps(layout, curves, f)
        for side in ("ta", "fta"):
            worst = max(worst, maps[side][0].max_residual_deg)
    yield "quantization_residual", worst <= 5.0, f"max realized-phase residual {worst:.2e} deg"


def cmd_validate(args) -> int:
    try:
        cfg = _load(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    failed = 0
    for name, passed, detail in _run_checks(cfg):
        tag = "PASS" if passed else "FAIL"
        print(f"{tag} {name}: {detail}")
        failed += 0 if passed else 1
    print(f"{'all checks passed' if failed == 0 else f'{failed} check(s) failed'}")
    return EXIT_OK if failed == 0 else EXIT_DOMAIN


# --- synthesize -------------------------------------------------------------


def cmd_synthesize(args) -> int:
    try:
        cfg = _load(args)
        curves = _curves(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        layout = build_layout(cfg.layout)
    except ValueError as exc:
        print(f"layout error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    freq = _design_frequency(cfg)
    k0 = wavenumber(freq)
    out = Path(args.out or cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    jobs = (
        ("ta", synthesize_ta(layout, k0), curves.curve("uc1", freq)),
        ("fta", synthesize_fta(layout, k0), curves.curve("uc2", freq)),
    )
    try:
        for side, pm, curve in jobs:
            cm = quantize(pm, curve)
            write_phase_map_csv(pm, out / f"{side}_phase.csv")
            write_cell_map_csv(pm, cm, out / f"{side}_cells.csv")
            print(
                f"{side}: {pm.aperture.nx}x{pm.aperture.ny} cells at {freq} GHz, "
                f"max residual {cm.max_residual_deg:.2e} deg -> "
                f"{side}_phase.csv, {side}_cells.csv"
            )
    except OSError as exc:
        print(f"write failed: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


# --- simulate ---------------------------------------------------------------


def _emit_beam(out_dir: Path, state, feed_id, freq, hemisphere, pattern, metrics):
    stem = f"{state.value}_{feed_id}_{freq:g}GHz_{'fwd' if hemisphere == HEMISPHERE_FORWARD else 'back'}"
    _write_cut_csv(pattern, out_dir / f"{stem}_cut.csv")
    payload = _metrics_dict(state, feed_id, freq, hemisphere, metrics)
    (out_dir / f"{stem}_metrics.json").write_text(json.dumps(payload, indent=2) + "\n")
    return stem


def _write_cut_csv(pattern, path):
    """Beam-plane cut through the co-polar peak, signed theta."""
    from .farfield import _nearest_phi_index

    co = np.abs(pattern.e_co) ** 2
    it, ip = np.unravel_index(int(np.argmax(co)), co.shape)
    phi = pattern.phi_deg
    i_pos = ip
    i_neg = _nearest_phi_index(phi, phi[ip] + 180.0)
    peak = np.abs(pattern.e_co).max()
    with np.errstate(divide="ignore"):
        co_db = 20.0 * np.log10(np.abs(pattern.e_co) / peak)
        cx_db = 20.0 * np.log10(np.abs(pattern.e_cross) / peak)
    with open(path, "w", newline="") as fh:
        fh.write("theta_deg,phi_deg,e_co_db,e_cross_db\n")
        for k in range(pattern.theta_deg.size - 1, 0, -1):
            fh.write(
                f"{-pattern.theta_deg[k]:.4f},{phi[i_neg]:.4f},"
                f"{co_db[k, i_neg]:.4f},{cx_db[k, i_neg]:.4f}\n"
            )
        for k in range(pattern.theta_deg.size):
            fh.write(
                f"{pattern.theta_deg[k]:.4f},{phi[i_pos]:.4f},"
                f"{co_db[k, i_pos]:.4f},{cx_db[k, i_pos]:.4f}\n"
            )


def cmd_simulate(args) -> int:
    try:
        cfg = _load(args)
        curves = _curves(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    state = _STATES[args.state]
    freq = args.freq
    if freq not in cfg.frequencies_ghz:
        print(
            f"frequency {freq} GHz is not in the configured list "
            f"{cfg.frequencies_ghz}",
            file=sys.stderr,
        )
        return EXIT_USAGE
    if args.gain_offset_db is not None and args.gain_offset_db > 0:
        print("--gain-offset-db is a loss budget and must be <= 0", file=sys.stderr)
        return EXIT_USAGE
    try:
        layout = build_layout(cfg.layout)
    except ValueError as exc:
        print(f"layout error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    settings = cfg.settings(freq, for_cuts=True)
    settings = _apply_overrides(settings, args)
    try:
        result = run_scenario(layout, state, args.feed, settings, curves)
    except (KeyError, ValueError) as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    out = Path(args.out or cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    for hemisphere, item in (
        (HEMISPHERE_FORWARD, result.forward),
        ("-z", result.backward),
    ):
        if item is None:
            continue
        pattern, metrics = item
        stem = _emit_beam(out, state, args.feed, freq, hemisphere, pattern, metrics)
        print(
            f"{stem}: peak ({metrics.peak_theta_deg:.2f}, {metrics.peak_phi_deg:.1f}) deg, "
            f"D {metrics.directivity_dbi:.2f} dBi, SLL {_fmt(metrics.sll_db, 2) or 'n/a'} dB"
        )
    return EXIT_OK


def _apply_overrides(settings, args):
    from dataclasses import replace

    from .farfield import BlockageMask

    kwargs = {}
    if getattr(args, "theta_step", None) is not None:
        kwargs["theta_step_deg"] = args.theta_step
    if getattr(args, "phi_step", None) is not None:
        kwargs["phi_step_deg"] = args.phi_step
    if getattr(args, "gain_offset_db", None) is not None:
        kwargs["gain_offset_db"] = args.gain_offset_db
    if getattr(args, "blockage", False) and settings.blockage is None:
        kwargs["blockage"] = BlockageMask()
    return replace(settings, **kwargs) if kwargs else settings


# --- sweep ------------------------------------------------------------------

BEAM_TABLE_COLUMNS = (
    "state",
    "feed_id",
    "frequency_ghz",
    "hemisphere",
    "peak_theta_deg",
    "peak_phi_deg",
    "directivity_dbi",
    "sll_db",
    "crosspol_db",
    "beamwidth_deg",
    "scan_loss_db",
    "status",
)


def sweep_rows(cfg: RunConfig, curves: CurveLibrary, layout, out_dir: Path | None):
    """All legal (state, feed, frequency) beams, scan loss filled in.

    Rows are produced in deterministic (state, feed, frequency) order; a
    failed scenario yields a row with empty metrics and status=failed.
    """
    rows = []
    cache: dict[float, dict] = {}
    feed_ids = cfg.feed_active_ids or layout.feed_ids
    for state in (PolarizationState.X, PolarizationState.Y, PolarizationState.SLANT45):
        for feed_id in feed_ids:
            for freq in sorted(cfg.frequencies_ghz):
                settings = cfg.settings(freq)
                if feed_id not in allowed_feed_ids(layout, state, settings):
                    continue
                if freq not in cache:
                    cache[freq] = synthesize_cell_maps(layout, curves, freq)
                try:
                    result = run_scenario(
                        layout, state, feed_id, settings, curves, cache[freq]
                    )
                    for hemisphere, item in (
                        ("+z", result.forward),
                        ("-z", result.backward),
                    ):
                        if item is None:
                            continue
                        pattern, metrics = item
                        rows.append(
                            {
                                "state": state.value,
                                "feed_id": feed_id,
                                "frequency_ghz": freq,
                                "hemisphere": hemisphere,
                                "metrics": metrics,
                                "status": "ok",
                            }
                        )
                        if out_dir is not None:
                            _emit_beam(
                                out_dir, state, feed_id, freq, hemisphere,
                                pattern, metrics,
                            )
                except Exception as exc:  # partial-failure policy: keep going
                    rows.append(
                        {
                            "state": state.value,
                            "feed_id": feed_id,
                            "frequency_ghz": freq,
                            "hemisphere": "",
                            "status": f"failed: {exc}",
                        }
                    )
    _fill_scan_loss(rows, layout)
    return rows


def _fill_scan_loss(rows, layout):
    """scan_loss = boresight-feed directivity minus the row's directivity,
    per (state, frequency, hemisphere)."""
    boresight = {}
    for row in rows:
        if row["status"] != "ok":
            continue
        feed = layout.feed(row["feed_id"])
        if feed.position.x == 0.0 and feed.position.y == 0.0:
            key = (row["state"], row["frequency_ghz"], row["hemisphere"])
            boresight[key] = row["metrics"].directivity_dbi
    for row in rows:
        if row["status"] != "ok":
            row["scan_loss_db"] = None
            continue
        key = (row["state"], row["frequency_ghz"], row["hemisphere"])
        ref = boresight.get(key)
        row["scan_loss_db"] = (
            None if ref is None else ref - row["metrics"].directivity_dbi
        )


def write_beam_table(rows, path):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(BEAM_TABLE_COLUMNS) + "\n")
        for row in rows:
            m = row.get("metrics")
            cells = [
                row["state"],
                row["feed_id"],
                f"{row['frequency_ghz']:g}",
                row["hemisphere"],
                _fmt(m.peak_theta_deg) if m else "",
                _fmt(m.peak_phi_deg) if m else "",
                _fmt(m.directivity_dbi) if m else "",
                _fmt(m.sll_db) if m else "",
                _fmt(m.crosspol_peak_db) if m else "",
                _fmt(m.beamwidth_3db_deg) if m else "",
                _fmt(row.get("scan_loss_db")) if row.get("scan_loss_db") is not None else "",
                row["status"],
            ]
            fh.write(",".join(cells) + "\n")


def cmd_sweep(args) -> int:
    try:
        cfg = _load(args)
        curves = _curves(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        layout = build_layout(cfg.layout)
    except ValueError as exc:
        print(f"layout error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    out = Path(args.out or cfg.output_dir)
    beams_dir = out / "beams"
    beams_dir.mkdir(parents=True, exist_ok=True)
    rows = sweep_rows(cfg, curves, layout, beams_dir)
    table_path = out / "beam_table.csv"
    write_beam_table(rows, table_path)
    failed = sum(1 for r in rows if r["status"] != "ok")
    print(f"{len(rows)} beams -> {table_path} ({failed} failed)")
    for state in ("x", "y", "slant45"):
        for hemi in ("+z", "-z"):
            losses = [
                r["scan_loss_db"]
                for r in rows
                if r["status"] == "ok"
                and r["state"] == state
                and r["hemisphere"] == hemi
                and r["scan_loss_db"] is not None
            ]
            if losses:
                print(f"  {state:8s} {hemi}: max scan loss {max(losses):.2f} dB")
    return EXIT_OK if failed == 0 else EXIT_DOMAIN


# --- report -----------------------------------------------------------------


def load_reference_targets() -> dict:
    """Measured beam angles of the reference prototype, by
    (state, feed_id, hemisphere).  Comparison values only, not oracles."""
    targets = {}
    path = resources.files("htasim.data").joinpath("reference_targets.csv")
    with path.open() as fh:
        for row in csv.DictReader(fh):
            key = (row["state"], row["feed_id"], row["hemisphere"])
            targets[key] = float(row["target_theta_deg"])
    return targets


def cmd_report(args) -> int:
    try:
        cfg = _load(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    table_path = Path(args.beam_table or Path(args.out or cfg.output_dir) / "beam_table.csv")
    if not table_path.is_file():
        print(f"beam table not found: {table_path}", file=sys.stderr)
        return EXIT_USAGE
    try:
        layout = build_layout(cfg.layout)
    except ValueError as exc:
        print(f"layout error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    targets = load_reference_targets()
    tol = max(2.0, cfg.theta_step_deg)
    print(
        f"{'state':8s} {'feed':5s} {'freq':6s} {'hemi':4s} "
        f"{'achieved':>8s} {'geom':>6s} {'d_geo':>6s} {'meas':>6s} {'d_meas':>6s}  note"
    )
    with open(table_path, newline="") as fh:
        for row in csv.DictReader(fh):
            if row["status"] != "ok":
                print(f"{row['state']:8s} {row['feed_id']:5s} {row['frequency_ghz']:6s} "
                      f"{row['hemisphere']:4s} {'':>8s} {'':>6s} {'':>6s} {'':>6s} {'':>6s}  {row['status']}")
                continue
            feed = layout.feed(row["feed_id"])
            focal = layout.f if row["hemisphere"] == "+z" else layout.F
            geo = math.degrees(math.atan(abs(feed.position.x) / focal))
            ach = float(row["peak_theta_deg"])
            d_geo = abs(ach - geo)
            key = (row["state"], row["feed_id"], row["hemisphere"])
            meas = targets.get(key)
            d_meas = None if meas is None else abs(ach - meas)
            notes = []
            if d_geo > tol:
                notes.append(f"beyond geometric tolerance {tol:g} deg")
            if meas is not None and abs(geo - meas) > 1e-6:
                notes.append("measured reference offset")
            print(
                f"{row['state']:8s} {row['feed_id']:5s} {row['frequency_ghz']:6s} "
                f"{row['hemisphere']:4s} {ach:8.2f} {geo:6.2f} {d_geo:6.2f} "
                f"{meas if meas is not None else float('nan'):6.1f} "
                f"{d_meas if d_meas is not None else float('nan'):6.2f}  {'; '.join(notes)}"
            )
    return EXIT_OK


# --- entry point ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="htasim",
        description="Bidirectional multibeam hybrid-transmitarray design and analysis",
    )
    parser.add_argument("--version", action="version", version=f"htasim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def _common(p, with_out=True):
        p.add_argument("--config", help="path to a key = value config file")
        if with_out:
            p.add_argument("--out", help="output directory (default from config)")

    p = sub.add_parser("validate", help="run self-consistency checks")
    _common(p, with_out=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("synthesize", help="write phase and cell maps")
    _common(p)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("simulate", help="run one scenario")
    _common(p)
    p.add_argument("--state", required=True, choices=sorted(_STATES))
    p.add_argument("--feed", required=True, help="feed id, e.g. A4")
    p.add_argument("--freq", required=True, type=float, help="frequency in GHz")
    p.add_argument("--theta-step", type=float, dest="theta_step")
    p.add_argument("--phi-step", type=float, dest="phi_step")
    p.add_argument("--blockage", action="store_true", help="enable the feed-board shadow")
    p.add_argument("--gain-offset-db", type=float, dest="gain_offset_db")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run every legal state/feed/frequency beam")
    _common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="compare a beam table against predictions")
    _common(p)
    p.add_argument("--beam-table", help="beam table CSV (default <out>/beam_table.csv)")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
