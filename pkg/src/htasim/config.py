"""Run configuration: flat `key = value` file format and its parser.

The grammar is dependency-free on purpose:

* one `key = value` assignment per line,
* `#` starts a comment (full line or trailing),
* dotted keys group settings (`ta.size_mm`, `sampling.theta_step_deg`),
* list entries are indexed (`feeds[0].id`, `feeds[0].x_mm`),
* comma-separated values make a list (`frequencies = 9.0, 9.75, 10.5`),
* booleans are `true` / `false`.

Unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .farfield import DEFAULT_TA_FEED_IDS, BlockageMask, SimulationSettings
from .geometry import (
    ApertureConfig,
    DEFAULT_FEEDS,
    FeedConfig,
    LayoutConfig,
)

_ASSIGN_RE = re.compile(r"^([A-Za-z0-9_.\[\]]+)\s*=\s*(.*)$")
_INDEX_RE = re.compile(r"^([A-Za-z0-9_]+)\[(\d+)\]$")


class ConfigError(Exception):
    """Unparseable or invalid configuration."""


@dataclass
class RunConfig:
    """Everything one CLI invocation needs."""

    layout: LayoutConfig = field(default_factory=LayoutConfig)
    frequencies_ghz: tuple[float, ...] = (9.0, 9.75, 10.5)
    feed_q: float | None = None
    feed_gain_dbi: float = 10.5
    feed_state: str = "x"
    feed_active_ids: tuple[str, ...] | None = None
    ta_feed_ids: tuple[str, ...] = DEFAULT_TA_FEED_IDS
    theta_step_deg: float = 0.5
    phi_step_deg: float = 2.0
    cut_theta_step_deg: float = 0.25
    cut_phi_step_deg: float = 1.0
    crosspol_leakage: float = 0.0
    blockage_enabled: bool = False
    blockage_width_mm: float = 360.0
    blockage_depth_mm: float = 40.0
    oblique_phase_deg_per_deg: float = 0.0
    gain_offset_db: float = 0.0
    reference_aperture_mm2: float | None = None
    curves_source: str = "builtin"
    uc1_curve_csv: str | None = None
    uc2_curve_csv: str | None = None
    output_dir: str = "out"

    def settings(self, frequency_ghz: float, for_cuts: bool = False) -> SimulationSettings:
        return SimulationSettings(
            frequency_ghz=frequency_ghz,
            theta_step_deg=self.cut_theta_step_deg if for_cuts else self.theta_step_deg,
            phi_step_deg=self.cut_phi_step_deg if for_cuts else self.phi_step_deg,
            feed_q=self.feed_q,
            feed_gain_dbi=self.feed_gain_dbi,
            crosspol_leakage=self.crosspol_leakage,
            blockage=(
                BlockageMask(self.blockage_width_mm, self.blockage_depth_mm)
                if self.blockage_enabled
                else None
            ),
            oblique_phase_deg_per_deg=self.oblique_phase_deg_per_deg,
            gain_offset_db=self.gain_offset_db,
            reference_aperture_mm2=self.reference_aperture_mm2,
            ta_feed_ids=self.ta_feed_ids,
        )


def _parse_scalar(raw: str):
    text = raw.strip()
    if text.lower() in ("true", "false"):
        return text.lower() == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def parse_config_text(text: str) -> dict:
    """Parse the flat grammar into a nested dict (lists for indexed keys)."""
    root: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        m = _ASSIGN_RE.match(stripped)
        if m is None:
            raise ConfigError(f"line {lineno}: expected `key = value`, got {line!r}")
        key, raw_value = m.group(1), m.group(2).strip()
        if "," in raw_value:
            value = [_parse_scalar(v) for v in raw_value.split(",") if v.strip()]
        else:
            value = _parse_scalar(raw_value)
        node = root
        parts = key.split(".")
        for k, part in enumerate(parts):
            last = k == len(parts) - 1
            idx_match = _INDEX_RE.match(part)
            if idx_match:
                name, idx = idx_match.group(1), int(idx_match.group(2))
                lst = node.setdefault(name, [])
                if not isinstance(lst, list):
                    raise ConfigError(f"line {lineno}: {name} used both ways")
                while len(lst) <= idx:
                    lst.append({})
                if last:
                    raise ConfigError(
                        f"line {lineno}: indexed key {part} needs a field suffix"
                    )
                node = lst[idx]
            elif last:
                node[part] = value
            else:
                nxt = node.setdefault(part, {})
                if not isinstance(nxt, dict):
                    raise ConfigError(f"line {lineno}: {part} used both ways")
                node = nxt
    return root


def _take(tree: dict, key: str, default):
    return tree.pop(key) if key in tree else default


def _as_tuple_of_str(value) -> tuple[str, ...]:
    if isinstance(value, str):
        return (value,)
    return tuple(str(v) for v in value)


def _as_tuple_of_float(value) -> tuple[float, ...]:
    if isinstance(value, (int, float)):
        return (float(value),)
    return tuple(float(v) for v in value)


def config_from_tree(tree: dict) -> RunConfig:
    """Build a validated RunConfig from the parsed tree."""
    tree = dict(tree)  # consumed destructively to detect unknown keys

    ta_tree = dict(_take(tree, "ta", {}))
    fta_tree = dict(_take(tree, "fta", {}))
    defaults = LayoutConfig()
    ta = ApertureConfig(
        size_mm=float(_take(ta_tree, "size_mm", defaults.ta.size_mm)),
        period_mm=float(_take(ta_tree, "period_mm", defaults.ta.period_mm)),
    )
    fta = ApertureConfig(
        size_mm=float(_take(fta_tree, "size_mm", defaults.fta.size_mm)),
        period_mm=float(_take(fta_tree, "period_mm", defaults.fta.period_mm)),
    )
    for leftover, name in ((ta_tree, "ta"), (fta_tree, "fta")):
        if leftover:
            raise ConfigError(f"unknown {name}.* keys: {sorted(leftover)}")

    feeds_raw = _take(tree, "feeds", None)
    if feeds_raw is None:
        feeds = DEFAULT_FEEDS
    else:
        feeds = []
        for k, entry in enumerate(feeds_raw):
            if "id" not in entry or "x_mm" not in entry:
                raise ConfigError(f"feeds[{k}] needs `id` and `x_mm`")
            feeds.append(
                FeedConfig(
                    id=str(entry.pop("id")),
                    x_mm=float(entry.pop("x_mm")),
                    y_mm=float(entry.pop("y_mm", 0.0)),
                )
            )
            if entry:
                raise ConfigError(f"unknown feeds[{k}].* keys: {sorted(entry)}")
        feeds = tuple(feeds)

    h_mm = _take(tree, "h_mm", None)
    f_given = "F_mm" in tree
    F_mm = _take(tree, "F_mm", None)
    if h_mm is None and not f_given:
        F_mm = defaults.F_mm
    layout = LayoutConfig(
        f_mm=float(_take(tree, "f_mm", defaults.f_mm)),
        h_mm=None if h_mm is None else float(h_mm),
        F_mm=None if F_mm is None else float(F_mm),
        d_mm=float(_take(tree, "d_mm", defaults.d_mm)),
        ta=ta,
        fta=fta,
        feeds=feeds,
    )

    feed_tree = dict(_take(tree, "feed", {}))
    sampling = dict(_take(tree, "sampling", {}))
    curves = dict(_take(tree, "curves", {}))
    blockage = dict(_take(tree, "blockage", {}))
    crosspol = dict(_take(tree, "crosspol", {}))
    oblique = dict(_take(tree, "oblique", {}))

    feed_q = _take(feed_tree, "q", None)
    active = _take(feed_tree, "active_ids", None)
    cfg = RunConfig(
        layout=layout,
        frequencies_ghz=_as_tuple_of_float(_take(tree, "frequencies", (9.0, 9.75, 10.5))),
        feed_q=None if feed_q is None else float(feed_q),
        feed_gain_dbi=float(_take(feed_tree, "gain_dbi", 10.5)),
        feed_state=str(_take(feed_tree, "state", "x")).lower(),
        feed_active_ids=None if active is None else _as_tuple_of_str(active),
        ta_feed_ids=_as_tuple_of_str(_take(tree, "ta_feed_ids", DEFAULT_TA_FEED_IDS)),
        theta_step_deg=float(_take(sampling, "theta_step_deg", 0.5)),
        phi_step_deg=float(_take(sampling, "phi_step_deg", 2.0)),
        cut_theta_step_deg=float(_take(sampling, "cut_theta_step_deg", 0.25)),
        cut_phi_step_deg=float(_take(sampling, "cut_phi_step_deg", 1.0)),
        crosspol_leakage=float(_take(crosspol, "leakage", 0.0)),
        blockage_enabled=bool(_take(blockage, "enabled", False)),
        blockage_width_mm=float(_take(blockage, "width_mm", 360.0)),
        blockage_depth_mm=float(_take(blockage, "depth_mm", 40.0)),
        oblique_phase_deg_per_deg=float(_take(oblique, "phase_deg_per_deg", 0.0)),
        gain_offset_db=float(_take(tree, "gain_offset_db", 0.0)),
        reference_aperture_mm2=(
            float(tree.pop("reference_aperture_mm2"))
            if "reference_aperture_mm2" in tree
            else None
        ),
        curves_source=str(_take(curves, "source", "builtin")),
        uc1_curve_csv=_take(curves, "uc1_csv", None),
        uc2_curve_csv=_take(curves, "uc2_csv", None),
        output_dir=str(_take(tree, "output_dir", "out")),
    )
    for leftover, name in (
        (feed_tree, "feed"),
        (sampling, "sampling"),
        (curves, "curves"),
        (blockage, "blockage"),
        (crosspol, "crosspol"),
        (oblique, "oblique"),
        (tree, "top-level"),
    ):
        if leftover:
            raise ConfigError(f"unknown {name} keys: {sorted(leftover)}")

    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig):
    if any(f <= 0 for f in cfg.frequencies_ghz):
        raise ConfigError(f"frequencies must be positive: {cfg.frequencies_ghz}")
    for name, step, full in (
        ("sampling.theta_step_deg", cfg.theta_step_deg, 90.0),
        ("sampling.phi_step_deg", cfg.phi_step_deg, 360.0),
        ("sampling.cut_theta_step_deg", cfg.cut_theta_step_deg, 90.0),
        ("sampling.cut_phi_step_deg", cfg.cut_phi_step_deg, 360.0),
    ):
        if step <= 0 or abs(full / step - round(full / step)) > 1e-9:
            raise ConfigError(f"{name} = {step} does not divide {full} evenly")
    if cfg.gain_offset_db > 0:
        raise ConfigError("gain_offset_db is a loss budget and must be <= 0")
    if not 0.0 <= cfg.crosspol_leakage < 1.0:
        raise ConfigError("crosspol.leakage must lie in [0, 1)")
    if cfg.curves_source not in ("builtin", "csv"):
        raise ConfigError(f"curves.source must be builtin or csv, not {cfg.curves_source}")
    if cfg.curves_source == "csv" and not (cfg.uc1_curve_csv or cfg.uc2_curve_csv):
        raise ConfigError("curves.source = csv needs curves.uc1_csv and/or curves.uc2_csv")
    if cfg.feed_state not in ("x", "y", "slant45"):
        raise ConfigError(f"feed.state must be x, y or slant45, not {cfg.feed_state}")


def load_config(path) -> RunConfig:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    try:
        tree = parse_config_text(p.read_text())
        return config_from_tree(tree)
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{p}: {exc}") from exc


def default_config() -> RunConfig:
    return config_from_tree({})
