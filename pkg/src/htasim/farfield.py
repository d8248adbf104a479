"""Discrete-aperture far-field engine and beam metrics.

The engine illuminates an aperture from a feed (directly for the transmit
side, via the mirror image of the feed for the folded side), applies each
cell's transmission magnitude and realized compensation phase, pushes the
polarization through the routing stack, and superposes the element
contributions onto a hemisphere grid:

    E(theta, phi) = sum_ij A_ij exp(+j k0 sin(theta) (x_i cos(phi)
                    + y_j sin(phi))) * cos(theta)

accumulated separately for the co-polarized (y) and cross-polarized (x)
components.  Directions are evaluated data-parallel over the (theta, phi)
grid; the element reduction is a fixed-shape row-major contraction, so
results are reproducible run to run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .feed import (
    FeedExcitation,
    FeedPattern,
    default_taper_exponent,
    illumination_grid,
)
from .geometry import ApertureSpec, SystemLayout, mirror_point
from .polarization import (
    JonesVector,
    PolarizationState,
    backward_path_jones,
    forward_path_jones,
    route,
)
from .synthesis import (
    CellMap,
    PhaseMap,
    quantize,
    synthesize_fta,
    synthesize_ta,
    wavenumber,
)
from .unitcell import CurveLibrary, PhaseCurve, builtin_curve_library

SIDE_TA = "ta"
SIDE_FTA = "fta"
HEMISPHERE_FORWARD = "+z"
HEMISPHERE_BACKWARD = "-z"

#: Feeds the transmit-only state may use (the outermost pair would steer
#: beyond the transmit side's scan range).
DEFAULT_TA_FEED_IDS = ("A2", "A3", "A4", "A5", "A6")


@dataclass(frozen=True)
class BlockageMask:
    """Rectangular shadow of the feed board on the folded aperture."""

    width_x_mm: float = 360.0
    width_y_mm: float = 40.0


@dataclass(frozen=True)
class ApertureField:
    """Outgoing (post-cell) field over one aperture: per-element Jones
    components ex, ey as complex (nx, ny) grids."""

    aperture: ApertureSpec
    ex: np.ndarray
    ey: np.ndarray
    hemisphere: str

    def __post_init__(self):
        shape = (self.aperture.nx, self.aperture.ny)
        if self.ex.shape != shape or self.ey.shape != shape:
            raise ValueError("aperture field grids do not match the aperture")
        if not (np.all(np.isfinite(self.ex)) and np.all(np.isfinite(self.ey))):
            raise ValueError("aperture field contains non-finite entries")


@dataclass(frozen=True)
class PatternGrid:
    """Far-field samples over one hemisphere.

    theta is measured from the hemisphere axis (+z or -z), so theta in
    [0, 90] on either side; phi covers [0, 360) uniformly.
    """

    theta_deg: np.ndarray
    phi_deg: np.ndarray
    e_co: np.ndarray  # (n_theta, n_phi) complex
    e_cross: np.ndarray
    hemisphere: str
    frequency_ghz: float


@dataclass(frozen=True)
class BeamMetrics:
    peak_theta_deg: float
    peak_phi_deg: float
    directivity_dbi: float
    peak_gain_dbi: float
    sll_db: float
    beamwidth_3db_deg: float
    crosspol_peak_db: float
    aperture_efficiency: float


@dataclass(frozen=True)
class ScenarioResult:
    state: PolarizationState
    feed_id: str
    frequency_ghz: float
    forward: tuple[PatternGrid, BeamMetrics] | None
    backward: tuple[PatternGrid, BeamMetrics] | None


def illuminate(
    layout: SystemLayout,
    excitation: FeedExcitation,
    side: str,
    cell_map: CellMap,
    curve: PhaseCurve,
    k0: float,
    crosspol_leakage: float = 0.0,
    blockage: BlockageMask | None = None,
    oblique_phase_deg_per_deg: float = 0.0,
) -> ApertureField:
    """Outgoing aperture field on one side of the stack.

    The transmit side sees the feed directly; the folded side sees its
    mirror image about the TA plane, which reproduces the reflected path
    length exactly.  Each element multiplies the incident field by the
    routed Jones operator, the cell's transmission magnitude and its
    realized compensation phase.  `crosspol_leakage` adds that fraction of
    the co-polarized output into the orthogonal component (an unconverted
    transmission residue); `blockage` zeroes folded-side elements shadowed
    by the feed board; `oblique_phase_deg_per_deg` is a sensitivity hook
    adding a linear cell-phase deviation per degree of incidence (zero by
    default: the cells are insensitive to oblique illumination).
    """
    plan = route(excitation.state)
    if side == SIDE_TA:
        if not plan.forward_active:
            raise ValueError(f"state {excitation.state.value} does not drive the TA side")
        aperture = layout.ta
        feed_pos = excitation.placement.position
        path_jones = forward_path_jones(excitation.state.jones)
    elif side == SIDE_FTA:
        if not plan.backward_active:
            raise ValueError(f"state {excitation.state.value} does not drive the FTA side")
        aperture = layout.fta
        feed_pos = mirror_point(excitation.placement.position, layout.f)
        path_jones = backward_path_jones(excitation.state.jones)
    else:
        raise ValueError(f"unknown aperture side {side!r}")
    hemisphere = (
        HEMISPHERE_FORWARD if aperture.normal_sign > 0 else HEMISPHERE_BACKWARD
    )

    if cell_map.aperture != aperture:
        raise ValueError("cell map does not belong to the requested side")

    x = aperture.x_centers()
    y = aperture.y_centers()
    # The mirrored feed radiates along -z (its boresight flips with the
    # fold); both signs reduce to "toward the aperture plane".
    boresight_sign = 1 if aperture.plane_z > feed_pos.z else -1
    incident = illumination_grid(
        excitation.pattern, feed_pos, boresight_sign, x, y, aperture.plane_z, k0
    )

    comp_phase = curve.phase_at(cell_map.params_mm, cell_map.rotated)
    if oblique_phase_deg_per_deg != 0.0:
        dx = x[:, None] - feed_pos.x
        dy = y[None, :] - feed_pos.y
        dz = aperture.plane_z - feed_pos.z
        r = np.sqrt(dx * dx + dy * dy + dz * dz)
        incidence_deg = np.degrees(np.arccos(np.clip(abs(dz) / r, -1.0, 1.0)))
        comp_phase = comp_phase + oblique_phase_deg_per_deg * incidence_deg
    mag = 10.0 ** (curve.magnitude_at(cell_map.params_mm) / 20.0)
    cell_factor = mag * np.exp(1j * np.radians(comp_phase))
    amplitude = incident * cell_factor

    if blockage is not None and side == SIDE_FTA:
        shadow = (np.abs(x)[:, None] <= blockage.width_x_mm / 2.0) & (
            np.abs(y)[None, :] <= blockage.width_y_mm / 2.0
        )
        amplitude = np.where(shadow, 0.0, amplitude)

    ex = amplitude * (path_jones.ex + crosspol_leakage * path_jones.ey)
    ey = amplitude * path_jones.ey
    return ApertureField(aperture=aperture, ex=ex, ey=ey, hemisphere=hemisphere)


def _direction_cosines(theta_deg: np.ndarray, phi_deg: np.ndarray):
    st = np.sin(np.radians(theta_deg))[:, None]
    u = st * np.cos(np.radians(phi_deg))[None, :]
    v = st * np.sin(np.radians(phi_deg))[None, :]
    return u, v


def radiate(
    field: ApertureField,
    theta_step_deg: float,
    phi_step_deg: float,
    k0: float,
) -> PatternGrid:
    """Superpose the aperture field onto a hemisphere grid.

    Steps must divide the 90-degree theta range and the 360-degree phi
    range evenly; theta includes both endpoints, phi omits the periodic
    duplicate at 360.
    """
    n_theta = _check_step(90.0, theta_step_deg, "theta")
    n_phi = _check_step(360.0, phi_step_deg, "phi")
    theta = np.arange(n_theta + 1) * theta_step_deg
    phi = np.arange(n_phi) * phi_step_deg
    if not (np.any(field.ex) or np.any(field.ey)):
        raise ValueError("aperture field is identically zero")

    u, v = _direction_cosines(theta, phi)
    x = field.aperture.x_centers()
    y = field.aperture.y_centers()
    # Separable contraction: sum_i sum_j A_ij e^{jk0 x_i u} e^{jk0 y_j v}.
    pu = np.exp(1j * k0 * u.reshape(-1)[:, None] * x[None, :])  # (ndir, nx)
    pv = np.exp(1j * k0 * v.reshape(-1)[:, None] * y[None, :])  # (ndir, ny)
    element_factor = np.cos(np.radians(theta))[:, None]

    def _sum(a: np.ndarray) -> np.ndarray:
        partial = pu @ a  # (ndir, ny)
        total = np.sum(partial * pv, axis=1)
        return total.reshape(u.shape) * element_factor

    return PatternGrid(
        theta_deg=theta,
        phi_deg=phi,
        e_co=_sum(field.ey),
        e_cross=_sum(field.ex),
        hemisphere=field.hemisphere,
        frequency_ghz=k0 * 299.792458 / (2.0 * math.pi),
    )


def _check_step(full_range: float, step: float, name: str) -> int:
    if step <= 0:
        raise ValueError(f"{name} step must be positive")
    n = full_range / step
    if abs(n - round(n)) > 1e-9:
        raise ValueError(f"{name} step {step} does not divide {full_range} evenly")
    return int(round(n))


def radiated_power_integral(pattern: PatternGrid) -> float:
    """Hemisphere integral of |E|^2 (both polarizations) with the
    trapezoid-on-sphere rule: trapezoid in theta with sin(theta) weight,
    periodic rectangle rule in phi."""
    intensity = np.abs(pattern.e_co) ** 2 + np.abs(pattern.e_cross) ** 2
    theta_rad = np.radians(pattern.theta_deg)
    d_theta = theta_rad[1] - theta_rad[0]
    weights = np.full(theta_rad.size, d_theta)
    weights[0] = weights[-1] = d_theta / 2.0
    d_phi = math.radians(pattern.phi_deg[1] - pattern.phi_deg[0])
    ring = np.sum(intensity, axis=1) * d_phi
    return float(np.sum(ring * np.sin(theta_rad) * weights))


def directivity(pattern: PatternGrid) -> tuple[np.ndarray, float]:
    """Directivity in dBi over the grid and its peak value.

    D(theta, phi) = 4 pi U / P with U the co-polarized intensity and P the
    hemisphere-integrated total intensity (both polarizations).
    """
    total = radiated_power_integral(pattern)
    if total <= 0.0:
        raise ValueError("pattern carries no power")
    u_co = np.abs(pattern.e_co) ** 2
    with np.errstate(divide="ignore"):
        d_dbi = 10.0 * np.log10(4.0 * math.pi * u_co / total)
    return d_dbi, float(d_dbi.max())


def _nearest_phi_index(phi_deg: np.ndarray, target_deg: float) -> int:
    circ = np.abs((phi_deg - target_deg + 180.0) % 360.0 - 180.0)
    return int(np.argmin(circ))


def _principal_cut(pattern: PatternGrid, phi_peak_deg: float):
    """Signed-theta great-circle cut through phi_peak and its antipode.

    Returns (theta_signed_deg, co_power) with the positive branch along
    phi_peak and the negative branch along phi_peak + 180.
    """
    phi = pattern.phi_deg
    i_pos = _nearest_phi_index(phi, phi_peak_deg)
    i_neg = _nearest_phi_index(phi, phi_peak_deg + 180.0)
    co = np.abs(pattern.e_co) ** 2
    pos = co[:, i_pos]
    neg = co[:, i_neg]
    theta = np.concatenate([-pattern.theta_deg[:0:-1], pattern.theta_deg])
    values = np.concatenate([neg[:0:-1], pos])
    return theta, values


def _main_lobe_bounds(power: np.ndarray, peak_idx: int, peak_power: float):
    """Indices bounding the main lobe on a cut: walk outward from the peak
    to the first local minimum at least 3 dB below the peak."""
    floor = peak_power * 10.0 ** (-3.0 / 10.0)
    lo = peak_idx
    while lo > 0 and not (power[lo - 1] > power[lo] and power[lo] <= floor):
        lo -= 1
    hi = peak_idx
    last = power.size - 1
    while hi < last and not (power[hi + 1] > power[hi] and power[hi] <= floor):
        hi += 1
    return lo, hi


def _sidelobe_level_db(theta, power, peak_idx) -> float:
    lo, hi = _main_lobe_bounds(power, peak_idx, power[peak_idx])
    outside = np.concatenate([power[:lo], power[hi + 1 :]])
    if outside.size == 0 or outside.max() <= 0.0:
        return -math.inf
    return 10.0 * math.log10(outside.max() / power[peak_idx])


def _beamwidth_3db_deg(theta, power, peak_idx) -> float:
    """3 dB width around the peak on the cut, linearly interpolated."""
    half = power[peak_idx] / 2.0

    def _cross(idx_range):
        prev = peak_idx
        for i in idx_range:
            if power[i] < half:
                # linear crossing between prev and i
                t0, t1 = theta[prev], theta[i]
                p0, p1 = power[prev], power[i]
                return t0 + (half - p0) * (t1 - t0) / (p1 - p0)
            prev = i
        return theta[idx_range[-1]] if len(idx_range) else theta[peak_idx]

    left = _cross(range(peak_idx - 1, -1, -1))
    right = _cross(range(peak_idx + 1, power.size))
    return float(abs(right - left))


def extract_metrics(
    pattern: PatternGrid,
    layout: SystemLayout,
    gain_offset_db: float = 0.0,
    reference_aperture_mm2: float | None = None,
) -> BeamMetrics:
    """Scalar beam metrics from a hemisphere pattern.

    The sidelobe level and 3 dB beamwidth are evaluated on the beam-plane
    cut (the great circle through the peak and its antipodal azimuth); the
    main lobe is excluded down to the first local minimum at least 3 dB
    below the peak.  Aperture efficiency references the radiating side's
    configured aperture area unless an explicit reference is passed.
    """
    d_dbi, peak_dbi = directivity(pattern)
    co = np.abs(pattern.e_co) ** 2
    flat_idx = int(np.argmax(co))
    it, ip = np.unravel_index(flat_idx, co.shape)
    peak_theta = float(pattern.theta_deg[it])
    peak_phi = float(pattern.phi_deg[ip])

    theta_cut, power_cut = _principal_cut(pattern, peak_phi)
    peak_idx = int(np.argmax(power_cut))
    if power_cut[peak_idx] <= 0.0:
        raise ValueError("pattern has no resolvable main lobe")
    sll = _sidelobe_level_db(theta_cut, power_cut, peak_idx)
    bw = _beamwidth_3db_deg(theta_cut, power_cut, peak_idx)

    cross_max = float(np.max(np.abs(pattern.e_cross) ** 2))
    co_max = float(co.max())
    crosspol_db = (
        10.0 * math.log10(cross_max / co_max) if cross_max > 0.0 else -math.inf
    )

    side = SIDE_TA if pattern.hemisphere == HEMISPHERE_FORWARD else SIDE_FTA
    if reference_aperture_mm2 is None:
        ap = layout.ta if side == SIDE_TA else layout.fta
        reference_aperture_mm2 = ap.area_mm2
    lam = 299.792458 / pattern.frequency_ghz
    d_max = 4.0 * math.pi * reference_aperture_mm2 / lam**2
    efficiency = 10.0 ** (peak_dbi / 10.0) / d_max

    return BeamMetrics(
        peak_theta_deg=peak_theta,
        peak_phi_deg=peak_phi,
        directivity_dbi=peak_dbi,
        peak_gain_dbi=peak_dbi + gain_offset_db,
        sll_db=sll,
        beamwidth_3db_deg=bw,
        crosspol_peak_db=crosspol_db,
        aperture_efficiency=efficiency,
    )


@dataclass(frozen=True)
class SimulationSettings:
    """Knobs of one engine run (sampling, feed model, optional effects)."""

    frequency_ghz: float = 9.75
    theta_step_deg: float = 0.5
    phi_step_deg: float = 2.0
    feed_q: float | None = None  # None -> derived from the layout geometry
    feed_gain_dbi: float = 10.5
    crosspol_leakage: float = 0.0
    blockage: BlockageMask | None = None
    oblique_phase_deg_per_deg: float = 0.0
    gain_offset_db: float = 0.0
    reference_aperture_mm2: float | None = None
    ta_feed_ids: tuple[str, ...] = DEFAULT_TA_FEED_IDS


def feed_pattern_for(layout: SystemLayout, settings: SimulationSettings) -> FeedPattern:
    q = settings.feed_q
    if q is None:
        q = default_taper_exponent(layout.ta.size_x, layout.f)
    return FeedPattern(
        q=q,
        boresight_gain_dbi=settings.feed_gain_dbi,
        frequency_ghz=settings.frequency_ghz,
    )


def allowed_feed_ids(
    layout: SystemLayout, state: PolarizationState, settings: SimulationSettings
) -> tuple[str, ...]:
    """Feeds a state may drive: the transmit-only state is restricted to
    the configured inner set, the folded and hybrid states use all feeds."""
    if state is PolarizationState.X:
        return tuple(fid for fid in layout.feed_ids if fid in settings.ta_feed_ids)
    return layout.feed_ids


def synthesize_cell_maps(
    layout: SystemLayout,
    curves: CurveLibrary,
    frequency_ghz: float,
) -> dict[str, tuple[CellMap, PhaseCurve, PhaseMap]]:
    """Quantized compensation maps for both sides at one frequency."""
    k0 = wavenumber(frequency_ghz)
    out = {}
    for side, synth, kind in (
        (SIDE_TA, synthesize_ta, "uc1"),
        (SIDE_FTA, synthesize_fta, "uc2"),
    ):
        curve = curves.curve(kind, frequency_ghz)
        pm = synth(layout, k0)
        out[side] = (quantize(pm, curve), curve, pm)
    return out


def run_scenario(
    layout: SystemLayout,
    state: PolarizationState,
    feed_id: str,
    settings: SimulationSettings,
    curves: CurveLibrary | None = None,
    cell_maps: dict | None = None,
) -> ScenarioResult:
    """Full illuminate -> radiate -> metrics pipeline for one state/feed.

    `cell_maps` may carry the output of synthesize_cell_maps to reuse the
    quantized compensation maps across runs at the same frequency.
    """
    feed = layout.feed(feed_id)
    legal = allowed_feed_ids(layout, state, settings)
    if feed_id not in legal:
        raise ValueError(
            f"feed {feed_id} is not allowed in state {state.value}; "
            f"allowed feeds: {', '.join(legal)}"
        )
    if curves is None:
        curves = builtin_curve_library()
    if cell_maps is None:
        cell_maps = synthesize_cell_maps(layout, curves, settings.frequency_ghz)

    k0 = wavenumber(settings.frequency_ghz)
    excitation = FeedExcitation(
        placement=feed,
        pattern=feed_pattern_for(layout, settings),
        state=state,
        boresight_sign=+1,
    )
    plan = route(state)

    def _run_side(side: str):
        cm, curve, _ = cell_maps[side]
        field = illuminate(
            layout,
            excitation,
            side,
            cm,
            curve,
            k0,
            crosspol_leakage=settings.crosspol_leakage,
            blockage=settings.blockage,
            oblique_phase_deg_per_deg=settings.oblique_phase_deg_per_deg,
        )
        pattern = radiate(field, settings.theta_step_deg, settings.phi_step_deg, k0)
        metrics = extract_metrics(
            pattern,
            layout,
            gain_offset_db=settings.gain_offset_db,
            reference_aperture_mm2=settings.reference_aperture_mm2,
        )
        return pattern, metrics

    forward = _run_side(SIDE_TA) if plan.forward_active else None
    backward = _run_side(SIDE_FTA) if plan.backward_active else None
    return ScenarioResult(
        state=state,
        feed_id=feed_id,
        frequency_ghz=settings.frequency_ghz,
        forward=forward,
        backward=backward,
    )


def write_pattern_csv(pattern: PatternGrid, path):
    """Export `theta_deg,phi_deg,e_co_db,e_cross_db` normalized to the
    co-polarized peak."""
    co = np.abs(pattern.e_co)
    cross = np.abs(pattern.e_cross)
    peak = co.max()
    if peak <= 0.0:
        raise ValueError("pattern carries no co-polarized power")
    with np.errstate(divide="ignore"):
        co_db = 20.0 * np.log10(co / peak)
        cross_db = 20.0 * np.log10(cross / peak)
    with open(path, "w", newline="") as fh:
        fh.write("theta_deg,phi_deg,e_co_db,e_cross_db\n")
        for i, th in enumerate(pattern.theta_deg):
            for j, ph in enumerate(pattern.phi_deg):
                fh.write(f"{th:.4f},{ph:.4f},{co_db[i, j]:.4f},{cross_db[i, j]:.4f}\n")
