"""Coordinate frame, aperture grids, feed layout and folded-optics focal relations.

Convention used throughout the package: the feed plane sits at z = 0, the
transmitting aperture (TA) at z = +f, the folded aperture (FTA) at z = -h,
and +z is the forward radiation direction.  With that choice the folded
focal length reads directly off the geometry as F = 2f + h: a ray launched
at the feed plane, reflected at the TA plane and received on the FTA plane
travels the same distance as a straight ray from the feed's mirror image
about the TA plane.

All lengths are millimeters, all angles degrees unless a name says
otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .polarization import PolarizationState


@dataclass(frozen=True)
class Point3:
    """A point in the antenna coordinate frame (mm)."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for v in (self.x, self.y, self.z):
            if not math.isfinite(v):
                raise ValueError(f"non-finite coordinate in {self!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


def path_length(a: Point3, b: Point3) -> float:
    """Euclidean distance between two points (mm)."""
    return math.sqrt((a.x - b.x) ** 2 + (a.y - b.y) ** 2 + (a.z - b.z) ** 2)


@dataclass(frozen=True)
class ApertureSpec:
    """A planar rectangular grid of radiating cells.

    Cell (i, j) is centered at x_i = (i - (nx-1)/2) * period and
    y_j = (j - (ny-1)/2) * period, so the grid is symmetric about the
    aperture center.  `normal_sign` is +1 for an aperture radiating
    toward +z and -1 for one radiating toward -z.
    """

    plane_z: float
    size_x: float
    size_y: float
    period: float
    nx: int
    ny: int
    normal_sign: int = 1

    def __post_init__(self):
        if self.period <= 0:
            raise ValueError("aperture period must be positive")
        if self.nx < 1 or self.ny < 1:
            raise ValueError("aperture must hold at least one cell per axis")
        if self.normal_sign not in (1, -1):
            raise ValueError("normal_sign must be +1 or -1")
        # cells must fit the stated aperture (half-period slack at the rim)
        if self.nx * self.period > self.size_x + self.period / 2 + 1e-9:
            raise ValueError(
                f"{self.nx} cells of period {self.period} mm exceed "
                f"size_x = {self.size_x} mm"
            )
        if self.ny * self.period > self.size_y + self.period / 2 + 1e-9:
            raise ValueError(
                f"{self.ny} cells of period {self.period} mm exceed "
                f"size_y = {self.size_y} mm"
            )

    def x_centers(self) -> np.ndarray:
        i = np.arange(self.nx, dtype=float)
        return (i - (self.nx - 1) / 2.0) * self.period

    def y_centers(self) -> np.ndarray:
        j = np.arange(self.ny, dtype=float)
        return (j - (self.ny - 1) / 2.0) * self.period

    def element_center(self, i: int, j: int) -> Point3:
        """Center of cell (i, j) in the global frame."""
        if not (0 <= i < self.nx and 0 <= j < self.ny):
            raise IndexError(f"cell index ({i}, {j}) outside {self.nx}x{self.ny} grid")
        return Point3(
            (i - (self.nx - 1) / 2.0) * self.period,
            (j - (self.ny - 1) / 2.0) * self.period,
            self.plane_z,
        )

    @property
    def area_mm2(self) -> float:
        return self.size_x * self.size_y


@dataclass(frozen=True)
class FeedPlacement:
    """One switchable radiator of the feed line on the feed plane.

    `polarization` records the state the feed is currently driven in; it is
    None for a feed that has not been assigned a drive state yet (the
    scenario runner sets it per run).
    """

    id: str
    position: Point3
    polarization: PolarizationState | None = None


@dataclass(frozen=True)
class SystemLayout:
    """Full folded-optics system: feed plane, both apertures, virtual feeds."""

    f: float
    h: float
    F: float
    d: float
    ta: ApertureSpec
    fta: ApertureSpec
    feeds: tuple[FeedPlacement, ...]
    feed_plane_z: float = 0.0
    virtual_feeds: tuple[Point3, Point3] = field(init=False)

    def __post_init__(self):
        if abs(self.F - (2 * self.f + self.h)) > 1e-9:
            raise ValueError(
                f"focal relation violated: F = {self.F}, 2f + h = {2 * self.f + self.h}"
            )
        vf1 = Point3(self.d / 2.0, 0.0, self.feed_plane_z)
        vf2 = Point3(-self.d / 2.0, 0.0, self.feed_plane_z)
        object.__setattr__(self, "virtual_feeds", (vf1, vf2))
        for feed in self.feeds:
            if feed.position.z != self.feed_plane_z:
                raise ValueError(
                    f"feed {feed.id} lies at z = {feed.position.z}, "
                    f"not on the feed plane z = {self.feed_plane_z}"
                )

    @property
    def offset_angle_deg(self) -> float:
        """Angle between the axis and a virtual feed as seen from the TA."""
        return math.degrees(math.atan2(self.d / 2.0, self.f))

    def feed(self, feed_id: str) -> FeedPlacement:
        for fd in self.feeds:
            if fd.id == feed_id:
                return fd
        raise KeyError(f"unknown feed id {feed_id!r}")

    @property
    def feed_ids(self) -> tuple[str, ...]:
        return tuple(fd.id for fd in self.feeds)


@dataclass(frozen=True)
class ApertureConfig:
    size_mm: float
    period_mm: float


@dataclass(frozen=True)
class FeedConfig:
    id: str
    x_mm: float
    y_mm: float = 0.0


# Defaults: 240 mm TA aperture at 6 mm pitch (40x40 cells), 360 mm FTA
# aperture at 10 mm pitch (36x36 cells), feeds every 50..110..160 mm.
DEFAULT_TA = ApertureConfig(size_mm=240.0, period_mm=6.0)
DEFAULT_FTA = ApertureConfig(size_mm=360.0, period_mm=10.0)
DEFAULT_FEED_X_MM = (-160.0, -110.0, -50.0, 0.0, 50.0, 110.0, 160.0)
DEFAULT_FEEDS = tuple(
    FeedConfig(id=f"A{k + 1}", x_mm=x) for k, x in enumerate(DEFAULT_FEED_X_MM)
)


@dataclass(frozen=True)
class LayoutConfig:
    """Raw layout parameters as read from a config file.

    Exactly one of `h_mm` / `F_mm` may be omitted; when both are given they
    must satisfy F = 2f + h.
    """

    f_mm: float = 171.0
    h_mm: float | None = None
    F_mm: float | None = 384.0
    d_mm: float = 220.0
    ta: ApertureConfig = DEFAULT_TA
    fta: ApertureConfig = DEFAULT_FTA
    feeds: tuple[FeedConfig, ...] = DEFAULT_FEEDS


def _grid_count(size_mm: float, period_mm: float) -> int:
    """Largest symmetric cell count that fits the aperture."""
    n = int(math.floor(size_mm / period_mm + 0.5))
    return max(n, 1)


def build_layout(config: LayoutConfig) -> SystemLayout:
    """Resolve a LayoutConfig into a validated SystemLayout.

    Raises ValueError on nonpositive dimensions or an inconsistent
    (f, h, F) triple.
    """
    f = float(config.f_mm)
    if f <= 0:
        raise ValueError(f"focal distance f must be positive, got {f}")
    if config.h_mm is None and config.F_mm is None:
        raise ValueError("layout needs h_mm or F_mm")
    if config.h_mm is not None:
        h = float(config.h_mm)
        if h < 0:
            raise ValueError(f"aperture separation h must be nonnegative, got {h}")
        F = 2 * f + h
        if config.F_mm is not None and abs(float(config.F_mm) - F) > 1e-9:
            raise ValueError(
                f"inconsistent focal triple: f = {f}, h = {h} imply "
                f"F = {F} but F = {config.F_mm} was given"
            )
    else:
        F = float(config.F_mm)
        if F < 2 * f:
            raise ValueError(f"F = {F} must be at least 2f = {2 * f}")
        h = F - 2 * f
    d = float(config.d_mm)
    if d < 0:
        raise ValueError(f"virtual feed spacing d must be nonnegative, got {d}")

    ta = ApertureSpec(
        plane_z=+f,
        size_x=config.ta.size_mm,
        size_y=config.ta.size_mm,
        period=config.ta.period_mm,
        nx=_grid_count(config.ta.size_mm, config.ta.period_mm),
        ny=_grid_count(config.ta.size_mm, config.ta.period_mm),
        normal_sign=+1,
    )
    fta = ApertureSpec(
        plane_z=-h,
        size_x=config.fta.size_mm,
        size_y=config.fta.size_mm,
        period=config.fta.period_mm,
        nx=_grid_count(config.fta.size_mm, config.fta.period_mm),
        ny=_grid_count(config.fta.size_mm, config.fta.period_mm),
        normal_sign=-1,
    )
    feeds = tuple(
        FeedPlacement(id=fc.id, position=Point3(fc.x_mm, fc.y_mm, 0.0))
        for fc in config.feeds
    )
    seen = set()
    for fd in feeds:
        if fd.id in seen:
            raise ValueError(f"duplicate feed id {fd.id!r}")
        seen.add(fd.id)
    return SystemLayout(f=f, h=h, F=F, d=d, ta=ta, fta=fta, feeds=feeds)


def mirror_feed(layout: SystemLayout, feed: FeedPlacement) -> Point3:
    """Mirror image of a feed about the TA plane.

    The distance from the mirrored point to any point on the FTA plane
    equals the length of the folded ray path feed -> TA grid -> FTA.
    """
    pos = feed.position
    if pos.z != layout.feed_plane_z:
        raise ValueError(
            f"feed {feed.id} is not on the feed plane "
            f"(z = {pos.z}, expected {layout.feed_plane_z})"
        )
    return mirror_point(pos, layout.f)


def mirror_point(p: Point3, plane_z: float) -> Point3:
    """Mirror an arbitrary point about the horizontal plane z = plane_z."""
    return Point3(p.x, p.y, 2.0 * plane_z - p.z)


def focal_from_taper(D: float, alpha_10db_deg: float) -> float:
    """Focal distance that puts the feed's -10 dB taper angle at the rim.

    f = D / (2 tan(alpha)), with D the lateral aperture size and alpha the
    half-angle at which the feed illumination has fallen 10 dB.
    """
    if D <= 0:
        raise ValueError(f"aperture size must be positive, got {D}")
    if not 0.0 < alpha_10db_deg < 90.0:
        raise ValueError(
            f"taper angle must lie strictly between 0 and 90 deg, got {alpha_10db_deg}"
        )
    return D / (2.0 * math.tan(math.radians(alpha_10db_deg)))


def taper_angle_from_focal(D: float, f: float) -> float:
    """Inverse of focal_from_taper: rim half-angle (deg) for a given focal."""
    if D <= 0 or f <= 0:
        raise ValueError("aperture size and focal distance must be positive")
    return math.degrees(math.atan(D / (2.0 * f)))
