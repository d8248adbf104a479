"""Jones-calculus algebra for the polarization-routed antenna stack.

The stack contains two kinds of ideal components: wire-grid polarizers,
which pass the field component perpendicular to the wires and reflect the
parallel one, and 90-degree polarization rotators.  Three drive states of
the feed line select which paths light up:

* x-polarized drive -> the forward (transmit) path only,
* y-polarized drive -> the backward (folded) path only,
* 45-degree slant drive -> both paths at 1/sqrt(2) amplitude each.

Every path ends in a y-polarized output: the forward path rotates once,
the backward path reflects off the upper grid and rotates twice in the
lower double-rotator stack.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

SQRT_HALF = math.sqrt(0.5)


@dataclass(frozen=True)
class JonesVector:
    """Complex transverse field pair (ex, ey) in normalized units."""

    ex: complex
    ey: complex

    def __post_init__(self):
        if not (cmath.isfinite(self.ex) and cmath.isfinite(self.ey)):
            raise ValueError(f"non-finite Jones components in {self!r}")

    @property
    def norm_sq(self) -> float:
        return abs(self.ex) ** 2 + abs(self.ey) ** 2

    @property
    def norm(self) -> float:
        return math.sqrt(self.norm_sq)

    def scaled(self, c: complex) -> "JonesVector":
        return JonesVector(self.ex * c, self.ey * c)


class PolarizationState(Enum):
    """Linear drive states of the feed line."""

    X = "x"
    Y = "y"
    SLANT45 = "slant45"

    @property
    def jones(self) -> JonesVector:
        return _STATE_JONES[self]


_STATE_JONES = {
    PolarizationState.X: JonesVector(1.0, 0.0),
    PolarizationState.Y: JonesVector(0.0, 1.0),
    PolarizationState.SLANT45: JonesVector(SQRT_HALF, SQRT_HALF),
}


class GridOrientation(Enum):
    """Wire direction of an ideal polarizing grid."""

    WIRES_ALONG_X = "x"
    WIRES_ALONG_Y = "y"


def grid_transmit(v: JonesVector, g: GridOrientation) -> JonesVector:
    """Field passed by an ideal grid: the component parallel to the wires
    is removed, the perpendicular one is unchanged."""
    if g is GridOrientation.WIRES_ALONG_X:
        return JonesVector(0.0, v.ey)
    return JonesVector(v.ex, 0.0)


def grid_reflect(
    v: JonesVector, g: GridOrientation, reflection_phase_deg: float = 180.0
) -> JonesVector:
    """Field reflected by an ideal grid: the component parallel to the wires,
    carrying the grid's reflection phase (180 deg for a perfect conductor).

    The phase is configurable because it only shifts the folded path by a
    global constant, which the phase synthesis absorbs.
    """
    if reflection_phase_deg % 360.0 == 180.0:
        r = -1.0  # exact perfect-conductor coefficient
    else:
        r = cmath.exp(1j * math.radians(reflection_phase_deg))
    if g is GridOrientation.WIRES_ALONG_X:
        return JonesVector(v.ex * r, 0.0)
    return JonesVector(0.0, v.ey * r)


def rotate_pol_90(v: JonesVector) -> JonesVector:
    """One pass through a 90-degree polarization rotator: (ex, ey) -> (-ey, ex).

    The handedness is a fixed convention; radiated power and pointing do
    not depend on it.
    """
    return JonesVector(-v.ey, v.ex)


@dataclass(frozen=True)
class RoutingPlan:
    """Which hemispheres a drive state lights up, and at what amplitude."""

    state: PolarizationState
    forward_active: bool
    backward_active: bool
    forward_amplitude: float
    backward_amplitude: float
    output_polarization: PolarizationState

    def __post_init__(self):
        total = self.forward_amplitude**2 + self.backward_amplitude**2
        if total > 1.0 + 1e-12:
            raise ValueError(f"routing plan is not passive: power {total}")


def route(state: PolarizationState) -> RoutingPlan:
    """Routing outcome for a drive state.

    X drives the forward path at full amplitude, Y the backward path,
    and the 45-degree slant splits equally (1/sqrt(2) field each way).
    The output is y-polarized in every state.
    """
    if state is PolarizationState.X:
        fwd, back = 1.0, 0.0
    elif state is PolarizationState.Y:
        fwd, back = 0.0, 1.0
    else:
        fwd, back = SQRT_HALF, SQRT_HALF
    return RoutingPlan(
        state=state,
        forward_active=fwd > 0.0,
        backward_active=back > 0.0,
        forward_amplitude=fwd,
        backward_amplitude=back,
        output_polarization=PolarizationState.Y,
    )


def forward_path_jones(v: JonesVector) -> JonesVector:
    """Composed forward-path operator: upper grid (wires along y), then one
    rotation in the upper conversion stack."""
    return rotate_pol_90(grid_transmit(v, GridOrientation.WIRES_ALONG_Y))


def backward_path_jones(
    v: JonesVector, reflection_phase_deg: float = 180.0
) -> JonesVector:
    """Composed backward-path operator: reflection off the upper grid
    (wires along y), transmission through the lower grid (wires along x),
    then two rotations in the lower double-conversion stack."""
    reflected = grid_reflect(v, GridOrientation.WIRES_ALONG_Y, reflection_phase_deg)
    passed = grid_transmit(reflected, GridOrientation.WIRES_ALONG_X)
    return rotate_pol_90(rotate_pol_90(passed))
