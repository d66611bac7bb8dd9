"""Two-level antenna gain patterns for BS sectors and mobile beams.

Both patterns are flat-topped: one constant gain over the mainlobe and a
lower constant gain over sidelobes and backlobes.  A sector mainlobe is an
angular wedge of width 2*pi/zeta at the BS; a mobile's beam has width
Theta and always points at its serving BS.  Average gains A_s and A_m
scale the absolute levels but cancel in every interference-to-signal
ratio, so they default to 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class BeamParams:
    """Antenna characteristics of the sector and mobile beams.

    zeta  : sectors per BS
    b     : sector sidelobe level relative to an isotropic pattern
    theta : mobile mainlobe beamwidth in radians
    a     : mobile sidelobe level
    a_s, a_m : average gains of the sector and mobile patterns
    """

    zeta: int = 24
    b: float = 0.01
    theta: float = 0.1 * np.pi
    a: float = 0.1
    a_s: float = 1.0
    a_m: float = 1.0

    def __post_init__(self):
        if self.zeta < 1:
            raise ValueError("zeta must be >= 1")
        if not (0 <= self.b < 1):
            raise ValueError("sector sidelobe level b must be in [0, 1)")
        if not (0 <= self.a < 1):
            raise ValueError("mobile sidelobe level a must be in [0, 1)")
        if not (0 < self.theta <= TWO_PI):
            raise ValueError("mobile beamwidth theta must be in (0, 2*pi]")
        if self.a_s <= 0 or self.a_m <= 0:
            raise ValueError("average gains must be positive")

    # Levels relative to the average gain.  The mainlobe covers a fraction
    # 1/zeta (resp. theta/(2*pi)) of the circle, so each pattern averages
    # to exactly its average gain.
    @property
    def sector_mainlobe_level(self) -> float:
        return self.b + self.zeta * (1.0 - self.b)

    @property
    def sector_sidelobe_level(self) -> float:
        return self.b

    @property
    def mobile_mainlobe_level(self) -> float:
        return self.a + TWO_PI * (1.0 - self.a) / self.theta

    @property
    def mobile_sidelobe_level(self) -> float:
        return self.a


def in_sector_wedge(theta, wedge_start, zeta):
    """True where arrival angle theta falls in [wedge_start, wedge_start + 2*pi/zeta).

    Membership is computed modulo 2*pi; the lower edge is inclusive and the
    upper edge exclusive so that the zeta wedges of one BS tile the circle.
    """
    rel = np.mod(np.asarray(theta, dtype=float) - wedge_start, TWO_PI)
    return rel < TWO_PI / zeta


def sector_gain(theta, wedge_start, bp: BeamParams):
    """Sector-beam gain toward arrival angle theta at the BS."""
    inside = in_sector_wedge(theta, wedge_start, bp.zeta)
    out = bp.a_s * np.where(inside, bp.sector_mainlobe_level,
                            bp.sector_sidelobe_level)
    return float(out) if np.ndim(theta) == 0 else out


def mobile_mainlobe_mask(mobile_xy, target_xy, serving_xy, theta):
    """True where the mobile's beam (aimed at its serving BS) covers the target.

    The mobile faces the target when the angle between the directions to
    the target and to the serving BS is strictly less than theta/2.
    Vectorized over leading dimensions; positions are (..., 2).
    """
    u = np.asarray(target_xy, dtype=float) - mobile_xy
    v = np.asarray(serving_xy, dtype=float) - mobile_xy
    nu = np.linalg.norm(u, axis=-1)
    nv = np.linalg.norm(v, axis=-1)
    if np.any(nu == 0) or np.any(nv == 0):
        raise ValueError("mobile collocated with a sector receiver")
    cosang = np.sum(u * v, axis=-1) / (nu * nv)
    return cosang > np.cos(theta / 2.0)


def mobile_gain_toward(mobile_xy, target_xy, serving_xy, bp: BeamParams):
    """Mobile-beam gain in the direction of the target sector receiver."""
    main = mobile_mainlobe_mask(mobile_xy, target_xy, serving_xy, bp.theta)
    out = bp.a_m * np.where(main, bp.mobile_mainlobe_level,
                            bp.mobile_sidelobe_level)
    return float(out) if out.ndim == 0 else out


def max_pair_gain(bp: BeamParams) -> float:
    """Maximum combined gain of an aligned sector/mobile antenna pair."""
    return (bp.a_s * bp.a_m
            * bp.sector_mainlobe_level * bp.mobile_mainlobe_level)
