"""Base-station geometry and per-trial mobile placement.

Base stations sit at fixed coordinates inside a square network extent and
are split into equal angular sectors.  Mobiles are re-placed every trial
with a uniform clustering rule: sequential uniform draws, rejecting any
candidate that lands within the exclusion radius of an already accepted
mobile.  Coordinates are in km.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle [xmin, xmax] x [ymin, ymax] in km."""

    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        if not (self.xmax >= self.xmin and self.ymax >= self.ymin):
            raise ValueError("degenerate rectangle: max corner below min corner")

    @property
    def width(self):
        return self.xmax - self.xmin

    @property
    def height(self):
        return self.ymax - self.ymin

    @property
    def area(self):
        return self.width * self.height

    @property
    def center(self):
        return np.array([(self.xmin + self.xmax) / 2.0,
                         (self.ymin + self.ymax) / 2.0])

    def contains(self, xy):
        """Boolean mask of points inside the rectangle (boundary included)."""
        xy = np.atleast_2d(np.asarray(xy, dtype=float))
        return ((xy[:, 0] >= self.xmin) & (xy[:, 0] <= self.xmax)
                & (xy[:, 1] >= self.ymin) & (xy[:, 1] <= self.ymax))

    def contains_rect(self, other: "Rect") -> bool:
        return (other.xmin >= self.xmin and other.xmax <= self.xmax
                and other.ymin >= self.ymin and other.ymax <= self.ymax)

    def scaled(self, factor):
        return Rect(self.xmin * factor, self.ymin * factor,
                    self.xmax * factor, self.ymax * factor)


def square(side, origin=(0.0, 0.0)):
    """Square Rect of the given side with its lower-left corner at origin."""
    ox, oy = origin
    return Rect(ox, oy, ox + side, oy + side)


def central_zone(extent: Rect, side):
    """Square of the given side centered inside the extent."""
    cx, cy = extent.center
    return Rect(cx - side / 2.0, cy - side / 2.0, cx + side / 2.0, cy + side / 2.0)


@dataclass(frozen=True, eq=False)
class Topology:
    """Static BS/sector geometry, immutable and shareable across trials.

    Sector l of BS c gets the global index c * sectors_per_bs + l; its
    mainlobe wedge starts at sector_offsets[c] + l * 2*pi / sectors_per_bs
    and spans 2*pi / sectors_per_bs, so the wedges of one BS tile [0, 2*pi).
    """

    bs_xy: np.ndarray          # (C, 2) positions in km
    extent: Rect
    reference_zone: Rect
    sectors_per_bs: int = 1
    sector_offsets: np.ndarray | None = None  # (C,) radians, default all zero

    def __post_init__(self):
        xy = np.asarray(self.bs_xy, dtype=float)
        if xy.ndim != 2 or xy.shape[1] != 2 or xy.shape[0] < 1:
            raise ValueError("bs_xy must be a (C, 2) array with C >= 1")
        if not np.all(np.isfinite(xy)):
            raise ValueError("BS coordinates must be finite")
        object.__setattr__(self, "bs_xy", xy)
        if len(np.unique(xy, axis=0)) != len(xy):
            raise ValueError("duplicate BS positions")
        if not np.all(self.extent.contains(xy)):
            raise ValueError("all BS positions must lie inside the extent")
        if not self.extent.contains_rect(self.reference_zone):
            raise ValueError("reference zone must lie inside the extent")
        if self.sectors_per_bs < 1:
            raise ValueError("sectors_per_bs must be >= 1")
        if self.sector_offsets is None:
            object.__setattr__(self, "sector_offsets", np.zeros(len(xy)))
        else:
            off = np.asarray(self.sector_offsets, dtype=float)
            if off.shape != (len(xy),):
                raise ValueError("sector_offsets must hold one angle per BS")
            object.__setattr__(self, "sector_offsets", np.mod(off, TWO_PI))

    @property
    def n_bs(self) -> int:
        return len(self.bs_xy)

    @property
    def n_sectors(self) -> int:
        return self.n_bs * self.sectors_per_bs

    def bs_of_sector(self, sector):
        return np.asarray(sector) // self.sectors_per_bs

    def sector_position(self, sector):
        """Sector receivers are collocated with their BS."""
        return self.bs_xy[self.bs_of_sector(sector)]

    def wedge_start(self, sector):
        """Start angle of a sector's mainlobe wedge, in [0, 2*pi)."""
        sector = np.asarray(sector)
        local = sector % self.sectors_per_bs
        return np.mod(self.sector_offsets[sector // self.sectors_per_bs]
                      + local * (TWO_PI / self.sectors_per_bs), TWO_PI)

    def covering_sector(self, bs_idx, xy):
        """Global index of the sector of bs_idx whose mainlobe covers xy.

        Exactly one sector per BS covers any point (wedges tile the circle).
        Vectorized: bs_idx and xy broadcast elementwise, xy shaped (..., 2).
        """
        bs_idx = np.asarray(bs_idx)
        xy = np.asarray(xy, dtype=float)
        rel = xy - self.bs_xy[bs_idx]
        theta = np.mod(np.arctan2(rel[..., 1], rel[..., 0]), TWO_PI)
        width = TWO_PI / self.sectors_per_bs
        local = np.floor(np.mod(theta - self.sector_offsets[bs_idx], TWO_PI)
                         / width).astype(int) % self.sectors_per_bs
        return bs_idx * self.sectors_per_bs + local


@dataclass(frozen=True, eq=False)
class MobilePlacement:
    """One trial's mobile positions under the uniform clustering rule."""

    xy: np.ndarray             # (M, 2) in km
    exclusion_radius: float    # km
    density: float             # mobiles per km^2

    @property
    def n_mobiles(self) -> int:
        return len(self.xy)


def load_topology(path, *, extent=None, reference_zone=None,
                  sectors_per_bs=1, sector_offsets=None):
    """Read BS coordinates from a text file: one "x y" pair (km) per line.

    Lines starting with '#' (or inline '#' tails) are comments.  The
    extent defaults to the bounding square of the coordinates and the
    reference zone defaults to the full extent.
    """
    coords = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'x y', got {raw!r}")
            try:
                coords.append((float(parts[0]), float(parts[1])))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric coordinate") from None
    if not coords:
        raise ValueError(f"{path}: no BS coordinates found")
    xy = np.asarray(coords, dtype=float)
    if not np.all(np.isfinite(xy)):
        raise ValueError(f"{path}: non-finite coordinate")
    if extent is None:
        extent = _bounding_square(xy)
    if reference_zone is None:
        reference_zone = extent
    return Topology(xy, extent, reference_zone, sectors_per_bs, sector_offsets)


def save_coordinates(path, xy, comment=None):
    """Write positions in the coordinate-file format (one "x y" per line)."""
    with open(path, "w") as fh:
        if comment:
            for line in str(comment).splitlines():
                fh.write(f"# {line}\n")
        for x, y in np.asarray(xy, dtype=float):
            fh.write(f"{float(x)!r} {float(y)!r}\n")


def _bounding_square(xy):
    lo = xy.min(axis=0)
    hi = xy.max(axis=0)
    side = float(max(hi[0] - lo[0], hi[1] - lo[1]))
    if side == 0.0:
        side = 1.0  # single BS: fall back to a unit square around it
    cx, cy = (lo + hi) / 2.0
    return Rect(cx - side / 2.0, cy - side / 2.0, cx + side / 2.0, cy + side / 2.0)


def generate_topology(kind, count, extent, rng=None, *, reference_zone=None,
                      sectors_per_bs=1, sector_offsets=None):
    """Place BSs synthetically: 'uniform-random' draws or a square 'grid'.

    extent may be a Rect or a square side in km.  The grid generator puts
    BSs at the cell centers of the smallest square lattice holding count
    points; uniform-random requires an rng and is deterministic given its
    seed.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if not isinstance(extent, Rect):
        extent = square(float(extent))
    if kind == "uniform-random":
        if rng is None:
            raise ValueError("uniform-random generation needs an rng")
        xy = np.column_stack([
            rng.uniform(extent.xmin, extent.xmax, size=count),
            rng.uniform(extent.ymin, extent.ymax, size=count),
        ])
    elif kind == "grid":
        side_n = int(np.ceil(np.sqrt(count)))
        if side_n * side_n < count:
            raise ValueError(f"cannot pack {count} BSs on a {side_n}x{side_n} grid")
        cx = extent.xmin + (np.arange(side_n) + 0.5) * extent.width / side_n
        cy = extent.ymin + (np.arange(side_n) + 0.5) * extent.height / side_n
        gx, gy = np.meshgrid(cx, cy)
        xy = np.column_stack([gx.ravel(), gy.ravel()])[:count]
    else:
        raise ValueError(f"unknown topology generator {kind!r}")
    return Topology(xy, extent, reference_zone if reference_zone is not None else extent,
                    sectors_per_bs, sector_offsets)


def scale_topology(t: Topology, factor) -> Topology:
    """Scale every coordinate by factor, preserving the relative layout."""
    factor = float(factor)
    if factor <= 0:
        raise ValueError("scale factor must be positive")
    return replace(t, bs_xy=t.bs_xy * factor,
                   extent=t.extent.scaled(factor),
                   reference_zone=t.reference_zone.scaled(factor))


def place_mobiles(t: Topology, density, r_ex, rng: np.random.Generator,
                  max_tries=10_000) -> MobilePlacement:
    """Place round(density * area) mobiles by uniform clustering.

    Candidates are drawn uniformly over the extent; a candidate within
    r_ex of an accepted mobile is rejected and redrawn.  Fails after
    max_tries consecutive rejections for a single mobile.
    """
    if density <= 0:
        raise ValueError("density must be positive")
    if r_ex < 0:
        raise ValueError("exclusion radius must be non-negative")
    ext = t.extent
    m = int(round(density * ext.area))
    if m < 1:
        raise ValueError("density times extent area rounds to zero mobiles")
    cand = np.column_stack([rng.uniform(ext.xmin, ext.xmax, size=m),
                            rng.uniform(ext.ymin, ext.ymax, size=m)])
    if r_ex == 0.0:
        return MobilePlacement(cand, 0.0, density)

    rejected = _exclusion_conflicts(cand, r_ex)
    if rejected:
        keep = np.ones(m, dtype=bool)
        keep[list(rejected)] = False
        acc = cand[keep]
    else:
        acc = cand
    missing = m - len(acc)
    while missing > 0:
        tries = 0
        while True:
            p = np.array([rng.uniform(ext.xmin, ext.xmax),
                          rng.uniform(ext.ymin, ext.ymax)])
            if len(acc) == 0 or np.min(np.sum((acc - p) ** 2, axis=1)) >= r_ex * r_ex:
                acc = np.vstack([acc, p])
                missing -= 1
                break
            tries += 1
            if tries >= max_tries:
                raise RuntimeError(
                    f"uniform clustering failed: {max_tries} rejections while "
                    f"packing {m} mobiles with r_ex={r_ex} km into "
                    f"{ext.area:g} km^2")
    return MobilePlacement(acc, float(r_ex), density)


def _exclusion_conflicts(cand, r_ex):
    """Indices of candidates rejected under sequential exclusion checking.

    A candidate conflicts only with earlier candidates that were accepted.
    Pairs closer than r_ex are found with a sorted-x sweep, so the common
    no-conflict case costs O(M log M).
    """
    m = len(cand)
    order = np.argsort(cand[:, 0], kind="stable")
    xs = cand[order]
    pairs = []
    for off in range(1, m):
        dx = xs[off:, 0] - xs[:-off, 0]
        near = dx < r_ex
        if not near.any():
            break
        rows = np.flatnonzero(near)
        d2 = np.sum((xs[rows + off] - xs[rows]) ** 2, axis=1)
        hit = rows[d2 < r_ex * r_ex]
        for r in hit:
            a, b = order[r], order[r + off]
            pairs.append((min(a, b), max(a, b)))
    rejected = set()
    for i, j in sorted(pairs, key=lambda p: p[1]):
        if i not in rejected and j not in rejected:
            rejected.add(j)
    return rejected


def distance_matrix(a, b):
    """Pairwise Euclidean distances between two point sets, (len(a), len(b)).

    Uses the expanded square so the cross term is a single matrix product;
    with planar points the reduction has two terms, so the result does not
    depend on BLAS threading.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d2 = (np.sum(a * a, axis=1)[:, None] + np.sum(b * b, axis=1)[None, :]
          - 2.0 * (a @ b.T))
    np.maximum(d2, 0.0, out=d2)
    return np.sqrt(d2)


def pick_reference_mobile(placement: MobilePlacement, t: Topology,
                          rng: np.random.Generator, eligible=None):
    """Uniformly pick a mobile inside the reference zone, or None if empty.

    eligible optionally restricts the draw (e.g. to served mobiles).
    """
    mask = t.reference_zone.contains(placement.xy)
    if eligible is not None:
        mask = mask & np.asarray(eligible, dtype=bool)
    idx = np.flatnonzero(mask)
    if len(idx) == 0:
        return None
    return int(idx[rng.integers(len(idx))])
