"""Sets in R^d: intervals, axis-box unions and implicit regions.

Implicit regions are described by a signed-distance oracle (positive inside).
On top of that oracle we build dyadic Whitney decompositions, shell censuses,
grid covers of the boundary, Minkowski-content profiles, and the surface
coefficient of a pair of axis-box unions.
"""
from __future__ import annotations

import io
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

SdfOracle = Callable[[np.ndarray], np.ndarray]


class GeometryError(ValueError):
    """Base class for invalid geometric input."""


class DimensionMismatchError(GeometryError):
    pass


class EmptyRegionError(GeometryError):
    pass


class DegenerateBoxError(GeometryError):
    pass


class OracleError(ArithmeticError):
    """The signed-distance oracle returned non-finite values."""


# ---------------------------------------------------------------------------
# intervals and boxes


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (self.lo <= self.hi):
            raise GeometryError(f"interval needs lo <= hi, got [{self.lo}, {self.hi}]")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def intersect(self, other: "Interval") -> float:
        """Length of the intersection with ``other``."""
        return max(0.0, min(self.hi, other.hi) - max(self.lo, other.lo))

    def shifted(self, t: float) -> "Interval":
        return Interval(self.lo + t, self.hi + t)


@dataclass(frozen=True)
class AxisBox:
    sides: tuple[Interval, ...]

    def __post_init__(self):
        sides = tuple(s if isinstance(s, Interval) else Interval(*s) for s in self.sides)
        object.__setattr__(self, "sides", sides)
        if not sides:
            raise GeometryError("a box needs at least one side")
        for s in sides:
            if s.length <= 0:
                raise DegenerateBoxError(f"zero-length side {s}")

    @classmethod
    def from_bounds(cls, lo: Sequence[float], hi: Sequence[float]) -> "AxisBox":
        return cls(tuple(Interval(float(a), float(b)) for a, b in zip(lo, hi)))

    @classmethod
    def cube(cls, lo: float, hi: float, d: int) -> "AxisBox":
        return cls(tuple(Interval(lo, hi) for _ in range(d)))

    @property
    def dim(self) -> int:
        return len(self.sides)

    @property
    def lo(self) -> np.ndarray:
        return np.array([s.lo for s in self.sides])

    @property
    def hi(self) -> np.ndarray:
        return np.array([s.hi for s in self.sides])

    @property
    def volume(self) -> float:
        return math.prod(s.length for s in self.sides)

    def overlaps(self, other: "AxisBox") -> bool:
        """True when the interiors intersect."""
        return all(min(a.hi, b.hi) > max(a.lo, b.lo) for a, b in zip(self.sides, other.sides))

    def subtract(self, other: "AxisBox") -> list["AxisBox"]:
        """Closure of ``self`` minus ``other`` as boxes with disjoint interiors."""
        if not self.overlaps(other):
            return [self]
        pieces = []
        core = list(self.sides)
        for k in range(self.dim):
            a, b = core[k], other.sides[k]
            if b.lo > a.lo:
                left = core.copy()
                left[k] = Interval(a.lo, b.lo)
                pieces.append(AxisBox(tuple(left)))
            if b.hi < a.hi:
                right = core.copy()
                right[k] = Interval(b.hi, a.hi)
                pieces.append(AxisBox(tuple(right)))
            core[k] = Interval(max(a.lo, b.lo), min(a.hi, b.hi))
        return pieces

    def signed_distance(self, x: np.ndarray) -> np.ndarray:
        """Exact signed distance (positive inside) for points ``x`` of shape (n, d)."""
        lo, hi = self.lo, self.hi
        inside_gap = np.minimum(x - lo, hi - x)
        outside = np.maximum(np.maximum(lo - x, x - hi), 0.0)
        out_dist = np.sqrt(np.sum(outside**2, axis=1))
        in_dist = np.min(inside_gap, axis=1)
        return np.where(out_dist > 0, -out_dist, in_dist)


@dataclass(frozen=True)
class BoxUnion:
    boxes: tuple[AxisBox, ...]

    def __post_init__(self):
        object.__setattr__(self, "boxes", tuple(self.boxes))
        dims = {b.dim for b in self.boxes}
        if len(dims) > 1:
            raise DimensionMismatchError(f"boxes of mixed dimensions {sorted(dims)}")

    @property
    def dim(self) -> int:
        if not self.boxes:
            raise EmptyRegionError("empty box union has no dimension")
        return self.boxes[0].dim

    @property
    def volume(self) -> float:
        return sum(b.volume for b in self.boxes)

    def __len__(self) -> int:
        return len(self.boxes)

    def bounding_box(self) -> AxisBox:
        if not self.boxes:
            raise EmptyRegionError("empty box union")
        lo = np.min([b.lo for b in self.boxes], axis=0)
        hi = np.max([b.hi for b in self.boxes], axis=0)
        return AxisBox.from_bounds(lo, hi)

    def contains(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        out = np.zeros(len(x), dtype=bool)
        for b in self.boxes:
            out |= np.all((x >= b.lo) & (x <= b.hi), axis=1)
        return out

    def scaled(self, c: float) -> "BoxUnion":
        return BoxUnion(tuple(AxisBox.from_bounds(c * b.lo, c * b.hi) for b in self.boxes))


def interval_union(intervals: Iterable[tuple[float, float]]) -> BoxUnion:
    """One-dimensional box union from ``(lo, hi)`` pairs."""
    return BoxUnion(tuple(AxisBox((Interval(a, b),)) for a, b in intervals))


def normalize_box_union(boxes: Sequence[AxisBox] | BoxUnion) -> BoxUnion:
    """Rewrite a collection of boxes as a union with pairwise-disjoint interiors."""
    if isinstance(boxes, BoxUnion):
        boxes = boxes.boxes
    boxes = list(boxes)
    if len({b.dim for b in boxes}) > 1:
        raise DimensionMismatchError("all boxes must share one dimension")
    out: list[AxisBox] = []
    for box in boxes:
        pieces = [box]
        for kept in out:
            pieces = [p for piece in pieces for p in piece.subtract(kept)]
            if not pieces:
                break
        out.extend(pieces)
    return BoxUnion(tuple(out))


def parse_box_union(text: str) -> BoxUnion:
    """Parse one box per line, ``lo1,hi1;lo2,hi2;...``; blank lines and ``#`` comments ignored."""
    boxes = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        sides = []
        for part in line.split(";"):
            lo, hi = (float(v) for v in part.split(","))
            sides.append(Interval(lo, hi))
        boxes.append(AxisBox(tuple(sides)))
    return BoxUnion(tuple(boxes))


def format_box_union(u: BoxUnion) -> str:
    lines = [";".join(f"{s.lo!r},{s.hi!r}" for s in b.sides) for b in u.boxes]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# boundary faces of a box union


@dataclass(frozen=True)
class Faces:
    """Boundary faces of a box union, one array block per normal direction.

    ``lo[k]``/``hi[k]`` have shape (m_k, d) and describe faces with normal
    ``+-e_k`` as degenerate boxes (``lo[:, k] == hi[:, k]``).
    """

    lo: tuple[np.ndarray, ...]
    hi: tuple[np.ndarray, ...]

    def area(self, k: int) -> float:
        ext = np.delete(self.hi[k] - self.lo[k], k, axis=1)
        return float(np.sum(np.prod(ext, axis=1)))

    def stacked(self) -> tuple[np.ndarray, np.ndarray]:
        return np.concatenate(self.lo), np.concatenate(self.hi)


def boundary_faces(u: BoxUnion) -> Faces:
    """Faces of the union's boundary; interfaces shared by two boxes are dropped."""
    d = u.dim
    edges = [np.unique(np.concatenate([[b.sides[k].lo, b.sides[k].hi] for b in u.boxes])) for k in range(d)]
    mids = [0.5 * (e[1:] + e[:-1]) for e in edges]
    grid = np.stack(np.meshgrid(*mids, indexing="ij"), axis=-1)
    member = u.contains(grid.reshape(-1, d)).reshape(grid.shape[:-1])
    los, his = [], []
    for k in range(d):
        pad = [(0, 0)] * d
        pad[k] = (1, 1)
        m = np.pad(member, pad)
        change = np.diff(m.astype(np.int8), axis=k) != 0
        # change has shape with edges[k].size along axis k: face at edges[k][i]
        idx = np.argwhere(change)
        lo = np.empty((len(idx), d))
        hi = np.empty((len(idx), d))
        for j in range(d):
            if j == k:
                lo[:, j] = hi[:, j] = edges[k][idx[:, j]]
            else:
                lo[:, j] = edges[j][idx[:, j]]
                hi[:, j] = edges[j][idx[:, j] + 1]
        los.append(lo)
        his.append(hi)
    return Faces(tuple(los), tuple(his))


def _box_distance(x: np.ndarray, lo: np.ndarray, hi: np.ndarray, chunk: int = 4096) -> np.ndarray:
    """min over boxes [lo_j, hi_j] of the Euclidean distance from each row of x."""
    out = np.empty(len(x))
    for s in range(0, len(x), chunk):
        xs = x[s : s + chunk, None, :]
        gap = np.maximum(np.maximum(lo[None] - xs, xs - hi[None]), 0.0)
        out[s : s + chunk] = np.sqrt(np.min(np.sum(gap**2, axis=2), axis=1))
    return out


# ---------------------------------------------------------------------------
# implicit regions


@dataclass(frozen=True)
class Region:
    """Implicit set ``{sdf > 0}`` inside ``bbox``.

    ``sdf`` maps an (n, d) array to n values: the distance to the complement
    when positive (or a lower bound of it), minus the distance to the set when
    negative. It must be 1-Lipschitz; this is spot-checked at construction.
    """

    dim: int
    bbox: AxisBox
    sdf: SdfOracle
    name: str = "region"
    lipschitz_tol: float = 1e-9

    def __post_init__(self):
        if self.bbox.dim != self.dim:
            raise DimensionMismatchError("bounding box dimension differs from region dimension")
        rng = np.random.default_rng(12345)
        lo, hi = self.bbox.lo, self.bbox.hi
        span = hi - lo
        a = lo - 0.25 * span + 1.5 * span * rng.random((256, self.dim))
        b = a + 0.2 * span * rng.standard_normal((256, self.dim))
        fa, fb = self.evaluate(a), self.evaluate(b)
        if np.any(np.abs(fa - fb) > np.linalg.norm(a - b, axis=1) + self.lipschitz_tol):
            raise GeometryError(f"sdf of {self.name} is not 1-Lipschitz")
        probe = lo + span * rng.random((4096, self.dim))
        probe = np.vstack([probe, 0.5 * (lo + hi)[None]])
        if not np.any(self.evaluate(probe) > 0):
            raise EmptyRegionError(f"{self.name}: sdf is never positive inside the bounding box")

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(-1, self.dim)
        v = np.asarray(self.sdf(x), dtype=float).reshape(-1)
        if not np.all(np.isfinite(v)):
            raise OracleError(f"{self.name}: non-finite sdf values")
        return v

    @property
    def diameter(self) -> float:
        return float(np.linalg.norm(self.bbox.hi - self.bbox.lo))


def box_union_sdf(u: BoxUnion, exact: bool = True) -> Region:
    """Signed-distance region of a box union.

    With ``exact=False`` the oracle is the maximum of the per-box signed
    distances: exact outside, a lower bound inside (it vanishes on internal
    interfaces). The default computes the exact distance to the complement
    from the union's boundary faces.
    """
    if not u.boxes:
        raise EmptyRegionError("empty box union")
    boxes = u.boxes

    def per_box(x):
        return np.max([b.signed_distance(x) for b in boxes], axis=0)

    if not exact:
        return Region(u.dim, u.bounding_box(), per_box, name="box-union(lower bound)")

    flo, fhi = boundary_faces(normalize_box_union(u)).stacked()

    def sdf(x):
        v = per_box(x)
        # v == 0 also on internal interfaces, where the face distance is positive
        inside = v >= 0
        if np.any(inside):
            v = v.copy()
            v[inside] = _box_distance(x[inside], flo, fhi)
        return v

    return Region(u.dim, u.bounding_box(), sdf, name="box-union")


def ball_region(radius: float = 1.0, d: int = 2, center: Sequence[float] | None = None) -> Region:
    c = np.zeros(d) if center is None else np.asarray(center, dtype=float)
    bbox = AxisBox.from_bounds(c - radius, c + radius)
    return Region(d, bbox, lambda x: radius - np.linalg.norm(x - c, axis=1), name=f"ball(r={radius})")


def l_shape() -> BoxUnion:
    """The L-shaped union [0,2]x[0,1] u [0,1]x[1,2]."""
    return BoxUnion((AxisBox.from_bounds([0, 0], [2, 1]), AxisBox.from_bounds([0, 1], [1, 2])))


# ---------------------------------------------------------------------------
# Whitney decomposition


@dataclass
class WhitneyDecomposition:
    """Dyadic cubes ``2^-l (k + [0,1]^d)``.

    Interior cubes carry the certified lower bound on ``dist(Q, A^c)``;
    boundary cells all sit at the cutoff level ``D``.
    """

    dim: int
    cutoff: int
    coarsest: int
    levels: np.ndarray
    index: np.ndarray
    certified: np.ndarray
    boundary_index: np.ndarray
    boundary_certified: np.ndarray = field(default_factory=lambda: np.empty(0))

    @property
    def sides(self) -> np.ndarray:
        return np.ldexp(1.0, -self.levels)

    @property
    def centers(self) -> np.ndarray:
        return (self.index + 0.5) * self.sides[:, None]

    @property
    def diameters(self) -> np.ndarray:
        return self.sides * math.sqrt(self.dim)

    @property
    def boundary_side(self) -> float:
        return math.ldexp(1.0, -self.cutoff)

    @property
    def boundary_centers(self) -> np.ndarray:
        return (self.boundary_index + 0.5) * self.boundary_side

    def __len__(self) -> int:
        return len(self.levels)

    def interior_volume(self) -> float:
        return float(np.sum(self.sides**self.dim))

    def locate(self, x: np.ndarray) -> np.ndarray:
        """For each point: 1 if in an interior cube, 2 if only in a boundary cell, 0 otherwise.

        Points on a shared face count for whichever cube claims them.
        """
        x = np.atleast_2d(x)
        found = np.zeros(len(x), dtype=np.int8)
        for lvl in np.unique(self.levels):
            keys = {tuple(k) for k in self.index[self.levels == lvl]}
            s = math.ldexp(1.0, -int(lvl))
            for offset in itertools.product((0.0, -1e-12), repeat=self.dim):
                cand = np.floor((x + np.array(offset)) / s).astype(np.int64)
                hit = np.fromiter((tuple(c) in keys for c in cand), bool, len(x))
                found[(found == 0) & hit] = 1
        keys = {tuple(k) for k in self.boundary_index}
        s = self.boundary_side
        for offset in itertools.product((0.0, -1e-12), repeat=self.dim):
            cand = np.floor((x + np.array(offset)) / s).astype(np.int64)
            hit = np.fromiter((tuple(c) in keys for c in cand), bool, len(x))
            found[(found == 0) & hit] = 2
        return found

    def to_csv(self, include_boundary: bool = False) -> str:
        """Rows ``level,center_1..center_d,side,certified_dist``."""
        buf = io.StringIO()
        buf.write(",".join(["level"] + [f"center_{i + 1}" for i in range(self.dim)] + ["side", "certified_dist"]) + "\n")
        rows = zip(self.levels, self.centers, self.sides, self.certified)
        if include_boundary:
            bl = np.full(len(self.boundary_index), self.cutoff)
            bs = np.full(len(self.boundary_index), self.boundary_side)
            rows = itertools.chain(rows, zip(bl, self.boundary_centers, bs, self.boundary_certified))
        for lvl, c, s, cert in rows:
            buf.write(",".join([str(int(lvl))] + [repr(float(v)) for v in c] + [repr(float(s)), repr(float(cert))]) + "\n")
        return buf.getvalue()


def coarsest_level(bbox: AxisBox) -> int:
    """Largest level whose dyadic side still covers the longest bbox side."""
    return -math.ceil(math.log2(float(np.max(bbox.hi - bbox.lo))))


def whitney_decompose(region: Region, D: int, separation: float = 2.0) -> WhitneyDecomposition:
    """Top-down dyadic Whitney decomposition of ``{sdf > 0}`` cut off at level ``D``.

    A cube at level ``l < D`` is kept as interior when
    ``sdf(center) - radius >= separation * diam``; cubes with
    ``sdf(center) + radius <= 0`` are dropped; whatever survives to level
    ``D`` becomes a boundary cell.
    """
    d = region.dim
    l0 = coarsest_level(region.bbox)
    if D < l0:
        raise GeometryError(f"cutoff D={D} is coarser than the starting level {l0}")
    s = math.ldexp(1.0, -l0)
    lo = np.floor(region.bbox.lo / s).astype(np.int64)
    hi = np.ceil(region.bbox.hi / s).astype(np.int64)
    frontier = np.array(list(itertools.product(*[range(a, b) for a, b in zip(lo, hi)])), dtype=np.int64).reshape(-1, d)
    children = np.array(list(itertools.product((0, 1), repeat=d)), dtype=np.int64)
    sqrt_d = math.sqrt(d)

    levels, index, cert = [], [], []
    boundary, boundary_cert = np.empty((0, d), dtype=np.int64), np.empty(0)
    level = l0
    while len(frontier):
        side = math.ldexp(1.0, -level)
        radius = 0.5 * side * sqrt_d
        diam = side * sqrt_d
        val = region.evaluate((frontier + 0.5) * side)
        low = val - radius
        alive = val + radius > 0
        if level < D:
            emit = alive & (low >= separation * diam)
            if np.any(emit):
                levels.append(np.full(int(emit.sum()), level))
                index.append(frontier[emit])
                cert.append(low[emit])
            rest = frontier[alive & ~emit]
            frontier = (2 * rest[:, None, :] + children[None]).reshape(-1, d)
            level += 1
        else:
            boundary = frontier[alive]
            boundary_cert = low[alive]
            break

    cat = lambda parts, shape, dt: np.concatenate(parts) if parts else np.empty(shape, dtype=dt)
    return WhitneyDecomposition(
        dim=d,
        cutoff=D,
        coarsest=l0,
        levels=cat(levels, (0,), np.int64),
        index=cat(index, (0, d), np.int64),
        certified=cat(cert, (0,), float),
        boundary_index=boundary,
        boundary_certified=boundary_cert,
    )


def whitney_disjoint(w: WhitneyDecomposition) -> bool:
    """True when no interior cube repeats or contains another (dyadic ancestry test)."""
    seen = set()
    for lvl, k in zip(w.levels, w.index):
        key = (int(lvl), tuple(int(v) for v in k))
        if key in seen:
            return False
        seen.add(key)
    for lvl, k in seen:
        anc = np.array(k)
        for up in range(lvl - 1, w.coarsest - 1, -1):
            anc = anc // 2
            if (up, tuple(int(v) for v in anc)) in seen:
                return False
    return True


def complement_band(region: Region, spacing: float, width: float) -> np.ndarray:
    """Cell centers of a dyadic grid (side about ``spacing``) with ``-width < sdf <= 0``.

    Cells are refined coarse to fine, dropping any whose center is farther
    than its half-diagonal from the band (the sdf is 1-Lipschitz).
    """
    d = region.dim
    l0 = coarsest_level(region.bbox)
    side = math.ldexp(1.0, -l0)
    target = max(l0, math.ceil(-math.log2(spacing)))
    lo = np.floor((region.bbox.lo - width) / side).astype(np.int64) - 1
    hi = np.ceil((region.bbox.hi + width) / side).astype(np.int64) + 1
    cells = np.array(list(itertools.product(*[range(a, b) for a, b in zip(lo, hi)])), dtype=np.int64).reshape(-1, d)
    children = np.array(list(itertools.product((0, 1), repeat=d)), dtype=np.int64)
    level = l0
    while True:
        side = math.ldexp(1.0, -level)
        centers = (cells + 0.5) * side
        v = region.evaluate(centers)
        if level == target:
            return centers[(v <= 0) & (v > -width)]
        r = 0.5 * side * math.sqrt(d)
        keep = (v <= r) & (v > -width - r)
        cells = (2 * cells[keep][:, None, :] + children[None]).reshape(-1, d)
        level += 1


def complement_distance(region: Region, w: WhitneyDecomposition, spacing: float) -> np.ndarray:
    """Brute-force ``dist(Q, A^c)`` for each interior cube of ``w``.

    The complement is sampled by the centers of a fine grid near the
    boundary (see :func:`complement_band`); the result overestimates the true
    distance by at most ``spacing * sqrt(d)``.
    """
    from scipy.spatial import cKDTree

    d = region.dim
    cloud = complement_band(region, spacing, 2 * spacing * math.sqrt(d))
    tree = cKDTree(cloud)
    centers, half = w.centers, 0.5 * w.sides
    near, _ = tree.query(centers)
    balls = tree.query_ball_point(centers, near + half * math.sqrt(d) + 1e-12)
    out = np.empty(len(w))
    for i, idx in enumerate(balls):
        gap = np.maximum(np.abs(cloud[idx] - centers[i]) - half[i], 0.0)
        out[i] = float(np.min(np.linalg.norm(gap, axis=1)))
    return out


@dataclass(frozen=True)
class ShellCensus:
    dim: int
    counts: dict[int, int]
    constants: dict[int, float]

    def max_constant(self, lo: int, hi: int) -> float:
        return max((v for l, v in self.constants.items() if lo <= l <= hi), default=0.0)


def shell_census(w: WhitneyDecomposition) -> ShellCensus:
    """Count interior cubes per level and the fitted constant ``count * 2^{-(d-1) l}``."""
    counts = {l: 0 for l in range(w.coarsest, w.cutoff + 1)}
    lv, ct = np.unique(w.levels, return_counts=True)
    for l, c in zip(lv, ct):
        counts[int(l)] = int(c)
    constants = {l: c * 2.0 ** (-(w.dim - 1) * l) for l, c in counts.items()}
    return ShellCensus(w.dim, counts, constants)


def _grid_chunks(lo: np.ndarray, hi: np.ndarray, h: float, offset: float, max_points: int = 1 << 21):
    """Yield (n, d) arrays of grid points ``h*(k + offset)`` covering [lo, hi]."""
    d = len(lo)
    ks = [np.arange(math.floor(a / h), math.ceil(b / h) + 1) for a, b in zip(lo, hi)]
    axes = [(k + offset) * h for k in ks]
    rest = int(np.prod([len(a) for a in axes[1:]])) if d > 1 else 1
    step = max(1, max_points // max(rest, 1))
    for s in range(0, len(axes[0]), step):
        sub = [axes[0][s : s + step]] + axes[1:]
        yield np.stack(np.meshgrid(*sub, indexing="ij"), axis=-1).reshape(-1, d)


def boundary_cover(region: Region, r: float) -> int:
    """Number of grid cells ``z + [0, r]^d``, ``z`` in ``r Z^d``, that may meet ``dA + B_r``.

    Uses the conservative test ``|sdf(center)| < r (1 + sqrt(d))``.
    """
    if not (r > 0):
        raise GeometryError("cover radius must be positive")
    d = region.dim
    slack = r * (1.0 + math.sqrt(d))
    lo = region.bbox.lo - slack - r
    hi = region.bbox.hi + slack
    total = 0
    for pts in _grid_chunks(lo, hi, r, 0.5):
        total += int(np.count_nonzero(np.abs(region.evaluate(pts)) < slack))
    return total


def minkowski_profile(
    region: Region,
    radii: Sequence[float],
    step_factor: float = 0.25,
    method: str = "grid",
    seed: int | None = None,
    samples: int = 1 << 20,
) -> list[tuple[float, float]]:
    """Estimates of ``|{x : |sdf(x)| < r}| / 2r`` for each radius.

    ``method="grid"`` uses cell midpoints with step ``step_factor * r``;
    ``method="montecarlo"`` draws ``samples`` uniform points (seeded).
    """
    radii = [float(r) for r in radii]
    if any(r <= 0 for r in radii):
        raise GeometryError("radii must be positive")
    d = region.dim
    out = []
    rng = np.random.default_rng(seed)
    for r in radii:
        lo = region.bbox.lo - r
        hi = region.bbox.hi + r
        if method == "grid":
            h = step_factor * r
            count = 0
            for pts in _grid_chunks(lo, hi, h, 0.5):
                count += int(np.count_nonzero(np.abs(region.evaluate(pts)) < r))
            measure = count * h**d
        elif method == "montecarlo":
            pts = lo + (hi - lo) * rng.random((samples, d))
            frac = np.count_nonzero(np.abs(region.evaluate(pts)) < r) / samples
            measure = frac * float(np.prod(hi - lo))
        else:
            raise ValueError(f"unknown method {method!r}")
        out.append((r, measure / (2 * r)))
    return out


def surface_coefficient(A: BoxUnion, B: BoxUnion) -> float:
    """Boundary coefficient ``(1/4 pi^2) sum_i F_i(A) F_i(B)`` of two axis-box unions.

    ``F_i(X)`` is the total (d-1)-area of boundary faces of X with normal
    ``+-e_i``; faces between two boxes of the same union do not count.
    """
    if A.dim != B.dim:
        raise DimensionMismatchError("A and B must have the same dimension")
    fa = boundary_faces(normalize_box_union(A))
    fb = boundary_faces(normalize_box_union(B))
    total = sum(fa.area(k) * fb.area(k) for k in range(A.dim))
    return total / (4 * math.pi**2)
