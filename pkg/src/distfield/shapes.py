"""Analytic domains with exact membership, boundary sampling, and inner normals.

Every downstream computation (distances, projections, characteristics, grid
solves, regularity diagnostics) reaches the geometry only through the shape
classes defined here.  Supported domains:

* ``Disk`` -- disk in the plane, ball in R^3;
* ``Ellipse`` -- planar ellipse (axis-aligned);
* ``HalfSpace`` -- open half-plane / half-space;
* ``Polygon`` -- simple CCW polygon;
* ``Spiral`` -- thickened spiral channel between two turns of a decreasing
  wall curve r = f(theta), truncated at a finite winding;
* ``Cusp`` -- the planar region x1 > |x2|^(1+alpha), 0 < alpha < 1.

Boundary points classify as outside: all domains follow the open-set
convention, so ``contains`` is exact membership of the open domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._minimize import (
    SCAN_SAMPLES,
    golden_section,
    golden_section_vec,
    local_minima_indices,
    stationary_polish,
)
from .errors import (
    DimensionMismatch,
    InvalidSpec,
    NotC1,
    NotOnBoundary,
    TruncationExceeded,
)

# A point counts as lying on the boundary within this distance.
ON_BOUNDARY_TOL = 1e-9

# Representative density cap: more than this many tol-separated minimizer
# clusters are reported as a continuum (e.g. the center of a disk).
CLUSTER_CAP = 64


def as_point(x, dim: int) -> np.ndarray:
    """Validate and convert a query point to a float array of the right dimension."""
    p = np.asarray(x, dtype=float)
    if p.shape != (dim,):
        raise DimensionMismatch(f"expected a point in R^{dim}, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise InvalidSpec("point coordinates must be finite")
    return p


def as_points(pts, dim: int) -> np.ndarray:
    p = np.asarray(pts, dtype=float)
    if p.ndim != 2 or p.shape[1] != dim:
        raise DimensionMismatch(f"expected points of shape (n, {dim}), got {p.shape}")
    return p


@dataclass
class Candidates:
    """Refined nearest-boundary-point candidates for one query.

    ``dists``/``points`` list every candidate found (global and near-optimal
    local minimizers plus flat-stretch representatives).  ``continuum`` is set
    when the shape knows the near-optimal set is a whole boundary stretch too
    dense to enumerate (disk center).
    """

    dists: np.ndarray       # (k,)
    points: np.ndarray      # (k, m)
    continuum: bool = False


class Shape:
    """Common interface; concrete shapes override everything that matters."""

    dim: int = 2

    # -- membership ---------------------------------------------------------
    def contains(self, x) -> bool:
        raise NotImplementedError

    def contains_many(self, pts) -> np.ndarray:
        pts = as_points(pts, self.dim)
        return np.array([self.contains(p) for p in pts], dtype=bool)

    # -- boundary -----------------------------------------------------------
    def boundary_sample(self, spacing: float) -> np.ndarray:
        return self.boundary_sample_with_normals(spacing)[0]

    def boundary_sample_with_normals(self, spacing: float):
        raise NotImplementedError

    def inner_normal(self, p) -> np.ndarray:
        raise NotImplementedError

    def nonsmooth_boundary_points(self) -> np.ndarray:
        """Corner points where the boundary is not C^1 (empty for smooth shapes)."""
        return np.empty((0, self.dim))

    def boundary_window(self, p, r: float, n: int):
        """(points, normals) on the boundary within distance r of boundary point p."""
        raise NotImplementedError

    # -- projection support ---------------------------------------------------
    def projection_candidates(self, x, tol: float) -> Candidates:
        raise NotImplementedError

    def project_many(self, pts) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized global nearest point: (distances (n,), points (n, m))."""
        pts = as_points(pts, self.dim)
        d = np.empty(len(pts))
        proj = np.empty_like(pts)
        for i, p in enumerate(pts):
            cand = self.projection_candidates(p, 1e-12)
            j = int(np.argmin(cand.dists))
            d[i] = cand.dists[j]
            proj[i] = cand.points[j]
        return d, proj

    # -- probe admissibility ---------------------------------------------------
    def probe_scale_ok(self, p, h: float) -> bool:
        """Whether distance queries on the sphere of radius h around p are reliable."""
        return h >= 1e-12

    def _check_on_boundary(self, p):
        d, _ = self.project_many(p[None, :])
        if d[0] > ON_BOUNDARY_TOL:
            raise NotOnBoundary(f"point {p.tolist()} is {d[0]:.3g} from the boundary")


def _spacing_count(length: float, spacing: float) -> int:
    if spacing <= 0:
        raise InvalidSpec("spacing must be positive")
    return max(2, int(math.ceil(length / spacing)) + 1)


# ---------------------------------------------------------------------------
# Disk / ball
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Disk(Shape):
    """Open disk (m=2) or ball (m=3) of given center and radius."""

    center: np.ndarray
    radius: float
    dim: int = field(init=False)

    def __init__(self, center, radius):
        center = np.atleast_1d(np.asarray(center, dtype=float))
        if center.shape[0] not in (2, 3):
            raise InvalidSpec("disk center must live in R^2 or R^3")
        if not np.all(np.isfinite(center)) or not np.isfinite(radius):
            raise InvalidSpec("disk parameters must be finite")
        if radius <= 0:
            raise InvalidSpec("disk radius must be positive")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(radius))
        object.__setattr__(self, "dim", center.shape[0])

    def contains(self, x) -> bool:
        p = as_point(x, self.dim)
        return float(np.linalg.norm(p - self.center)) < self.radius

    def contains_many(self, pts) -> np.ndarray:
        pts = as_points(pts, self.dim)
        return np.linalg.norm(pts - self.center, axis=1) < self.radius

    def boundary_sample_with_normals(self, spacing: float):
        if self.dim == 2:
            n = _spacing_count(2.0 * math.pi * self.radius, spacing) - 1
            ang = 2.0 * math.pi * np.arange(n) / n
            rim = np.stack([np.cos(ang), np.sin(ang)], axis=1)
            return self.center + self.radius * rim, -rim
        # Fibonacci sphere; spacing is approximate for the 3-d ball.
        n = max(8, int(math.ceil(5.2 * (self.radius / spacing) ** 2)))
        k = np.arange(n) + 0.5
        phi = np.arccos(1.0 - 2.0 * k / n)
        theta = math.pi * (1.0 + math.sqrt(5.0)) * k
        rim = np.stack(
            [np.cos(theta) * np.sin(phi), np.sin(theta) * np.sin(phi), np.cos(phi)],
            axis=1,
        )
        return self.center + self.radius * rim, -rim

    def inner_normal(self, p) -> np.ndarray:
        p = as_point(p, self.dim)
        s = float(np.linalg.norm(p - self.center))
        if abs(s - self.radius) > ON_BOUNDARY_TOL:
            raise NotOnBoundary(f"|p - c| = {s:.12g}, expected {self.radius:.12g}")
        return (self.center - p) / s

    def projection_candidates(self, x, tol: float) -> Candidates:
        x = as_point(x, self.dim)
        v = x - self.center
        s = float(np.linalg.norm(v))
        if self.dim == 2:
            # Same scan machinery as the other parametric shapes so that flat
            # near-optimal stretches (center and near-center queries) produce
            # the same multiplicity semantics everywhere.
            cx, cy = self.center
            qx, qy = x
            R = self.radius

            def point_at(ts: np.ndarray) -> np.ndarray:
                return self.center + R * np.stack([np.cos(ts), np.sin(ts)], axis=-1)

            def dist_one(t: float) -> float:
                return math.hypot(cx + R * math.cos(t) - qx, cy + R * math.sin(t) - qy)

            def stat_one(t: float) -> float:
                ct, st = math.cos(t), math.sin(t)
                return (cx + R * ct - qx) * (-R * st) + (cy + R * st - qy) * (R * ct)

            windows = [(point_at, dist_one, stat_one, 0.0, 2.0 * math.pi, True)]
            return _candidates_from_windows(x, windows, tol)
        # 3-d ball: closed form, with an explicit continuum at the center.
        if s <= 0.5 * tol:
            reps, _ = self.boundary_sample_with_normals(self.radius * 0.1)
            d = np.linalg.norm(reps - x, axis=1)
            return Candidates(d, reps, continuum=True)
        proj = self.center + self.radius * v / s
        return Candidates(np.array([abs(self.radius - s)]), proj[None, :])

    def project_many(self, pts):
        pts = as_points(pts, self.dim)
        v = pts - self.center
        s = np.linalg.norm(v, axis=1)
        safe = np.maximum(s, 1e-300)
        proj = self.center + self.radius * v / safe[:, None]
        return np.abs(self.radius - s), proj

    def boundary_window(self, p, r: float, n: int):
        p = as_point(p, self.dim)
        if self.dim != 2:
            raise NotImplementedError("boundary windows are planar only")
        self._check_on_boundary(p)
        v = p - self.center
        base = math.atan2(v[1], v[0])
        half = 2.0 * math.asin(min(1.0, r / (2.0 * self.radius)))
        ang = base + np.linspace(-half, half, n)
        rim = np.stack([np.cos(ang), np.sin(ang)], axis=1)
        return self.center + self.radius * rim, -rim


# ---------------------------------------------------------------------------
# Half-space
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HalfSpace(Shape):
    """Open half-space {x : <n, x> > offset}; n is the inward unit normal."""

    unit_normal: np.ndarray
    offset: float
    dim: int = field(init=False)
    extent: float = 10.0  # half-width of the boundary patch used for sampling

    def __init__(self, unit_normal, offset, extent=10.0):
        n = np.atleast_1d(np.asarray(unit_normal, dtype=float))
        if n.shape[0] not in (2, 3):
            raise InvalidSpec("half-space normal must live in R^2 or R^3")
        norm = float(np.linalg.norm(n))
        if not np.isfinite(norm) or abs(norm - 1.0) > 1e-6:
            raise InvalidSpec("unit_normal must have unit length")
        object.__setattr__(self, "unit_normal", n / norm)
        object.__setattr__(self, "offset", float(offset))
        object.__setattr__(self, "dim", n.shape[0])
        object.__setattr__(self, "extent", float(extent))

    def _height(self, pts: np.ndarray) -> np.ndarray:
        return pts @ self.unit_normal - self.offset

    def _tangent_basis(self) -> np.ndarray:
        n = self.unit_normal
        if self.dim == 2:
            return np.array([[-n[1], n[0]]])
        a = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        t1 = np.cross(n, a)
        t1 /= np.linalg.norm(t1)
        return np.stack([t1, np.cross(n, t1)])

    def contains(self, x) -> bool:
        return float(self._height(as_point(x, self.dim)[None, :])[0]) > 0.0

    def contains_many(self, pts) -> np.ndarray:
        return self._height(as_points(pts, self.dim)) > 0.0

    def boundary_sample_with_normals(self, spacing: float):
        anchor = self.offset * self.unit_normal
        tb = self._tangent_basis()
        n = _spacing_count(2.0 * self.extent, spacing)
        ts = np.linspace(-self.extent, self.extent, n)
        if self.dim == 2:
            pts = anchor + ts[:, None] * tb[0]
        else:
            u, v = np.meshgrid(ts, ts, indexing="ij")
            pts = anchor + u.reshape(-1, 1) * tb[0] + v.reshape(-1, 1) * tb[1]
        normals = np.broadcast_to(self.unit_normal, pts.shape).copy()
        return pts, normals

    def inner_normal(self, p) -> np.ndarray:
        p = as_point(p, self.dim)
        if abs(float(self._height(p[None, :])[0])) > ON_BOUNDARY_TOL:
            raise NotOnBoundary("point is not on the bounding hyperplane")
        return self.unit_normal.copy()

    def projection_candidates(self, x, tol: float) -> Candidates:
        x = as_point(x, self.dim)
        t = float(self._height(x[None, :])[0])
        proj = x - t * self.unit_normal
        return Candidates(np.array([abs(t)]), proj[None, :])

    def project_many(self, pts):
        pts = as_points(pts, self.dim)
        t = self._height(pts)
        return np.abs(t), pts - t[:, None] * self.unit_normal

    def boundary_window(self, p, r: float, n: int):
        p = as_point(p, self.dim)
        if abs(float(self._height(p[None, :])[0])) > ON_BOUNDARY_TOL:
            raise NotOnBoundary("point is not on the bounding hyperplane")
        tb = self._tangent_basis()
        ts = np.linspace(-r, r, n)
        pts = p + ts[:, None] * tb[0]
        normals = np.broadcast_to(self.unit_normal, pts.shape).copy()
        return pts, normals


# ---------------------------------------------------------------------------
# Polygon
# ---------------------------------------------------------------------------

def _segments_properly_intersect(a, b, c, d) -> bool:
    def orient(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    return (o1 * o2 < 0) and (o3 * o4 < 0)


@dataclass(frozen=True)
class Polygon(Shape):
    """Simple closed CCW polygon in the plane."""

    vertices: np.ndarray
    dim: int = field(init=False, default=2)

    def __init__(self, vertices):
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
            raise InvalidSpec("polygon needs at least 3 planar vertices")
        if not np.all(np.isfinite(v)):
            raise InvalidSpec("polygon vertices must be finite")
        nxt = np.roll(v, -1, axis=0)
        if np.any(np.linalg.norm(nxt - v, axis=1) < 1e-14):
            raise InvalidSpec("polygon has a zero-length edge")
        area2 = float(np.sum(v[:, 0] * nxt[:, 1] - nxt[:, 0] * v[:, 1]))
        if area2 <= 0:
            raise InvalidSpec("polygon vertices must wind counter-clockwise")
        n = len(v)
        for i in range(n):
            for j in range(i + 1, n):
                if j == i or (j + 1) % n == i or (i + 1) % n == j:
                    continue
                if _segments_properly_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]):
                    raise InvalidSpec("polygon is self-intersecting")
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "dim", 2)

    def _edges(self):
        return self.vertices, np.roll(self.vertices, -1, axis=0)

    def contains(self, x) -> bool:
        return bool(self.contains_many(as_point(x, 2)[None, :])[0])

    def contains_many(self, pts) -> np.ndarray:
        pts = as_points(pts, 2)
        a, b = self._edges()
        inside = np.zeros(len(pts), dtype=bool)
        x, y = pts[:, 0], pts[:, 1]
        for (ax, ay), (bx, by) in zip(a, b):
            crosses = (ay > y) != (by > y)
            with np.errstate(divide="ignore", invalid="ignore"):
                xint = ax + (y - ay) * (bx - ax) / (by - ay)
            inside ^= crosses & (x < xint)
        return inside

    def boundary_sample_with_normals(self, spacing: float):
        pts, normals = [], []
        a, b = self._edges()
        for pa, pb in zip(a, b):
            length = float(np.linalg.norm(pb - pa))
            n = _spacing_count(length, spacing)
            ts = np.linspace(0.0, 1.0, n)[:-1]  # endpoint opens the next edge
            seg = pa + ts[:, None] * (pb - pa)
            e = (pb - pa) / length
            inward = np.array([-e[1], e[0]])
            pts.append(seg)
            normals.append(np.broadcast_to(inward, seg.shape).copy())
        return np.concatenate(pts), np.concatenate(normals)

    def nonsmooth_boundary_points(self) -> np.ndarray:
        return self.vertices.copy()

    def inner_normal(self, p) -> np.ndarray:
        p = as_point(p, 2)
        if np.min(np.linalg.norm(self.vertices - p, axis=1)) <= ON_BOUNDARY_TOL:
            raise NotC1("polygon boundary has a corner at this point")
        a, b = self._edges()
        d, foot, _ = self._edge_feet(p[None, :])
        i = int(np.argmin(d[0]))
        if d[0, i] > ON_BOUNDARY_TOL:
            raise NotOnBoundary("point is not on the polygon boundary")
        e = b[i] - a[i]
        e = e / np.linalg.norm(e)
        return np.array([-e[1], e[0]])

    def _edge_feet(self, pts: np.ndarray):
        """Distances (n, n_edges) and feet (n, n_edges, 2) to every edge."""
        a, b = self._edges()
        ab = b - a                                    # (E, 2)
        denom = np.sum(ab * ab, axis=1)               # (E,)
        w = pts[:, None, :] - a[None, :, :]           # (n, E, 2)
        t = np.clip(np.sum(w * ab[None, :, :], axis=2) / denom[None, :], 0.0, 1.0)
        feet = a[None, :, :] + t[:, :, None] * ab[None, :, :]
        d = np.linalg.norm(pts[:, None, :] - feet, axis=2)
        return d, feet, t

    def projection_candidates(self, x, tol: float) -> Candidates:
        x = as_point(x, 2)
        d, feet, _ = self._edge_feet(x[None, :])
        return Candidates(d[0], feet[0])

    def project_many(self, pts):
        pts = as_points(pts, 2)
        d, feet, _ = self._edge_feet(pts)
        i = np.argmin(d, axis=1)
        rows = np.arange(len(pts))
        return d[rows, i], feet[rows, i]

    def boundary_window(self, p, r: float, n: int):
        p = as_point(p, 2)
        if np.min(np.linalg.norm(self.vertices - p, axis=1)) <= r:
            from .errors import NotC1InNeighborhood

            raise NotC1InNeighborhood("a polygon vertex lies inside the window")
        a, b = self._edges()
        d, _, t = self._edge_feet(p[None, :])
        i = int(np.argmin(d[0]))
        if d[0, i] > ON_BOUNDARY_TOL:
            raise NotOnBoundary("point is not on the polygon boundary")
        e = b[i] - a[i]
        length = float(np.linalg.norm(e))
        e = e / length
        s0 = t[0, i] * length
        ss = np.clip(s0 + np.linspace(-r, r, n), 0.0, length)
        pts = a[i] + ss[:, None] * e
        inward = np.array([-e[1], e[0]])
        return pts, np.broadcast_to(inward, pts.shape).copy()


# ---------------------------------------------------------------------------
# Ellipse
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Ellipse(Shape):
    """Planar axis-aligned ellipse with semi-axes (a, b)."""

    semi_axes: np.ndarray
    center: np.ndarray
    dim: int = field(init=False, default=2)

    def __init__(self, semi_axes, center=(0.0, 0.0)):
        axes = np.atleast_1d(np.asarray(semi_axes, dtype=float))
        c = np.atleast_1d(np.asarray(center, dtype=float))
        if axes.shape[0] != 2 or c.shape[0] != 2:
            raise InvalidSpec("only planar ellipses are supported")
        if not np.all(np.isfinite(axes)) or not np.all(np.isfinite(c)):
            raise InvalidSpec("ellipse parameters must be finite")
        if np.any(axes <= 0):
            raise InvalidSpec("ellipse semi-axes must be positive")
        object.__setattr__(self, "semi_axes", axes)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "dim", 2)

    def _implicit(self, pts: np.ndarray) -> np.ndarray:
        q = (pts - self.center) / self.semi_axes
        return np.sum(q * q, axis=1) - 1.0

    def _point_at(self, ts: np.ndarray) -> np.ndarray:
        a, b = self.semi_axes
        return self.center + np.stack([a * np.cos(ts), b * np.sin(ts)], axis=-1)

    def _normal_at(self, ts: np.ndarray) -> np.ndarray:
        a, b = self.semi_axes
        g = np.stack([np.cos(ts) / a, np.sin(ts) / b], axis=-1)
        return -g / np.linalg.norm(g, axis=-1, keepdims=True)

    def contains(self, x) -> bool:
        return float(self._implicit(as_point(x, 2)[None, :])[0]) < 0.0

    def contains_many(self, pts) -> np.ndarray:
        return self._implicit(as_points(pts, 2)) < 0.0

    def boundary_sample_with_normals(self, spacing: float):
        a = float(np.max(self.semi_axes))
        n = _spacing_count(2.0 * math.pi * a, spacing) - 1
        ts = 2.0 * math.pi * np.arange(n) / n
        return self._point_at(ts), self._normal_at(ts)

    def inner_normal(self, p) -> np.ndarray:
        p = as_point(p, 2)
        self._check_on_boundary(p)
        g = (p - self.center) / self.semi_axes**2
        return -g / np.linalg.norm(g)

    def projection_candidates(self, x, tol: float) -> Candidates:
        x = as_point(x, 2)
        a, b = self.semi_axes
        qx, qy = x - self.center

        def dist_one(t: float) -> float:
            return math.hypot(a * math.cos(t) - qx, b * math.sin(t) - qy)

        def stat_one(t: float) -> float:
            ct, st = math.cos(t), math.sin(t)
            return (a * ct - qx) * (-a * st) + (b * st - qy) * (b * ct)

        windows = [(self._point_at, dist_one, stat_one, 0.0, 2.0 * math.pi, True)]
        return _candidates_from_windows(x, windows, tol)

    def project_many(self, pts):
        pts = as_points(pts, 2)
        q = pts - self.center
        ts = _vec_param_minimize(q, self._point_at_origin, 0.0, 2.0 * math.pi, True)
        proj = self._point_at(ts)
        return np.linalg.norm(pts - proj, axis=1), proj

    def _point_at_origin(self, ts: np.ndarray) -> np.ndarray:
        a, b = self.semi_axes
        return np.stack([a * np.cos(ts), b * np.sin(ts)], axis=-1)

    def _locate(self, p) -> float:
        cand = self.projection_candidates(p, 1e-12)
        j = int(np.argmin(cand.dists))
        v = (cand.points[j] - self.center) / self.semi_axes
        return math.atan2(v[1], v[0])

    def boundary_window(self, p, r: float, n: int):
        p = as_point(p, 2)
        self._check_on_boundary(p)
        t0 = self._locate(p)
        w = r / float(np.max(self.semi_axes))
        while w < math.pi and (
            np.linalg.norm(self._point_at(np.array([t0 - w]))[0] - p) <= r
            or np.linalg.norm(self._point_at(np.array([t0 + w]))[0] - p) <= r
        ):
            w *= 1.5
        ts = t0 + np.linspace(-w, w, 4 * n)
        pts = self._point_at(ts)
        keep = np.linalg.norm(pts - p, axis=1) <= r
        ts = ts[keep][:: max(1, int(np.sum(keep)) // n)]
        return self._point_at(ts), self._normal_at(ts)


# ---------------------------------------------------------------------------
# Cusp
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cusp(Shape):
    """The planar domain x1 > |x2|^(1+alpha) with 0 < alpha < 1."""

    alpha: float
    extent: float = 4.0  # parameter cap for boundary sampling
    dim: int = field(init=False, default=2)

    def __init__(self, alpha, extent=4.0):
        if not np.isfinite(alpha) or not (0.0 < alpha < 1.0):
            raise InvalidSpec("cusp exponent alpha must lie in (0, 1)")
        object.__setattr__(self, "alpha", float(alpha))
        object.__setattr__(self, "extent", float(extent))
        object.__setattr__(self, "dim", 2)

    def _branch(self, sign: float):
        ex = 1.0 + self.alpha

        def fn(ts: np.ndarray) -> np.ndarray:
            ts = np.maximum(ts, 0.0)
            return np.stack([ts**ex, sign * ts], axis=-1)

        return fn

    def contains(self, x) -> bool:
        p = as_point(x, 2)
        return p[0] > abs(p[1]) ** (1.0 + self.alpha)

    def contains_many(self, pts) -> np.ndarray:
        pts = as_points(pts, 2)
        return pts[:, 0] > np.abs(pts[:, 1]) ** (1.0 + self.alpha)

    def _speed_max(self, t_hi: float) -> float:
        ex = 1.0 + self.alpha
        return math.sqrt(1.0 + (ex * t_hi**self.alpha) ** 2)

    def boundary_sample_with_normals(self, spacing: float):
        t_hi = self.extent
        n = _spacing_count(t_hi * self._speed_max(t_hi), spacing)
        ts = np.linspace(0.0, t_hi, n)
        ex = 1.0 + self.alpha
        up = np.stack([ts**ex, ts], axis=-1)
        dn = np.stack([ts[1:] ** ex, -ts[1:]], axis=-1)
        slope = ex * ts**self.alpha
        nrm = np.sqrt(1.0 + slope**2)
        n_up = np.stack([np.ones_like(ts), -slope], axis=-1) / nrm[:, None]
        n_dn = np.stack([np.ones_like(ts[1:]), slope[1:]], axis=-1) / nrm[1:, None]
        return np.concatenate([up, dn]), np.concatenate([n_up, n_dn])

    def inner_normal(self, p) -> np.ndarray:
        p = as_point(p, 2)
        self._check_on_boundary(p)
        ex = 1.0 + self.alpha
        slope = ex * abs(p[1]) ** self.alpha * math.copysign(1.0, p[1]) if p[1] != 0 else 0.0
        n = np.array([1.0, -slope])
        return n / np.linalg.norm(n)

    def _t_cap(self, x: np.ndarray) -> float:
        # Any minimizer (t^(1+a), +-t) satisfies |t - |x2|| <= d_ub, with d_ub an
        # upper bound on the distance obtained from two candidate boundary points.
        apex = float(np.linalg.norm(x))
        graph = math.hypot(abs(x[1]) ** (1.0 + self.alpha) - x[0], 0.0)
        d_ub = min(apex, graph)
        return abs(x[1]) + d_ub + 1e-9

    def projection_candidates(self, x, tol: float) -> Candidates:
        x = as_point(x, 2)
        t_cap = self._t_cap(x)
        ex = 1.0 + self.alpha
        qx, qy = x

        windows = []
        for sign in (+1.0, -1.0):
            def dist_one(t: float, s=sign) -> float:
                t = max(t, 0.0)
                return math.hypot(t**ex - qx, s * t - qy)

            def stat_one(t: float, s=sign) -> float:
                t = max(t, 0.0)
                return (t**ex - qx) * ex * t**self.alpha + (s * t - qy) * s

            windows.append((self._branch(sign), dist_one, stat_one, 0.0, t_cap, False))
        return _candidates_from_windows(x, windows, tol)

    def project_many(self, pts):
        pts = as_points(pts, 2)
        caps = np.array([self._t_cap(p) for p in pts])
        best_d = np.full(len(pts), np.inf)
        best_p = np.zeros_like(pts)
        for sign in (+1.0, -1.0):
            fn = self._branch(sign)
            ts = _vec_param_minimize(pts, fn, np.zeros(len(pts)), caps, False)
            proj = fn(ts)
            d = np.linalg.norm(pts - proj, axis=1)
            take = d < best_d
            best_d[take] = d[take]
            best_p[take] = proj[take]
        return best_d, best_p

    def boundary_window(self, p, r: float, n: int):
        p = as_point(p, 2)
        self._check_on_boundary(p)
        t0 = abs(p[1])
        lo = max(0.0, t0 - 2.0 * r)
        ts = np.linspace(lo, t0 + 2.0 * r, 4 * n)
        sign = math.copysign(1.0, p[1]) if p[1] != 0 else 1.0
        branch = self._branch(sign)
        pts = branch(ts)
        keep = np.linalg.norm(pts - p, axis=1) <= r
        ts = ts[keep][:: max(1, int(np.sum(keep)) // n)]
        pts = branch(ts)
        ex = 1.0 + self.alpha
        slope = ex * ts**self.alpha * sign
        nrm = np.sqrt(1.0 + slope**2)
        normals = np.stack([np.ones_like(ts), -slope], axis=-1) / nrm[:, None]
        return pts, normals


# ---------------------------------------------------------------------------
# Spiral
# ---------------------------------------------------------------------------

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Spiral(Shape):
    """Thickened spiral channel {(r, theta) : f(theta + pi) < r < f(theta)}.

    The wall function is f(theta) = (1 + theta)^(-beta) for the default
    ``wall="power"`` family, or f(theta) = exp(-beta * theta) for
    ``wall="exp"``.  The unwound channel angle runs in
    [theta_min, theta_max - pi]; both spiral walls are truncated at
    theta_max.  Queries with |z| < f(theta_max) / 2 raise TruncationExceeded
    so the truncation can never silently distort an answer near the apex.
    """

    beta: float
    theta_min: float = 0.0
    theta_max: float = 330.0 * math.pi
    wall: str = "power"
    dim: int = field(init=False, default=2)

    def __init__(self, beta, theta_min=0.0, theta_max=330.0 * math.pi, wall="power"):
        if not np.isfinite(beta) or beta <= 0:
            raise InvalidSpec("spiral decay rate beta must be positive")
        if theta_min < 0:
            raise InvalidSpec("theta_min must be nonnegative")
        if theta_max <= theta_min + _TWO_PI:
            raise InvalidSpec("theta_max must exceed theta_min by more than one turn")
        if wall not in ("power", "exp"):
            raise InvalidSpec("wall must be 'power' or 'exp'")
        object.__setattr__(self, "beta", float(beta))
        object.__setattr__(self, "theta_min", float(theta_min))
        object.__setattr__(self, "theta_max", float(theta_max))
        object.__setattr__(self, "wall", wall)
        object.__setattr__(self, "dim", 2)

    # Wall function, its derivative, and closed-form inverse.
    def f(self, theta):
        if self.wall == "power":
            return (1.0 + np.asarray(theta, dtype=float)) ** (-self.beta)
        return np.exp(-self.beta * np.asarray(theta, dtype=float))

    def f_prime(self, theta):
        if self.wall == "power":
            return -self.beta * (1.0 + np.asarray(theta, dtype=float)) ** (-self.beta - 1.0)
        return -self.beta * np.exp(-self.beta * np.asarray(theta, dtype=float))

    def f_inv(self, r):
        if self.wall == "power":
            return np.asarray(r, dtype=float) ** (-1.0 / self.beta) - 1.0
        return -np.log(np.asarray(r, dtype=float)) / self.beta

    @property
    def theta_end(self) -> float:
        return self.theta_max - math.pi

    @property
    def reject_radius(self) -> float:
        return 0.5 * float(self.f(self.theta_max))

    @property
    def safe_radius(self) -> float:
        """Smallest query radius at which truncation provably cannot matter."""
        return float(self.f(max(self.theta_min, self.theta_max - 3.0 * math.pi)))

    def _check_radius(self, r):
        # The apex itself is a boundary point of the untruncated domain with
        # distance exactly zero (the walls accumulate at the origin), so radius
        # 0 is answerable; any other radius below the zone is not.
        r = np.asarray(r)
        if np.any((r < self.reject_radius) & (r != 0.0)):
            raise TruncationExceeded(
                f"query radius below truncation zone {self.reject_radius:.3g}"
            )

    def _outer_point(self, thetas: np.ndarray) -> np.ndarray:
        f = self.f(thetas)
        return np.stack([f * np.cos(thetas), f * np.sin(thetas)], axis=-1)

    def _inner_point(self, thetas: np.ndarray) -> np.ndarray:
        f = self.f(thetas + math.pi)
        return np.stack([f * np.cos(thetas), f * np.sin(thetas)], axis=-1)

    def _cap_segment(self, which: int):
        if which == 0:
            ang, r0, r1 = self.theta_min, float(self.f(self.theta_min + math.pi)), float(
                self.f(self.theta_min)
            )
        else:
            ang, r0, r1 = self.theta_end, float(self.f(self.theta_max)), float(
                self.f(self.theta_end)
            )
        e = np.array([math.cos(ang), math.sin(ang)])
        return e * r0, e * r1

    def _candidate_windings(self, x: np.ndarray):
        r = float(np.linalg.norm(x))
        alpha = math.atan2(x[1], x[0]) % _TWO_PI
        target = float(np.clip(self.f_inv(max(r, 1e-300)), self.theta_min, self.theta_max))
        k0 = round((target - alpha) / _TWO_PI)
        return r, alpha, (k0 - 1, k0, k0 + 1)

    def contains(self, x) -> bool:
        x = as_point(x, 2)
        if x[0] == 0.0 and x[1] == 0.0:
            return False
        r, alpha, ks = self._candidate_windings(x)
        self._check_radius(r)
        for k in ks:
            theta = alpha + _TWO_PI * k
            if self.theta_min <= theta <= self.theta_end:
                if float(self.f(theta + math.pi)) < r < float(self.f(theta)):
                    return True
        return False

    def contains_many(self, pts) -> np.ndarray:
        pts = as_points(pts, 2)
        r = np.linalg.norm(pts, axis=1)
        self._check_radius(r)
        alpha = np.arctan2(pts[:, 1], pts[:, 0]) % _TWO_PI
        target = np.clip(self.f_inv(np.maximum(r, 1e-300)), self.theta_min, self.theta_max)
        k0 = np.round((target - alpha) / _TWO_PI)
        inside = np.zeros(len(pts), dtype=bool)
        for dk in (-1, 0, 1):
            theta = alpha + _TWO_PI * (k0 + dk)
            ok = (theta >= self.theta_min) & (theta <= self.theta_end)
            th = np.where(ok, theta, self.theta_min)
            inside |= ok & (self.f(th + math.pi) < r) & (r < self.f(th))
        return inside

    def boundary_sample_with_normals(self, spacing: float):
        pts, normals = [], []
        for inner in (False, True):
            theta = self.theta_min
            cur_t, cur_p, cur_n = [], [], []
            while theta <= self.theta_end:
                cur_t.append(theta)
                shift = math.pi if inner else 0.0
                fv = float(self.f(theta + shift))
                fp = float(self.f_prime(theta + shift))
                speed = math.hypot(fp, fv)
                theta += 0.9 * spacing / speed
            ts = np.asarray(cur_t)
            if ts[-1] < self.theta_end:
                ts = np.append(ts, self.theta_end)
            pts.append(self._inner_point(ts) if inner else self._outer_point(ts))
            normals.append(self._wall_normals(ts, inner))
        for which in (0, 1):
            p0, p1 = self._cap_segment(which)
            n = _spacing_count(float(np.linalg.norm(p1 - p0)), spacing)
            ts = np.linspace(0.0, 1.0, n)
            seg = p0 + ts[:, None] * (p1 - p0)
            ang = self.theta_min if which == 0 else self.theta_end
            e_t = np.array([-math.sin(ang), math.cos(ang)])
            inward = e_t if which == 0 else -e_t
            pts.append(seg)
            normals.append(np.broadcast_to(inward, seg.shape).copy())
        return np.concatenate(pts), np.concatenate(normals)

    def _wall_normals(self, thetas: np.ndarray, inner: bool) -> np.ndarray:
        shift = math.pi if inner else 0.0
        fv = self.f(thetas + shift)
        fp = self.f_prime(thetas + shift)
        e_r = np.stack([np.cos(thetas), np.sin(thetas)], axis=-1)
        e_t = np.stack([-np.sin(thetas), np.cos(thetas)], axis=-1)
        g = e_r - (fp / fv)[:, None] * e_t
        g = g / np.linalg.norm(g, axis=1, keepdims=True)
        return g if inner else -g

    def nonsmooth_boundary_points(self) -> np.ndarray:
        c0 = self._cap_segment(0)
        c1 = self._cap_segment(1)
        return np.stack([c0[0], c0[1], c1[0], c1[1]])

    def _locate(self, p: np.ndarray):
        """(piece, theta) of the boundary point p; piece in {outer, inner, cap0, cap1}."""
        r, alpha, ks = self._candidate_windings(p)
        best = (math.inf, None, 0.0)
        for k in ks:
            theta = alpha + _TWO_PI * k
            if self.theta_min <= theta <= self.theta_end:
                d_out = abs(r - float(self.f(theta)))
                d_in = abs(r - float(self.f(theta + math.pi)))
                if d_out < best[0]:
                    best = (d_out, "outer", theta)
                if d_in < best[0]:
                    best = (d_in, "inner", theta)
        for which, piece in ((0, "cap0"), (1, "cap1")):
            p0, p1 = self._cap_segment(which)
            e = p1 - p0
            t = float(np.clip(np.dot(p - p0, e) / np.dot(e, e), 0.0, 1.0))
            d = float(np.linalg.norm(p - (p0 + t * e)))
            if d < best[0]:
                best = (d, piece, t)
        if best[0] > ON_BOUNDARY_TOL:
            raise NotOnBoundary("point is not on the spiral boundary")
        return best[1], best[2]

    def inner_normal(self, p) -> np.ndarray:
        p = as_point(p, 2)
        if np.min(np.linalg.norm(self.nonsmooth_boundary_points() - p, axis=1)) <= ON_BOUNDARY_TOL:
            raise NotC1("spiral cap corner")
        piece, t = self._locate(p)
        if piece in ("outer", "inner"):
            return self._wall_normals(np.array([t]), piece == "inner")[0]
        ang = self.theta_min if piece == "cap0" else self.theta_end
        e_t = np.array([-math.sin(ang), math.cos(ang)])
        return e_t if piece == "cap0" else -e_t

    def _wall_windows(self, x: np.ndarray):
        r, alpha, ks = self._candidate_windings(x)
        self._check_radius(r)
        windows = []
        for k in ks:
            theta_c = alpha + _TWO_PI * k
            lo = max(self.theta_min, theta_c - math.pi)
            hi = min(self.theta_end, theta_c + math.pi)
            if hi <= lo:
                continue
            for inner in (False, True):
                fn = self._inner_point if inner else self._outer_point
                shift = math.pi if inner else 0.0
                qx, qy = x

                def dist_one(t: float, s=shift) -> float:
                    fv = float(self.f(t + s))
                    return math.hypot(fv * math.cos(t) - qx, fv * math.sin(t) - qy)

                def stat_one(t: float, s=shift) -> float:
                    fv = float(self.f(t + s))
                    fp = float(self.f_prime(t + s))
                    ct, st = math.cos(t), math.sin(t)
                    px, py = fv * ct, fv * st
                    tx = fp * ct - fv * st
                    ty = fp * st + fv * ct
                    return (px - qx) * tx + (py - qy) * ty

                windows.append((fn, dist_one, stat_one, lo, hi, False))
        return windows

    def projection_candidates(self, x, tol: float) -> Candidates:
        x = as_point(x, 2)
        if x[0] == 0.0 and x[1] == 0.0:
            return Candidates(np.array([0.0]), np.zeros((1, 2)))
        windows = self._wall_windows(x)
        cand = _candidates_from_windows(x, windows, tol, scan=512)
        cap_d, cap_p = [], []
        for which in (0, 1):
            p0, p1 = self._cap_segment(which)
            e = p1 - p0
            t = float(np.clip(np.dot(x - p0, e) / np.dot(e, e), 0.0, 1.0))
            foot = p0 + t * e
            cap_d.append(float(np.linalg.norm(x - foot)))
            cap_p.append(foot)
        dists = np.concatenate([cand.dists, np.asarray(cap_d)])
        points = np.concatenate([cand.points, np.stack(cap_p)])
        return Candidates(dists, points, cand.continuum)

    def project_many(self, pts):
        pts = as_points(pts, 2)
        r = np.linalg.norm(pts, axis=1)
        self._check_radius(r)
        alpha = np.arctan2(pts[:, 1], pts[:, 0]) % _TWO_PI
        target = np.clip(self.f_inv(np.maximum(r, 1e-300)), self.theta_min, self.theta_max)
        k0 = np.round((target - alpha) / _TWO_PI)
        best_d = np.full(len(pts), np.inf)
        best_p = np.zeros_like(pts)
        for dk in (-1, 0, 1):
            theta_c = alpha + _TWO_PI * (k0 + dk)
            lo = np.maximum(self.theta_min, theta_c - math.pi)
            hi = np.minimum(self.theta_end, theta_c + math.pi)
            ok = hi > lo
            lo = np.where(ok, lo, self.theta_min)
            hi = np.where(ok, hi, self.theta_min + 1e-9)
            for inner in (False, True):
                fn = self._inner_point if inner else self._outer_point
                ts = _vec_param_minimize(pts, fn, lo, hi, False, scan=512)
                proj = fn(ts)
                d = np.where(ok, np.linalg.norm(pts - proj, axis=1), np.inf)
                take = d < best_d
                best_d[take] = d[take]
                best_p[take] = proj[take]
        for which in (0, 1):
            p0, p1 = self._cap_segment(which)
            e = p1 - p0
            t = np.clip((pts - p0) @ e / float(e @ e), 0.0, 1.0)
            feet = p0 + t[:, None] * e
            d = np.linalg.norm(pts - feet, axis=1)
            take = d < best_d
            best_d[take] = d[take]
            best_p[take] = feet[take]
        apex = r == 0.0
        best_d[apex] = 0.0
        best_p[apex] = 0.0
        return best_d, best_p

    def probe_scale_ok(self, p, h: float) -> bool:
        if h < 1e-12:
            return False
        min_radius = abs(float(np.linalg.norm(p)) - h)
        return min_radius >= self.safe_radius

    def boundary_window(self, p, r: float, n: int):
        p = as_point(p, 2)
        piece, t0 = self._locate(p)
        if piece not in ("outer", "inner"):
            raise NotC1("chi windows on cap segments are not supported")
        inner = piece == "inner"
        fn = self._inner_point if inner else self._outer_point
        shift = math.pi if inner else 0.0
        speed = math.hypot(float(self.f_prime(t0 + shift)), float(self.f(t0 + shift)))
        w = r / speed
        while (
            np.linalg.norm(fn(np.array([max(self.theta_min, t0 - w)]))[0] - p) <= r
            or np.linalg.norm(fn(np.array([min(self.theta_end, t0 + w)]))[0] - p) <= r
        ):
            w *= 1.5
            if t0 - w < self.theta_min and t0 + w > self.theta_end:
                break
        ts = np.clip(t0 + np.linspace(-w, w, 4 * n), self.theta_min, self.theta_end)
        pts = fn(ts)
        keep = np.linalg.norm(pts - p, axis=1) <= r
        ts = ts[keep][:: max(1, int(np.sum(keep)) // n)]
        return fn(ts), self._wall_normals(ts, inner)


# ---------------------------------------------------------------------------
# Shared parametric projection machinery
# ---------------------------------------------------------------------------

def _candidates_from_windows(x: np.ndarray, windows, tol: float,
                             scan: int = SCAN_SAMPLES) -> Candidates:
    """Scan + golden-section candidates over parametric boundary windows.

    Each window is (vec_fn, dist_one, stat_one, lo, hi, closed), where
    stat_one(t) = (curve(t) - x) . curve'(t) (or None to skip polishing).
    Local scan minima are refined by golden section and then polished on the
    stationarity equation; scan samples within tol of the global optimum that
    do not belong to a refined basin are kept as representatives so that flat
    near-optimal stretches still contribute to multiplicity counting.
    """
    refined = []   # (d, point, window_index, t)
    scans = []     # (ts, ds, pts, step, closed, window_index)
    for wi, (fn, dist_one, stat_one, lo, hi, closed) in enumerate(windows):
        if hi <= lo:
            continue
        if closed:
            ts = lo + (hi - lo) * np.arange(scan) / scan
            step = (hi - lo) / scan
        else:
            ts = np.linspace(lo, hi, scan)
            step = (hi - lo) / (scan - 1)
        pts = fn(ts)
        ds = np.linalg.norm(pts - x, axis=1)
        minima = local_minima_indices(ds, closed)
        if len(minima) > 32:
            # Plateau (near-equidistant stretch): the scan itself is the best
            # available answer; refinement of every sample would be wasted.
            for i in minima:
                refined.append((float(ds[i]), pts[i], wi, float(ts[i])))
        else:
            for i in minima:
                if closed:
                    a, b = ts[i] - step, ts[i] + step
                else:
                    a, b = max(lo, ts[i] - step), min(hi, ts[i] + step)
                t_star, d_star = golden_section(dist_one, a, b)
                at_edge = not closed and (
                    t_star - lo < 1e-6 * step or hi - t_star < 1e-6 * step
                )
                if stat_one is not None and not at_edge:
                    p_lo, p_hi = a - step, b + step
                    if not closed:
                        p_lo, p_hi = max(lo, p_lo), min(hi, p_hi)
                    t_pol = stationary_polish(stat_one, t_star, p_lo, p_hi,
                                              step0=max(1e-9, 1e-4 * step))
                    d_pol = dist_one(t_pol)
                    if d_pol <= d_star + 1e-12:
                        t_star, d_star = t_pol, d_pol
                refined.append((d_star, fn(np.array([t_star]))[0], wi, t_star))
        scans.append((ts, ds, pts, step, closed, wi))

    if not refined:
        raise InvalidSpec("projection found no boundary candidates")
    d_min = min(r[0] for r in refined)

    dists = [r[0] for r in refined]
    points = [r[1] for r in refined]
    # Plateau representatives: scan samples tied with the optimum at measurement
    # resolution (not merely within the caller's tol - a shallow smooth valley
    # is still a single minimizer) and outside every refined basin.
    flat_tol = max(1e-12, 1e-9 * d_min)
    for ts, ds, pts, step, closed, wi in scans:
        near = ds <= d_min + flat_tol
        if not np.any(near):
            continue
        ref_ts = np.asarray([r[3] for r in refined if r[2] == wi])
        for i in np.nonzero(near)[0]:
            if len(ref_ts) and np.min(np.abs(ref_ts - ts[i])) <= 1.5 * step:
                continue
            dists.append(float(ds[i]))
            points.append(pts[i])
    return Candidates(np.asarray(dists), np.stack(points))


def _vec_param_minimize(pts: np.ndarray, fn, lo, hi, closed: bool,
                        scan: int = SCAN_SAMPLES) -> np.ndarray:
    """Per-query parameter of the global distance minimum along one curve.

    ``lo``/``hi`` may be scalars or per-query arrays; ``fn`` maps a parameter
    array of any shape to points with one extra trailing axis.
    """
    n = len(pts)
    lo = np.broadcast_to(np.asarray(lo, dtype=float), (n,))
    hi = np.broadcast_to(np.asarray(hi, dtype=float), (n,))
    u = np.arange(scan) / scan if closed else np.linspace(0.0, 1.0, scan)
    ts = lo[:, None] + (hi - lo)[:, None] * u[None, :]
    d = np.linalg.norm(fn(ts) - pts[:, None, :], axis=2)
    i = np.argmin(d, axis=1)
    step = (hi - lo) / (scan if closed else scan - 1)
    t_best = ts[np.arange(n), i]
    a = t_best - step
    b = t_best + step
    if not closed:
        a = np.maximum(a, lo)
        b = np.minimum(b, hi)

    def objective(t):
        return np.linalg.norm(fn(t) - pts, axis=1)

    t_ref, _ = golden_section_vec(objective, a, b)
    return t_ref


# ---------------------------------------------------------------------------
# Construction from declarative specs
# ---------------------------------------------------------------------------

_SHAPE_TYPES = {
    "disk": Disk,
    "ellipse": Ellipse,
    "halfspace": HalfSpace,
    "polygon": Polygon,
    "spiral": Spiral,
    "cusp": Cusp,
}


def make_shape(spec) -> Shape:
    """Build a validated shape from a spec mapping (or pass a shape through).

    Spec schema: {"type": "disk"|"ellipse"|"halfspace"|"polygon"|"spiral"|"cusp",
    ...type-specific fields...}; see the shape classes for field names.
    """
    if isinstance(spec, Shape):
        return spec
    if not isinstance(spec, dict):
        raise InvalidSpec(f"shape spec must be a mapping, got {type(spec).__name__}")
    kind = spec.get("type")
    if kind not in _SHAPE_TYPES:
        raise InvalidSpec(f"unknown shape type {kind!r}")
    kwargs = {k: v for k, v in spec.items() if k != "type"}
    try:
        return _SHAPE_TYPES[kind](**kwargs)
    except TypeError as exc:
        raise InvalidSpec(f"bad fields for shape type {kind!r}: {exc}") from exc


def shape_spec(shape: Shape) -> dict:
    """Inverse of make_shape: a JSON-serializable spec mapping."""
    if isinstance(shape, Disk):
        return {"type": "disk", "center": shape.center.tolist(), "radius": shape.radius}
    if isinstance(shape, Ellipse):
        return {
            "type": "ellipse",
            "semi_axes": shape.semi_axes.tolist(),
            "center": shape.center.tolist(),
        }
    if isinstance(shape, HalfSpace):
        return {
            "type": "halfspace",
            "unit_normal": shape.unit_normal.tolist(),
            "offset": shape.offset,
        }
    if isinstance(shape, Polygon):
        return {"type": "polygon", "vertices": shape.vertices.tolist()}
    if isinstance(shape, Spiral):
        return {
            "type": "spiral",
            "beta": shape.beta,
            "theta_min": shape.theta_min,
            "theta_max": shape.theta_max,
            "wall": shape.wall,
        }
    if isinstance(shape, Cusp):
        return {"type": "cusp", "alpha": shape.alpha}
    raise InvalidSpec(f"cannot serialize shape of type {type(shape).__name__}")
