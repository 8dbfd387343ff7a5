"""First-order fast marching for |grad u| = 1 with u = 0 on the boundary.

The solver freezes every grid node within two spacings of the boundary to its
exact signed distance, then fills each sign region independently with the
standard upwind quadratic update driven by a min-heap narrow band, and merges
the two regions with the inside-positive sign convention.  Level sets are
extracted with linear interpolation along cell edges (marching squares), and
the distance-to-level-set identity dist(y, S_a) = u(y) - a can be verified
against a dense sampling of the analytic level set.
"""

from __future__ import annotations

import heapq
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyBand, InvalidSpec, InvalidTube, LevelOutOfRange
from .projection import nearest_points, signed_distance_many
from .shapes import Shape, as_points


@dataclass(frozen=True)
class GridSpec:
    """Uniform isotropic node grid: node (i_1..i_m) sits at origin + i * h."""

    origin: np.ndarray
    h: float
    dims: tuple[int, ...]

    def __init__(self, origin, h, dims):
        origin = np.atleast_1d(np.asarray(origin, dtype=float))
        dims = tuple(int(d) for d in dims)
        if len(dims) != origin.shape[0] or len(dims) not in (2, 3):
            raise InvalidSpec("grid must be 2-d or 3-d with matching origin")
        if h <= 0 or any(d < 2 for d in dims):
            raise InvalidSpec("grid needs positive spacing and at least 2 nodes per axis")
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "h", float(h))
        object.__setattr__(self, "dims", dims)

    @classmethod
    def from_bbox(cls, lo, hi, n_cells: int) -> "GridSpec":
        """Grid with n_cells cells per axis over [lo, hi]; spacing must be isotropic."""
        lo = np.atleast_1d(np.asarray(lo, dtype=float))
        hi = np.atleast_1d(np.asarray(hi, dtype=float))
        if np.any(hi <= lo):
            raise InvalidSpec("bbox min must be below bbox max on every axis")
        hs = (hi - lo) / n_cells
        if np.max(hs) - np.min(hs) > 1e-12 * np.max(hs):
            raise InvalidSpec("bbox must give the same spacing on every axis")
        return cls(lo, float(hs[0]), tuple([n_cells + 1] * len(lo)))

    @property
    def n_nodes(self) -> int:
        return int(np.prod(self.dims))

    def nodes(self) -> np.ndarray:
        axes = [self.origin[d] + self.h * np.arange(self.dims[d]) for d in range(len(self.dims))]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)


@dataclass
class GridField:
    """Grid eikonal solution; +inf marks nodes unreachable from the band."""

    spec: GridSpec
    values: np.ndarray       # flat, row-major
    frozen: np.ndarray       # flat bool, exact-initialization band
    acceptance: list | None = None  # per-region accepted values, in order

    def values_nd(self) -> np.ndarray:
        return self.values.reshape(self.spec.dims)

    def frozen_nd(self) -> np.ndarray:
        return self.frozen.reshape(self.spec.dims)


def _quadratic_update(avals: list[float], h: float) -> float:
    """Upwind update from per-axis accepted minima, largest consistent stencil.

    Axes are added in increasing order while the running candidate exceeds the
    next axis value; a negative discriminant or an inconsistent root falls back
    to the one-sided (Dijkstra-like) value.
    """
    avals.sort()
    u = avals[0] + h
    if len(avals) > 1 and u > avals[1]:
        a, b = avals[0], avals[1]
        disc = 2.0 * h * h - (a - b) * (a - b)
        if disc >= 0.0:
            cand = 0.5 * ((a + b) + math.sqrt(disc))
            if cand >= b:
                u = cand
    if len(avals) > 2 and u > avals[2]:
        s1 = avals[0] + avals[1] + avals[2]
        s2 = avals[0] ** 2 + avals[1] ** 2 + avals[2] ** 2
        disc = s1 * s1 - 3.0 * (s2 - h * h)
        if disc >= 0.0:
            cand = (s1 + math.sqrt(disc)) / 3.0
            if cand >= avals[2]:
                u = cand
    return u


def _march_region(dims, h: float, alive: np.ndarray, seed_idx: np.ndarray,
                  seed_val: np.ndarray):
    """Fast-march one sign region; returns (flat distances, acceptance order)."""
    m = len(dims)
    n = int(np.prod(dims))
    strides = [int(np.prod(dims[d + 1 :])) for d in range(m)]
    dist = [math.inf] * n
    state = bytearray(n)  # 0 far, 1 narrow, 2 accepted
    alive_list = alive.tolist()
    heap: list[tuple[float, int]] = []
    for i, v in zip(seed_idx.tolist(), seed_val.tolist()):
        dist[i] = v
        heap.append((v, i))
    heapq.heapify(heap)
    order: list[float] = []

    def update(j: int) -> float:
        avals = []
        for d in range(m):
            s = strides[d]
            c = (j // s) % dims[d]
            best = math.inf
            if c > 0 and state[j - s] == 2:
                best = dist[j - s]
            if c < dims[d] - 1 and state[j + s] == 2 and dist[j + s] < best:
                best = dist[j + s]
            if best < math.inf:
                avals.append(best)
        return _quadratic_update(avals, h)

    while heap:
        v, i = heapq.heappop(heap)
        if state[i] == 2:
            continue
        state[i] = 2
        order.append(v)
        for d in range(m):
            s = strides[d]
            c = (i // s) % dims[d]
            for j, ok in ((i - s, c > 0), (i + s, c < dims[d] - 1)):
                if not ok or state[j] == 2 or not alive_list[j]:
                    continue
                u = update(j)
                if u < dist[j]:
                    dist[j] = u
                    state[j] = 1
                    heapq.heappush(heap, (u, j))
    return dist, order


def solve_fmm(shape: Shape, grid: GridSpec, band_width: float = 2.0) -> GridField:
    """Grid signed-distance approximation by first-order fast marching.

    Nodes within band_width * h of the boundary are frozen to exact signed
    distance; the inside and outside regions are then solved independently on
    the unsigned distance and sign-merged.  Raises EmptyBand when no node lies
    in the initialization band.
    """
    nodes = grid.nodes()
    sd = signed_distance_many(shape, nodes)
    inside = sd > 0.0
    frozen = np.abs(sd) <= band_width * grid.h
    if not np.any(frozen):
        raise EmptyBand("grid does not intersect the boundary band")

    mag = np.full(grid.n_nodes, np.inf)
    acceptance = []
    for region in (inside, ~inside):
        seeds = np.nonzero(region & frozen)[0]
        if len(seeds) == 0:
            continue
        dist, order = _march_region(grid.dims, grid.h, region, seeds, np.abs(sd[seeds]))
        sel = np.nonzero(region)[0]
        mag[sel] = np.asarray(dist, dtype=float)[sel]
        acceptance.append(order)

    values = np.where(np.isfinite(mag), np.where(inside, mag, -mag), np.inf)
    values[frozen] = sd[frozen]
    return GridField(spec=grid, values=values, frozen=frozen, acceptance=acceptance)


# ---------------------------------------------------------------------------
# Level sets (marching squares)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LevelSet:
    """Polyline chains of one level of a grid field (2-d only)."""

    level: float
    chains: list  # list of (k, 2) vertex arrays


def extract_level_set(field: GridField, a: float) -> LevelSet:
    """Marching-squares isocontour with linear edge interpolation.

    Segments are oriented with the higher-value side on the left, so closed
    chains run counter-clockwise around regions above the level.  Saddle cells
    are disambiguated by the cell-average value.
    """
    if len(field.spec.dims) != 2:
        raise InvalidSpec("level-set extraction is 2-d only")
    vals = field.values_nd()
    finite = np.isfinite(vals)
    if not np.any(finite) or not (np.min(vals[finite]) <= a <= np.max(vals[finite])):
        raise LevelOutOfRange(f"level {a} outside the field range")
    f = vals - a
    nx, ny = field.spec.dims
    ox, oy = field.spec.origin
    h = field.spec.h

    crossings: dict[tuple[int, int, int], tuple[float, float]] = {}

    def crossing(i0, j0, i1, j1):
        """Crossing point on the edge between two nodes, computed once per edge."""
        if (i1, j1) < (i0, j0):
            i0, j0, i1, j1 = i1, j1, i0, j0
        key = (i0, j0, i1 * ny + j1)
        pt = crossings.get(key)
        if pt is None:
            fa, fb = f[i0, j0], f[i1, j1]
            t = fa / (fa - fb)
            pt = (ox + h * (i0 + t * (i1 - i0)), oy + h * (j0 + t * (j1 - j0)))
            crossings[key] = pt
        return pt

    segments: list[tuple[tuple, tuple]] = []
    corner_off = ((0, 0), (1, 0), (1, 1), (0, 1))  # CCW cell walk
    for i in range(nx - 1):
        for j in range(ny - 1):
            fc = [f[i + di, j + dj] for di, dj in corner_off]
            if not all(np.isfinite(fc)):
                continue
            pos = [v >= 0.0 for v in fc]
            if all(pos) or not any(pos):
                continue
            leaves, enters = [], []
            for k in range(4):
                k2 = (k + 1) % 4
                if pos[k] == pos[k2]:
                    continue
                di0, dj0 = corner_off[k]
                di1, dj1 = corner_off[k2]
                pt = crossing(i + di0, j + dj0, i + di1, j + dj1)
                (leaves if pos[k] else enters).append((k, pt))
            if len(leaves) == 1:
                segments.append((leaves[0][1], enters[0][1]))
            else:
                # Saddle: the cell average decides which corners connect, i.e.
                # whether each leave crossing joins the next or the previous
                # enter crossing along the CCW cell walk.
                en = dict(enters)
                en_keys = sorted(en)
                for kl, p_from in sorted(leaves):
                    if sum(fc) >= 0.0:
                        ke = min((k for k in en_keys if k > kl), default=en_keys[0])
                    else:
                        ke = max((k for k in en_keys if k < kl), default=en_keys[-1])
                    segments.append((p_from, en[ke]))

    return LevelSet(level=float(a), chains=_assemble_chains(segments))


def _assemble_chains(segments) -> list:
    succ = {}
    indeg = {}
    for p, q in segments:
        succ[p] = q
        indeg[q] = indeg.get(q, 0) + 1
        indeg.setdefault(p, indeg.get(p, 0))

    chains = []
    visited = set()

    def walk(start):
        chain = [start]
        visited.add(start)
        cur = start
        while cur in succ:
            nxt = succ[cur]
            chain.append(nxt)
            if nxt in visited:
                break
            visited.add(nxt)
            cur = nxt
        return chain

    starts = sorted(p for p in succ if indeg.get(p, 0) == 0)
    for s in starts:
        chains.append(walk(s))
    remaining = sorted(p for p in succ if p not in visited)
    while remaining:
        # Closed loop: start from the lexicographically smallest vertex.
        chains.append(walk(remaining[0]))
        remaining = sorted(p for p in succ if p not in visited)

    out = [np.asarray(c) for c in chains]
    out.sort(key=lambda c: (len(c) == 0, tuple(c[0]) if len(c) else ()))
    return out


# ---------------------------------------------------------------------------
# Level-distance identity and grid error
# ---------------------------------------------------------------------------

def verify_level_distance(shape: Shape, a: float, samples, spacing: float = 1e-5) -> float:
    """Max residual of dist(y, S_a) = d(y) - a over the given tube samples.

    The level set S_a = {d = a} (a > 0) is sampled densely by offsetting
    boundary samples along inner normals; the residual compares the brute-force
    minimum distance against d(y) - a.  Samples must satisfy d(y) > a and sit
    on a characteristic that extends beyond them without meeting the medial
    axis, else InvalidTube is raised.
    """
    if a <= 0:
        raise InvalidTube("the level must be positive (inside the domain)")
    samples = as_points(samples, shape.dim)
    d_s = signed_distance_many(shape, samples)
    if np.any(d_s <= a):
        raise InvalidTube("every sample must satisfy d(y) > a")
    for y, dy in zip(samples, d_s):
        res = nearest_points(shape, y, 1e-8)
        if res.multiplicity != 1:
            raise InvalidTube("sample has a non-unique projection")
        g = (y - res.points[0]) / dy
        ext = y + 0.05 * (dy - a) * g
        res_ext = nearest_points(shape, ext, 1e-8)
        if res_ext.multiplicity != 1:
            raise InvalidTube("extended characteristic meets the medial axis")

    pts, normals = shape.boundary_sample_with_normals(spacing)
    level_pts = pts + a * normals
    # Spot-validate the offset construction on a subsample.
    idx = np.linspace(0, len(level_pts) - 1, min(64, len(level_pts))).astype(int)
    check = signed_distance_many(shape, level_pts[idx])
    if np.max(np.abs(check - a)) > 1e-7:
        raise InvalidTube("offset construction does not reach the level set")

    worst = 0.0
    for y, dy in zip(samples, d_s):
        dmin = math.inf
        for i in range(0, len(level_pts), 262144):
            block = level_pts[i : i + 262144]
            dmin = min(dmin, float(np.min(np.linalg.norm(block - y, axis=1))))
        worst = max(worst, abs(dmin - (dy - a)))
    return worst


@dataclass(frozen=True)
class GridErrorReport:
    max_abs: float
    mean_abs: float
    order_estimate: float | None = None


def grid_error(field: GridField, shape: Shape, refined: GridField | None = None,
               where: np.ndarray | None = None) -> GridErrorReport:
    """Per-node error against the exact signed distance.

    ``refined`` (same box, half the spacing) adds the empirical convergence
    order log2(max_err_h / max_err_h/2).  ``where`` restricts the comparison.
    """
    def max_mean(fld, mask):
        exact = signed_distance_many(shape, fld.spec.nodes())
        err = np.abs(fld.values - exact)
        ok = np.isfinite(fld.values)
        if mask is not None:
            ok &= mask
        return float(np.max(err[ok])), float(np.mean(err[ok]))

    max_abs, mean_abs = max_mean(field, where)
    order = None
    if refined is not None:
        r_max, _ = max_mean(refined, None)
        if r_max > 0 and max_abs > 0:
            order = math.log2(max_abs / r_max)
    return GridErrorReport(max_abs, mean_abs, order)


# ---------------------------------------------------------------------------
# Serialization (17-significant-digit round-trip)
# ---------------------------------------------------------------------------

def _fmt(v: float) -> str:
    return format(v, ".17g")


def grid_to_csv(field: GridField) -> str:
    buf = io.StringIO()
    buf.write("dims," + ",".join(str(d) for d in field.spec.dims) + "\n")
    buf.write("origin," + ",".join(_fmt(v) for v in field.spec.origin) + "\n")
    buf.write("h," + _fmt(field.spec.h) + "\n")
    buf.write("values\n")
    row = field.spec.dims[-1]
    flat = field.values
    for i in range(0, len(flat), row):
        buf.write(",".join(_fmt(v) for v in flat[i : i + row]) + "\n")
    buf.write("frozen\n")
    fz = field.frozen.astype(int)
    for i in range(0, len(fz), row):
        buf.write(",".join(str(v) for v in fz[i : i + row]) + "\n")
    return buf.getvalue()


def grid_from_csv(text: str) -> GridField:
    lines = [ln for ln in text.strip().splitlines() if ln]
    dims = tuple(int(v) for v in lines[0].split(",")[1:])
    origin = [float(v) for v in lines[1].split(",")[1:]]
    h = float(lines[2].split(",")[1])
    assert lines[3] == "values"
    n = int(np.prod(dims))
    row = dims[-1]
    n_rows = n // row
    vals = []
    for ln in lines[4 : 4 + n_rows]:
        vals.extend(float(v) for v in ln.split(","))
    assert lines[4 + n_rows] == "frozen"
    fz = []
    for ln in lines[5 + n_rows : 5 + 2 * n_rows]:
        fz.extend(int(v) for v in ln.split(","))
    return GridField(
        spec=GridSpec(origin, h, dims),
        values=np.asarray(vals),
        frozen=np.asarray(fz, dtype=bool),
    )


def grid_to_json(field: GridField) -> str:
    payload = {
        "meta": {
            "dims": list(field.spec.dims),
            "origin": [float(v) for v in field.spec.origin],
            "h": field.spec.h,
        },
        "values": [None if not np.isfinite(v) else float(v) for v in field.values],
        "frozen": field.frozen.astype(int).tolist(),
    }
    return json.dumps(payload)


def grid_from_json(text: str) -> GridField:
    payload = json.loads(text)
    meta = payload["meta"]
    vals = np.asarray(
        [np.inf if v is None else float(v) for v in payload["values"]], dtype=float
    )
    return GridField(
        spec=GridSpec(meta["origin"], meta["h"], tuple(meta["dims"])),
        values=vals,
        frozen=np.asarray(payload["frozen"], dtype=bool),
    )
