"""Plane configurations, oriented area, and the cyclic-polygon machinery.

A cyclic polygon with edge lengths l_i inscribed in a circle of radius R has
half-angles alpha_i = arcsin(l_i / 2R) in (0, pi/2] and edge signs eps_i = +1
when the center lies strictly left of the directed edge.  Closure reads

    F(R) = sum_i eps_i * arcsin(l_i / 2R) - pi * omega = 0

for an integer winding omega, and every labeled cyclic configuration with no
edge through the center appears for exactly one (eps, omega) pair.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import DEFAULT_TOLS, Tolerances
from .errors import (
    DegenerateCenterError,
    DegenerateTriangleError,
    NonGenericError,
    NotConcyclicError,
    NotPTTError,
)
from .graphs import DistinguishedCycle, LinkageGraph, sp_decompose

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# configurations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Configuration:
    """Plane coordinates for every vertex of a linkage."""

    coords: dict[str, tuple[float, float]]

    def point(self, v: str) -> np.ndarray:
        return np.asarray(self.coords[v], dtype=float)

    def points(self, vs: Sequence[str]) -> np.ndarray:
        return np.array([self.coords[v] for v in vs], dtype=float)

    def validate(self, g: LinkageGraph, tols: Tolerances = DEFAULT_TOLS) -> None:
        for u, v, length in g.edges:
            d = float(np.hypot(*(self.point(u) - self.point(v))))
            if abs(d - length) > tols.rel_length * max(1.0, length):
                raise ValueError(
                    f"edge ({u},{v}) has length {d!r}, expected {length!r}")

    def to_json_dict(self) -> dict:
        return {"coords": {v: [x, y] for v, (x, y) in sorted(self.coords.items())}}

    @staticmethod
    def from_json_dict(d: dict) -> "Configuration":
        return Configuration({str(v): (float(x), float(y))
                              for v, (x, y) in d["coords"].items()})


def oriented_area(c: Configuration, cycle: DistinguishedCycle) -> float:
    """Signed shoelace area of the cycle; flips under orientation reversal."""
    pts = c.points(cycle.vertices)
    return shoelace(pts)


def shoelace(pts: np.ndarray) -> float:
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def is_aligned(c: Configuration, path: Sequence[str], tol: float) -> bool:
    """True when all path vertices lie within tol of their least-squares line."""
    pts = c.points(path)
    return aligned_residual(pts) <= tol


def aligned_residual(pts: np.ndarray) -> float:
    """Largest perpendicular distance to the least-squares line."""
    if len(pts) <= 2:
        return 0.0
    centered = pts - pts.mean(axis=0)
    # principal direction of the 2x2 scatter matrix
    _, svecs = np.linalg.eigh(centered.T @ centered)
    normal = svecs[:, 0]  # eigenvector of the smaller eigenvalue
    return float(np.max(np.abs(centered @ normal)))


# ---------------------------------------------------------------------------
# rigid motions
# ---------------------------------------------------------------------------

def rigid_align(src: np.ndarray, dst: np.ndarray):
    """Best rotation+translation (no reflection) mapping src onto dst.

    Returns (R, t) with R a 2x2 rotation so that src @ R.T + t ~ dst.
    """
    sc, dc = src.mean(axis=0), dst.mean(axis=0)
    a, b = src - sc, dst - dc
    num = float(np.sum(a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]))
    den = float(np.sum(a * b))
    phi = math.atan2(num, den)
    R = rotation(phi)
    t = dc - R @ sc
    return R, t


def rotation(phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s], [s, c]])


def aligned_distance(src: np.ndarray, dst: np.ndarray) -> float:
    """Max pointwise distance after optimal orientation-preserving alignment."""
    R, t = rigid_align(src, dst)
    moved = src @ R.T + t
    return float(np.max(np.hypot(*(moved - dst).T)))


def transform_mapping_segment(p_from: np.ndarray, q_from: np.ndarray,
                              p_to: np.ndarray, q_to: np.ndarray):
    """Rotation+translation taking segment (p_from,q_from) to (p_to,q_to)."""
    a = q_from - p_from
    b = q_to - p_to
    phi = math.atan2(b[1], b[0]) - math.atan2(a[1], a[0])
    R = rotation(phi)
    t = p_to - R @ p_from
    return R, t


# ---------------------------------------------------------------------------
# cyclic polygons
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CyclicPolygon:
    """Polygon inscribed in a circle, with the sign/half-angle/winding data."""

    lengths: tuple[float, ...]
    center: tuple[float, float]
    radius: float
    vertices: tuple[tuple[float, float], ...]
    eps: tuple[int, ...]
    alphas: tuple[float, ...]
    omega: int
    flags: frozenset[str] = frozenset()

    @property
    def n(self) -> int:
        return len(self.lengths)

    @property
    def e(self) -> int:
        return sum(1 for s in self.eps if s > 0)

    @property
    def area(self) -> float:
        return shoelace(np.asarray(self.vertices))

    def vertex_array(self) -> np.ndarray:
        return np.asarray(self.vertices, dtype=float)

    def validate(self, tols: Tolerances = DEFAULT_TOLS) -> None:
        pts = self.vertex_array()
        o = np.asarray(self.center)
        scale = sum(self.lengths)
        if np.max(np.abs(np.hypot(*(pts - o).T) - self.radius)) > 1e-8 * self.radius:
            raise ValueError("vertices not on the circle")
        for k in range(self.n):
            if abs(self.lengths[k] - 2 * self.radius * math.sin(self.alphas[k])) \
                    > tols.rel_length * scale:
                raise ValueError("length/half-angle mismatch")
        if abs(sum(e * a for e, a in zip(self.eps, self.alphas)) - math.pi * self.omega) \
                > 1e-7:
            raise ValueError("winding mismatch")
        closure = pts[0] - pts[-1]
        edge = np.hypot(*closure)
        if abs(edge - self.lengths[-1]) > 1e-9 * scale:
            raise ValueError("closure edge off tolerance")

    def to_json_dict(self) -> dict:
        return {
            "lengths": list(self.lengths),
            "center": list(self.center),
            "radius": self.radius,
            "vertices": [list(p) for p in self.vertices],
            "eps": list(self.eps),
            "alphas": list(self.alphas),
            "omega": self.omega,
            "e": self.e,
            "area": self.area,
            "flags": sorted(self.flags),
        }


def _build_cyclic(lengths, eps, omega, radius, flags=frozenset()) -> CyclicPolygon:
    lengths = tuple(float(x) for x in lengths)
    alphas = tuple(math.asin(min(1.0, length / (2.0 * radius))) for length in lengths)
    phi = 0.0
    verts = []
    for k in range(len(lengths)):
        verts.append((radius * math.cos(phi), radius * math.sin(phi)))
        phi += 2.0 * eps[k] * alphas[k]
    poly = CyclicPolygon(lengths, (0.0, 0.0), float(radius), tuple(verts),
                         tuple(int(s) for s in eps), alphas, int(omega), flags)
    # closure residual must sit well inside the stated budget
    end = np.array([radius * math.cos(phi), radius * math.sin(phi)])
    if np.hypot(*(end - np.asarray(verts[0]))) > 1e-9 * sum(lengths):
        raise NonGenericError("cyclic solution failed closure residual check")
    return poly


def _omega_range(n: int) -> range:
    return range(-(n // 2), n // 2 + 1)


def _radius_grid(lengths: np.ndarray, eps: np.ndarray, n_grid: int) -> np.ndarray:
    """Log-spaced radius samples covering every closure root for this sign vector."""
    lmax = float(lengths.max())
    total = float(lengths.sum())
    n = len(lengths)
    r_min = lmax / 2.0
    # beyond r_crit the arcsin part stays below pi/(4n), so windings != 0 are done
    r_crit = lmax / (2.0 * math.sin(math.pi / (4.0 * n * n)))
    # for winding 0 the root tail is bounded via sum(eps*l); guard the wall case
    d = abs(float(np.dot(eps, lengths)))
    d = max(d, 1e-9 * total)
    r_tail = 0.75 * lmax * math.sqrt(total / d)
    r_hi = max(r_crit, r_tail, 4.0 * r_min)
    return np.geomspace(r_min, r_hi, n_grid)


def _closure_fn(lengths: np.ndarray, eps: np.ndarray):
    def F(r):
        return float(np.dot(eps, np.arcsin(np.minimum(1.0, lengths / (2.0 * r)))))
    return F


def _bisect(F, lo, hi, target, iters=200):
    flo = F(lo) - target
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = F(mid) - target
        if fm == 0.0:
            return mid
        if (flo < 0) == (fm < 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    return 0.5 * (lo + hi)


def _roots_for_sign_vector(lengths: np.ndarray, eps: np.ndarray,
                           tols: Tolerances) -> list[tuple[int, float]]:
    """(omega, R) roots of the closure condition for one sign vector."""
    grid = _radius_grid(lengths, eps, tols.grid_points)
    vals = (np.arcsin(np.minimum(1.0, lengths[:, None] / (2.0 * grid[None, :])))
            * eps[:, None]).sum(axis=0)
    F = _closure_fn(lengths, eps)
    n = len(lengths)
    roots: list[tuple[int, float]] = []
    for omega in _omega_range(n):
        target = math.pi * omega
        diff = vals - target
        if np.max(np.abs(diff)) < 1e-12:
            logger.warning("degenerate closure: F is identically pi*omega; skipping cell")
            continue
        if abs(diff[0]) < 1e-13:
            roots.append((omega, float(grid[0])))
        sign = np.sign(diff)
        sign[sign == 0] = 1
        hits = np.nonzero(sign[:-1] != sign[1:])[0]
        for idx in hits:
            r = _bisect(F, float(grid[idx]), float(grid[idx + 1]), target)
            roots.append((omega, r))
    # collapse numerically identical roots of one cell
    out: list[tuple[int, float]] = []
    for omega, r in sorted(roots):
        if not any(o == omega and abs(r - r0) <= 1e-11 * r for o, r0 in out):
            out.append((omega, r))
    return out


def solve_cyclic(lengths: Sequence[float], eps: Sequence[int], omega: int,
                 tols: Tolerances = DEFAULT_TOLS) -> CyclicPolygon | None:
    """Cyclic polygon for one (eps, omega) cell, or None when no root exists.

    When the closure function has several roots in the cell the one with the
    smallest radius is returned; enumerate_cyclic reports them all.
    """
    sols = solve_cyclic_all(lengths, eps, omega, tols)
    return sols[0] if sols else None


def solve_cyclic_all(lengths: Sequence[float], eps: Sequence[int], omega: int,
                     tols: Tolerances = DEFAULT_TOLS) -> list[CyclicPolygon]:
    lengths = [float(x) for x in lengths]
    n = len(lengths)
    if n < 3:
        raise ValueError("need at least 3 edges")
    if any(l <= 0 for l in lengths):
        raise ValueError("lengths must be positive")
    if len(eps) != n or any(s not in (-1, 1) for s in eps):
        raise ValueError("eps must be a vector of +1/-1 of matching size")
    total = sum(lengths)
    if 2 * max(lengths) >= total + tols.rel_length * total:
        raise ValueError("longest edge exceeds the sum of the others; no closed polygon")
    arr = np.asarray(lengths)
    eps_arr = np.asarray(eps, dtype=float)
    out = []
    for om, r in _roots_for_sign_vector(arr, eps_arr, tols):
        if om != omega:
            continue
        flags = set()
        if omega == 0:
            flags.add("omega_zero")
        if any(abs(l - 2 * r) <= 1e-12 * total for l in lengths):
            flags.add("diameter_edge")
        out.append(_build_cyclic(lengths, eps, omega, r, frozenset(flags)))
    return out


def enumerate_cyclic(lengths: Sequence[float],
                     tols: Tolerances = DEFAULT_TOLS) -> list[CyclicPolygon]:
    """All cyclic configurations of a polygonal linkage.

    Scans every sign vector with first entry +1 and derives the mirror
    solutions (eps -> -eps, omega -> -omega, equal radius), so both
    orientations are kept.  Results are sorted by (omega, sign bitmask,
    radius) and deduplicated up to rotation about the center.
    """
    lengths = [float(x) for x in lengths]
    n = len(lengths)
    if n < 3:
        raise ValueError("need at least 3 edges")
    total = sum(lengths)
    if 2 * max(lengths) >= total * (1 - 1e-12):
        return []
    arr = np.asarray(lengths)
    sols: list[CyclicPolygon] = []
    for mask in range(2 ** (n - 1)):
        eps = [1] + [1 if (mask >> k) & 1 == 0 else -1 for k in range(n - 1)]
        eps_arr = np.asarray(eps, dtype=float)
        for omega, r in _roots_for_sign_vector(arr, eps_arr, tols):
            flags = {"omega_zero"} if omega == 0 else set()
            if any(abs(l - 2 * r) <= 1e-12 * total for l in lengths):
                flags.add("diameter_edge")
            sols.append(_build_cyclic(lengths, eps, omega, r, frozenset(flags)))
            mirror = [-s for s in eps]
            sols.append(_build_cyclic(lengths, mirror, -omega, r, frozenset(flags)))

    sols.sort(key=_cyclic_sort_key)
    _flag_coincident(sols, total)
    return sols


def _cyclic_sort_key(p: CyclicPolygon):
    bitmask = sum((1 << k) for k, s in enumerate(p.eps) if s > 0)
    return (p.omega, bitmask, p.radius)


def _flag_coincident(sols: list[CyclicPolygon], scale: float) -> None:
    for a in range(len(sols)):
        for b in range(a + 1, len(sols)):
            pa, pb = sols[a], sols[b]
            if abs(pa.radius - pb.radius) > 1e-7 * scale:
                continue
            if np.max(np.abs(pa.vertex_array() - pb.vertex_array())) <= 1e-7 * scale:
                logger.warning("two cyclic solutions coincide within tolerance")
                sols[a] = _with_flag(pa, "coincident")
                sols[b] = _with_flag(pb, "coincident")


def _with_flag(p: CyclicPolygon, flag: str) -> CyclicPolygon:
    return CyclicPolygon(p.lengths, p.center, p.radius, p.vertices, p.eps,
                         p.alphas, p.omega, p.flags | {flag})


def circle_data(c: Configuration, cycle: DistinguishedCycle,
                tols: Tolerances = DEFAULT_TOLS) -> CyclicPolygon:
    """Extract the cyclic-polygon data of a realized cycle.

    Fits the circle exactly through the first three vertices and verifies the
    rest; raises NotConcyclicError (with the worst deviation) otherwise, and
    DegenerateCenterError when the center sits on an edge line.
    """
    pts = c.points(cycle.vertices)
    return cyclic_data_from_points(pts, tols)


def cyclic_data_from_points(pts: np.ndarray,
                            tols: Tolerances = DEFAULT_TOLS) -> CyclicPolygon:
    n = len(pts)
    center = _circumcenter(pts[0], pts[1], pts[2])
    radius = float(np.hypot(*(pts[0] - center)))
    dev = np.abs(np.hypot(*(pts - center).T) - radius)
    max_dev = float(dev.max())
    if max_dev > tols.concyclicity * radius:
        raise NotConcyclicError(
            f"vertices deviate from the circle by up to {max_dev!r}", max_deviation=max_dev)
    lengths, eps, alphas = [], [], []
    for k in range(n):
        p, q = pts[k], pts[(k + 1) % n]
        edge = q - p
        ln = float(np.hypot(*edge))
        cross = edge[0] * (center[1] - p[1]) - edge[1] * (center[0] - p[0])
        if abs(cross) <= tols.concyclicity * radius * ln:
            raise DegenerateCenterError("circle center lies on an edge line")
        lengths.append(ln)
        eps.append(1 if cross > 0 else -1)
        alphas.append(math.asin(min(1.0, ln / (2.0 * radius))))
    w = sum(e * a for e, a in zip(eps, alphas)) / math.pi
    omega = round(w)
    if abs(w - omega) > 1e-6:
        raise NotConcyclicError(f"winding {w!r} is not an integer", max_deviation=max_dev)
    flags = {"omega_zero"} if omega == 0 else set()
    return CyclicPolygon(tuple(lengths), (float(center[0]), float(center[1])),
                         radius, tuple(map(tuple, pts)), tuple(eps), tuple(alphas),
                         int(omega), frozenset(flags))


def _circumcenter(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]))
    if d == 0.0:
        raise NotConcyclicError("first three vertices are collinear")
    ux = ((a @ a) * (b[1] - c[1]) + (b @ b) * (c[1] - a[1]) + (c @ c) * (a[1] - b[1])) / d
    uy = ((a @ a) * (c[0] - b[0]) + (b @ b) * (a[0] - c[0]) + (c @ c) * (b[0] - a[0])) / d
    return np.array([ux, uy])


# ---------------------------------------------------------------------------
# triangles and chains
# ---------------------------------------------------------------------------

def area_derivative_wrt_side(a: float, b: float, c: float) -> float:
    """d(area)/dc for a triangle with fixed sides a, b and variable side c.

    Equals the distance from the circumcenter to the midpoint of c, signed
    positive while the opposite angle is acute: (c/2) * cot(gamma).
    """
    for s in (a, b, c):
        if s <= 0:
            raise DegenerateTriangleError("sides must be positive")
    if a + b <= c or a + c <= b or b + c <= a:
        raise DegenerateTriangleError(f"({a},{b},{c}) violates the triangle inequality")
    cos_g = (a * a + b * b - c * c) / (2.0 * a * b)
    sin_g = math.sqrt(max(0.0, 1.0 - cos_g * cos_g))
    if sin_g == 0.0:
        raise DegenerateTriangleError("flat triangle")
    return 0.5 * c * cos_g / sin_g


def triangle_area(a: float, b: float, c: float) -> float:
    s = 0.5 * (a + b + c)
    val = s * (s - a) * (s - b) * (s - c)
    if val <= 0:
        raise DegenerateTriangleError(f"({a},{b},{c}) violates the triangle inequality")
    return math.sqrt(val)


def triangle_apex(a: float, b: float, w: float, up: bool = True) -> np.ndarray:
    """Apex of the triangle with base (0,0)-(w,0), |apex| = a, |apex-(w,0)| = b."""
    x = (w * w + a * a - b * b) / (2.0 * w)
    y2 = a * a - x * x
    if y2 <= 0:
        raise DegenerateTriangleError("apex does not exist for these sides")
    y = math.sqrt(y2)
    return np.array([x, y if up else -y])


@dataclass(frozen=True)
class ReachInterval:
    """Attainable endpoint distances of an open chain."""

    dmin: float
    dmax: float

    def contains_strictly(self, d: float, margin: float = 0.0) -> bool:
        return self.dmin + margin < d < self.dmax - margin

    def near_boundary(self, d: float, tol: float) -> bool:
        return abs(d - self.dmin) <= tol or abs(d - self.dmax) <= tol


def chain_reach(lengths: Sequence[float]) -> ReachInterval:
    if not lengths:
        raise ValueError("need at least one edge")
    total = float(sum(lengths))
    dmin = max(0.0, 2.0 * float(max(lengths)) - total)
    return ReachInterval(dmin, total)


def alignment_patterns(lengths: Sequence[float],
                       tol: float = 0.0) -> list[tuple[tuple[int, ...], float, int]]:
    """(sign pattern, endpoint distance w, forward count f) for every alignment.

    Patterns are kept only when the signed sum is strictly positive, which
    fixes the representative of each {sigma, -sigma} pair.
    """
    r = len(lengths)
    out = []
    for mask in range(2 ** r):
        sigma = tuple(1 if (mask >> k) & 1 == 0 else -1 for k in range(r))
        w = sum(s * l for s, l in zip(sigma, lengths))
        if w > tol:
            out.append((sigma, w, sum(1 for s in sigma if s > 0)))
    out.sort(key=lambda t: (-t[2], t[0]))
    return out


# ---------------------------------------------------------------------------
# wall / genericity report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WallEntry:
    edge_indices: tuple[int, ...]
    signs: tuple[int, ...]
    value: float


@dataclass(frozen=True)
class GenericityReport:
    entries: tuple[WallEntry, ...]  # one per simple cycle: the closest wall
    tol: float

    @property
    def clean(self) -> bool:
        return all(abs(e.value) >= self.tol for e in self.entries)

    @property
    def min_margin(self) -> float:
        return min((abs(e.value) for e in self.entries), default=math.inf)

    def warnings(self) -> list[WallEntry]:
        return [e for e in self.entries if abs(e.value) < self.tol]

    def to_json_dict(self) -> dict:
        return {
            "clean": self.clean,
            "tol": self.tol,
            "min_margin": self.min_margin,
            "cycles": [{"edges": list(e.edge_indices), "signs": list(e.signs),
                        "value": e.value} for e in self.entries],
        }


def wall_check(g: LinkageGraph, tol: float | None = None,
               tols: Tolerances = DEFAULT_TOLS) -> GenericityReport:
    """Closest signed length sum to zero over every simple cycle of g.

    A clean report certifies the working genericity assumption that no cycle
    can fit a straight line.
    """
    if tol is None:
        tol = tols.wall * g.total_length()
    cycles = simple_cycles_via_sp(g)
    entries = []
    for cyc in sorted(cycles, key=lambda c: (len(c), c)):
        lens = np.array([g.edges[k][2] for k in cyc])
        m = len(lens)
        masks = np.arange(2 ** (m - 1))
        signs = np.ones((len(masks), m))
        for b in range(m - 1):
            signs[:, b + 1] = np.where((masks >> b) & 1, -1.0, 1.0)
        sums = signs @ lens
        best = int(np.argmin(np.abs(sums)))
        entries.append(WallEntry(tuple(cyc), tuple(int(s) for s in signs[best]),
                                 float(sums[best])))
    return GenericityReport(tuple(entries), tol)


def simple_cycles_via_sp(g: LinkageGraph) -> list[tuple[int, ...]]:
    """Edge-index sets of all simple cycles, from the SP structure.

    Cycles live inside biconnected blocks, so each block is decomposed on
    its own (any adjacent pair serves as terminals there).
    """
    from .graphs import biconnected_blocks

    out: list[tuple[int, ...]] = []
    for block in biconnected_blocks(g):
        if len(block) == 1:
            continue
        vs = sorted({v for k in block for v in g.edges[k][:2]})
        sub = LinkageGraph(tuple(vs), tuple(g.edges[k] for k in block))
        for cyc in _block_cycles(sub):
            out.append(tuple(sorted(block[k] for k in cyc)))
    return sorted(set(out))


def _block_cycles(g: LinkageGraph) -> list[tuple[int, ...]]:
    pairs = sorted({tuple(sorted((u, v))) for u, v, _ in g.edges})
    tree = None
    for u, v in pairs:
        try:
            tree = sp_decompose(g, u, v)
            break
        except Exception:
            continue
    if tree is None:
        raise NotPTTError("cannot build an SP decomposition for wall analysis")

    edge_ids: dict[tuple[str, str, float], list[int]] = {}
    for k, e in enumerate(g.edges):
        edge_ids.setdefault(e, []).append(k)
    used: dict[tuple[str, str, float], int] = {}

    def take_id(u, v, length):
        for key in ((u, v, length), (v, u, length)):
            if key in edge_ids:
                idx = used.get(key, 0)
                if idx < len(edge_ids[key]):
                    used[key] = idx + 1
                    return edge_ids[key][idx]
        raise KeyError((u, v, length))

    cycles: list[frozenset[int]] = []

    def paths(node) -> list[frozenset[int]]:
        from .graphs import SPEdge, SPSeries
        if isinstance(node, SPEdge):
            return [frozenset((take_id(node.u, node.v, node.length),))]
        if isinstance(node, SPSeries):
            acc = [frozenset()]
            for child in node.children:
                child_paths = paths(child)
                acc = [a | p for a in acc for p in child_paths]
            return acc
        child_paths = [paths(child) for child in node.children]
        for i in range(len(child_paths)):
            for j in range(i + 1, len(child_paths)):
                for p in child_paths[i]:
                    for q in child_paths[j]:
                        cycles.append(p | q)
        return [p for group in child_paths for p in group]

    paths(tree)
    uniq = sorted({tuple(sorted(c)) for c in cycles})
    return [c for c in uniq if len(c) >= 2]
