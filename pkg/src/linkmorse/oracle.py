"""Independent numerical verification engine.

Works in an edge-angle chart: one absolute angle per edge, one gauge edge
frozen at angle zero (killing rotations), the root vertex at the origin
(killing translations), and a pair of closure equations per fundamental
cycle.  The chart dimension 2|V| - |E| - 3 equals the dimension of the
reduced configuration space at smooth points.

Objectives (oriented area of a cycle, distance of a vertex pair) carry
analytic gradients and Hessians; critical points come from Newton iteration
on the KKT system with least-squares multipliers, and indices from the
inertia of the Lagrangian Hessian restricted to the constraint tangent space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLS, RunConfig, Tolerances
from .errors import (
    CheckFailedError,
    NoConvergenceError,
    NotCriticalError,
)
from .geometry import Configuration
from .graphs import DistinguishedCycle, LinkageGraph


# ---------------------------------------------------------------------------
# chart
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AngleChart:
    """Edge-angle coordinates with closure constraints from fundamental cycles."""

    graph: LinkageGraph
    root: str
    gauge_edge: int
    tree_edges: tuple[int, ...]
    # signed tree-path indicator: path_matrix[vi, e] = +-1 when edge e lies on
    # the root-to-vertex path, with +1 for canonical (u -> v) traversal
    path_matrix: np.ndarray
    # constraint coefficients: cycle_matrix[j, e] signed membership of edge e
    # in fundamental cycle j
    cycle_matrix: np.ndarray
    lengths: np.ndarray

    @property
    def n_edges(self) -> int:
        return len(self.graph.edges)

    @property
    def n_constraints(self) -> int:
        return 2 * self.cycle_matrix.shape[0]

    @property
    def n_vars(self) -> int:
        return self.n_edges - 1

    @property
    def dim(self) -> int:
        return self.n_vars - self.n_constraints

    @property
    def var_indices(self) -> list[int]:
        return [e for e in range(self.n_edges) if e != self.gauge_edge]

    def full_theta(self, x: np.ndarray) -> np.ndarray:
        theta = np.zeros(self.n_edges)
        theta[self.var_indices] = x
        return theta

    def reduce(self, theta: np.ndarray) -> np.ndarray:
        return theta[self.var_indices]

    def positions(self, theta: np.ndarray) -> dict[str, np.ndarray]:
        u = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        pts = self.path_matrix @ (self.lengths[:, None] * u)
        return {v: pts[k] for k, v in enumerate(self.graph.vertices)}

    def configuration(self, theta: np.ndarray) -> Configuration:
        pos = self.positions(theta)
        return Configuration({v: (float(p[0]), float(p[1])) for v, p in pos.items()})

    def theta_from_configuration(self, c: Configuration) -> np.ndarray:
        """Edge angles of a configuration, rotated so the gauge edge is at zero."""
        theta = np.empty(self.n_edges)
        for k, (a, b, _) in enumerate(self.graph.edges):
            d = c.point(b) - c.point(a)
            theta[k] = math.atan2(d[1], d[0])
        theta -= theta[self.gauge_edge]
        return np.arctan2(np.sin(theta), np.cos(theta))

    def constraints(self, theta: np.ndarray):
        """Residual vector G (length 2 per cycle) and Jacobian J (m x |E|)."""
        ct, st = np.cos(theta), np.sin(theta)
        B = self.cycle_matrix
        bl = B * self.lengths[None, :]
        gx = bl @ ct
        gy = bl @ st
        G = np.concatenate([gx, gy])
        J = np.concatenate([-bl * st[None, :], bl * ct[None, :]], axis=0)
        return G, J

    def constraint_hessian_combo(self, theta: np.ndarray, lam: np.ndarray) -> np.ndarray:
        """sum_j lam_j Hess(G_j); each Hessian is diagonal in the angles."""
        ncyc = self.cycle_matrix.shape[0]
        ct, st = np.cos(theta), np.sin(theta)
        diag = np.zeros(self.n_edges)
        for j in range(ncyc):
            bl = self.cycle_matrix[j] * self.lengths
            diag += lam[j] * (-bl * ct) + lam[ncyc + j] * (-bl * st)
        return np.diag(diag)


def build_chart(g: LinkageGraph, gauge_edge: int | None = None) -> AngleChart:
    """Spanning-tree chart with the lexicographically smallest edge as gauge."""
    n_e, n_v = len(g.edges), len(g.vertices)
    root = min(g.vertices)
    adj = g.adjacency()
    parent_edge: dict[str, tuple[int, int]] = {}  # vertex -> (edge index, sign)
    order = {root: 0}
    queue = [root]
    tree: list[int] = []
    while queue:
        x = queue.pop(0)
        for y, k in sorted(adj[x]):
            if y in order or k in tree:
                continue
            order[y] = len(order)
            u, v, _ = g.edges[k]
            parent_edge[y] = (k, 1 if (u, v) == (x, y) else -1)
            tree.append(k)
            queue.append(y)
    vidx = {v: i for i, v in enumerate(g.vertices)}
    M = np.zeros((n_v, n_e))
    for v in g.vertices:
        x = v
        while x != root:
            k, s = parent_edge[x]
            M[vidx[v], k] += s
            a, b, _ = g.edges[k]
            x = a if s == 1 else b
    tree_set = set(tree)
    cycles = []
    for k in range(n_e):
        if k in tree_set:
            continue
        u, v, _ = g.edges[k]
        row = np.zeros(n_e)
        row[k] = 1.0
        row += M[vidx[u]] - M[vidx[v]]
        cycles.append(row)
    C = np.array(cycles) if cycles else np.zeros((0, n_e))
    if gauge_edge is None:
        gauge_edge = min(range(n_e),
                         key=lambda k: (min(g.edges[k][:2]), max(g.edges[k][:2]), k))
    chart = AngleChart(g, root, gauge_edge, tuple(sorted(tree)), M, C,
                       np.array(g.lengths()))
    assert chart.n_vars == n_e - 1
    assert chart.n_constraints == 2 * (n_e - n_v + 1)
    return chart


# ---------------------------------------------------------------------------
# objectives
# ---------------------------------------------------------------------------

class CycleAreaObjective:
    """Oriented (shoelace) area of a distinguished cycle, in chart angles."""

    def __init__(self, chart: AngleChart, gamma: DistinguishedCycle):
        self.chart = chart
        vidx = {v: i for i, v in enumerate(chart.graph.vertices)}
        M = chart.path_matrix
        n = len(gamma.vertices)
        C = np.zeros((chart.n_edges, chart.n_edges))
        for i in range(n):
            a = vidx[gamma.vertices[i]]
            b = vidx[gamma.vertices[(i + 1) % n]]
            C += np.outer(M[a], M[b])
        ll = np.outer(chart.lengths, chart.lengths)
        self.A = 0.5 * (C - C.T) * ll  # antisymmetric pairwise coefficients

    def value(self, theta: np.ndarray) -> float:
        diff = theta[None, :] - theta[:, None]
        return 0.5 * float(np.sum(self.A * np.sin(diff)))

    def grad(self, theta: np.ndarray) -> np.ndarray:
        diff = theta[None, :] - theta[:, None]  # diff[e, g] = theta_g - theta_e
        return np.sum(self.A * np.cos(diff), axis=0)

    def hess(self, theta: np.ndarray) -> np.ndarray:
        diff = theta[None, :] - theta[:, None]
        B = self.A * np.sin(diff)
        H = B.T.copy()
        np.fill_diagonal(H, -B.sum(axis=0))
        return H


class VertexDistanceObjective:
    """Euclidean distance between two vertices, in chart angles."""

    def __init__(self, chart: AngleChart, x: str, y: str):
        self.chart = chart
        vidx = {v: i for i, v in enumerate(chart.graph.vertices)}
        b = chart.path_matrix[vidx[y]] - chart.path_matrix[vidx[x]]
        self.bl = b * chart.lengths

    def _vec(self, theta):
        return np.array([self.bl @ np.cos(theta), self.bl @ np.sin(theta)])

    def value(self, theta: np.ndarray) -> float:
        return float(np.hypot(*self._vec(theta)))

    def grad(self, theta: np.ndarray) -> np.ndarray:
        v = self._vec(theta)
        d = float(np.hypot(*v))
        gq = 2.0 * (v[0] * (-self.bl * np.sin(theta)) + v[1] * (self.bl * np.cos(theta)))
        return gq / (2.0 * d)

    def hess(self, theta: np.ndarray) -> np.ndarray:
        v = self._vec(theta)
        d = float(np.hypot(*v))
        dx = -self.bl * np.sin(theta)
        dy = self.bl * np.cos(theta)
        gq = 2.0 * (v[0] * dx + v[1] * dy)
        hq = 2.0 * (np.outer(dx, dx) + np.outer(dy, dy))
        hq += np.diag(2.0 * (v[0] * (-self.bl * np.cos(theta))
                             + v[1] * (-self.bl * np.sin(theta))))
        return hq / (2.0 * d) - np.outer(gq, gq) / (4.0 * d ** 3)


# ---------------------------------------------------------------------------
# inertia
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InertiaTriple:
    negative: int
    zero: int
    positive: int
    eigenvalues: tuple[float, ...] = ()
    zero_band: float = 0.0

    def as_tuple(self):
        return (self.negative, self.zero, self.positive)

    def to_json_dict(self):
        return {"neg": self.negative, "zero": self.zero, "pos": self.positive,
                "eigenvalues": list(self.eigenvalues), "zero_band": self.zero_band}


# ---------------------------------------------------------------------------
# oracle
# ---------------------------------------------------------------------------

class ChartOracle:
    """Constrained critical-point machinery for one linkage and objective."""

    def __init__(self, g: LinkageGraph, gamma: DistinguishedCycle | None = None,
                 tols: Tolerances = DEFAULT_TOLS, gauge_edge: int | None = None,
                 objective=None):
        self.graph = g
        self.tols = tols
        self.chart = build_chart(g, gauge_edge)
        if objective is not None:
            self.objective = objective(self.chart)
        elif gamma is not None:
            self.objective = CycleAreaObjective(self.chart, gamma)
        else:
            raise ValueError("need a cycle or an objective factory")
        self.scale = g.total_length()
        self._vi = self.chart.var_indices

    # reduced-variable wrappers -------------------------------------------------
    def f(self, x: np.ndarray) -> float:
        return self.objective.value(self.chart.full_theta(x))

    def g(self, x: np.ndarray) -> np.ndarray:
        return self.objective.grad(self.chart.full_theta(x))[self._vi]

    def h(self, x: np.ndarray) -> np.ndarray:
        return self.objective.hess(self.chart.full_theta(x))[np.ix_(self._vi, self._vi)]

    def constraints(self, x: np.ndarray):
        G, J = self.chart.constraints(self.chart.full_theta(x))
        return G, J[:, self._vi]

    def lagrangian_hess(self, x: np.ndarray, lam: np.ndarray) -> np.ndarray:
        theta = self.chart.full_theta(x)
        HL = self.objective.hess(theta) - self.chart.constraint_hessian_combo(theta, lam)
        return HL[np.ix_(self._vi, self._vi)]

    def multipliers(self, x: np.ndarray):
        gS = self.g(x)
        G, J = self.constraints(x)
        if J.shape[0] == 0:
            return np.zeros(0), gS, G, J
        lam, *_ = np.linalg.lstsq(J.T, gS, rcond=None)
        return lam, gS - J.T @ lam, G, J

    def stationarity_residual(self, x: np.ndarray) -> float:
        _, rho, _, _ = self.multipliers(x)
        return float(np.linalg.norm(rho))

    # manifold operations -------------------------------------------------------
    def project(self, x: np.ndarray, max_iter: int = 100) -> np.ndarray:
        """Gauss-Newton projection onto the closure constraint set."""
        tol = 1e-12 * self.scale
        x = x.copy()
        for _ in range(max_iter):
            G, J = self.constraints(x)
            if np.linalg.norm(G) <= tol:
                return x
            step, *_ = np.linalg.lstsq(J, -G, rcond=None)
            nrm = np.linalg.norm(step)
            if nrm > 1.0:
                step *= 1.0 / nrm
            x = x + step
        G, _ = self.constraints(x)
        if np.linalg.norm(G) <= tol:
            return x
        raise NoConvergenceError(f"projection stalled at |G| = {np.linalg.norm(G)!r}")

    def newton_kkt(self, x: np.ndarray, max_iter: int = 80,
                   grad_tol: float | None = None):
        """Newton iteration on the KKT system; returns (x, lam) or None."""
        if grad_tol is None:
            grad_tol = self.tols.gradient * max(1.0, self.scale ** 2)
        feas_tol = 1e-11 * self.scale
        lam = None
        for _ in range(max_iter):
            lam, rho, G, J = self.multipliers(x)
            if np.linalg.norm(rho) <= grad_tol and np.linalg.norm(G) <= feas_tol:
                return x, lam
            HL = self.lagrangian_hess(x, lam)
            m, n = J.shape
            K = np.zeros((n + m, n + m))
            K[:n, :n] = HL
            K[:n, n:] = -J.T
            K[n:, :n] = J
            rhs = -np.concatenate([rho, G])
            try:
                sol = np.linalg.solve(K, rhs)
            except np.linalg.LinAlgError:
                sol, *_ = np.linalg.lstsq(K, rhs, rcond=None)
            if not np.all(np.isfinite(sol)):
                return None
            dx = sol[:n]
            nrm = np.linalg.norm(dx)
            if nrm > 0.5:
                dx *= 0.5 / nrm
            x = x + dx
        lam, rho, G, _ = self.multipliers(x)
        if np.linalg.norm(rho) <= grad_tol and np.linalg.norm(G) <= feas_tol:
            return x, lam
        return None

    def inertia(self, x: np.ndarray, check_critical: bool = True) -> InertiaTriple:
        """Inertia of the Lagrangian Hessian on the constraint tangent space."""
        lam, rho, G, J = self.multipliers(x)
        if check_critical:
            bound = 1e-6 * max(1.0, self.scale ** 2)
            if np.linalg.norm(rho) > bound or np.linalg.norm(G) > 1e-8 * self.scale:
                raise NotCriticalError(
                    f"not critical: |rho| = {np.linalg.norm(rho)!r}, |G| = {np.linalg.norm(G)!r}")
        HL = self.lagrangian_hess(x, lam)
        if J.shape[0] == 0:
            N = np.eye(J.shape[1])
        else:
            _, sv, vt = np.linalg.svd(J)
            rank = int(np.sum(sv > 1e-10 * max(sv[0], 1.0)))
            N = vt[rank:].T
        if N.shape[1] == 0:
            return InertiaTriple(0, 0, 0)
        Mred = N.T @ HL @ N
        Mred = 0.5 * (Mred + Mred.T)
        eig = np.linalg.eigvalsh(Mred)
        band = self.tols.eigen_zero_band * max(float(np.max(np.abs(eig))), 1e-300)
        neg = int(np.sum(eig < -band))
        zero = int(np.sum(np.abs(eig) <= band))
        pos = int(np.sum(eig > band))
        return InertiaTriple(neg, zero, pos, tuple(float(v) for v in eig), band)

    def smallest_signed_eigenvalue(self, x: np.ndarray) -> float:
        tri = self.inertia(x, check_critical=False)
        eig = np.asarray(tri.eigenvalues)
        return float(eig[np.argmin(np.abs(eig))]) if eig.size else 0.0

    # global search --------------------------------------------------------------
    def find_critical(self, n_seeds: int, seed: int = 42):
        """Clustered critical points from random feasible seeds.

        Returns a list of (x, InertiaTriple, Configuration) sorted by area
        value then chart coordinates.
        """
        rng = np.random.default_rng(seed)
        thr = self.tols.match * self.scale
        found: list[np.ndarray] = []
        for _ in range(n_seeds):
            x0 = rng.uniform(-math.pi, math.pi, self.chart.n_vars)
            try:
                x0 = self.project(x0)
            except NoConvergenceError:
                continue
            res = self.newton_kkt(x0)
            if res is None:
                continue
            x, _ = res
            found.append(x)
        clusters = self._cluster(found, thr)
        out = []
        for x in clusters:
            out.append((x, self.inertia(x), self.chart.configuration(self.chart.full_theta(x))))
        out.sort(key=lambda t: (round(self.f(t[0]), 9), tuple(np.round(t[0], 7))))
        return out

    def _positions_vector(self, x: np.ndarray) -> np.ndarray:
        pos = self.chart.positions(self.chart.full_theta(x))
        return np.concatenate([pos[v] for v in self.graph.vertices])

    def _cluster(self, xs: list[np.ndarray], thr: float) -> list[np.ndarray]:
        reps: list[tuple[np.ndarray, np.ndarray, float]] = []  # (x, posvec, residual)
        order = sorted(xs, key=lambda x: tuple(np.round(x, 9)))
        for x in order:
            pv = self._positions_vector(x)
            res = self.stationarity_residual(x)
            for i, (_, qv, r0) in enumerate(reps):
                if np.max(np.abs(pv - qv)) <= thr:
                    if res < r0:
                        reps[i] = (x, pv, res)
                    break
            else:
                reps.append((x, pv, res))
        return [r[0] for r in reps]

    # finite differences ----------------------------------------------------------
    def fd_check(self, x: np.ndarray, grad_fn=None, hess_fn=None,
                 grad_tol: float = 1e-6, hess_tol: float = 1e-4):
        """Central-difference audit of the analytic gradient and Hessian of
        the objective at a feasible point.  Raises CheckFailedError with the
        offending entries."""
        h = 1e-6
        n = self.chart.n_vars
        f = self.f
        ga = (grad_fn or self.g)(x)
        gn = np.empty(n)
        for i in range(n):
            e = np.zeros(n)
            e[i] = h
            gn[i] = (f(x + e) - f(x - e)) / (2 * h)
        gscale = max(1.0, float(np.max(np.abs(ga))))
        bad = [("grad", (i,), float(ga[i]), float(gn[i]))
               for i in range(n) if abs(ga[i] - gn[i]) > grad_tol * gscale]

        # second differences need a larger step: roundoff scales as 1/h^2
        hh = 1e-4
        Ha = (hess_fn or self.h)(x)
        Hn = np.empty((n, n))
        f0 = f(x)
        for i in range(n):
            ei = np.zeros(n)
            ei[i] = hh
            Hn[i, i] = (f(x + 2 * ei) - 2 * f0 + f(x - 2 * ei)) / (4 * hh * hh)
            for j in range(i + 1, n):
                ej = np.zeros(n)
                ej[j] = hh
                val = (f(x + ei + ej) - f(x + ei - ej)
                       - f(x - ei + ej) + f(x - ei - ej)) / (4 * hh * hh)
                Hn[i, j] = Hn[j, i] = val
        hscale = max(1.0, float(np.max(np.abs(Ha))))
        bad += [("hess", (i, j), float(Ha[i, j]), float(Hn[i, j]))
                for i in range(n) for j in range(i, n)
                if abs(Ha[i, j] - Hn[i, j]) > hess_tol * hscale]
        report = {
            "grad_err": float(np.max(np.abs(ga - gn)) / gscale),
            "hess_err": float(np.max(np.abs(Ha - Hn)) / hscale),
            "ok": not bad,
        }
        if bad:
            raise CheckFailedError(f"{len(bad)} finite-difference mismatches", entries=bad)
        return report


def area_oracle(g: LinkageGraph, gamma: DistinguishedCycle,
                tols: Tolerances = DEFAULT_TOLS, gauge_edge: int | None = None) -> ChartOracle:
    return ChartOracle(g, gamma, tols, gauge_edge)


def distance_oracle(g: LinkageGraph, x: str, y: str,
                    tols: Tolerances = DEFAULT_TOLS) -> ChartOracle:
    return ChartOracle(g, None, tols,
                       objective=lambda chart: VertexDistanceObjective(chart, x, y))


def project_to_manifold(chart: AngleChart, theta0: np.ndarray,
                        max_iter: int = 100) -> np.ndarray:
    """Gauss-Newton projection of a full angle vector onto the closure set.

    The gauge angle stays frozen; raises NoConvergenceError after the
    iteration budget.
    """
    scale = float(chart.lengths.sum())
    tol = 1e-12 * scale
    vi = chart.var_indices
    theta = theta0.copy()
    theta -= theta[chart.gauge_edge]
    for _ in range(max_iter):
        G, J = chart.constraints(theta)
        if np.linalg.norm(G) <= tol:
            return theta
        step, *_ = np.linalg.lstsq(J[:, vi], -G, rcond=None)
        nrm = np.linalg.norm(step)
        if nrm > 1.0:
            step /= nrm
        theta[vi] += step
    G, _ = chart.constraints(theta)
    if np.linalg.norm(G) <= tol:
        return theta
    raise NoConvergenceError(f"projection stalled at |G| = {np.linalg.norm(G)!r}")


def find_critical_numeric(g: LinkageGraph, gamma: DistinguishedCycle,
                          n_seeds: int = 1000, seed: int = 42,
                          tols: Tolerances = DEFAULT_TOLS):
    """Critical points of the oriented area from random seeds, with inertia."""
    oracle = area_oracle(g, gamma, tols)
    return [(cfgn, tri) for _, tri, cfgn in oracle.find_critical(n_seeds, seed)]


def constrained_inertia(g: LinkageGraph, gamma: DistinguishedCycle, c: Configuration,
                        tols: Tolerances = DEFAULT_TOLS) -> InertiaTriple:
    oracle = area_oracle(g, gamma, tols)
    x = oracle.chart.reduce(oracle.chart.theta_from_configuration(c))
    return oracle.inertia(x)


def fd_check(g: LinkageGraph, gamma: DistinguishedCycle, c: Configuration,
             tols: Tolerances = DEFAULT_TOLS, **kw):
    oracle = area_oracle(g, gamma, tols)
    x = oracle.chart.reduce(oracle.chart.theta_from_configuration(c))
    return oracle.fd_check(x, **kw)


# ---------------------------------------------------------------------------
# continuation
# ---------------------------------------------------------------------------

@dataclass
class BranchPoint:
    param: float
    x: np.ndarray
    area: float
    inertia: InertiaTriple


@dataclass
class Branch:
    id: int
    points: list[BranchPoint] = field(default_factory=list)
    alive: bool = True
    lost_at: float | None = None

    @property
    def born_at(self) -> float:
        return self.points[0].param


@dataclass(frozen=True)
class Event:
    param: float
    type: str  # PitchforkSplit | PitchforkMerge | HessianZero
    branch: int
    meta: dict


@dataclass
class BranchDiagram:
    edge: int
    params: list[float]
    branches: list[Branch]
    events: list[Event]
    warnings: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "edge": self.edge,
            "params": self.params,
            "branches": [{
                "id": b.id,
                "born_at": b.born_at,
                "lost_at": b.lost_at,
                "points": [{"param": p.param, "area": p.area,
                            "neg": p.inertia.negative, "zero": p.inertia.zero,
                            "pos": p.inertia.positive} for p in b.points],
            } for b in self.branches],
            "events": [{"param": e.param, "type": e.type, "branch": e.branch,
                        "meta": e.meta} for e in self.events],
            "warnings": self.warnings,
        }

    def to_csv(self) -> str:
        lines = ["param,branch,area,neg,zero,pos"]
        rows = []
        for b in self.branches:
            for p in b.points:
                rows.append((p.param, b.id, p.area, p.inertia.negative,
                             p.inertia.zero, p.inertia.positive))
        rows.sort()
        for r in rows:
            lines.append(f"{r[0]!r},{r[1]},{r[2]!r},{r[3]},{r[4]},{r[5]}")
        return "\n".join(lines) + "\n"


def continue_family(g: LinkageGraph, edge: int, start: float, stop: float,
                    steps: int, gamma: DistinguishedCycle,
                    cfg: RunConfig | None = None,
                    n_seeds_step: int = 160) -> BranchDiagram:
    """Predictor-corrector continuation of every critical branch in one edge
    length, with Hessian-zero and pitchfork event detection."""
    cfg = cfg or RunConfig()
    tols = cfg.tols
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if start == stop or steps == 0:
        params = [float(start)]
    else:
        params = [float(t) for t in np.linspace(start, stop, steps + 1)]

    def oracle_at(t: float) -> ChartOracle:
        return area_oracle(g.with_edge_length(edge, t), gamma, tols)

    diagram = BranchDiagram(edge, params, [], [])
    o0 = oracle_at(params[0])
    thr = tols.match * o0.scale
    capture = 0.08 * o0.scale

    clusters = o0.find_critical(max(cfg.n_seeds, n_seeds_step), cfg.seed)
    branches: list[Branch] = []
    for x, tri, _ in clusters:
        br = Branch(len(branches))
        br.points.append(BranchPoint(params[0], x, o0.f(x), tri))
        branches.append(br)
    diagram.branches = branches

    for k in range(1, len(params)):
        t = params[k]
        ok = oracle_at(t)
        fresh = ok.find_critical(n_seeds_step, cfg.seed + k)
        fresh_pos = [_posvec(ok, xc) for xc, _, _ in fresh]

        # secant predictions plus their Newton corrections; a branch trusts
        # its own corrected continuation (the discovery sweep may miss points
        # whose basins shrink near a degeneracy)
        cands = []  # (confidence, bid, xcorr, corr_pos)
        preds: dict[int, np.ndarray] = {}
        for br in branches:
            if not br.alive:
                continue
            xprev = br.points[-1].x
            if len(br.points) >= 2 and br.points[-2].param != br.points[-1].param:
                slope = ((br.points[-1].x - br.points[-2].x)
                         / (br.points[-1].param - br.points[-2].param))
                xpred = xprev + slope * (t - params[k - 1])
            else:
                xpred = xprev
            preds[br.id] = xpred
            xcorr = _correct_branch(ok, xpred)
            if xcorr is not None and _pos_dist(ok, xcorr, xprev) <= capture:
                drift = float(np.max(np.abs(_posvec(ok, xcorr)
                                            - _posvec(ok, xpred))))
                cands.append((drift, br.id, xcorr, _posvec(ok, xcorr)))

        claimed_cluster: set[int] = set()
        extended: dict[int, np.ndarray] = {}  # bid -> final position

        def extend(bid, x, tri=None):
            tri = tri if tri is not None else ok.inertia(x)
            branches[bid].points.append(BranchPoint(t, x, ok.f(x), tri))
            extended[bid] = _posvec(ok, x)

        def merge(bid):
            branches[bid].alive = False
            branches[bid].lost_at = t
            diagram.warnings.append(
                f"branch {bid} merged into another branch at {t!r}")

        def claim_nearest_unclaimed(bid):
            # the correction jumped onto a neighbor: the branch's true
            # continuation may still sit in the fresh set near the prediction
            pv = _posvec(ok, preds[bid])
            best, best_d = None, capture
            for ci, qv in enumerate(fresh_pos):
                if ci in claimed_cluster:
                    continue
                d = float(np.max(np.abs(pv - qv)))
                if d < best_d:
                    best, best_d = ci, d
            if best is None:
                return False
            claimed_cluster.add(best)
            xc, tri, _ = fresh[best]
            extend(bid, xc, tri)
            return True

        # pass A: corrected continuations, most confident first
        for drift, bid, xcorr, pv in sorted(cands, key=lambda c: (c[0], c[1])):
            if any(np.max(np.abs(pv - q)) <= thr for q in extended.values()):
                if not claim_nearest_unclaimed(bid):
                    merge(bid)
                continue
            hit = None
            for ci, qv in enumerate(fresh_pos):
                if float(np.max(np.abs(pv - qv))) <= 3 * thr:
                    hit = ci
                    break
            if hit is not None:
                if hit in claimed_cluster:
                    if not claim_nearest_unclaimed(bid):
                        merge(bid)
                    continue
                claimed_cluster.add(hit)
                xc, tri, _ = fresh[hit]
                extend(bid, xc, tri)
            else:
                extend(bid, xcorr)

        # pass B: substepped rescue for branches whose correction failed
        for br in branches:
            if not br.alive or br.id in extended or br.id not in preds:
                continue
            xnew = _substep_correct(g, edge, gamma, tols, br.points[-1].x,
                                    params[k - 1], t)
            if xnew is None:
                br.alive = False
                br.lost_at = t
                diagram.warnings.append(f"branch {br.id} lost at parameter {t!r}")
                continue
            pv = _posvec(ok, xnew)
            if any(np.max(np.abs(pv - q)) <= thr for q in extended.values()):
                merge(br.id)
                continue
            for ci, qv in enumerate(fresh_pos):
                if ci not in claimed_cluster \
                        and float(np.max(np.abs(pv - qv))) <= 3 * thr:
                    claimed_cluster.add(ci)
                    break
            extend(br.id, xnew)

        # births: fresh clusters nobody claimed or re-derived
        for ci, (xc, tri, _) in enumerate(fresh):
            if ci in claimed_cluster:
                continue
            if any(np.max(np.abs(fresh_pos[ci] - q)) <= thr
                   for q in extended.values()):
                continue
            br = Branch(len(branches))
            br.points.append(BranchPoint(t, xc, ok.f(xc), tri))
            branches.append(br)
    diagram.branches = branches

    _detect_events(diagram, g, edge, gamma, tols, capture)
    return diagram


def _posvec(oracle: ChartOracle, x: np.ndarray) -> np.ndarray:
    return oracle._positions_vector(x)


def _pos_dist(oracle: ChartOracle, x: np.ndarray, o_prev_x: np.ndarray) -> float:
    return float(np.max(np.abs(_posvec(oracle, x) - _posvec(oracle, o_prev_x))))


def _correct_branch(oracle: ChartOracle, x: np.ndarray):
    try:
        x = oracle.project(x)
    except NoConvergenceError:
        return None
    res = oracle.newton_kkt(x)
    return None if res is None else res[0]


def _substep_correct(g, edge, gamma, tols, x, t_from, t_to, max_halvings=10):
    """March toward t_to with step halving (budget 2**max_halvings substeps)."""
    t, step = t_from, t_to - t_from
    budget = 2 ** max_halvings
    halvings = 0
    while budget > 0:
        target = t + step
        overshoot = (step > 0 and target > t_to) or (step < 0 and target < t_to)
        if overshoot:
            target = t_to
        ok = area_oracle(g.with_edge_length(edge, target), gamma, tols)
        xnew = _correct_branch(ok, x)
        budget -= 1
        if xnew is not None:
            t, x = target, xnew
            if t == t_to:
                return x
        else:
            if halvings >= max_halvings:
                return None
            step *= 0.5
            halvings += 1
    return None


def _detect_events(diagram: BranchDiagram, g, edge, gamma, tols, capture):
    """Hessian zeros from inertia flips; pitchforks from flips plus births/deaths."""
    for br in diagram.branches:
        for a, b in zip(br.points, br.points[1:]):
            if (a.inertia.negative, a.inertia.zero) == (b.inertia.negative, b.inertia.zero):
                continue
            t_star = _bisect_eigen_zero(g, edge, gamma, tols, a, b)
            meta = {
                "inertia_before": a.inertia.as_tuple(),
                "inertia_after": b.inertia.as_tuple(),
            }
            diagram.events.append(Event(t_star, "HessianZero", br.id, meta))
            births = _local_companions(diagram, br, a, b, g, edge, gamma, tols,
                                       capture, born=True)
            deaths = _local_companions(diagram, br, a, b, g, edge, gamma, tols,
                                       capture, born=False)
            if len(births) >= 2:
                meta2 = dict(meta)
                meta2["companions"] = sorted(births)
                meta2["signature"] = _pitchfork_signature(diagram, br, a, b, births)
                diagram.events.append(Event(t_star, "PitchforkSplit", br.id, meta2))
            elif len(deaths) >= 2:
                meta2 = dict(meta)
                meta2["companions"] = sorted(deaths)
                meta2["signature"] = _pitchfork_signature(diagram, br, b, a, deaths)
                diagram.events.append(Event(t_star, "PitchforkMerge", br.id, meta2))
    diagram.events.sort(key=lambda e: (e.param, e.type, e.branch))


def _bisect_eigen_zero(g, edge, gamma, tols, a: BranchPoint, b: BranchPoint,
                       iters: int = 48) -> float:
    def signed_eig(t, xw):
        ok = area_oracle(g.with_edge_length(edge, t), gamma, tols)
        xc = _correct_branch(ok, xw)
        if xc is None:
            return None, xw
        return ok.smallest_signed_eigenvalue(xc), xc

    (lo, xa), (hi, xb) = sorted([(a.param, a.x), (b.param, b.x)],
                                key=lambda p: p[0])
    flo, xlo = signed_eig(lo, xa)
    fhi, xhi = signed_eig(hi, xb)
    if flo is None or fhi is None or flo * fhi > 0:
        return 0.5 * (lo + hi)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm, xm = signed_eig(mid, xlo)
        if fm is None:
            break
        if (fm < 0) == (flo < 0):
            lo, flo, xlo = mid, fm, xm
        else:
            hi, fhi, xhi = mid, fm, xm
        if hi - lo < 1e-12 * max(1.0, abs(hi)):
            break
    return 0.5 * (lo + hi)


def _local_companions(diagram, br, a, b, g, edge, gamma, tols, capture, born):
    """Branch ids born (or dying) in this step near the flipping branch."""
    out = []
    for other in diagram.branches:
        if other.id == br.id:
            continue
        if born:
            if not other.points or other.points[0].param != b.param:
                continue
            xo, to, xref = other.points[0].x, b.param, b.x
        else:
            if other.lost_at is None or not other.points:
                continue
            # b.param is the step where a death in this span is recorded
            if not (other.lost_at == b.param
                    or min(a.param, b.param) < other.lost_at < max(a.param, b.param)):
                continue
            xo, to, xref = other.points[-1].x, a.param, a.x
        ok = area_oracle(g.with_edge_length(edge, to), gamma, tols)
        if float(np.max(np.abs(_posvec(ok, xo) - _posvec(ok, xref)))) <= capture:
            out.append(other.id)
    return out


def _pitchfork_signature(diagram, br, before: BranchPoint, after: BranchPoint,
                         companions):
    dim = before.inertia.negative + before.inertia.zero + before.inertia.positive
    def kind(tri):
        if tri.negative == dim:
            return "max"
        if tri.positive == dim:
            return "min"
        return "saddle"
    comp_kinds = []
    for cid in companions:
        pts = diagram.branches[cid].points
        comp_kinds.append(kind(pts[0].inertia))
    return {
        "center_before": kind(before.inertia),
        "center_after": kind(after.inertia),
        "companions": sorted(comp_kinds),
    }
