"""Documented study instances.

These constructions back the worked analyses shipped with the package: a
three-cell polygon-with-diagonals whose top critical point has index 8, a
three-chain with the maximal 16 critical points, a three-chain with
Bott-Morse circles, and a one-parameter family crossing a pitchfork.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import Configuration
from .graphs import DistinguishedCycle, LinkageGraph, make_three_chain

# [2,2;2] instance realizing the maximal 16 critical points (8 aligned
# isolated, 4 cyclic quadrilaterals each carrying a two-point chain space);
# found by randomized search over length vectors, oracle-verified
MAX16_ARMS = (
    (1.3791776663207134, 0.8229317450188804),
    (1.1660253068602127, 1.319354122292982),
    (1.375884350126332, 0.4051250116531733),
)

# generic [2,2;3] instance: aligned criticals isolated, circular criticals
# Bott-Morse circles (one zero eigenvalue)
BM223_ARMS = (
    (1.03, 1.31),
    (0.79, 1.12),
    (0.58, 0.71, 0.92),
)

# one-parameter [2,2;2] family: arms A, B fixed, Z = (c1, t); the aligned
# branch crosses the four-points-concyclic condition at t = w* - c1
PITCHFORK_A = (1.0, 1.2)
PITCHFORK_B = (0.8, 1.1)
PITCHFORK_C1 = 0.7
PITCHFORK_RANGE = (0.60, 0.87)


def max16_three_chain():
    return make_three_chain(*MAX16_ARMS)


def bott_morse_three_chain():
    return make_three_chain(*BM223_ARMS)


def pitchfork_family():
    """(graph, gamma, edge index of the varying Z edge, (t_lo, t_hi))."""
    g, gamma = make_three_chain(PITCHFORK_A, PITCHFORK_B,
                                (PITCHFORK_C1, PITCHFORK_RANGE[0]))
    return g, gamma, g.edge_between("Z1", "T"), PITCHFORK_RANGE


def pitchfork_concyclic_parameter() -> float:
    """Parameter where the four cycle points of the aligned branch become
    concyclic: opposite apex angles sum to pi, which fixes the diagonal by

        w*^2 = ((a1^2+a2^2) b1 b2 + (b1^2+b2^2) a1 a2) / (a1 a2 + b1 b2).
    """
    a1, a2 = PITCHFORK_A
    b1, b2 = PITCHFORK_B
    w2 = (((a1 * a1 + a2 * a2) * b1 * b2 + (b1 * b1 + b2 * b2) * a1 * a2)
          / (a1 * a2 + b1 * b2))
    return math.sqrt(w2) - PITCHFORK_C1


def worked_example():
    """Three-cell linkage whose distinguished critical point has index 8.

    An 11-gon cycle with two attached chains (2 and 3 edges).  At the
    constructed configuration both chains are aligned, the three cells are
    cyclic (a quadrilateral, a triangle, and an octagon), and the index
    decomposes as 1 + 0 + 5 + 1 + 1.

    Returns (graph, gamma, configuration).
    """
    deg = math.pi / 180.0
    angles = {"v3": 100, "v4": 140, "v6": 186, "v7": 229, "v8": 278,
              "v9": 330, "v10": 371, "v0": 415}
    P = {k: np.array([math.cos(a * deg), math.sin(a * deg)])
         for k, a in angles.items()}
    w1 = float(np.hypot(*(P["v3"] - P["v0"])))
    w2 = float(np.hypot(*(P["v6"] - P["v4"])))

    def arc_place(p0, p1, offset, fracs):
        # circle through p0, p1 with its center pushed outward from the
        # octagon; points placed along the long arc, counterclockwise
        m = 0.5 * (p0 + p1)
        center = m + offset * m / np.hypot(*m)
        radius = np.hypot(*(p0 - center))
        a0 = math.atan2(*(p0 - center)[::-1])
        a1 = math.atan2(*(p1 - center)[::-1])
        sweep = (a1 - a0) % (2.0 * math.pi)
        return [center + radius * np.array([math.cos(a0 + f * sweep),
                                            math.sin(a0 + f * sweep)])
                for f in fracs]

    P["v1"], P["v2"] = arc_place(P["v0"], P["v3"], 0.55, [0.3, 0.62])
    (P["v5"],) = arc_place(P["v4"], P["v6"], 0.75, [0.45])

    u1 = (P["v3"] - P["v0"]) / w1
    u2 = (P["v6"] - P["v4"]) / w2
    P["D1"] = P["v0"] + 0.43 * w1 * u1
    P["D2a"] = P["v4"] + 0.52 * w2 * u2
    P["D2b"] = P["v4"] + 1.33 * w2 * u2
    c1 = (0.43 * w1, 0.57 * w1)
    c2 = (0.52 * w2, 0.81 * w2, 0.33 * w2)

    gverts = [f"v{k}" for k in range(11)]
    edges = [(gverts[k], gverts[(k + 1) % 11],
              float(np.hypot(*(P[gverts[(k + 1) % 11]] - P[gverts[k]]))))
             for k in range(11)]
    edges += [("v0", "D1", c1[0]), ("D1", "v3", c1[1]),
              ("v4", "D2a", c2[0]), ("D2a", "D2b", c2[1]), ("D2b", "v6", c2[2])]
    g = LinkageGraph(tuple(gverts + ["D1", "D2a", "D2b"]), tuple(edges))
    gamma = DistinguishedCycle(tuple(gverts))
    config = Configuration({v: (float(p[0]), float(p[1])) for v, p in P.items()})
    return g, gamma, config


def non_ptt_example():
    """Hexagon with two crossing chains through a shared middle joint.

    Contains a K4 minor, so the cyclic/aligned criticality characterization
    does not apply; used as the documented negative case for the oracle.
    """
    verts = tuple(f"g{k}" for k in range(6)) + ("m",)
    lens = [1.0, 1.12, 0.95, 1.21, 0.9, 1.05]
    edges = [(f"g{k}", f"g{(k + 1) % 6}", lens[k]) for k in range(6)]
    edges += [("g0", "m", 0.85), ("m", "g3", 0.8),
              ("g1", "m", 0.75), ("m", "g4", 0.95)]
    g = LinkageGraph(verts, tuple(edges))
    gamma = DistinguishedCycle(tuple(f"g{k}" for k in range(6)))
    return g, gamma
