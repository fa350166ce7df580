"""Limits of the cyclic/aligned characterization and Euler cross-checks."""

from linkmorse.enumeration import enumerate_critical_three_chain, euler_sum
from linkmorse.errors import NotConcyclicError
from linkmorse.geometry import aligned_residual, cyclic_data_from_points, wall_check
from linkmorse.graphs import is_partial_two_tree, make_three_chain
from linkmorse.instances import non_ptt_example
from linkmorse.oracle import area_oracle, distance_oracle


class TestNonPttNegative:
    """Documented negative case: beyond partial two-trees, criticality is
    neither a cyclic nor an aligned condition."""

    def test_not_a_partial_two_tree(self):
        g, _ = non_ptt_example()
        assert not is_partial_two_tree(g)

    def test_criticals_neither_cyclic_nor_aligned(self):
        g, gamma = non_ptt_example()
        oracle = area_oracle(g, gamma)
        found = oracle.find_critical(300, seed=13)
        assert found
        witnesses = 0
        for x, tri, cfg in found:
            pts = cfg.points(gamma.vertices)
            try:
                cyclic_data_from_points(pts)
                concyclic = True
            except NotConcyclicError:
                concyclic = False
            aligned = any(
                aligned_residual(cfg.points(path)) < 1e-7
                for path in (["g0", "m", "g3"], ["g1", "m", "g4"]))
            if not concyclic and not aligned:
                witnesses += 1
        assert witnesses > 0


class TestEulerOnSurface:
    """[2,3;2]: the configuration space is a closed surface; two independent
    Morse counts of its Euler characteristic must agree."""

    ARMS = ([1.0, 1.25], [0.85, 1.1, 0.95], [0.75, 0.9])

    def test_area_vs_distance_euler_counts(self):
        g, gamma = make_three_chain(*self.ARMS)
        assert wall_check(g).clean
        recs = enumerate_critical_three_chain(g, gamma)
        assert all(r.manifold_dim == 0 for r in recs)
        via_area = euler_sum(recs)
        assert via_area.known

        # distance between the glue vertices is a Morse-Bott function on the
        # same manifold; its aligned-path criticals with zero-dimensional
        # critical set carry the whole Euler characteristic (the circle
        # components contribute nothing)
        oracle = distance_oracle(g, "I", "T")
        found = oracle.find_critical(1500, seed=21)
        isolated = [tri for _, tri, _ in found if tri.zero == 0]
        via_distance = sum((-1) ** tri.negative for tri in isolated)
        assert via_area.value == via_distance
