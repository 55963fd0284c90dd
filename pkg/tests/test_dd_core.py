import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddnoise.dd import Package, node_count
from ddnoise.dd.core import EPS, ONE, ONE_EDGE, TERMINAL, ZERO, ZERO_EDGE, Edge
from ddnoise.errors import InvariantViolation, NumericDomainError, StructuralError
from ddnoise.oracle import dd_to_dense, dense_to_dd
from helpers import BELL, SQRT_HALF, random_matrix


@pytest.fixture
def pkg():
    return Package()


class TestComplexTable:
    def test_zero_and_one(self, pkg):
        assert pkg.lookup_complex(0.0, 0.0) == ZERO
        assert pkg.lookup_complex(1.0, 1e-14) == ONE

    def test_repeated_lookup_is_stable(self, pkg):
        a = pkg.lookup_complex(SQRT_HALF, 0)
        b = pkg.lookup_complex(SQRT_HALF, 0)
        assert a is b

    def test_nearby_values_snap_together(self, pkg):
        a = pkg.lookup_complex(0.3, -0.2)
        b = pkg.lookup_complex(0.3 + 3e-11, -0.2 - 4e-11)
        assert a is b

    def test_distant_values_stay_apart(self, pkg):
        assert pkg.lookup_complex(0.3, 0) != pkg.lookup_complex(0.3 + 1e-8, 0)

    @pytest.mark.parametrize('re, im', [(math.nan, 0), (0, math.inf), (-math.inf, 1)])
    def test_non_finite_rejected(self, pkg, re, im):
        with pytest.raises(NumericDomainError):
            pkg.lookup_complex(re, im)

    def test_tiny_magnitudes_collapse_to_zero(self, pkg):
        assert pkg.lookup_complex(EPS / 2, -EPS / 3) == 0

    def test_relative_snap_keeps_small_values(self, pkg):
        z = 3e-12 + 1e-12j
        assert pkg.canon_top(z) == z

    @given(st.floats(-2, 2), st.floats(-2, 2))
    @settings(max_examples=200, deadline=None)
    def test_lookup_within_tolerance(self, re, im):
        pkg = Package()
        c = pkg.lookup_complex(re, im)
        assert abs(c.real - re) < EPS and abs(c.imag - im) < EPS


class TestNodes:
    def test_common_factor_extracted(self, pkg):
        t = pkg.terminal_edge(SQRT_HALF)
        e = pkg.make_vector_node(0, (t, t))
        assert abs(e.weight - SQRT_HALF) < 1e-15
        assert [c.weight for c in e.node.edges] == [1, 1]

    def test_all_zero_children_collapse(self, pkg):
        assert pkg.make_vector_node(0, (ZERO_EDGE, ZERO_EDGE)) == ZERO_EDGE
        assert pkg.make_matrix_node(0, (ZERO_EDGE,) * 4) == ZERO_EDGE

    def test_equal_children_share_one_node(self, pkg):
        t = pkg.terminal_edge(0.25)
        e = pkg.make_matrix_node(0, (t, t, t, t))
        assert abs(e.weight - 0.25) < 1e-15
        assert all(c.node is TERMINAL and c.weight == 1 for c in e.node.edges)

    def test_pivot_is_largest_child_lowest_index(self, pkg):
        e = pkg.make_vector_node(0, (pkg.terminal_edge(0.5), pkg.terminal_edge(-0.5j)))
        assert e.node.edges[0].weight == 1
        assert abs(e.weight - 0.5) < 1e-15
        e = pkg.make_vector_node(0, (pkg.terminal_edge(0.2), pkg.terminal_edge(0.8)))
        assert e.node.edges[1].weight == 1
        assert max(abs(c.weight) for c in e.node.edges) == 1

    def test_level_order_enforced(self, pkg):
        child = pkg.make_vector_node(1, (ONE_EDGE, ZERO_EDGE))
        with pytest.raises(StructuralError):
            pkg.make_vector_node(1, (child, ZERO_EDGE))
        with pytest.raises(StructuralError):
            pkg.make_vector_node(2, (child, child))

    def test_child_count_enforced(self, pkg):
        with pytest.raises(StructuralError):
            pkg.make_vector_node(0, (ONE_EDGE,) * 4)

    def test_state_vector_diagram(self, pkg):
        # (|00> + |11>)/sqrt(2): root weight 1/sqrt(2), two distinct q1 nodes
        e = dense_to_dd(pkg, BELL)
        assert abs(e.weight - SQRT_HALF) < 1e-15
        left, right = e.node.edges
        assert left.node is not right.node
        assert node_count(e) == 4

    def test_bell_density_diagram(self, pkg):
        rho = np.outer(BELL, BELL.conj())
        e = dense_to_dd(pkg, rho)
        assert abs(e.weight - 0.5) < 1e-15
        q1_nodes = {c.node for c in e.node.edges}
        assert len(q1_nodes) == 4
        assert node_count(e) == 6

    def test_handles_independent_of_construction_order(self):
        rng = np.random.default_rng(0)
        m = random_matrix(rng, 4)
        pkg = Package()
        first = dense_to_dd(pkg, m)
        # build unrelated diagrams in between, then rebuild
        for _ in range(3):
            dense_to_dd(pkg, random_matrix(rng, 4))
        assert dense_to_dd(pkg, m) == first

    def test_rescaled_children_keep_node(self, pkg):
        rng = np.random.default_rng(1)
        kids = [pkg.terminal_edge(complex(*rng.normal(size=2))) for _ in range(4)]
        e = pkg.make_matrix_node(0, kids)
        s = 0.37 - 1.2j
        f = pkg.make_matrix_node(0, [Edge(k.node, pkg.canon(k.weight * s)) for k in kids])
        assert f.node is e.node
        assert abs(f.weight - e.weight * s) < 1e-12

    def test_sub_tolerance_block_is_zero_stub(self, pkg):
        m = np.zeros((4, 4), dtype=complex)
        m[0, 0] = 1
        m[2:, 2:] = 1e-12
        e = dense_to_dd(pkg, m)
        assert e.node.edges[3] == ZERO_EDGE


class TestEntries:
    def test_amplitudes_along_paths(self, pkg):
        v = dense_to_dd(pkg, BELL)
        assert abs(pkg.get_amplitude(v, 3) - SQRT_HALF) < 1e-15
        assert pkg.get_amplitude(v, 1) == 0
        assert pkg.get_amplitude(v, 2) == 0

    def test_density_entries(self, pkg):
        m = dense_to_dd(pkg, np.outer(BELL, BELL))
        assert abs(pkg.get_entry(m, 0, 0) - 0.5) < 1e-15
        assert abs(pkg.get_entry(m, 3, 0) - 0.5) < 1e-15
        assert pkg.get_entry(m, 1, 2) == 0

    def test_out_of_range(self, pkg):
        v = dense_to_dd(pkg, BELL)
        with pytest.raises(IndexError):
            pkg.get_amplitude(v, 4)
        m = dense_to_dd(pkg, np.eye(4))
        with pytest.raises(IndexError):
            pkg.get_entry(m, 0, 4)
        with pytest.raises(IndexError):
            pkg.get_entry(m, -1, 0)

    def test_round_trip(self, pkg):
        rng = np.random.default_rng(2)
        for n in range(1, 6):
            m = random_matrix(rng, n)
            e = dense_to_dd(pkg, m)
            assert np.max(np.abs(dd_to_dense(e) - m)) <= 1e-12
            i, j = rng.integers(1 << n, size=2)
            assert abs(pkg.get_entry(e, int(i), int(j)) - m[i, j]) <= 1e-12


class TestLifetime:
    def test_released_root_is_collected(self, pkg):
        rng = np.random.default_rng(3)
        base = pkg.stats.current_nodes
        e = dense_to_dd(pkg, random_matrix(rng, 3))
        pkg.incref(e)
        pkg.decref(e)
        freed = pkg.collect_garbage()
        assert freed > 0
        assert pkg.stats.current_nodes == base

    def test_shared_child_survives(self, pkg):
        t = pkg.terminal_edge(1)
        shared = pkg.make_vector_node(1, (t, ZERO_EDGE))
        a = pkg.make_vector_node(0, (shared, ZERO_EDGE))
        b = pkg.make_vector_node(0, (ZERO_EDGE, shared))
        pkg.incref(a)
        pkg.incref(b)
        pkg.decref(a)
        pkg.collect_garbage()
        assert shared.node.ref >= 1
        assert pkg.make_vector_node(1, (t, ZERO_EDGE)).node is shared.node
        assert pkg.make_vector_node(0, (ZERO_EDGE, shared)).node is b.node

    def test_decref_below_zero(self, pkg):
        e = pkg.make_vector_node(0, (pkg.terminal_edge(1), ZERO_EDGE))
        with pytest.raises(InvariantViolation):
            pkg.decref(e)

    def test_simulation_releases_its_nodes(self):
        from ddnoise import NoiseParams, gen_qft, simulate
        pkg = Package()
        base = pkg.stats.current_nodes
        report = simulate(gen_qft(6), NoiseParams(0.01, 0.02), 'advanced', pkg=pkg,
                          with_fidelity=False)
        pkg.decref(report.state.root)
        pkg.collect_garbage()
        assert pkg.stats.current_nodes == base

    def test_peak_bounds_current(self, pkg):
        rng = np.random.default_rng(4)
        for _ in range(3):
            dense_to_dd(pkg, random_matrix(rng, 3))
            s = pkg.stats
            assert s.peak_nodes >= s.current_nodes
        pkg.collect_garbage()
        s = pkg.stats
        assert s.peak_nodes >= s.current_nodes
