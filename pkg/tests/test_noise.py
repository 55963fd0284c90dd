import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddnoise import density, noise
from ddnoise.dd import Package
from ddnoise.dd.core import ZERO_EDGE
from ddnoise.errors import NumericDomainError, StructuralError
from ddnoise.noise import KrausChannel, NoiseParams
from ddnoise.oracle import dense_channel, dense_to_dd
from helpers import BELL, density_state, max_abs_diff, random_density_matrix


@pytest.fixture
def pkg():
    return Package()


def _random_state(pkg, seed, n, rank=None):
    return density_state(pkg, random_density_matrix(np.random.default_rng(seed), n, rank))


class TestKraus:
    def test_t1_zero(self):
        e0, e1 = noise.kraus_t1(0).matrices
        assert np.array_equal(e0, np.eye(2)) and not e1.any()

    def test_t1_matrices(self):
        e0, e1 = noise.kraus_t1(0.3).matrices
        assert max_abs_diff(e0, [[1, 0], [0, math.sqrt(0.7)]]) == 0
        assert max_abs_diff(e1, [[0, math.sqrt(0.3)], [0, 0]]) == 0

    def test_t1_full_decay(self):
        rng = np.random.default_rng(0)
        for _ in range(5):
            rho = random_density_matrix(rng, 1)
            out = dense_channel(rho, noise.kraus_t1(1).matrices, 0)
            assert max_abs_diff(out, [[1, 0], [0, 0]]) <= 1e-15

    def test_t2_identity_at_one(self):
        rho = random_density_matrix(np.random.default_rng(1), 1)
        assert max_abs_diff(dense_channel(rho, noise.kraus_t2(1).matrices, 0), rho) == 0

    def test_t2_half_kills_coherence(self):
        rho = random_density_matrix(np.random.default_rng(2), 1)
        out = dense_channel(rho, noise.kraus_t2(0.5).matrices, 0)
        assert abs(out[0, 1]) <= 1e-16 and abs(out[1, 0]) <= 1e-16

    @pytest.mark.parametrize('p', [0.0, 0.13, 0.5, 0.77, 1.0])
    def test_t2_is_off_diagonal_scaling(self, p):
        rho = random_density_matrix(np.random.default_rng(3), 1)
        want = rho.copy()
        want[0, 1] *= 2 * p - 1
        want[1, 0] *= 2 * p - 1
        assert max_abs_diff(dense_channel(rho, noise.kraus_t2(p).matrices, 0), want) <= 1e-15

    @pytest.mark.parametrize('p', [-0.1, 1.5, math.nan, math.inf])
    def test_probability_range(self, p):
        with pytest.raises(NumericDomainError):
            noise.kraus_t1(p)
        with pytest.raises(NumericDomainError):
            noise.kraus_t2(p)

    def test_validation(self):
        assert noise.validate_channel(noise.kraus_t1(0.3)).passed
        assert noise.validate_channel(noise.kraus_t2(0.25)).passed
        check = noise.validate_channel(KrausChannel('custom', 0, (np.eye(2), np.eye(2))))
        assert not check.passed and check.residual == 1


class TestParams:
    def test_defaults_follow_probabilities(self):
        assert not NoiseParams().any_on
        p = NoiseParams(0.1, 0)
        assert p.t1_on and not p.t2_on
        assert [c.kind for c in NoiseParams(0.1, 0.2).channels()] == ['T1', 'T2']

    def test_explicit_flags(self):
        # T2 at p = 0 is a full phase flip, so it must be switched on explicitly
        p = NoiseParams(0.2, 0.0, t1_enabled=False, t2_enabled=True)
        assert [c.kind for c in p.channels()] == ['T2']

    def test_range(self):
        with pytest.raises(NumericDomainError):
            NoiseParams(t1_p=2)


class TestNaive:
    def test_damped_bell(self, pkg):
        rho = density.pure_to_density(pkg, dense_to_dd(pkg, BELL))
        out = noise.apply_channel_naive(rho, noise.kraus_t1(0.3), 1).to_dense()
        printed = [[0.5, 0, 0, 0.418], [0, 0, 0, 0], [0, 0, 0.15, 0], [0.418, 0, 0, 0.35]]
        assert max_abs_diff(out, printed) <= 1e-3
        assert abs(out[0, 3] - math.sqrt(0.7) / 2) <= 1e-12

    def test_no_damping_keeps_handle(self, pkg):
        rho = _random_state(pkg, 4, 3)
        for q in range(3):
            assert noise.apply_channel_naive(rho, noise.kraus_t1(0), q).root == rho.root

    def test_t2_against_dense(self, pkg):
        m = random_density_matrix(np.random.default_rng(5), 3)
        rho = density_state(pkg, m)
        ch = noise.kraus_t2(0.4)
        for q in range(3):
            got = noise.apply_channel_naive(rho, ch, q).to_dense()
            assert max_abs_diff(got, dense_channel(m, ch.matrices, q)) <= 1e-11

    def test_target_range(self, pkg):
        with pytest.raises(StructuralError):
            noise.apply_channel_naive(_random_state(pkg, 6, 2), noise.kraus_t1(0.1), 2)


class TestLocal:
    def test_single_block_map(self, pkg):
        one = pkg.terminal_edge(1)
        kids = noise.t1_children(pkg, (ZERO_EDGE, ZERO_EDGE, ZERO_EDGE, one), 0.3)
        assert [k.weight for k in kids] == [0.3, 0, 0, 0.7]

    def test_t1_zero_keeps_handle(self, pkg):
        rho = _random_state(pkg, 7, 3)
        assert noise.apply_t1_local(rho, 0, 1).root == rho.root

    @pytest.mark.parametrize('p', [0.1, 0.5, 0.9])
    def test_t1_matches_naive(self, pkg, p):
        rho = _random_state(pkg, 8, 4)
        for q in range(4):
            local = noise.apply_t1_local(rho, p, q).to_dense()
            naive = noise.apply_channel_naive(rho, noise.kraus_t1(p), q).to_dense()
            assert max_abs_diff(local, naive) <= 1e-11

    def test_t2_one_keeps_handle(self, pkg):
        rho = _random_state(pkg, 9, 3)
        assert noise.apply_t2_local(rho, 1, 2).root == rho.root

    def test_t2_half_zeroes_off_diagonal_blocks(self, pkg):
        rho = _random_state(pkg, 10, 3)
        out = noise.apply_t2_local(rho, 0.5, 0)
        assert out.root.node.edges[1] == ZERO_EDGE and out.root.node.edges[2] == ZERO_EDGE

    def test_t2_matches_naive_without_additions(self, pkg):
        rng = np.random.default_rng(11)
        rho = _random_state(pkg, 12, 4)
        for q in range(4):
            p = float(rng.uniform())
            before = pkg.stats.add_calls
            local = noise.apply_t2_local(rho, p, q)
            assert pkg.stats.add_calls == before
            naive = noise.apply_channel_naive(rho, noise.kraus_t2(p), q)
            assert max_abs_diff(local.to_dense(), naive.to_dense()) <= 1e-11

    def test_target_range(self, pkg):
        rho = _random_state(pkg, 13, 2)
        with pytest.raises(StructuralError):
            noise.apply_t1_local(rho, 0.1, 5)
        with pytest.raises(NumericDomainError):
            noise.apply_t2_local(rho, 1.1, 0)


class TestSweep:
    def test_empty_targets(self, pkg):
        rho = _random_state(pkg, 14, 3)
        assert noise.apply_noise_sweep(rho, (), NoiseParams(0.1, 0.1)).root == rho.root

    def test_single_target_t1_only(self, pkg):
        rho = _random_state(pkg, 15, 3)
        swept = noise.apply_noise_sweep(rho, {1}, NoiseParams(0.2, 0.0))
        assert swept.root == noise.apply_t1_local(rho, 0.2, 1).root

    def test_matches_sequential(self, pkg):
        rho = _random_state(pkg, 16, 5, rank=3)
        params = NoiseParams(0.002, 0.001)
        swept = noise.apply_noise_sweep(rho, {0, 2, 4}, params)
        seq = rho
        for q in (0, 2, 4):
            seq = noise.apply_t2_local(noise.apply_t1_local(seq, 0.002, q), 0.001, q)
        assert max_abs_diff(swept.to_dense(), seq.to_dense()) <= 1e-11

    def test_one_traversal(self, pkg):
        rho = _random_state(pkg, 17, 4)
        before = pkg.stats.noise_traversals
        noise.apply_noise_sweep(rho, range(4), NoiseParams(0.3, 0.6))
        assert pkg.stats.noise_traversals == before + 1


@given(st.integers(0, 2**31 - 1), st.floats(0, 1), st.floats(0, 1))
@settings(max_examples=30, deadline=None)
def test_channels_on_distinct_qubits_commute(seed, p1, p2):
    pkg = Package()
    rho = _random_state(pkg, seed, 3, rank=2)
    ab = noise.apply_t2_local(noise.apply_t1_local(rho, p1, 0), p2, 2)
    ba = noise.apply_t1_local(noise.apply_t2_local(rho, p2, 2), p1, 0)
    assert max_abs_diff(ab.to_dense(), ba.to_dense()) <= 1e-10


@given(st.integers(0, 2**31 - 1), st.integers(1, 5), st.floats(0, 1), st.floats(0, 1))
@settings(max_examples=30, deadline=None)
def test_three_way_equivalence(seed, n, p1, p2):
    rng = np.random.default_rng(seed)
    m = random_density_matrix(rng, n, rank=int(rng.integers(1, 3)))
    q = int(rng.integers(n))
    pkg = Package()
    rho = density_state(pkg, m)
    dense = dense_channel(dense_channel(m, noise.kraus_t1(p1).matrices, q),
                          noise.kraus_t2(p2).matrices, q)
    naive = noise.apply_channel_naive(
        noise.apply_channel_naive(rho, noise.kraus_t1(p1), q), noise.kraus_t2(p2), q)
    swept = noise.apply_noise_sweep(rho, {q}, NoiseParams(p1, p2, True, True))
    assert max_abs_diff(naive.to_dense(), dense) <= 1e-10
    assert max_abs_diff(swept.to_dense(), dense) <= 1e-10
    assert abs(density.trace(swept) - 1) <= 1e-10
