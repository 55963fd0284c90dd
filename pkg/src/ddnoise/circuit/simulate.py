"""Noisy circuit simulation driver.

Each gate is applied as ``U rho U^dagger`` and followed by decoherence on
every qubit the gate touched (controls included).  Qubits that sit idle
accrue no error.  Per qubit, T1 acts before T2, qubits in ascending order.

Modes:

``dense``
    explicit numpy density matrix (reference, at most 12 qubits)
``naive``
    decision diagrams, each Kraus channel through full operator sums
``advanced``
    decision diagrams, all errors of a gate in one node-local sweep
"""
import logging
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ddnoise import density, noise, oracle
from ddnoise.dd import ops
from ddnoise.dd.core import NODE_BYTES, Package
from ddnoise.errors import InvariantViolation, SimulationTimeout, StructuralError
from ddnoise.noise import NoiseParams

logger = logging.getLogger(__name__)

MODES = ('dense', 'naive', 'advanced')
FIDELITY_AUTO_LIMIT = 20
TRACE_GUARD = 1e-6


@dataclass
class SimulationReport:
    mode: str
    n: int
    num_gates: int
    probabilities: np.ndarray
    trace: float
    fidelity: Optional[float]
    timings: dict
    stats: dict
    noise: NoiseParams
    # final state: a DensityState (still referenced) or a dense array
    state: object = field(default=None, repr=False, compare=False)

    def top_k(self, k):
        """``k`` most likely outcomes as ``(index, probability)``, ties by index."""
        order = np.lexsort((np.arange(self.probabilities.size), -self.probabilities))
        return [(int(i), float(self.probabilities[i])) for i in order[:k]]


def _check_deadline(deadline):
    if deadline is not None and time.perf_counter() >= deadline:
        raise SimulationTimeout("simulation deadline exceeded")


def _validated_channels(params):
    return [noise.require_valid(ch) for ch in params.channels()]


def simulate(circuit, params=None, mode='advanced', initial=0, *, with_fidelity=None,
             noise_qubits=None, deadline=None, pkg=None):
    """Run ``circuit`` from basis state ``|initial>`` and collect a report.

    ``noise_qubits`` switches to a single-shot error model: gates run
    noiselessly and the channels are applied once, at the end, to the given
    qubits.  ``deadline`` is a ``time.perf_counter()`` value checked before
    each gate.
    """
    params = NoiseParams() if params is None else params
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    n = circuit.n
    if not 0 <= initial < (1 << n):
        raise StructuralError(f"initial basis state {initial} out of range for {n} qubits")
    if noise_qubits is not None:
        noise_qubits = tuple(sorted(set(noise_qubits)))
        if any(not 0 <= q < n for q in noise_qubits):
            raise StructuralError(f"noise qubits {noise_qubits} out of range")
    if with_fidelity is None:
        with_fidelity = n <= FIDELITY_AUTO_LIMIT
    channels = _validated_channels(params)
    if mode == 'dense':
        if n > oracle.MAX_DENSE_QUBITS:
            raise StructuralError(
                f"dense mode is limited to {oracle.MAX_DENSE_QUBITS} qubits, got {n}")
        run = _run_dense
    else:
        run = _run_dd
    report = run(circuit, params, channels, mode, initial, noise_qubits, deadline, pkg,
                 with_fidelity)
    if abs(report.trace - 1) > TRACE_GUARD:
        raise InvariantViolation(f"trace drifted to {report.trace!r}")
    return report


def _run_dense(circuit, params, channels, mode, initial, noise_qubits, deadline, pkg,
               with_fidelity):
    n = circuit.n
    t0 = time.perf_counter()
    psi = np.zeros(1 << n, dtype=complex)
    psi[initial] = 1
    rho = oracle.dense_outer(psi)
    t_gate = t_noise = 0.0
    for g in circuit:
        _check_deadline(deadline)
        t = time.perf_counter()
        u = oracle.embed_dense(g.base_matrix(), g.targets, g.controls, n)
        rho = oracle.dense_conjugate(rho, u)
        t_gate += time.perf_counter() - t
        if noise_qubits is None:
            t = time.perf_counter()
            for q in g.qubits:
                for ch in channels:
                    rho = oracle.dense_channel(rho, ch.matrices, q)
            t_noise += time.perf_counter() - t
    if noise_qubits is not None:
        t = time.perf_counter()
        for q in noise_qubits:
            for ch in channels:
                rho = oracle.dense_channel(rho, ch.matrices, q)
        t_noise += time.perf_counter() - t
    t_sim = time.perf_counter() - t0
    probs = np.real(np.diag(rho)).copy()
    probs[(probs < 0) & (probs > -1e-10)] = 0.0
    fid = None
    t_fid = 0.0
    if with_fidelity:
        t = time.perf_counter()
        ideal = circuit.unitary() @ psi
        fid = float(np.real(ideal.conj() @ rho @ ideal))
        t_fid = time.perf_counter() - t
    return SimulationReport(
        mode=mode, n=n, num_gates=len(circuit), probabilities=probs,
        trace=float(np.real(np.trace(rho))), fidelity=fid,
        timings={'gates_s': t_gate, 'noise_s': t_noise, 'simulation_s': t_sim,
                 'fidelity_s': t_fid},
        stats={'peak_nodes': None, 'dense_bytes': int(rho.nbytes)},
        noise=params, state=rho)


def _apply_noise(rho, qubits, params, channels, mode):
    if mode == 'advanced':
        return noise.apply_noise_sweep(rho, qubits, params)
    for q in qubits:
        for ch in channels:
            rho = noise.apply_channel_naive(rho, ch, q)
    return rho


def _swap_root(pkg, old, new):
    pkg.incref(new.root)
    pkg.decref(old.root)
    pkg.maybe_collect()
    return new


_X = np.array([[0, 1], [1, 0]], dtype=complex)


def _unitary_steps(g, pkg=None):
    """``(matrix, targets, controls)`` factors of a gate, applied in order.

    With edge-keyed additions a wide swap is cheaper as three CNOTs than as
    one 4x4 operator; with ratio keys the direct operator wins.
    """
    if g.kind == 'SWAP' and pkg is not None and not pkg.add_ratio_keys:
        a, b = g.targets
        cx = ops.GateMatrix(_X)
        return [(cx, (b,), (a,)), (cx, (a,), (b,)), (cx, (b,), (a,))]
    return [(g.gate_matrix(), g.targets, g.controls)]


def _run_dd(circuit, params, channels, mode, initial, noise_qubits, deadline, pkg,
            with_fidelity):
    n = circuit.n
    pkg = Package() if pkg is None else pkg
    t0 = time.perf_counter()
    rho = density.basis_density(pkg, n, initial)
    pkg.incref(rho.root)
    t_gate = t_noise = 0.0
    for g in circuit:
        _check_deadline(deadline)
        t = time.perf_counter()
        new = rho
        for mat, targets, controls in _unitary_steps(g, pkg):
            new = density.apply_unitary(new, ops.embed_gate(pkg, mat, targets, controls, n))
        t_gate += time.perf_counter() - t
        if noise_qubits is None and channels:
            t = time.perf_counter()
            new = _apply_noise(new, g.qubits, params, channels, mode)
            t_noise += time.perf_counter() - t
        rho = _swap_root(pkg, rho, new)
    if noise_qubits is not None and channels:
        t = time.perf_counter()
        rho = _swap_root(pkg, rho, _apply_noise(rho, noise_qubits, params, channels, mode))
        t_noise += time.perf_counter() - t
    t_sim = time.perf_counter() - t0
    probs = density.diagonal(rho)
    tr = density.trace(rho)
    fid = None
    t_fid = 0.0
    if with_fidelity:
        t = time.perf_counter()
        fid = density.fidelity(rho, ideal_vector(pkg, circuit, initial))
        t_fid = time.perf_counter() - t
    stats = pkg.stats.as_dict()
    stats['peak_memory_bytes'] = stats['peak_nodes'] * NODE_BYTES
    logger.debug("%s n=%d: %.3fs, peak %d nodes", mode, n, t_sim, stats['peak_nodes'])
    return SimulationReport(
        mode=mode, n=n, num_gates=len(circuit), probabilities=probs, trace=tr,
        fidelity=fid,
        timings={'gates_s': t_gate, 'noise_s': t_noise, 'simulation_s': t_sim,
                 'fidelity_s': t_fid},
        stats=stats, noise=params, state=rho)


def ideal_vector(pkg, circuit, initial=0):
    """Noise-free state-vector DD simulation of ``circuit``."""
    v = ops.basis_state(pkg, circuit.n, initial)
    for g in circuit:
        for mat, targets, controls in _unitary_steps(g, pkg):
            v = ops.multiply_mv(pkg, ops.embed_gate(pkg, mat, targets, controls, circuit.n), v)
    return v
