"""Random instances shared by the test modules."""
import math

import numpy as np

from ddnoise.circuit.ir import GATE_KINDS, Circuit, Gate
from ddnoise.density import DensityState
from ddnoise.oracle import dense_to_dd

SQRT_HALF = 1 / math.sqrt(2)
BELL = np.array([SQRT_HALF, 0, 0, SQRT_HALF], dtype=complex)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def random_gate(rng, n):
    kinds = [k for k, (nt, nc, _) in GATE_KINDS.items() if nt + nc <= n]
    kind = kinds[rng.integers(len(kinds))]
    nt, nc, param = GATE_KINDS[kind]
    qubits = [int(q) for q in rng.permutation(n)[:nt + nc]]
    angle = float(rng.uniform(-math.pi, math.pi)) if param else None
    return Gate(kind, qubits[:nt], qubits[nt:], angle)


def random_circuit(rng, n, depth):
    return Circuit(n, [random_gate(rng, n) for _ in range(depth)])


def random_state_vector(rng, n):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


def random_density_matrix(rng, n, rank=None):
    dim = 1 << n
    rank = dim if rank is None else rank
    a = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_matrix(rng, n):
    dim = 1 << n
    return rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))


def random_unitary(rng, n):
    q, r = np.linalg.qr(random_matrix(rng, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def density_state(pkg, rho):
    n = int(rho.shape[0]).bit_length() - 1
    return DensityState(pkg, dense_to_dd(pkg, rho), n)


def max_abs_diff(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
