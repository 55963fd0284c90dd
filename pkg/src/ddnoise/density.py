"""Density-matrix states held as matrix decision diagrams."""
from dataclasses import dataclass

import numpy as np

from ddnoise.dd import ops
from ddnoise.dd.core import ZERO_EDGE, Edge, Package
from ddnoise.errors import DimensionMismatch, InvariantViolation, NormalizationError


@dataclass
class DensityState:
    """``rho`` for ``n`` qubits, bound to the package that owns its nodes."""

    pkg: Package
    root: Edge
    n: int

    def with_root(self, root):
        return DensityState(self.pkg, root, self.n)

    def to_dense(self):
        from ddnoise.oracle import dd_to_dense
        return dd_to_dense(self.root, self.n, matrix=True)

    def entry(self, row, col):
        return self.pkg.get_entry(self.root, row, col) if self.root.weight != 0 else 0j


def _outer(pkg, u, v):
    if u.weight == 0 or v.weight == 0:
        return ZERO_EDGE
    memo = {}

    def rec(un, vn):
        if not un.edges:
            return Edge(un, 1 + 0j)
        key = (un, vn)
        hit = memo.get(key)
        if hit is not None:
            return hit
        children = []
        for eu in un.edges:
            for ev in vn.edges:
                if eu.weight == 0 or ev.weight == 0:
                    children.append(ZERO_EDGE)
                    continue
                r = rec(eu.node, ev.node)
                children.append(Edge(r.node, r.weight * eu.weight * ev.weight.conjugate()))
        result = pkg.make_matrix_node(un.level, children)
        memo[key] = result
        return result

    r = rec(u.node, v.node)
    return ops.scale(pkg, r, u.weight * v.weight.conjugate())


def pure_to_density(pkg, v, n=None):
    """``|v><v|`` for a normalized vector DD."""
    n = v.node.depth if n is None else n
    if v.weight != 0 and v.node.depth != n:
        raise DimensionMismatch(f"vector spans {v.node.depth} qubits, expected {n}")
    norm = ops.inner_product(pkg, v, v).real
    if abs(norm - 1) > pkg.eps:
        raise NormalizationError(f"state has squared norm {norm}")
    return DensityState(pkg, _outer(pkg, v, v), n)


def basis_density(pkg, n, index=0):
    return pure_to_density(pkg, ops.basis_state(pkg, n, index), n)


def apply_unitary(rho, u):
    """``U rho U^dagger``."""
    pkg = rho.pkg
    if u.weight != 0 and u.node.depth != rho.n:
        raise DimensionMismatch(f"operator spans {u.node.depth} qubits, state {rho.n}")
    left = ops.multiply(pkg, u, rho.root)
    return rho.with_root(ops.multiply(pkg, left, ops.adjoint(pkg, u)))


def _complex_trace(e):
    if e.weight == 0:
        return 0j
    memo = {}

    def rec(node):
        if not node.edges:
            return 1 + 0j
        hit = memo.get(node)
        if hit is not None:
            return hit
        a = node.edges[0]
        d = node.edges[3]
        s = 0j
        if a.weight != 0:
            s += a.weight * rec(a.node)
        if d.weight != 0:
            s += d.weight * rec(d.node)
        memo[node] = s
        return s

    return e.weight * rec(e.node)


def trace(rho):
    t = _complex_trace(rho.root)
    if abs(t.imag) > rho.pkg.eps * max(1.0, abs(t.real)):
        raise InvariantViolation(f"trace has imaginary part {t.imag:.3e}")
    return t.real


def purity(rho):
    """``tr(rho^2)``."""
    sq = ops.multiply(rho.pkg, rho.root, rho.root)
    return _complex_trace(sq).real


def _raw_diagonal(rho):
    size = 1 << rho.n
    if rho.root.weight == 0:
        return np.zeros(size, dtype=complex)
    memo = {}

    def rec(node):
        if not node.edges:
            return np.ones(1, dtype=complex)
        hit = memo.get(node)
        if hit is not None:
            return hit
        half = 1 << (node.depth - 1)
        a = node.edges[0]
        d = node.edges[3]
        top = a.weight * rec(a.node) if a.weight != 0 else np.zeros(half, dtype=complex)
        bot = d.weight * rec(d.node) if d.weight != 0 else np.zeros(half, dtype=complex)
        out = np.concatenate((top, bot))
        memo[node] = out
        return out

    return rho.root.weight * rec(rho.root.node)


def diagonal(rho):
    """Measurement probabilities ``rho[i, i]`` as a real array.

    Float noise in ``(-eps, 0)`` is clamped to zero; anything more negative,
    or a diagonal with an imaginary part above ``eps``, is a logic error.
    """
    eps = rho.pkg.eps
    d = _raw_diagonal(rho)
    if d.size and np.max(np.abs(d.imag)) > eps:
        raise InvariantViolation(f"diagonal has imaginary part {np.max(np.abs(d.imag)):.3e}")
    p = d.real.copy()
    if p.size and p.min() < -eps:
        raise InvariantViolation(f"negative probability {p.min():.3e}")
    p[p < 0] = 0.0
    p[(p > 1) & (p <= 1 + eps)] = 1.0
    return p


def sample(rho, shots, seed):
    """Draw ``shots`` measurement outcomes in the computational basis.

    Returns ``{basis index: count}`` for the outcomes that occurred; see
    :func:`sample_probabilities` for the generator.
    """
    return sample_probabilities(diagonal(rho), shots, seed)


def sample_probabilities(p, shots, seed):
    """Histogram of ``shots`` draws from the (trace-normalized) vector ``p``.

    Uses numpy's PCG64 generator seeded with ``seed`` and a single
    multinomial draw, so a given seed always yields the same histogram.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    p = np.asarray(p, dtype=float)
    total = p.sum()
    if total <= 0:
        raise InvariantViolation("cannot sample from a state with zero trace")
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, p / total)
    return {int(i): int(c) for i, c in enumerate(counts) if c}


def fidelity(rho, ideal):
    """``<ideal| rho |ideal>`` for a pure reference state."""
    pkg = rho.pkg
    v = ops.multiply_mv(pkg, rho.root, ideal)
    f = ops.inner_product(pkg, ideal, v)
    if abs(f.imag) > 1e3 * pkg.eps:
        raise InvariantViolation(f"fidelity has imaginary part {f.imag:.3e}")
    return f.real
