"""Decoherence channels on decision-diagram density matrices.

Two application strategies are provided:

* ``apply_channel_naive`` evaluates the operator sum
  ``sum_i E_i rho E_i^dagger`` with full-register matrix products and
  additions.
* ``apply_t1_local``, ``apply_t2_local`` and ``apply_noise_sweep`` rewrite
  only the successors of nodes at the affected level(s), in one memoized
  pass.  Amplitude damping (T1) maps a node's blocks ``(a, b, c, d)`` to
  ``(a + p*d, sqrt(1-p)*b, sqrt(1-p)*c, (1-p)*d)``; phase flip (T2) maps
  them to ``(a, (2p-1)*b, (2p-1)*c, d)`` and needs no addition at all.

``p`` always follows the Kraus parameterization of :func:`kraus_t1` and
:func:`kraus_t2`.  For T2 that means the ``Z`` branch carries weight
``1 - p``, so ``p = 1`` is the identity channel.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from ddnoise.dd import ops
from ddnoise.dd.core import ONE, ZERO_EDGE, Edge
from ddnoise.dd.ops import GateMatrix
from ddnoise.errors import ChannelValidationError, NumericDomainError, StructuralError

COMPLETENESS_TOL = 1e-10


def _check_probability(p, name='p'):
    if not (isinstance(p, (int, float)) and math.isfinite(p) and 0.0 <= p <= 1.0):
        raise NumericDomainError(f"{name} must be a probability in [0, 1], got {p!r}")
    return float(p)


@dataclass(frozen=True)
class KrausChannel:
    kind: str
    p: float
    matrices: tuple

    def __iter__(self):
        return iter(self.matrices)


class ChannelCheck(NamedTuple):
    passed: bool
    residual: float


@dataclass(frozen=True)
class NoiseParams:
    """Per-use error probabilities.

    A channel left with ``*_enabled=None`` is switched on exactly when its
    probability is positive.
    """

    t1_p: float = 0.0
    t2_p: float = 0.0
    t1_enabled: Optional[bool] = None
    t2_enabled: Optional[bool] = None

    def __post_init__(self):
        _check_probability(self.t1_p, 't1_p')
        _check_probability(self.t2_p, 't2_p')

    @property
    def t1_on(self):
        return self.t1_p > 0 if self.t1_enabled is None else self.t1_enabled

    @property
    def t2_on(self):
        return self.t2_p > 0 if self.t2_enabled is None else self.t2_enabled

    @property
    def any_on(self):
        return self.t1_on or self.t2_on

    def channels(self):
        """Enabled channels in application order (T1 before T2)."""
        out = []
        if self.t1_on:
            out.append(kraus_t1(self.t1_p))
        if self.t2_on:
            out.append(kraus_t2(self.t2_p))
        return out


def kraus_t1(p):
    """Amplitude damping: ``|1>`` decays to ``|0>`` with probability ``p``."""
    p = _check_probability(p)
    e0 = np.array([[1, 0], [0, math.sqrt(1 - p)]], dtype=complex)
    e1 = np.array([[0, math.sqrt(p)], [0, 0]], dtype=complex)
    return KrausChannel('T1', p, (e0, e1))


def kraus_t2(p):
    """Phase flip: ``Z`` with probability ``1 - p``, so ``p = 1`` is the identity."""
    p = _check_probability(p)
    e0 = math.sqrt(p) * np.eye(2, dtype=complex)
    e1 = math.sqrt(1 - p) * np.array([[1, 0], [0, -1]], dtype=complex)
    return KrausChannel('T2', p, (e0, e1))


def validate_channel(channel, tol=COMPLETENESS_TOL):
    """Check ``sum_i E_i^dagger E_i == I``; returns the max-abs residual."""
    mats = [np.asarray(e, dtype=complex) for e in channel]
    dim = mats[0].shape[0]
    total = sum(e.conj().T @ e for e in mats)
    residual = float(np.max(np.abs(total - np.eye(dim))))
    return ChannelCheck(residual <= tol, residual)


def _check_target(rho, target):
    if not 0 <= target < rho.n:
        raise StructuralError(f"target qubit {target} out of range for {rho.n} qubits")


def apply_channel_naive(rho, channel, target):
    """Operator-sum application using full-register DD products and sums."""
    _check_target(rho, target)
    pkg = rho.pkg
    acc = ZERO_EDGE
    for e in channel:
        op = ops.embed_gate(pkg, GateMatrix(e, unitary=False), (target,), (), rho.n)
        if op.weight == 0:
            continue
        term = ops.multiply(pkg, op, ops.multiply(pkg, rho.root, ops.adjoint(pkg, op)))
        acc = ops.add(pkg, acc, term)
    return rho.with_root(acc)


def t1_children(pkg, children, p):
    """Amplitude damping on the four blocks of one node."""
    a, b, c, d = children
    s = math.sqrt(1 - p)
    return (ops.add(pkg, a, ops.scale(pkg, d, p)), ops.scale(pkg, b, s),
            ops.scale(pkg, c, s), ops.scale(pkg, d, 1 - p))


def t2_children(pkg, children, p):
    """Phase flip on the four blocks of one node; multiplications only."""
    a, b, c, d = children
    f = 2 * p - 1
    return (a, ops.scale(pkg, b, f), ops.scale(pkg, c, f), d)


def _rewrite(rho, targets, node_map):
    """One memoized pass applying ``node_map`` at every level in ``targets``.

    Children are processed before the node's own level is rewritten, which
    is sound because each single-qubit channel acts linearly on the blocks.
    Nodes below the deepest target are shared unchanged.
    """
    pkg = rho.pkg
    pkg.count_traversal()
    if rho.root.weight == 0:
        return rho
    deepest = max(targets)
    memo = {}

    def rec(node):
        if node.level > deepest:
            return Edge(node, ONE)
        hit = memo.get(node)
        if hit is not None:
            return hit
        children = []
        for child in node.edges:
            if child.weight == 0:
                children.append(ZERO_EDGE)
            else:
                children.append(ops.scale(pkg, rec(child.node), child.weight))
        if node.level in targets:
            children = node_map(children)
        result = pkg.make_matrix_node(node.level, children)
        memo[node] = result
        return result

    return rho.with_root(ops.scale(pkg, rec(rho.root.node), rho.root.weight))


def apply_t1_local(rho, p, target):
    p = _check_probability(p)
    _check_target(rho, target)
    pkg = rho.pkg
    return _rewrite(rho, {target}, lambda ch: t1_children(pkg, ch, p))


def apply_t2_local(rho, p, target):
    p = _check_probability(p)
    _check_target(rho, target)
    pkg = rho.pkg
    return _rewrite(rho, {target}, lambda ch: t2_children(pkg, ch, p))


def apply_noise_sweep(rho, targets, params):
    """T1 then T2 on every qubit in ``targets`` within a single traversal."""
    targets = set(targets)
    if not targets or not params.any_on:
        return rho
    for t in targets:
        _check_target(rho, t)
    pkg = rho.pkg
    p1 = params.t1_p
    p2 = params.t2_p
    t1 = params.t1_on
    t2 = params.t2_on

    def node_map(children):
        if t1:
            children = t1_children(pkg, children, p1)
        if t2:
            children = t2_children(pkg, children, p2)
        return children

    return _rewrite(rho, targets, node_map)


def require_valid(channel):
    check = validate_channel(channel)
    if not check.passed:
        raise ChannelValidationError(
            f"{channel.kind} channel violates completeness, residual {check.residual:.3e}")
    return channel
