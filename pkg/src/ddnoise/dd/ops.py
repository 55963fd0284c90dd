"""Algebra on decision diagrams.

All operations recurse level by level over operands of equal depth and
terminate at the terminal with scalar arithmetic.  Zero-weight operands are
short-circuited before any recursion or cache access.
"""
from dataclasses import dataclass

import numpy as np

from ddnoise.dd.core import ONE, ONE_EDGE, ZERO_EDGE, Edge
from ddnoise.errors import DimensionMismatch, StructuralError


@dataclass(frozen=True)
class GateMatrix:
    """Dense ``2**k x 2**k`` operator acting on ``k`` target qubits.

    Index bit ``k-1-j`` of a row/column belongs to the ``j``-th target.
    """

    entries: np.ndarray
    unitary: bool = True

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] & (m.shape[0] - 1):
            raise StructuralError(f"gate matrix must be square of size 2**k, got {m.shape}")
        if self.unitary and not np.allclose(m.conj().T @ m, np.eye(m.shape[0]), atol=1e-10):
            raise StructuralError("gate matrix flagged unitary is not unitary")
        object.__setattr__(self, 'entries', m)

    @property
    def num_targets(self):
        return self.entries.shape[0].bit_length() - 1


def _check_depth(x, y):
    if x.depth != y.depth:
        raise DimensionMismatch(f"operands span {x.depth} and {y.depth} qubits")


def add(pkg, x, y):
    """Entrywise sum of two DDs of the same shape."""
    pkg.count_add()
    if x.weight == 0:
        return y
    if y.weight == 0:
        return x
    xn = x.node
    yn = y.node
    if xn is yn:
        w = x.weight + y.weight
        if abs(w) <= pkg.eps * max(abs(x.weight), abs(y.weight)):
            return ZERO_EDGE
        return Edge(xn, pkg.canon_top(w))
    _check_depth(xn, yn)
    if xn.uid > yn.uid:
        x, y = y, x
        xn, yn = yn, xn
    table = pkg.cache('add')
    if pkg.add_ratio_keys:
        # w*X + v*Y == w * (X + (v/w)*Y): sums differing only by a common
        # factor share one cache entry
        xw = x.weight
        ratio = pkg.canon(y.weight / xw)
        if ratio == 0:
            return x
        key = (xn, yn, ratio)
        result = table.get(key)
        if result is None:
            result = _add_children(pkg, xn, ONE, yn, ratio, pkg.canon)
            table.put(key, result)
        if result.weight == 0:
            return ZERO_EDGE
        return Edge(result.node, pkg.canon_top(result.weight * xw))
    key = (xn, x.weight, yn, y.weight)
    result = table.get(key)
    if result is None:
        result = _add_children(pkg, xn, x.weight, yn, y.weight, pkg.canon_top)
        table.put(key, result)
    return result


def _add_children(pkg, xn, xw, yn, yw, canon):
    children = []
    for ex, ey in zip(xn.edges, yn.edges):
        if ex.weight != 0 and xw != 1:
            ex = Edge(ex.node, canon(ex.weight * xw))
        if ey.weight != 0 and yw != 1:
            ey = Edge(ey.node, canon(ey.weight * yw))
        children.append(add(pkg, ex, ey))
    if len(children) == 4:
        return pkg.make_matrix_node(xn.level, children)
    return pkg.make_vector_node(xn.level, children)


def scale(pkg, x, s):
    """Multiply every entry of ``x`` by the scalar ``s``."""
    if x.weight == 0 or s == 0:
        return ZERO_EDGE
    if s == 1:
        return x
    return Edge(x.node, pkg.canon_top(x.weight * s))


def multiply(pkg, x, y):
    """Matrix product ``x @ y``."""
    if x.weight == 0 or y.weight == 0:
        return ZERO_EDGE
    r = _mul_mm(pkg, x.node, y.node)
    if r.weight == 0:
        return ZERO_EDGE
    return Edge(r.node, pkg.canon_top(r.weight * x.weight * y.weight))


def _mul_mm(pkg, xn, yn):
    _check_depth(xn, yn)
    if xn.ident:
        return Edge(yn, ONE)
    if yn.ident:
        return Edge(xn, ONE)
    table = pkg.cache('mul')
    key = (xn, yn)
    hit = table.get(key)
    if hit is not None:
        return hit
    xe = xn.edges
    ye = yn.edges
    children = []
    for i in (0, 2):
        for j in (0, 1):
            children.append(add(pkg, multiply(pkg, xe[i], ye[j]),
                                multiply(pkg, xe[i + 1], ye[2 + j])))
    result = pkg.make_matrix_node(xn.level, children)
    table.put(key, result)
    return result


def multiply_mv(pkg, m, v):
    """Matrix-vector product ``m @ v``."""
    if m.weight == 0 or v.weight == 0:
        return ZERO_EDGE
    r = _mul_mv(pkg, m.node, v.node)
    if r.weight == 0:
        return ZERO_EDGE
    return Edge(r.node, pkg.canon_top(r.weight * m.weight * v.weight))


def _mul_mv(pkg, mn, vn):
    _check_depth(mn, vn)
    if mn.ident:
        return Edge(vn, ONE)
    if len(mn.edges) != 4 or len(vn.edges) != 2:
        raise StructuralError("multiply_mv expects a matrix DD and a vector DD")
    table = pkg.cache('mv')
    key = (mn, vn)
    hit = table.get(key)
    if hit is not None:
        return hit
    me = mn.edges
    ve = vn.edges
    children = [add(pkg, multiply_mv(pkg, me[i], ve[0]), multiply_mv(pkg, me[i + 1], ve[1]))
                for i in (0, 2)]
    result = pkg.make_vector_node(mn.level, children)
    table.put(key, result)
    return result


def adjoint(pkg, x):
    """Conjugate transpose."""
    if x.weight == 0:
        return ZERO_EDGE
    r = _adj(pkg, x.node)
    return Edge(r.node, pkg.canon_top(r.weight * x.weight.conjugate()))


def _adj(pkg, node):
    if node.ident:
        return Edge(node, ONE)
    table = pkg.cache('adj')
    hit = table.get(node)
    if hit is not None:
        return hit
    a, b, c, d = node.edges
    result = pkg.make_matrix_node(
        node.level, (adjoint(pkg, a), adjoint(pkg, c), adjoint(pkg, b), adjoint(pkg, d)))
    table.put(node, result)
    return result


def inner_product(pkg, x, y):
    """``<x|y>`` for vector DDs, as a plain complex number."""
    if x.weight == 0 or y.weight == 0:
        return 0j
    _check_depth(x.node, y.node)
    memo = {}

    def rec(xn, yn):
        if not xn.edges:
            return 1 + 0j
        key = (xn, yn)
        if key in memo:
            return memo[key]
        s = 0j
        for ex, ey in zip(xn.edges, yn.edges):
            if ex.weight != 0 and ey.weight != 0:
                s += ex.weight.conjugate() * ey.weight * rec(ex.node, ey.node)
        memo[key] = s
        return s

    return x.weight.conjugate() * y.weight * rec(x.node, y.node)


def identity(pkg, n):
    """``n``-qubit identity operator."""
    e = pkg._identities.get(n)
    if e is not None:
        return e
    e = ONE_EDGE
    for level in range(n - 1, -1, -1):
        e = pkg.make_matrix_node(level, (e, ZERO_EDGE, ZERO_EDGE, e))
    pkg._identities[n] = e
    return e


def basis_state(pkg, n, index):
    """Vector DD of the computational basis state ``|index>``."""
    if not 0 <= index < (1 << n):
        raise IndexError(f"basis index {index} out of range for {n} qubits")
    e = ONE_EDGE
    for level in range(n - 1, -1, -1):
        bit = (index >> (n - 1 - level)) & 1
        e = pkg.make_vector_node(level, (ZERO_EDGE, e) if bit else (e, ZERO_EDGE))
    return e


def embed_gate(pkg, g, targets, controls=(), n=None):
    """Operator DD of ``g`` on ``targets`` conditioned on all ``controls``
    being ``|1>``, extended by identities on the remaining qubits."""
    if not isinstance(g, GateMatrix):
        g = GateMatrix(np.asarray(g, dtype=complex), unitary=False)
    targets = tuple(int(t) for t in targets)
    controls = tuple(int(c) for c in controls)
    if n is None:
        raise TypeError("embed_gate requires the register size n")
    if len(targets) != g.num_targets:
        raise StructuralError(
            f"{g.num_targets}-qubit gate given {len(targets)} targets")
    used = targets + controls
    if len(set(used)) != len(used):
        raise StructuralError(f"targets {targets} and controls {controls} overlap")
    if any(not 0 <= q < n for q in used):
        raise StructuralError(f"qubit index out of range for {n} qubits in {used}")
    k = len(targets)
    shift = {t: k - 1 - j for j, t in enumerate(targets)}
    control_set = set(controls)
    mat = g.entries
    memo = {}

    def build(level, tr, tc, active):
        key = (level, tr, tc, active)
        if key in memo:
            return memo[key]
        if level == n:
            if active:
                e = pkg.terminal_edge(mat[tr, tc])
            else:
                e = ONE_EDGE if tr == tc else ZERO_EDGE
        elif level in shift:
            s = shift[level]
            e = pkg.make_matrix_node(level, tuple(
                build(level + 1, tr | (rb << s), tc | (cb << s), active)
                for rb in (0, 1) for cb in (0, 1)))
        elif level in control_set:
            e = pkg.make_matrix_node(level, (
                build(level + 1, tr, tc, False), ZERO_EDGE,
                ZERO_EDGE, build(level + 1, tr, tc, active)))
        else:
            sub = build(level + 1, tr, tc, active)
            e = pkg.make_matrix_node(level, (sub, ZERO_EDGE, ZERO_EDGE, sub))
        memo[key] = e
        return e

    return build(0, 0, 0, True)
