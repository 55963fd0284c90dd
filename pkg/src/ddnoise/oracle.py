"""Dense reference implementation on explicit numpy arrays.

These routines are deliberately naive formula transcriptions.  They are the
ground truth the decision-diagram code is tested against, and back the
``dense`` simulation mode for small registers.
"""
import numpy as np

from ddnoise.errors import DimensionMismatch

MAX_DENSE_QUBITS = 12


def _qubits_of(dim):
    n = int(dim).bit_length() - 1
    if dim < 1 or (1 << n) != dim:
        raise DimensionMismatch(f"dimension {dim} is not a power of two")
    return n


def _bit(index, q, n):
    return (index >> (n - 1 - q)) & 1


def dense_multiply(m, x):
    m = np.asarray(m, dtype=complex)
    x = np.asarray(x, dtype=complex)
    if m.shape[1] != x.shape[0]:
        raise DimensionMismatch(f"cannot multiply {m.shape} by {x.shape}")
    return m @ x


def dense_outer(v):
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def dense_conjugate(m, u):
    """``u @ m @ u^dagger``."""
    u = np.asarray(u, dtype=complex)
    return u @ np.asarray(m, dtype=complex) @ u.conj().T


def embed_dense(g, targets, controls, n):
    """Full ``2**n`` matrix of a controlled ``k``-target gate."""
    g = np.asarray(g, dtype=complex)
    k = len(targets)
    dim = 1 << n
    u = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        if not all(_bit(col, c, n) for c in controls):
            u[col, col] = 1
            continue
        tc = sum(_bit(col, t, n) << (k - 1 - j) for j, t in enumerate(targets))
        for tr in range(1 << k):
            row = col
            for j, t in enumerate(targets):
                mask = 1 << (n - 1 - t)
                row = row | mask if (tr >> (k - 1 - j)) & 1 else row & ~mask
            u[row, col] += g[tr, tc]
    return u


def embed_single(e, target, n):
    """``I (x) ... (x) e (x) ... (x) I`` with ``e`` on ``target``."""
    return np.kron(np.kron(np.eye(1 << target), e), np.eye(1 << (n - target - 1)))


def dense_channel(rho, kraus, target):
    """Operator-sum ``sum_i E_i rho E_i^dagger`` on one qubit."""
    rho = np.asarray(rho, dtype=complex)
    n = _qubits_of(rho.shape[0])
    out = np.zeros_like(rho)
    for e in kraus:
        full = embed_single(np.asarray(e, dtype=complex), target, n)
        out += full @ rho @ full.conj().T
    return out


def dense_to_dd(pkg, a):
    """Build the DD of a dense vector (1-D) or matrix (2-D)."""
    a = np.asarray(a, dtype=complex)
    n = _qubits_of(a.shape[0])
    if a.ndim == 2 and a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"matrix must be square, got {a.shape}")

    def vec(level, x):
        if level == n:
            return pkg.terminal_edge(x[0])
        h = len(x) // 2
        return pkg.make_vector_node(level, (vec(level + 1, x[:h]), vec(level + 1, x[h:])))

    def mat(level, x):
        if level == n:
            return pkg.terminal_edge(x[0, 0])
        h = len(x) // 2
        return pkg.make_matrix_node(level, (
            mat(level + 1, x[:h, :h]), mat(level + 1, x[:h, h:]),
            mat(level + 1, x[h:, :h]), mat(level + 1, x[h:, h:])))

    return vec(0, a) if a.ndim == 1 else mat(0, a)


def dd_to_dense(e, n=None, matrix=None):
    """Expand a DD into a numpy array.

    ``n`` and ``matrix`` are only needed for a zero edge, which carries no
    shape information.
    """
    if e.weight == 0:
        if n is None or matrix is None:
            raise ValueError("zero edge needs explicit n and matrix flag")
        return np.zeros((1 << n,) * (2 if matrix else 1), dtype=complex)
    memo = {}

    def rec(node):
        if not node.edges:
            return np.ones((1, 1) if matrix_ else 1, dtype=complex)
        if node in memo:
            return memo[node]
        parts = []
        for c in node.edges:
            if c.weight == 0:
                size = 1 << (node.depth - 1)
                parts.append(np.zeros((size, size) if matrix_ else size, dtype=complex))
            else:
                parts.append(c.weight * rec(c.node))
        out = np.block([[parts[0], parts[1]], [parts[2], parts[3]]]) if matrix_ \
            else np.concatenate(parts)
        memo[node] = out
        return out

    matrix_ = len(e.node.edges) == 4 if e.node.edges else bool(matrix)
    return e.weight * rec(e.node)

