"""Decision-diagram kernel: canonical complex weights, the node unique table,
compute caches and reference-counted garbage collection.

Levels follow the register order: level 0 is qubit ``q0``, the most
significant bit of a basis index.  Every path from a root visits each level
once before reaching the terminal; only zero-weight edges (0-stubs) stop
early.  Vector nodes have two successors, matrix nodes four, ordered
``(a, b, c, d)`` = upper-left, upper-right, lower-left, lower-right.

Normalization divides all successors by the weight of largest magnitude
(lowest index wins ties), so stored weights never exceed 1 in magnitude and
the pivot successor always carries exactly ``1``.
"""
import itertools
import logging
import math
import sys
from dataclasses import asdict, dataclass
from typing import NamedTuple

from ddnoise.errors import InvariantViolation, NumericDomainError, StructuralError

logger = logging.getLogger(__name__)

EPS = 1e-10
TERMINAL_LEVEL = sys.maxsize
ZERO = 0j
ONE = 1 + 0j

# neighbour buckets probed on a miss, in a fixed order
_NEIGHBOURS = tuple(
    (dr, di) for dr in (0, -1, 1) for di in (0, -1, 1) if (dr, di) != (0, 0))


class ComplexTable:
    """Tolerance-bucketed store of canonical complex numbers.

    The plane is cut into squares of side ``eps`` centred on the grid
    ``k * eps``; each square holds at most one representative.  A lookup
    returns the representative of its own square, else the first neighbour
    within ``eps`` componentwise, else inserts the value itself.
    Canonical values are plain ``complex`` objects, so handle equality is
    ordinary ``==``.
    """

    def __init__(self, eps=EPS):
        self.eps = eps
        self._inv = 1.0 / eps
        self._buckets = {}
        self.hits = 0
        self.inserts = 0
        self._buckets[(0, 0)] = ZERO
        self._buckets[(round(self._inv), 0)] = ONE

    def __len__(self):
        return len(self._buckets)

    def lookup(self, re, im=0.0):
        """Return the canonical representative of ``re + i*im``."""
        if not (math.isfinite(re) and math.isfinite(im)):
            raise NumericDomainError(f"non-finite complex value ({re}, {im})")
        return self.canon(complex(re, im))

    def canon(self, z):
        if z == 0 or z == 1:
            return ZERO if z == 0 else ONE
        eps = self.eps
        re = z.real
        im = z.imag
        if -eps < re < eps and -eps < im < eps:
            return ZERO
        kr = round(re * self._inv)
        ki = round(im * self._inv)
        buckets = self._buckets
        hit = buckets.get((kr, ki))
        if hit is not None:
            self.hits += 1
            return hit
        for dr, di in _NEIGHBOURS:
            hit = buckets.get((kr + dr, ki + di))
            if (hit is not None and abs(hit.real - re) < eps
                    and abs(hit.imag - im) < eps):
                self.hits += 1
                return hit
        if not (math.isfinite(re) and math.isfinite(im)):
            raise NumericDomainError(f"non-finite complex value {z}")
        z = complex(re, im)
        buckets[(kr, ki)] = z
        self.inserts += 1
        return z

    def canon_rel(self, z):
        """Canonicalize with a tolerance relative to ``|z|``.

        ``z`` is scaled by a power of two into ``[0.5, 1)`` (exact), snapped
        there, and scaled back.  Never snaps a nonzero value to zero.
        """
        if z == 0 or z == 1:
            return ZERO if z == 0 else ONE
        re = z.real
        im = z.imag
        k = math.frexp(max(abs(re), abs(im)))[1]
        if k == 0:
            c = self.canon(z)
            return c if c != 0 else z
        if abs(re - 1) < self.eps and abs(im) < self.eps:
            return ONE
        c = self.canon(complex(math.ldexp(re, -k), math.ldexp(im, -k)))
        if c == 0:
            return z
        return complex(math.ldexp(c.real, k), math.ldexp(c.imag, k))


class Node:
    """A decision-diagram vertex.

    ``depth`` is the number of levels from this node down to the terminal,
    so a root at level 0 spans ``depth`` qubits.  ``ident`` marks matrix
    nodes that represent an identity block.
    """

    __slots__ = ('level', 'edges', 'ref', 'depth', 'ident', 'uid')

    def __init__(self, level, edges, depth, ident=False, uid=0):
        # per-package sequential ids keep hashing, and thus cache
        # behaviour, reproducible from run to run
        self.uid = uid
        self.level = level
        self.edges = edges
        self.ref = 0
        self.depth = depth
        self.ident = ident

    def __hash__(self):
        return self.uid

    @property
    def is_terminal(self):
        return self.level == TERMINAL_LEVEL

    def __repr__(self):
        if self.is_terminal:
            return 'Node(terminal)'
        return f'Node(level={self.level}, arity={len(self.edges)}, id={id(self):#x})'


TERMINAL = Node(TERMINAL_LEVEL, (), 0, ident=True)


class Edge(NamedTuple):
    node: Node
    weight: complex

    @property
    def is_zero(self):
        return self.weight == 0

    @property
    def num_qubits(self):
        """Levels spanned below (and including) the target node."""
        return self.node.depth


ZERO_EDGE = Edge(TERMINAL, ZERO)
ONE_EDGE = Edge(TERMINAL, ONE)


@dataclass
class DDStats:
    current_nodes: int = 0
    peak_nodes: int = 0
    unique_table_hits: int = 0
    unique_table_misses: int = 0
    compute_cache_hits: int = 0
    compute_cache_misses: int = 0
    add_calls: int = 0
    noise_traversals: int = 0
    gc_runs: int = 0
    complex_entries: int = 0

    def as_dict(self):
        return asdict(self)


class ComputeTable:
    """Direct-mapped, fixed-capacity memo table; colliding keys overwrite."""

    __slots__ = ('_keys', '_vals', '_mask', 'hits', 'misses')

    def __init__(self, bits=16):
        size = 1 << bits
        self._mask = size - 1
        self._keys = [None] * size
        self._vals = [None] * size
        self.hits = 0
        self.misses = 0

    def get(self, key):
        i = hash(key) & self._mask
        if self._keys[i] == key:
            self.hits += 1
            return self._vals[i]
        self.misses += 1
        return None

    def put(self, key, value):
        i = hash(key) & self._mask
        self._keys[i] = key
        self._vals[i] = value

    def clear(self):
        size = self._mask + 1
        self._keys = [None] * size
        self._vals = [None] * size


class Package:
    """One decision-diagram context: unique table, caches and statistics.

    Not thread-safe.  Independent simulations should use independent
    packages.

    By default the addition cache is keyed on both operand edges, weights
    included, so every distinct weighted path through a sum is computed
    separately.  ``add_ratio_keys=True`` keys it on the two nodes and the
    weight ratio instead.
    """

    def __init__(self, eps=EPS, cache_bits=16, gc_threshold=50_000, add_ratio_keys=False):
        self.eps = eps
        # (X, Y, v/w) instead of (X, w, Y, v): sums that differ by a common
        # factor share one entry
        self.add_ratio_keys = add_ratio_keys
        self.complex = ComplexTable(eps)
        self._unique = {}
        self._caches = {}
        self._cache_bits = cache_bits
        self._stats = DDStats()
        self.gc_threshold = gc_threshold
        self._gc_limit = gc_threshold
        # per-package memo of identity DDs, dropped on every collection
        self._identities = {}
        self._uids = itertools.count(1)

    # -- scalars -----------------------------------------------------------

    def lookup_complex(self, re, im=0.0):
        return self.complex.lookup(re, im)

    def canon(self, z):
        """Absolute-tolerance snap, for normalized (node-stored) weights."""
        return self.complex.canon(z)

    def canon_top(self, z):
        """Relative-tolerance snap, for weights carrying absolute scale."""
        return self.complex.canon_rel(z)

    def terminal_edge(self, weight):
        w = self.complex.canon(complex(weight))
        if w == 0:
            return ZERO_EDGE
        return Edge(TERMINAL, w)

    # -- caches ------------------------------------------------------------

    def cache(self, tag):
        """Compute table for operation ``tag``, created on first use."""
        table = self._caches.get(tag)
        if table is None:
            table = self._caches[tag] = ComputeTable(self._cache_bits)
        return table

    def clear_caches(self):
        for table in self._caches.values():
            table.clear()
        self._identities.clear()

    @property
    def stats(self):
        s = self._stats
        s.current_nodes = len(self._unique)
        s.compute_cache_hits = sum(t.hits for t in self._caches.values())
        s.compute_cache_misses = sum(t.misses for t in self._caches.values())
        s.complex_entries = len(self.complex)
        return s

    def count_add(self):
        self._stats.add_calls += 1

    def count_traversal(self):
        self._stats.noise_traversals += 1

    # -- node construction -------------------------------------------------

    def make_vector_node(self, level, edges):
        if len(edges) != 2:
            raise StructuralError(f"vector node needs 2 successors, got {len(edges)}")
        return self._make_node(level, edges)

    def make_matrix_node(self, level, edges):
        if len(edges) != 4:
            raise StructuralError(f"matrix node needs 4 successors, got {len(edges)}")
        return self._make_node(level, edges)

    def _make_node(self, level, edges):
        eps = self.eps
        canon = self.complex.canon
        pivot = -1
        best = 0.0
        for i, e in enumerate(edges):
            w = e.weight
            if w == 0:
                continue
            if e.node.level <= level:
                raise StructuralError(
                    f"successor at level {e.node.level} under level {level}")
            m = abs(w)
            if m > best + eps:
                best = m
                pivot = i
        if pivot < 0 or best < eps:
            return ZERO_EDGE
        top = edges[pivot].weight
        normed = []
        depth = 0
        for i, e in enumerate(edges):
            if i == pivot:
                normed.append(Edge(e.node, ONE))
                depth = e.node.depth
                continue
            w = e.weight
            if w != 0:
                w = canon(w / top)
            normed.append(Edge(e.node, w) if w != 0 else ZERO_EDGE)
        normed = tuple(normed)
        for e in normed:
            if e.weight != 0 and e.node.depth != depth:
                raise StructuralError("successors span different numbers of levels")
        key = (level, normed)
        node = self._unique.get(key)
        if node is None:
            ident = (len(normed) == 4 and normed[1].weight == 0
                     and normed[2].weight == 0 and normed[0] == normed[3]
                     and normed[0].weight == 1 and normed[0].node.ident)
            node = Node(level, normed, depth + 1, ident, next(self._uids))
            self._unique[key] = node
            self._stats.unique_table_misses += 1
            if len(self._unique) > self._stats.peak_nodes:
                self._stats.peak_nodes = len(self._unique)
        else:
            self._stats.unique_table_hits += 1
        return Edge(node, self.complex.canon_rel(top))

    # -- entry reconstruction ----------------------------------------------

    def get_amplitude(self, v, index):
        """Amplitude of basis state ``index``: product of weights on its path."""
        n = v.node.depth
        if not 0 <= index < (1 << n):
            raise IndexError(f"basis index {index} out of range for {n} qubits")
        w = v.weight
        e = v
        for k in range(n - 1, -1, -1):
            if w == 0:
                return ZERO
            e = e.node.edges[(index >> k) & 1]
            w *= e.weight
        return self.complex.canon_rel(w)

    def get_entry(self, m, row, col):
        """Entry ``(row, col)`` of a matrix DD."""
        n = m.node.depth
        if not (0 <= row < (1 << n) and 0 <= col < (1 << n)):
            raise IndexError(f"entry ({row}, {col}) out of range for {n} qubits")
        w = m.weight
        e = m
        for k in range(n - 1, -1, -1):
            if w == 0:
                return ZERO
            e = e.node.edges[(((row >> k) & 1) << 1) | ((col >> k) & 1)]
            w *= e.weight
        return self.complex.canon_rel(w)

    # -- lifetime ----------------------------------------------------------

    def incref(self, e):
        node = e.node
        if node is TERMINAL:
            return
        node.ref += 1
        if node.ref == 1:
            for child in node.edges:
                self.incref(child)

    def decref(self, e):
        node = e.node
        if node is TERMINAL:
            return
        if node.ref <= 0:
            raise InvariantViolation(f"reference count of {node!r} would drop below zero")
        node.ref -= 1
        if node.ref == 0:
            for child in node.edges:
                self.decref(child)

    def collect_garbage(self):
        """Drop every unreferenced node; compute caches are flushed."""
        before = len(self._unique)
        self._unique = {k: n for k, n in self._unique.items() if n.ref > 0}
        freed = before - len(self._unique)
        self.clear_caches()
        self._stats.gc_runs += 1
        logger.debug("gc freed %d of %d nodes", freed, before)
        return freed

    def maybe_collect(self):
        """Collect when the table outgrew the adaptive threshold."""
        if len(self._unique) < self._gc_limit:
            return 0
        freed = self.collect_garbage()
        self._gc_limit = max(self.gc_threshold, 2 * len(self._unique))
        return freed


def node_count(e):
    """Number of distinct nodes reachable from ``e``, terminal included."""
    seen = set()
    stack = [e.node]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        for child in node.edges:
            if child.weight != 0:
                stack.append(child.node)
    return len(seen)


# rough per-node footprint used to express node counts as memory
NODE_BYTES = (sys.getsizeof(Node(0, (), 0)) + sys.getsizeof((None,) * 4)
              + 4 * (sys.getsizeof((None, None)) + sys.getsizeof(1j)))
