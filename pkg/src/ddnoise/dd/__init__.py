from ddnoise.dd.core import (EPS, ONE_EDGE, TERMINAL, ZERO_EDGE, DDStats, Edge, Node,
                             Package, node_count)
from ddnoise.dd.ops import (GateMatrix, add, adjoint, basis_state, embed_gate, identity,
                            inner_product, multiply, multiply_mv, scale)

__all__ = [
    'EPS', 'ONE_EDGE', 'TERMINAL', 'ZERO_EDGE', 'DDStats', 'Edge', 'Node', 'Package',
    'node_count', 'GateMatrix', 'add', 'adjoint', 'basis_state', 'embed_gate',
    'identity', 'inner_product', 'multiply', 'multiply_mv', 'scale',
]
