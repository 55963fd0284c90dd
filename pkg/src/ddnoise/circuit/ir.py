"""Gate-level circuit representation and gate matrices.

Qubit ``q[0]`` is the most significant bit of a basis-state index, the
opposite of the little-endian convention many QASM toolchains use.
"""
import cmath
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ddnoise.dd.ops import GateMatrix
from ddnoise.errors import StructuralError

_S2 = 1 / math.sqrt(2)

FIXED_MATRICES = {
    'X': np.array([[0, 1], [1, 0]], dtype=complex),
    'Y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'Z': np.array([[1, 0], [0, -1]], dtype=complex),
    'H': np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    'S': np.array([[1, 0], [0, 1j]], dtype=complex),
    'Sdg': np.array([[1, 0], [0, -1j]], dtype=complex),
    'T': np.array([[1, 0], [0, cmath.exp(1j * math.pi / 4)]], dtype=complex),
    'Tdg': np.array([[1, 0], [0, cmath.exp(-1j * math.pi / 4)]], dtype=complex),
    'SWAP': np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}


def _rx(t):
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _ry(t):
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(t):
    return np.array([[cmath.exp(-0.5j * t), 0], [0, cmath.exp(0.5j * t)]], dtype=complex)


def _phase(t):
    return np.array([[1, 0], [0, cmath.exp(1j * t)]], dtype=complex)


ROTATIONS = {'RX': _rx, 'RY': _ry, 'RZ': _rz, 'Phase': _phase, 'CPhase': _phase}

# kind -> (number of targets, number of controls, parameterized)
GATE_KINDS = {
    'X': (1, 0, False), 'Y': (1, 0, False), 'Z': (1, 0, False), 'H': (1, 0, False),
    'S': (1, 0, False), 'Sdg': (1, 0, False), 'T': (1, 0, False), 'Tdg': (1, 0, False),
    'RX': (1, 0, True), 'RY': (1, 0, True), 'RZ': (1, 0, True), 'Phase': (1, 0, True),
    'CX': (1, 1, False), 'CZ': (1, 1, False), 'CPhase': (1, 1, True),
    'SWAP': (2, 0, False),
}

# controlled kinds reuse the matrix of their single-qubit base gate
_BASE = {'CX': 'X', 'CZ': 'Z'}


@dataclass(frozen=True)
class Gate:
    kind: str
    targets: Tuple[int, ...]
    controls: Tuple[int, ...] = ()
    angle: Optional[float] = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise StructuralError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, 'targets', tuple(int(q) for q in self.targets))
        object.__setattr__(self, 'controls', tuple(int(q) for q in self.controls))
        nt, nc, param = GATE_KINDS[self.kind]
        if len(self.targets) != nt or len(self.controls) != nc:
            raise StructuralError(
                f"{self.kind} takes {nt} target(s) and {nc} control(s), "
                f"got {self.targets} / {self.controls}")
        used = self.targets + self.controls
        if len(set(used)) != len(used):
            raise StructuralError(f"{self.kind} uses qubit twice: {used}")
        if any(q < 0 for q in used):
            raise StructuralError(f"negative qubit index in {used}")
        if param != (self.angle is not None):
            raise StructuralError(
                f"{self.kind} {'requires' if param else 'takes no'} angle")
        if self.angle is not None:
            object.__setattr__(self, 'angle', float(self.angle))

    @property
    def qubits(self):
        """Every qubit the gate touches, ascending."""
        return tuple(sorted(self.targets + self.controls))

    def base_matrix(self):
        """Matrix acting on the targets only (controls excluded)."""
        if self.kind in ROTATIONS:
            return ROTATIONS[self.kind](self.angle)
        return FIXED_MATRICES[_BASE.get(self.kind, self.kind)]

    def gate_matrix(self):
        return GateMatrix(self.base_matrix())

    def __str__(self):
        angle = f"({self.angle:.6g})" if self.angle is not None else ""
        ctl = f" ctrl {list(self.controls)}" if self.controls else ""
        return f"{self.kind}{angle} {list(self.targets)}{ctl}"


@dataclass
class Circuit:
    n: int
    gates: List[Gate] = field(default_factory=list)

    def __post_init__(self):
        if self.n < 1:
            raise StructuralError(f"circuit needs at least one qubit, got {self.n}")
        self.gates = list(self.gates)
        for g in self.gates:
            self._check(g)

    def _check(self, g):
        if any(q >= self.n for q in g.qubits):
            raise StructuralError(f"{g} exceeds register of {self.n} qubits")

    def append(self, g):
        self._check(g)
        self.gates.append(g)
        return self

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def unitary(self):
        """Dense matrix of the whole circuit (small registers only)."""
        from ddnoise.oracle import embed_dense
        u = np.eye(1 << self.n, dtype=complex)
        for g in self.gates:
            u = embed_dense(g.base_matrix(), g.targets, g.controls, self.n) @ u
        return u


# shorthand constructors


def H(q):
    return Gate('H', (q,))


def X(q):
    return Gate('X', (q,))


def CX(control, target):
    return Gate('CX', (target,), (control,))


def CPhase(angle, control, target):
    return Gate('CPhase', (target,), (control,), angle)


def SWAP(a, b):
    return Gate('SWAP', (a, b))
