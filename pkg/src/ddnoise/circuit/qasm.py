"""Reader and writer for a small OpenQASM 2.0 subset.

Grammar (one statement per ``;``, ``//`` comments)::

    OPENQASM 2.0;                      optional, must come first
    include "qelib1.inc";              accepted, ignored
    qreg NAME[N];                      exactly one, before any gate
    creg NAME[N];                      ignored with a warning
    measure ...; barrier ...;          ignored with a warning
    GATE[(EXPR)] ARG[, ARG];           ARG is NAME[i], or NAME to broadcast
                                       a one-qubit gate over the register

Gate names and their IR kinds::

    x y z h s sdg t tdg                X Y Z H S Sdg T Tdg
    rx ry rz (angle)                   RX RY RZ
    p u1 phase (angle)                 Phase
    cx CX, cz                          CX, CZ        (control first)
    cp cu1 cphase (angle)              CPhase        (control first)
    swap                               SWAP

Angle expressions may use numbers, ``pi``, ``+ - * / ^`` (``**``),
parentheses and ``sin cos tan exp ln sqrt``.
"""
import ast
import math
import operator
import re
import warnings

from ddnoise.circuit.ir import Circuit, Gate
from ddnoise.errors import QasmParseError, StructuralError

# qasm name -> (kind, number of angle parameters, number of qubit operands)
GATE_ALIASES = {
    'x': ('X', 0, 1), 'y': ('Y', 0, 1), 'z': ('Z', 0, 1), 'h': ('H', 0, 1),
    's': ('S', 0, 1), 'sdg': ('Sdg', 0, 1), 't': ('T', 0, 1), 'tdg': ('Tdg', 0, 1),
    'rx': ('RX', 1, 1), 'ry': ('RY', 1, 1), 'rz': ('RZ', 1, 1),
    'p': ('Phase', 1, 1), 'u1': ('Phase', 1, 1), 'phase': ('Phase', 1, 1),
    'cx': ('CX', 0, 2), 'CX': ('CX', 0, 2), 'cz': ('CZ', 0, 2),
    'cp': ('CPhase', 1, 2), 'cu1': ('CPhase', 1, 2), 'cphase': ('CPhase', 1, 2),
    'swap': ('SWAP', 0, 2),
}

EMIT_NAMES = {
    'X': 'x', 'Y': 'y', 'Z': 'z', 'H': 'h', 'S': 's', 'Sdg': 'sdg', 'T': 't',
    'Tdg': 'tdg', 'RX': 'rx', 'RY': 'ry', 'RZ': 'rz', 'Phase': 'u1',
    'CX': 'cx', 'CZ': 'cz', 'CPhase': 'cu1', 'SWAP': 'swap',
}

IGNORED = ('creg', 'measure', 'barrier')

_IDENT = r'[A-Za-z_][A-Za-z0-9_]*'
_QREG = re.compile(rf'qreg\s+({_IDENT})\s*\[\s*(\d+)\s*\]$')
_GATE = re.compile(rf'({_IDENT})\s*(?:\((.*)\))?\s*(.*)$', re.S)
_OPERAND = re.compile(rf'({_IDENT})\s*(?:\[\s*(\d+)\s*\])?$')
_HEADER = re.compile(r'OPENQASM\s+(\S+)$')
_INCLUDE = re.compile(r'include\s+"([^"]*)"$')

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_FUNCS = {'sin': math.sin, 'cos': math.cos, 'tan': math.tan, 'exp': math.exp,
          'ln': math.log, 'sqrt': math.sqrt}


def eval_angle(text, lineno=0):
    """Evaluate a QASM parameter expression without ``eval``."""
    try:
        tree = ast.parse(text.replace('^', '**').strip(), mode='eval')
    except SyntaxError:
        raise QasmParseError(lineno, f"malformed expression {text!r}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == 'pi':
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in _FUNCS and len(node.args) == 1 and not node.keywords):
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise QasmParseError(lineno, f"unsupported expression {text!r}")

    try:
        value = ev(tree)
    except (ZeroDivisionError, ValueError, OverflowError) as exc:
        raise QasmParseError(lineno, f"cannot evaluate {text!r}: {exc}") from None
    if not math.isfinite(value):
        raise QasmParseError(lineno, f"non-finite angle {text!r}")
    return value


def _statements(text):
    """Yield ``(lineno, statement)`` with comments removed."""
    buf = []
    start = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split('//', 1)[0]
        for piece in re.split(r'(;)', line):
            if piece == ';':
                stmt = ' '.join(''.join(buf).split())
                if not stmt:
                    raise QasmParseError(lineno, "empty statement")
                yield start, stmt
                buf = []
                start = None
            elif piece.strip():
                if start is None:
                    start = lineno
                buf.append(piece + ' ')
    if start is not None:
        raise QasmParseError(start, "statement not terminated by ';'")


def _split_args(text):
    depth = 0
    out = []
    cur = []
    for ch in text:
        if ch == ',' and depth == 0:
            out.append(''.join(cur).strip())
            cur = []
            continue
        depth += ch == '('
        depth -= ch == ')'
        cur.append(ch)
    out.append(''.join(cur).strip())
    return out


def parse_qasm(text):
    """Parse QASM source into a :class:`Circuit`."""
    reg = None
    n = 0
    gates = []
    first = True
    for lineno, stmt in _statements(text):
        is_first = first
        first = False
        m = _HEADER.match(stmt)
        if m:
            if not is_first:
                raise QasmParseError(lineno, "OPENQASM header must be the first statement")
            if m.group(1) != '2.0':
                raise QasmParseError(lineno, f"unsupported OPENQASM version {m.group(1)}")
            continue
        m = _INCLUDE.match(stmt)
        if m:
            if m.group(1) != 'qelib1.inc':
                raise QasmParseError(lineno, f"cannot include {m.group(1)!r}")
            continue
        word = stmt.split(None, 1)[0].split('(', 1)[0]
        if word == 'qreg':
            m = _QREG.match(stmt)
            if not m:
                raise QasmParseError(lineno, f"malformed qreg declaration {stmt!r}")
            if reg is not None:
                raise QasmParseError(lineno, "multiple qregs are not supported")
            reg = m.group(1)
            n = int(m.group(2))
            if n < 1:
                raise QasmParseError(lineno, "qreg must hold at least one qubit")
            continue
        if word in IGNORED:
            warnings.warn(f"line {lineno}: ignoring {word!r} statement", stacklevel=2)
            continue
        if word in ('gate', 'opaque', 'if', 'reset', 'U'):
            raise QasmParseError(lineno, f"unsupported statement {word!r}")
        gates.extend(_parse_gate(lineno, stmt, reg, n))
    if reg is None:
        raise QasmParseError(1, "no qreg declared")
    try:
        return Circuit(n, gates)
    except StructuralError as exc:
        raise QasmParseError(0, str(exc)) from None


def _parse_gate(lineno, stmt, reg, n):
    m = _GATE.match(stmt)
    if not m:
        raise QasmParseError(lineno, f"malformed statement {stmt!r}")
    name, params, rest = m.group(1), m.group(2), m.group(3).strip()
    if name not in GATE_ALIASES:
        raise QasmParseError(lineno, f"unknown gate {name!r}")
    kind, nparams, nqubits = GATE_ALIASES[name]
    if reg is None:
        raise QasmParseError(lineno, f"gate {name!r} before qreg declaration")
    plist = [] if params is None else _split_args(params)
    if params is not None and plist == ['']:
        plist = []
    if len(plist) != nparams:
        raise QasmParseError(
            lineno, f"gate {name!r} takes {nparams} parameter(s), got {len(plist)}")
    angle = eval_angle(plist[0], lineno) if nparams else None
    if not rest:
        raise QasmParseError(lineno, f"gate {name!r} has no operands")
    operands = []
    for arg in _split_args(rest):
        om = _OPERAND.match(arg)
        if not om:
            raise QasmParseError(lineno, f"malformed operand {arg!r}")
        if om.group(1) != reg:
            raise QasmParseError(lineno, f"unknown register {om.group(1)!r}")
        if om.group(2) is None:
            operands.append(None)
            continue
        idx = int(om.group(2))
        if idx >= n:
            raise QasmParseError(lineno, f"qubit {reg}[{idx}] out of range (size {n})")
        operands.append(idx)
    if len(operands) != nqubits:
        raise QasmParseError(
            lineno, f"gate {name!r} takes {nqubits} operand(s), got {len(operands)}")
    if None in operands:
        if nqubits != 1:
            raise QasmParseError(lineno, f"register broadcast unsupported for {name!r}")
        qubit_lists = [(q,) for q in range(n)]
    else:
        qubit_lists = [tuple(operands)]
    out = []
    for qs in qubit_lists:
        if len(set(qs)) != len(qs):
            raise QasmParseError(lineno, f"gate {name!r} repeats an operand")
        if nqubits == 1:
            out.append(Gate(kind, qs, (), angle))
        elif kind == 'SWAP':
            out.append(Gate(kind, qs, (), angle))
        else:
            out.append(Gate(kind, (qs[1],), (qs[0],), angle))
    return out


def emit_qasm(circuit, reg='q'):
    """Serialize a circuit; :func:`parse_qasm` reads it back unchanged."""
    lines = ['OPENQASM 2.0;', 'include "qelib1.inc";', f'qreg {reg}[{circuit.n}];']
    for g in circuit:
        name = EMIT_NAMES[g.kind]
        if g.angle is not None:
            name += f'({g.angle!r})'
        qubits = g.controls + g.targets
        lines.append(f"{name} {','.join(f'{reg}[{q}]' for q in qubits)};")
    return '\n'.join(lines) + '\n'


def load_qasm(path):
    with open(path, encoding='utf-8') as fh:
        return parse_qasm(fh.read())
