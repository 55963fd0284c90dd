from ddnoise.circuit.ir import CPhase, CX, Circuit, Gate, GATE_KINDS, H, SWAP, X
from ddnoise.circuit.qasm import emit_qasm, load_qasm, parse_qasm
from ddnoise.circuit.qft import gen_qft, qft_gate_count
from ddnoise.circuit.simulate import MODES, SimulationReport, ideal_vector, simulate

__all__ = [
    'CPhase', 'CX', 'Circuit', 'Gate', 'GATE_KINDS', 'H', 'SWAP', 'X',
    'emit_qasm', 'load_qasm', 'parse_qasm', 'gen_qft', 'qft_gate_count',
    'MODES', 'SimulationReport', 'ideal_vector', 'simulate',
]
