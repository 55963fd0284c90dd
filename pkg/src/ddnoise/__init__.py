"""Noisy quantum circuit simulation on decision-diagram density matrices."""
from ddnoise.circuit import Circuit, Gate, gen_qft, parse_qasm, simulate
from ddnoise.dd import Package
from ddnoise.density import DensityState
from ddnoise.noise import NoiseParams, kraus_t1, kraus_t2

__version__ = '0.1.0'

__all__ = ['Circuit', 'Gate', 'gen_qft', 'parse_qasm', 'simulate', 'Package',
           'DensityState', 'NoiseParams', 'kraus_t1', 'kraus_t2']
