import math

from ddnoise.circuit.ir import CPhase, Circuit, H, SWAP


def gen_qft(n, with_final_swaps=True):
    """Textbook QFT on ``n`` qubits.

    For each qubit ``i``: ``H(i)``, then a controlled phase of
    ``pi / 2**(k - i)`` controlled by every later qubit ``k``.  The optional
    ``n // 2`` swaps reverse the qubit order at the end.
    """
    if n < 1:
        raise ValueError(f"QFT needs at least one qubit, got {n}")
    c = Circuit(n)
    for i in range(n):
        c.append(H(i))
        for k in range(i + 1, n):
            c.append(CPhase(math.pi / 2 ** (k - i), k, i))
    if with_final_swaps:
        for i in range(n // 2):
            c.append(SWAP(i, n - 1 - i))
    return c


def qft_gate_count(n, with_final_swaps=True):
    return n + n * (n - 1) // 2 + (n // 2 if with_final_swaps else 0)
