"""Noisy quantum Fourier transform: naive versus advanced noise application.

Every gate is followed by T1 and T2 noise on the qubits it touched.  The
naive mode applies each Kraus operator as a matrix product and sums the
results; the advanced mode rewrites the affected nodes directly.

Run with ``python demos/qft_noise.py``.
"""
# %%
import time

from ddnoise import NoiseParams, gen_qft, simulate

params = NoiseParams(t1_p=0.002, t2_p=0.001)

# %% Both modes give the same state
circuit = gen_qft(5)
naive = simulate(circuit, params, 'naive')
adv = simulate(circuit, params, 'advanced')
print("max probability gap:", abs(naive.probabilities - adv.probabilities).max())
print("fidelity to the noiseless QFT:", adv.fidelity)

# %% Reading t2_p
# the T2 operators are sqrt(p) I and sqrt(1-p) Z, so p is the chance that
# the phase survives: t2_p = 0.001 flips on almost every use.  A 0.1 % flip
# rate is t2_p = 0.999.
mild = simulate(circuit, NoiseParams(t1_p=0.002, t2_p=0.999), 'advanced')
print("fidelity with a 0.1 % flip rate:", round(mild.fidelity, 6))

# %% How the cost grows
# the advanced column stays small while the naive one explodes
print(f"\n{'n':>3} {'naive s':>9} {'adv s':>9} {'ratio':>7} {'peak nodes':>11}")
for n in (4, 6, 8, 10):
    c = gen_qft(n, with_final_swaps=False)
    t = time.perf_counter()
    simulate(c, params, 'naive', with_fidelity=False)
    t_naive = time.perf_counter() - t
    t = time.perf_counter()
    r = simulate(c, params, 'advanced', with_fidelity=False)
    t_adv = time.perf_counter() - t
    print(f"{n:>3} {t_naive:9.3f} {t_adv:9.3f} {t_naive / t_adv:7.1f} {r.stats['peak_nodes']:>11}")

# %% The advanced mode keeps going
for n in (14, 18):
    r = simulate(gen_qft(n, with_final_swaps=False), params, 'advanced', with_fidelity=False)
    print(f"n={n}: {r.timings['simulation_s']:.2f} s, peak {r.stats['peak_nodes']} nodes,"
          f" most likely {r.top_k(1)[0]}")
