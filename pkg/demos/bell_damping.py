"""Amplitude damping on a Bell pair, three ways.

Run with ``python demos/bell_damping.py``.
"""
# %% Build the Bell state and its density matrix
import numpy as np

from ddnoise import density, noise
from ddnoise.dd import Package, node_count
from ddnoise.oracle import dense_channel, dense_to_dd

pkg = Package()
bell = dense_to_dd(pkg, np.array([1, 0, 0, 1]) / np.sqrt(2))
rho = density.pure_to_density(pkg, bell)

print("Bell density matrix:")
print(rho.to_dense().real)
print("nodes in the diagram:", node_count(rho.root))

# %% Damp qubit 1 with p = 0.3
# naive: sum of E rho E^dagger over both Kraus operators
# local: the node-level map applied in one pass over the diagram
# dense: plain numpy, as a cross-check
p = 0.3
naive = noise.apply_channel_naive(rho, noise.kraus_t1(p), 1)
local = noise.apply_t1_local(rho, p, 1)
dense = dense_channel(rho.to_dense(), noise.kraus_t1(p).matrices, 1)

np.set_printoptions(precision=4, suppress=True)
print("\nafter T1 damping on q1:")
print(local.to_dense().real)
print("naive vs local:", np.abs(naive.to_dense() - local.to_dense()).max())
print("local vs dense:", np.abs(local.to_dense() - dense).max())

# %% Measurement statistics
# |10> picks up the decayed population from |11>
probs = density.diagonal(local)
for i, pr in enumerate(probs):
    print(f"|{i:02b}>  {pr:.4f}")
print("fidelity to the ideal Bell state:", round(density.fidelity(local, bell), 4))
print("1000 shots:", density.sample(local, 1000, seed=1))
