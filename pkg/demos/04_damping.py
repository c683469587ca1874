"""
Oscillator damping wears the plateau down
=========================================

A zero-temperature loss channel on the oscillator shrinks both branches towards
the vacuum. They overlap again and the entanglement decays. The master equation
is integrated with an adaptive embedded Runge-Kutta pair on a modest cutoff.
"""
import numpy as np

from qnlo import FockTruncation, ScaledParams, TimeGrid, evolve_lindblad, initial_state
from qnlo import negativity
from qnlo.evolve import StepControl
from qnlo.fock import ket_to_density
from qnlo.hamiltonians import build_full_hamiltonian, build_lindblad_generator

trunc = FockTruncation(60, tail_tol=1e-4)
grid = TimeGrid.cycles(4 * np.pi, per_cycle=8)
neg = {"n": lambda rho: negativity(rho, normalized=True)}
rho0 = ket_to_density(initial_state(2.0, trunc))

curves = {}
for gamma in (0.0, 0.05):
    p = ScaledParams(k=0.5, delta=0.01, alpha=2.0, gamma=gamma)
    gen = build_lindblad_generator(p, build_full_hamiltonian(p, trunc))
    res = evolve_lindblad(gen, rho0, grid, StepControl(), trunc=trunc, observables=neg,
                          store_states=False)
    curves[gamma] = res.observables["n"]

print(" t/pi " + "".join(f"  gamma={g:<5}" for g in curves))
for i, t in enumerate(grid.times):
    print(f"{t / np.pi:5.2f} " + "".join(f"  {curves[g][i]:11.4f}" for g in curves))
