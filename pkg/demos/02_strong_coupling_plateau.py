"""
A quartic term keeps the qubit entangled
========================================

Adding the quartic term makes the oscillator's levels unevenly spaced. The two
branches then drift apart in phase and no longer meet again, and the negativity
settles on a plateau close to one instead of dropping back to zero.
"""
import numpy as np

from qnlo import FockTruncation, ScaledParams, TimeGrid, evolve_unitary, initial_state
from qnlo import plateau_detect
from qnlo.hamiltonians import build_full_hamiltonian
from qnlo.observables import pure_negativity

# the quartic tail needs a generous cutoff to stay below the guard tolerance
trunc = FockTruncation(140)
grid = TimeGrid.cycles(16 * np.pi)
neg = {"n": lambda s: pure_negativity(s, normalized=True)}

for delta in (0.0, 0.01):
    p = ScaledParams(k=0.5, delta=delta, alpha=2.0)
    res = evolve_unitary(build_full_hamiltonian(p, trunc), initial_state(p.alpha, trunc), grid,
                         trunc=trunc, observables=neg, store_states=False)
    v = res.observables["n"]
    late = grid.times > 4 * np.pi
    print(f"delta={delta:<5}  min after 4pi: {v[late].min():.3f}   max tail: "
          f"{res.diagnostics['tail'].max():.1e}")
    rep = plateau_detect(grid.times, v)
    if rep.found:
        print(f"    plateau from {rep.t_lo / np.pi:.1f}pi to {rep.t_hi / np.pi:.1f}pi, "
              f"mean {rep.mean:.3f}")
    else:
        print("    no plateau")
