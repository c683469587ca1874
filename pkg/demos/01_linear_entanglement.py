"""
Entanglement in the harmonic limit
==================================

With no quartic term the qubit pushes the oscillator one way or the other
depending on its state. The two displaced coherent branches separate and then
come back together once per oscillator period, so the negativity rises and
falls back to zero every 2*pi.
"""
import numpy as np

from qnlo import FockTruncation, ScaledParams, TimeGrid, evolve_unitary, initial_state
from qnlo.analytic import linear_negativity_closed_form
from qnlo.hamiltonians import build_full_hamiltonian
from qnlo.observables import pure_negativity

trunc = FockTruncation(40)
p = ScaledParams(k=0.25, delta=0.0, alpha=2.0)
grid = TimeGrid.cycles(4 * np.pi, per_cycle=16)

# numerical evolution of the full model (delta = 0 makes it linear)
res = evolve_unitary(build_full_hamiltonian(p, trunc), initial_state(p.alpha, trunc), grid,
                     trunc=trunc, observables={"n": lambda s: pure_negativity(s, normalized=True)})

# closed form returns the raw negativity; the normalized one is twice that
exact = 2 * linear_negativity_closed_form(p, grid.times)

print(" t/pi   numeric   closed form")
for t, a, b in zip(grid.times[::2], res.observables["n"][::2], exact[::2]):
    print(f"{t / np.pi:5.2f}  {a:8.5f}  {b:8.5f}")
print("max deviation:", np.abs(res.observables["n"] - exact).max())
