"""
Phase-space picture of the two branches
=======================================

Projecting the qubit onto up or down leaves two oscillator states. Their Wigner
functions show the branches separating, and the overlap integral
pi * int W_up W_down falls as they become distinguishable. The value on the
grid is compared with the trace formula Tr(rho_up rho_down) / pi.
"""
import numpy as np

from qnlo import FockTruncation, ScaledParams, initial_state
from qnlo.evolve import UnitaryPropagator
from qnlo.hamiltonians import build_full_hamiltonian
from qnlo.observables import (conditioned_osc, conditioned_wigners, wigner_overlap,
                              wigner_overlap_exact)

trunc = FockTruncation(140)
p = ScaledParams(k=0.5, delta=0.01, alpha=2.0)
prop = UnitaryPropagator(build_full_hamiltonian(p, trunc))
psi0 = initial_state(p.alpha, trunc)

print(" t/pi    w_p grid    w_p exact   W_up peak")
for tp in (0.0, 0.5, 1.0, 2.0, 4.0):
    s = prop(psi0, tp * np.pi)
    w_up, w_down = conditioned_wigners(s)
    exact = wigner_overlap_exact(conditioned_osc(s, "up"), conditioned_osc(s, "down"))
    print(f"{tp:5.1f}  {wigner_overlap(w_up, w_down):10.6f}  {exact:10.6f}  "
          f"{w_up.values.max():9.4f}")
