"""Qubit coupled to a quartic nonlinear oscillator: states, dynamics, measures."""
__version__ = "0.1.0"

from .errors import QnloError, TruncationBreached, ConfigError  # noqa: E402
from .fock import FockTruncation, initial_state  # noqa: E402
from .hamiltonians import ScaledParams, build_hamiltonian  # noqa: E402
from .evolve import TimeGrid, evolve_unitary, evolve_lindblad  # noqa: E402
from .observables import negativity, wigner, plateau_detect  # noqa: E402
