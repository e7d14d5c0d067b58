"""Symplectic realizations of e(3)* and integrable gyrostat dynamics on them.

Submodules
----------
algebra     Pauli matrices, Hermitian 2x2 helpers, u(2,2) and its Lie-Poisson bracket
e3          the Lie-Poisson space e(3)*, Hamiltonians and case integrals
twistor     twistor space, momentum maps and lifted flows
reduced     the monopole space and T*S^3 (Moser chart and embedded chart)
groups      U(2) x| H(2) actions, coadjoint actions and the SU(2) covering
dynamics    integrators and drift reports
scenarios   named integrable cases lifted to every realization
verify      property checks and the regression report
printed     literal transcriptions of printed expansions (comparators only)
"""

__version__ = "0.1.0"

from .errors import (
    DomainError,
    E3RealError,
    IntegrationError,
    StiffnessError,
    UsageError,
    ValidationError,
)

__all__ = [
    "DomainError",
    "E3RealError",
    "IntegrationError",
    "StiffnessError",
    "UsageError",
    "ValidationError",
    "__version__",
]
