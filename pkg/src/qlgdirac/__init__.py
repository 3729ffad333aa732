"""Quantum lattice gas algorithm for the 1+1 dimensional Dirac equation.

Submodules:

* :mod:`qlgdirac.numerics` — Pauli algebra and the periodic spinor field.
* :mod:`qlgdirac.evolution` — collide/stream stepper, observables, dispersion.
* :mod:`qlgdirac.path_kernel` — checkerboard path sums and transfer matrices.
* :mod:`qlgdirac.analytic` — square-well and harmonic reference states.
* :mod:`qlgdirac.gates` — qubit algebra, ladder operators, conservative gates.
* :mod:`qlgdirac.engine` — many-body state-vector circuit and snapshots.
* :mod:`qlgdirac.cli` — the ``qlg`` command-line runner.
"""

from __future__ import annotations

from .errors import (
    BadAxis,
    BudgetExceeded,
    ConfigError,
    ConstraintViolated,
    DomainError,
    InvalidParity,
    NoRoot,
    NotInvolution,
    QLGError,
)
from .estimator import QuantumLatticeGas
from .evolution import CollideParams, build_collide, observables, step, step_rotating, stream
from .numerics import SpinorField, l2_norm

__all__ = [
    "BadAxis",
    "BudgetExceeded",
    "CollideParams",
    "ConfigError",
    "ConstraintViolated",
    "DomainError",
    "InvalidParity",
    "NoRoot",
    "NotInvolution",
    "QLGError",
    "QuantumLatticeGas",
    "SpinorField",
    "build_collide",
    "l2_norm",
    "observables",
    "step",
    "step_rotating",
    "stream",
]

__version__ = "0.1.0"
