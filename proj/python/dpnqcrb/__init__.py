"""Quantum Cramer-Rao bounds of lossy definite-photon-number probes."""

from ._core import (
    compositions,
    fock_bs_state,
    mode_energies,
    optimize,
    qcrb,
    quantum_advantage,
    sql,
    sweep_csv,
    verify,
)

__all__ = [
    "compositions",
    "fock_bs_state",
    "mode_energies",
    "optimize",
    "qcrb",
    "quantum_advantage",
    "sql",
    "sweep_csv",
    "verify",
]
