"""Optimal quantum cloning machines with brute-force verification."""

from .qmath import DensityMatrix, QuantumChannel, StateVector
from .uqcm import INFINITY, fidelity_formula, shrinking_eta, werner_clone

__version__ = "0.1.0"

__all__ = [
    "DensityMatrix", "QuantumChannel", "StateVector", "INFINITY", "fidelity_formula",
    "shrinking_eta", "werner_clone", "__version__",
]
