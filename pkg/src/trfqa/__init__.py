"""Feedback-based quantum algorithms (FQA/FALQON) with time rescaling."""
from .engine import LayerRecord, RunConfig, Trajectory, feedback_beta, run, sweep
from .hamiltonians import (
    AnnniParams,
    Graph,
    annni_hamiltonian,
    driver_hamiltonian,
    load_graph,
    maxcut_hamiltonian,
    random_regular_graph,
)
from .pauli import Observable, PauliString, commutator_i, pauli_product, to_dense
from .rescaling import RescaleSpec, VanishingDerivative, evaluate, rescaled_horizon
from .statevector import Statevector, expectation, success_probability, uniform_superposition

__all__ = [
    "AnnniParams", "Graph", "LayerRecord", "Observable", "PauliString", "RescaleSpec",
    "RunConfig", "Statevector", "Trajectory", "VanishingDerivative", "annni_hamiltonian",
    "commutator_i", "driver_hamiltonian", "evaluate", "expectation", "feedback_beta",
    "load_graph", "maxcut_hamiltonian", "pauli_product", "random_regular_graph",
    "rescaled_horizon", "run", "success_probability", "sweep", "to_dense",
    "uniform_superposition",
]
