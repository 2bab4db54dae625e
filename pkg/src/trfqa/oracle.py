"""Independent ground truth: exhaustive MaxCut and dense linear algebra."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonians import Graph
from .pauli import Observable, to_dense
from .statevector import Statevector

MAXCUT_VERTEX_CAP = 26
GROUND_ENERGY_QUBIT_CAP = 12
PROPAGATOR_QUBIT_CAP = 6
_BLOCK = 1 << 20


class OracleSizeError(MemoryError):
    pass


@dataclass(frozen=True)
class MaxCutSolution:
    max_value: float
    argmax_bitstrings: frozenset[int]
    num_vertices: int

    def __post_init__(self):
        if not self.argmax_bitstrings:
            raise ValueError("a MaxCut solution set cannot be empty")
        full = (1 << self.num_vertices) - 1
        for b in self.argmax_bitstrings:
            if (b ^ full) not in self.argmax_bitstrings:
                raise ValueError(f"solution set not closed under complement: {b:b}")


def brute_force_maxcut(g: Graph, atol: float = 1e-9) -> MaxCutSolution:
    """Enumerate all ``2^V`` partitions in blocks; ties within ``atol`` are kept."""
    V = g.num_vertices
    if V > MAXCUT_VERTEX_CAP:
        raise OracleSizeError(f"{V} vertices exceeds brute-force cap {MAXCUT_VERTEX_CAP}")
    total = 1 << V
    best = -np.inf
    winners: list[np.ndarray] = []
    for start in range(0, total, _BLOCK):
        idx = np.arange(start, min(total, start + _BLOCK), dtype=np.int64)
        cut = np.zeros(idx.size)
        for u, v, w in g.edges:
            cut += w * (((idx >> u) ^ (idx >> v)) & 1)
        block_best = cut.max()
        if block_best > best + atol:
            best = block_best
            winners = []
        if block_best >= best - atol:
            winners.append(idx[cut >= best - atol])
    if not g.edges:
        best = 0.0
    sols = frozenset(int(b) for arr in winners for b in arr)
    return MaxCutSolution(float(best), sols, V)


def ground_energy(obs: Observable) -> float:
    if obs.num_qubits > GROUND_ENERGY_QUBIT_CAP:
        raise OracleSizeError(
            f"{obs.num_qubits} qubits exceeds dense cap {GROUND_ENERGY_QUBIT_CAP}"
        )
    return float(np.linalg.eigvalsh(to_dense(obs, cap=GROUND_ENERGY_QUBIT_CAP))[0])


def exact_propagator(obs: Observable, duration: float, s: Statevector) -> Statevector:
    """``exp(-i duration H)|s>`` via eigendecomposition of the dense matrix."""
    if obs.num_qubits > PROPAGATOR_QUBIT_CAP:
        raise OracleSizeError(
            f"{obs.num_qubits} qubits exceeds propagator cap {PROPAGATOR_QUBIT_CAP}"
        )
    if s.num_qubits != obs.num_qubits:
        raise ValueError("state and observable sizes differ")
    evals, evecs = np.linalg.eigh(to_dense(obs))
    coeffs = evecs.conj().T @ s.amplitudes
    return Statevector(evecs @ (np.exp(-1j * duration * evals) * coeffs))
