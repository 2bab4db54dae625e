"""Dense statevector with in-place gate kernels.

Kernels work on reshaped views of the amplitude array so that the bits they
act on become explicit axes; nothing in the hot path materialises a matrix.
"""
from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from .pauli import Observable

MAX_QUBITS = 26
_CHUNK = 1 << 20
# Above this many cached weight entries the expectation plan recomputes
# per call instead of holding vectors in memory.
_WEIGHT_CACHE_ENTRIES = 1 << 24


class UnsupportedTerm(ValueError):
    """A Pauli string the propagator kernels cannot exponentiate."""


class Statevector:
    """Amplitudes over ``num_qubits`` qubits, little-endian basis indexing."""

    __slots__ = ("amplitudes", "num_qubits")

    def __init__(self, amplitudes, num_qubits: int | None = None):
        amps = np.array(amplitudes, dtype=np.complex128, copy=True)
        if amps.ndim != 1:
            raise ValueError("amplitudes must be one-dimensional")
        L = int(round(math.log2(amps.size))) if amps.size else 0
        if amps.size != 1 << L:
            raise ValueError(f"length {amps.size} is not a power of two")
        if num_qubits is not None and num_qubits != L:
            raise ValueError(f"{amps.size} amplitudes do not describe {num_qubits} qubits")
        _check_size(L)
        self.amplitudes = amps
        self.num_qubits = L

    def copy(self) -> "Statevector":
        return Statevector(self.amplitudes.copy())

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def fidelity(self, other: "Statevector") -> float:
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2)

    def _qubit(self, j: int) -> int:
        if not 0 <= j < self.num_qubits:
            raise IndexError(f"qubit {j} out of range for {self.num_qubits} qubits")
        return j

    def _pair_view(self, i: int, j: int) -> np.ndarray:
        """View with axes ``(.., bit_hi, .., bit_lo, ..)`` for two distinct qubits."""
        i, j = self._qubit(i), self._qubit(j)
        if i == j:
            raise ValueError("two-qubit kernel needs distinct qubits")
        lo, hi = min(i, j), max(i, j)
        L = self.num_qubits
        return self.amplitudes.reshape(1 << (L - hi - 1), 2, 1 << (hi - lo - 1), 2, 1 << lo)

    def apply_rx(self, j: int, theta: float) -> None:
        """Apply ``exp(-i theta X_j) = cos(theta) I - i sin(theta) X_j``."""
        j = self._qubit(j)
        v = self.amplitudes.reshape(-1, 2, 1 << j)
        c, s = math.cos(theta), math.sin(theta)
        a0 = v[:, 0, :].copy()
        a1 = v[:, 1, :]
        v[:, 0, :] = c * a0 - 1j * s * a1
        v[:, 1, :] = c * a1 - 1j * s * a0

    def apply_zz_phase(self, i: int, j: int, theta: float) -> None:
        """Apply ``exp(-i theta Z_i Z_j)``."""
        v = self._pair_view(i, j)
        same, diff = np.exp(-1j * theta), np.exp(1j * theta)
        v[:, 0, :, 0, :] *= same
        v[:, 1, :, 1, :] *= same
        v[:, 0, :, 1, :] *= diff
        v[:, 1, :, 0, :] *= diff

    def apply_yy(self, i: int, j: int, theta: float) -> None:
        """Apply ``exp(-i theta Y_i Y_j)``.

        ``YY`` maps ``|00> -> -|11>`` and ``|01> -> |10>``, so the exponential
        mixes the even-parity pair with ``+i sin`` and the odd pair with ``-i sin``.
        """
        v = self._pair_view(i, j)
        c, s = math.cos(theta), math.sin(theta)
        a00 = v[:, 0, :, 0, :].copy()
        a11 = v[:, 1, :, 1, :].copy()
        v[:, 0, :, 0, :] = c * a00 + 1j * s * a11
        v[:, 1, :, 1, :] = c * a11 + 1j * s * a00
        a01 = v[:, 0, :, 1, :].copy()
        a10 = v[:, 1, :, 0, :].copy()
        v[:, 0, :, 1, :] = c * a01 - 1j * s * a10
        v[:, 1, :, 0, :] = c * a10 - 1j * s * a01

    def apply_diagonal(self, energies: np.ndarray, duration: float) -> None:
        """Multiply each amplitude by ``exp(-i duration E(z))``."""
        amps = self.amplitudes
        for start in range(0, amps.size, _CHUNK):
            sl = slice(start, start + _CHUNK)
            amps[sl] *= np.exp(-1j * duration * energies[sl])

    def __repr__(self):
        return f"Statevector(num_qubits={self.num_qubits})"


def _check_size(L: int) -> None:
    if not 1 <= L <= MAX_QUBITS:
        raise ValueError(f"register size {L} outside [1, {MAX_QUBITS}]")


def uniform_superposition(num_qubits: int) -> Statevector:
    _check_size(num_qubits)
    dim = 1 << num_qubits
    return Statevector(np.full(dim, 1 / math.sqrt(dim), dtype=np.complex128))


def basis_state(num_qubits: int, index: int) -> Statevector:
    _check_size(num_qubits)
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return Statevector(amps)


def _parity_sign(idx: np.ndarray, z_mask: int) -> np.ndarray:
    """``(-1)^popcount(idx & z_mask)`` as float64."""
    par = np.bitwise_count(idx & np.uint64(z_mask)) & 1
    return 1.0 - 2.0 * par


def _index_range(start: int, stop: int) -> np.ndarray:
    return np.arange(start, stop, dtype=np.uint64)


def diagonal_energies(diag_terms, constant: float, num_qubits: int) -> np.ndarray:
    """Energies of a sum of Z-type strings on every basis state."""
    dim = 1 << num_qubits
    energies = np.full(dim, constant, dtype=np.float64)
    for start in range(0, dim, _CHUNK):
        idx = _index_range(start, min(dim, start + _CHUNK))
        block = energies[start:start + idx.size]
        for z_mask, coeff in diag_terms:
            block += coeff * _parity_sign(idx, z_mask)
    return energies


class ProblemPropagatorPlan:
    """First-order product formula for ``exp(-i duration H)``.

    Factors are applied in a fixed order: the diagonal (Z-type) part as one
    exact phase, then each ``Y_iY_j`` term, then each ``X_j`` term, each group
    sorted by qubit index. Any other term shape is rejected at construction.
    """

    def __init__(self, obs: Observable):
        self.num_qubits = obs.num_qubits
        diag, yy, xs = [], [], []
        for p, c in obs.terms.items():
            letters = {letter for _, letter in p.factors}
            if letters == {"Z"}:
                diag.append((p.masks()[1], c))
            elif letters == {"Y"} and len(p.factors) == 2:
                yy.append((p.support, c))
            elif letters == {"X"} and len(p.factors) == 1:
                xs.append((p.support[0], c))
            else:
                raise UnsupportedTerm(f"no kernel for term {p}")
        self.diagonal_terms = diag
        self.yy_terms = sorted(yy)
        self.x_terms = sorted(xs)
        self.constant = obs.constant
        self.has_diagonal = bool(diag) or obs.constant != 0.0
        self.energies = (
            diagonal_energies(diag, obs.constant, obs.num_qubits) if self.has_diagonal else None
        )

    @property
    def is_diagonal(self) -> bool:
        return not self.yy_terms and not self.x_terms

    def apply(self, s: Statevector, duration: float) -> None:
        if s.num_qubits != self.num_qubits:
            raise ValueError(f"plan is for {self.num_qubits} qubits, state has {s.num_qubits}")
        if not math.isfinite(duration):
            raise ValueError("propagator duration must be finite")
        if duration == 0.0:
            return
        if self.energies is not None:
            s.apply_diagonal(self.energies, duration)
        for (i, j), c in self.yy_terms:
            s.apply_yy(i, j, c * duration)
        for j, c in self.x_terms:
            s.apply_rx(j, c * duration)


def apply_problem_propagator(s: Statevector, plan: ProblemPropagatorPlan, duration: float) -> None:
    plan.apply(s, duration)


class ExpectationPlan:
    """Evaluates ``<psi|O|psi>`` string-by-string without a dense matrix.

    A string with X-mask ``x``, Z-mask ``z`` (Y sets both) and ``n_y`` Y
    factors maps ``|b>`` to ``i^n_y (-1)^popcount(b & z) |b ^ x>``. Terms are
    grouped by ``x`` so each group costs one gather and one inner product.
    """

    def __init__(self, obs: Observable):
        self.num_qubits = obs.num_qubits
        self.constant = obs.constant
        self.scale = max(1.0, obs.norm_bound())
        groups: dict[int, list[tuple[int, complex]]] = {}
        for p, c in obs.terms.items():
            x, z, ny = p.masks()
            groups.setdefault(x, []).append((z, c * 1j**ny))
        self.groups = dict(sorted(groups.items()))
        dim = 1 << obs.num_qubits
        # x -> (gather index for b ^ x, weight vector)
        self._cache: dict[int, tuple[np.ndarray | None, np.ndarray]] | None = None
        if len(self.groups) * dim <= _WEIGHT_CACHE_ENTRIES:
            idx = _index_range(0, dim)
            self._cache = {
                x: (None if x == 0 else (idx ^ np.uint64(x)).astype(np.intp), self._weights(x, idx))
                for x in self.groups
            }

    def _weights(self, x: int, idx: np.ndarray) -> np.ndarray:
        terms = self.groups[x]
        is_real = all(c.imag == 0 for _, c in terms)
        w = np.zeros(idx.size, dtype=np.float64 if is_real else np.complex128)
        for z, c in terms:
            w += (c.real if is_real else c) * _parity_sign(idx, z)
        return w

    def _evaluate_chunked(self, psi: np.ndarray) -> complex:
        total = 0j
        for start in range(0, psi.size, _CHUNK):
            idx = _index_range(start, min(psi.size, start + _CHUNK))
            block = psi[start:start + idx.size]
            for x in self.groups:
                w = self._weights(x, idx)
                if x == 0:
                    total += np.dot(w, np.abs(block) ** 2)
                else:
                    total += np.vdot(psi[idx ^ np.uint64(x)], w * block)
        return total

    def evaluate(self, s: Statevector, tol: float = 1e-9) -> float:
        if s.num_qubits != self.num_qubits:
            raise ValueError(f"observable on {self.num_qubits} qubits, state has {s.num_qubits}")
        psi = s.amplitudes
        total = complex(self.constant * s.norm_squared())
        if self._cache is not None:
            for gather, w in self._cache.values():
                if gather is None:
                    total += np.dot(w, psi.real**2 + psi.imag**2)
                else:
                    total += np.vdot(psi[gather], w * psi)
        else:
            total += self._evaluate_chunked(psi)
        if abs(total.imag) > tol * self.scale:
            raise ArithmeticError(f"expectation has imaginary residue {total.imag:g}")
        return float(total.real)


def expectation(s: Statevector, obs: Observable) -> float:
    return ExpectationPlan(obs).evaluate(s)


def success_probability(s: Statevector, solutions: Iterable[int]) -> float:
    sol = np.fromiter(sorted(set(solutions)), dtype=np.int64)
    if sol.size == 0:
        raise ValueError("success probability needs a non-empty solution set")
    return float(np.sum(np.abs(s.amplitudes[sol]) ** 2))
