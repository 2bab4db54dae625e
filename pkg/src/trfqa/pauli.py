"""Pauli strings and real-weighted sums of them (Hermitian observables).

Qubit ordering is little-endian throughout the package: qubit 0 is the least
significant bit of a computational-basis index.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Mapping

import numpy as np

PAULI_LETTERS = ("X", "Y", "Z")

# Single-site products: (a, b) -> (phase, c) with a·b = phase·c.
_SITE_PRODUCT = {
    ("X", "X"): (1, None),
    ("Y", "Y"): (1, None),
    ("Z", "Z"): (1, None),
    ("X", "Y"): (1j, "Z"),
    ("Y", "X"): (-1j, "Z"),
    ("Y", "Z"): (1j, "X"),
    ("Z", "Y"): (-1j, "X"),
    ("Z", "X"): (1j, "Y"),
    ("X", "Z"): (-1j, "Y"),
}

_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

DENSE_QUBIT_CAP = 12
IMAG_TOLERANCE = 1e-12


class IncompatibleOperands(ValueError):
    """Raised when two operators live on registers of different size."""


@dataclass(frozen=True, order=True)
class PauliString:
    """Tensor product of single-qubit Paulis; absent qubits carry identity.

    ``factors`` is kept as a tuple of ``(qubit, letter)`` pairs sorted by qubit,
    which makes equality, ordering and hashing canonical.
    """

    factors: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        seen = set()
        for q, letter in self.factors:
            if letter not in PAULI_LETTERS:
                raise ValueError(f"invalid Pauli letter {letter!r} on qubit {q}")
            if q < 0:
                raise ValueError(f"negative qubit index {q}")
            if q in seen:
                raise ValueError(f"qubit {q} appears twice")
            seen.add(q)
        if list(self.factors) != sorted(self.factors):
            object.__setattr__(self, "factors", tuple(sorted(self.factors)))

    @classmethod
    def from_dict(cls, factors: Mapping[int, str]) -> "PauliString":
        return cls(tuple((int(q), p) for q, p in factors.items() if p != "I"))

    @classmethod
    def single(cls, letter: str, qubit: int) -> "PauliString":
        return cls(((qubit, letter),))

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse a compact label such as ``"X0 Z1 Z2"`` (empty means identity)."""
        factors = []
        for tok in label.split():
            factors.append((int(tok[1:]), tok[0].upper()))
        return cls(tuple(factors))

    def as_dict(self) -> dict[int, str]:
        return dict(self.factors)

    @property
    def is_identity(self) -> bool:
        return not self.factors

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.factors)

    @property
    def max_qubit(self) -> int:
        return self.factors[-1][0] if self.factors else -1

    def masks(self) -> tuple[int, int, int]:
        """Return ``(x_mask, z_mask, n_y)`` in the symplectic encoding.

        Y sets both the X and Z bit of its qubit.
        """
        x = z = ny = 0
        for q, p in self.factors:
            if p in ("X", "Y"):
                x |= 1 << q
            if p in ("Z", "Y"):
                z |= 1 << q
            if p == "Y":
                ny += 1
        return x, z, ny

    def __str__(self) -> str:
        if not self.factors:
            return "I"
        return " ".join(f"{p}{q}" for q, p in self.factors)


def pauli_product(p: PauliString, q: PauliString) -> tuple[complex, PauliString]:
    """Multiply two Pauli strings, returning ``(phase, r)`` with ``p·q = phase·r``."""
    left = p.as_dict()
    right = q.as_dict()
    phase: complex = 1
    out = {}
    for qubit in sorted(set(left) | set(right)):
        a = left.get(qubit)
        b = right.get(qubit)
        if a is None or b is None:
            out[qubit] = a or b
            continue
        ph, c = _SITE_PRODUCT[(a, b)]
        phase *= ph
        if c is not None:
            out[qubit] = c
    return phase, PauliString(tuple(sorted(out.items())))


def _anticommute(p: PauliString, q: PauliString) -> bool:
    left = p.as_dict()
    clashes = sum(1 for qubit, b in q.factors if qubit in left and left[qubit] != b)
    return clashes % 2 == 1


@dataclass(frozen=True, eq=False)
class Observable:
    """Real-weighted sum of Pauli strings over ``num_qubits`` qubits.

    The identity coefficient lives in ``constant``; ``terms`` never contains
    the identity string nor a zero coefficient.
    """

    num_qubits: int
    terms: Mapping[PauliString, float] = field(default_factory=dict)
    constant: float = 0.0

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError("num_qubits must be positive")
        constant = float(self.constant)
        clean: dict[PauliString, float] = {}
        for p, c in self.terms.items():
            if p.max_qubit >= self.num_qubits:
                raise ValueError(f"term {p} exceeds register of {self.num_qubits} qubits")
            c = float(c)
            if p.is_identity:
                constant += c
            else:
                clean[p] = clean.get(p, 0.0) + c
        clean = {p: c for p, c in sorted(clean.items()) if c != 0.0}
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "constant", constant)
        object.__setattr__(self, "_key", (self.num_qubits, constant, tuple(clean.items())))

    @classmethod
    def from_terms(
        cls, num_qubits: int, terms: Iterable[tuple[float, PauliString]], constant: float = 0.0
    ) -> "Observable":
        acc: dict[PauliString, float] = {}
        for c, p in terms:
            acc[p] = acc.get(p, 0.0) + c
        return cls(num_qubits, acc, constant)

    @classmethod
    def zero(cls, num_qubits: int) -> "Observable":
        return cls(num_qubits)

    def __eq__(self, other):
        if not isinstance(other, Observable):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __len__(self):
        return len(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms and self.constant == 0.0

    def simplify(self) -> "Observable":
        """Canonical form is established at construction; this is idempotent."""
        return Observable(self.num_qubits, dict(self.terms), self.constant)

    def _check(self, other: "Observable"):
        if self.num_qubits != other.num_qubits:
            raise IncompatibleOperands(
                f"register sizes differ: {self.num_qubits} vs {other.num_qubits}"
            )

    def __add__(self, other: "Observable") -> "Observable":
        self._check(other)
        acc = dict(self.terms)
        for p, c in other.terms.items():
            acc[p] = acc.get(p, 0.0) + c
        return Observable(self.num_qubits, acc, self.constant + other.constant)

    def __neg__(self) -> "Observable":
        return self * -1.0

    def __sub__(self, other: "Observable") -> "Observable":
        return self + (-other)

    def __mul__(self, scalar: float) -> "Observable":
        scalar = float(scalar)
        return Observable(
            self.num_qubits,
            {p: c * scalar for p, c in self.terms.items()},
            self.constant * scalar,
        )

    __rmul__ = __mul__

    def norm_bound(self) -> float:
        """Sum of absolute coefficients; bounds the operator norm."""
        return abs(self.constant) + sum(abs(c) for c in self.terms.values())

    def __repr__(self) -> str:
        parts = [f"{c:+g}*{p}" for p, c in self.terms.items()]
        if self.constant:
            parts.insert(0, f"{self.constant:+g}")
        body = " ".join(parts) if parts else "0"
        return f"Observable(L={self.num_qubits}: {body})"


def commutator_i(a: Observable, b: Observable) -> Observable:
    """Return the Hermitian operator ``i(ab - ba)``.

    Only anticommuting string pairs contribute; for those ``pq - qp = 2pq``.
    An imaginary residue above ``IMAG_TOLERANCE`` means the inputs were not
    Hermitian and raises ``ArithmeticError``.
    """
    a._check(b)
    acc: dict[PauliString, complex] = {}
    for p, cp in a.terms.items():
        for q, cq in b.terms.items():
            if not _anticommute(p, q):
                continue
            phase, r = pauli_product(p, q)
            acc[r] = acc.get(r, 0) + 2j * phase * cp * cq
    out = {}
    for r, c in acc.items():
        if abs(c.imag) > IMAG_TOLERANCE:
            raise ArithmeticError(f"non-Hermitian residue {c.imag:g} on {r}")
        out[r] = c.real
    return Observable(a.num_qubits, out)


def _string_matrix(p: PauliString, num_qubits: int) -> np.ndarray:
    letters = p.as_dict()
    # kron builds the most significant qubit first
    mats = [_MATRICES[letters.get(q, "I")] for q in reversed(range(num_qubits))]
    return reduce(np.kron, mats)


def to_dense(obs: Observable, cap: int = DENSE_QUBIT_CAP) -> np.ndarray:
    """Dense ``2^L x 2^L`` matrix of ``obs`` (little-endian)."""
    if obs.num_qubits > cap:
        raise MemoryError(f"refusing dense matrix for {obs.num_qubits} qubits (cap {cap})")
    dim = 2**obs.num_qubits
    m = obs.constant * np.eye(dim, dtype=complex)
    for p, c in obs.terms.items():
        m += c * _string_matrix(p, obs.num_qubits)
    return m
