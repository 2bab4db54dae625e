from functools import reduce

import numpy as np
import pytest
import scipy.linalg
from hypothesis import strategies as st

from trfqa.pauli import Observable, PauliString

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)


def site_op(m, q, L):
    """Dense single-site operator, little-endian (qubit 0 is the last kron factor)."""
    return reduce(np.kron, [m if k == q else I2 for k in reversed(range(L))])


def dense_reference_run(Hp, Hd, dt, layers, fdots=None):
    """Straightforward feedback loop with scipy.linalg.expm, no shared code paths.

    Returns (J list, A list, beta list, final state).
    """
    dim = Hp.shape[0]
    C = 1j * (Hd @ Hp - Hp @ Hd)
    psi = np.full(dim, 1 / np.sqrt(dim), dtype=complex)
    beta = 0.0
    Js, As, betas = [], [], []
    A = None
    for k in range(1, layers + 1):
        fd = 1.0 if fdots is None else fdots(k * dt)
        if A is not None:
            beta = -A / fd
        psi = scipy.linalg.expm(-1j * Hp * fd * dt) @ psi
        psi = scipy.linalg.expm(-1j * beta * Hd * fd * dt) @ psi
        A = np.vdot(psi, C @ psi).real
        Js.append(np.vdot(psi, Hp @ psi).real)
        As.append(A)
        betas.append(beta)
    return Js, As, betas, psi


@st.composite
def pauli_strings(draw, num_qubits):
    letters = draw(st.lists(st.sampled_from("IXYZ"), min_size=num_qubits, max_size=num_qubits))
    return PauliString.from_dict({q: p for q, p in enumerate(letters)})


@st.composite
def observables(draw, num_qubits=None, max_terms=6):
    L = num_qubits if num_qubits is not None else draw(st.integers(1, 5))
    n = draw(st.integers(0, max_terms))
    coeff = st.floats(-2, 2, allow_nan=False, allow_infinity=False)
    terms = [(draw(coeff), draw(pauli_strings(L))) for _ in range(n)]
    return Observable.from_terms(L, terms, constant=draw(coeff))


def random_state(rng, L):
    v = rng.normal(size=2**L) + 1j * rng.normal(size=2**L)
    return v / np.linalg.norm(v)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
