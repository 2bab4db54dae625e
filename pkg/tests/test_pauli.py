import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trfqa.pauli import (
    IncompatibleOperands,
    Observable,
    PauliString,
    commutator_i,
    pauli_product,
    to_dense,
)
from conftest import SX, SY, SZ, observables, pauli_strings, site_op

P = PauliString.from_label


def obs(L, *terms, constant=0.0):
    return Observable.from_terms(L, [(c, P(lbl)) for c, lbl in terms], constant)


class TestPauliProduct:
    def test_xz_is_minus_i_y(self):
        assert pauli_product(P("X0"), P("Z0")) == (-1j, P("Y0"))

    def test_involution(self):
        phase, r = pauli_product(P("X0"), P("X0"))
        assert phase == 1 and r.is_identity

    def test_disjoint_support(self):
        assert pauli_product(P("X0"), P("Z1 Z2")) == (1, P("X0 Z1 Z2"))

    @pytest.mark.parametrize("a,b", [("X", "Y"), ("Y", "Z"), ("Z", "X"), ("Y", "X"), ("X", "Z")])
    def test_single_site_table_matches_matrices(self, a, b):
        mats = {"X": SX, "Y": SY, "Z": SZ}
        phase, r = pauli_product(P(f"{a}0"), P(f"{b}0"))
        letter = r.factors[0][1]
        np.testing.assert_allclose(mats[a] @ mats[b], phase * mats[letter])

    @settings(max_examples=100, deadline=None)
    @given(st.data())
    def test_associative(self, data):
        L = data.draw(st.integers(1, 4))
        p, q, r = (data.draw(pauli_strings(L)) for _ in range(3))
        ph1, pq = pauli_product(p, q)
        ph2, left = pauli_product(pq, r)
        ph3, qr = pauli_product(q, r)
        ph4, right = pauli_product(p, qr)
        assert left == right
        assert ph1 * ph2 == pytest.approx(ph3 * ph4)

    @settings(max_examples=100, deadline=None)
    @given(st.data())
    def test_product_matches_dense(self, data):
        L = data.draw(st.integers(1, 4))
        p, q = data.draw(pauli_strings(L)), data.draw(pauli_strings(L))
        phase, r = pauli_product(p, q)
        dense = lambda s: to_dense(Observable.from_terms(L, [(1.0, s)]))
        np.testing.assert_allclose(dense(p) @ dense(q), phase * dense(r), atol=1e-12)


class TestPauliString:
    def test_canonical_order(self):
        assert PauliString(((2, "Z"), (0, "X"))) == P("X0 Z2")
        assert str(P("Z2 X0")) == "X0 Z2"

    def test_identity_entries_dropped(self):
        assert PauliString.from_dict({0: "I", 1: "Z"}) == P("Z1")

    def test_rejects_bad_letter(self):
        with pytest.raises(ValueError):
            PauliString(((0, "Q"),))


class TestObservable:
    def test_zero_coefficients_removed(self):
        o = obs(2, (1.0, "Z0"), (-1.0, "Z0"), (0.5, "X1"))
        assert list(o.terms) == [P("X1")]

    def test_identity_folds_into_constant(self):
        o = obs(2, (1.5, ""), (1.0, "Z0"))
        assert o.constant == 1.5 and len(o) == 1

    def test_equality_and_hash(self):
        a = obs(2, (1.0, "Z0 Z1"), (0.5, "X0"))
        b = obs(2, (0.5, "X0"), (1.0, "Z0 Z1"))
        assert a == b and hash(a) == hash(b)
        assert a != obs(3, (1.0, "Z0 Z1"), (0.5, "X0"))

    def test_term_outside_register(self):
        with pytest.raises(ValueError):
            obs(2, (1.0, "X2"))

    @settings(max_examples=100, deadline=None)
    @given(observables())
    def test_simplify_idempotent(self, o):
        once = o.simplify()
        assert once.simplify().terms == once.terms
        assert once == o


class TestCommutator:
    def test_driver_with_single_edge(self):
        a = obs(2, (1.0, "X0"), (1.0, "X1"))
        b = obs(2, (0.5, "Z0 Z1"))
        assert commutator_i(a, b) == obs(2, (1.0, "Y0 Z1"), (1.0, "Z0 Y1"))

    def test_commuting_diagonals(self):
        assert commutator_i(obs(2, (1.0, "Z0")), obs(2, (1.0, "Z0 Z1"))).is_zero

    def test_x_y_sign(self):
        # i[X, Y] = i(iZ - (-iZ)) = -2Z
        c = commutator_i(obs(1, (1.0, "X0")), obs(1, (1.0, "Y0")))
        assert c == obs(1, (-2.0, "Z0"))
        np.testing.assert_allclose(to_dense(c), 1j * (SX @ SY - SY @ SX))

    def test_single_edge_dense(self):
        a = obs(2, (1.0, "X0"), (1.0, "X1"))
        b = obs(2, (0.5, "Z0 Z1"))
        A, B = to_dense(a), to_dense(b)
        np.testing.assert_allclose(to_dense(commutator_i(a, b)), 1j * (A @ B - B @ A), atol=1e-12)

    def test_size_mismatch(self):
        with pytest.raises(IncompatibleOperands):
            commutator_i(obs(1, (1.0, "X0")), obs(2, (1.0, "Z1")))

    @settings(max_examples=150, deadline=None)
    @given(st.data())
    def test_dense_equivalence(self, data):
        L = data.draw(st.integers(1, 5))
        a, b = data.draw(observables(L)), data.draw(observables(L))
        c = commutator_i(a, b)
        assert all(isinstance(v, float) for v in c.terms.values())
        A, B = to_dense(a), to_dense(b)
        np.testing.assert_allclose(to_dense(c), 1j * (A @ B - B @ A), atol=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(st.data())
    def test_antisymmetric(self, data):
        L = data.draw(st.integers(1, 5))
        a, b = data.draw(observables(L)), data.draw(observables(L))
        assert commutator_i(a, b) == -commutator_i(b, a)


class TestToDense:
    def test_z_single_qubit(self):
        np.testing.assert_array_equal(to_dense(obs(1, (1.0, "Z0"))), np.diag([1, -1]))

    def test_x0_flips_least_significant_bit(self):
        m = to_dense(obs(2, (1.0, "X0")))
        expected = np.zeros((4, 4))
        for b in range(4):
            expected[b ^ 1, b] = 1
        np.testing.assert_array_equal(m, expected)
        np.testing.assert_array_equal(m, site_op(SX, 0, 2))

    def test_single_edge_maxcut(self):
        # -1/2 (1 - z0 z1) with z = +1 for bit 0 and -1 for bit 1
        expected = [-0.5 * (1 - (1 - 2 * (b & 1)) * (1 - 2 * (b >> 1))) for b in range(4)]
        assert expected == [0, -1, -1, 0]
        m = to_dense(obs(2, (0.5, "Z0 Z1"), constant=-0.5))
        np.testing.assert_allclose(m, np.diag(expected))

    def test_cap(self):
        with pytest.raises(MemoryError):
            to_dense(obs(13, (1.0, "Z12")))

    @settings(max_examples=50, deadline=None)
    @given(observables())
    def test_hermitian(self, o):
        m = to_dense(o)
        np.testing.assert_allclose(m, m.conj().T)
