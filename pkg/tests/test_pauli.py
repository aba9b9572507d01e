import pytest
from hypothesis import given, strategies as st

from doilynest.pauli import (IDENTITY, Case, PauliElement, all_elements, commutator_exponent, commutes,
                             element_index, index_to_element, product_index)


def elements(k):
    d = 2 ** k
    return st.builds(PauliElement, st.integers(0, 1), st.integers(0, 1),
                     st.integers(0, d - 1), st.integers(0, d - 1))


class TestCase:
    def test_derived_fields(self):
        c = Case(3)
        assert (c.d, c.n_elements, c.set_size, c.core_size) == (8, 255, 15, 7)

    @pytest.mark.parametrize("k", [1, 0, -2])
    def test_rejects_small_k(self, k):
        with pytest.raises(ValueError):
            Case(k)


class TestNumbering:
    @pytest.mark.parametrize("k,n", [(2, 63), (3, 255), (5, 4095)])
    def test_all_elements_length(self, k, n):
        els = all_elements(k)
        assert len(els) == n
        assert IDENTITY not in els
        assert len(set(els)) == n

    @pytest.mark.parametrize("k,exps,index", [
        (2, (0, 0, 2, 0), 2),    # I (x) X^2
        (2, (0, 0, 0, 2), 8),    # I (x) Z^2
        (2, (0, 0, 2, 2), 10),   # I (x) X^2 Z^2
        (3, (0, 0, 4, 0), 4),    # I (x) X^4
        (3, (0, 0, 0, 4), 32),   # I (x) Z^4
        (3, (0, 0, 4, 4), 36),   # I (x) Z^4 X^4
        (2, (1, 0, 0, 0), 16),   # X (x) I
    ])
    def test_named_indices(self, k, exps, index):
        assert element_index(PauliElement(*exps), k) == index
        assert index_to_element(index, k) == PauliElement(*exps)

    def test_listing_order_k2(self):
        # qubit part I, X, Z, XZ; qudit part X^b Z^c with c outer, b inner
        els = all_elements(2)
        assert [e.label(4) for e in els[:5]] == ["I(x)X", "I(x)X^2", "I(x)X^3", "I(x)Z", "I(x)XZ"]
        assert els[15].label(4) == "X(x)I"
        assert els[31].label(4) == "Z(x)I"
        assert els[47].label(4) == "XZ(x)I"
        assert els[62].label(4) == "XZ(x)X^3Z^3"

    def test_identity_has_no_index(self):
        with pytest.raises(ValueError, match="identity has no index"):
            element_index(IDENTITY, 2)

    @pytest.mark.parametrize("i", [0, 64, -1])
    def test_index_out_of_range(self, i):
        with pytest.raises(ValueError):
            index_to_element(i, 2)

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_bijection(self, k):
        n = Case(k).n_elements
        assert [element_index(index_to_element(i, k), k) for i in range(1, n + 1)] == list(range(1, n + 1))


class TestCommutes:
    def test_examples(self):
        e = lambda i: index_to_element(i, 2)
        assert commutes(e(2), e(8), 2)
        assert not commutes(e(1), e(4), 2)
        # cross-factor cancellation: (d/2)*s1 + s2 = 2 + 2 = 0 mod 4
        assert commutator_exponent(e(17), e(41), 4) == 0
        assert (e(17).c1 * e(41).b1 - e(41).c1 * e(17).b1) % 2 == 1
        assert commutes(e(17), e(41), 2)

    @given(elements(3))
    def test_self(self, e):
        assert commutes(e, e, 3)

    @given(elements(3))
    def test_identity_commutes(self, e):
        assert commutes(IDENTITY, e, 3)

    @given(elements(4), elements(4))
    def test_symmetric(self, e, f):
        assert commutes(e, f, 4) == commutes(f, e, 4)
        assert (commutator_exponent(e, f, 16) + commutator_exponent(f, e, 16)) % 16 == 0

    @given(elements(3), elements(3), elements(3))
    def test_closure_compatibility(self, e, f, g):
        if commutes(e, g, 3) and commutes(f, g, 3):
            assert commutes(e.times(f, 8), g, 3)

    @given(st.integers(1, 255), st.integers(1, 255))
    def test_product_index_matches_elements(self, i, j):
        prod = index_to_element(i, 3).times(index_to_element(j, 3), 8)
        expected = 0 if prod.is_identity else element_index(prod, 3)
        assert product_index(i, j, 8) == expected
