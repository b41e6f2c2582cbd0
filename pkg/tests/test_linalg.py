import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles as O
from openchain.errors import InputError, NumericalError, SingularityError, SizeError
from openchain.linalg import (determinant, eigenvalues, embed_one_site, embed_two_site, inverse, kron,
                              permutation_matrix, rel_residual)


def basis(n, idx):
    v = np.zeros(2**n, dtype=complex)
    v[idx] = 1
    return v


def test_permutation_swaps_basis():
    p = permutation_matrix()
    for i in range(2):
        for j in range(2):
            assert np.array_equal(p @ basis(2, 2 * i + j), basis(2, 2 * j + i))


def test_kron_swap_against_index_oracle():
    # P on legs (1, 2) of three legs, applied to e_{b1 b2 b3}
    op = kron(permutation_matrix(), np.eye(2))
    assert np.allclose(op, O.two_leg(permutation_matrix(), 0, 1, 3))
    assert np.array_equal(op @ basis(3, 0b100), basis(3, 0b010))


def test_embed_swap_legs_1_3():
    op = embed_two_site(permutation_matrix(), 1, 3, 3)
    for col in range(8):
        b = [(col >> (2 - t)) & 1 for t in range(3)]
        row = b[2] * 4 + b[1] * 2 + b[0]
        assert np.array_equal(op[:, col], basis(3, row))


@given(n=st.integers(2, 5), data=st.data())
def test_embed_two_site_matches_oracle(n, data):
    i = data.draw(st.integers(1, n))
    j = data.draw(st.integers(1, n).filter(lambda x: x != i))
    rng = np.random.default_rng(n * 31 + i * 7 + j)
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert np.allclose(embed_two_site(g, i, j, n), O.two_leg(g, i - 1, j - 1, n), atol=1e-14)


def test_embed_one_site():
    g = np.array([[1, 2], [3, 4]], dtype=complex)
    assert np.array_equal(embed_one_site(g, 2, 3), np.kron(np.kron(np.eye(2), g), np.eye(2)))


def test_embed_validation():
    with pytest.raises(InputError):
        embed_two_site(np.eye(4), 1, 1, 3)
    with pytest.raises(InputError):
        embed_two_site(np.eye(4), 1, 4, 3)
    with pytest.raises(InputError):
        embed_two_site(np.eye(2), 1, 2, 3)


def test_size_cap():
    with pytest.raises(SizeError):
        embed_two_site(np.eye(4), 1, 2, 14)


def test_inverse_unitarity_relation():
    eta, u = 1.0, 0.7
    r = O.R_np(u, eta)
    inv, res = inverse(r)
    assert res < 1e-14
    assert np.max(np.abs(inv * (eta**2 - u**2) - O.R_np(-u, eta))) <= 1e-12


def test_inverse_singular():
    with pytest.raises(SingularityError):
        inverse(O.R_np(1.0, 1.0))  # the middle block [[u, eta], [eta, u]] is singular at u = eta
    with pytest.raises(InputError):
        inverse(np.ones((2, 3)))


def test_eigenvalues_trace(rng):
    a = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
    ev = eigenvalues(a)
    assert abs(ev.sum() - np.trace(a)) <= 1e-9 * np.abs(ev).sum()


def test_eigenvalues_nonfinite():
    with pytest.raises(NumericalError):
        eigenvalues(np.array([[np.nan, 0], [0, 1]]))


def test_determinant_and_residual():
    assert determinant(np.diag([2, 3])) == 6
    assert rel_residual(np.eye(2), np.eye(2)) == 0
    assert rel_residual(np.zeros((2, 2)), np.zeros((2, 2))) == 0
