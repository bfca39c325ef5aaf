import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ebcap import qnum
from ebcap.errors import DimensionMismatch, InvalidPmf, InvalidState, NonHermitian, OutOfRange

from conftest import H2_035


def test_eigvals_examples():
    assert np.allclose(qnum.eigvals_hermitian(np.eye(2)), [1, 1])
    assert np.allclose(qnum.eigvals_hermitian(np.diag([0.3, 0.7])), [0.7, 0.3])
    assert np.allclose(qnum.eigvals_hermitian([[0, 1], [1, 0]]), [1, -1])


def test_eigvals_rejects_nonhermitian():
    with pytest.raises(NonHermitian):
        qnum.eigvals_hermitian([[0, 1], [0, 0]])


def test_entropy_examples(rng):
    psi = qnum.random_unitary(3, rng)[:, 0]
    assert qnum.entropy_vn(qnum.projector(psi)) == pytest.approx(0.0, abs=1e-12)
    assert qnum.entropy_vn(np.eye(2) / 2) == pytest.approx(1.0)
    assert qnum.entropy_vn(np.diag([0.35, 0.65])) == pytest.approx(H2_035, abs=1e-12)


def test_entropy_rejects_invalid_state():
    with pytest.raises(InvalidState):
        qnum.entropy_vn(np.diag([0.5, 0.6]))
    with pytest.raises(InvalidState):
        qnum.entropy_vn(np.diag([1.5, -0.5]))


def test_shannon_and_h2():
    assert qnum.shannon_entropy([1, 0, 0]) == 0.0
    assert qnum.shannon_entropy([0.5, 0.5]) == pytest.approx(1.0)
    assert qnum.shannon_entropy([0.25] * 4) == pytest.approx(2.0)
    assert qnum.h2(0.0) == 0.0
    assert qnum.h2(0.5) == pytest.approx(1.0)
    assert qnum.h2(0.35) == pytest.approx(H2_035, abs=1e-12)
    with pytest.raises(InvalidPmf):
        qnum.shannon_entropy([0.5, 0.6])
    with pytest.raises(OutOfRange):
        qnum.h2(1.2)


@given(st.floats(0, 1))
def test_h2_symmetric(x):
    assert qnum.h2(x) == pytest.approx(qnum.h2(1 - x), abs=1e-12)
    assert 0.0 <= qnum.h2(x) <= 1.0


def test_binary_convolution_examples():
    assert qnum.binary_convolution(0.0, 0.3) == pytest.approx(0.3)
    assert qnum.binary_convolution(0.5, 0.3) == pytest.approx(0.5)
    assert qnum.binary_convolution(0.5, 0.35) == pytest.approx(0.5)
    with pytest.raises(OutOfRange):
        qnum.binary_convolution(-0.1, 0.2)


unit = st.floats(0, 1)


@given(unit, unit, unit)
def test_binary_convolution_associative_commutative(a, b, c):
    bc = qnum.binary_convolution
    assert bc(a, b) == pytest.approx(bc(b, a), abs=1e-12)
    assert bc(a, bc(b, c)) == pytest.approx(bc(bc(a, b), c), abs=1e-12)
    assert 0.0 <= bc(a, b) <= 1.0


def test_tensor_examples():
    assert np.array_equal(qnum.tensor(np.eye(2), np.eye(2)), np.eye(4))
    assert np.array_equal(qnum.tensor(np.diag([1, 0]), np.diag([0, 1])), np.diag([0, 1, 0, 0]))
    assert np.trace(qnum.tensor(np.diag([1, 0]), np.eye(2) / 2)) == pytest.approx(1.0)


def test_tensor_associative(rng):
    a, b, c = (rng.standard_normal((2, 2)) for _ in range(3))
    assert np.allclose(qnum.tensor(qnum.tensor(a, b), c), qnum.tensor(a, qnum.tensor(b, c)))


def test_partial_trace_examples(rng):
    ra, rb = qnum.random_density_matrix(2, rng), qnum.random_density_matrix(3, rng)
    assert np.abs(qnum.partial_trace(np.kron(ra, rb), (2, 3), [0]) - ra).max() < 1e-12
    assert np.abs(qnum.partial_trace(np.kron(ra, rb), (2, 3), [1]) - rb).max() < 1e-12
    epr = qnum.projector(qnum.maximally_entangled(2))
    for k in (0, 1):
        assert np.allclose(qnum.partial_trace(epr, (2, 2), [k]), np.eye(2) / 2)
    assert np.array_equal(qnum.partial_trace(epr, (2, 2), [0, 1]), epr)


def test_partial_trace_three_factors_matches_loop(rng):
    # brute-force index loop as oracle
    dims = (2, 3, 2)
    rho = qnum.random_density_matrix(12, rng)
    t = rho.reshape(dims + dims)
    oracle = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for k in range(2):
            for ip in range(2):
                for kp in range(2):
                    oracle[i * 2 + k, ip * 2 + kp] = sum(t[i, j, k, ip, j, kp] for j in range(3))
    assert np.abs(qnum.partial_trace(rho, dims, [0, 2]) - oracle).max() < 1e-12


def test_partial_trace_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        qnum.partial_trace(np.eye(4) / 4, (2, 3), [0])


def test_mutual_info_examples(rng):
    prod = np.kron(qnum.random_density_matrix(2, rng), qnum.random_density_matrix(2, rng))
    assert qnum.mutual_info(prod, (2, 2)) == pytest.approx(0.0, abs=1e-10)
    epr = qnum.projector(qnum.maximally_entangled(2))
    assert qnum.mutual_info(epr, (2, 2)) == pytest.approx(2.0)
    # H(A) = H(B) = 1, H(AB) = 1
    assert qnum.mutual_info(np.diag([0.5, 0, 0, 0.5]), (2, 2)) == pytest.approx(1.0)


def test_maximally_entangled():
    assert np.allclose(qnum.maximally_entangled(1), [1.0])
    assert np.allclose(qnum.maximally_entangled(2), np.array([1, 0, 0, 1]) / math.sqrt(2))
    phi = qnum.projector(qnum.maximally_entangled(3))
    assert np.allclose(qnum.eigvals_hermitian(qnum.partial_trace(phi, (3, 3), [0])), [1 / 3] * 3)


def test_entropy_bounds_random(rng):
    for _ in range(50):
        d = int(rng.integers(1, 7))
        rank = int(rng.integers(1, d + 1))
        rho = qnum.random_density_matrix(d, rng, rank=rank)
        h = qnum.entropy_vn(rho)
        assert -1e-12 <= h <= math.log2(d) + 1e-9
        assert (h < 1e-8) == (rank == 1)


def test_subadditivity_and_product_trace(rng):
    for _ in range(50):
        da, db = (int(v) for v in rng.integers(2, 4, size=2))
        rho = qnum.random_density_matrix(da * db, rng)
        assert qnum.mutual_info(rho, (da, db)) >= -1e-8
        assert qnum.mutual_info(rho, (da, db)) <= 2 * min(math.log2(da), math.log2(db)) + 1e-8
        ra, rb = qnum.random_density_matrix(da, rng), qnum.random_density_matrix(db, rng)
        assert np.abs(qnum.partial_trace(qnum.tensor(ra, rb), (da, db), [0]) - ra).max() < 1e-8


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_mirror_identity(d, rng):
    phi = qnum.maximally_entangled(d)
    for _ in range(20):
        u = qnum.random_unitary(d, rng)
        assert np.abs(np.kron(np.eye(d), u) @ phi - np.kron(u.T, np.eye(d)) @ phi).max() < 1e-10


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0.01, 1.0), min_size=1, max_size=5))
def test_schmidt_state_marginal(weights):
    w = np.array(weights) / sum(weights)
    psi = qnum.schmidt_state(w)
    d = w.size
    marg = qnum.partial_trace(qnum.projector(psi), (d, d), [1])
    assert np.allclose(np.diag(marg).real, w)
