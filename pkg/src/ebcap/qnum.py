"""Hermitian linear algebra and entropic functionals.

States are plain numpy arrays: density matrices are ``(d, d)`` complex arrays,
pure states are ``(d,)`` complex vectors and probability vectors are 1-d real
arrays. Composite spaces are described by a list of factor dimensions with the
leftmost factor most significant, i.e. numpy's row-major ``reshape`` order.

All entropies are in bits.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidPmf, InvalidState, NonHermitian, OutOfRange

TOL_HERM = 1e-9
TOL_TRACE = 1e-9
TOL_PSD = 1e-10
TOL_NUM = 1e-8


def _as_square(m) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    return m


def is_hermitian(m, tol: float = TOL_HERM) -> bool:
    m = _as_square(m)
    return bool(np.abs(m - m.conj().T).max(initial=0.0) <= tol)


def eigvals_hermitian(m) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix in descending order."""
    m = _as_square(m)
    if not is_hermitian(m):
        raise NonHermitian("matrix is not Hermitian within tolerance")
    return np.linalg.eigvalsh(m)[::-1]


def check_density_matrix(rho, tol_herm: float = TOL_HERM, tol_psd: float = TOL_PSD,
                         tol_trace: float = TOL_TRACE) -> np.ndarray:
    """Return ``rho`` as a complex array, raising :class:`InvalidState` if it is not a state."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] == 0:
        raise InvalidState(f"density matrix must be square and non-empty, got {rho.shape}")
    if not is_hermitian(rho, tol_herm):
        raise InvalidState("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol_trace:
        raise InvalidState(f"density matrix has trace {np.trace(rho).real!r}")
    if np.linalg.eigvalsh(rho)[0] < -tol_psd:
        raise InvalidState("density matrix has a negative eigenvalue")
    return rho


def check_pure_state(psi, tol: float = TOL_TRACE) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1 or psi.size == 0:
        raise InvalidState(f"pure state must be a non-empty vector, got shape {psi.shape}")
    if abs(np.linalg.norm(psi) - 1.0) > tol:
        raise InvalidState("pure state is not normalised")
    return psi


def check_pmf(p, tol: float = TOL_TRACE) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise InvalidPmf(f"probability vector must be a non-empty 1-d array, got shape {p.shape}")
    if not np.all(np.isfinite(p)) or np.any(p < -tol):
        raise InvalidPmf("probability vector has negative or non-finite entries")
    if abs(p.sum() - 1.0) > tol:
        raise InvalidPmf(f"probability vector sums to {p.sum()!r}")
    return p


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def _entropy_of_spectrum(evals: np.ndarray) -> float:
    # eigensolver noise of order -1e-12 is clamped away before taking logs
    p = np.clip(evals, 0.0, 1.0)
    p = p[p > 0.0]
    h = float(-np.sum(p * np.log2(p)))
    return h if h > 0.0 else 0.0


def entropy_vn(rho) -> float:
    """Von Neumann entropy ``-tr[rho log2 rho]``."""
    rho = check_density_matrix(rho)
    return _entropy_of_spectrum(np.linalg.eigvalsh(rho))


def entropy_unchecked(rho: np.ndarray) -> float:
    """:func:`entropy_vn` without validation, for inner loops on known-good states."""
    return _entropy_of_spectrum(np.linalg.eigvalsh(rho))


def shannon_entropy(p) -> float:
    return _entropy_of_spectrum(check_pmf(p))


def h2(x: float) -> float:
    """Binary entropy ``H(x, 1-x)``."""
    if not 0.0 <= x <= 1.0:
        raise OutOfRange(f"h2 argument {x!r} outside [0, 1]")
    return _entropy_of_spectrum(np.array([x, 1.0 - x]))


def binary_convolution(a: float, b: float) -> float:
    """Flip probability of two cascaded binary symmetric flips, ``(1-a)b + a(1-b)``."""
    if not (0.0 <= a <= 1.0 and 0.0 <= b <= 1.0):
        raise OutOfRange(f"binary_convolution arguments ({a!r}, {b!r}) outside [0, 1]")
    return (1.0 - a) * b + a * (1.0 - b)


def tensor(*mats) -> np.ndarray:
    """Kronecker product of one or more matrices (or vectors)."""
    if not mats:
        raise ValueError("tensor() needs at least one argument")
    out = np.asarray(mats[0])
    for m in mats[1:]:
        out = np.kron(out, np.asarray(m))
    return out


def _check_dims(dims: Sequence[int], dim: int) -> list[int]:
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims) or int(np.prod(dims)) != dim:
        raise DimensionMismatch(f"subsystem dims {dims} do not multiply to {dim}")
    return dims


def partial_trace(rho, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Reduced operator on the factors listed in ``keep`` (output keeps their original order)."""
    rho = _as_square(rho)
    dims = _check_dims(dims, rho.shape[0])
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise DimensionMismatch(f"keep indices {keep} out of range for {n} factors")
    if len(keep) == n:
        return rho.copy()
    t = rho.reshape(dims + dims)
    # einsum subscripts: row index i_k, column index j_k; traced factors share a letter
    letters = [chr(ord("a") + k) for k in range(2 * n)]
    rows = letters[:n]
    cols = [letters[n + k] if k in keep else letters[k] for k in range(n)]
    out = [rows[k] for k in keep] + [cols[k] for k in keep]
    sub = "".join(rows) + "".join(cols) + "->" + "".join(out)
    dk = int(np.prod([dims[k] for k in keep])) if keep else 1
    return np.einsum(sub, t).reshape(dk, dk)


def mutual_info(rho_ab, dims: Sequence[int]) -> float:
    """``I(A;B) = H(A) + H(B) - H(AB)`` for a bipartite state with ``dims = (d_A, d_B)``."""
    rho_ab = check_density_matrix(rho_ab)
    dims = _check_dims(dims, rho_ab.shape[0])
    if len(dims) != 2:
        raise DimensionMismatch("mutual_info expects exactly two subsystems")
    return mutual_info_unchecked(rho_ab, dims)


def mutual_info_unchecked(rho_ab: np.ndarray, dims: Sequence[int]) -> float:
    da, db = dims
    t = rho_ab.reshape(da, db, da, db)
    rho_a = np.einsum("ijkj->ik", t)
    rho_b = np.einsum("ijil->jl", t)
    return entropy_unchecked(rho_a) + entropy_unchecked(rho_b) - entropy_unchecked(rho_ab)


def maximally_entangled(d: int) -> np.ndarray:
    """``sum_i |ii> / sqrt(d)`` as a vector on ``C^d (x) C^d``."""
    if d < 1:
        raise OutOfRange("dimension must be positive")
    psi = np.zeros(d * d, dtype=complex)
    psi[:: d + 1] = 1.0 / np.sqrt(d)
    return psi


def schmidt_state(coeffs) -> np.ndarray:
    """``sum_i sqrt(c_i) |ii>`` for a probability vector of Schmidt weights."""
    c = check_pmf(coeffs)
    d = c.size
    psi = np.zeros(d * d, dtype=complex)
    psi[:: d + 1] = np.sqrt(np.clip(c, 0.0, None))
    return psi


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre matrix with the phase fix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_density_matrix(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = d if rank is None else rank
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
