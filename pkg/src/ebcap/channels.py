"""Quantum channels in Kraus form, Choi matrices and the qubit EB certificate."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import qnum
from .errors import (
    DimensionMismatch,
    InvalidChannel,
    InvalidPOVM,
    OutOfRange,
    UnsupportedDimension,
)
from .qnum import TOL_NUM

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

EB_THRESHOLD = 2.0 / 3.0


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """CPTP map ``rho -> sum_i K_i rho K_i^dagger`` with ``K_i`` of shape ``(dim_out, dim_in)``."""

    dim_in: int
    dim_out: int
    kraus_ops: tuple

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.kraus_ops)
        if not ops:
            raise InvalidChannel("Kraus list is empty")
        for k in ops:
            if k.shape != (self.dim_out, self.dim_in):
                raise DimensionMismatch(
                    f"Kraus operator shape {k.shape} != ({self.dim_out}, {self.dim_in})"
                )
        completeness = sum(k.conj().T @ k for k in ops)
        dev = np.abs(completeness - np.eye(self.dim_in)).max()
        if dev > TOL_NUM:
            raise InvalidChannel(f"Kraus operators not trace preserving (deviation {dev:.3g})")
        for k in ops:
            k.setflags(write=False)
        object.__setattr__(self, "kraus_ops", ops)

    @classmethod
    def from_ops(cls, ops: Sequence) -> "KrausChannel":
        ops = [np.asarray(k, dtype=complex) for k in ops]
        if not ops:
            raise InvalidChannel("Kraus list is empty")
        d_out, d_in = ops[0].shape
        return cls(d_in, d_out, tuple(ops))

    def __call__(self, rho):
        return apply(self, rho)


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    """``(id (x) N)(Phi)`` on reference (x) output, normalised to unit trace."""

    matrix: np.ndarray
    dims: tuple


@dataclass(frozen=True, eq=False)
class MeasurePrepareChannel:
    """``rho -> sum_y tr[M_y rho] sigma_y``."""

    povm: tuple
    prep_states: tuple

    def __post_init__(self):
        povm = tuple(np.asarray(m, dtype=complex) for m in self.povm)
        preps = tuple(qnum.check_density_matrix(s) for s in self.prep_states)
        if not povm or len(povm) != len(preps):
            raise InvalidPOVM("need one preparation state per POVM element")
        d = povm[0].shape[0]
        for m in povm:
            if m.shape != (d, d) or not qnum.is_hermitian(m, TOL_NUM):
                raise InvalidPOVM("POVM elements must be Hermitian and share a dimension")
            if np.linalg.eigvalsh(m)[0] < -TOL_NUM:
                raise InvalidPOVM("POVM element is not positive semidefinite")
        if np.abs(sum(povm) - np.eye(d)).max() > TOL_NUM:
            raise InvalidPOVM("POVM elements do not sum to the identity")
        if len({s.shape for s in preps}) != 1:
            raise InvalidPOVM("preparation states must share a dimension")
        object.__setattr__(self, "povm", povm)
        object.__setattr__(self, "prep_states", preps)


class EBVerdict(enum.Enum):
    BREAKING = "Breaking"
    NOT_BREAKING = "NotBreaking"


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel(d, d, (np.eye(d, dtype=complex),))


def unitary_channel(u) -> KrausChannel:
    u = np.asarray(u, dtype=complex)
    return KrausChannel(u.shape[1], u.shape[0], (u,))


def apply(ch: KrausChannel, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (ch.dim_in, ch.dim_in):
        raise DimensionMismatch(f"state of shape {rho.shape} fed to channel with dim_in={ch.dim_in}")
    return sum(k @ rho @ k.conj().T for k in ch.kraus_ops)


def apply_on_factor(ch: KrausChannel, rho, dims: Sequence[int], target: int) -> np.ndarray:
    """Apply ``ch`` to factor ``target`` of a composite state, identity elsewhere."""
    rho = np.asarray(rho, dtype=complex)
    dims = [int(d) for d in dims]
    if not 0 <= target < len(dims):
        raise DimensionMismatch(f"target factor {target} out of range")
    if int(np.prod(dims)) != rho.shape[0] or rho.shape[0] != rho.shape[1]:
        raise DimensionMismatch(f"dims {dims} inconsistent with state shape {rho.shape}")
    if dims[target] != ch.dim_in:
        raise DimensionMismatch(f"factor dim {dims[target]} != channel dim_in {ch.dim_in}")
    left = int(np.prod(dims[:target]))
    right = int(np.prod(dims[target + 1:]))
    out = 0
    for k in ch.kraus_ops:
        big = np.kron(np.kron(np.eye(left), k), np.eye(right))
        out = out + big @ rho @ big.conj().T
    return out


def choi(ch: KrausChannel) -> ChoiMatrix:
    phi = qnum.projector(qnum.maximally_entangled(ch.dim_in))
    mat = apply_on_factor(ch, phi, (ch.dim_in, ch.dim_in), 1)
    return ChoiMatrix(mat, (ch.dim_in, ch.dim_out))


def apply_via_choi(c: ChoiMatrix, rho) -> np.ndarray:
    """Reconstruct the channel action, ``N(rho) = d_in tr_ref[(rho^T (x) 1) J]``."""
    d_in, d_out = c.dims
    rho = np.asarray(rho, dtype=complex)
    m = np.kron(rho.T, np.eye(d_out)) @ c.matrix
    return d_in * qnum.partial_trace(m, (d_in, d_out), [1])


def partial_transpose(m, dims: Sequence[int], sys: int = 1) -> np.ndarray:
    da, db = dims
    t = np.asarray(m).reshape(da, db, da, db)
    t = t.transpose(2, 1, 0, 3) if sys == 0 else t.transpose(0, 3, 2, 1)
    return t.reshape(da * db, da * db)


def min_pt_eigenvalue(ch: KrausChannel) -> float:
    c = choi(ch)
    pt = partial_transpose(c.matrix, c.dims, 1)
    return float(np.linalg.eigvalsh(pt)[0])


def is_entanglement_breaking_qubit(ch: KrausChannel) -> EBVerdict:
    """Certify a qubit channel as entanglement breaking via PPT of its Choi matrix.

    The Choi matrix of an EB channel is separable, and on 2x2 (and 2x3)
    systems separability is equivalent to a positive partial transpose, so
    the answer is exact there. Other dimensions raise
    :class:`UnsupportedDimension` instead of guessing.
    """
    if (ch.dim_in, ch.dim_out) != (2, 2):
        raise UnsupportedDimension(
            f"PPT test only decides qubit->qubit channels, got {ch.dim_in}->{ch.dim_out}"
        )
    if min_pt_eigenvalue(ch) >= -TOL_NUM:
        return EBVerdict.BREAKING
    return EBVerdict.NOT_BREAKING


def depolarizing(eps: float) -> KrausChannel:
    """Qubit depolarizing channel ``(1-eps) rho + eps 1/2`` as a Pauli mixture."""
    if not 0.0 <= eps <= 1.0:
        raise OutOfRange(f"depolarizing parameter {eps!r} outside [0, 1]")
    a = np.sqrt(max(1.0 - 3.0 * eps / 4.0, 0.0))
    b = np.sqrt(eps / 4.0)
    return KrausChannel(2, 2, (a * PAULI_I, b * PAULI_X, b * PAULI_Y, b * PAULI_Z))


def measure_prepare_to_kraus(mp: MeasurePrepareChannel) -> KrausChannel:
    """Unit-rank Kraus form ``sqrt(s_j) |v_j><m_k|`` of a measure-and-prepare channel."""
    ops = []
    for m, sigma in zip(mp.povm, mp.prep_states):
        mv, mvec = np.linalg.eigh(m)
        sv, svec = np.linalg.eigh(sigma)
        for a, u in zip(mv, mvec.T):
            for s, v in zip(sv, svec.T):
                # null pieces contribute nothing to the completeness sum
                if a > 1e-14 and s > 1e-14:
                    ops.append(np.sqrt(s * a) * np.outer(v, u.conj()))
    d_in = mp.povm[0].shape[0]
    d_out = mp.prep_states[0].shape[0]
    return KrausChannel(d_in, d_out, tuple(ops))


# -- channel files ---------------------------------------------------------

def channel_to_dict(ch: KrausChannel) -> dict:
    return {
        "dim_in": ch.dim_in,
        "dim_out": ch.dim_out,
        "kraus": [
            [[[float(z.real), float(z.imag)] for z in row] for row in k]
            for k in ch.kraus_ops
        ],
    }


def channel_from_dict(data: dict) -> KrausChannel:
    try:
        d_in = int(data["dim_in"])
        d_out = int(data["dim_out"])
        ops = [
            np.array([[complex(re, im) for re, im in row] for row in op], dtype=complex)
            for op in data["kraus"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidChannel(f"malformed channel description: {exc}") from exc
    for op in ops:
        if op.shape != (d_out, d_in):
            raise DimensionMismatch(f"Kraus operator shape {op.shape} != ({d_out}, {d_in})")
    return KrausChannel(d_in, d_out, tuple(ops))


def load_channel(path) -> KrausChannel:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidChannel(f"{path}: not valid JSON ({exc})") from exc
    return channel_from_dict(data)


def save_channel(ch: KrausChannel, path) -> None:
    Path(path).write_text(json.dumps(channel_to_dict(ch), indent=1) + "\n")
