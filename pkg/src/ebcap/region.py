"""Encoding ensembles and the rate functionals of the unreliable-assistance region.

An ensemble fixes a classical variable ``X ~ px``, a pure resource
``sum_i sqrt(schmidt_i) |i>_G1 |i>_G2`` and one encoding channel ``G1 -> A``
per symbol. Sending ``A`` through a channel ``A -> B`` leaves a cq state whose
blocks live on ``G2 (x) B``. The region is the union over ensembles of the
rectangles ``R <= I(X;B)``, ``R' <= I(G2;B|X)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import qnum
from .channels import KrausChannel
from .errors import DimensionMismatch, InvalidState, OutOfRange
from .qnum import TOL_TRACE


@dataclass(frozen=True, eq=False)
class EncodingEnsemble:
    px: np.ndarray
    schmidt: np.ndarray
    encoders: tuple

    def __post_init__(self):
        px = qnum.check_pmf(self.px)
        schmidt = qnum.check_pmf(self.schmidt, TOL_TRACE)
        encoders = tuple(self.encoders)
        if len(encoders) != px.size:
            raise DimensionMismatch(f"{len(encoders)} encoders for an alphabet of size {px.size}")
        d0 = schmidt.size
        d_a = encoders[0].dim_out
        for f in encoders:
            if not isinstance(f, KrausChannel):
                raise TypeError("encoders must be KrausChannel instances")
            if f.dim_in != d0 or f.dim_out != d_a:
                raise DimensionMismatch(
                    f"encoder {f.dim_in}->{f.dim_out} does not map G1 (dim {d0}) to A (dim {d_a})"
                )
        object.__setattr__(self, "px", px)
        object.__setattr__(self, "schmidt", schmidt)
        object.__setattr__(self, "encoders", encoders)

    @property
    def alphabet_size(self) -> int:
        return self.px.size

    @property
    def resource_dim(self) -> int:
        return self.schmidt.size

    @property
    def input_dim(self) -> int:
        return self.encoders[0].dim_out

    def resource_state(self) -> np.ndarray:
        """The pure resource as a vector on ``G1 (x) G2``."""
        return qnum.schmidt_state(self.schmidt)


@dataclass(frozen=True, eq=False)
class CQState:
    """``sum_x p(x) |x><x| (x) block_x`` with every block on ``G2 (x) B``."""

    weights: np.ndarray
    blocks: tuple
    dims: tuple


class RatePoint(NamedTuple):
    R: float
    Rp: float


class RateTriple(NamedTuple):
    ixb: float
    ig2b_given_x: float
    ixg2b: float


def _block_states(ch_ops: Sequence[np.ndarray], schmidt: np.ndarray,
                  encoder_ops: Sequence[Sequence[np.ndarray]]) -> list[np.ndarray]:
    # Rows of each column-stacked vector index G2, columns index A (then B).
    root = np.sqrt(np.clip(schmidt, 0.0, None))
    blocks = []
    for ops in encoder_ops:
        vecs = []
        for k in ops:
            m = root[:, None] * k.T
            for n in ch_ops:
                vecs.append((m @ n.T).reshape(-1))
        v = np.stack(vecs, axis=1)
        blocks.append(v @ v.conj().T)
    return blocks


def _spectrum(m: np.ndarray) -> np.ndarray:
    return np.clip(np.linalg.eigvalsh(m), 0.0, 1.0)


def _entropy(p: np.ndarray) -> float:
    p = p[p > 0.0]
    h = float(-np.sum(p * np.log2(p)))
    return h if h > 0.0 else 0.0


def _triple_from_blocks(px: np.ndarray, blocks: Sequence[np.ndarray], d_g: int,
                        d_b: int) -> RateTriple:
    rho_b, rho_g, spec_b, spec_g, spec_gb = [], [], [], [], []
    for p, blk in zip(px, blocks):
        t = blk.reshape(d_g, d_b, d_g, d_b)
        b = np.einsum("ijil->jl", t)
        g = np.einsum("ijkj->ik", t)
        rho_b.append(b)
        rho_g.append(g)
        spec_b.append(_spectrum(b))
        spec_g.append(_spectrum(g))
        spec_gb.append(_spectrum(blk))
    avg_b = sum(p * b for p, b in zip(px, rho_b))
    h_avg_b = _entropy(_spectrum(avg_b))

    # Holevo quantity of the output ensemble
    ixb = h_avg_b - float(sum(p * _entropy(s) for p, s in zip(px, spec_b)))
    ig2b_x = float(sum(
        p * (_entropy(sg) + _entropy(sb) - _entropy(sgb))
        for p, sg, sb, sgb in zip(px, spec_g, spec_b, spec_gb)
    ))
    # (X,G2) vs B from the block-diagonal joint states; the spectrum of a
    # block-diagonal operator is the union of its scaled block spectra
    h_xg = _entropy(np.concatenate([p * s for p, s in zip(px, spec_g)]))
    h_xgb = _entropy(np.concatenate([p * s for p, s in zip(px, spec_gb)]))
    ixg2b = h_xg + h_avg_b - h_xgb
    return RateTriple(ixb, ig2b_x, ixg2b)


def _check_compatible(ch: KrausChannel, ens: EncodingEnsemble) -> None:
    if ch.dim_in != ens.input_dim:
        raise DimensionMismatch(
            f"channel input dim {ch.dim_in} != encoder output dim {ens.input_dim}"
        )


def output_cq_state(ch: KrausChannel, ens: EncodingEnsemble) -> CQState:
    _check_compatible(ch, ens)
    blocks = _block_states(ch.kraus_ops, ens.schmidt, [f.kraus_ops for f in ens.encoders])
    return CQState(ens.px, tuple(blocks), (ens.resource_dim, ch.dim_out))


def rate_triple(ch: KrausChannel, ens: EncodingEnsemble) -> RateTriple:
    """``(I(X;B), I(G2;B|X), I(X G2;B))`` in bits for the output cq state."""
    cq = output_cq_state(ch, ens)
    return _triple_from_blocks(cq.weights, cq.blocks, *cq.dims)


def rectangle_corner(ch: KrausChannel, ens: EncodingEnsemble) -> RatePoint:
    t = rate_triple(ch, ens)
    return RatePoint(t.ixb, t.ig2b_given_x)


def trapezoid_corners(ch: KrausChannel, ens: EncodingEnsemble) -> tuple[RatePoint, RatePoint]:
    t = rate_triple(ch, ens)
    return RatePoint(t.ixb, t.ig2b_given_x), RatePoint(0.0, t.ixg2b)


def relabel_for_trapezoid(ens: EncodingEnsemble) -> EncodingEnsemble:
    """Move the classical variable into the receiver's resource.

    The new resource is ``sum_x sqrt(p(x)) |x>|x> (x) |phi>`` on
    ``(X', G1) (x) (X, G2)`` and the single encoder reads ``X'`` in the
    computational basis before applying ``F^(x)``. Bob's enlarged resource
    then holds ``X`` as an orthogonal flag next to ``G2``, so the rectangle of
    the relabelled ensemble has corner ``(0, I(X G2;B))``.
    """
    nx = ens.alphabet_size
    d0 = ens.resource_dim
    schmidt = np.kron(ens.px, ens.schmidt)
    ops = []
    for x, f in enumerate(ens.encoders):
        bra = np.zeros((1, nx))
        bra[0, x] = 1.0
        ops.extend(np.kron(bra, k) for k in f.kraus_ops)
    enc = KrausChannel(nx * d0, ens.input_dim, tuple(ops))
    return EncodingEnsemble(np.array([1.0]), schmidt, (enc,))


def time_share(ens1: EncodingEnsemble, ens2: EncodingEnsemble, lam: float) -> EncodingEnsemble:
    """Time-sharing ensemble with ``X' = (X, U)`` and ``U`` picking ``ens2`` with probability ``lam``.

    The resource is the product of both resources; each branch discards the
    half it does not use before encoding.
    """
    if not 0.0 <= lam <= 1.0:
        raise OutOfRange(f"time-sharing weight {lam!r} outside [0, 1]")
    if ens1.input_dim != ens2.input_dim:
        raise DimensionMismatch("ensembles target different channel input dimensions")
    d1, d2 = ens1.resource_dim, ens2.resource_dim
    d_a = ens1.input_dim
    px = np.concatenate([(1.0 - lam) * ens1.px, lam * ens2.px])
    schmidt = np.kron(ens1.schmidt, ens2.schmidt)
    encoders = []
    for f in ens1.encoders:
        ops = [np.kron(k, e[None, :]) for k in f.kraus_ops for e in np.eye(d2)]
        encoders.append(KrausChannel(d1 * d2, d_a, tuple(ops)))
    for f in ens2.encoders:
        ops = [np.kron(e[None, :], k) for k in f.kraus_ops for e in np.eye(d1)]
        encoders.append(KrausChannel(d1 * d2, d_a, tuple(ops)))
    return EncodingEnsemble(px, schmidt, tuple(encoders))


def holevo_input(ens: EncodingEnsemble) -> float:
    """``I(X;A)`` of the encoded (pre-channel) ensemble."""
    from .channels import identity_channel

    return rate_triple(identity_channel(ens.input_dim), ens).ixb


def cq_joint_matrix(cq: CQState, which: str = "XGB") -> np.ndarray:
    """Explicit block-diagonal joint operator of a cq state (for cross-checks).

    ``which`` selects ``"XGB"`` (flags, G2, B) or ``"XB"`` (flags, B).
    """
    from scipy.linalg import block_diag

    d_g, d_b = cq.dims
    mats = []
    for p, blk in zip(cq.weights, cq.blocks):
        if which == "XGB":
            mats.append(p * blk)
        elif which == "XB":
            mats.append(p * qnum.partial_trace(blk, (d_g, d_b), [1]))
        else:
            raise ValueError(f"unknown joint selection {which!r}")
    return block_diag(*mats)


def check_cq_state(cq: CQState) -> None:
    qnum.check_pmf(cq.weights)
    for blk in cq.blocks:
        try:
            qnum.check_density_matrix(blk)
        except InvalidState as exc:
            raise InvalidState(f"cq block invalid: {exc}") from exc
