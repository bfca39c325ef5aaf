"""Closed-form region of the qubit depolarizing channel and the time-division baseline.

The superposition ensemble uses the resource ``sqrt(1-a)|00> + sqrt(a)|11>``,
a uniform bit ``X`` and the encoders ``rho -> X^x rho X^x``. Its rectangle
corner is available in closed form; sweeping ``a`` over ``[0, 1/2]`` traces
the boundary, with ``a = 0`` giving the unassisted capacity and ``a = 1/2``
the entanglement-assisted one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import qnum
from .channels import EB_THRESHOLD, PAULI_X, identity_channel, unitary_channel
from .errors import OutOfRange
from .hull import RateFrontier
from .qnum import TOL_NUM, binary_convolution, h2, shannon_entropy
from .region import EncodingEnsemble, RatePoint

TOL_GAP = 1e-6
INNER_BOUND_NOTE = "achievable inner bound only (channel not entanglement breaking)"


@dataclass(frozen=True)
class DepolParams:
    eps: float
    alpha: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.eps <= 1.0:
            raise OutOfRange(f"eps={self.eps!r} outside [0, 1]")
        if not 0.0 <= self.alpha <= 0.5:
            raise OutOfRange(f"alpha={self.alpha!r} outside [0, 1/2]")

    @property
    def entanglement_breaking(self) -> bool:
        return self.eps >= EB_THRESHOLD - TOL_NUM


def _check_eps(eps: float) -> float:
    if not 0.0 <= eps <= 1.0:
        raise OutOfRange(f"eps={eps!r} outside [0, 1]")
    return float(eps)


def joint_output_spectrum(p: DepolParams) -> np.ndarray:
    """Eigenvalues of ``(id (x) N)`` applied to the two-qubit superposition resource."""
    e, a = p.eps, p.alpha
    disc = e * e / 16.0 - (1.0 - a) * a * e * (1.0 - 0.75 * e) + (1.0 - e) / 4.0
    root = math.sqrt(max(disc, 0.0))
    mid = 0.5 - e / 4.0
    return np.array([a * e / 2.0, (1.0 - a) * e / 2.0, mid - root, mid + root])


def closed_form_point(p: DepolParams) -> RatePoint:
    flip = binary_convolution(p.alpha, p.eps / 2.0)
    spec = np.clip(joint_output_spectrum(p), 0.0, 1.0)
    r = 1.0 - h2(flip)
    rp = h2(p.alpha) + h2(flip) - shannon_entropy(spec / spec.sum())
    # both rates are mutual informations; only round-off can push them below zero
    return RatePoint(max(r, 0.0), max(rp, 0.0))


def unassisted_capacity(eps: float) -> float:
    return closed_form_point(DepolParams(_check_eps(eps), 0.0)).R


def ea_capacity(eps: float) -> float:
    return closed_form_point(DepolParams(_check_eps(eps), 0.5)).Rp


def spc_ensemble(alpha: float) -> EncodingEnsemble:
    """The superposition ensemble with Schmidt weight ``alpha`` and bit-flip encoders."""
    if not 0.0 <= alpha <= 1.0:
        raise OutOfRange(f"alpha={alpha!r} outside [0, 1]")
    return EncodingEnsemble(
        np.array([0.5, 0.5]),
        np.array([1.0 - alpha, alpha]),
        (identity_channel(2), unitary_channel(PAULI_X)),
    )


def _grid(grid, lo: float, hi: float) -> np.ndarray:
    if np.isscalar(grid):
        n = int(grid)
        if n < 1:
            raise OutOfRange("grid size must be positive")
        return np.linspace(lo, hi, n) if n > 1 else np.array([lo])
    g = np.asarray(grid, dtype=float).ravel()
    if g.size == 0:
        raise OutOfRange("empty grid")
    if np.any(g < lo) or np.any(g > hi):
        raise OutOfRange(f"grid values must lie in [{lo}, {hi}]")
    return g


def time_division_frontier(eps: float, grid=65) -> RateFrontier:
    """Points ``((1-l) C, l C_EA)`` for ``l`` in ``grid`` (an int means a uniform grid)."""
    c, c_ea = unassisted_capacity(eps), ea_capacity(eps)
    lam = _grid(grid, 0.0, 1.0)
    pts = np.column_stack([(1.0 - lam) * c, lam * c_ea])
    return RateFrontier(pts, ["time-division"] * len(lam),
                        [{"lambda": float(x)} for x in lam], _annotation(eps))


def spc_frontier(eps: float, grid=512) -> RateFrontier:
    eps = _check_eps(eps)
    alphas = _grid(grid, 0.0, 0.5)
    pts = [closed_form_point(DepolParams(eps, float(a))) for a in alphas]
    return RateFrontier(pts, ["superposition"] * len(pts),
                        [{"alpha": float(a)} for a in alphas], _annotation(eps))


def _annotation(eps: float) -> str:
    return "" if eps >= EB_THRESHOLD - TOL_NUM else INNER_BOUND_NOTE


class GapReport(NamedTuple):
    max_vertical_gap: float
    argmax_alpha: float
    dominated: bool


def gap_report(eps: float, grids: Sequence = (512, 65)) -> GapReport:
    """Largest vertical gap between the superposition hull and the time-division segment.

    ``dominated`` is true when the superposition region never rises more than
    ``1e-6`` bits above time division.
    """
    spc = spc_frontier(eps, grids[0])
    td = time_division_frontier(eps, grids[1])
    # hull minus a line is piecewise linear, so the max sits on a hull vertex
    r = spc.hull[:, 0]
    gaps = spc.hull[:, 1] - td.rp_at(r)
    gaps = np.where(np.isfinite(gaps), gaps, -np.inf)
    k = int(np.argmax(gaps))
    best = float(max(gaps[k], 0.0))
    alpha = spc.params[spc.hull_index[k]]["alpha"]
    return GapReport(best, float(alpha), not best > TOL_GAP)


def write_spc_csv(frontier: RateFrontier, path) -> None:
    rows = [(p["alpha"], pt[0], pt[1]) for p, pt in zip(frontier.params, frontier.points)]
    frontier.write_csv(path, ("alpha", "R", "Rprime"), rows)


def write_td_csv(frontier: RateFrontier, path) -> None:
    rows = [(p["lambda"], pt[0], pt[1]) for p, pt in zip(frontier.params, frontier.points)]
    frontier.write_csv(path, ("lambda", "R", "Rprime"), rows)


def spc_reference_spectrum(p: DepolParams) -> np.ndarray:
    """Spectrum of the same joint state by direct eigendecomposition (ascending)."""
    from .channels import apply_on_factor, depolarizing

    psi = qnum.schmidt_state([1.0 - p.alpha, p.alpha])
    out = apply_on_factor(depolarizing(p.eps), qnum.projector(psi), (2, 2), 1)
    return np.sort(np.linalg.eigvalsh(out))
