"""Randomised property checks behind ``ebcap verify``.

Each check returns the worst deviation seen over its trials; a check passes
when that deviation stays within its tolerance.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

from . import channels, depol, qnum, region
from .channels import KrausChannel
from .depol import DepolParams
from .qnum import TOL_NUM


class PropertyResult(NamedTuple):
    name: str
    worst: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.worst) and self.worst <= self.tol)


def random_channel(rng: np.random.Generator, d_in: int, d_out: int, rank: int | None = None) -> KrausChannel:
    """Random CPTP map from a Haar isometry ``d_in -> d_out (x) rank``."""
    rank = rank or int(rng.integers(1, d_in * d_out + 1))
    # the isometry needs d_out * rank >= d_in
    rank = max(rank, -(-d_in // d_out))
    v = qnum.random_unitary(d_out * rank, rng)[:, :d_in]
    t = v.reshape(d_out, rank, d_in)
    return KrausChannel(d_in, d_out, tuple(t[:, k, :] for k in range(rank)))


def random_ensemble(rng: np.random.Generator, d_a: int = 2, nx: int | None = None,
                    d0: int | None = None, unitary: bool | None = None) -> region.EncodingEnsemble:
    nx = nx or int(rng.integers(1, 4))
    d0 = d0 or int(rng.integers(1, 4))
    px = rng.dirichlet(np.ones(nx))
    schmidt = rng.dirichlet(np.ones(d0))
    if unitary is None:
        unitary = d0 == d_a and bool(rng.integers(0, 2))
    encoders = []
    for _ in range(nx):
        if unitary and d0 == d_a:
            encoders.append(channels.unitary_channel(qnum.random_unitary(d_a, rng)))
        else:
            encoders.append(random_channel(rng, d0, d_a))
    return region.EncodingEnsemble(px, schmidt, tuple(encoders))


def _random_qubit_channel(rng) -> KrausChannel:
    if rng.random() < 0.5:
        return channels.depolarizing(float(rng.uniform(0.0, 1.0)))
    return random_channel(rng, 2, 2)


def _holevo(weights, states) -> float:
    avg = sum(w * s for w, s in zip(weights, states))
    return qnum.entropy_unchecked(avg) - sum(w * qnum.entropy_unchecked(s) for w, s in zip(weights, states))


def average_output(ch: KrausChannel, ens: region.EncodingEnsemble) -> np.ndarray:
    cq = region.output_cq_state(ch, ens)
    d_g, d_b = cq.dims
    return sum(p * qnum.partial_trace(b, (d_g, d_b), [1]) for p, b in zip(cq.weights, cq.blocks))


# -- region checks ----------------------------------------------------------

def check_chain_rule(rng, trials: int) -> PropertyResult:
    worst = 0.0
    for _ in range(trials):
        ch, ens = _random_qubit_channel(rng), random_ensemble(rng)
        t = region.rate_triple(ch, ens)
        worst = max(worst, abs(t.ixg2b - t.ixb - t.ig2b_given_x))
    return PropertyResult("chain rule I(XG2;B) = I(X;B) + I(G2;B|X)", worst, TOL_NUM)


def time_share_deviation(ch, e1, e2, lam) -> tuple[float, float]:
    """Deviation of the time-shared corner from ``(interp R + I(U;B), interp R')``."""
    c1, c2 = region.rectangle_corner(ch, e1), region.rectangle_corner(ch, e2)
    c = region.rectangle_corner(ch, region.time_share(e1, e2, lam))
    i_ub = _holevo([1.0 - lam, lam], [average_output(ch, e1), average_output(ch, e2)])
    r_interp = (1.0 - lam) * c1.R + lam * c2.R
    rp_interp = (1.0 - lam) * c1.Rp + lam * c2.Rp
    return abs(c.R - r_interp - i_ub), abs(c.Rp - rp_interp)


def check_convexity(rng, trials: int) -> PropertyResult:
    worst = 0.0
    for _ in range(trials):
        ch = _random_qubit_channel(rng)
        e1, e2 = random_ensemble(rng), random_ensemble(rng)
        for lam in np.linspace(0.0, 1.0, 11):
            worst = max(worst, *time_share_deviation(ch, e1, e2, float(lam)))
    return PropertyResult("convexity: time-shared corner = interpolation (+ I(U;B) on R)", worst, TOL_NUM)


def check_trapezoid_dominance(rng, trials: int) -> PropertyResult:
    worst = 0.0
    for _ in range(trials):
        ch, ens = _random_qubit_channel(rng), random_ensemble(rng, nx=int(rng.integers(1, 3)),
                                                               d0=int(rng.integers(1, 3)))
        p0, p1 = region.trapezoid_corners(ch, ens)
        rel = region.relabel_for_trapezoid(ens)
        for lam in np.linspace(0.0, 1.0, 5):
            lam = float(lam)
            c = region.rectangle_corner(ch, region.time_share(ens, rel, lam))
            target = ((1 - lam) * p0.R + lam * p1.R, (1 - lam) * p0.Rp + lam * p1.Rp)
            worst = max(worst, target[0] - c.R, target[1] - c.Rp)
    return PropertyResult("trapezoid point P_lambda dominated by a time-shared corner", worst, TOL_NUM)


def check_equivalence(rng, trials: int) -> PropertyResult:
    worst = 0.0
    for _ in range(trials):
        ch, ens = _random_qubit_channel(rng), random_ensemble(rng)
        _, p1 = region.trapezoid_corners(ch, ens)
        c = region.rectangle_corner(ch, region.relabel_for_trapezoid(ens))
        worst = max(worst, abs(c.R - p1.R), abs(c.Rp - p1.Rp))
    return PropertyResult("equivalence: P1 = corner of relabelled ensemble", worst, TOL_NUM)


def check_data_processing(rng, trials: int) -> PropertyResult:
    worst = 0.0
    for _ in range(trials):
        ch, ens = _random_qubit_channel(rng), random_ensemble(rng)
        worst = max(worst, region.rate_triple(ch, ens).ixb - region.holevo_input(ens))
    return PropertyResult("data processing I(X;B) <= I(X;A)", worst, TOL_NUM)


def check_nonnegativity(rng, trials: int) -> PropertyResult:
    worst = 0.0
    for _ in range(trials):
        t = region.rate_triple(_random_qubit_channel(rng), random_ensemble(rng))
        worst = max(worst, -min(t))
    return PropertyResult("rate components non-negative", worst, TOL_NUM)


def mirror_deviation(u: np.ndarray) -> float:
    d = u.shape[0]
    phi = qnum.maximally_entangled(d)
    lhs = np.kron(np.eye(d), u) @ phi
    rhs = np.kron(u.T, np.eye(d)) @ phi
    return float(np.abs(lhs - rhs).max())


def check_mirror(rng, trials: int) -> PropertyResult:
    worst = 0.0
    for d in (2, 3, 4):
        for _ in range(trials):
            worst = max(worst, mirror_deviation(qnum.random_unitary(d, rng)))
    return PropertyResult("mirror identity (1 x U)|Phi> = (U^T x 1)|Phi>", worst, 1e-10)


def check_subadditivity(rng, trials: int) -> PropertyResult:
    worst = 0.0
    for _ in range(trials):
        da, db = (int(v) for v in rng.integers(2, 5, size=2))
        rho = qnum.random_density_matrix(da * db, rng, rank=int(rng.integers(1, da * db + 1)))
        ha = qnum.entropy_vn(qnum.partial_trace(rho, (da, db), [0]))
        hb = qnum.entropy_vn(qnum.partial_trace(rho, (da, db), [1]))
        worst = max(worst, qnum.entropy_vn(rho) - ha - hb)
    return PropertyResult("subadditivity H(AB) <= H(A) + H(B)", worst, TOL_NUM)


# -- depolarizing checks ----------------------------------------------------

def check_formula_vs_numerics(rng, trials: int) -> PropertyResult:
    worst = 0.0
    for _ in range(trials):
        eps = float(rng.uniform(2.0 / 3.0, 1.0))
        alpha = float(rng.uniform(0.0, 0.5))
        cf = depol.closed_form_point(DepolParams(eps, alpha))
        t = region.rate_triple(channels.depolarizing(eps), depol.spc_ensemble(alpha))
        worst = max(worst, abs(cf.R - t.ixb), abs(cf.Rp - t.ig2b_given_x))
    return PropertyResult("closed form = numerical rate triple", worst, TOL_NUM)


def check_spectrum_validity(rng=None, trials: int = 0) -> PropertyResult:
    worst = 0.0
    for eps in np.linspace(0.0, 1.0, 100):
        for alpha in np.linspace(0.0, 0.5, 100):
            s = depol.joint_output_spectrum(DepolParams(float(eps), float(alpha)))
            worst = max(worst, abs(s.sum() - 1.0), -s.min(), s.max() - 1.0)
    return PropertyResult("joint spectrum is a pmf on a 100x100 grid", worst, qnum.TOL_TRACE)


def check_spectrum_oracle(rng, trials: int) -> PropertyResult:
    worst = 0.0
    for _ in range(trials):
        p = DepolParams(float(rng.uniform(0.0, 1.0)), float(rng.uniform(0.0, 0.5)))
        worst = max(worst, float(np.abs(np.sort(depol.joint_output_spectrum(p))
                                        - depol.spc_reference_spectrum(p)).max()))
    return PropertyResult("joint spectrum = direct eigendecomposition", worst, TOL_NUM)


def check_input_entropy(rng, trials: int) -> PropertyResult:
    worst = 0.0
    for _ in range(trials):
        eps, alpha = float(rng.uniform(0, 1)), float(rng.uniform(0, 0.5))
        cq = region.output_cq_state(channels.depolarizing(eps), depol.spc_ensemble(alpha))
        for blk in cq.blocks:
            g = qnum.partial_trace(blk, cq.dims, [0])
            worst = max(worst, float(np.abs(qnum.eigvals_hermitian(g) - [1 - alpha, alpha]).max()))
    return PropertyResult("G2 spectrum (1-a, a) for every x", worst, TOL_NUM)


def check_endpoints_monotone(rng=None, trials: int = 0) -> PropertyResult:
    eps = np.linspace(0.0, 1.0, 101)
    c = np.array([depol.unassisted_capacity(e) for e in eps])
    cea = np.array([depol.ea_capacity(e) for e in eps])
    worst = max(np.diff(c).max(), np.diff(cea).max(), (c - cea).max(), 0.0)
    return PropertyResult("capacities nonincreasing in eps and C <= C_EA", float(worst), TOL_NUM)


def check_r_monotone(rng=None, trials: int = 0) -> PropertyResult:
    worst = 0.0
    for eps in np.linspace(0.0, 1.0, 21):
        r = [depol.closed_form_point(DepolParams(float(eps), float(a))).R for a in np.linspace(0, 0.5, 101)]
        worst = max(worst, float(np.diff(r).max()))
    return PropertyResult("guaranteed rate nonincreasing in alpha", worst, TOL_NUM)


LEMMA_CHECKS: list[Callable] = [
    check_chain_rule, check_convexity, check_trapezoid_dominance, check_equivalence,
    check_data_processing, check_nonnegativity, check_mirror, check_subadditivity,
]
DEPOL_CHECKS: list[Callable] = [
    check_formula_vs_numerics, check_spectrum_validity, check_spectrum_oracle,
    check_input_entropy, check_endpoints_monotone, check_r_monotone,
]
SUITES = {"lemmas": LEMMA_CHECKS, "depol": DEPOL_CHECKS, "all": LEMMA_CHECKS + DEPOL_CHECKS}


def run_suite(suite: str, seed: int, trials: int) -> list[PropertyResult]:
    ss = np.random.SeedSequence(seed)
    checks = SUITES[suite]
    rngs = [np.random.default_rng(s) for s in ss.spawn(len(checks))]
    return [check(rng, trials) for check, rng in zip(checks, rngs)]
