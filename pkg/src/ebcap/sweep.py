"""Numerical sweep of the rate region for an arbitrary channel.

The union over ensembles is discretised in two phases. A structured grid
pairs Schmidt vectors with tuples of encoder unitaries (Euler angles for
qubit-to-qubit encoders, truncated Weyl operators otherwise). Then, for each
weight ``w`` of a weighted-sum scalarisation ``w R + (1 - w) R'``, the best
grid point and a set of seeded random starts are polished by derivative-free
coordinate ascent. Every evaluated corner is kept; the frontier is their
upper-right hull.

Work is split into independent tasks whose results are merged in task order,
so the output is identical for any worker count.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Optional

import numpy as np
from scipy.linalg import expm

from .channels import KrausChannel
from .errors import BudgetExceeded, InvalidConfig
from .hull import RateFrontier
from .region import EncodingEnsemble, _block_states, _triple_from_blocks

GRID_CHUNK = 256


@dataclass
class SweepConfig:
    alphabet_size: int = 2
    schmidt_dim: int = 2
    schmidt_grid: int = 33
    euler_grid: tuple = (3, 2, 2)
    max_encoder_combos: int = 2000
    weights: int = 33
    restarts: int = 8
    rounds: int = 8
    angle_step: float = 0.1
    simplex_step: float = 0.05
    shrink: float = 0.5
    seed: int = 0
    max_evaluations: int = 500_000
    min_points: int = 1
    workers: Optional[int] = None

    def __post_init__(self):
        self.euler_grid = tuple(int(v) for v in self.euler_grid)
        if len(self.euler_grid) != 3 or min(self.euler_grid) < 1:
            raise InvalidConfig("euler_grid needs three positive counts (theta, phi, lambda)")
        for name in ("alphabet_size", "schmidt_dim", "schmidt_grid", "max_encoder_combos",
                     "weights", "max_evaluations", "min_points"):
            if int(getattr(self, name)) < 1:
                raise InvalidConfig(f"{name} must be a positive integer")
            setattr(self, name, int(getattr(self, name)))
        for name in ("restarts", "rounds"):
            if int(getattr(self, name)) < 0:
                raise InvalidConfig(f"{name} must be non-negative")
            setattr(self, name, int(getattr(self, name)))
        if not (self.angle_step > 0 and self.simplex_step > 0 and 0 < self.shrink < 1):
            raise InvalidConfig("steps must be positive and shrink in (0, 1)")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidConfig("seed must fit in 64 bits")
        self.seed = int(self.seed)
        if self.workers is not None and int(self.workers) < 1:
            raise InvalidConfig("workers must be positive")

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidConfig(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**data)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, InvalidConfig):
                raise
            raise InvalidConfig(str(exc)) from exc

    def to_dict(self) -> dict:
        d = asdict(self)
        d["euler_grid"] = list(self.euler_grid)
        return d

    def check_bounds(self, d_a: int) -> None:
        """Alphabet and resource sizes permitted by the cardinality bounds."""
        if self.alphabet_size > d_a * d_a + 1:
            raise InvalidConfig(f"alphabet_size {self.alphabet_size} exceeds d_A^2+1 = {d_a * d_a + 1}")
        if self.schmidt_dim > d_a * (d_a * d_a + 1):
            raise InvalidConfig(f"schmidt_dim {self.schmidt_dim} exceeds d_A(d_A^2+1)")


def load_config(path) -> SweepConfig:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidConfig(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise InvalidConfig("config must be a JSON object")
    return SweepConfig.from_dict(data)


# -- parametrisation -------------------------------------------------------

def euler_unitary(theta: float, phi: float, lam: float) -> np.ndarray:
    """``Rz(phi) Ry(theta) Rz(lam)``."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([
        [c * np.exp(-0.5j * (phi + lam)), -s * np.exp(-0.5j * (phi - lam))],
        [s * np.exp(0.5j * (phi - lam)), c * np.exp(0.5j * (phi + lam))],
    ])


def weyl_operators(d: int) -> list[np.ndarray]:
    w = np.exp(2j * np.pi / d)
    shift = np.roll(np.eye(d), 1, axis=0)
    clock = np.diag(w ** np.arange(d))
    return [np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b)
            for a in range(d) for b in range(d)]


def _hermitian(h: np.ndarray, d: int) -> np.ndarray:
    m = np.zeros((d, d), dtype=complex)
    m[np.diag_indices(d)] = h[:d]
    iu = np.triu_indices(d, 1)
    k = len(iu[0])
    m[iu] = h[d:d + k] + 1j * h[d + k:d + 2 * k]
    return m + np.triu(m, 1).conj().T


@dataclass
class _Layout:
    """Maps a flat coordinate vector (plus fixed base unitaries) to an ensemble."""

    nx: int
    d0: int
    d_a: int
    mode: str = field(init=False)
    dil: int = field(init=False)

    def __post_init__(self):
        if self.d0 == 2 and self.d_a == 2:
            self.mode, self.dil = "euler", 2
        elif self.d0 <= self.d_a:
            self.mode, self.dil = "isometry", self.d_a
        else:
            self.mode, self.dil = "stinespring", self.d_a * math.ceil(self.d0 / self.d_a)

    @property
    def n_px(self) -> int:
        return self.nx if self.nx > 1 else 0

    @property
    def n_schmidt(self) -> int:
        return self.d0 if self.d0 > 1 else 0

    @property
    def n_enc(self) -> int:
        return 3 if self.mode == "euler" else self.dil * self.dil

    @property
    def size(self) -> int:
        return self.n_px + self.n_schmidt + self.nx * self.n_enc

    def steps(self, angle: float, simplex: float) -> np.ndarray:
        s = np.full(self.size, angle)
        s[: self.n_px + self.n_schmidt] = simplex
        return s

    def _simplex(self, raw: np.ndarray) -> np.ndarray:
        w = np.clip(raw, 0.0, None)
        tot = w.sum()
        return w / tot if tot > 0 else np.full(raw.size, 1.0 / raw.size)

    def unpack(self, vec: np.ndarray, bases) -> tuple:
        i = 0
        px = self._simplex(vec[: self.n_px]) if self.n_px else np.array([1.0])
        i += self.n_px
        schmidt = self._simplex(vec[i:i + self.n_schmidt]) if self.n_schmidt else np.array([1.0])
        i += self.n_schmidt
        encoders = []
        for x in range(self.nx):
            c = vec[i:i + self.n_enc]
            i += self.n_enc
            if self.mode == "euler":
                encoders.append([euler_unitary(*c)])
                continue
            u = bases[x] @ expm(1j * _hermitian(c, self.dil)) if np.any(c) else bases[x]
            v = u[:, : self.d0]
            if self.mode == "isometry":
                encoders.append([v])
            else:
                d_e = self.dil // self.d_a
                t = v.reshape(self.d_a, d_e, self.d0)
                encoders.append([t[:, e, :] for e in range(d_e)])
        return px, schmidt, encoders


def _evaluate(layout: _Layout, ch_ops, d_b: int, vec: np.ndarray, bases) -> tuple[float, float]:
    px, schmidt, enc = layout.unpack(vec, bases)
    blocks = _block_states(ch_ops, schmidt, enc)
    t = _triple_from_blocks(px, blocks, layout.d0, d_b)
    return t.ixb, t.ig2b_given_x


# -- tasks -----------------------------------------------------------------

def _grid_task(args):
    layout, ch_ops, d_b, cands = args
    return [_evaluate(layout, ch_ops, d_b, v, b) for v, b in cands]


def _refine_task(args):
    """Coordinate ascent on ``w R + (1-w) R'`` with a fixed evaluation schedule."""
    layout, ch_ops, d_b, vec, bases, w, rounds, steps, shrink = args
    vec = np.array(vec, dtype=float)
    best = _evaluate(layout, ch_ops, d_b, vec, bases)
    score = w * best[0] + (1 - w) * best[1]
    trail = [(best, vec.copy())]
    step = np.array(steps, dtype=float)
    for _ in range(rounds):
        for i in range(vec.size):
            cand_scores = []
            for sgn in (1.0, -1.0):
                v = vec.copy()
                v[i] += sgn * step[i]
                r = _evaluate(layout, ch_ops, d_b, v, bases)
                trail.append((r, v))
                cand_scores.append((w * r[0] + (1 - w) * r[1], sgn))
            s, sgn = max(cand_scores)
            if s > score:
                score = s
                vec[i] += sgn * step[i]
        step *= shrink
    return trail


def _worker_count(cfg: SweepConfig) -> int:
    n = cfg.workers or (os.cpu_count() or 1)
    cap = os.environ.get("EBCAP_THREADS")
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return max(1, n)


def _run(fn, tasks: list, workers: int) -> list:
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(fn, tasks))


def _schmidt_grid(layout: _Layout, n: int) -> list[np.ndarray]:
    d0 = layout.d0
    if d0 == 1:
        return [np.empty(0)]
    if d0 == 2:
        # denser near a product resource, where the boundary turns steeply
        a = np.unique(np.concatenate([np.linspace(0.0, 0.5, n), 0.5 * np.linspace(0.0, 1.0, n) ** 3 / 4]))
        return [np.array([1.0 - x, x]) for x in a]
    # Schmidt vectors with nonincreasing entries on a lattice of spacing 1/(2 d0),
    # evenly thinned to at most n of them
    out = [np.array(p, dtype=float) / (2 * d0) for p in _partitions(2 * d0, d0)]
    if len(out) > n:
        out = [out[k] for k in np.linspace(0, len(out) - 1, n).round().astype(int)]
    return out


def _partitions(total: int, parts: int, cap: int | None = None):
    cap = total if cap is None else cap
    if parts == 1:
        if total <= cap:
            yield (total,)
        return
    for first in range(min(total, cap), -1, -1):
        for rest in _partitions(total - first, parts - 1, first):
            yield (first,) + rest


def _encoder_grid(layout: _Layout, cfg: SweepConfig) -> list:
    """Candidate encoders as (coordinates, base) pairs."""
    if layout.mode == "euler":
        nt, nphi, nl = cfg.euler_grid
        thetas = np.linspace(0.0, np.pi, nt)
        phis = np.linspace(0.0, 2 * np.pi, nphi, endpoint=False)
        lams = np.linspace(0.0, 2 * np.pi, nl, endpoint=False)
        return [(np.array([t, p, l]), None) for t in thetas for p in phis for l in lams]
    zero = np.zeros(layout.n_enc)
    return [(zero, w) for w in weyl_operators(layout.dil)]


def _structured_candidates(layout: _Layout, cfg: SweepConfig, rng) -> list:
    encs = _encoder_grid(layout, cfg)
    combos = list(itertools.combinations_with_replacement(range(len(encs)), layout.nx))
    if len(combos) > cfg.max_encoder_combos:
        keep = np.sort(rng.choice(len(combos), cfg.max_encoder_combos, replace=False))
        combos = [combos[k] for k in keep]
    px = np.full(layout.n_px, 1.0 / layout.nx) if layout.n_px else np.empty(0)
    cands = []
    for s in _schmidt_grid(layout, cfg.schmidt_grid):
        for combo in combos:
            vec = np.concatenate([px, s] + [encs[k][0] for k in combo])
            bases = None if layout.mode == "euler" else tuple(encs[k][1] for k in combo)
            cands.append((vec, bases))
    return cands


def _random_candidate(layout: _Layout, rng: np.random.Generator):
    from .qnum import random_unitary

    parts = []
    if layout.n_px:
        parts.append(rng.dirichlet(np.ones(layout.nx)))
    if layout.n_schmidt:
        parts.append(rng.dirichlet(np.ones(layout.d0)))
    if layout.mode == "euler":
        for _ in range(layout.nx):
            parts.append(rng.uniform([0, 0, 0], [np.pi, 2 * np.pi, 2 * np.pi]))
        bases = None
    else:
        parts.append(np.zeros(layout.nx * layout.n_enc))
        bases = tuple(random_unitary(layout.dil, rng) for _ in range(layout.nx))
    return np.concatenate(parts), bases


def layout_for(ch: KrausChannel, cfg: SweepConfig) -> _Layout:
    return _Layout(cfg.alphabet_size, cfg.schmidt_dim, ch.dim_in)


def frontier_sweep(ch: KrausChannel, cfg: SweepConfig | None = None) -> RateFrontier:
    """Sample rectangle corners of ``ch`` and return them with their hull.

    Deterministic for a fixed ``cfg.seed``. Raises :class:`BudgetExceeded`
    when ``cfg.max_evaluations`` stops the sweep before ``cfg.min_points``
    corners were collected.
    """
    cfg = cfg or SweepConfig()
    cfg.check_bounds(ch.dim_in)
    layout = layout_for(ch, cfg)
    ch_ops = tuple(np.asarray(k) for k in ch.kraus_ops)
    d_b = ch.dim_out
    workers = _worker_count(cfg)
    ss = np.random.SeedSequence(cfg.seed)
    grid_rng, restart_rng = (np.random.default_rng(s) for s in ss.spawn(2))

    budget = cfg.max_evaluations
    cands = _structured_candidates(layout, cfg, grid_rng)
    truncated = len(cands) > budget
    cands = cands[:budget]
    budget -= len(cands)
    chunks = [cands[i:i + GRID_CHUNK] for i in range(0, len(cands), GRID_CHUNK)]
    results = _run(_grid_task, [(layout, ch_ops, d_b, c) for c in chunks], workers)
    values = [r for chunk in results for r in chunk]

    points = list(values)
    sources = ["grid"] * len(values)
    params = list(cands)

    weights = np.linspace(0.0, 1.0, cfg.weights) if cfg.weights > 1 else np.array([0.5])
    steps = layout.steps(cfg.angle_step, cfg.simplex_step)
    per_task = 1 + 2 * layout.size * cfg.rounds
    tasks, labels = [], []
    if values:
        arr = np.asarray(values)
        for w in weights:
            k = int(np.argmax(w * arr[:, 0] + (1 - w) * arr[:, 1]))
            tasks.append((layout, ch_ops, d_b, cands[k][0], cands[k][1], float(w),
                          cfg.rounds, steps, cfg.shrink))
            labels.append("refine")
    for j in range(cfg.restarts):
        vec, bases = _random_candidate(layout, restart_rng)
        w = float(weights[j % len(weights)])
        tasks.append((layout, ch_ops, d_b, vec, bases, w, cfg.rounds, steps, cfg.shrink))
        labels.append("restart")
    n_fit = min(len(tasks), budget // per_task)
    truncated = truncated or n_fit < len(tasks)
    tasks, labels = tasks[:n_fit], labels[:n_fit]

    for task, label, trail in zip(tasks, labels, _run(_refine_task, tasks, workers)):
        bases = task[4]
        for r, v in trail:
            points.append(r)
            sources.append(label)
            params.append((v, bases))

    if len(points) < cfg.min_points:
        raise BudgetExceeded(
            f"collected {len(points)} corners, need {cfg.min_points}"
            + (f" (evaluation cap {cfg.max_evaluations} reached)" if truncated else "")
        )
    frontier = RateFrontier(np.asarray(points), sources, params)
    frontier.layout = layout
    return frontier


def ensemble_from_params(layout: _Layout, vec, bases) -> EncodingEnsemble:
    px, schmidt, enc = layout.unpack(np.asarray(vec, dtype=float), bases)
    return EncodingEnsemble(
        px, schmidt,
        tuple(KrausChannel(layout.d0, layout.d_a, tuple(ops)) for ops in enc),
    )


def _cjson(m) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def hull_vertices_record(frontier: RateFrontier) -> list[dict]:
    """Full ensemble description of every hull vertex of a sweep result."""
    layout = frontier.layout
    out = []
    for k in frontier.hull_index:
        vec, bases = frontier.params[k]
        ens = ensemble_from_params(layout, vec, bases)
        out.append({
            "R": float(frontier.points[k, 0]),
            "Rprime": float(frontier.points[k, 1]),
            "source": frontier.sources[k],
            "px": [float(p) for p in ens.px],
            "schmidt": [float(s) for s in ens.schmidt],
            "encoders": [[_cjson(op) for op in f.kraus_ops] for f in ens.encoders],
        })
    return out
