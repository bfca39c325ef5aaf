"""Upper-right concave boundary of a union of rate rectangles."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyInput
from .qnum import TOL_NUM
from .region import RatePoint


def _as_points(points) -> np.ndarray:
    pts = np.asarray([tuple(p) for p in points], dtype=float).reshape(-1, 2)
    if pts.shape[0] == 0:
        raise EmptyInput("no rate points given")
    return pts


def hull_indices(points, tol: float = TOL_NUM) -> np.ndarray:
    """Indices of the hull vertices, ordered by increasing ``R``.

    Weakly dominated points are dropped first (ties broken lexicographically
    on ``(R, Rp)``), then the upper hull of the remaining staircase is taken
    with collinear points removed.
    """
    pts = _as_points(points)
    # descending R, then descending Rp, then index for determinism
    order = np.lexsort((np.arange(len(pts)), -pts[:, 1], -pts[:, 0]))
    stair = []
    best_rp = -np.inf
    for i in order:
        if pts[i, 1] > best_rp + tol:
            stair.append(i)
            best_rp = pts[i, 1]
    stair.reverse()

    chain: list[int] = []
    for i in stair:
        while len(chain) >= 2:
            o, a = pts[chain[-2]], pts[chain[-1]]
            b = pts[i]
            cross = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
            # pop a when it sits within tol of the chord o-b (or above it)
            if cross >= -tol * np.hypot(b[0] - o[0], b[1] - o[1]):
                chain.pop()
            else:
                break
        chain.append(i)
    return np.asarray(chain, dtype=int)


def convex_hull_upper(points) -> list[RatePoint]:
    pts = _as_points(points)
    return [RatePoint(float(pts[i, 0]), float(pts[i, 1])) for i in hull_indices(pts)]


def hull_value(hull, r) -> np.ndarray:
    """Largest ``Rp`` in the convexified down-closure of ``hull`` at guaranteed rate ``r``.

    Returns ``nan`` for ``r`` beyond the largest achievable guaranteed rate.
    """
    h = _as_points(hull)
    r = np.asarray(r, dtype=float)
    out = np.interp(r, h[:, 0], h[:, 1])
    out = np.where(r <= h[0, 0], h[0, 1], out)
    return np.where(r > h[-1, 0] + TOL_NUM, np.nan, out)


@dataclass
class RateFrontier:
    """Evaluated corners, their origin labels and the upper-right hull."""

    points: np.ndarray
    sources: list = field(default_factory=list)
    params: list = field(default_factory=list)
    annotation: str = ""

    def __post_init__(self):
        self.points = _as_points(self.points)
        if not self.sources:
            self.sources = [""] * len(self.points)
        idx = hull_indices(self.points)
        self.hull_index = idx
        self.hull = self.points[idx].copy()

    @classmethod
    def from_points(cls, points: Iterable, source: str = "", **kw) -> "RateFrontier":
        pts = _as_points(points)
        return cls(pts, [source] * len(pts), **kw)

    def rp_at(self, r):
        return hull_value(self.hull, r)

    @property
    def max_r(self) -> float:
        return float(self.hull[-1, 0])

    @property
    def max_rp(self) -> float:
        return float(self.hull[0, 1])

    def dominates(self, point: Sequence[float], tol: float = TOL_NUM) -> bool:
        r, rp = point
        v = self.rp_at(r)
        return bool(np.isfinite(v) and v >= rp - tol)

    def write_csv(self, path, header=("R", "Rprime", "source"), rows=None) -> None:
        if rows is None:
            rows = [(p[0], p[1], s) for p, s in zip(self.points, self.sources)]
        write_table(path, header, rows)


def fmt(x) -> str:
    """12 significant digits, positional notation, no negative zero."""
    if isinstance(x, str):
        return x
    x = float(x)
    if x == 0.0:
        return "0"
    return np.format_float_positional(x, precision=12, unique=False, fractional=False, trim="-")


def write_table(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
