"""One test per acceptance criterion; each records a PASS/FAIL line for the terminal summary."""

import json
import math
import time

import numpy as np
import pytest

from ebcap import channels, depol, qnum, region, sweep, verify
from ebcap.cli import main
from ebcap.depol import DepolParams
from ebcap.sweep import SweepConfig

RESULTS = []


def record(num, title, ok, detail):
    line = f"criterion {num} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def h(*p):
    return -sum(x * math.log2(x) for x in p if x > 0)


def test_c1_depolarizing_endpoints():
    t0 = time.perf_counter()
    f = depol.spc_frontier(0.7, 512)
    want_c = 1 - h(0.35, 0.65)
    want_ea = 2 - h(0.475, 0.175, 0.175, 0.175)
    dev = max(abs(f.points[0, 0] - want_c), abs(f.points[0, 1]),
              abs(f.points[-1, 0]), abs(f.points[-1, 1] - want_ea))
    elapsed = time.perf_counter() - t0
    record(1, "depolarizing endpoints", dev < 1e-9 and elapsed < 1,
           f"max deviation {dev:.2e} (tol 1e-9), {elapsed:.2f}s")


def test_c2_report_beats_time_division(tmp_path):
    t0 = time.perf_counter()
    rc = main(["report", "--eps", "0.7", "--out-dir", str(tmp_path), "--grid", "512"])
    gap = json.loads((tmp_path / "gap.json").read_text())
    elapsed = time.perf_counter() - t0
    ok = rc == 0 and gap["dominated"] is False and gap["max_vertical_gap"] > 1e-6 and elapsed < 5
    record(2, "superposition strictly above time division at eps=0.7", ok,
           f"gap {gap['max_vertical_gap']:.6f} bits at alpha={gap['argmax_alpha']:.4f}, "
           f"dominated={gap['dominated']}, {elapsed:.2f}s")


def test_c3_closed_form_vs_numerics():
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(50):
        eps, alpha = float(rng.uniform(2 / 3, 1)), float(rng.uniform(0, 0.5))
        cf = depol.closed_form_point(DepolParams(eps, alpha))
        t = region.rate_triple(channels.depolarizing(eps), depol.spc_ensemble(alpha))
        worst = max(worst, abs(cf.R - t.ixb), abs(cf.Rp - t.ig2b_given_x))
    elapsed = time.perf_counter() - t0
    record(3, "closed form matches numerical rates", worst < 1e-8 and elapsed < 30,
           f"max deviation {worst:.2e} (tol 1e-8), {elapsed:.2f}s")


def test_c4_time_share_interpolates():
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    worst_r = worst_rp = 0.0
    for _ in range(100):
        ch = verify.random_channel(rng, 2, 2)
        e1, e2 = verify.random_ensemble(rng), verify.random_ensemble(rng)
        c1, c2 = region.rectangle_corner(ch, e1), region.rectangle_corner(ch, e2)
        for lam in np.linspace(0, 1, 11):
            c = region.rectangle_corner(ch, region.time_share(e1, e2, float(lam)))
            worst_r = max(worst_r, abs(c.R - ((1 - lam) * c1.R + lam * c2.R)))
            worst_rp = max(worst_rp, abs(c.Rp - ((1 - lam) * c1.Rp + lam * c2.Rp)))
    elapsed = time.perf_counter() - t0
    record(4, "time-shared corner equals interpolated corners",
           max(worst_r, worst_rp) < 1e-8 and elapsed < 120,
           f"max deviation R {worst_r:.2e}, R' {worst_rp:.2e} (tol 1e-8), {elapsed:.2f}s")


def test_c5_trapezoid_equivalence_and_chain_rule():
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    worst_eq = worst_chain = 0.0
    for _ in range(100):
        ch = verify.random_channel(rng, 2, 2)
        ens = verify.random_ensemble(rng)
        _, p1 = region.trapezoid_corners(ch, ens)
        c = region.rectangle_corner(ch, region.relabel_for_trapezoid(ens))
        worst_eq = max(worst_eq, abs(c.R - p1.R), abs(c.Rp - p1.Rp))
        t = region.rate_triple(ch, ens)
        worst_chain = max(worst_chain, abs(t.ixg2b - t.ixb - t.ig2b_given_x))
    elapsed = time.perf_counter() - t0
    record(5, "trapezoid corner via relabelling, chain rule",
           max(worst_eq, worst_chain) < 1e-8 and elapsed < 120,
           f"equivalence {worst_eq:.2e}, chain rule {worst_chain:.2e} (tol 1e-8), {elapsed:.2f}s")


def test_c6_eb_boundary(tmp_path, capsys):
    t0 = time.perf_counter()
    grid = np.linspace(0, 1, 200)
    verdicts = []
    for k, eps in enumerate(grid):
        path = tmp_path / f"dep{k}.json"
        channels.save_channel(channels.depolarizing(float(eps)), path)
        rc = main(["check-eb", "--channel", str(path)])
        verdicts.append(capsys.readouterr().out.splitlines()[0] == "Breaking" and rc == 0)
    verdicts = np.array(verdicts)
    first = int(np.argmax(verdicts)) if verdicts.any() else len(grid)
    step = grid[1] - grid[0]
    ok_shape = verdicts.any() and verdicts[first:].all() and not verdicts[:first].any()
    ok_edge = ok_shape and grid[first] >= 2 / 3 - 1e-12 and grid[first] - 2 / 3 <= step
    elapsed = time.perf_counter() - t0
    record(6, "entanglement-breaking boundary at 2/3", bool(ok_edge) and elapsed < 10,
           f"first Breaking eps {grid[first]:.6f} (grid step {step:.4f}), {elapsed:.2f}s")


def test_c7_mirror_identity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    worst = 0.0
    for d in (2, 3, 4):
        phi = qnum.maximally_entangled(d)
        for _ in range(50):
            u = qnum.random_unitary(d, rng)
            lhs = np.kron(np.eye(d), u) @ phi
            rhs = np.kron(u.T, np.eye(d)) @ phi
            worst = max(worst, float(np.abs(lhs - rhs).max()))
    elapsed = time.perf_counter() - t0
    record(7, "mirror identity", worst < 1e-10 and elapsed < 5,
           f"max entry deviation {worst:.2e} (tol 1e-10), {elapsed:.2f}s")


@pytest.mark.slow
def test_c8_sweep_recovers_closed_form():
    t0 = time.perf_counter()
    cfg = SweepConfig()
    cfg.check_bounds(2)
    f = sweep.frontier_sweep(channels.depolarizing(0.7), cfg)
    ref = depol.spc_frontier(0.7, 512)
    r = np.linspace(0, ref.max_r, 64)
    diff = np.abs(f.rp_at(r) - ref.rp_at(r))
    worst = float(np.max(np.where(np.isfinite(diff), diff, np.inf)))
    elapsed = time.perf_counter() - t0
    record(8, "numerical sweep matches closed-form frontier", worst < 1e-3 and elapsed < 600,
           f"max |Rp gap| {worst:.2e} on 64 R values (tol 1e-3), "
           f"{len(f.points)} corners, {elapsed:.1f}s")


def test_c9_spectrum_degenerations():
    t0 = time.perf_counter()
    worst = 0.0
    for eps in np.linspace(0, 1, 20):
        eps = float(eps)
        for alpha, want in ((0.0, [0, eps / 2, 0, 1 - eps / 2]),
                            (0.5, [eps / 4, eps / 4, eps / 4, 1 - 3 * eps / 4])):
            p = DepolParams(eps, alpha)
            s = depol.joint_output_spectrum(p)
            worst = max(worst, float(np.abs(s - want).max()),
                        float(np.abs(np.sort(s) - depol.spc_reference_spectrum(p)).max()))
    elapsed = time.perf_counter() - t0
    record(9, "spectrum degenerations", worst < 1e-10 and elapsed < 5,
           f"max deviation {worst:.2e} (tol 1e-10), {elapsed:.2f}s")
