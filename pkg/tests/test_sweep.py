import numpy as np
import pytest

from ebcap import channels, depol, region, sweep
from ebcap.errors import BudgetExceeded, InvalidConfig
from ebcap.sweep import SweepConfig
from ebcap.verify import random_channel

SMALL = dict(schmidt_grid=9, euler_grid=(3, 2, 2), weights=9, restarts=2, rounds=4)


def test_euler_unitary_is_unitary():
    for args in [(0, 0, 0), (0.3, 1.2, 2.5), (np.pi, np.pi / 2, 0)]:
        u = sweep.euler_unitary(*args)
        assert np.abs(u.conj().T @ u - np.eye(2)).max() < 1e-12


def test_weyl_operators_orthogonal():
    ops = sweep.weyl_operators(3)
    assert len(ops) == 9
    gram = np.array([[np.trace(a.conj().T @ b) for b in ops] for a in ops])
    assert np.abs(gram - 3 * np.eye(9)).max() < 1e-10


def test_identity_channel_reaches_both_capacities():
    f = sweep.frontier_sweep(channels.identity_channel(2), SweepConfig(**SMALL))
    assert f.rp_at(1.0) == pytest.approx(0.0, abs=1e-3)
    assert f.max_rp == pytest.approx(2.0, abs=1e-3)
    assert f.max_r == pytest.approx(1.0, abs=1e-3)
    # guaranteed and opportunistic rate together never beat 2 bits
    assert np.all(f.points.sum(axis=1) <= 2 + 1e-8)


def test_completely_depolarizing_gives_origin():
    f = sweep.frontier_sweep(channels.depolarizing(1.0), SweepConfig(**SMALL))
    assert np.abs(f.hull).max() < 1e-8


def test_corners_are_achievable(rng):
    ch = random_channel(rng, 2, 2)
    f = sweep.frontier_sweep(ch, SweepConfig(**SMALL))
    for k in f.hull_index:
        ens = sweep.ensemble_from_params(f.layout, *f.params[k])
        assert np.allclose(region.rectangle_corner(ch, ens), f.points[k], atol=1e-10)


def test_sweep_inside_known_region():
    f = sweep.frontier_sweep(channels.depolarizing(0.7), SweepConfig(**SMALL))
    spc = depol.spc_frontier(0.7, 512)
    assert np.all(f.points[:, 0] <= depol.unassisted_capacity(0.7) + 1e-8)
    assert np.all(f.points[:, 1] <= depol.ea_capacity(0.7) + 1e-8)
    r = np.linspace(0, spc.max_r, 32)
    assert np.abs(f.rp_at(r) - spc.rp_at(r)).max() < 5e-3


def test_deterministic_and_worker_independent():
    ch = channels.depolarizing(0.8)
    a = sweep.frontier_sweep(ch, SweepConfig(seed=3, workers=1, **SMALL))
    b = sweep.frontier_sweep(ch, SweepConfig(seed=3, workers=1, **SMALL))
    c = sweep.frontier_sweep(ch, SweepConfig(seed=3, workers=2, **SMALL))
    assert np.array_equal(a.points, b.points) and np.array_equal(a.points, c.points)
    assert a.sources == c.sources


def test_thread_env_cap(monkeypatch):
    monkeypatch.setenv("EBCAP_THREADS", "1")
    assert sweep._worker_count(SweepConfig(workers=4)) == 1


def test_budget_exceeded():
    cfg = SweepConfig(max_evaluations=10, min_points=50, **SMALL)
    with pytest.raises(BudgetExceeded):
        sweep.frontier_sweep(channels.depolarizing(0.8), cfg)
    f = sweep.frontier_sweep(channels.depolarizing(0.8), SweepConfig(max_evaluations=10, **SMALL))
    assert len(f.points) == 10


def test_config_validation():
    with pytest.raises(InvalidConfig):
        SweepConfig.from_dict({"alphabet_size": 2, "bogus": 1})
    with pytest.raises(InvalidConfig):
        SweepConfig.from_dict({"alphabet_size": 0})
    with pytest.raises(InvalidConfig):
        SweepConfig.from_dict({"shrink": 1.5})
    with pytest.raises(InvalidConfig):
        SweepConfig(alphabet_size=6).check_bounds(2)
    with pytest.raises(InvalidConfig):
        SweepConfig(schmidt_dim=11).check_bounds(2)
    SweepConfig(alphabet_size=5, schmidt_dim=10).check_bounds(2)
    cfg = SweepConfig(seed=7, **SMALL)
    assert SweepConfig.from_dict(cfg.to_dict()) == cfg


def test_config_file(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text('{"alphabet_size": 3, "seed": 5}')
    cfg = sweep.load_config(p)
    assert cfg.alphabet_size == 3 and cfg.seed == 5
    p.write_text("[1, 2]")
    with pytest.raises(InvalidConfig):
        sweep.load_config(p)
    p.write_text("{not json")
    with pytest.raises(InvalidConfig):
        sweep.load_config(p)


@pytest.mark.parametrize("nx,d0", [(1, 1), (3, 2), (2, 3)])
def test_other_layouts_run(nx, d0):
    cfg = SweepConfig(alphabet_size=nx, schmidt_dim=d0, schmidt_grid=5, euler_grid=(2, 2, 1),
                      max_encoder_combos=50, weights=3, restarts=1, rounds=2)
    ch = channels.depolarizing(0.75)
    f = sweep.frontier_sweep(ch, cfg)
    assert np.all(f.points >= -1e-8)
    for k in f.hull_index:
        ens = sweep.ensemble_from_params(f.layout, *f.params[k])
        assert ens.alphabet_size == nx and ens.resource_dim == d0
        assert np.allclose(region.rectangle_corner(ch, ens), f.points[k], atol=1e-10)


def test_qutrit_input_runs(rng):
    ch = random_channel(rng, 3, 2)
    cfg = SweepConfig(schmidt_grid=3, max_encoder_combos=20, weights=3, restarts=1, rounds=1)
    f = sweep.frontier_sweep(ch, cfg)
    assert len(f.hull) >= 1


def test_hull_record_roundtrip():
    f = sweep.frontier_sweep(channels.depolarizing(0.9), SweepConfig(**SMALL))
    rec = sweep.hull_vertices_record(f)
    assert len(rec) == len(f.hull)
    assert {"R", "Rprime", "source"} <= set(rec[0])
