import math

import pytest

import pyupo


def test_weights():
    assert pyupo.zeta(0, 2, 1, 0.5) == pytest.approx(0.34657359027997265, rel=1e-15)
    assert pyupo.omega(0, 2, 0.5, 1) == pytest.approx(0.59657359027997265, rel=1e-15)
    assert pyupo.omega(3, 3, 0.9, 2) == 1.0
    with pytest.raises(pyupo.ParameterError):
        pyupo.zeta(0, 1, 0, 1.5)


def test_belief_matches_direct_sums():
    belief = pyupo.BeliefState(math.exp(-0.5), 1)
    history = []
    for k, y in enumerate([1.0, 3.0, 2.5, 4.0]):
        belief.update(k, 0, y)
        history.append((k, y))
    rec = belief.estimate(0, 2.0)
    direct = pyupo.direct_estimate(history, math.exp(-0.5), 1, 2.0, 4)
    assert rec.mean == pytest.approx(direct.mean, rel=1e-12)
    assert rec.variance == pytest.approx(direct.variance, rel=1e-12)
    assert belief.estimate(5, 2.0) is None


def test_local_model():
    h = pyupo.solve_local([(1.0, 1.0), (2.0, 1.0), (1.0, 1.0)], 1.0, 1.0)
    assert h == pytest.approx([9 / 7, 10 / 7, 9 / 7], abs=1e-15)
    assert pyupo.solve_local([(1.0, 1.0), (3.0, 1.0), None], 3.0, 1.0)[2] == 5.0


def test_pv_plant():
    assert pyupo.pv_light_current() == 5.61
    assert pyupo.pv_power(0.0).power == 0.0
    s = pyupo.pv_power(0.5)
    assert s.power == pytest.approx(214.6131332831986067, rel=1e-9)
    assert pyupo.pv_conditions(0)[1] == 0.0


def test_constants():
    c = pyupo.convergence_constants(curvature=1.0, drift=0.01, delta_u=0.05, rho=1.0, tau=0.1)
    assert c["N"] == 4
    assert c["L_star"] == pytest.approx(0.044721359549995794)
    assert 0 < c["lambda_star"] <= 0.5


def test_run_is_deterministic_and_consistent():
    cfg = "\n".join([
        "objective.kind = drifting-parabola",
        "objective.curvature = 0.5",
        "objective.center = 3",
        "objective.rate = 0.02",
        "grid.spacing = 1",
        "grid.lo = 0",
        "grid.hi = 12",
        "noise.rho = 1",
        "run.horizon = 60",
    ])
    a = pyupo.run(cfg, seed=4, selectors=["upo", "standard_po", "hei", "thompson"])
    b = pyupo.run(cfg, seed=4, selectors=["upo", "standard_po", "hei", "thompson"])
    assert [t["index"] for t in a["traces"]] == [t["index"] for t in b["traces"]]
    assert [m["selector"] for m in a["metrics"]] == ["upo", "standard_po", "hei", "thompson"]
    for t, m in zip(a["traces"], a["metrics"]):
        assert len(t["k"]) == 60
        assert sum(t["value"]) == pytest.approx(m["total_value"])
    assert a["metrics"][1]["perturbation_count"] == 59


def test_default_config_runs_pv_day():
    assert "objective.kind = pv-day" in pyupo.default_config()
    r = pyupo.run(seed=1, selectors=["upo"])
    assert r["metrics"][0]["oracle_gap_pct"] < 15.0


def test_bad_config_raises():
    with pytest.raises(pyupo.ConfigError):
        pyupo.run("run.horizon = soon")
