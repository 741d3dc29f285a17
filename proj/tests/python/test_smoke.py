import os

import pytest

import srwa

DATA = os.environ.get("SRWA_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "data"))


def ring(n, w):
    return srwa.Topology(n, [(i, (i + 1) % n) for i in range(n)], w, "ring")


def test_topology_from_file():
    t = srwa.Topology.from_file(os.path.join(DATA, "abilene.edges"), 4)
    assert t.num_nodes == 12
    assert t.num_fibers == 15
    assert t.num_arcs == 30
    assert t.num_wavelengths == 4
    tail, head = t.arc(0)
    assert (tail, head) == t.fibers[0]


def test_deterministic_solve_grants_what_fits():
    # Path 0-1-2 with one wavelength: both requests need arc 0->1.
    t = srwa.Topology(3, [(0, 1), (1, 2)], 1)
    r = srwa.solve(t, "maxRWA", demand={(0, 2): 1, (0, 1): 1, (2, 1): 1}, method="EXTENSIVE")
    assert r["status"] == "optimal"
    assert r["objective"] == pytest.approx(2.0)
    assert len(r["provisioning"]) == 2


def test_methods_agree_on_sampled_scenarios():
    t = ring(5, 2)
    scenarios = srwa.sample_scenarios(t, 2.0, 10.0, 4, 7)
    assert scenarios == srwa.sample_scenarios(t, 2.0, 10.0, 4, 7)
    demand = {(0, 2): 1, (3, 1): 1}
    values = [
        srwa.solve(t, "SmaxRWA", demand=demand, scenarios=scenarios, method=m)["objective"]
        for m in ("EXTENSIVE", "BENDERS_x", "BENDERS_xbeta")
    ]
    assert values[1] == pytest.approx(values[0], rel=1e-6)
    assert values[2] == pytest.approx(values[0], rel=1e-6)


def test_evss_and_saa():
    t = ring(4, 2)
    demand = {(0, 2): 1, (1, 3): 1}
    same = [{(0, 1): 2}] * 3
    assert abs(srwa.evss(t, "SmaxRWA", demand=demand, scenarios=same)["evss"]) < 1e-6
    r = srwa.saa(t, demand, 3.0, 1.0, level=5, repetitions=3, eval_size=50, seed=2)
    assert r["gap_pct"] >= 0.0
    assert len(r["ub_values"]) == 3


def test_simulation_and_compare():
    t = ring(5, 2)
    a = srwa.simulate(t, "SmaxRWA", horizon=4, repetitions=2, lambda_r=2.0, mean_holding=3.0, scenario_count=2)
    b = srwa.simulate(t, "maxRWA", horizon=4, repetitions=2, lambda_r=2.0, mean_holding=3.0)
    assert len(a) == 2 and len(a[0].stages) == 4
    assert [s.arrivals for s in a[0].stages] == [s.arrivals for s in b[0].stages]
    rows = srwa.compare(a, b)
    assert [r["stage"] for r in rows] == [1, 2, 3, 4]
    assert srwa.sign_test_p(10, 0) == pytest.approx(1 / 1024)


def test_errors_are_python_exceptions():
    with pytest.raises(srwa.ConfigError):
        srwa.solve(ring(4, 1), "bogus")
    with pytest.raises(ValueError):
        srwa.simulate(ring(4, 1), "SmaxRWA", horizon=0)
