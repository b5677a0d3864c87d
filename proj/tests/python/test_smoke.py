import json
import os

import numpy as np
import pytest

import augsindy


def lorenz(t_end=5.0):
    return augsindy.simulate("lorenz", t_end=t_end)


def test_simulate_shapes():
    s = lorenz(1.0)
    assert s["names"] == ["x", "y", "z"]
    assert s["values"].shape == (s["times"].shape[0], 3)
    assert "sir" in augsindy.system_names()


def test_fit_recovers_lorenz_support():
    s = lorenz()
    m = augsindy.fit(s["times"], s["values"], s["names"], lam=0.5, degree=2)
    xi = m["xi"]
    labels = m["labels"]
    dx = {labels[i] for i in np.flatnonzero(xi[:, 0])}
    assert dx == {"x", "y"}
    assert "dx/dt" in m["equations"]


def test_mask_restricts_equations():
    s = lorenz()
    allowed = np.ones((3, 3), dtype=bool)
    allowed[0, 2] = False
    m = augsindy.fit(s["times"], s["values"], s["names"], lam=0.5, admissible=allowed)
    for i in np.flatnonzero(m["xi"][:, 0]):
        assert "z" not in m["labels"][i]


def test_stls_and_select():
    rng = np.random.default_rng(3)
    theta = rng.standard_normal((100, 6))
    truth = np.array([0.0, 1.5, 0.0, -2.0, 0.0, 0.0])
    got = augsindy.stls(theta, theta @ truth, 0.1)
    np.testing.assert_allclose(got, truth, atol=1e-9)
    np.testing.assert_array_equal(augsindy.select(got), (truth != 0).astype(int))


def test_screen_and_learn_basis():
    s = lorenz()
    mask = augsindy.screen(s["times"], s["values"], s["names"], permutations=300, seed=1)
    assert mask["admissible"].shape == (3, 3)
    assert mask["admissible"].diagonal().all()
    b = augsindy.learn_basis(s["times"], s["values"], s["names"], ["x*y"], atoms=1)
    assert b["atoms"].shape[1] == 1
    assert "x*y" not in b["known_labels"]
    trace = b["objective_trace"]
    assert all(later <= earlier * (1 + 1e-12) for earlier, later in zip(trace, trace[1:]))


def test_run_experiment_and_errors():
    cfg = {
        "experiment": "lynx-hare",
        "noise_mode": "matched-moments",
        "lambda_schedule": {"start": 0.09, "ratio": 0.9, "count": 2},
        "trials": 1,
        "seed": 1,
    }
    if "AUGSINDY_DATA_DIR" in os.environ:
        cfg["data_dir"] = os.environ["AUGSINDY_DATA_DIR"]
    out = augsindy.run_experiment(json.dumps(cfg))
    assert out["augmented"]["per_trial"].shape == (1, 2)
    assert "Average" in out["baseline"]["table"]
    with pytest.raises(augsindy.AugsindyError):
        augsindy.simulate("no-such-system")
    assert augsindy.format_value(0.1333) == ".133"
