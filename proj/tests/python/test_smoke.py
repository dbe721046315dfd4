import pytest

import kpzlab


def test_version():
    assert kpzlab.__version__


def test_lpp_matches_two_step_oracle():
    w10 = kpzlab.weight(42, 1, 0)
    w01 = kpzlab.weight(42, 0, 1)
    w11 = kpzlab.weight(42, 1, 1)
    assert kpzlab.lpp_value(42, (0, 0), (1, 1)) == max(w10, w01) + w11


def test_geodesic_endpoints():
    path = kpzlab.geodesic(3, (0, 0), (5, 7), "R")
    assert path[0] == (0, 0)
    assert path[-1] == (5, 7)
    assert len(path) == 13


def test_busemann_profile_is_anchored():
    prof = kpzlab.busemann_profile(1, 100, 0.0, a=-0.5, b=0.5, step=0.1, depths=[2, 4])
    assert len(prof["x"]) == len(prof["values"])
    i = min(range(len(prof["x"])), key=lambda k: abs(prof["x"][k]))
    assert prof["values"][i] == 0.0


def test_flat_evolution():
    x, h = kpzlab.evolve_flat(2, 100, 0.3, -0.2, 0.2)
    assert len(x) == len(h) > 0


def test_mixed_interface_is_ordered():
    tr = kpzlab.mixed_interface(5, 150, -0.2, 0.2, [0.0, 0.2, 0.4])
    assert tr["ordering_violations"] == 0
    assert len(tr["minus"]) == 3


def test_suite_runs():
    assert "lpp-core" in kpzlab.suites()
    rep = kpzlab.run_suite("lpp-core", seed=1, n=200)
    assert rep["status"] == "pass"


def test_errors_are_raised():
    with pytest.raises(kpzlab.KpzlabError):
        kpzlab.scaled_value(1, 100, (0.0, 0.0), (5.0, 0.1))
