import math

import numpy as np
import pytest

import msalab


def test_spectrum_single_site():
    cfg = {"box": {"center": [[0], [0]], "radius": 0}, "g": 2.0, "seed": 4}
    ev = msalab.spectrum(cfg)
    assert ev.shape == (1,)
    assert np.isfinite(ev[0])


def test_spectrum_size_and_order():
    ev = msalab.spectrum({"box": {"center": [[0], [0]], "radius": 2}, "g": 5})
    assert ev.shape == (25,)
    assert np.all(np.diff(ev) >= 0)


def test_schedule_desk():
    s = msalab.schedule({"preset": "desk"})
    assert s["schedule"]["lengths"][:2] == [3, 6]
    assert s["schedule"]["masses"][0] == 1.0


def test_infeasible_schedule():
    with pytest.raises(msalab.InfeasibleSchedule):
        msalab.schedule({"schedule": {"L0": 4, "gamma": 40}})


def test_unknown_key():
    with pytest.raises(msalab.ConfigError):
        msalab.config_hash({"trails": 3})


def test_hash_ignores_output_dir():
    a = msalab.config_hash({"g": 5})
    assert a == msalab.config_hash({"g": 5, "output_dir": "x", "threads": 4})
    assert a != msalab.config_hash({"g": 6})


def test_classify_record():
    r = msalab.classify({"box": {"center": [[0], [9]], "radius": 2}, "g": 30, "energy": 15.0})
    assert set(r) >= {"ns", "resonance", "interactive"}
    assert r["interactive"] is False


def test_estimate_bernoulli():
    r = msalab.estimate({"trials": 400, "seed": 3, "event": {"kind": "bernoulli", "bernoulli_p": 0.25}})
    assert r["trials"] == 400
    lo, hi = r["ci95"]
    assert lo <= 0.25 <= hi
    assert msalab.estimate({"trials": 400, "seed": 3, "event": {"kind": "bernoulli", "bernoulli_p": 0.25}}) == r


def test_wilson():
    lo, hi = msalab.wilson_interval(0, 10)
    assert lo == 0.0 and 0.0 < hi < 0.35
    assert math.isclose(sum(msalab.wilson_interval(5, 10)), 1.0)
