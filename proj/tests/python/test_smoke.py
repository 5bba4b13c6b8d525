import math

import numpy as np
import pytest

import voldens


def test_kernel_and_noise():
    assert voldens.kernel_names() == ["poly3", "poly4"]
    w = voldens.eval_w("poly3", np.array([0.0, 1.3]))
    assert w[0] == pytest.approx(0.14551309082687574, rel=1e-12)
    assert w[1] == pytest.approx(0.13236456482155103, rel=1e-12)
    z = voldens.phi_k(1.7)
    assert abs(z - complex(0.089962333210766559, 0.038620150434622389)) < 1e-13
    assert abs(z) ** 2 * math.cosh(math.pi * 1.7) == pytest.approx(1.0, rel=1e-12)
    assert voldens.noise_cdf(np.array([0.0]))[0] == pytest.approx(0.6826894921370859)
    assert voldens.kernel_moments("poly3")["mu2"] == pytest.approx(6.0, rel=1e-6)


def test_deconv_kernel():
    v = voldens.DeconvKernel("poly3", 1.0)
    vals = v(np.array([2.3, -2.3]))
    assert vals[0] == pytest.approx(0.15457554232380338, rel=1e-12)
    assert vals[1] == pytest.approx(0.082571002599206028, rel=1e-12)
    assert v.gamma0 == pytest.approx(0.18356029421689292, rel=1e-12)
    with pytest.raises(voldens.RangeError):
        voldens.DeconvKernel("poly3", 0.001)
    with pytest.raises(voldens.NotFoundError):
        voldens.DeconvKernel("box", 1.0)


def test_simulate_estimate_truth():
    n, delta = 5000, 0.01
    sim = voldens.simulate("ou", {"a": 1.0, "b": 4.0}, n=n, delta=delta, seed=5)
    assert sim["increments"].shape == (n,)
    assert sim["sigma2"].shape == (n * 50 + 1,)
    again = voldens.simulate("ou", {"a": 1.0, "b": 4.0}, n=n, delta=delta, seed=5)
    assert np.array_equal(sim["increments"], again["increments"])

    x, f, h = voldens.estimate(sim["increments"], delta, [1.0], "-45:45:361")
    assert f.shape == (361,)
    assert h == pytest.approx(9 * math.pi / math.log(n))
    assert np.trapezoid(f, x) == pytest.approx(1.0, abs=0.01)

    x2, f2, _ = voldens.estimate(sim["increments"], delta, [1.0, 1.2], "-15:15:31")
    assert f2.shape == (31, 31)

    tx, tf = voldens.truth("ou", {"a": 1.0, "b": 4.0}, [1.0], "-15:15:121")
    sd = 4.0 / math.sqrt(2.0)
    assert tf[60] == pytest.approx(1.0 / (sd * math.sqrt(2 * math.pi)))
    _, tb = voldens.truth("regime", {}, [1.0, 1.05], "-6:6:3")
    assert tb[0, 0] == pytest.approx(tb[2, 2])


def test_experiment(tmp_path):
    out = tmp_path / "run"
    r = voldens.run_experiment("n = 300,600\nreps = 2\nsubsteps = 10\n", out)
    assert [a["n"] for a in r["aggregate"]] == [300, 600]
    assert len(r["records"]) == 4
    assert (out / "records.csv").read_text().startswith("n,rep,mise")
    assert (out / "config.echo").read_text() == r["echo"]
    with pytest.raises(voldens.ConfigError):
        voldens.run_experiment("colour = red\n")
