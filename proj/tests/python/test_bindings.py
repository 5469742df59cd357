# Copyright 2026 The hamid Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import os
import pathlib

import numpy as np
import pytest

import hamid

CONFIGS = pathlib.Path(os.environ.get("HAMID_CONFIG_DIR", pathlib.Path(__file__).parents[2] / "configs"))


def test_model_from_spec_dims():
    model = hamid.Model.from_spec({"type": "nonlinear_ssm"})
    assert model.type == "nonlinear_ssm"
    assert model.dims.n_theta == 1
    assert model.dims.position_size == 1 + model.dims.horizon


def test_gradient_matches_finite_difference():
    model = hamid.Model.from_spec({"type": "gaussian_target", "mean": [1, -1], "cov": [[1, 0.3], [0.3, 0.25]]})
    theta = np.array([0.3, 0.2])
    empty = np.zeros(0)
    g, gx = model.grad_log_joint(theta, empty, empty, empty)
    assert gx.shape == (0,)
    h = 1e-6
    for i in range(2):
        e = np.zeros(2)
        e[i] = h
        fd = (model.log_joint(theta + e, empty, empty, empty) - model.log_joint(theta - e, empty, empty, empty)) / (2 * h)
        assert g[i] == pytest.approx(fd, rel=1e-6)
    assert hamid.grad_potential(model, empty, empty, theta) == pytest.approx(-g)


def test_leapfrog_reverses():
    model = hamid.Model.from_spec({"type": "gaussian_target", "mean": [0, 0], "cov": [[1, 0], [0, 1]]})
    empty = np.zeros(0)
    path = hamid.leapfrog(model, empty, empty, np.array([1.0, 0.5]), np.array([-0.2, 0.7]), 0.1, 25)
    assert path.shape == (26, 4)
    back = hamid.leapfrog(model, empty, empty, path[-1, :2], -path[-1, 2:], 0.1, 25)
    np.testing.assert_allclose(back[-1, :2], [1.0, 0.5], atol=1e-12)
    np.testing.assert_allclose(back[-1, 2:], [0.2, -0.7], atol=1e-12)


def test_run_chain_moments_and_determinism():
    model = hamid.Model.from_spec({"type": "gaussian_target", "mean": [1, -1], "cov": [[1, 0.3], [0.3, 0.25]]})
    empty = np.zeros(0)
    a = hamid.run_chain(model, empty, empty, epsilon=0.1, steps=20, iterations=3200, warmup=200, thin=1, seed=3)
    b = hamid.run_chain(model, empty, empty, epsilon=0.1, steps=20, iterations=3200, warmup=200, thin=1, seed=3)
    np.testing.assert_array_equal(a["q"], b["q"])
    assert a["q"].shape == (3000, 2)
    assert a["acceptance_rate"] > 0.8
    np.testing.assert_allclose(a["q"].mean(axis=0), [1, -1], atol=0.1)
    assert hamid.effective_sample_size(a["q"][:, 0]) > 500


def test_bias_variance_identity():
    rng = np.random.default_rng(0)
    samples = rng.normal(size=(500, 2))
    bv = hamid.bias_variance(samples, np.array([0.5, -0.5]))
    direct = np.mean(np.sum((samples - [0.5, -0.5]) ** 2, axis=1))
    assert bv["mean_squared_error"] == pytest.approx(direct, rel=1e-12)
    assert bv["squared_bias"] + bv["variance_trace"] == pytest.approx(direct, rel=1e-12)


def test_config_errors_name_the_field():
    doc = json.loads((CONFIGS / "linear_ssm.json").read_text())
    doc["design"]["delta_u"] = -1
    with pytest.raises(ValueError, match="design.delta_u"):
        hamid.Config.from_dict(doc, str(CONFIGS))


def test_design_then_evaluate_linear():
    config = hamid.Config.load(str(CONFIGS / "linear_ssm.json"))
    report = hamid.design(config)
    assert report["u_star"].shape == config.u_nominal.shape
    assert np.max(np.abs(report["u_star"])) <= 1 + 1e-12
    before = hamid.evaluate(config, config.u_nominal)
    after = hamid.evaluate(config, report["u_star"])
    assert after["covariance"].shape == (2, 2)
    assert np.trace(after["covariance"]) < np.trace(before["covariance"])


def test_sample_at_nominal_input():
    config = hamid.Config.load(str(CONFIGS / "linear_ssm.json"))
    out = hamid.sample(config, config.u_nominal, seed=7)
    assert out["q"].shape[1] == 2
    assert out["acceptance_rate"] > 0.5
