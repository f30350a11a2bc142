# Copyright 2026 The egonet Authors.
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

"""Smoke tests for the Python bindings."""

import math
import os
import random

import pytest

import egonet


def test_ckmeans_matches_brute_force():
    rng = random.Random(7)
    for _ in range(50):
        values = [rng.uniform(-5, 5) for _ in range(rng.randint(1, 9))]
        k = rng.randint(1, min(4, len(values)))
        dp = egonet.ckmeans_1d(values, k)
        bf = egonet.brute_force_kmeans(values, k)
        assert dp.total_within_ss == pytest.approx(bf.total_within_ss, abs=1e-9)


def test_ckmeans_example():
    s = egonet.ckmeans_1d([1, 2, 10, 11], 2)
    assert s.total_within_ss == pytest.approx(1.0)
    assert s.labels() == [0, 0, 1, 1]
    assert egonet.explained_variance(s) == pytest.approx(81 / 82)


def test_optimal_k_three_bands():
    rng = random.Random(3)
    values = [rng.gauss(c, 0.01) for c in (1, 5, 9) for _ in range(100)]
    k = egonet.optimal_k(values)
    assert k == 3


def test_scaling_factors():
    assert egonet.scaling_factors([5, 15, 45]) == pytest.approx([3, 3])


def test_generated_population_is_valid():
    nets = egonet.generate_population(20, seed=4)
    assert len(nets) == 20
    for net in nets:
        assert net.violations() == []
        assert all(t.frequency >= 0 for t in net.ties)
    summary = egonet.population_summary(nets)
    assert summary["egos"] == 20
    assert math.isclose(sum(summary["kstar_density"].values()), 1.0)


def test_error_is_raised():
    with pytest.raises(egonet.EgonetError, match="range_error"):
        egonet.calibrate_a([1.0, 2.0], 2, egonet.WindowConfig(), 100.0)


def test_run_pipeline_reports_missing_input(tmp_path):
    status = egonet.run_pipeline(
        "all", {"input": str(tmp_path / "absent.csv"), "output": str(tmp_path / "out")})
    assert status == 3


def test_run_pipeline_on_synthetic_events(tmp_path):
    cli = os.environ.get("EGONET_CLI")
    if not cli:
        pytest.skip("EGONET_CLI not set")
    spec = tmp_path / "in"
    assert os.system(f"{cli} synth --egos 30 --seed 5 -o {spec} > /dev/null") == 0
    out = tmp_path / "out"
    status = egonet.run_pipeline(
        "all", {"input": str(spec / "events.csv"), "accounts": str(spec / "accounts.csv"),
                "output": str(out)})
    assert status == 0
    for name in ("circles.csv", "rings_diffusion.csv", "summary.json"):
        assert (out / name).exists()
