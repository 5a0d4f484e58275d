import csv
import math

import numpy as np
import pytest

from fluidmimo.bench import (
    ExperimentSpec,
    baseline_fpa,
    baseline_random_best,
    baseline_tx_only,
    run_scenario,
    run_validation,
)
from fluidmimo.ao import AoConfig
from fluidmimo.capacity import ergodic_capacity
from fluidmimo.channel import sample_gaussian_set
from fluidmimo.errors import InvalidArgumentError
from fluidmimo.feasibility import ApertureSpec, is_feasible
from fluidmimo.pso import SwarmConfig

FAST_SWARM = SwarmConfig(swarm_size=6, iterations=8)


def test_fpa_values():
    spec = ApertureSpec(2.0, 0.3, 6)
    np.testing.assert_allclose(baseline_fpa(spec).coords, np.arange(6) * 0.3)
    from fluidmimo.ao import _det
    assert _det(baseline_fpa(ApertureSpec(2.0, 0.3, 2))) == pytest.approx(0.916, abs=1e-3)
    assert _det(baseline_fpa(spec)) == pytest.approx(0.0145, abs=5e-4)


def test_random_best_monotone_in_trials():
    tx = rx = ApertureSpec(2.0, 0.3, 3)
    samples = sample_gaussian_set(3, 3, 100, seed=0)
    caps = []
    for trials in (1, 5, 20):
        t, r = baseline_random_best(tx, rx, 100.0, samples, trials, seed=3)
        assert is_feasible(t.coords, tx) and is_feasible(r.coords, rx)
        caps.append(ergodic_capacity(t, r, 100.0, samples).mean_bps_hz)
    assert caps == sorted(caps)
    with pytest.raises(InvalidArgumentError):
        baseline_random_best(tx, rx, 100.0, samples, 0, seed=3)


def test_tx_only_keeps_fpa_receiver():
    spec = ApertureSpec(2.0, 0.3, 6)
    t, r = baseline_tx_only(spec, spec, AoConfig(solver="sca"))
    np.testing.assert_array_equal(r.coords, baseline_fpa(spec).coords)
    from fluidmimo.ao import _det
    assert _det(t) == pytest.approx(0.587, abs=2e-3)
    assert _det(r) == pytest.approx(0.0145, abs=5e-4)


class TestExperimentSpec:
    def test_scalars_become_tuples(self):
        s = ExperimentSpec("optimize", snr_db=20, schemes="iid")
        assert s.snr_db == (20,) and s.schemes == ("iid",)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"scenario": "nope"},
            {"scenario": "optimize", "schemes": ()},
            {"scenario": "optimize", "schemes": ("magic",)},
            {"scenario": "optimize", "seeds": ()},
            {"scenario": "spacing-curve"},
            {"scenario": "optimize", "solver": "ga"},
            {"scenario": "optimize", "random_trials": 0},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidArgumentError):
            ExperimentSpec(**kwargs)


def small_spec(tmp_path, name="out.csv", **kwargs):
    base = dict(
        scenario="optimize", snr_db=(20.0,), apertures=(1.5,), n_values=(3,),
        schemes=("iid", "ao_pso", "ao_sca", "tx_only", "random_best", "fpa"),
        samples=40, eval_samples=200, swarm=FAST_SWARM, max_outer=3, random_trials=5,
        output=str(tmp_path / name),
    )
    base.update(kwargs)
    return ExperimentSpec(**base)


def test_csv_columns_and_reproducibility(tmp_path):
    rows = run_scenario(small_spec(tmp_path, "a.csv"))
    run_scenario(small_spec(tmp_path, "b.csv"))
    a = (tmp_path / "a.csv").read_bytes()
    assert a == (tmp_path / "b.csv").read_bytes()
    with open(tmp_path / "a.csv", newline="") as fh:
        table = list(csv.DictReader(fh))
    assert list(table[0]) == [
        "scenario", "scheme", "N", "M", "aperture", "gamma_db", "capacity_mean",
        "capacity_stderr", "det_RT", "det_RR", "seed",
    ]
    assert [r["scheme"] for r in table] == [r.scheme for r in rows]
    assert float(table[0]["capacity_mean"]) == rows[0].capacity_mean


def test_grid_ordering_and_iid_upper_bound(tmp_path):
    rows = run_scenario(small_spec(tmp_path, snr_db=(10.0, 20.0), n_values=(2, 3), output=None))
    keys = [(r.N, r.gamma_db) for r in rows]
    assert keys == sorted(keys)
    by = {}
    for r in rows:
        by.setdefault((r.N, r.gamma_db), {})[r.scheme] = r
    for group in by.values():
        iid = group["iid"]
        for r in group.values():
            assert r.capacity_mean <= iid.capacity_mean + 4 * iid.capacity_stderr
        assert group["ao_sca"].capacity_mean >= group["fpa"].capacity_mean
        assert group["ao_pso"].capacity_mean >= group["fpa"].capacity_mean


def test_spacing_curve_rows(tmp_path):
    spec = ExperimentSpec("spacing-curve", snr_db=(10.0,), spacings=(0.1, 0.2, 0.383),
                          schemes=("iid", "fpa"), eval_samples=300)
    rows = run_scenario(spec)
    assert [r.scheme for r in rows] == ["iid", "fpa", "fpa", "fpa"]
    assert math.isnan(rows[0].aperture)
    assert [r.aperture for r in rows[1:]] == [0.1, 0.2, 0.383]
    assert rows[3].det_RT == pytest.approx(1.0, abs=1e-4)


def test_convergence_writes_trace(tmp_path):
    spec = small_spec(tmp_path, "conv.csv", scenario="convergence", schemes=("ao_pso", "ao_sca"))
    rows, traces = run_scenario(spec, return_traces=True)
    assert len(rows) == 2 and len(traces) == 2
    text = (tmp_path / "conv.trace.csv").read_text().splitlines()
    assert text[0].startswith("scheme,gamma_db,seed,iteration")
    assert len(text) == 1 + sum(len(t.records) for *_, t in traces)


def test_validation_checks_pass():
    results = run_validation(seed=1, paths=200, draws=400, gradient_configs=10)
    assert all(isinstance(r.passed, bool) for r in results)
    assert [r.name for r in results if not r.passed] == []


@pytest.mark.slow
@pytest.mark.xfail(strict=True, reason="random search beats TX-only optimization with a packed receiver")
def test_tx_only_beats_random_best():
    spec = ExperimentSpec("optimize", snr_db=(30.0,), schemes=("tx_only", "random_best"), solver="sca")
    rows = {r.scheme: r for r in run_scenario(spec)}
    assert rows["tx_only"].capacity_mean >= rows["random_best"].capacity_mean


def test_spacing_curve_first_peak_at_first_zero():
    spacings = tuple(float(v) for v in np.round(0.1 + 0.005 * np.arange(181), 10))
    spec = ExperimentSpec("spacing-curve", snr_db=(30.0,), spacings=spacings,
                          schemes=("fpa",), eval_samples=3000)
    rows = run_scenario(spec)
    caps = [r.capacity_mean for r in rows]
    peaks = [rows[i].aperture for i in range(1, len(caps) - 1) if caps[i - 1] < caps[i] >= caps[i + 1]]
    assert abs(peaks[0] - 0.3827) <= 0.01
    # the second zero of J0 decorrelates the pair just as well
    assert abs(peaks[1] - 0.8785) <= 0.01
    assert abs(caps[spacings.index(0.38)] - max(caps)) < 1e-3
