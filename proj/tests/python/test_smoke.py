import math

import pytest

import clipofdm


def test_closed_forms():
    assert clipofdm.dco_evm(1.0, 0.5) == pytest.approx(0.38817, abs=1e-5)
    assert clipofdm.aco_evm(1.0) == pytest.approx(0.10741, abs=1e-5)
    assert clipofdm.dco_optimal_bias() == 0.5
    assert clipofdm.alpha(8.0, 0.0) == pytest.approx(0.5, abs=1e-9)


def test_monte_carlo_matches_closed_form():
    g = clipofdm.db_to_amplitude(-2.0)
    r = clipofdm.monte_carlo_evm("ACO", 512, g, 0.0, 200, 3)
    assert r["evm"] == pytest.approx(clipofdm.aco_evm(g), rel=0.02)
    assert r["stderr"] > 0


def test_lower_bound_and_sdr():
    b = clipofdm.evm_lower_bound("ACO", 32, 1.0, 5, 1)
    assert b["evm_lower_bound"] == pytest.approx(b["evm_scheme"], abs=1e-9)
    assert b["max_kt_residual"] < 1e-6
    s = clipofdm.sdr_per_subcarrier("DCO", 64, clipofdm.db_to_amplitude(5.0), 0.5)
    assert len(s["sdr"]) == len(s["data_indices"]) == 62
    assert all(v > 1 for v in s["sdr"])


def test_clip_and_bias_range():
    y = clipofdm.clip_and_bias([-3.0, 0.0, 3.0], 1.0, 1.0, 0.5)
    assert min(y) >= 0 and max(y) <= 2.0 + 1e-12


def test_run_experiment_and_presets():
    names = [n for n, _ in clipofdm.presets()]
    assert "fig3" in names and len(names) == 13
    csv, summary = clipofdm.run_experiment(preset="fig6")
    assert csv.startswith("k,H_mag2\n")
    assert csv.count("\n") == 513
    assert summary.startswith("channel: 512 rows")
    again, _ = clipofdm.run_experiment(preset="fig6")
    assert again == csv


def test_config_errors_are_value_errors():
    with pytest.raises(ValueError, match="n:"):
        clipofdm.run_experiment({"experiment": "sdr", "n": "7"})


def test_operating_point():
    op = clipofdm.optimal_operating_point("DCO", 64, None, 25.0)
    assert op["varsigma"] == pytest.approx(0.5)
    assert op["rate"] > 0 and math.isfinite(op["rate"])
