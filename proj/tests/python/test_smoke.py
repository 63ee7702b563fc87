"""Smoke tests for the python bindings."""

import math
import os
import tempfile

import pytest

import lipstd


def test_parameter_maps_round_trip():
    nat = lipstd.to_natural("gamma", [4.0, 2.0])
    assert nat == pytest.approx([3.0, -2.0])
    assert lipstd.from_natural("gamma", nat) == pytest.approx([4.0, 2.0])
    assert lipstd.to_natural("normal", [0.0, 1.0]) == pytest.approx([0.0, -0.5])


def test_log_pdf_and_special_functions():
    assert lipstd.log_pdf("normal", [0.0, -0.5], 0.0) == pytest.approx(
        -0.5 * math.log(2 * math.pi)
    )
    assert lipstd.trigamma(1.0) == pytest.approx(math.pi**2 / 6, abs=1e-12)
    with pytest.raises(ValueError):
        lipstd.log_pdf("gamma", [3.0, -2.0], -1.0)


def test_smoothness_and_solver():
    est = lipstd.estimate_smoothness("normal", [0.0, -0.5])
    assert est["total"] == pytest.approx(3.0)
    fd = lipstd.estimate_smoothness_fd("normal", [0.0, -0.5])
    assert fd["total"] == pytest.approx(3.0, rel=1e-5)

    std = lipstd.smoothness_after_standardization("gamma", [4.0, 2.0])
    assert std["per_param"][1] == pytest.approx(1.5)

    res = lipstd.solve_omega("exponential", [-1.0], 4.0)
    assert res["omega"] == pytest.approx(2.0)
    assert res["residual"] <= 1e-8 * 4.0

    assert lipstd.solve_quartic_positive_root(0.0, 1.0, 2.0) == pytest.approx(1.0)


def test_scaling_round_trip():
    nat = [1.0, -0.5]
    scaled = lipstd.scale_natural("normal", nat, 2.0)
    assert scaled == pytest.approx([0.5, -0.125])
    assert lipstd.unscale_natural("normal", scaled, 2.0) == pytest.approx(nat)
    assert lipstd.transform_data("normal", [1.0, 2.0], 2.0) == pytest.approx([2.0, 4.0])


def test_fit_and_baselines():
    assert lipstd.fit_empirical("exponential", [1.0, 3.0]) == pytest.approx([0.5])
    assert lipstd.baseline_omega("std", [-2.0, 2.0]) == pytest.approx(0.5)
    assert lipstd.baseline_omega("iqr", [1.0, 2.0, 3.0, 4.0, 5.0]) == pytest.approx(0.5)


def test_tricks():
    values, fit = lipstd.apply_gamma_trick([0.0, 1.0, 2.0, 1.0] * 50, seed=3)
    assert all(math.floor(v) == orig for v, orig in zip(values, [0.0, 1.0, 2.0, 1.0] * 50))
    assert len(fit) == 2
    p = lipstd.recover_bernoulli([0.535, 1.0])
    assert p == pytest.approx(0.535 - 1.1 / 31.1)
    pi, degenerate = lipstd.recover_categorical([0.3, 0.1, 0.2])
    assert not degenerate
    assert pi == pytest.approx([0.5, 1 / 6, 1 / 3])


def test_cli_round_trip(tmp_path):
    csv = tmp_path / "in.csv"
    rows = ["x"] + [f"{0.5 + 0.25 * i}" for i in range(40)]
    csv.write_text("\n".join(rows) + "\n")
    out = tmp_path / "out.csv"
    meta = tmp_path / "meta.json"
    rc = lipstd.run_cli(
        ["scale", str(csv), "-o", str(out), "-m", str(meta), "--method", "std", "--trick", "none"]
    )
    assert rc == 0
    assert out.exists() and meta.exists()
