import logging
import math
import os

import numpy as np
import pandas as pd
import pytest

import constants
from errors import DomainError, OutputLockedError, SchemaError
from experiments.clt import CLT_COLUMNS, run_clt_check, run_even_clt_check
from experiments.curves import (CECO_COLUMNS, M1_COLUMNS, MU2_COLUMNS, fixed_point_density,
                                run_ceco_curve, run_m1_curve, run_mu2_curve)
from experiments.parity import (ODD_TIGHTNESS_COLUMNS, PARITY_TAIL_COLUMNS, _small_size,
                                run_odd_tightness, run_parity_tail)
from experiments.plots import Figure, emit_plot_script
from experiments.runner import (auxiliary_stream_id, replicate_stream_id, run_replicates,
                                write_csv)
from experiments.selftest import SELFTEST_COLUMNS, _oracle_checks, _series_checks, run_selftest
from qseries.limits import mu2_exact
from qseries.stationary import m1_exact
from sampler.finite import window_margin

def test_stream_ids_are_distinct():
    assert replicate_stream_id(2, 5) == (2 << 32) | 5
    replicate_ids = {replicate_stream_id(i, r) for i in range(4) for r in range(100)}
    auxiliary_ids = {auxiliary_stream_id(i, slot) for i in range(4) for slot in range(3)}
    assert len(replicate_ids) == 400
    assert len(auxiliary_ids) == 12
    assert not replicate_ids & auxiliary_ids

def test_replicates_do_not_depend_on_workers(make_config):
    single = run_replicates(fixed_point_density, make_config("w1", [0.5], replicates=37), 0, 0.5)
    pooled = run_replicates(fixed_point_density, make_config("w2", [0.5], replicates=37, workers=2),
                            0, 0.5)
    assert single.shape == (37, 1)
    assert np.array_equal(single, pooled)

def test_replicates_differ_between_grid_points(make_config):
    config = make_config("grid", [0.5], replicates=50)
    assert not np.array_equal(run_replicates(fixed_point_density, config, 0, 0.5),
                              run_replicates(fixed_point_density, config, 1, 0.5))

def test_write_csv(tmp_path):
    path = write_csv(pd.DataFrame({"q": [0.5], "value": [1.0 / 3.0], "pass": [True]}),
                     tmp_path.joinpath("nested", "out.csv"))
    assert path.read_text(encoding="utf-8").splitlines() == ["q,value,pass", "0.5,0.333333333333,True"]
    assert not tmp_path.joinpath("nested", "out.csv.lock").exists()

def test_write_csv_refuses_locked_output(tmp_path, locked_output):
    with pytest.raises(OutputLockedError):
        write_csv(pd.DataFrame({"q": [0.5]}), tmp_path.joinpath("out.csv"), timeout=0.1)
    assert not tmp_path.joinpath("out.csv").exists()

def test_config_validation(make_config):
    with pytest.raises(DomainError):
        make_config("bad", [0.5], replicates=0)
    with pytest.raises(DomainError):
        make_config("bad", [])
    with pytest.raises(DomainError):
        make_config("bad", [0.5], workers=0)
    with pytest.raises(DomainError):
        make_config("bad", [-0.5])
    config = make_config("ok", [0.5, 2])
    assert config.q_grid == [0.5, 2.0]
    assert config.provenance(0.5) == {"q": 0.5, "n": 50, "replicates": 200, "seed": config.seed}

def test_m1_curve_single_point(make_config):
    frame = run_m1_curve(make_config("m1", [0.3, 0.7], n=1, replicates=1))
    assert list(frame.columns) == M1_COLUMNS
    assert frame["mc_mean"].tolist() == [1.0, 1.0]
    assert frame["pass"].all()

def test_m1_curve(make_config):
    frame = run_m1_curve(make_config("m1", [0.5], n=50, replicates=400))
    row = frame.iloc[0]
    assert row["exact_m1"] == pytest.approx(m1_exact(0.5))
    assert abs(row["exact_finite"] - row["exact_m1"]) < 0.05
    assert bool(row["pass"])

def test_curves_check_regime(make_config):
    with pytest.raises(DomainError):
        run_m1_curve(make_config("m1", [0.5, 1.5]))
    with pytest.raises(DomainError):
        run_mu2_curve(make_config("mu2", [0.5]))
    with pytest.raises(DomainError):
        run_ceco_curve(make_config("ceco", [1.0]))

def test_mu2_curve_two_points(make_config):
    frame = run_mu2_curve(make_config("mu2", [2.0], n=2, replicates=400))
    assert list(frame.columns) == MU2_COLUMNS
    row = frame.iloc[0]
    assert 0.0 <= row["mc_mean"] <= 0.5
    # Mallows(2, 2) is the transposition with probability 2/3
    assert abs(row["mc_mean"] - 1.0 / 3.0) <= 5.0 * row["mc_se"]
    assert row["exact_mu2"] == pytest.approx(mu2_exact(2.0))
    assert row["bias_se"] == pytest.approx((row["mc_mean"] - row["exact_mu2"]) / row["mc_se"])

def test_ceco_curve(make_config):
    frame = run_ceco_curve(make_config("ceco", [2.0], n=51, replicates=300))
    assert list(frame.columns) == CECO_COLUMNS
    row = frame.iloc[0]
    assert row["n"] == 52
    assert row["exact_ce"] + row["exact_co"] == pytest.approx(1.0, abs=1e-8)
    assert row["exact_ce"] < 0.5 < row["exact_co"]
    assert bool(row["co_above_ce"])

def test_clt_check_rows(make_config, caplog):
    config = make_config("clt", [0.5], n=200, replicates=300, regen_steps=100_000)
    with caplog.at_level(logging.WARNING, logger="experiments.clt"):
        frame = run_clt_check(config)
    assert "calibrated" in caplog.text
    assert list(frame.columns) == CLT_COLUMNS
    assert frame["cycle_length"].tolist() == [1, 2]
    assert abs(frame["center"].iloc[0] - m1_exact(0.5)) <= 5.0 * frame["center_se"].iloc[0]
    assert (frame["cov_hat"] > 0.0).all()
    assert np.isfinite(frame[["var_std", "skew", "excess_kurtosis", "cov_max_gap"]].to_numpy()).all()

def test_even_clt_check_rows(make_config):
    config = make_config("even-clt", [2.0], n=200, replicates=300, regen_steps=300_000)
    frame = run_even_clt_check(config)
    assert frame["cycle_length"].tolist() == [2, 4]
    assert frame["center"].iloc[0] == pytest.approx(mu2_exact(2.0))
    assert frame["center_se"].iloc[0] == 0.0
    assert (frame["cov_hat"] > 0.0).all()

def test_clt_checks_regime(make_config):
    with pytest.raises(DomainError):
        run_clt_check(make_config("clt", [2.0]))
    with pytest.raises(DomainError):
        run_even_clt_check(make_config("even-clt", [0.5]))

@pytest.mark.parametrize("n, expected", [(40, 20), (41, 21), (100, 50), (7, 3)])
def test_small_size_keeps_parity(n, expected):
    assert _small_size(n) == expected

def test_odd_tightness_rows(make_config):
    frame = run_odd_tightness(make_config("odd-tightness", [2.0], n=40, replicates=400))
    assert list(frame.columns) == ODD_TIGHTNESS_COLUMNS
    row = frame.iloc[0]
    assert (row["n_small"], row["n_large"], row["n_other_parity"]) == (20, 40, 41)
    assert 0.0 <= row["tv_same_parity"] <= 1.0
    assert 0.0 <= row["tv_parity"] <= 1.0
    assert row["tv_parity_se"] > 0.0
    assert 0.0 <= row["chi2_same_parity_p"] <= 1.0

def test_parity_tail_rows(make_config):
    config = make_config("parity-tail", [0.5], replicates=300, W=32, kmax=1)
    frame = run_parity_tail(config)
    assert list(frame.columns) == PARITY_TAIL_COLUMNS
    assert frame["m"].tolist() == [1, 2, 3]
    assert (frame["n"] == 65).all()
    assert (frame["margin"] == window_margin(32, 0.5)).all()
    assert pd.isna(frame["ordered"].iloc[0])
    assert (np.diff(frame["p_rho_ge_m"]) <= 0).all()
    assert (np.diff(frame["p_r_ge_m"]) <= 0).all()

def test_parity_tail_rejects_small_windows(make_config):
    with pytest.raises(DomainError):
        run_parity_tail(make_config("parity-tail", [0.5], W=16))
    with pytest.raises(DomainError):
        run_parity_tail(make_config("parity-tail", [0.5], W=32, kmax=0))
    with pytest.raises(DomainError):
        run_parity_tail(make_config("parity-tail", [0.95], W=32))
    with pytest.raises(DomainError):
        run_parity_tail(make_config("parity-tail", [2.0]))

@pytest.fixture
def m1_csv(make_config):
    config = make_config("m1", [0.3, 0.6], n=20, replicates=50)
    return write_csv(run_m1_curve(config), config.output_path)

def test_plot_script_for_m1(m1_csv):
    script = emit_plot_script(m1_csv, Figure.M1)
    assert script == m1_csv.with_suffix(".gp")
    text = script.read_text(encoding="utf-8")
    assert "set xrange [0:1]" in text
    assert "set yrange [0:1]" in text
    assert 'set datafile separator ","' in text
    assert '"q":"exact_m1" with linespoints' in text
    assert '"q":"mc_mean":"mc_se" with yerrorbars' in text
    assert text.rstrip().endswith("pause -1")

def test_plot_axes():
    assert Figure.MU2.value.x_range == (0.0, 25.0)
    assert Figure.MU2.value.y_range == (0.0, 0.5)
    assert Figure.CECO.required_columns() == ["q", "exact_ce", "mc_even_n", "se_even_n",
                                              "exact_co", "mc_odd_n", "se_odd_n"]

def test_plot_script_schema_errors(tmp_path, m1_csv):
    with pytest.raises(SchemaError) as missing:
        emit_plot_script(m1_csv, Figure.MU2)
    assert missing.value.missing == ["exact_mu2"]
    assert not m1_csv.with_suffix(".gp").exists()
    with pytest.raises(SchemaError):
        emit_plot_script(tmp_path.joinpath("absent.csv"), Figure.M1)
    empty = tmp_path.joinpath("empty.csv")
    empty.write_text("", encoding="utf-8")
    with pytest.raises(SchemaError):
        emit_plot_script(empty, Figure.M1)
    header_only = tmp_path.joinpath("header.csv")
    header_only.write_text("q,exact_m1,mc_mean,mc_se\n", encoding="utf-8")
    with pytest.raises(SchemaError):
        emit_plot_script(header_only, Figure.M1)
    assert not any(tmp_path.glob("*.gp"))

def test_exact_selftest_checks_pass():
    rows = _oracle_checks() + _series_checks(1e-8)
    failing = [row["check"] for row in rows if not row["pass"]]
    assert not failing

@pytest.mark.slow
def test_selftest(make_config):
    frame = run_selftest(make_config("selftest", [1.0], n=100, replicates=20_000))
    assert list(frame.columns) == SELFTEST_COLUMNS
    assert frame["pass"].all()
    assert not math.isnan(frame["value"].iloc[-1])

@pytest.mark.slow
def test_mu2_curve_at_desk_scale(make_config):
    frame = run_mu2_curve(make_config("mu2", [2.0], n=1000, replicates=10_000,
                                      workers=os.cpu_count()))
    assert frame["pass"].all()
    assert abs(frame["bias_se"].iloc[0]) <= 4.0

@pytest.mark.slow
def test_ceco_curve_at_desk_scale(make_config):
    frame = run_ceco_curve(make_config("ceco", [2.0], n=1000, replicates=10_000,
                                       workers=os.cpu_count()))
    assert frame["n"].tolist() == [1000]
    assert frame["pass"].all()

@pytest.mark.slow
def test_parity_tail_ordering_at_desk_scale(make_config):
    frame = run_parity_tail(make_config("parity-tail", [0.5], replicates=10_000,
                                        workers=os.cpu_count()))
    assert (frame["n"] == 2 * constants.DEFAULT_WINDOW + 1).all()
    ordered = frame.set_index("m")["ordered"]
    assert ordered[2] and ordered[3]
    assert frame["pass"].all()
