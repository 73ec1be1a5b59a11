import json

import pytest

from lipsurf.bounds import HypothesisError, spread_tail_bound, surface_tail_bound
from lipsurf.harness import (TAIL_CSV_HEADER, BudgetExceededError, ConfigError,
                             Experiment, cover_tail_curve, equivariance_check,
                             existence_curve, experiment_from_config,
                             monotonicity_check, run_experiment,
                             spread_tail_curve, surface_tail_curve,
                             surface_validity)
from lipsurf.lattice import BoxRegion
from lipsurf.oracle import exact_event_prob, walk_reach
from lipsurf.reach import StepSet


def test_experiment_from_config_valid():
    exp = experiment_from_config({"kind": "f_tail", "d": 2, "p": 0.99,
                                  "replicates": 10, "seed": 3, "k_max": 2})
    assert exp.kind == "f_tail" and exp.replicates == 10
    assert exp.step_mode is StepSet.FULL


def test_experiment_from_config_errors_name_fields():
    with pytest.raises(ConfigError, match="kind"):
        experiment_from_config({})
    with pytest.raises(ConfigError, match="wibble"):
        experiment_from_config({"kind": "f_tail", "wibble": 3})
    with pytest.raises(ConfigError, match="'p'"):
        experiment_from_config({"kind": "f_tail", "p": "high"})
    with pytest.raises(ConfigError, match="p_grid"):
        experiment_from_config({"kind": "existence_curve", "p_grid": [0.99, 0.95]})
    with pytest.raises(ConfigError, match="step_mode"):
        experiment_from_config({"kind": "f_tail", "step_mode": "sideways"})
    with pytest.raises(ConfigError, match="step_mode"):
        experiment_from_config({"kind": "radh_tail",
                                "step_mode": "no-straight-down"})
    with pytest.raises(ConfigError, match="replicates"):
        experiment_from_config({"kind": "f_tail", "replicates": 0})


def test_surface_tail_k0_row_and_bounds_column():
    exp = Experiment(kind="f_tail", d=2, p=0.99, replicates=400, seed=5, k_max=3)
    curve = surface_tail_curve(exp)
    assert curve.rows[0].p_lo == curve.rows[0].p_hi == 1.0
    assert curve.rows[0].bound >= 1.0
    for r in curve.rows:
        assert r.bound == surface_tail_bound(2, 0.99, r.k)
        assert r.p_lo <= r.p_hi
    assert curve.max_unresolved_frac() <= 0.01


def test_surface_tail_vs_exact_oracle_bracket():
    # exact bracket for P(F(0) > 1) on a 9-site box; the MC interval must
    # intersect it
    d, p = 2, 0.99
    box = BoxRegion((-1, 0), (1, 2))
    bottom = [(-1, 0), (0, 0), (1, 0)]
    side = [s for s in box.sites() if abs(s[0]) == 1]

    def opt_hit(config):
        return (0, 1) in walk_reach(config, bottom, height_floor=0)

    def pes_hit(config):
        return (0, 1) in walk_reach(config, set(bottom) | set(side),
                                    height_floor=0)

    exact_lo = exact_event_prob(d, p, box, opt_hit)
    exact_hi = exact_event_prob(d, p, box, pes_hit)
    exp = Experiment(kind="f_tail", d=d, p=p, replicates=3000, seed=9, k_max=1)
    row = surface_tail_curve(exp).rows[1]
    assert exact_lo <= exact_hi
    assert row.ci_lo <= exact_hi and exact_lo <= row.ci_hi


def test_spread_and_cover_tails():
    exp = Experiment(kind="radh_tail", d=2, p=0.99, replicates=2000, seed=6,
                     k_max=3, box_margin=4, box_height=4, growth_cap=5)
    spread = spread_tail_curve(exp)
    assert spread.rows[0].p_lo == 1.0  # the climb set always holds (0, 0)
    for r in spread.rows:
        assert r.bound == spread_tail_bound(2, 0.99, r.k)
    cover = cover_tail_curve(exp)
    # the cover always contains the center at height >= 1
    assert cover.rows[0].p_lo == 1.0 and cover.rows[1].p_lo == 1.0
    # shifted bound column
    assert cover.rows[1].bound == spread_tail_bound(2, 0.99, 0)
    assert cover.rows[3].bound == spread_tail_bound(2, 0.99, 2)


def test_tail_hypothesis_violation_raises():
    with pytest.raises(HypothesisError):
        surface_tail_curve(Experiment(kind="f_tail", d=2, p=0.9, replicates=5))
    with pytest.raises(HypothesisError):
        spread_tail_curve(Experiment(kind="radh_tail", d=2, p=0.9, replicates=5))


def test_surface_validity_experiment():
    out = surface_validity(Experiment(kind="surface_validity", d=2, p=0.98,
                                      replicates=20, seed=8, base_radius=3))
    assert out["columns_total"] == 20 * 7
    assert out["certified_fraction"] == 1.0
    assert out["openness_violations"] == 0
    assert out["lipschitz_violations"] == 0


def test_existence_curve_monotone_and_labelled():
    exp = Experiment(kind="existence_curve", d=2, p_grid=(0.85, 0.95, 0.999),
                     replicates=30, seed=4, base_radius=3,
                     box_margin=2, box_height=4, growth_cap=2)
    rows = existence_curve(exp)
    fracs = [r["fraction"] for r in rows]
    assert all(a <= b for a, b in zip(fracs, fracs[1:]))
    assert rows[-1]["fraction"] >= 0.9
    assert rows[0]["regime"] == "outside proven regime"  # 0.85 < 8/9
    assert rows[2]["regime"] == "proven"


def test_equivariance_and_monotonicity_checks():
    eq = equivariance_check(Experiment(kind="equivariance", d=3, p=0.98,
                                       replicates=3, seed=2, base_radius=2))
    assert eq["isometries"] == 8 and eq["mismatches"] == 0
    mono = monotonicity_check(Experiment(kind="monotonicity", d=2,
                                         p_grid=(0.97, 0.99), replicates=30,
                                         seed=2, base_radius=5))
    assert mono["violations"] == 0 and mono["pairs_checked"] > 0


def test_run_experiment_deterministic_csv(tmp_path):
    config = {"kind": "radh_tail", "d": 2, "p": 0.99, "replicates": 300,
              "seed": 12, "k_max": 3, "out": str(tmp_path / "a.csv")}
    run_experiment(dict(config))
    config["out"] = str(tmp_path / "b.csv")
    run_experiment(dict(config))
    a = (tmp_path / "a.csv").read_bytes()
    b = (tmp_path / "b.csv").read_bytes()
    assert a == b
    text = a.decode()
    assert text.splitlines()[0] == TAIL_CSV_HEADER
    meta = json.loads((tmp_path / "a.csv.meta.json").read_text())
    assert meta["seed"] == 12 and "wall_time_s" in meta


def test_run_experiment_json_format(tmp_path):
    out = tmp_path / "curve.json"
    run_experiment({"kind": "radh_tail", "d": 2, "p": 0.99, "replicates": 50,
                    "seed": 1, "k_max": 2, "format": "json", "out": str(out)})
    payload = json.loads(out.read_text())
    assert payload["kind"] == "radh_tail"
    assert len(payload["rows"]) == 3


def test_run_experiment_config_file(tmp_path):
    cfg = tmp_path / "exp.json"
    cfg.write_text(json.dumps({"kind": "brw", "d": 2, "p": 0.99,
                               "runs": 200, "generations": 3, "seed": 3}))
    result = run_experiment(str(cfg))
    assert result["csv"].splitlines()[0] == \
        "n,mean_S,se_S,alpha_pow_n,survival_hat,survival_ci_hi,bound"
    assert len(result["payload"]["rows"]) == 4


def test_run_experiment_budget_exceeded(tmp_path):
    out = tmp_path / "tight.csv"
    config = {"kind": "f_tail", "d": 2, "p": 0.95, "replicates": 300,
              "seed": 5, "k_max": 4, "box_height": 3, "box_margin": 1,
              "growth_cap": 0, "unresolved_threshold": 0.0001,
              "out": str(out)}
    with pytest.raises(BudgetExceededError):
        run_experiment(config)
    assert out.exists()  # artifacts are written before the loud failure


def test_oracle_suite_fast_checks():
    from lipsurf.harness import en_check, walk_path_sweep
    assert walk_path_sweep()["passed"]
    assert en_check(2, 0.99, 5)["passed"]
