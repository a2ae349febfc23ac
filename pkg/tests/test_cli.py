import json

import pytest

from fiberplan.bench import BenchSuite
from fiberplan.cli import (ConfigError, ProblemConfig, emit_config, main,
                           parse_config)
from fiberplan.svgplot import box_plot, line_plot


# -- config parsing -----------------------------------------------------------

def test_parse_problem_config_fills_defaults():
    cfg = parse_config('{"environment":"hypercube","n":100,'
                       '"planner":"qrrt","seed":7}')
    assert isinstance(cfg, ProblemConfig)
    assert cfg.environment == "hypercube"
    assert cfg.env_params == {"n": 100}
    assert cfg.planner == "qrrt" and cfg.seed == 7
    assert cfg.time_limit == 60.0
    assert cfg.build_config().goal_bias == 0.05


def test_parse_config_roundtrip():
    text = '{"environment":"wall_gap","gap_width":1.2,"planner":"qmp",' \
           '"seed":3,"time_limit":20.0,"goal_bias":0.1}'
    cfg = parse_config(text)
    again = parse_config(emit_config(cfg))
    assert again == cfg


def test_parse_rejects_unknown_planner():
    with pytest.raises(ConfigError) as e:
        parse_config('{"environment":"hypercube","n":5,"planner":"xyz"}')
    assert "planner" in str(e.value)


def test_parse_rejects_out_of_range_beta():
    with pytest.raises(ConfigError) as e:
        parse_config('{"environment":"hypercube","n":5,"beta_fixed":1.5}')
    assert "beta_fixed" in str(e.value)


def test_parse_rejects_unknown_key_and_bad_json():
    with pytest.raises(ConfigError):
        parse_config('{"environment":"hypercube","n":5,"turbo":true}')
    with pytest.raises(ConfigError):
        parse_config("{not json")
    with pytest.raises(ConfigError):
        parse_config('{"environment":"atlantis"}')
    with pytest.raises(ConfigError):
        parse_config('[1,2,3]')


def test_parse_suite_config():
    cfg = parse_config(json.dumps({
        "experiments": [{"environment": "wall_gap", "gap_width": 1.2,
                         "planners": [{"algorithm": "qrrt"}],
                         "runs": 2, "time_limit": 5.0}],
        "base_seed": 4}))
    assert isinstance(cfg, BenchSuite)
    assert cfg.base_seed == 4
    assert cfg.experiments[0].runs == 2
    with pytest.raises(ConfigError):
        parse_config('{"experiments": []}')
    with pytest.raises(ConfigError) as e:
        parse_config(json.dumps({
            "experiments": [{"environment": "wall_gap", "gap_width": 1.2,
                             "planners": [{"algorithm": "warp"}]}]}))
    assert "experiments[0].planners[0].algorithm" in str(e.value)


# -- commands -----------------------------------------------------------------

def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_plan_solved_exit_zero(tmp_path, capsys):
    cfg = write(tmp_path, "p.json",
                {"environment": "wall_gap", "gap_width": 1.2,
                 "planner": "qrrt", "seed": 3, "time_limit": 10.0})
    out = str(tmp_path / "sol.json")
    assert main(["plan", "--config", cfg, "--out", out]) == 0
    doc = json.loads(open(out).read())
    assert doc["status"] == "solved"
    assert doc["cost"] > 0
    assert doc["waypoints"][0] == [2.0, 5.0]
    assert "solved" in capsys.readouterr().out


def test_plan_output_is_byte_identical(tmp_path):
    cfg = write(tmp_path, "p.json",
                {"environment": "wall_gap", "gap_width": 1.2, "seed": 5,
                 "time_limit": 10.0})
    out1, out2 = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    assert main(["plan", "--config", cfg, "--out", out1]) == 0
    assert main(["plan", "--config", cfg, "--out", out2]) == 0
    assert open(out1, "rb").read() == open(out2, "rb").read()


def test_plan_infeasible_exit_two(tmp_path, capsys):
    cfg = write(tmp_path, "p.json",
                {"environment": "wall_gap", "gap_width": 0.8,
                 "planner": "qrrt", "seed": 0, "time_limit": 30.0,
                 "infeasibility_m": 1000})
    out = str(tmp_path / "sol.json")
    assert main(["plan", "--config", cfg, "--out", out]) == 2
    assert "infeasible (confidence 0.999)" in capsys.readouterr().out
    assert json.loads(open(out).read())["confidence"] == pytest.approx(0.999)


def test_plan_flag_overrides(tmp_path):
    cfg = write(tmp_path, "p.json",
                {"environment": "wall_gap", "gap_width": 1.2, "seed": 0})
    out = str(tmp_path / "sol.json")
    assert main(["plan", "--config", cfg, "--planner", "qmpstar",
                 "--seed", "9", "--time-limit", "10", "--out", out]) == 0
    doc = json.loads(open(out).read())
    assert doc["planner"] == "qmpstar" and doc["seed"] == 9


def test_bad_config_exit_one(tmp_path, capsys):
    cfg = write(tmp_path, "p.json", {"environment": "hypercube", "n": 5,
                                     "planner": "xyz"})
    assert main(["plan", "--config", cfg]) == 1
    assert "config error" in capsys.readouterr().err
    assert main(["plan", "--config", str(tmp_path / "missing.json")]) == 1
    assert main(["frobnicate"]) == 1


def test_bench_command_writes_csv(tmp_path):
    cfg = write(tmp_path, "suite.json", {
        "experiments": [{"environment": "wall_gap", "gap_width": 1.2,
                         "planners": [{"algorithm": "qrrt"},
                                      {"algorithm": "qmp"}],
                         "runs": 2, "time_limit": 10.0}]})
    out = str(tmp_path / "bench.csv")
    assert main(["bench", "--config", cfg, "--out", out, "--plot"]) == 0
    rows = open(out).read().strip().split("\n")
    assert len(rows) == 1 + 2 * 2  # header + planners x runs
    assert (tmp_path / "bench.svg").exists()


def test_scaling_command(tmp_path):
    out = str(tmp_path / "scaling.csv")
    assert main(["scaling", "--planner", "qrrt", "--dims", "2,3,4",
                 "--runs", "1", "--time-limit", "15", "--out", out,
                 "--plot"]) == 0
    rows = open(out).read().strip().split("\n")
    assert rows[0] == "n,mean_s"
    assert len(rows) == 4
    assert (tmp_path / "scaling.svg").exists()


# -- svg plotting -------------------------------------------------------------

def test_line_plot_well_formed():
    svg = line_plot({"a": [(1, 1.0), (2, 4.0)], "b": [(1, 2.0), (2, 3.0)]},
                    title="t", xlabel="x", ylabel="y")
    assert svg.startswith("<svg") and svg.endswith("</svg>")
    assert svg.count("<polyline") == 2


def test_line_plot_log_scale():
    svg = line_plot({"a": [(1, 0.001), (10, 100.0)]}, logy=True)
    assert "<polyline" in svg


def test_box_plot_well_formed():
    svg = box_plot({"qrrt": [1.0, 2.0, 3.0, 4.0], "qmp": [2.0, 2.5]},
                   title="runtimes", ylabel="s")
    assert svg.count("<rect") >= 3  # background, frame, two boxes
    assert "qrrt" in svg


def test_plots_reject_empty_input():
    with pytest.raises(ValueError):
        line_plot({})
    with pytest.raises(ValueError):
        box_plot({})
