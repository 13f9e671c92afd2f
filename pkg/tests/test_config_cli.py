import json
import math

import pytest

from abelmix.cli import main, run
from abelmix.config import RunConfig, parse_config
from abelmix.exceptions import ConfigError


def test_parse_walk_defaults():
    cfg = parse_config('{"walk":{"moduli":[8],"generators":[[1]]}}')
    assert cfg.walk.moduli == (8,) and cfg.walk.generators == ((1,),)
    assert cfg.epsilon == 0.05 and cfg.kappa is None and cfg.t_cap is None


def test_parse_family():
    cfg = parse_config({"family": {"kind": "hypercube", "sizes": [4, 5, 6]}})
    assert cfg.family.kind == "hypercube" and cfg.family.sizes == (4, 5, 6)


@pytest.mark.parametrize(
    "doc, field",
    [
        ({"walk": {"generators": [[1]]}}, "moduli"),
        ({"walk": {"moduli": [8], "generators": [[1]]}, "bogus": 1}, "bogus"),
        ({"walk": {"moduli": [1], "generators": [[1]]}}, "moduli"),
        ({"epsilon": 2}, "epsilon"),
        ({"family": {"kind": "torus"}}, "kind"),
        ({"simulate": {"seed": -1}}, "seed"),
    ],
)
def test_parse_errors_name_field(doc, field):
    with pytest.raises(ConfigError, match=field):
        parse_config(doc)


def test_invalid_json():
    with pytest.raises(ConfigError):
        parse_config("{walk:")


def test_exp_epsilon_and_round_trip():
    cfg = parse_config({"walk": {"moduli": [16], "generators": [1]}, "epsilon": {"exp": 240}, "kappa": 2,
                        "t_cap": 100000, "simulate": {"t": 5, "samples": 10, "seed": 3}})
    assert cfg.epsilon == math.exp(-240) and cfg.epsilon_neg_log == 240
    assert parse_config(cfg.to_document()) == cfg
    assert parse_config(cfg.dumps()) == cfg
    fam = parse_config({"family": {"kind": "cycle_pair", "sizes": [16, 32], "pair_rule": "sqrt"}})
    assert parse_config(fam.to_document()) == fam
    custom = parse_config({"family": {"kind": "custom", "walks": [{"moduli": [4, 6], "generators": [[1, 1], [0, 1]]}]}})
    assert parse_config(custom.to_document()) == custom


@pytest.fixture
def cfgfile(tmp_path):
    def write(doc):
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps(doc))
        return str(p)

    return write


Z8 = {"walk": {"moduli": [8], "generators": [[1]]}}


def test_spectrum_csv(cfgfile, capsys):
    assert main(["spectrum", "--config", cfgfile(Z8)]) == 0
    out = capsys.readouterr()
    lines = out.out.splitlines()
    assert lines[0] == "k,lambda" and len(lines) == 9
    assert lines[1] == "0,1"
    assert "lambda_m" in out.err


def test_spectrum_json_product(cfgfile, capsys):
    doc = {"walk": {"moduli": [2, 2], "generators": [[1, 0], [0, 1]]}}
    assert main(["spectrum", "--config", cfgfile(doc), "--format", "json"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["k"] == ["0:0", "0:1", "1:0", "1:1"]
    assert body["lambda"][3] == pytest.approx(-0.6)


def test_mix_and_thresholds(cfgfile, capsys, tmp_path):
    out = tmp_path / "mix.csv"
    assert main(["mix", "--config", cfgfile({**Z8, "t_max": 5}), "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,d_l1,d_tv" and len(lines) == 7 and lines[1] == "0,1.75,0.875"
    assert main(["thresholds", "--config", cfgfile({"walk": {"moduli": [4], "generators": [[1]]}, "epsilon": 0.1})]) == 0
    body = capsys.readouterr().out.splitlines()
    assert body == ["d,t", "0.10000000000000001,2", "0.90000000000000002,0", "0.5,1"]


def test_thresholds_cap_exceeded_exits_1(cfgfile, capsys):
    doc = {"walk": {"moduli": [16], "generators": [[1]]}, "epsilon": {"exp": 240}}
    assert main(["thresholds", "--config", cfgfile(doc)]) == 1
    assert "still" in capsys.readouterr().err


def test_thresholds_deep_epsilon(cfgfile, capsys):
    doc = {"walk": {"moduli": [16], "generators": [[1]]}, "epsilon": {"exp": 240}, "kappa": 2, "t_cap": 100000}
    assert main(["thresholds", "--config", cfgfile(doc), "--format", "json"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["t"][0] > body["t"][1] > 0
    assert body["ratio_floor"]["applicable"] is True
    assert body["ratio_floor"]["floor"] == pytest.approx(240 / (12 * math.pi**2), abs=1e-9)


def test_family_csv_is_deterministic(cfgfile, tmp_path):
    doc = {"family": {"kind": "cycle_single", "sizes": [16, 32, 64]}, "kappa": 2}
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["family", "--config", cfgfile(doc), "--out", str(a)]) == 0
    assert main(["family", "--config", cfgfile(doc), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0] == "N,r,lambda_m,gap,t_eps,t_1meps,ratio,gap_product,log_product,ratio_floor"


def test_bounds_check_walk_and_statuses(cfgfile, capsys):
    assert main(["bounds-check", "--config", cfgfile(Z8)]) == 0
    out = capsys.readouterr()
    assert out.out.splitlines()[0] == "check,instance,lhs,rhs,holds"
    assert "chain_lemma3_final" in out.out
    # a deliberately wrong kappa makes the theta link fail: genuine violation
    assert main(["bounds-check", "--config", cfgfile({**Z8, "kappa": 1e-6})]) == 2
    assert "VIOLATION" in capsys.readouterr().err


def test_simulate(cfgfile, capsys):
    doc = {**Z8, "simulate": {"t": 4, "samples": 20000, "seed": 42}}
    assert main(["simulate", "--config", cfgfile(doc)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "x,p_exact,p_empirical,band,within" and len(lines) == 9


def test_validation_errors_exit_1(cfgfile, capsys):
    assert main(["mix", "--config", cfgfile({"walk": {"generators": [[1]]}})]) == 1
    assert "moduli" in capsys.readouterr().err
    assert main(["spectrum", "--config", cfgfile({"walk": {"moduli": [4], "generators": [[2]]}})]) == 1
    assert main(["family", "--config", cfgfile(Z8)]) == 1
    assert main(["spectrum", "--config", "/nonexistent.json"]) == 1


def test_run_does_not_mutate_config():
    cfg = parse_config({**Z8, "subcommand": "spectrum"})
    before = cfg.to_document()
    assert run(cfg) == 0
    assert cfg.to_document() == before
