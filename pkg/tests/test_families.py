import json
import math

import pytest

from abelmix.exceptions import NotIrreducibleError
from abelmix.families import (
    REPORT_HEADER,
    FamilyPreset,
    FamilyReport,
    FamilyRow,
    build_family,
    default_t_cap,
    export_report,
    family_profile,
    pair_rule,
    report_from_json,
)

from conftest import cyclic, hypercube


def test_build_presets():
    walks = build_family(FamilyPreset("cycle_single", tuple(2**e for e in range(6, 13))))
    assert len(walks) == 7 and {w.r for w in walks} == {1}
    cubes = build_family(FamilyPreset("hypercube", tuple(range(4, 12))))
    assert [w.r for w in cubes] == list(range(4, 12))
    (w,) = build_family(FamilyPreset("cycle_sqrt", (100,)))
    assert w.group.moduli == (100,) and [a.coords[0] for a in w.generators] == [1, 10]
    (w,) = build_family(FamilyPreset("cycle_pair", (64,), "5"))
    assert [a.coords[0] for a in w.generators] == [1, 5]
    (w,) = build_family(FamilyPreset("custom", walks=(((4, 6), ((1, 1), (0, 1))),)))
    assert w.group.order == 24


def test_pair_rules():
    assert pair_rule("sqrt")(99) == 9
    assert pair_rule("cbrt")(64) == 4 and pair_rule("cbrt")(63) == 3
    assert pair_rule("7")(1000) == 7
    with pytest.raises(ValueError):
        pair_rule("n/2")


def test_preset_validation():
    with pytest.raises(ValueError):
        FamilyPreset("cycle_single", (8, 8))
    with pytest.raises(ValueError):
        FamilyPreset("torus", (8,))


def test_build_family_names_failing_instance():
    with pytest.raises(NotIrreducibleError, match=r"\(4,\)"):
        build_family(FamilyPreset("custom", walks=(((4,), ((2,),)),)))


def test_default_caps():
    assert default_t_cap(cyclic(64, 1)) == 10 * 64**2
    assert default_t_cap(hypercube(8)) == math.ceil(10 * 8 * (math.log(8) + 3))


def test_empty_family():
    rep = family_profile([], 0.05)
    assert rep.rows == []
    assert export_report(rep, "csv") == ",".join(REPORT_HEADER) + "\n"


def test_profile_rows_sorted_with_floor():
    walks = [cyclic(64, 1), cyclic(16, 1), cyclic(32, 1, 5)]
    rep = family_profile(walks, 0.05, kappa=2.0)
    assert [row.N for row in rep.rows] == [16, 32, 64]
    assert rep.rows[0].ratio_floor == pytest.approx(-math.log(0.05) / (12 * math.pi**2))
    assert rep.rows[1].ratio_floor is None  # r = 2
    assert family_profile([cyclic(16, 1)], 0.05).rows[0].ratio_floor is None


def test_profile_rejects_bad_epsilon():
    with pytest.raises(ValueError):
        family_profile([cyclic(8, 1)], 0.5)


def test_export_csv_format():
    rep = FamilyReport("custom", 0.05, None, False, [FamilyRow(4, 1, 1 / 3, 2 / 3, 2, 0, None, 0.0, 0.0)], ["Z/4{1}"])
    text = export_report(rep, "csv")
    lines = text.split("\n")
    assert lines[0] == "N,r,lambda_m,gap,t_eps,t_1meps,ratio,gap_product,log_product,ratio_floor"
    assert lines[1] == "4,1,0.33333333333333331,0.66666666666666663,2,0,,0,0,"
    assert lines[2] == "" and len(lines) == 3
    assert "\r" not in text


def test_export_json_round_trip_and_determinism():
    rep = family_profile([cyclic(16, 1), cyclic(4, 1)], 0.05, kappa=2.0)
    text = export_report(rep, "json")
    assert report_from_json(text) == rep
    assert json.loads(text)["rows"][0]["ratio"] is None  # Z/4: t(0.95) = 0
    again = family_profile([cyclic(16, 1), cyclic(4, 1)], 0.05, kappa=2.0)
    assert export_report(again, "csv") == export_report(rep, "csv")
    with pytest.raises(ValueError):
        export_report(rep, "xml")


def test_hypercube_report_is_contrast_only():
    rep = family_profile(build_family(FamilyPreset("hypercube", (4, 5))), 0.05, kind="hypercube")
    assert rep.contrast_only
    assert json.loads(export_report(rep, "json"))["contrast_only"] is True


FIXTURE = json.loads((__import__("pathlib").Path(__file__).parent / "fixtures" / "family_fixture.json").read_text())


def test_hypercube_thresholds_match_convolution_fixture():
    rows = FIXTURE["hypercube"]
    rep = family_profile(build_family(FamilyPreset("hypercube", tuple(r["d"] for r in rows))), FIXTURE["epsilon"], kind="hypercube")
    assert [(r.t_eps, r.t_1meps) for r in rep.rows] == [(r["t_eps"], r["t_1meps"]) for r in rows]
    assert [r.t_eps / r.t_1meps for r in rep.rows] == rep.ratios()


def test_cycle_thresholds_match_convolution_fixture():
    from abelmix.mixing import threshold

    for row in FIXTURE["cycle_single"][:4]:
        walk = cyclic(row["N"], 1)
        cap = default_t_cap(walk)
        got = [threshold(walk, d, cap) for d in (0.05, 0.95, 0.5)]
        assert got == [row["t_eps"], row["t_1meps"], row["t_half"]]
