import os
import pathlib

import pytest

import rainrule

SOURCE = pathlib.Path(os.environ.get("RAINRULE_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))
FIXTURES = SOURCE / "data" / "fixtures"
TINY = SOURCE / "tests" / "fixtures" / "tiny_odi.json"


def test_worked_example():
    fit = rainrule.PolyFit(-0.0031, 1.0298, 0.0)
    scenario = rainrule.InterruptionScenario(n=120, m=180, N=300, target_score=275, current_score=100, wickets=2)
    result = rainrule.revise_target(fit, scenario)
    assert result.revised_total == 230
    assert result.to_win == 231
    assert 0.745 <= result.ratio <= 0.750
    assert rainrule.area_full(fit, 300) == pytest.approx(2990700.0, rel=1e-12)
    assert rainrule.area_interrupted(fit, 120, 180, 300) == pytest.approx(2234793.6, rel=1e-12)


def test_invalid_scenario_raises():
    fit = rainrule.PolyFit(-0.0031, 1.0298, 0.0)
    scenario = rainrule.InterruptionScenario(n=200, m=100, N=300, target_score=275, current_score=100)
    with pytest.raises(rainrule.RainruleError, match="m:"):
        rainrule.resource_ratio(fit, scenario)


def test_parse_and_trajectory():
    parsed = rainrule.parse_match(TINY.read_bytes(), match_id="tiny")
    match = parsed.match
    assert match.format == rainrule.MatchFormat.ODI
    assert match.date == "2019-06-02"
    traj = rainrule.trajectory(match.innings[0], match.format)
    assert [(p.ball, p.cumulative_runs, p.wickets_fallen) for p in traj.points] == [
        (1, 1, 0), (2, 6, 0), (3, 6, 0), (4, 6, 1), (5, 7, 1)]


def test_parse_error_carries_position():
    with pytest.raises(rainrule.ParseError) as info:
        rainrule.parse_match(b'{\n "info": [,]\n}')
    assert info.value.args[2] == 2


def test_corpus_pipeline():
    corpus = rainrule.load_corpus(str(FIXTURES))
    assert len(corpus.matches) == 72
    assert not corpus.diagnostics

    values = rainrule.totals(corpus.matches, rainrule.MatchFormat.ODI, 1)
    hist = rainrule.build_histogram(values, rainrule.default_bin_width(rainrule.MatchFormat.ODI))
    assert sum(hist.counts) == len(values) == hist.n_samples
    normal = rainrule.fit_normal(hist)
    assert normal.sigma > 0

    curve = rainrule.wicket_curve(corpus.matches, rainrule.MatchFormat.ODI, 1, 0, min_support=3)
    fit = rainrule.fit_poly(curve, 3)
    assert fit(0.0) == 0.0

    family = rainrule.fit_dl_family(corpus.matches, rainrule.MatchFormat.ODI, min_support=3)
    table = rainrule.resource_table(family, 50)
    assert table.percentage(50, 0) == 100.0
    assert table.percentage(0, 3) == 0.0
    assert table.to_csv().startswith("overs_remaining,w0,")
