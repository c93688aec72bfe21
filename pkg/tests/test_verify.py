import json

import numpy as np
import pytest

from entanglemetry.catalog import BLOCK_SIZE, EnsembleSpec
from entanglemetry.errors import ConfigError
from entanglemetry.verify import (
    ALL_CHECKS,
    HIST_BINS,
    THEOREM_CHECKS,
    CampaignConfig,
    CampaignResult,
    Check,
    parse_checks,
    run_campaign,
    saturation_probe,
)


def config(name="haar4", count=200, seed=7, checks=ALL_CHECKS, **kw):
    return CampaignConfig(EnsembleSpec.from_name(name, seed, count), checks, **kw)


def test_parse_checks():
    assert parse_checks("all") == ALL_CHECKS
    assert parse_checks("theorems") == THEOREM_CHECKS
    assert parse_checks("t2, fig3") == (Check.T2_SQUARED, Check.T2_UNSQUARED, Check.FIG3_COLLINEAR)
    assert parse_checks("T1,t1") == (Check.T1,)
    with pytest.raises(ConfigError):
        parse_checks("t9")
    with pytest.raises(ConfigError):
        parse_checks(" , ")


def test_config_validation():
    with pytest.raises(ConfigError):
        config(tolerance=0)
    with pytest.raises(ConfigError):
        config(tolerance=1e-6, zero_threshold=1e-7)
    with pytest.raises(ConfigError):
        config(checks=())
    with pytest.raises(ConfigError):
        config(name="haar3")


def test_check_tolerances():
    cfg = config()
    assert cfg.check_tolerance(Check.FIG3_COLLINEAR) == 1e-6
    assert cfg.check_tolerance(Check.T3_STRICT) == 1e-12
    assert cfg.check_tolerance(Check.T1) == 1e-9


@pytest.mark.parametrize("name", ["haar4", "product13", "product22", "fullproduct", "gabcd", "lab3"])
def test_every_ensemble_passes(name):
    res = run_campaign(config(name, count=300))
    assert res.passed, {k: v.violations[:3] for k, v in res.checks.items() if not v.passed}
    assert res.samples_evaluated == 300


def test_applicability_by_ensemble():
    haar = run_campaign(config("haar4", 100))
    assert haar[Check.FIG2_REDUCTION].not_applicable == 100
    assert haar[Check.GME_POSITIVE].passes == 100
    p13 = run_campaign(config("product13", 100))
    assert p13[Check.FIG2_REDUCTION].passes == 100
    assert p13[Check.BISEPARABLE_ZERO].passes == 100
    p22 = run_campaign(config("product22", 100))
    assert p22[Check.FIG3_COLLINEAR].passes == 100


def test_counts_and_histogram_add_up():
    res = run_campaign(config("haar4", 150))
    for r in res.checks.values():
        assert r.passes + r.failures + r.not_applicable == r.count == 150
        h = r.histogram
        assert len(h["counts"]) == HIST_BINS
        assert h["underflow"] + sum(h["counts"]) + h["overflow"] <= r.count - r.not_applicable


def test_thread_count_does_not_change_result():
    cfg = config("haar4", 2 * BLOCK_SIZE + 17, checks=THEOREM_CHECKS)
    a = run_campaign(cfg, threads=1).to_json()
    b = run_campaign(cfg, threads=3).to_json()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_fail_fast_stops_at_first_violation():
    # an impossible strictness margin makes every sample fail
    cfg = config("haar4", 500, checks=(Check.T3_STRICT,), strict_tol=10.0, fail_fast=True)
    res = run_campaign(cfg)
    assert not res.passed
    assert res.samples_evaluated == 1
    assert res[Check.T3_STRICT].violations[0][0] == 0
    full = run_campaign(config("haar4", 500, checks=(Check.T3_STRICT,), strict_tol=10.0))
    assert full[Check.T3_STRICT].failures == 500


def test_violations_carry_indices_and_margins():
    res = run_campaign(config("haar4", 20, checks=(Check.T1,), tolerance=1e-9))
    assert res[Check.T1].violations == []
    assert res[Check.T1].min_margin > 0


def test_saturation_probe():
    for name in ("product13", "haar4"):
        res = saturation_probe(config(name, 200))
        assert res.passed
    res = saturation_probe(config("product13", 200))
    assert res[Check.SATURATION_ADJACENT].passes == 200


def test_result_json_round_trip():
    res = run_campaign(config("product22", 50))
    again = CampaignResult.from_json(json.loads(json.dumps(res.to_json())))
    assert again == res
    assert np.isclose(again[Check.FIG3_COLLINEAR].tolerance, 1e-6)
