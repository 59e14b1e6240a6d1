from __future__ import annotations

import pytest

from stskein import convert as C
from stskein.verify import SUITES, run_lemmas, run_verification_suite


@pytest.mark.parametrize("suite", SUITES)
def test_suites_pass(suite):
    rep = run_verification_suite(suite, n_max=4, exp_max=2, count=40, seed=1)
    assert rep.passed, rep.failures[:3]
    assert rep.checked > 0


def test_broken_rule_is_caught():
    def broken(m, k, sign=1, n=None):
        # drop the correction terms: keep only the first summand
        x = C.expand_g_next_t_power(m, k, sign, n)
        items = sorted(x.items(), key=repr)
        return type(x)(x.n, dict(items[:1]))

    rep = run_lemmas(n_max=3, exp_max=2, ops={"expand_g_next_t_power": broken})
    assert not rep.passed
    bad = rep.failures[0]
    assert bad["case"].startswith("expand_g_next_t_power")
    assert "stskein verify --suite lemmas" in bad["repro"]


def test_raising_rule_is_reported():
    def boom(*args):
        raise RuntimeError("no")

    rep = run_lemmas(n_max=2, exp_max=1, ops={"expand_bridge": boom})
    assert any("RuntimeError" in f["detail"] for f in rep.failures)


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_verification_suite("nope")


def test_report_json():
    data = run_verification_suite("relations", n_max=3).to_json()
    assert data["suite"] == "relations" and data["passed"] and data["failures"] == []
