import json

import pytest

from dhomotopy.homology import HomologyGroup
from dhomotopy.verify import (SUITES, VerificationReport, groups_str, is_identity_on, run_suite, same_groups,
                              suite_smooth)


def test_report_status_rules():
    R = VerificationReport("demo")
    R.add("a", True)
    R.add("b", None, "not applicable")
    assert R.passed and R.status == "pass"
    assert [c.status for c in R.checks] == ["pass", "skip"]
    R.add("c", False, 0.5, 1e-12)
    assert not R.passed
    assert R.lines()[-1] == "overall FAIL (2/3 checks)"
    assert any("measured=5.000e-01  tol=1.000e-12" in line for line in R.lines())


def test_report_dict_is_json():
    R = VerificationReport("demo", params={"p": 2})
    R.add("groups", True, [HomologyGroup(1), HomologyGroup(0, (2,))])
    d = json.loads(json.dumps(R.to_dict()))
    assert d["overall"] == "pass" and d["checks"][0]["measured"] == ["Z", "Z/2"]


def test_helpers():
    Z, O = HomologyGroup(1), HomologyGroup()
    assert same_groups([Z, O, O], [Z])
    assert not same_groups([Z, Z], [Z])
    assert groups_str([Z, O, Z]) == "(Z, 0, Z)"
    # torsion coordinates come first and are read mod their order
    assert is_identity_on([[3, 0], [0, 1]], HomologyGroup(1, (2,)))
    assert not is_identity_on([[1, 0], [0, 3]], HomologyGroup(1, (2,)))


@pytest.mark.parametrize("name", [s for s in SUITES if s != "smooth"])
def test_suites_pass(name):
    R = run_suite(name, seed=1)
    assert R.passed, [c for c in R.checks if c.status == "fail"]
    assert R.checks


def test_smooth_suite_single_stratum():
    R = suite_smooth(p=3, k=1, seed=2, samples=200)
    assert R.passed
    eq = next(c for c in R.checks if "equivariance" in c.name)
    assert eq.measured["moved"] > 0


def test_suites_are_deterministic():
    assert run_suite("axioms", seed=4).to_dict() == run_suite("axioms", seed=4).to_dict()


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nope")
