import pytest

from mahlerexp.verify import FIXTURES, periodicity_evidence, run_fixture, scaled_parities, stern_pattern


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_passes(name):
    res = run_fixture(name)
    failed = [c.name for c in res.checks if not c.passed]
    assert not failed


def test_unknown_fixture():
    with pytest.raises(ValueError):
        run_fixture("nope")


def test_scaled_parities_marks_non_integers():
    assert scaled_parities([1, 2, 3, 8], 1) == [1, 1, None, 1]


def test_stern_pattern_phase():
    assert [stern_pattern(n) for n in range(2, 10)] == [1, 1, 0, 0, 1, 1, 0, 0]


def test_periodicity_evidence_small_horizon():
    ev = periodicity_evidence("case_iv_F3", 30)
    assert ev["passed"]
    assert ev["runs"][0]["table"]["period"] == ev["runs"][1]["table"]["period"]


def test_json_shape():
    js = run_fixture("cantor_mod3").to_json()
    assert set(js) == {"fixture", "claim", "checked_range", "passed", "checks"}
