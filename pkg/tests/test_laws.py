import pytest

from fnalg.catalog import FAULTS, build_catalog
from fnalg.laws import SUITES, LawResult, run_suite


@pytest.fixture(scope="module")
def clean():
    return build_catalog()


@pytest.mark.parametrize("suite", SUITES)
def test_suites_pass_on_clean_catalog(suite, clean):
    failures = [r.line() for r in run_suite(suite, clean) if not r.passed]
    assert failures == []


EXPECTED = {
    "wrong-inverse": "inverse.roundtrip[succ]",
    "wrong-derivative": "derivative.closed-form-vs-fd[sin]",
    "broken-perm": "perm.catalog-valid",
}


@pytest.mark.parametrize("fault", FAULTS)
def test_each_fault_is_caught(fault):
    failed = [f"{r.suite}.{r.law}" for r in run_suite("all", build_catalog(fault)) if not r.passed]
    assert any(name.startswith(EXPECTED[fault]) for name in failed)


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("everything", build_catalog())


def test_result_line_format():
    r = LawResult("inverse", "roundtrip[x]", False, 0.5, 1e-8, -0.1)
    assert r.line() == "FAIL inverse.roundtrip[x] error=0.5 tol=1e-08 worst_at=-0.1"
