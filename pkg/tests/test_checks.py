import random

from iolb.checks import lemma_suite, oracle_suite, run_all


def test_default_suites_pass():
    results = run_all(seed=0, count=15)
    assert [r.name for r in results] == ["partition lemmas", "tagging inequalities",
                                         "decomposition", "game orderings", "analyzer vs oracle"]
    for r in results:
        assert r.ok, (r.name, r.violations[:1])
        assert r.cases > 0


def test_mutated_checker_fails():
    r = lemma_suite(random.Random(0), 10, mutate=True)
    assert not r.ok


def test_oracle_cases_hold():
    # Jacobi T=3, N=5 with S=3 and N-body N=3 with S=3
    r = oracle_suite()
    assert r.ok and r.cases == 2
    assert not oracle_suite(mutate=True).ok


def test_line_format():
    r = lemma_suite(random.Random(1), 3)
    assert r.line(timing=False) == "pass  partition lemmas: 3 instances, 0 violations"
