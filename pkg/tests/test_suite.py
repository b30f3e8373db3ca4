import numpy as np

from udfverify import suite


def test_rng_streams_are_reproducible_and_independent():
    a = suite.rng_for(7, 2).integers(0, 1000, 10)
    b = suite.rng_for(7, 2).integers(0, 1000, 10)
    c = suite.rng_for(7, 3).integers(0, 1000, 10)
    assert np.array_equal(a, b) and not np.array_equal(a, c)


def test_random_poly_deterministic():
    p = suite.random_poly(suite.rng_for(1, 2), 3, 3)
    q = suite.random_poly(suite.rng_for(1, 2), 3, 3)
    assert p == q and p.degree() <= 3


def test_exit_codes():
    rep = {"criteria": [{"status": "pass"}, {"status": "unknown"}]}
    assert suite.suite_exit_code(rep, strict=False) == 0
    assert suite.suite_exit_code(rep, strict=True) == 1
    assert suite.suite_exit_code({"criteria": [{"status": "fail"}]}, strict=False) == 1


def test_batteries_have_expected_shape():
    probes = suite.cauchy_battery(7)
    assert len(probes) == 1000
    assert {p[0] for p in probes} == set(suite.FAMILIES)
    assert all(len(p[3]) <= 3 for p in probes)
    assert len(suite.entire0_battery(7)) == 20


def test_run_subset_json_is_sorted():
    rep = suite.run_suite(7, jobs=2, only={1, 4})
    assert [c["id"] for c in rep["criteria"]] == [1, 4]
    text = suite.suite_json(rep)
    assert text == suite.suite_json(suite.run_suite(7, jobs=1, only={1, 4}))
