from twentyv import identities


def test_registry_runs_selected_checks():
    res = identities.run(["counts", "evenodd", "top-coefficient"], m_max=6)
    assert [r.name for r in res] == ["counts", "evenodd", "top-coefficient"]
    assert all(r.passed for r in res)


def test_exact_failures_are_reported():
    res = identities._exact("demo", [("a", 1, 1), ("b", 2, 3)])
    assert not res.passed and res.checked == 2
    assert res.failures == [{"case": "b", "left": "2", "right": "3"}]


def test_numeric_nan_fails():
    res = identities._numeric("demo", [("a", 1e-20), ("b", float("nan"))], 1e-10)
    assert not res.passed and res.failures[0]["case"] == "b"


def test_small_numeric_checks_pass():
    for r in (identities.check_weight_symmetry(200),
              identities.check_saddle(3, 10),
              identities.check_inhomogeneous(ms=(2,), draws=3)):
        assert r.passed, r.failures
