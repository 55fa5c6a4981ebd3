from tsbridge import harness
from tsbridge.embed import is_reversible_lts
from tsbridge.minimise import min_lts
from tsbridge.oracle import random_reversible_lts


def test_names_are_unique():
    assert len(set(harness.THEOREM_NAMES)) == len(harness.THEOREM_NAMES)


def test_trial_specs_depend_only_on_seed_and_index():
    assert harness.trial_spec("42", 3, 8) == harness.trial_spec("42", 3, 8)
    assert harness.trial_spec("42", 3, 8) != harness.trial_spec("43", 3, 8)
    assert all(1 <= harness.trial_spec("s", i, 4).n_states <= 4 for i in range(50))


def test_example_check():
    assert harness.check_example()


def test_failing_trial_is_reported_and_replayable():
    report = harness.run(trials=2, seed="42", only=["reversible-lts-dsbb"])
    (res,) = report.results
    assert res.failing == ["42/1"]
    assert "FAIL  reversible-lts-dsbb  1/2  failing trials: 42/1" in report.render()
    t = random_reversible_lts(harness.trial_spec("42", 1, 8))
    assert is_reversible_lts(t) == [] and is_reversible_lts(min_lts(t, "dsbb")) != []


def test_crash_counts_as_failure(monkeypatch):
    def boom(_):
        raise RuntimeError("bang")

    broken = harness.Theorem("roundtrip-ks", "lts", boom, "")
    monkeypatch.setattr(harness, "THEOREMS", (broken,))
    report = harness.run(trials=1, seed="x", only=["roundtrip-ks"])
    assert report.results[0].failing == ["x/0 (RuntimeError: bang)"]
    assert not report.ok
