import math

import numpy as np
import pytest
from conftest import EX2_A, EX2_B, make

from pencilspec import SearchRegion, TrialConfig, random_trial, run_example
from pencilspec.errors import ValidationError
from pencilspec.core import Pencil
from pencilspec.harness import example4_evaluators, example4_printed_delta, recovery_spectrum, witness_search

EXPECTED_AGREEMENT = {
    (1, "as_printed"): False,
    (1, "corrected"): True,
    (2, "as_printed"): True,
    (2, "corrected"): True,
    (3, "as_printed"): False,
    (3, "corrected"): True,
    (4, "as_printed"): False,
    (4, "corrected"): True,
    (5, "as_printed"): False,
    (5, "corrected"): True,
}


@pytest.mark.parametrize("key", sorted(EXPECTED_AGREEMENT))
def test_example_agreement(key):
    report = run_example(*key)
    assert report.agrees_with_paper is EXPECTED_AGREEMENT[key]
    assert report.as_dict()["example_id"] == key[0]


def test_example1_spectra():
    rep = run_example(1, "as_printed").computed
    assert [(e["re"], e["multiplicity"]) for e in rep["spectrum_1"]["eigenvalues"]] == [(pytest.approx(-1), 1)]
    assert [(e["re"], e["multiplicity"]) for e in rep["spectrum_2"]["eigenvalues"]] == [(pytest.approx(-1.5), 1)]
    corrected = run_example(1, "corrected").computed
    assert corrected["recovery"] == "DoubleRootRegime"
    assert corrected["equivalent_1_3"] is False


def test_example2_sign_and_coincidence():
    rep = run_example(2, "as_printed").computed
    assert rep["delta_global_sign"] == -1
    assert rep["spectra_coincide"] and rep["equivalent"] is False
    assert rep["recovery_status"] == "NonUnique"


def test_example3_corrected_has_no_spectrum():
    rep = run_example(3, "corrected").computed
    assert rep["spectrum_1"]["eigenvalues"] == [] and rep["spectrum_2"]["eigenvalues"] == []
    assert rep["spectrum_1"]["zero_order"] == 1 and rep["spectrum_2"]["zero_order"] == 1
    assert rep["equivalent"] is False


def test_example4_determinants():
    e1, e2 = example4_evaluators(Pencil(-3, 2))
    lam = np.array([0.3 + 0.1j, -1.2 + 0.7j, 1.5 - 1j])
    assert np.allclose(e1(lam), example4_printed_delta(lam), rtol=1e-13)
    assert np.allclose(e2(lam), example4_printed_delta(lam), rtol=1e-13)
    rep = run_example(4, "corrected").computed
    got = sorted(complex(e["re"], e["im"]).imag for e in rep["spectrum_1"]["eigenvalues"])
    assert got == pytest.approx([2 * math.pi * k for k in range(-3, 4)], abs=1e-9)
    assert rep["spectrum_1"]["zero_order"] == 2


def test_example5_corrected_integers():
    rep = run_example(5, "corrected").computed
    for key in ("spectrum_1", "spectrum_2"):
        vals = [e["re"] for e in rep[key]["eigenvalues"]]
        assert vals == pytest.approx([n for n in range(-5, 6) if n != 0], abs=1e-9)


def test_example5_printed_first_problem_empty():
    rep = run_example(5, "as_printed").computed
    assert rep["spectrum_1"]["eigenvalues"] == []


def test_run_example_validation():
    with pytest.raises(ValidationError):
        run_example(6)
    with pytest.raises(ValidationError):
        run_example(1, "printed")


def test_random_trial_small():
    summary = random_trial(TrialConfig(rng_seed=42, num_trials=6))
    assert summary.failures == 0
    assert summary.passes + summary.inconclusive == 6
    again = random_trial(TrialConfig(rng_seed=42, num_trials=6))
    assert again.as_dict() == summary.as_dict()


def test_trial_config_validation():
    with pytest.raises(ValidationError):
        TrialConfig(num_trials=0)


def test_witness_for_example2_pair_under_conditions():
    w = witness_search(make(-3, 2, EX2_A), make(-3, 2, EX2_B), SearchRegion(-10, 10, -40, 40))
    assert w.side in ("A-only", "B-only", "multiplicity")


def test_recovery_spectrum_grows_region():
    p = make(1 + 1j, 2, [[1, 0, 1, 0], [0, 1, 0, 1j]])
    spec, eigs = recovery_spectrum(p, 8)
    assert sum(m for _, m in eigs) >= 8
    rest = [abs(z) for z in spec.values if all(z != e for e, _ in eigs)]
    assert max(abs(z) for z, _ in eigs) <= min(rest, default=math.inf) + 1e-12


def test_hundred_trials_seed_42():
    summary = random_trial(TrialConfig(rng_seed=42, num_trials=100))
    assert summary.failures == 0
    assert summary.passes + summary.inconclusive == 100
