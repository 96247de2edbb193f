"""Law catalog: names, determinism, mode stability, mutants."""

import random

import pytest

from stepbound.gen import TermGen
from stepbound.laws import catalog, check_law, mutant_catalog
from stepbound.semantics import EvalMode
from stepbound.syntax import Branch, NONDET

EXPECTED_NAMES = {
    "step/zero", "step/plus", "bind/step", "lam/step", "bind/ret",
    "bind/assoc",
    "branch/idl", "branch/idr", "branch/assoc", "branch/comm",
    "branch/idem", "branch/step", "fail/step",
    "flip/zero", "flip/one", "flip/assoc", "flip/comm", "flip/idem",
    "flip/step",
    "get/get", "get/set", "set/get", "set/set", "get/step", "set/step",
}


def test_catalog_has_25_laws():
    laws = catalog()
    assert len(laws) == 25
    assert {l.name for l in laws} == EXPECTED_NAMES


def test_catalog_groups():
    laws = catalog()
    by_theory = {}
    for l in laws:
        by_theory.setdefault(l.theory, []).append(l.name)
    assert len(by_theory[None]) == 6      # step group (4) + monad group (2)
    assert len(by_theory["nondet"]) == 7
    assert len(by_theory["prob"]) == 6
    assert len(by_theory["state"]) == 6


def test_branch_comm_template_swaps_arms():
    law = next(l for l in catalog() if l.name == "branch/comm")
    gen = TermGen(random.Random(0), NONDET)
    lhs, rhs, _ = law.build(gen)
    assert isinstance(lhs, Branch) and isinstance(rhs, Branch)
    assert lhs.left == rhs.right and lhs.right == rhs.left


def test_flip_assoc_carries_side_condition_note():
    law = next(l for l in catalog() if l.name == "flip/assoc")
    assert "1 - (1 - pq)(1 - r)" in law.side_note


def test_each_law_passes_smoke_trials():
    for law in catalog():
        rep = check_law(law, trials=80, seed=0)
        assert rep.passed, (law.name, rep.failures)


def test_laws_pass_in_extensional_mode():
    for law in catalog():
        rep = check_law(law, trials=50, seed=0, mode=EvalMode.EXTENSIONAL)
        assert rep.passed, (law.name, rep.failures)


def test_reports_deterministic_given_seed():
    law = next(l for l in catalog() if l.name == "flip/comm")
    r1 = check_law(law, trials=40, seed=9)
    r2 = check_law(law, trials=40, seed=9)
    assert r1.failures == r2.failures and r1.trials == r2.trials


def test_mutants_are_caught():
    assert len(mutant_catalog()) == 5
    for mutant in mutant_catalog():
        rep = check_law(mutant, trials=200, seed=0)
        assert not rep.passed, f"mutant {mutant.name} slipped through"
        assert rep.failures and "!=" in rep.failures[0]


def test_corrupted_flip_one_reports_witness():
    mutant = next(m for m in mutant_catalog()
                  if m.name == "mutant:flip/one-returns-left")
    rep = check_law(mutant, trials=200, seed=3)
    assert rep.failures


def test_trials_must_be_positive():
    with pytest.raises(ValueError):
        check_law(catalog()[0], trials=0)
