"""Corpus integrity, the verification harness, mutation, CLI plumbing."""

import json
import subprocess
import sys

import pytest

from conftest import nat, natlist

from stepbound.corpus import Relation, corpus
from stepbound.harness import (
    assert_helpers_cost_free, mutated_corpus, reports_to_json, run_all,
    verify, zero_steps,
)
from stepbound.semantics import EvalMode, get_evaluator
from stepbound.typecheck import check_program

COST = EvalMode.COST_COUNTING


def by_name(name):
    return next(s for s in corpus() if s.name == name)


def test_corpus_contents():
    specs = corpus()
    assert len(specs) >= 15
    names = {s.name for s in specs}
    assert "isort-upper" in names and "sublist-binomial" in names
    assert by_name("isort-upper").relation is Relation.LEQ_UPPER
    assert by_name("sublist-binomial").relation is Relation.EQUAL


def test_corpus_programs_typecheck_and_share_types():
    for spec in corpus():
        check_program(spec.program)
        check_program(spec.bound)
        assert spec.program.declared_ty == spec.bound.declared_ty
        assert spec.program.theory == spec.bound.theory


def test_spec_helpers_are_cost_free():
    assert_helpers_cost_free()


def test_verify_double_exact_costs():
    rep = verify(by_name("double-closed-form"))
    assert rep.verdict == "holds"
    assert rep.max_cost == 16 and rep.min_cost == 0


def test_verify_isort_upper_worst_case_cost():
    # the domain's costliest input is the reverse-sorted length-5 list:
    # 5*4/2 = 10 comparisons, comfortably under the quadratic bound
    rep = verify(by_name("isort-upper"))
    assert rep.verdict == "holds"
    assert rep.max_cost == 10 and rep.min_cost == 0


def test_empty_list_instances_cost_zero():
    for name in ("isort-upper", "msort-upper", "qsort-upper"):
        spec = by_name(name)
        ev = get_evaluator(spec.program, COST, spec.domain)
        out = ev.outcome((natlist([]),))
        assert out.min_cost() == 0 and out.max_cost() == 0


def test_qsort_nondeterminism_is_benign():
    # every branch returns the reference sort of the input
    spec = by_name("qsort-upper")
    from stepbound.semantics import enumerate_inputs

    ev = get_evaluator(spec.program, COST, spec.domain)
    _, inputs = enumerate_inputs(spec.program.declared_ty, spec.domain)
    for (inp,) in inputs:
        out = ev.outcome((inp,))
        xs = sorted(x[1] for x in inp[1])
        expected = natlist(xs)
        assert out.branches, "qsort must not fail"
        for cost, value in out.branches:
            assert value == expected
            assert cost <= len(xs) ** 2


def test_msort_comparisons_within_nlogn():
    import math

    spec = by_name("msort-upper")
    from stepbound.semantics import enumerate_inputs

    ev = get_evaluator(spec.program, COST, spec.domain)
    _, inputs = enumerate_inputs(spec.program.declared_ty, spec.domain)
    for (inp,) in inputs:
        out = ev.outcome((inp,))
        n = len(inp[1])
        lg = math.ceil(math.log2(n)) if n > 1 else 0
        assert out.cost <= n * lg
        assert out.value == natlist(sorted(x[1] for x in inp[1]))


def test_hypothesis_specs_report_admitted_counts():
    rep = verify(by_name("twice-hypothesis"))
    assert rep.verdict == "holds"
    assert rep.admitted is not None and rep.admitted >= 50
    assert "not a proof" in rep.note


def test_hypothesis_failure_names_the_candidate():
    import dataclasses

    from stepbound.costs import SEQ_NAT
    from stepbound.syntax import (
        CostLit, FTy, Lam, NAT, Program, Ret, Step, Triv, UTy,
    )

    spec = by_name("twice-hypothesis")
    # one step cannot cover two runs of a one-step argument
    bad_bound = Program(
        "twice-bad-bound", spec.bound.theory, SEQ_NAT,
        Lam("e", UTy(FTy(NAT)), Step(CostLit(1), Ret(Triv()))),
        spec.bound.declared_ty,
    )
    rep = verify(dataclasses.replace(spec, bound=bad_bound))
    assert rep.verdict == "fails"
    assert rep.counterexample["input"].startswith("argument ")


def test_hypothesis_inconclusive_when_too_few_admitted():
    spec = by_name("twice-hypothesis")
    rep = verify(spec, domain_override={"hyp_candidates": 30})
    assert rep.verdict in ("inconclusive", "holds")
    strict = verify(spec, domain_override={
        "hyp_candidates": 3, "hyp_min_admitted": 50,
    })
    assert strict.verdict == "inconclusive"


def test_mutated_isort_breaks_lower_bound():
    specs = mutated_corpus("isort")
    lower = next(s for s in specs if s.name == "isort-lower")
    rep = verify(lower)
    assert rep.verdict == "fails"
    assert rep.counterexample is not None
    assert rep.counterexample["input"]  # the failing list is reported


def test_mutated_isort_upper_still_holds():
    specs = mutated_corpus("isort")
    upper = next(s for s in specs if s.name == "isort-upper")
    assert verify(upper).verdict == "holds"


def test_zero_steps_strips_charges():
    spec = by_name("double-closed-form")
    mutated = zero_steps(spec.program.body)
    import dataclasses

    prog = dataclasses.replace(spec.program, body=mutated)
    ev = get_evaluator(prog, COST, spec.domain)
    out = ev.outcome((nat(5),))
    assert out.cost == 0 and out.value == nat(10)


def test_mutate_unknown_name_raises():
    with pytest.raises(ValueError):
        mutated_corpus("no-such-program")


def test_run_all_single_spec():
    reports, law_reports, code = run_all(spec_name="double-closed-form")
    assert code == 0 and len(reports) == 1 and not law_reports


def test_run_all_unknown_spec():
    with pytest.raises(ValueError):
        run_all(spec_name="missing")


def test_json_report_schema():
    reports, law_reports, _ = run_all(spec_name="double-closed-form")
    payload = json.loads(reports_to_json(reports, law_reports))
    assert isinstance(payload, list)
    entry = payload[0]
    for key in ("name", "relation", "verdict", "domain", "max_cost",
                "min_cost", "millis"):
        assert key in entry
    assert entry["verdict"] == "holds"


def test_cli_single_spec_and_json(tmp_path):
    out = tmp_path / "report.json"
    proc = subprocess.run(
        [sys.executable, "-m", "stepbound.cli", "check",
         "--spec", "double-closed-form", "--json", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert "double-closed-form" in proc.stdout
    payload = json.loads(out.read_text())
    assert payload[0]["name"] == "double-closed-form"


def test_cli_mutation_run_fails(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "stepbound.cli", "check",
         "--spec", "isort-lower", "--mutate", "isort"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 1
    assert "fails" in proc.stdout
    assert "counterexample" in proc.stdout


def test_domain_override_flows_through():
    rep = verify(by_name("double-closed-form"),
                 domain_override={"nat_max": 5})
    assert rep.max_cost == 5
