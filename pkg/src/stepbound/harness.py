"""Verification harness: runs bound specs and the law suite, reports results.

``verify`` dispatches on the spec's relation:

* first-order specs tabulate both programs over the enumerated input
  domain and compare outcomes pointwise;
* hypothesis specs generate candidate arguments for the leading suspended
  parameter, keep those satisfying the hypothesis bound, and check the
  conclusion for each admitted candidate.  Fewer than the configured
  minimum of admitted candidates makes the run *inconclusive* rather than
  passing vacuously.

In extensional mode every relation is checked as an equality; an
approximation that holds with costs counted must collapse to an equality
once cost is erased, and running the suite that way exercises exactly
that.

``--mutate NAME`` zeroes every step annotation in the named corpus
program before verification, as a self-test that the harness can fail:
dropping the instrumentation must break that program's cost lower bound.
"""

from __future__ import annotations

import dataclasses
import itertools
import json
import random
import time
from dataclasses import dataclass
from typing import Optional

from .corpus import BoundSpec, Relation, SPEC_HELPERS, corpus
from .costs import SEQ_NAT, cost_to_json
from .gen import TermGen
from .laws import LawReport, catalog, check_law
from .order import (
    OrderError, Verdict, eq_outcome, eq_program, leq_outcome, leq_program,
)
from .semantics import (
    DomainConfig, EvalError, EvalMode, cost_sort_key, enumerate_inputs,
    enumerate_value_ty, get_evaluator, val_str,
)
from .syntax import (
    CostLit, PURE, Program, Step, Term, UTy, term_str, unfold_arrows,
)
from .typecheck import Checker, TypeCheckError


@dataclass
class CheckReport:
    name: str
    relation: str
    verdict: str  # holds | fails | inconclusive
    domain: dict
    max_cost: object = None
    min_cost: object = None
    counterexample: Optional[dict] = None
    millis: float = 0.0
    admitted: Optional[int] = None
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.verdict == "holds"

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "relation": self.relation,
            "verdict": self.verdict,
            "domain": self.domain,
            "max_cost": cost_to_json(self.max_cost)
            if self.max_cost is not None else None,
            "min_cost": cost_to_json(self.min_cost)
            if self.min_cost is not None else None,
            "millis": round(self.millis, 3),
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.admitted is not None:
            out["admitted"] = self.admitted
        if self.note:
            out["note"] = self.note
        return out


def _merge_domain(base: DomainConfig, override: Optional[dict]) -> DomainConfig:
    if not override:
        return base
    return dataclasses.replace(base, **override)


def _cost_stats(program: Program, mode, cfg):
    """Exact max/min cost of the program side over the enumerated domain."""
    ev = get_evaluator(program, mode, cfg)
    try:
        _, inputs = enumerate_inputs(program.declared_ty, cfg)
    except EvalError:
        return None, None  # not enumerable (hypothesis specs)
    lo = hi = None
    for args in inputs:
        out = ev.outcome(args)
        mx, mn = out.max_cost(), out.min_cost()
        if mx is not None and (hi is None or cost_sort_key(mx) > cost_sort_key(hi)):
            hi = mx
        if mn is not None and (lo is None or cost_sort_key(mn) < cost_sort_key(lo)):
            lo = mn
    return hi, lo


def _relation_check(spec: BoundSpec, mode: EvalMode, cfg: DomainConfig) -> Verdict:
    if mode is EvalMode.EXTENSIONAL:
        # with cost collapsed, every stated approximation must be an equality
        return eq_program(spec.program, spec.bound, mode, cfg)
    match spec.relation:
        case Relation.LEQ_UPPER:
            return leq_program(spec.program, spec.bound, mode, cfg)
        case Relation.LEQ_LOWER:
            return leq_program(spec.bound, spec.program, mode, cfg)
        case Relation.EQUAL:
            return eq_program(spec.program, spec.bound, mode, cfg)
        case Relation.EXT_EQUAL:
            return eq_program(spec.program, spec.bound,
                              EvalMode.EXTENSIONAL, cfg)
    raise ValueError(spec.relation)


def verify(
    spec: BoundSpec,
    mode: EvalMode = EvalMode.COST_COUNTING,
    domain_override: Optional[dict] = None,
    seed: int = 0,
) -> CheckReport:
    """Check one bound spec and report verdict plus exact cost statistics."""
    cfg = _merge_domain(spec.domain, domain_override)
    start = time.perf_counter()
    if spec.hypothesis is not None:
        report = _verify_hypothesis(spec, mode, cfg, seed)
    else:
        verdict = _relation_check(spec, mode, cfg)
        report = _report_from_verdict(spec, verdict, cfg, mode)
    report.millis = (time.perf_counter() - start) * 1000
    return report


def _report_from_verdict(spec, verdict, cfg, mode) -> CheckReport:
    stats_mode = (
        EvalMode.EXTENSIONAL
        if spec.relation is Relation.EXT_EQUAL or mode is EvalMode.EXTENSIONAL
        else EvalMode.COST_COUNTING
    )
    hi, lo = _cost_stats(spec.program, stats_mode, cfg)
    return CheckReport(
        name=spec.name,
        relation=spec.relation.value,
        verdict="holds" if verdict.holds else "fails",
        domain=cfg.to_json(),
        max_cost=hi,
        min_cost=lo,
        counterexample=verdict.witness.to_json() if verdict.witness else None,
        note=verdict.note or spec.note,
    )


# ---------------------------------------------------------------------------
# Hypothesis-filtered verification
# ---------------------------------------------------------------------------


def _check_applied(spec_like: BoundSpec, thunk, mode, cfg) -> Verdict:
    """Pointwise check of a spec whose programs take the thunk first."""
    arg_tys, _ = unfold_arrows(spec_like.program.declared_ty)
    rest = arg_tys[1:]
    domains = [enumerate_value_ty(t, cfg) for t in rest]
    ev_p = get_evaluator(spec_like.program, mode, cfg)
    ev_b = get_evaluator(spec_like.bound, mode, cfg)
    for tail in itertools.product(*domains):
        args = (thunk,) + tail
        out_p = ev_p.outcome(args)
        out_b = ev_b.outcome(args)
        if mode is EvalMode.EXTENSIONAL:
            v = eq_outcome(out_p, out_b, cfg, spec_like.program.theory)
        else:
            v = leq_outcome(out_p, out_b, cfg, spec_like.program.theory)
        if not v.holds:
            v.witness.input = ", ".join(val_str(a) for a in args)
            return v
    return Verdict(True)


def _verify_hypothesis(spec, mode, cfg, seed) -> CheckReport:
    arg_tys, _ = unfold_arrows(spec.program.declared_ty)
    if not arg_tys or not isinstance(arg_tys[0], UTy):
        raise OrderError(
            "hypothesis specs need a leading suspended argument"
        )
    inner_ty = arg_tys[0].comp
    rng = random.Random(seed)
    gen = TermGen(rng, spec.program.theory)
    checker = Checker(spec.program.theory, spec.program.monoid)
    admitted = 0
    tried = 0
    failure = None
    seen = set()
    for _ in range(cfg.hyp_candidates):
        cand = gen.closed_comp(inner_ty, cfg.hyp_depth)
        if cand in seen:
            continue
        seen.add(cand)
        tried += 1
        try:
            elab = checker.check_comp((), cand, inner_ty)
        except TypeCheckError:  # defensive; candidates are well-typed
            continue
        thunk = ("thunk", (), elab)
        hyp_v = _check_applied(spec.hypothesis, thunk, mode, cfg)
        if not hyp_v.holds:
            continue
        admitted += 1
        concl = _check_applied(spec, thunk, mode, cfg)
        if not concl.holds and failure is None:
            failure = concl
            failure.witness.input = (
                f"argument {term_str(cand)}; inputs {concl.witness.input}"
            )
            break
    if failure is not None:
        verdict = "fails"
        counterexample = failure.witness.to_json()
    elif admitted < cfg.hyp_min_admitted:
        verdict = "inconclusive"
        counterexample = None
    else:
        verdict = "holds"
        counterexample = None
    note = (
        f"hypothesis-filtered: {admitted} admitted of {tried} generated "
        "arguments; property-based evidence, not a proof"
    )
    return CheckReport(
        name=spec.name,
        relation=spec.relation.value,
        verdict=verdict,
        domain=cfg.to_json(),
        counterexample=counterexample,
        admitted=admitted,
        note=note,
    )


# ---------------------------------------------------------------------------
# Spec-helper audit and mutation
# ---------------------------------------------------------------------------


def assert_helpers_cost_free(cfg: DomainConfig = None) -> None:
    """Check that every reference ("spec") helper charges zero cost."""
    cfg = cfg or DomainConfig(nat_max=6, list_len=3, elems=3)
    for name, (term, ty) in SPEC_HELPERS.items():
        prog = Program(f"helper-{name}", PURE, SEQ_NAT, term, ty)
        ev = get_evaluator(prog, EvalMode.COST_COUNTING, cfg)
        _, inputs = enumerate_inputs(ty, cfg)
        for args in inputs:
            out = ev.outcome(args)
            if out.cost != 0:
                raise AssertionError(
                    f"helper {name} charged cost {out.cost} on "
                    f"{[val_str(a) for a in args]}"
                )


def zero_steps(t: Term, zero=0) -> Term:
    """Strip every step charge from a term (the --mutate transformation)."""
    if isinstance(t, Step):
        return Step(CostLit(zero), zero_steps(t.body, zero))
    updates = {}
    changed = False
    for f in dataclasses.fields(t):
        v = getattr(t, f.name)
        if isinstance(v, Term):
            nv = zero_steps(v, zero)
            changed = changed or nv is not v
            updates[f.name] = nv
        else:
            updates[f.name] = v
    return type(t)(**updates) if changed else t


def mutate_program(p: Program) -> Program:
    return dataclasses.replace(p, body=zero_steps(p.body, p.monoid.zero))


def mutated_corpus(name: str):
    specs = []
    found = False
    for spec in corpus():
        if spec.program.name == name:
            found = True
            specs.append(dataclasses.replace(
                spec, program=mutate_program(spec.program)
            ))
        else:
            specs.append(spec)
    if not found:
        raise ValueError(f"no corpus program named '{name}'")
    return tuple(specs)


# ---------------------------------------------------------------------------
# Full runs
# ---------------------------------------------------------------------------


def law_report_to_json(rep: LawReport) -> dict:
    return {
        "name": f"law:{rep.law}",
        "relation": "law",
        "verdict": "holds" if rep.passed else "fails",
        "domain": {"trials": rep.trials, "theory": rep.theory},
        "max_cost": None,
        "min_cost": None,
        "millis": 0.0,
        **({"counterexample": {"explanation": rep.failures[0]}}
           if rep.failures else {}),
    }


def run_all(
    mode: EvalMode = EvalMode.COST_COUNTING,
    spec_name: Optional[str] = None,
    domain_override: Optional[dict] = None,
    seed: int = 0,
    trials: int = 500,
    mutate: Optional[str] = None,
):
    """Run the corpus (and the law suite unless filtered) and collect reports.

    Returns (spec_reports, law_reports, exit_code).
    """
    specs = mutated_corpus(mutate) if mutate else corpus()
    if spec_name is not None:
        specs = tuple(s for s in specs if s.name == spec_name)
        if not specs:
            raise ValueError(f"no spec named '{spec_name}'")
    reports = [
        verify(spec, mode=mode, domain_override=domain_override, seed=seed)
        for spec in specs
    ]
    law_reports = []
    if spec_name is None:
        for law in catalog():
            law_reports.append(check_law(law, trials=trials, seed=seed,
                                         mode=mode))
    ok = all(r.ok for r in reports) and all(l.passed for l in law_reports)
    return reports, law_reports, 0 if ok else 1


def format_table(reports, law_reports) -> str:
    lines = []
    width = max([len(r.name) for r in reports] + [24])
    for r in reports:
        cost = ""
        if r.max_cost is not None:
            cost = f"  cost[{SEQ_NAT.show(r.min_cost) if isinstance(r.min_cost, int) else r.min_cost}" \
                   f"..{SEQ_NAT.show(r.max_cost) if isinstance(r.max_cost, int) else r.max_cost}]"
        admitted = f"  admitted={r.admitted}" if r.admitted is not None else ""
        lines.append(
            f"{r.name:<{width}} {r.relation:<10} {r.verdict:<12}"
            f"{cost}{admitted}  {r.millis:9.1f} ms"
        )
        if r.counterexample:
            lines.append(f"{'':<{width}}   counterexample: "
                         f"{r.counterexample.get('input', '')}")
            lines.append(f"{'':<{width}}     lhs {r.counterexample.get('lhs', '')}")
            lines.append(f"{'':<{width}}     rhs {r.counterexample.get('rhs', '')}")
            lines.append(f"{'':<{width}}     {r.counterexample.get('explanation', '')}")
    if law_reports:
        passed = sum(1 for l in law_reports if l.passed)
        lines.append("")
        lines.append(f"laws: {passed}/{len(law_reports)} passed")
        for l in law_reports:
            if not l.passed:
                lines.append(f"  law {l.law} FAILED: {l.failures[0]}")
    n_ok = sum(1 for r in reports if r.ok)
    lines.append("")
    lines.append(f"specs: {n_ok}/{len(reports)} hold")
    return "\n".join(lines)


def reports_to_json(reports, law_reports) -> str:
    payload = [r.to_json() for r in reports]
    payload += [law_report_to_json(l) for l in law_reports]
    return json.dumps(payload, indent=2)
