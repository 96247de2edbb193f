"""Catalog of the equational laws of the effect signatures, checked
semantically on randomly instantiated closed programs.

The catalog has 25 entries: the cost/step group (4), the monad group (2),
nondeterministic branching (7), probabilistic choice (6) and global state
(6).  Each law stores builder functions that, given a term generator,
produce a concrete well-typed instance of its two sides; ``check_law``
evaluates both sides and requires outcome equality.

Because the evaluator normalizes its representations (sets, merged
distributions, threaded state), most laws hold there *by construction*;
these checks guard against evaluator regressions rather than provide
independent evidence.  The shipped mutant laws keep the suite falsifiable:
each is a deliberately wrong equation that the checker must refute.

The probabilistic reassociation law constrains its weights: with the
first flip's weight ``v`` and the inner weight ``r`` drawn freely, the
outer right-hand weight is forced to ``p = 1 - (1 - v)(1 - r)`` and the
inner one to ``q = v / p`` (any ``q`` works when ``p = 0``), which is the
unique way to satisfy the stated side condition.
"""

from __future__ import annotations

import random
import zlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .costs import SEQ_NAT
from .gen import LAW_STATE_TY, TermGen, random_theory
from .order import eq_outcome
from .semantics import DomainConfig, EvalMode, Evaluator
from .syntax import (
    NAT, Ap, Bind, Branch, CostLit, FTy, Fail, Flip, Get, Lam, NONDET, PROB,
    PURE, Program, Put, Ret, Step, Var, subst, term_str, state_theory,
)
from .typecheck import TypeCheckError

LAWS_CONFIG = DomainConfig(nat_max=4, list_len=2, elems=2, state_max=4)

STATE_NAT = state_theory(LAW_STATE_TY)

_THEORIES = {"pure": PURE, "nondet": NONDET, "prob": PROB, "state": STATE_NAT}


@dataclass(frozen=True)
class Law:
    """One equational axiom: a named pair of term templates.

    ``theory`` fixes the effect theory the law belongs to; ``None`` means
    the law is generic and is exercised under a theory drawn per trial.
    ``build`` maps a term generator to a concrete (lhs, rhs, type)
    instance.
    """

    name: str
    theory: Optional[str]
    equation: str
    build: Callable
    side_note: str = ""
    mutant: bool = False


@dataclass
class LawReport:
    law: str
    theory: str
    trials: int
    mode: EvalMode
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _step(c, e):
    return Step(CostLit(c), e)


def _open_comp(gen, ctx, ty, depth=3):
    return gen.comp(ctx, ty, depth)


# -- builders -----------------------------------------------------------------
# Each returns (lhs, rhs, comp_ty).


def _b_step_zero(gen):
    ty = gen.result_ty()
    e = gen.closed_comp(ty, 3)
    return _step(0, e), e, ty


def _b_step_plus(gen):
    ty = gen.result_ty()
    e = gen.closed_comp(ty, 3)
    c1, c2 = gen.cost(), gen.cost()
    return _step(c1, _step(c2, e)), _step(c1 + c2, e), ty


def _b_bind_step(gen):
    ty = gen.result_ty()
    e = gen.synth_comp(FTy(NAT), 3)
    f = _open_comp(gen, {"bx": NAT}, ty)
    c = gen.cost()
    lhs = Bind(_step(c, e), "bx", f)
    rhs = _step(c, Bind(e, "bx", f))
    return lhs, rhs, ty


def _b_lam_step(gen):
    # the two lambda sides are compared applied to a drawn argument
    ty = gen.result_ty()
    body = _open_comp(gen, {"lx": NAT}, ty)
    c = gen.cost()
    arg = gen.value({}, NAT)
    lhs = Ap(_step(c, Lam("lx", NAT, body)), arg)
    rhs = Ap(Lam("lx", NAT, _step(c, body)), arg)
    return lhs, rhs, ty


def _b_bind_ret(gen):
    ty = gen.result_ty()
    a = gen.value({}, NAT)
    f = _open_comp(gen, {"bx": NAT}, ty)
    lhs = Bind(Ret(a), "bx", f)
    rhs = subst(f, {"bx": a})
    return lhs, rhs, ty


def _b_bind_assoc(gen):
    ty = gen.result_ty()
    e = gen.synth_comp(FTy(NAT), 2)
    f = gen.synth_comp(FTy(NAT), 2, {"bx": NAT})
    g = _open_comp(gen, {"by": NAT}, ty, 2)
    lhs = Bind(Bind(e, "bx", f), "by", g)
    rhs = Bind(e, "bx", Bind(f, "by", g))
    return lhs, rhs, ty


def _b_branch_idl(gen):
    ty = gen.result_ty()
    e = gen.closed_comp(ty, 3)
    return Branch(Fail(), e), e, ty


def _b_branch_idr(gen):
    ty = gen.result_ty()
    e = gen.closed_comp(ty, 3)
    return Branch(e, Fail()), e, ty


def _b_branch_assoc(gen):
    ty = gen.result_ty()
    e0, e1, e2 = (gen.closed_comp(ty, 2) for _ in range(3))
    return Branch(Branch(e0, e1), e2), Branch(e0, Branch(e1, e2)), ty


def _b_branch_comm(gen):
    ty = gen.result_ty()
    e0, e1 = gen.closed_comp(ty, 3), gen.closed_comp(ty, 3)
    return Branch(e0, e1), Branch(e1, e0), ty


def _b_branch_idem(gen):
    ty = gen.result_ty()
    e = gen.closed_comp(ty, 3)
    return Branch(e, e), e, ty


def _b_branch_step(gen):
    ty = gen.result_ty()
    e0, e1 = gen.closed_comp(ty, 2), gen.closed_comp(ty, 2)
    c = gen.cost()
    return (
        _step(c, Branch(e0, e1)),
        Branch(_step(c, e0), _step(c, e1)),
        ty,
    )


def _b_fail_step(gen):
    ty = gen.result_ty()
    return _step(gen.cost(), Fail()), Fail(), ty


def _b_flip_zero(gen):
    ty = gen.result_ty()
    e0, e1 = gen.closed_comp(ty, 3), gen.closed_comp(ty, 3)
    return Flip(Fraction(0), e0, e1), e0, ty


def _b_flip_one(gen):
    ty = gen.result_ty()
    e0, e1 = gen.closed_comp(ty, 3), gen.closed_comp(ty, 3)
    return Flip(Fraction(1), e0, e1), e1, ty


def _b_flip_assoc(gen):
    ty = gen.result_ty()
    e0, e1, e2 = (gen.closed_comp(ty, 2) for _ in range(3))
    v = gen.rational()
    r = gen.rational()
    p = 1 - (1 - v) * (1 - r)
    q = v / p if p != 0 else gen.rational()
    lhs = Flip(v, Flip(r, e0, e1), e2)
    rhs = Flip(p, e0, Flip(q, e1, e2))
    return lhs, rhs, ty


def _b_flip_comm(gen):
    ty = gen.result_ty()
    e0, e1 = gen.closed_comp(ty, 3), gen.closed_comp(ty, 3)
    p = gen.rational()
    return Flip(p, e0, e1), Flip(1 - p, e1, e0), ty


def _b_flip_idem(gen):
    ty = gen.result_ty()
    e = gen.closed_comp(ty, 3)
    return Flip(gen.rational(), e, e), e, ty


def _b_flip_step(gen):
    ty = gen.result_ty()
    e0, e1 = gen.closed_comp(ty, 2), gen.closed_comp(ty, 2)
    c, p = gen.cost(), gen.rational()
    return (
        _step(c, Flip(p, e0, e1)),
        Flip(p, _step(c, e0), _step(c, e1)),
        ty,
    )


def _b_get_get(gen):
    ty = gen.result_ty()
    e = _open_comp(gen, {"sv1": LAW_STATE_TY, "sv2": LAW_STATE_TY}, ty)
    lhs = Get("sv1", Get("sv2", e))
    rhs = Get("sv0", subst(e, {"sv1": Var("sv0"), "sv2": Var("sv0")}))
    return lhs, rhs, ty


def _b_get_set(gen):
    ty = gen.result_ty()
    e = gen.closed_comp(ty, 3)
    return Get("sv0", Put(Var("sv0"), e)), e, ty


def _b_set_get(gen):
    ty = gen.result_ty()
    s = gen.value({}, LAW_STATE_TY)
    e = _open_comp(gen, {"sv1": LAW_STATE_TY}, ty)
    lhs = Put(s, Get("sv1", e))
    rhs = Put(s, subst(e, {"sv1": s}))
    return lhs, rhs, ty


def _b_set_set(gen):
    ty = gen.result_ty()
    s1, s2 = gen.value({}, LAW_STATE_TY), gen.value({}, LAW_STATE_TY)
    e = gen.closed_comp(ty, 3)
    return Put(s1, Put(s2, e)), Put(s2, e), ty


def _b_get_step(gen):
    ty = gen.result_ty()
    e = _open_comp(gen, {"sv1": LAW_STATE_TY}, ty)
    c = gen.cost()
    return _step(c, Get("sv1", e)), Get("sv1", _step(c, e)), ty


def _b_set_step(gen):
    ty = gen.result_ty()
    s = gen.value({}, LAW_STATE_TY)
    e = gen.closed_comp(ty, 3)
    c = gen.cost()
    return _step(c, Put(s, e)), Put(s, _step(c, e)), ty


# -- mutants (deliberately false; the checker must find counterexamples) -----


def _m_flip_one_left(gen):
    ty = gen.result_ty()
    e0, e1 = gen.closed_comp(ty, 3), gen.closed_comp(ty, 3)
    return Flip(Fraction(1), e0, e1), e0, ty


def _m_step_one_free(gen):
    ty = gen.result_ty()
    e = gen.closed_comp(ty, 3)
    return _step(1, e), e, ty


def _m_branch_left_bias(gen):
    ty = gen.result_ty()
    e0, e1 = gen.closed_comp(ty, 3), gen.closed_comp(ty, 3)
    return Branch(e0, e1), e0, ty


def _m_set_set_first(gen):
    ty = gen.result_ty()
    s1 = gen.value({}, LAW_STATE_TY)
    s2 = gen.value({}, LAW_STATE_TY)
    while s2 == s1:
        s2 = gen.value({}, LAW_STATE_TY)
    e = gen.closed_comp(ty, 3)
    return Put(s1, Put(s2, e)), Put(s1, e), ty


def _m_bind_step_drop(gen):
    ty = gen.result_ty()
    e = gen.synth_comp(FTy(NAT), 3)
    f = _open_comp(gen, {"bx": NAT}, ty)
    c = gen.rng.choice((1, 2, 3))
    return Bind(_step(c, e), "bx", f), Bind(e, "bx", f), ty


_CATALOG = (
    Law("step/zero", None, "step^0(e) = e", _b_step_zero),
    Law("step/plus", None, "step^c1(step^c2(e)) = step^(c1+c2)(e)",
        _b_step_plus),
    Law("bind/step", None, "bind(step^c(e), x. f) = step^c(bind(e, x. f))",
        _b_bind_step),
    Law("lam/step", None, "step^c(lam x. f) = lam x. step^c(f)",
        _b_lam_step),
    Law("bind/ret", None, "bind(ret(a), x. f) = f[a/x]", _b_bind_ret),
    Law("bind/assoc", None,
        "bind(bind(e, x. f), y. g) = bind(e, x. bind(f, y. g))",
        _b_bind_assoc),
    Law("branch/idl", "nondet", "branch(fail, e) = e", _b_branch_idl),
    Law("branch/idr", "nondet", "branch(e, fail) = e", _b_branch_idr),
    Law("branch/assoc", "nondet",
        "branch(branch(e0, e1), e2) = branch(e0, branch(e1, e2))",
        _b_branch_assoc),
    Law("branch/comm", "nondet", "branch(e0, e1) = branch(e1, e0)",
        _b_branch_comm),
    Law("branch/idem", "nondet", "branch(e, e) = e", _b_branch_idem),
    Law("branch/step", "nondet",
        "step^c(branch(e0, e1)) = branch(step^c(e0), step^c(e1))",
        _b_branch_step),
    Law("fail/step", "nondet", "step^c(fail) = fail", _b_fail_step),
    Law("flip/zero", "prob", "flip(0, e0, e1) = e0", _b_flip_zero),
    Law("flip/one", "prob", "flip(1, e0, e1) = e1", _b_flip_one),
    Law("flip/assoc", "prob",
        "flip(pq, flip(r, e0, e1), e2) = flip(p, e0, flip(q, e1, e2))",
        _b_flip_assoc,
        side_note="requires p = 1 - (1 - pq)(1 - r); pq and r are drawn "
                  "freely, p is computed, q = pq/p (free when p = 0)"),
    Law("flip/comm", "prob", "flip(p, e0, e1) = flip(1-p, e1, e0)",
        _b_flip_comm),
    Law("flip/idem", "prob", "flip(p, e, e) = e", _b_flip_idem),
    Law("flip/step", "prob",
        "step^c(flip(p, e0, e1)) = flip(p, step^c(e0), step^c(e1))",
        _b_flip_step),
    Law("get/get", "state",
        "get(s1. get(s2. e[s1, s2])) = get(s. e[s, s])", _b_get_get),
    Law("get/set", "state", "get(s. set(s, e)) = e", _b_get_set),
    Law("set/get", "state", "set(s, get(s'. e[s'])) = set(s, e[s])",
        _b_set_get),
    Law("set/set", "state", "set(s1, set(s2, e)) = set(s2, e)", _b_set_set),
    Law("get/step", "state", "step^c(get(s. e[s])) = get(s. step^c(e[s]))",
        _b_get_step),
    Law("set/step", "state", "step^c(set(s, e)) = set(s, step^c(e))",
        _b_set_step),
)

_MUTANTS = (
    Law("mutant:flip/one-returns-left", "prob", "flip(1, e0, e1) = e0",
        _m_flip_one_left, mutant=True),
    Law("mutant:step/one-free", "pure", "step^1(e) = e",
        _m_step_one_free, mutant=True),
    Law("mutant:branch/left-bias", "nondet", "branch(e0, e1) = e0",
        _m_branch_left_bias, mutant=True),
    Law("mutant:set/set-keeps-first", "state",
        "set(s1, set(s2, e)) = set(s1, e)", _m_set_set_first, mutant=True),
    Law("mutant:bind/step-drops-cost", "pure",
        "bind(step^c(e), x. f) = bind(e, x. f)", _m_bind_step_drop,
        mutant=True),
)


def catalog() -> tuple:
    """The 25 equational laws of the effect signatures."""
    return _CATALOG


def mutant_catalog() -> tuple:
    """Deliberately corrupted laws; ``check_law`` must refute each."""
    return _MUTANTS


class GeneratorExhausted(Exception):
    pass


def _law_rng(law: Law, seed: int) -> random.Random:
    return random.Random(seed ^ zlib.crc32(law.name.encode()))


def check_law(
    law: Law,
    trials: int = 500,
    seed: int = 0,
    mode: EvalMode = EvalMode.COST_COUNTING,
    max_recorded: int = 5,
) -> LawReport:
    """Instantiate and semantically check ``law`` for ``trials`` rounds.

    Deterministic given ``seed``.  A failing trial records the rendered
    instantiation and both outcomes.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = _law_rng(law, seed)
    theory_name = law.theory or "any"
    report = LawReport(law.name, theory_name, trials, mode)
    for _ in range(trials):
        theory = (
            _THEORIES[law.theory] if law.theory else random_theory(rng)
        )
        gen = TermGen(rng, theory)
        lhs, rhs, ty = law.build(gen)
        lp = Program(f"{law.name}-lhs", theory, SEQ_NAT, lhs, ty)
        rp = Program(f"{law.name}-rhs", theory, SEQ_NAT, rhs, ty)
        try:
            # instances are evaluated once; bypass the shared evaluator cache
            out_l = Evaluator(lp, mode, LAWS_CONFIG).outcome(())
            out_r = Evaluator(rp, mode, LAWS_CONFIG).outcome(())
        except TypeCheckError as e:  # a builder bug, not a law failure
            raise AssertionError(
                f"law {law.name} produced an ill-typed instance: {e}"
            )
        verdict = eq_outcome(out_l, out_r, LAWS_CONFIG, theory)
        if not verdict.holds:
            if len(report.failures) < max_recorded:
                report.failures.append(
                    f"under {theory.kind}: {term_str(lhs)}  !=  "
                    f"{term_str(rhs)}  ({out_l} vs {out_r})"
                )
            else:
                report.failures.append("...")
                break
    return report
