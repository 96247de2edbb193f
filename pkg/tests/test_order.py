"""Approximation preorder and equality deciders."""

import random
from fractions import Fraction

import pytest

from conftest import nat, natlist

from stepbound.corpus import (
    BRANCH_EXAMPLE_UNIT, BRANCH_EXAMPLE_UNIT_BOUND, ISORT, ISORT_BOUND,
    ISORT_LOWER_BOUND, LOOKUP, LOOKUP_BOUND, corpus,
)
from stepbound.costs import SEQ_NAT
from stepbound.gen import TermGen, gen_dist, gen_outcome, raise_outcome, random_theory
from stepbound.order import (
    OrderError, cdf_dominates, dist_leq_fast, dist_leq_flow, eq_outcome,
    eq_program, ext_equal_program, leq_outcome, leq_program,
    transportation_oracle,
)
from stepbound.semantics import (
    Dist, DomainConfig, EvalMode, NondetOutcome, ProbOutcome, PureOutcome,
    evaluate,
)
from stepbound.syntax import Bind, CostLit, FTy, NAT, Program, Step

COST = EvalMode.COST_COUNTING


def pure(cost, value):
    return PureOutcome("pure", SEQ_NAT, COST, cost, value)


def nd(*pairs):
    return NondetOutcome("nondet", SEQ_NAT, COST, frozenset(pairs))


def prob(d):
    return ProbOutcome("prob", SEQ_NAT, COST, Dist(d))


UNIT_VAL = ("unit",)


def test_pure_cost_relaxes():
    lo = pure(2, natlist([1, 2]))
    hi = pure(3, natlist([1, 2]))
    assert leq_outcome(lo, hi).holds
    assert not leq_outcome(hi, lo).holds


def test_pure_values_fixed():
    assert not leq_outcome(pure(1, nat(1)), pure(2, nat(2))).holds


def test_egli_milner_branch_example():
    lhs = nd((3, ("bool", True)), (12, ("bool", False)))
    rhs = nd((12, ("bool", True)), (12, ("bool", False)))
    assert leq_outcome(lhs, rhs).holds
    rev = leq_outcome(rhs, lhs)
    assert not rev.holds and rev.witness is not None


def test_empty_relates_only_to_empty():
    v = leq_outcome(nd(), nd((0, UNIT_VAL)))
    assert not v.holds
    assert leq_outcome(nd(), nd()).holds
    assert not leq_outcome(nd((0, UNIT_VAL)), nd()).holds


def test_prob_coupling_basic():
    lhs = prob({(0, UNIT_VAL): Fraction(1, 2), (1, UNIT_VAL): Fraction(1, 2)})
    rhs = prob({(1, UNIT_VAL): Fraction(1)})
    assert leq_outcome(lhs, rhs).holds
    back = leq_outcome(rhs, lhs)
    assert not back.holds and back.witness is not None


def test_prob_mass_must_match_per_value():
    lhs = prob({(0, nat(0)): Fraction(1, 2), (0, nat(1)): Fraction(1, 2)})
    rhs = prob({(1, nat(0)): Fraction(1)})
    assert not leq_outcome(lhs, rhs).holds


def test_theory_mismatch_raises():
    with pytest.raises(OrderError):
        leq_outcome(pure(0, UNIT_VAL), nd((0, UNIT_VAL)))


def test_program_type_mismatch_raises():
    with pytest.raises(OrderError):
        leq_program(ISORT, LOOKUP)


def test_domain_cap_is_enforced():
    with pytest.raises(OrderError):
        leq_program(ISORT, ISORT_BOUND, COST,
                    DomainConfig(list_len=5, elems=5, input_cap=100))


def test_eq_outcome_reflexive_and_symmetric_negative():
    a = nd((1, nat(2)), (3, nat(2)))
    assert eq_outcome(a, a).holds
    b = nd((1, nat(2)))
    assert not eq_outcome(a, b).holds


def test_nondet_equality_quotients_by_order_equivalence():
    # costs {0,1,4} and {0,2,4} at one value relate both ways under the
    # Egli-Milner lifting; equality must identify them (and only such
    # pairs), comparing min/max cost antichains per value
    a = nd((0, nat(2)), (1, nat(2)), (4, nat(2)))
    b = nd((0, nat(2)), (2, nat(2)), (4, nat(2)))
    assert leq_outcome(a, b).holds and leq_outcome(b, a).holds
    assert eq_outcome(a, b).holds
    c = nd((0, nat(2)), (5, nat(2)))
    assert not eq_outcome(a, c).holds


def test_transportation_point_mass():
    rel = lambda a, b: a <= b
    assert transportation_oracle([(0, Fraction(1))], [(0, Fraction(1))], rel)


def test_transportation_binomial_one_instance():
    # binomial(1) cost law: {0: 1/2, 1: 1/2} moves onto a point mass at 1,
    # scaling by the common denominator 2 gives an integral flow of value 2
    lhs = [(0, Fraction(1, 2)), (1, Fraction(1, 2))]
    rhs = [(1, Fraction(1))]
    rel = lambda a, b: a <= b
    assert transportation_oracle(lhs, rhs, rel)
    # reversed: the mass at cost 1 cannot move down to 0
    assert not transportation_oracle(rhs, lhs, rel)


def test_cdf_dominates_direction():
    low = [(0, Fraction(1, 2)), (1, Fraction(1, 2))]
    high = [(1, Fraction(1))]
    assert cdf_dominates(low, high)
    assert not cdf_dominates(high, low)


def test_fast_and_flow_prob_deciders_agree():
    rng = random.Random(101)
    for _ in range(300):
        a = gen_dist(rng)
        b = raise_outcome(rng, prob(dict(a.items))).dist if rng.random() < 0.5 \
            else gen_dist(rng)
        assert dist_leq_fast(a, b) == dist_leq_flow(a, b)


def _hall_feasible(lhs, rhs, rel):
    # independent characterization of transport feasibility: every subset
    # of the left support must fit inside its neighborhood's mass
    import itertools as it

    if sum(w for _, w in lhs) != sum(w for _, w in rhs):
        return False
    for r in range(1, len(lhs) + 1):
        for subset in it.combinations(range(len(lhs)), r):
            mass = sum(lhs[i][1] for i in subset)
            neigh = sum(
                w for b, w in rhs
                if any(rel(lhs[i][0], b) for i in subset)
            )
            if mass > neigh:
                return False
    return True


def test_flow_decider_matches_hall_condition():
    rng = random.Random(211)
    rel = lambda a, b: a[1] == b[1] and a[0] <= b[0]
    for _ in range(200):
        a = list(gen_dist(rng))
        b = list(gen_dist(rng))
        assert transportation_oracle(a, b, rel) == _hall_feasible(a, b, rel)


def test_leq_outcome_reflexive_on_generated():
    rng = random.Random(103)
    for _ in range(400):
        kind = rng.choice(("pure", "nondet", "prob", "state"))
        out = gen_outcome(rng, kind)
        assert leq_outcome(out, out).holds


def test_leq_outcome_transitive_on_generated_chains():
    rng = random.Random(107)
    for _ in range(400):
        kind = rng.choice(("pure", "nondet", "prob", "state"))
        a = gen_outcome(rng, kind)
        b = raise_outcome(rng, a)
        c = raise_outcome(rng, b)
        assert leq_outcome(a, b).holds
        assert leq_outcome(b, c).holds
        assert leq_outcome(a, c).holds


def test_eq_iff_leq_both_ways():
    rng = random.Random(109)
    for _ in range(300):
        kind = rng.choice(("pure", "nondet", "prob", "state"))
        a = gen_outcome(rng, kind)
        b = raise_outcome(rng, a) if rng.random() < 0.5 else gen_outcome(rng, kind)
        eq = eq_outcome(a, b).holds
        both = leq_outcome(a, b).holds and leq_outcome(b, a).holds
        assert eq == both


def test_step_monotonicity():
    rng = random.Random(113)
    cfg = DomainConfig(nat_max=3, list_len=2, elems=2, state_max=4)
    for _ in range(150):
        theory = random_theory(rng)
        gen = TermGen(rng, theory)
        ty = gen.result_ty()
        e = gen.closed_comp(ty, 3)
        c = gen.cost()
        cc = c + rng.randrange(0, 3)
        lo = Program("lo", theory, SEQ_NAT, Step(CostLit(c), e), ty)
        hi = Program("hi", theory, SEQ_NAT, Step(CostLit(cc), e), ty)
        out_lo = evaluate(lo, COST, cfg)
        out_hi = evaluate(hi, COST, cfg)
        assert leq_outcome(out_lo, out_hi, cfg, theory).holds


def test_bind_monotonicity():
    # if e <= e' then bind(e, f) <= bind(e', f) for generated continuations
    rng = random.Random(127)
    cfg = DomainConfig(nat_max=3, list_len=2, elems=2, state_max=4)
    for _ in range(120):
        theory = random_theory(rng)
        gen = TermGen(rng, theory)
        ty = gen.result_ty()
        e = gen.synth_comp(FTy(NAT), 3)
        delta = rng.randrange(0, 3)
        e_hi = Step(CostLit(delta), e)
        f = gen.comp({"bx": NAT}, ty, 3)
        lo = Program("lo", theory, SEQ_NAT, Bind(e, "bx", f), ty)
        hi = Program("hi", theory, SEQ_NAT, Bind(e_hi, "bx", f), ty)
        out_lo = evaluate(lo, COST, cfg)
        out_hi = evaluate(hi, COST, cfg)
        assert leq_outcome(out_lo, out_hi, cfg, theory).holds


SORT_CFG = DomainConfig(list_len=4, elems=4)


def test_leq_program_isort_upper_and_lower():
    assert leq_program(ISORT, ISORT_BOUND, COST, SORT_CFG).holds
    assert leq_program(ISORT_LOWER_BOUND, ISORT, COST, SORT_CFG).holds


def test_leq_program_counterexample_reports_first_input():
    # the lower bound is not an upper bound: |l| - 1 < cost on most lists
    v = leq_program(ISORT, ISORT_LOWER_BOUND, COST,
                    DomainConfig(list_len=3, elems=3))
    assert not v.holds
    assert v.witness is not None and v.witness.input


def test_leq_program_reflexive_on_corpus():
    cfg = DomainConfig(nat_max=4, list_len=3, elems=3, state_max=4)
    for spec in corpus():
        if spec.hypothesis is not None:
            continue
        assert leq_program(spec.program, spec.program, COST, cfg).holds


def test_ext_equal_lookup_behavioral_spec():
    assert ext_equal_program(
        LOOKUP, LOOKUP_BOUND, DomainConfig(nat_max=5, list_len=3, elems=3)
    ).holds


def test_nondet_unit_bound_and_reverse():
    out = evaluate(BRANCH_EXAMPLE_UNIT)
    bound = evaluate(BRANCH_EXAMPLE_UNIT_BOUND)
    assert leq_outcome(out, bound).holds
    rev = leq_outcome(bound, out)
    assert not rev.holds and rev.witness is not None


def test_par_composition_is_monotone():
    # relaxing either arm's cost relaxes the composition
    import itertools

    from stepbound.costs import WORK_SPAN
    from stepbound.syntax import (
        BoolLit, CostLit, FTy, Par, ProdTy, PURE, Ret, Step, BOOL, NAT,
        nat_lit,
    )

    ty = FTy(ProdTy(NAT, BOOL))

    def par_prog(c1, c2):
        body = Par(Step(CostLit(c1), Ret(nat_lit(1))),
                   Step(CostLit(c2), Ret(BoolLit(False))))
        return Program("p", PURE, WORK_SPAN, body, ty)

    rng = random.Random(151)
    for _ in range(60):
        c1 = (rng.randrange(4), rng.randrange(4))
        c2 = (rng.randrange(4), rng.randrange(4))
        d1 = (c1[0] + rng.randrange(3), c1[1] + rng.randrange(3))
        d2 = (c2[0] + rng.randrange(3), c2[1] + rng.randrange(3))
        lo = evaluate(par_prog(c1, c2))
        hi = evaluate(par_prog(d1, d2))
        assert leq_outcome(lo, hi).holds


def test_extensional_collapse_of_leq():
    # a cost-mode approximation between a program and its padded variant
    # becomes an equality once costs are erased
    rng = random.Random(131)
    cfg = DomainConfig(nat_max=3, list_len=2, elems=2, state_max=4)
    for _ in range(80):
        theory = random_theory(rng)
        gen = TermGen(rng, theory)
        ty = gen.result_ty()
        e = gen.closed_comp(ty, 3)
        lo = Program("lo", theory, SEQ_NAT, e, ty)
        hi = Program("hi", theory, SEQ_NAT, Step(CostLit(gen.cost()), e), ty)
        assert leq_program(lo, hi, COST, cfg).holds
        assert eq_program(lo, hi, EvalMode.EXTENSIONAL, cfg).holds
