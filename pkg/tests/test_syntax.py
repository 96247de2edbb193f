"""Parser and printer: examples, round trips, canonical rendering."""

import math
import random
from fractions import Fraction

import pytest

from stepbound.corpus import ALL_PROGRAMS
from stepbound.gen import TermGen, random_theory
from stepbound.syntax import (
    Bind, CostLit, Flip, NatCost, NatRec, Ret, Step, Suc, SyntaxError_,
    Triv, Var, Zero, alpha_eq, alpha_normalize, parse, print_program,
    term_str,
)

DOUBLE_SRC = """
#name double
#effect pure
#cost seq
(: (-> nat (F nat))
   (lam (n : nat)
     (natrec n (ret zero) (k ih (step 1 (bind ih (m (ret (suc (suc m))))))))))
"""


def test_parse_smallest_program():
    p = parse("(ret zero)")
    assert p.body == Ret(Zero())
    assert p.name == "main"
    assert p.theory.kind == "pure"


def test_parse_double_shape():
    p = parse(DOUBLE_SRC)
    lam = p.body
    rec = lam.body
    assert isinstance(rec, NatRec)
    # the successor branch charges one step around the recursive bind
    suc = rec.suc_branch
    assert isinstance(suc, Step) and suc.cost == CostLit(1)
    inner = suc.body
    assert isinstance(inner, Bind) and inner.comp == Var(rec.var_ih)
    assert inner.body == Ret(Suc(Suc(Var(inner.var))))


def test_parse_flip():
    p = parse("#effect prob\n(flip 1/2 (ret tt) (step 1 (ret tt)))")
    assert p.body == Flip(
        Fraction(1, 2), Ret(Triv()), Step(CostLit(1), Ret(Triv()))
    )


def test_parse_numeral_sugar():
    p = parse("(ret 3)")
    assert p.body == Ret(Suc(Suc(Suc(Zero()))))


def test_print_smallest():
    p = parse("(ret zero)")
    assert "(ret 0)" in print_program(p)


def test_print_step_zero_literally():
    # the printer is not a rewriter: a zero annotation stays visible
    p = parse("(step 0 (ret zero))")
    assert "(step 0 (ret 0))" in print_program(p)


def test_print_rational_lowest_terms():
    # oracle: gcd reduction of the raw numerator/denominator
    num, den = 6, 8
    g = math.gcd(num, den)
    p = parse(f"#effect prob\n(flip {num}/{den} (ret tt) (ret tt))")
    assert f"(flip {num // g}/{den // g} " in print_program(p)


def test_rational_reduction_matches_gcd_oracle():
    rng = random.Random(7)
    for _ in range(100):
        num = rng.randrange(0, 12)
        den = rng.randrange(max(num, 1), 16)
        frac = Fraction(num, den)
        g = math.gcd(num, den) or 1
        rendered = term_str(Flip(frac, Ret(Triv()), Ret(Triv())))
        if frac == 0:
            assert "(flip 0 " in rendered
        elif frac == 1:
            assert "(flip 1 " in rendered
        else:
            assert f"(flip {num // g}/{den // g} " in rendered


def test_unknown_effect_op_for_theory():
    with pytest.raises(SyntaxError_):
        parse("(branch (ret tt) (ret tt))")  # pure by default
    with pytest.raises(SyntaxError_):
        parse("#effect nondet\n(flip 1/2 (ret tt) (ret tt))")


def test_syntax_error_carries_position():
    try:
        parse("(ret zero))")
    except SyntaxError_ as e:
        assert e.line is not None
    else:
        pytest.fail("expected a syntax error")


def test_headers():
    p = parse("#name foo\n#effect state:nat\n#cost seq\n(get (s (ret s)))")
    assert p.name == "foo"
    assert p.theory.kind == "state"


def test_par_requires_declared_theory():
    src = "#effect nondet\n#cost par\n(par (ret tt) (ret tt))"
    with pytest.raises(SyntaxError_):
        parse(src)


@pytest.mark.parametrize("prog", ALL_PROGRAMS, ids=lambda p: p.name)
def test_corpus_round_trip(prog):
    text = print_program(prog)
    back = parse(text)
    assert back.declared_ty == prog.declared_ty
    assert back.theory == prog.theory
    assert back.monoid is prog.monoid
    assert alpha_eq(back.body, prog.body)


def test_generated_round_trip():
    rng = random.Random(11)
    for _ in range(150):
        theory = random_theory(rng)
        gen = TermGen(rng, theory)
        prog = gen.program(depth=4)
        back = parse(print_program(prog))
        assert alpha_eq(back.body, prog.body)
        assert back.declared_ty == prog.declared_ty


def test_printing_injective_on_alpha_classes():
    rng = random.Random(13)
    seen = {}
    for _ in range(200):
        gen = TermGen(rng, random_theory(rng))
        prog = gen.program(depth=3)
        normal = alpha_normalize(prog.body)
        rendered = term_str(normal)
        if rendered in seen:
            assert seen[rendered] == normal
        else:
            seen[rendered] = normal


def test_alpha_eq_ignores_binder_names():
    a = parse("(bind (ret zero) (x (ret x)))").body
    b = parse("(bind (ret zero) (y (ret y)))").body
    assert alpha_eq(a, b)
    c = parse("(bind (ret zero) (x (ret zero)))").body
    assert not alpha_eq(a, c)


def test_nat_cost_annotation_round_trip():
    src = "(: (-> nat (F nat)) (lam (n : nat) (step n (ret n))))"
    p = parse(src)
    lam = p.body
    assert isinstance(lam.body.cost, NatCost)
    assert alpha_eq(parse(print_program(p)).body, p.body)


def test_work_span_cost_literal_round_trip():
    src = "#cost par\n(step (2 5) (ret tt))"
    p = parse(src)
    assert p.body.cost == CostLit((2, 5))
    back = parse(print_program(p))
    assert back.body == p.body and back.monoid is p.monoid


def test_program_files_parse_check_and_run():
    from pathlib import Path

    from stepbound.semantics import DEFAULT_CONFIG, EvalMode, get_evaluator
    from stepbound.typecheck import check_program

    progdir = Path(__file__).resolve().parent.parent / "programs"
    files = sorted(progdir.glob("*.sb"))
    assert len(files) >= 4
    for path in files:
        prog = parse(path.read_text(encoding="utf-8"))
        check_program(prog)
        assert alpha_eq(parse(print_program(prog)).body, prog.body)
    double = parse((progdir / "double.sb").read_text())
    ev = get_evaluator(double, EvalMode.COST_COUNTING, DEFAULT_CONFIG)
    out = ev.outcome((("nat", 6),))
    assert (out.cost, out.value) == (6, ("nat", 12))
    par = parse((progdir / "par-pair.sb").read_text())
    from stepbound.semantics import evaluate

    assert evaluate(par).cost == (5, 3)


def test_charged_list_type_round_trip():
    src = "(: (-> (list 2 nat) (F nat)) (lam (l : (list 2 nat)) (ret 0)))"
    p = parse(src)
    back = parse(print_program(p))
    assert back.declared_ty == p.declared_ty
    # an explicit zero charge is normalized away; the types coincide
    q = parse("(: (-> (list 0 nat) (F nat)) (lam (l : (list nat)) (ret 0)))")
    assert q.declared_ty == parse(
        "(: (-> (list nat) (F nat)) (lam (l : (list nat)) (ret 0)))"
    ).declared_ty
