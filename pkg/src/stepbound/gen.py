"""Seeded random generation of terms, programs, outcomes and distributions.

Everything here is deterministic given a ``random.Random`` instance.
Generated terms are well-typed by construction (and the law/property
harnesses re-check them defensively).  Result types are kept first-order
so outcomes compare structurally.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .costs import SEQ_NAT
from .semantics import (
    Dist, EvalMode, NondetOutcome, ProbOutcome, PureOutcome, StateOutcome,
)
from .syntax import (
    BOOL, NAT, UNIT, Bind, BoolLit, Branch, CompTy, Cons, CostLit,
    EffectTheory, FTy, Fail, Flip, Get, If, ListTy, NONDET, Nil, PROB,
    PURE, Pair, ProdTy, Program, Put, Ret, Step, SumTy, Triv, Var,
    nat_lit, state_theory,
)

RATIONAL_POOL = [
    Fraction(0), Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(2, 3),
    Fraction(1, 4), Fraction(3, 4), Fraction(2, 5), Fraction(1, 6),
    Fraction(5, 6),
]

LAW_STATE_TY = NAT

RESULT_TYPES = [FTy(NAT), FTy(BOOL), FTy(UNIT), FTy(ListTy(NAT))]


class TermGen:
    """Random closed/open computations for one theory (seq costs)."""

    def __init__(self, rng: random.Random, theory: EffectTheory):
        self.rng = rng
        self.theory = theory

    def result_ty(self) -> CompTy:
        return self.rng.choice(RESULT_TYPES)

    def cost(self) -> int:
        return self.rng.choice((0, 1, 1, 2, 3))

    def rational(self) -> Fraction:
        return self.rng.choice(RATIONAL_POOL)

    def value(self, ctx: dict, ty):
        """A value term of type ``ty`` under ``ctx`` (name -> ValueTy)."""
        rng = self.rng
        names = [n for n, t in ctx.items() if t == ty]
        if names and rng.random() < 0.5:
            return Var(rng.choice(names))
        match ty:
            case t if t == NAT:
                return nat_lit(rng.randrange(4))
            case t if t == BOOL:
                return BoolLit(rng.random() < 0.5)
            case t if t == UNIT:
                return Triv()
            case ListTy(elem, _):
                n = rng.randrange(3)
                out = Nil()
                for _ in range(n):
                    out = Cons(self.value(ctx, elem), out)
                return out
            case ProdTy(a, b):
                return Pair(self.value(ctx, a), self.value(ctx, b))
            case SumTy(a, b):
                from .syntax import Inl, Inr

                if rng.random() < 0.5:
                    return Inl(self.value(ctx, a))
                return Inr(self.value(ctx, b))
            case _:
                raise ValueError(f"cannot generate values of {ty!r}")

    def comp(self, ctx: dict, ty: CompTy, depth: int):
        """A computation of type ``ty``; effects drawn from the theory."""
        rng = self.rng
        from .syntax import ArrowTy, Lam

        if isinstance(ty, ArrowTy):
            x = f"a{depth}_{rng.randrange(1000)}"
            return Lam(x, ty.dom, self.comp({**ctx, x: ty.dom}, ty.cod, depth))
        if not isinstance(ty, FTy):
            raise ValueError(f"cannot generate computations of {ty!r}")
        if depth <= 0:
            return self._leaf(ctx, ty)
        roll = rng.random()
        kind = self.theory.kind
        if roll < 0.25:
            return self._leaf(ctx, ty)
        if roll < 0.40:
            return Step(CostLit(self.cost()), self.comp(ctx, ty, depth - 1))
        if roll < 0.58:
            a_ty = rng.choice((NAT, BOOL, UNIT))
            x = f"g{depth}_{rng.randrange(1000)}"
            scrut = self.comp(ctx, FTy(a_ty), depth - 1)
            if not self._synthesizes(ctx, scrut):
                scrut = Ret(self.value(ctx, a_ty))
            body = self.comp({**ctx, x: a_ty}, ty, depth - 1)
            return Bind(scrut, x, body)
        if roll < 0.66:
            return If(
                self.value(ctx, BOOL),
                self.comp(ctx, ty, depth - 1),
                self.comp(ctx, ty, depth - 1),
            )
        if kind == "nondet":
            if roll < 0.90:
                return Branch(
                    self.comp(ctx, ty, depth - 1), self.comp(ctx, ty, depth - 1)
                )
            return Fail()
        if kind == "prob":
            return Flip(
                self.rational(),
                self.comp(ctx, ty, depth - 1),
                self.comp(ctx, ty, depth - 1),
            )
        if kind == "state":
            if roll < 0.83:
                s = f"s{depth}_{rng.randrange(1000)}"
                return Get(
                    s, self.comp({**ctx, s: self.theory.state_ty}, ty, depth - 1)
                )
            return Put(
                self.value(ctx, self.theory.state_ty),
                self.comp(ctx, ty, depth - 1),
            )
        return Step(CostLit(self.cost()), self.comp(ctx, ty, depth - 1))

    def _leaf(self, ctx: dict, ty: FTy):
        return Ret(self.value(ctx, ty.value))

    def _synthesizes(self, ctx: dict, comp) -> bool:
        """Bind scrutinees must synthesize their type; e.g. a bare ``fail``
        cannot, since the fragment has no inner type ascriptions."""
        from .typecheck import Checker, TypeCheckError

        try:
            Checker(self.theory, SEQ_NAT).infer_comp(tuple(ctx.items()), comp)
            return True
        except TypeCheckError:
            return False

    def closed_comp(self, ty: CompTy, depth: int):
        return self.comp({}, ty, depth)

    def synth_comp(self, ty: CompTy, depth: int, ctx: dict = None):
        """A computation that also synthesizes its type (usable as a bind
        scrutinee)."""
        ctx = ctx or {}
        for _ in range(8):
            t = self.comp(ctx, ty, depth)
            if self._synthesizes(ctx, t):
                return t
        return Ret(self.value(ctx, ty.value))

    def program(self, depth: int = 5, ty: CompTy = None) -> Program:
        ty = ty or self.result_ty()
        body = self.closed_comp(ty, depth)
        return Program(
            f"gen-{self.rng.randrange(10 ** 9)}", self.theory, SEQ_NAT, body, ty
        )


def random_theory(rng: random.Random) -> EffectTheory:
    return rng.choice((PURE, NONDET, PROB, state_theory(LAW_STATE_TY)))


# ---------------------------------------------------------------------------
# Direct outcome generation (for preorder property tests)
# ---------------------------------------------------------------------------


def _rand_val(rng):
    return ("nat", rng.randrange(4))


def _rand_cost(rng):
    return rng.randrange(7)


def gen_outcome(rng: random.Random, kind: str):
    mode = EvalMode.COST_COUNTING
    if kind == "pure":
        return PureOutcome("pure", SEQ_NAT, mode, _rand_cost(rng), _rand_val(rng))
    if kind == "nondet":
        n = rng.randrange(5)  # possibly empty
        branches = frozenset(
            (_rand_cost(rng), _rand_val(rng)) for _ in range(n)
        )
        return NondetOutcome("nondet", SEQ_NAT, mode, branches)
    if kind == "prob":
        n = rng.randrange(1, 5)
        raw = [
            ((_rand_cost(rng), _rand_val(rng)), rng.randrange(1, 6))
            for _ in range(n)
        ]
        total = sum(w for _, w in raw)
        acc: dict = {}
        for k, w in raw:
            acc[k] = acc.get(k, Fraction(0)) + Fraction(w, total)
        return ProbOutcome("prob", SEQ_NAT, mode, Dist(acc))
    if kind == "state":
        states = [("nat", i) for i in range(3)]
        table = tuple(
            (s, (_rand_cost(rng), rng.choice(states), _rand_val(rng)))
            for s in states
        )
        return StateOutcome("state", SEQ_NAT, mode, table, frozenset())
    raise ValueError(kind)


def raise_outcome(rng: random.Random, out):
    """An outcome guaranteed to dominate ``out`` in the approximation order."""
    bump = lambda c: c + rng.randrange(3)
    if isinstance(out, PureOutcome):
        return PureOutcome(out.theory, out.monoid, out.mode, bump(out.cost),
                           out.value)
    if isinstance(out, NondetOutcome):
        raised = {(bump(c), v) for c, v in out.branches}
        # extra raised copies keep both directions of the lifting intact
        for c, v in out.branches:
            if rng.random() < 0.3:
                raised.add((c + rng.randrange(1, 4), v))
        return NondetOutcome(out.theory, out.monoid, out.mode,
                             frozenset(raised))
    if isinstance(out, ProbOutcome):
        acc: dict = {}
        for (c, v), w in out.dist:
            if rng.random() < 0.5:
                acc[(c, v)] = acc.get((c, v), Fraction(0)) + w
            else:
                # split mass upward: part stays, part moves to a higher cost
                half = w / 2
                acc[(c, v)] = acc.get((c, v), Fraction(0)) + half
                key = (c + rng.randrange(1, 3), v)
                acc[key] = acc.get(key, Fraction(0)) + half
        return ProbOutcome(out.theory, out.monoid, out.mode, Dist(acc))
    if isinstance(out, StateOutcome):
        table = tuple(
            (s0, (bump(c), s1, v)) for s0, (c, s1, v) in out.table
        )
        return StateOutcome(out.theory, out.monoid, out.mode, table,
                            out.escaped)
    raise ValueError(type(out))


def gen_dist(rng: random.Random, values=(("nat", 0), ("nat", 1))):
    """A random exact-rational distribution over (cost, value) pairs."""
    n = rng.randrange(1, 5)
    raw = [
        ((_rand_cost(rng), rng.choice(values)), rng.randrange(1, 6))
        for _ in range(n)
    ]
    total = sum(w for _, w in raw)
    acc: dict = {}
    for k, w in raw:
        acc[k] = acc.get(k, Fraction(0)) + Fraction(w, total)
    return Dist(acc)
