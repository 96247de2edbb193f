"""Denotational evaluator for closed, well-typed programs.

A closed computation of type ``F A`` denotes, per effect theory:

* pure      -- a single ``(cost, value)`` pair,
* nondet    -- a finite *set* of ``(cost, value)`` pairs (duplicates
               collapse, so the semilattice equations hold on the nose),
* prob      -- a finite map from ``(cost, value)`` to exact rational
               weight, merged after every operation (convex-space
               equations hold by representation),
* state     -- a function from initial state to ``(cost, state, value)``,
               tabulated over a configured finite state domain.

Cost is threaded writer-style through ``bind``; the step laws hold by
construction.  Computations of arrow type denote Python callables and the
effect operations act on them pointwise.  In extensional mode every
charge is the monoid zero, collapsing cost while leaving behavior alone.

Runtime values are plain tagged tuples::

    ('unit',)  ('bool', b)  ('nat', n)  ('pair', a, b)  ('inl', v)
    ('inr', v)  ('list', (v0, v1, ...))  ('thunk', env_items, term)
    ('den', comp_ty, denotation)

The last two are suspensions: a source-level thunk with its captured
environment, and an already-evaluated denotation (produced by the
recursors for their induction hypotheses).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .syntax import (
    Ap, ArrowTy, Bind, BoolLit, BoolTy, Branch, CompTerm, CompTy, Cons,
    CostLit, FTy, Fail, Flip, Fst, Get, If, Inl, Inr, Lam, ListRec, ListTy,
    NatCost, NatRec, NatTy, Nil, Pair, Par, ProdTy, Program, Put, Ret, Snd,
    Step, Suc, SumCase, SumTy, Term, Triv, UnitTy, ValueTy, Var, Zero,
    free_vars, term_str, unfold_arrows,
)
from .typecheck import elaborate


class EvalError(Exception):
    pass


class EvalMode(Enum):
    COST_COUNTING = "cost"
    EXTENSIONAL = "ext"


@dataclass(frozen=True)
class DomainConfig:
    """Finite enumeration bounds for inputs, list elements and states."""

    nat_max: int = 16          # top-level nats range over 0..nat_max
    list_len: int = 5          # lists up to this length
    elems: int = 5             # list/state elements range over 0..elems-1
    state_max: int = 8         # nat-typed states range over 0..state_max
    input_cap: int = 20000     # refuse to enumerate larger input spaces
    hyp_candidates: int = 500  # generated candidates for hypothesis specs
    hyp_min_admitted: int = 50
    hyp_depth: int = 4

    def to_json(self):
        return {
            "nat_max": self.nat_max,
            "list_len": self.list_len,
            "elems": self.elems,
            "state_max": self.state_max,
        }


DEFAULT_CONFIG = DomainConfig()


# ---------------------------------------------------------------------------
# Runtime values
# ---------------------------------------------------------------------------

RUNIT = ("unit",)
RTRUE = ("bool", True)
RFALSE = ("bool", False)


def rnat(n: int):
    return ("nat", n)


def rlist(items):
    return ("list", tuple(items))


def val_sort_key(v):
    tag = v[0]
    match tag:
        case "unit":
            return ("unit",)
        case "bool":
            return ("bool", v[1])
        case "nat":
            return ("nat", v[1])
        case "pair":
            return ("pair", val_sort_key(v[1]), val_sort_key(v[2]))
        case "inl":
            return ("sum", 0, val_sort_key(v[1]))
        case "inr":
            return ("sum", 1, val_sort_key(v[1]))
        case "list":
            return ("list", len(v[1]), tuple(val_sort_key(x) for x in v[1]))
        case _:
            return ("zz", repr(v))


def cost_sort_key(c):
    return c if isinstance(c, tuple) else (c,)


def pair_sort_key(cv):
    return (cost_sort_key(cv[0]), val_sort_key(cv[1]))


def val_str(v) -> str:
    match v[0]:
        case "unit":
            return "tt"
        case "bool":
            return "true" if v[1] else "false"
        case "nat":
            return str(v[1])
        case "pair":
            return f"({val_str(v[1])}, {val_str(v[2])})"
        case "inl":
            return f"inl {val_str(v[1])}"
        case "inr":
            return f"inr {val_str(v[1])}"
        case "list":
            return "[" + " ".join(val_str(x) for x in v[1]) + "]"
        case "thunk":
            return f"<thunk {term_str(v[2])}>"
        case "den":
            return "<suspended>"
        case _:
            return repr(v)


def val_to_json(v):
    match v[0]:
        case "unit":
            return "tt"
        case "bool" | "nat":
            return v[1]
        case "pair":
            return [val_to_json(v[1]), val_to_json(v[2])]
        case "inl":
            return {"inl": val_to_json(v[1])}
        case "inr":
            return {"inr": val_to_json(v[1])}
        case "list":
            return [val_to_json(x) for x in v[1]]
        case _:
            return val_str(v)


# ---------------------------------------------------------------------------
# Outcomes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Outcome:
    theory: str
    monoid: object
    mode: object  # EvalMode; thunks inside values are forced under it


@dataclass(frozen=True)
class PureOutcome(Outcome):
    cost: object
    value: object

    def __str__(self):
        return f"step^{self.monoid.show(self.cost)} ret {val_str(self.value)}"

    def max_cost(self):
        return self.cost

    def min_cost(self):
        return self.cost


@dataclass(frozen=True)
class NondetOutcome(Outcome):
    branches: frozenset  # of (cost, value)

    def __str__(self):
        items = sorted(self.branches, key=pair_sort_key)
        body = ", ".join(
            f"({self.monoid.show(c)}, {val_str(v)})" for c, v in items
        )
        return "{" + body + "}"

    def max_cost(self):
        return _extreme_cost(self.monoid, (c for c, _ in self.branches), max)

    def min_cost(self):
        return _extreme_cost(self.monoid, (c for c, _ in self.branches), min)


class Dist:
    """Immutable finite map from (cost, value) to positive Fraction."""

    __slots__ = ("items", "_map", "_hash")

    def __init__(self, mapping):
        clean = {k: w for k, w in mapping.items() if w != 0}
        self.items = tuple(
            sorted(clean.items(), key=lambda kw: pair_sort_key(kw[0]))
        )
        self._map = clean
        self._hash = None

    def __eq__(self, other):
        return isinstance(other, Dist) and self._map == other._map

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.items)
        return self._hash

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def total(self) -> Fraction:
        return sum((w for _, w in self.items), Fraction(0))


@dataclass(frozen=True)
class ProbOutcome(Outcome):
    dist: Dist

    def __str__(self):
        body = ", ".join(
            f"({self.monoid.show(c)}, {val_str(v)}) -> {w}"
            for (c, v), w in self.dist
        )
        return "{" + body + "}"

    def max_cost(self):
        return _extreme_cost(self.monoid, (c for (c, _), _ in self.dist), max)

    def min_cost(self):
        return _extreme_cost(self.monoid, (c for (c, _), _ in self.dist), min)


@dataclass(frozen=True)
class StateOutcome(Outcome):
    table: tuple       # sorted ((s0, (cost, s1, value)), ...)
    escaped: frozenset  # initial states whose run left the domain

    def __str__(self):
        body = "; ".join(
            f"{val_str(s0)} -> ({self.monoid.show(c)}, {val_str(s1)}, {val_str(v)})"
            for s0, (c, s1, v) in self.table
        )
        esc = ""
        if self.escaped:
            esc = " escaped:{" + ", ".join(
                sorted(val_str(s) for s in self.escaped)
            ) + "}"
        return "{" + body + "}" + esc

    def max_cost(self):
        return _extreme_cost(self.monoid, (c for _, (c, _, _) in self.table), max)

    def min_cost(self):
        return _extreme_cost(self.monoid, (c for _, (c, _, _) in self.table), min)


def _extreme_cost(monoid, costs, pick):
    costs = list(costs)
    if not costs:
        return None
    return pick(costs, key=cost_sort_key)


# ---------------------------------------------------------------------------
# Theory operations at F type
# ---------------------------------------------------------------------------


class _PureOps:
    """F-level monadic operations; arrow lifting is the evaluator's job,
    so ``bind`` continuations here always return F-level denotations."""

    kind = "pure"

    def __init__(self, monoid):
        self.monoid = monoid

    def unit(self, v):
        return (self.monoid.zero, v)

    def charge(self, c, m):
        return (self.monoid.add(c, m[0]), m[1])

    def bind(self, m, k):
        return self.charge(m[0], k(m[1]))

    def par(self, m0, m1):
        return (self.monoid.par(m0[0], m1[0]), ("pair", m0[1], m1[1]))

    # defensive: the checker precludes these outside their theory
    def _outside(self, op):
        raise EvalError(f"effect operation '{op}' outside the "
                        f"'{self.kind}' theory")

    def branch(self, m0, m1):
        self._outside("branch")

    def fail(self):
        self._outside("fail")

    def flip(self, p, m0, m1):
        self._outside("flip")

    def get(self, k):
        self._outside("get")

    def put(self, v, m):
        self._outside("set")


class _NondetOps(_PureOps):
    kind = "nondet"

    def unit(self, v):
        return frozenset(((self.monoid.zero, v),))

    def charge(self, c, m):
        add = self.monoid.add
        return frozenset((add(c, c0), v) for c0, v in m)

    def bind(self, m, k):
        acc = set()
        for c0, v in m:
            acc.update(self.charge(c0, k(v)))
        return frozenset(acc)

    def branch(self, m0, m1):
        return m0 | m1

    def fail(self):
        return frozenset()


class _ProbOps(_PureOps):
    kind = "prob"

    def unit(self, v):
        return Dist({(self.monoid.zero, v): Fraction(1)})

    def charge(self, c, m):
        add = self.monoid.add
        return Dist({(add(c, c0), v): w for (c0, v), w in m})

    def bind(self, m, k):
        add = self.monoid.add
        acc: dict = {}
        for (c0, v), w in m:
            for (c1, v1), w1 in k(v):
                key = (add(c0, c1), v1)
                acc[key] = acc.get(key, Fraction(0)) + w * w1
        return Dist(acc)

    def flip(self, p: Fraction, m0, m1):
        if p == 0:
            return m0
        if p == 1:
            return m1
        acc: dict = {}
        for (c, v), w in m0:
            acc[(c, v)] = acc.get((c, v), Fraction(0)) + (1 - p) * w
        for (c, v), w in m1:
            acc[(c, v)] = acc.get((c, v), Fraction(0)) + p * w
        return Dist(acc)


class _StateOps(_PureOps):
    kind = "state"

    # denotations are s -> (cost, s', value)

    def unit(self, v):
        zero = self.monoid.zero
        return lambda s: (zero, s, v)

    def charge(self, c, m):
        add = self.monoid.add

        def run(s):
            c0, s1, v = m(s)
            return (add(c, c0), s1, v)

        return run

    def bind(self, m, k):
        add = self.monoid.add

        def run(s):
            c0, s1, v1 = m(s)
            c2, s2, v2 = k(v1)(s1)
            return (add(c0, c2), s2, v2)

        return run

    def get(self, k):
        return lambda s: k(s)(s)

    def put(self, v, m):
        return lambda s: m(v)


_OPS = {
    "pure": _PureOps,
    "nondet": _NondetOps,
    "prob": _ProbOps,
    "state": _StateOps,
}


# ---------------------------------------------------------------------------
# The evaluator
# ---------------------------------------------------------------------------


class Evaluator:
    """Evaluates one elaborated program under a mode and domain config.

    Instances cache recursor towers whose branches are closed, so repeated
    evaluation over an input domain shares work.  Evaluation itself is
    pure; all caches are keyed by immutable values.
    """

    def __init__(self, program: Program, mode: EvalMode, cfg: DomainConfig):
        self.program = elaborate(program) if program is not None else None
        self.mode = mode
        self.cfg = cfg
        if program is not None:
            self.theory = program.theory
            self.monoid = program.monoid
        self.ops = None if program is None else _OPS[self.theory.kind](self.monoid)
        self.ext = mode is EvalMode.EXTENSIONAL
        self._rec_memo: dict = {}
        self._closed: dict = {}
        self._den = None
        self._outcomes: dict = {}

    @classmethod
    def raw(cls, theory, monoid, mode: EvalMode, cfg: DomainConfig):
        """Evaluator for already-elaborated loose terms (no program)."""
        ev = cls(None, mode, cfg)
        ev.theory = theory
        ev.monoid = monoid
        ev.ops = _OPS[theory.kind](monoid)
        return ev

    # -- cost helpers ---------------------------------------------------------

    def _cost_of(self, cexpr, env):
        match cexpr:
            case CostLit(v):
                return v
            case NatCost(term):
                v = self.eval_value(term, env)
                return self.monoid.scale(v[1])
        raise EvalError(f"bad cost expression {cexpr!r}")

    def _charge(self, c, d, ty):
        if self.ext or c == self.monoid.zero:
            return d
        if isinstance(ty, ArrowTy):
            return lambda a: self._charge(c, d(a), ty.cod)
        return self.ops.charge(c, d)

    def _empty(self, ty):
        if isinstance(ty, ArrowTy):
            return lambda a: self._empty(ty.cod)
        return self.ops.fail()

    def _combine2(self, f, d0, d1, ty):
        if isinstance(ty, ArrowTy):
            return lambda a: self._combine2(f, d0(a), d1(a), ty.cod)
        return f(d0, d1)

    def _bind_at(self, m, k, ty):
        if isinstance(ty, ArrowTy):
            return lambda a: self._bind_at(m, lambda v: k(v)(a), ty.cod)
        return self.ops.bind(m, k)

    def _get_at(self, k, ty):
        if isinstance(ty, ArrowTy):
            return lambda a: self._get_at(lambda s: k(s)(a), ty.cod)
        return self.ops.get(k)

    def _put_at(self, v, d, ty):
        if isinstance(ty, ArrowTy):
            return lambda a: self._put_at(v, d(a), ty.cod)
        return self.ops.put(v, d)

    # -- values ---------------------------------------------------------------

    def eval_value(self, t: Term, env: dict):
        match t:
            case Var(name):
                try:
                    return env[name]
                except KeyError:
                    raise EvalError(f"unbound variable '{name}' at run time")
            case Triv():
                return RUNIT
            case BoolLit(b):
                return RTRUE if b else RFALSE
            case Zero():
                return ("nat", 0)
            case Suc(a):
                return ("nat", self.eval_value(a, env)[1] + 1)
            case Nil():
                return ("list", ())
            case Cons(h, tl):
                hv = self.eval_value(h, env)
                tv = self.eval_value(tl, env)
                return ("list", (hv,) + tv[1])
            case Pair(a, b):
                return ("pair", self.eval_value(a, env), self.eval_value(b, env))
            case Fst(p):
                return self.eval_value(p, env)[1]
            case Snd(p):
                return self.eval_value(p, env)[2]
            case Inl(a):
                return ("inl", self.eval_value(a, env))
            case Inr(a):
                return ("inr", self.eval_value(a, env))
            case CompTerm():
                fv = free_vars(t)
                items = tuple(
                    sorted((n, v) for n, v in env.items() if n in fv)
                )
                return ("thunk", items, t)
        raise EvalError(f"cannot evaluate value {t!r}")

    def force(self, v):
        match v[0]:
            case "thunk":
                return self.eval_comp(v[2], dict(v[1]))
            case "den":
                return v[2]
        raise EvalError(f"forcing a non-thunk value {val_str(v)}")

    # -- computations -----------------------------------------------------------

    def eval_comp(self, t: CompTerm, env: dict):
        match t:
            case Ret(v):
                return self.ops.unit(self.eval_value(v, env))
            case Bind(e, x, body):
                m = self.eval_comp(e, env)
                def k(v, _body=body, _env=env, _x=x):
                    e2 = dict(_env)
                    e2[_x] = v
                    return self.eval_comp(_body, e2)
                return self._bind_at(m, k, t.ty)
            case Lam(x, _, body):
                def fn(a, _body=body, _env=env, _x=x):
                    e2 = dict(_env)
                    e2[_x] = a
                    return self.eval_comp(_body, e2)
                return fn
            case Ap(f, a):
                return self.eval_comp(f, env)(self.eval_value(a, env))
            case Var(_):
                return self.force(self.eval_value(t, env))
            case Step(c, body):
                cost = self._cost_of(c, env)
                return self._charge(cost, self.eval_comp(body, env), t.ty)
            case If(b, th, el):
                bv = self.eval_value(b, env)
                return self.eval_comp(th if bv[1] else el, env)
            case SumCase(sc, xl, lb, xr, rb):
                sv = self.eval_value(sc, env)
                e2 = dict(env)
                if sv[0] == "inl":
                    e2[xl] = sv[1]
                    return self.eval_comp(lb, e2)
                e2[xr] = sv[1]
                return self.eval_comp(rb, e2)
            case NatRec(n, z, kvar, ihvar, sb):
                nv = self.eval_value(n, env)[1]
                return self._natrec(t, nv, z, kvar, ihvar, sb, env)
            case ListRec(l, z, xvar, xsvar, ihvar, cb):
                lv = self.eval_value(l, env)
                return self._listrec(t, lv, z, xvar, xsvar, ihvar, cb, env)
            case Branch(l, r):
                return self._combine2(
                    self.ops.branch,
                    self.eval_comp(l, env), self.eval_comp(r, env), t.ty,
                )
            case Fail():
                return self._empty(t.ty)
            case Flip(p, l, r):
                if p == 0:
                    return self.eval_comp(l, env)
                if p == 1:
                    return self.eval_comp(r, env)
                return self._combine2(
                    lambda a, b: self.ops.flip(p, a, b),
                    self.eval_comp(l, env), self.eval_comp(r, env), t.ty,
                )
            case Get(x, body):
                def k(s, _body=body, _env=env, _x=x):
                    e2 = dict(_env)
                    e2[_x] = s
                    return self.eval_comp(_body, e2)
                return self._get_at(k, t.ty)
            case Put(v, body):
                sv = self.eval_value(v, env)
                return self._put_at(sv, self.eval_comp(body, env), t.ty)
            case Par(l, r):
                m0 = self.eval_comp(l, env)
                m1 = self.eval_comp(r, env)
                return self.ops.par(m0, m1)
        raise EvalError(f"cannot evaluate computation {t!r}")

    def _branches_closed(self, node, names, branches) -> bool:
        hit = self._closed.get(id(node))
        if hit is not None:
            return hit
        fv = frozenset()
        for b in branches:
            fv |= free_vars(b)
        ok = fv <= set(names)
        self._closed[id(node)] = ok
        return ok

    def _natrec(self, node, nv, z, kvar, ihvar, sb, env):
        memo_ok = self._branches_closed(node, (kvar, ihvar), (z, sb))
        if memo_ok:
            hit = self._rec_memo.get((id(node), nv))
            if hit is not None:
                return hit
        start = 0
        d = None
        if memo_ok:
            for i in range(nv, 0, -1):
                hit = self._rec_memo.get((id(node), i - 1))
                if hit is not None:
                    start, d = i - 1, hit
                    break
        if d is None:
            d = self.eval_comp(z, env)
            if memo_ok:
                self._rec_memo[(id(node), 0)] = d
        for i in range(start, nv):
            e2 = dict(env)
            e2[kvar] = ("nat", i)
            e2[ihvar] = ("den", node.ty, d)
            d = self.eval_comp(sb, e2)
            if memo_ok:
                self._rec_memo[(id(node), i + 1)] = d
        return d

    def _listrec(self, node, lv, z, xvar, xsvar, ihvar, cb, env):
        charge = node.list_charge
        memo_ok = self._branches_closed(node, (xvar, xsvar, ihvar), (z, cb))
        items = lv[1]
        if memo_ok:
            hit = self._rec_memo.get((id(node), items))
            if hit is not None:
                return hit
        # fold from the tail; reuse the longest memoized suffix
        start = len(items)
        d = None
        if memo_ok:
            for i in range(len(items)):
                hit = self._rec_memo.get((id(node), items[i:]))
                if hit is not None:
                    start, d = i, hit
                    break
        if d is None:
            d = self.eval_comp(z, env)
            if memo_ok:
                self._rec_memo[(id(node), ())] = d
        for i in range(start - 1, -1, -1):
            suffix = items[i + 1:]
            e2 = dict(env)
            e2[xvar] = items[i]
            e2[xsvar] = ("list", suffix)
            e2[ihvar] = ("den", node.ty, d)
            d = self.eval_comp(cb, e2)
            if charge is not None:
                d = self._charge(charge, d, node.ty)
            if memo_ok:
                self._rec_memo[(id(node), items[i:])] = d
        return d

    # -- program-level entry points ----------------------------------------------

    def denotation(self):
        if self._den is None:
            if self.program is None:
                raise EvalError("raw evaluator has no program body")
            self._den = self.eval_comp(self.program.body, {})
        return self._den

    def outcome_of_den(self, den) -> Outcome:
        kind = self.theory.kind
        monoid = self.monoid
        if kind == "pure":
            return PureOutcome("pure", monoid, self.mode, den[0], den[1])
        if kind == "nondet":
            return NondetOutcome("nondet", monoid, self.mode, den)
        if kind == "prob":
            out = ProbOutcome("prob", monoid, self.mode, den)
            if out.dist.total() != 1:
                raise EvalError(
                    f"probability mass {out.dist.total()} is not 1"
                )
            return out
        table = []
        escaped = []
        domain = state_domain(self.theory.state_ty, self.cfg)
        domain_set = set(domain)
        for s0 in domain:
            c, s1, v = den(s0)
            if s1 in domain_set:
                table.append((s0, (c, s1, v)))
            else:
                # the run left the configured domain: drop the entry but
                # record it, so comparisons stay honest about coverage
                escaped.append(s0)
        if domain and not table:
            raise EvalError(
                "state escape: every run left the configured state domain"
            )
        return StateOutcome(
            "state", monoid, self.mode,
            tuple(sorted(table, key=lambda e: val_sort_key(e[0]))),
            frozenset(escaped),
        )

    def outcome(self, args: tuple = ()) -> Outcome:
        """Outcome of the program applied to ``args`` (runtime values)."""
        hit = self._outcomes.get(args)
        if hit is not None:
            return hit
        arg_tys, _ = unfold_arrows(self.program.declared_ty)
        if len(args) != len(arg_tys):
            raise EvalError(
                f"program expects {len(arg_tys)} arguments, got {len(args)}"
            )
        den = self.denotation()
        for a in args:
            den = den(a)
        out = self.outcome_of_den(den)
        self._outcomes[args] = out
        return out


_EVALUATORS: dict = {}
_EVALUATORS_CAP = 2048


def get_evaluator(p: Program, mode: EvalMode, cfg: DomainConfig) -> Evaluator:
    """Shared evaluator per (program, mode, config); repeated checks of the
    same program reuse its recursor caches and tabulated outcomes."""
    key = (id(p), mode, cfg)
    hit = _EVALUATORS.get(key)
    if hit is not None and hit[0] is p:
        return hit[1]
    ev = Evaluator(p, mode, cfg)
    if len(_EVALUATORS) >= _EVALUATORS_CAP:
        _EVALUATORS.clear()
    _EVALUATORS[key] = (p, ev)
    return ev


def evaluate(
    p: Program,
    mode: EvalMode = EvalMode.COST_COUNTING,
    cfg: DomainConfig = DEFAULT_CONFIG,
) -> Outcome:
    """Evaluate a closed program of F type to its outcome."""
    if not isinstance(p.declared_ty, FTy):
        raise EvalError("evaluate expects a program of F type; use eval_fn")
    return get_evaluator(p, mode, cfg).outcome(())


def as_args(x) -> tuple:
    """Normalize a domain element to an argument tuple.

    Runtime values are themselves tuples tagged by a string, so an input
    is a tuple-of-arguments exactly when its first element is a tuple.
    """
    if isinstance(x, tuple) and (len(x) == 0 or isinstance(x[0], tuple)):
        return x
    return (x,)


def eval_fn(p: Program, mode: EvalMode, cfg: DomainConfig, domain) -> dict:
    """Tabulate a function program over ``domain``.

    ``domain`` is a sequence of runtime values (one argument) or of tuples
    of runtime values (curried arguments).  Returns an ordered dict from
    input to Outcome.
    """
    ev = get_evaluator(p, mode, cfg)
    return {x: ev.outcome(as_args(x)) for x in domain}


# ---------------------------------------------------------------------------
# Domain enumeration
# ---------------------------------------------------------------------------


def enumerate_value_ty(ty: ValueTy, cfg: DomainConfig, nat_bound=None):
    """All runtime values of a first-order value type, in canonical order."""
    match ty:
        case UnitTy():
            return [RUNIT]
        case BoolTy():
            return [RFALSE, RTRUE]
        case NatTy():
            hi = cfg.nat_max if nat_bound is None else nat_bound
            return [("nat", n) for n in range(hi + 1)]
        case ProdTy(a, b):
            return [
                ("pair", x, y)
                for x in enumerate_value_ty(a, cfg, nat_bound)
                for y in enumerate_value_ty(b, cfg, nat_bound)
            ]
        case SumTy(a, b):
            return [("inl", x) for x in enumerate_value_ty(a, cfg, nat_bound)] + [
                ("inr", y) for y in enumerate_value_ty(b, cfg, nat_bound)
            ]
        case ListTy(elem, _):
            elems = enumerate_value_ty(elem, cfg, nat_bound=cfg.elems - 1)
            out = []
            for n in range(cfg.list_len + 1):
                for combo in itertools.product(elems, repeat=n):
                    out.append(("list", combo))
            return out
        case _:
            raise EvalError(f"cannot enumerate values of type {ty!r}")


def state_domain(ty: ValueTy, cfg: DomainConfig):
    if isinstance(ty, NatTy):
        return [("nat", n) for n in range(cfg.state_max + 1)]
    return enumerate_value_ty(ty, cfg)


def enumerate_inputs(ty: CompTy, cfg: DomainConfig):
    """Enumerate argument tuples for a first-order curried program type."""
    arg_tys, _ = unfold_arrows(ty)
    domains = [enumerate_value_ty(a, cfg) for a in arg_tys]
    count = 1
    for d in domains:
        count *= len(d)
        if count > cfg.input_cap:
            raise EvalError(
                f"input domain larger than the configured cap "
                f"({cfg.input_cap})"
            )
    return arg_tys, list(itertools.product(*domains))


def quote(v) -> Term:
    """Embed a first-order runtime value back into syntax."""
    match v[0]:
        case "unit":
            return Triv()
        case "bool":
            return BoolLit(v[1])
        case "nat":
            t: Term = Zero()
            for _ in range(v[1]):
                t = Suc(t)
            return t
        case "pair":
            return Pair(quote(v[1]), quote(v[2]))
        case "inl":
            return Inl(quote(v[1]))
        case "inr":
            return Inr(quote(v[1]))
        case "list":
            t = Nil()
            for x in reversed(v[1]):
                t = Cons(quote(x), t)
            return t
        case "thunk":
            if not v[1]:
                return v[2]
            raise EvalError("cannot quote a thunk with a nonempty environment")
    raise EvalError(f"cannot quote {val_str(v)}")
