"""Abstract and surface syntax for the two-level (value/computation) language.

The term language follows the call-by-push-value discipline: *values* are
inert first-order data (plus suspended computations), *computations* may
charge cost and perform the effects of their program's declared theory.
Suspension is transparent: a computation term appearing in value position
*is* the thunk, and a variable of suspension type used in computation
position is forced implicitly.

Surface syntax is s-expressions, one program per file::

    #name double
    #effect pure
    #cost seq
    (: (-> nat (F nat))
       (lam (n : nat)
         (natrec n (ret zero) (k ih (step 1 (bind ih (m (ret (suc (suc m))))))))))

Headers: ``#name NAME`` (optional), ``#effect pure|nondet|prob|state:<ty>``
and ``#cost seq|par``.  Comments run from ``;`` to end of line.

Forms: ``(ret v)``, ``(bind e (x body))``, ``(lam (x : ty) body)``,
``(ap f v ...)``, ``(step c body)``, ``(natrec n z (k ih body))``,
``(listrec l nl (x xs ih body))``, ``(if b t f)``,
``(case s (x e1) (y e2))``, ``(branch e0 e1)``, ``fail``,
``(flip p e0 e1)``, ``(get (s body))``, ``(set v body)``, ``(par e0 e1)``.
Values: ``tt``, ``true``/``false``, ``zero``/``(suc v)``/numerals, ``nil``,
``(cons v l)``, ``(pair a b)``, ``(fst v)``, ``(snd v)``, ``(inl v)``,
``(inr v)``, variables, or any computation form (a thunk).

Step annotations ``c`` are numerals (``(w s)`` pairs under the parallel
monoid) or nat-valued value terms, evaluated cost-free and scaled by the
monoid unit at run time.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .costs import MONOIDS, SEQ_NAT, WORK_SPAN, CostMonoid


class SyntaxError_(Exception):
    """Surface-syntax error with position information."""

    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(f"{where}{message}")


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


class Ty:
    pass


class ValueTy(Ty):
    pass


class CompTy(Ty):
    pass


@dataclass(frozen=True)
class UnitTy(ValueTy):
    pass


@dataclass(frozen=True)
class BoolTy(ValueTy):
    pass


@dataclass(frozen=True)
class NatTy(ValueTy):
    pass


@dataclass(frozen=True)
class ProdTy(ValueTy):
    fst: ValueTy
    snd: ValueTy


@dataclass(frozen=True)
class SumTy(ValueTy):
    left: ValueTy
    right: ValueTy


@dataclass(frozen=True)
class ListTy(ValueTy):
    elem: ValueTy
    charge: object = None  # cost charged per cons by the recursor; None = zero


@dataclass(frozen=True)
class UTy(ValueTy):
    comp: CompTy


@dataclass(frozen=True)
class FTy(CompTy):
    value: ValueTy


@dataclass(frozen=True)
class ArrowTy(CompTy):
    dom: ValueTy
    cod: CompTy


UNIT = UnitTy()
BOOL = BoolTy()
NAT = NatTy()


def unfold_arrows(ty: CompTy):
    """Split a curried computation type into (argument types, final F type)."""
    args = []
    while isinstance(ty, ArrowTy):
        args.append(ty.dom)
        ty = ty.cod
    return tuple(args), ty


# ---------------------------------------------------------------------------
# Effect theories
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EffectTheory:
    kind: str  # pure | nondet | prob | state
    state_ty: Optional[ValueTy] = None

    def __post_init__(self):
        if self.kind == "state" and self.state_ty is None:
            raise ValueError("state theory needs a state type")


PURE = EffectTheory("pure")
NONDET = EffectTheory("nondet")
PROB = EffectTheory("prob")


def state_theory(ty: ValueTy) -> EffectTheory:
    return EffectTheory("state", ty)


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------

_meta = dict(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Term:
    pass


@dataclass(frozen=True)
class ValueTerm(Term):
    pass


@dataclass(frozen=True)
class CompTerm(Term):
    pass


# -- values ------------------------------------------------------------------


@dataclass(frozen=True)
class Var(ValueTerm):
    name: str
    loc: object = field(**_meta)


@dataclass(frozen=True)
class Triv(ValueTerm):
    loc: object = field(**_meta)


@dataclass(frozen=True)
class BoolLit(ValueTerm):
    value: bool
    loc: object = field(**_meta)


@dataclass(frozen=True)
class Zero(ValueTerm):
    loc: object = field(**_meta)


@dataclass(frozen=True)
class Suc(ValueTerm):
    arg: ValueTerm
    loc: object = field(**_meta)


@dataclass(frozen=True)
class Nil(ValueTerm):
    loc: object = field(**_meta)


@dataclass(frozen=True)
class Cons(ValueTerm):
    head: ValueTerm
    tail: ValueTerm
    loc: object = field(**_meta)


@dataclass(frozen=True)
class Pair(ValueTerm):
    fst: ValueTerm
    snd: ValueTerm
    loc: object = field(**_meta)


@dataclass(frozen=True)
class Fst(ValueTerm):
    pair: ValueTerm
    loc: object = field(**_meta)


@dataclass(frozen=True)
class Snd(ValueTerm):
    pair: ValueTerm
    loc: object = field(**_meta)


@dataclass(frozen=True)
class Inl(ValueTerm):
    arg: ValueTerm
    loc: object = field(**_meta)


@dataclass(frozen=True)
class Inr(ValueTerm):
    arg: ValueTerm
    loc: object = field(**_meta)


# -- cost annotations ---------------------------------------------------------


@dataclass(frozen=True)
class CostLit:
    value: object  # int (seq) or (work, span) tuple (par)


@dataclass(frozen=True)
class NatCost:
    """A nat-valued value term used as a cost: n steps at the monoid unit."""

    term: ValueTerm


CostExpr = Union[CostLit, NatCost]


# -- computations -------------------------------------------------------------


@dataclass(frozen=True)
class Ret(CompTerm):
    value: ValueTerm
    loc: object = field(**_meta)
    ty: object = field(**_meta)


@dataclass(frozen=True)
class Bind(CompTerm):
    comp: CompTerm
    var: str
    body: CompTerm
    loc: object = field(**_meta)
    ty: object = field(**_meta)


@dataclass(frozen=True)
class Lam(CompTerm):
    var: str
    var_ty: ValueTy
    body: CompTerm
    loc: object = field(**_meta)
    ty: object = field(**_meta)


@dataclass(frozen=True)
class Ap(CompTerm):
    fn: CompTerm
    arg: ValueTerm
    loc: object = field(**_meta)
    ty: object = field(**_meta)


@dataclass(frozen=True)
class Step(CompTerm):
    cost: CostExpr
    body: CompTerm
    loc: object = field(**_meta)
    ty: object = field(**_meta)


@dataclass(frozen=True)
class NatRec(CompTerm):
    scrut: ValueTerm
    zero_branch: CompTerm
    var_pred: str
    var_ih: str
    suc_branch: CompTerm
    motive: Optional[CompTy] = None  # fixes the ih binder's type U(motive)
    loc: object = field(**_meta)
    ty: object = field(**_meta)


@dataclass(frozen=True)
class ListRec(CompTerm):
    scrut: ValueTerm
    nil_branch: CompTerm
    var_head: str
    var_tail: str
    var_ih: str
    cons_branch: CompTerm
    motive: Optional[CompTy] = None
    loc: object = field(**_meta)
    ty: object = field(**_meta)
    list_charge: object = field(**_meta)  # per-cons charge, filled by checking


@dataclass(frozen=True)
class SumCase(CompTerm):
    scrut: ValueTerm
    var_left: str
    left_branch: CompTerm
    var_right: str
    right_branch: CompTerm
    loc: object = field(**_meta)
    ty: object = field(**_meta)


@dataclass(frozen=True)
class If(CompTerm):
    cond: ValueTerm
    then_branch: CompTerm
    else_branch: CompTerm
    loc: object = field(**_meta)
    ty: object = field(**_meta)


@dataclass(frozen=True)
class Branch(CompTerm):
    left: CompTerm
    right: CompTerm
    loc: object = field(**_meta)
    ty: object = field(**_meta)


@dataclass(frozen=True)
class Fail(CompTerm):
    loc: object = field(**_meta)
    ty: object = field(**_meta)


@dataclass(frozen=True)
class Flip(CompTerm):
    prob: Fraction
    left: CompTerm
    right: CompTerm
    loc: object = field(**_meta)
    ty: object = field(**_meta)

    def __post_init__(self):
        if not 0 <= self.prob <= 1:
            raise ValueError(f"flip probability {self.prob} outside [0, 1]")


@dataclass(frozen=True)
class Get(CompTerm):
    var: str
    body: CompTerm
    loc: object = field(**_meta)
    ty: object = field(**_meta)


@dataclass(frozen=True)
class Put(CompTerm):
    value: ValueTerm
    body: CompTerm
    loc: object = field(**_meta)
    ty: object = field(**_meta)


@dataclass(frozen=True)
class Par(CompTerm):
    left: CompTerm
    right: CompTerm
    loc: object = field(**_meta)
    ty: object = field(**_meta)


# ---------------------------------------------------------------------------
# Programs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Program:
    name: str
    theory: EffectTheory
    monoid: CostMonoid
    body: CompTerm
    declared_ty: CompTy


def nat_lit(n: int) -> ValueTerm:
    t: ValueTerm = Zero()
    for _ in range(n):
        t = Suc(t)
    return t


def list_lit(items) -> ValueTerm:
    t: ValueTerm = Nil()
    for x in reversed(list(items)):
        t = Cons(x, t)
    return t


# ---------------------------------------------------------------------------
# Free variables / substitution / alpha normalization
# ---------------------------------------------------------------------------

_FV_CACHE: dict = {}
_FV_CACHE_CAP = 200_000


def free_vars(t: Term) -> frozenset:
    cached = _FV_CACHE.get(id(t))
    if cached is not None and cached[0] is t:
        return cached[1]
    fv = _free_vars(t)
    if len(_FV_CACHE) >= _FV_CACHE_CAP:
        _FV_CACHE.clear()
    _FV_CACHE[id(t)] = (t, fv)
    return fv


def _free_vars(t: Term) -> frozenset:
    match t:
        case Var(name):
            return frozenset((name,))
        case Bind(comp, var, body):
            return free_vars(comp) | (free_vars(body) - {var})
        case Lam(var, _, body):
            return free_vars(body) - {var}
        case Get(var, body):
            return free_vars(body) - {var}
        case NatRec(scrut, zero_branch, k, ih, suc_branch):
            return (
                free_vars(scrut)
                | free_vars(zero_branch)
                | (free_vars(suc_branch) - {k, ih})
            )
        case ListRec(scrut, nil_branch, x, xs, ih, cons_branch):
            return (
                free_vars(scrut)
                | free_vars(nil_branch)
                | (free_vars(cons_branch) - {x, xs, ih})
            )
        case SumCase(scrut, xl, left, xr, right):
            return (
                free_vars(scrut)
                | (free_vars(left) - {xl})
                | (free_vars(right) - {xr})
            )
        case Step(cost, body):
            fv = free_vars(body)
            if isinstance(cost, NatCost):
                fv |= free_vars(cost.term)
            return fv
        case _:
            fv = frozenset()
            for f in dataclasses.fields(t):
                if f.name in ("loc", "ty", "list_charge"):
                    continue
                v = getattr(t, f.name)
                if isinstance(v, Term):
                    fv |= free_vars(v)
            return fv


def _fresh(base: str, avoid: set) -> str:
    if base not in avoid:
        return base
    i = 1
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


def _subst_under(body: Term, binders: tuple, mapping: dict):
    """Substitute inside a binder scope, freshening binders to avoid capture.

    Returns (renamed binder names, substituted body).
    """
    inner = {k: v for k, v in mapping.items() if k not in binders}
    if not inner or not (free_vars(body) & inner.keys()):
        return binders, body
    avoid = set()
    for v in inner.values():
        avoid |= free_vars(v)
    renames = {}
    fresh_binders = []
    for b in binders:
        if b in avoid:
            nb = _fresh(b, avoid | set(binders) | set(renames.values()))
            renames[b] = nb
            fresh_binders.append(nb)
        else:
            fresh_binders.append(b)
    if renames:
        body = subst(body, {o: Var(n) for o, n in renames.items()})
    return tuple(fresh_binders), subst(body, inner)


def subst(t: Term, mapping: dict) -> Term:
    """Capture-avoiding substitution of value terms for free variables."""
    if not mapping or not (free_vars(t) & mapping.keys()):
        return t
    sub = lambda x: subst(x, mapping)
    match t:
        case Var(name):
            return mapping.get(name, t)
        case Bind(e, x, b):
            (x,), b = _subst_under(b, (x,), mapping)
            return Bind(sub(e), x, b)
        case Lam(x, xty, b):
            (x,), b = _subst_under(b, (x,), mapping)
            return Lam(x, xty, b)
        case Get(x, b):
            (x,), b = _subst_under(b, (x,), mapping)
            return Get(x, b)
        case NatRec(n, z, k, ih, sb):
            (k, ih), sb = _subst_under(sb, (k, ih), mapping)
            return NatRec(sub(n), sub(z), k, ih, sb, t.motive)
        case ListRec(l, z, x, xs, ih, cb):
            (x, xs, ih), cb = _subst_under(cb, (x, xs, ih), mapping)
            return ListRec(sub(l), sub(z), x, xs, ih, cb, t.motive)
        case SumCase(sc, xl, lb, xr, rb):
            (xl,), lb = _subst_under(lb, (xl,), mapping)
            (xr,), rb = _subst_under(rb, (xr,), mapping)
            return SumCase(sub(sc), xl, lb, xr, rb)
        case Step(c, b):
            if isinstance(c, NatCost):
                c = NatCost(sub(c.term))
            return Step(c, sub(b))
        case _:
            updates = {}
            for f in dataclasses.fields(t):
                if f.name in ("loc", "ty", "list_charge"):
                    updates[f.name] = None
                    continue
                v = getattr(t, f.name)
                updates[f.name] = sub(v) if isinstance(v, Term) else v
            return type(t)(**updates)


def alpha_normalize(t: Term, _env=None, _counter=None) -> Term:
    """Rename every binder to v0, v1, ... in traversal order."""
    env = _env or {}
    counter = _counter if _counter is not None else [0]

    def rename_binder(old):
        new = f"v{counter[0]}"
        counter[0] += 1
        return new

    match t:
        case Var(name):
            return Var(env.get(name, name))
        case Bind(comp, var, body):
            c = alpha_normalize(comp, env, counter)
            nv = rename_binder(var)
            b = alpha_normalize(body, {**env, var: nv}, counter)
            return Bind(c, nv, b)
        case Lam(var, var_ty, body):
            nv = rename_binder(var)
            return Lam(nv, var_ty, alpha_normalize(body, {**env, var: nv}, counter))
        case Get(var, body):
            nv = rename_binder(var)
            return Get(nv, alpha_normalize(body, {**env, var: nv}, counter))
        case NatRec(scrut, zero_branch, k, ih, suc_branch):
            s = alpha_normalize(scrut, env, counter)
            z = alpha_normalize(zero_branch, env, counter)
            nk, nih = rename_binder(k), rename_binder(ih)
            sb = alpha_normalize(suc_branch, {**env, k: nk, ih: nih}, counter)
            return NatRec(s, z, nk, nih, sb, t.motive)
        case ListRec(scrut, nil_branch, x, xs, ih, cons_branch):
            s = alpha_normalize(scrut, env, counter)
            n = alpha_normalize(nil_branch, env, counter)
            nx, nxs, nih = rename_binder(x), rename_binder(xs), rename_binder(ih)
            cb = alpha_normalize(
                cons_branch, {**env, x: nx, xs: nxs, ih: nih}, counter
            )
            return ListRec(s, n, nx, nxs, nih, cb, t.motive)
        case SumCase(scrut, xl, left, xr, right):
            s = alpha_normalize(scrut, env, counter)
            nxl = rename_binder(xl)
            lb = alpha_normalize(left, {**env, xl: nxl}, counter)
            nxr = rename_binder(xr)
            rb = alpha_normalize(right, {**env, xr: nxr}, counter)
            return SumCase(s, nxl, lb, nxr, rb)
        case Step(cost, body):
            if isinstance(cost, NatCost):
                cost = NatCost(alpha_normalize(cost.term, env, counter))
            return Step(cost, alpha_normalize(body, env, counter))
        case _:
            updates = {}
            for f in dataclasses.fields(t):
                if f.name in ("loc", "ty", "list_charge"):
                    updates[f.name] = None
                    continue
                v = getattr(t, f.name)
                updates[f.name] = (
                    alpha_normalize(v, env, counter) if isinstance(v, Term) else v
                )
            return type(t)(**updates)


def alpha_eq(a: Term, b: Term) -> bool:
    return alpha_normalize(a) == alpha_normalize(b)


# ---------------------------------------------------------------------------
# S-expression reader
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SAtom:
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class SList:
    items: tuple
    line: int
    col: int


def _tokenize(text: str):
    line, col = 1, 0
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 0
            i += 1
        elif ch in " \t\r":
            col += 1
            i += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            yield (ch, line, col)
            col += 1
            i += 1
        else:
            start = i
            start_col = col
            while i < n and text[i] not in " \t\r\n();":
                i += 1
                col += 1
            yield (text[start:i], line, start_col)


def read_sexprs(text: str):
    """Read all s-expressions in ``text`` into SAtom/SList trees."""
    stack = []
    out = []
    for tok, line, col in _tokenize(text):
        if tok == "(":
            stack.append(([], line, col))
        elif tok == ")":
            if not stack:
                raise SyntaxError_("unmatched ')'", line, col)
            items, l0, c0 = stack.pop()
            node = SList(tuple(items), l0, c0)
            (stack[-1][0] if stack else out).append(node)
        else:
            node = SAtom(tok, line, col)
            (stack[-1][0] if stack else out).append(node)
    if stack:
        raise SyntaxError_("unclosed '('", stack[-1][1], stack[-1][2])
    return out


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_COMP_HEADS = {
    "ret", "bind", "lam", "ap", "step", "natrec", "listrec", "if", "case",
    "branch", "flip", "get", "set", "par",
}
_VALUE_HEADS = {"suc", "cons", "pair", "fst", "snd", "inl", "inr"}
_RESERVED = _COMP_HEADS | _VALUE_HEADS | {
    "fail", "tt", "true", "false", "zero", "nil", ":", "->", "unit", "bool",
    "nat", "prod", "sum", "list", "U", "F",
}

_THEORY_OPS = {
    "branch": "nondet", "fail": "nondet", "flip": "prob",
    "get": "state", "set": "state", "par": "pure",
}


def _is_numeral(s: str) -> bool:
    return s.isdigit()


def _err(sx, msg):
    raise SyntaxError_(msg, sx.line, sx.col)


class _Parser:
    def __init__(self, theory: EffectTheory, monoid: CostMonoid):
        self.theory = theory
        self.monoid = monoid

    # -- types --

    def ty(self, sx) -> Ty:
        if isinstance(sx, SAtom):
            match sx.text:
                case "unit":
                    return UNIT
                case "bool":
                    return BOOL
                case "nat":
                    return NAT
                case _:
                    _err(sx, f"unknown type '{sx.text}'")
        items = sx.items
        if not items or not isinstance(items[0], SAtom):
            _err(sx, "bad type")
        head = items[0].text
        args = items[1:]
        match head:
            case "prod" if len(args) == 2:
                return ProdTy(self.value_ty(args[0]), self.value_ty(args[1]))
            case "sum" if len(args) == 2:
                return SumTy(self.value_ty(args[0]), self.value_ty(args[1]))
            case "list" if len(args) == 1:
                return ListTy(self.value_ty(args[0]))
            case "list" if len(args) == 2:
                charge = self.cost_lit(args[0])
                if charge == self.monoid.zero:
                    return ListTy(self.value_ty(args[1]))
                return ListTy(self.value_ty(args[1]), charge)
            case "U" if len(args) == 1:
                return UTy(self.comp_ty(args[0]))
            case "F" if len(args) == 1:
                return FTy(self.value_ty(args[0]))
            case "->" if len(args) >= 2:
                cod = self.comp_ty(args[-1])
                for a in reversed(args[:-1]):
                    cod = ArrowTy(self.value_ty(a), cod)
                return cod
            case _:
                _err(sx, f"bad type form '{head}'")

    def value_ty(self, sx) -> ValueTy:
        t = self.ty(sx)
        if not isinstance(t, ValueTy):
            _err(sx, "expected a value type, found a computation type")
        return t

    def comp_ty(self, sx) -> CompTy:
        t = self.ty(sx)
        if not isinstance(t, CompTy):
            _err(sx, "expected a computation type, found a value type")
        return t

    # -- costs --

    def cost_lit(self, sx):
        if isinstance(sx, SAtom) and _is_numeral(sx.text):
            return self.monoid.scale(int(sx.text))
        if (
            isinstance(sx, SList)
            and len(sx.items) == 2
            and all(isinstance(i, SAtom) and _is_numeral(i.text) for i in sx.items)
        ):
            if self.monoid is not WORK_SPAN:
                _err(sx, "pair cost literal requires the parallel cost monoid")
            return (int(sx.items[0].text), int(sx.items[1].text))
        _err(sx, "expected a cost literal")

    def cost_expr(self, sx) -> CostExpr:
        if isinstance(sx, SAtom) and _is_numeral(sx.text):
            return CostLit(self.monoid.scale(int(sx.text)))
        if (
            isinstance(sx, SList)
            and len(sx.items) == 2
            and all(isinstance(i, SAtom) and _is_numeral(i.text) for i in sx.items)
        ):
            return CostLit(self.cost_lit(sx))
        return NatCost(self.value(sx))

    def rational(self, sx) -> Fraction:
        if not isinstance(sx, SAtom):
            _err(sx, "expected a rational")
        try:
            p = Fraction(sx.text)
        except (ValueError, ZeroDivisionError):
            _err(sx, f"bad rational '{sx.text}'")
        if not 0 <= p <= 1:
            _err(sx, f"probability {p} outside [0, 1]")
        return p

    # -- terms --

    def _binder(self, sx) -> str:
        if not isinstance(sx, SAtom) or sx.text in _RESERVED or _is_numeral(sx.text):
            _err(sx, "expected a variable name")
        return sx.text

    def value(self, sx) -> ValueTerm:
        loc = (sx.line, sx.col)
        if isinstance(sx, SAtom):
            match sx.text:
                case "tt":
                    return Triv(loc=loc)
                case "true":
                    return BoolLit(True, loc=loc)
                case "false":
                    return BoolLit(False, loc=loc)
                case "zero":
                    return Zero(loc=loc)
                case "nil":
                    return Nil(loc=loc)
                case "fail":
                    return self.comp(sx)  # a thunked fail
                case s if _is_numeral(s):
                    return nat_lit(int(s))
                case s if s in _RESERVED:
                    _err(sx, f"'{s}' is not a value")
                case s:
                    return Var(s, loc=loc)
        head = sx.items[0] if sx.items else None
        if isinstance(head, SAtom):
            args = sx.items[1:]
            match head.text:
                case "suc" if len(args) == 1:
                    return Suc(self.value(args[0]), loc=loc)
                case "cons" if len(args) == 2:
                    return Cons(self.value(args[0]), self.value(args[1]), loc=loc)
                case "pair" if len(args) == 2:
                    return Pair(self.value(args[0]), self.value(args[1]), loc=loc)
                case "fst" if len(args) == 1:
                    return Fst(self.value(args[0]), loc=loc)
                case "snd" if len(args) == 1:
                    return Snd(self.value(args[0]), loc=loc)
                case "inl" if len(args) == 1:
                    return Inl(self.value(args[0]), loc=loc)
                case "inr" if len(args) == 1:
                    return Inr(self.value(args[0]), loc=loc)
                case h if h in _COMP_HEADS:
                    return self.comp(sx)  # transparent thunk
        _err(sx, "bad value form")

    def comp(self, sx) -> CompTerm:
        loc = (sx.line, sx.col)
        if isinstance(sx, SAtom):
            if sx.text == "fail":
                self._effect_ok("fail", sx)
                return Fail(loc=loc)
            if sx.text in _RESERVED or _is_numeral(sx.text):
                _err(sx, f"'{sx.text}' is not a computation")
            return Var(sx.text, loc=loc)  # forced thunk variable
        head = sx.items[0] if sx.items else None
        if not isinstance(head, SAtom):
            _err(sx, "bad computation form")
        args = sx.items[1:]
        match head.text:
            case "ret" if len(args) == 1:
                return Ret(self.value(args[0]), loc=loc)
            case "bind" if len(args) == 2:
                e = self.comp(args[0])
                if not isinstance(args[1], SList) or len(args[1].items) != 2:
                    _err(args[1], "bind expects (x body)")
                x = self._binder(args[1].items[0])
                return Bind(e, x, self.comp(args[1].items[1]), loc=loc)
            case "lam" if len(args) == 2:
                b = args[0]
                if (
                    not isinstance(b, SList)
                    or len(b.items) != 3
                    or not isinstance(b.items[1], SAtom)
                    or b.items[1].text != ":"
                ):
                    _err(args[0], "lam expects (x : ty)")
                x = self._binder(b.items[0])
                return Lam(x, self.value_ty(b.items[2]), self.comp(args[1]), loc=loc)
            case "ap" if len(args) >= 2:
                fn = self.comp(args[0])
                for a in args[1:]:
                    fn = Ap(fn, self.value(a), loc=loc)
                return fn
            case "step" if len(args) == 2:
                return Step(self.cost_expr(args[0]), self.comp(args[1]), loc=loc)
            case "natrec" if len(args) in (3, 4):
                n = self.value(args[0])
                motive, args = self._motive(args)
                z = self.comp(args[1])
                b = args[2]
                if not isinstance(b, SList) or len(b.items) != 3:
                    _err(args[2], "natrec expects (k ih body)")
                k = self._binder(b.items[0])
                ih = self._binder(b.items[1])
                return NatRec(n, z, k, ih, self.comp(b.items[2]), motive,
                              loc=loc)
            case "listrec" if len(args) in (3, 4):
                l = self.value(args[0])
                motive, args = self._motive(args)
                z = self.comp(args[1])
                b = args[2]
                if not isinstance(b, SList) or len(b.items) != 4:
                    _err(args[2], "listrec expects (x xs ih body)")
                x = self._binder(b.items[0])
                xs = self._binder(b.items[1])
                ih = self._binder(b.items[2])
                return ListRec(l, z, x, xs, ih, self.comp(b.items[3]), motive,
                               loc=loc)
            case "if" if len(args) == 3:
                return If(
                    self.value(args[0]), self.comp(args[1]), self.comp(args[2]),
                    loc=loc,
                )
            case "case" if len(args) == 3:
                s = self.value(args[0])
                arms = []
                for a in args[1:]:
                    if not isinstance(a, SList) or len(a.items) != 2:
                        _err(a, "case expects (x body) arms")
                    arms.append((self._binder(a.items[0]), self.comp(a.items[1])))
                return SumCase(s, arms[0][0], arms[0][1], arms[1][0], arms[1][1],
                               loc=loc)
            case "branch" if len(args) == 2:
                self._effect_ok("branch", sx)
                return Branch(self.comp(args[0]), self.comp(args[1]), loc=loc)
            case "flip" if len(args) == 3:
                self._effect_ok("flip", sx)
                return Flip(
                    self.rational(args[0]), self.comp(args[1]), self.comp(args[2]),
                    loc=loc,
                )
            case "get" if len(args) == 1:
                self._effect_ok("get", sx)
                b = args[0]
                if not isinstance(b, SList) or len(b.items) != 2:
                    _err(args[0], "get expects (s body)")
                return Get(self._binder(b.items[0]), self.comp(b.items[1]), loc=loc)
            case "set" if len(args) == 2:
                self._effect_ok("set", sx)
                return Put(self.value(args[0]), self.comp(args[1]), loc=loc)
            case "par" if len(args) == 2:
                self._effect_ok("par", sx)
                return Par(self.comp(args[0]), self.comp(args[1]), loc=loc)
            case _:
                _err(sx, f"bad computation form '{head.text}'")

    def _motive(self, args):
        """Peel an optional ``(: ty)`` motive annotation from a recursor."""
        if (
            len(args) == 4
            and isinstance(args[1], SList)
            and len(args[1].items) == 2
            and isinstance(args[1].items[0], SAtom)
            and args[1].items[0].text == ":"
        ):
            motive = self.comp_ty(args[1].items[1])
            return motive, (args[0],) + tuple(args[2:])
        if len(args) == 4:
            _err(args[1], "expected a (: ty) motive annotation")
        return None, args

    def _effect_ok(self, op, sx):
        need = _THEORY_OPS[op]
        if self.theory.kind != need:
            _err(
                sx,
                f"effect operation '{op}' not available under the "
                f"'{self.theory.kind}' theory",
            )


def _parse_headers(source: str):
    name = "main"
    theory = None
    monoid = None
    rest_lines = []
    for raw in source.splitlines():
        line = raw.strip()
        if line.startswith("#name"):
            name = line[len("#name"):].strip()
        elif line.startswith("#effect"):
            spec = line[len("#effect"):].strip()
            if spec == "pure":
                theory = PURE
            elif spec == "nondet":
                theory = NONDET
            elif spec == "prob":
                theory = PROB
            elif spec.startswith("state:"):
                ty_src = spec[len("state:"):]
                sxs = read_sexprs(ty_src)
                if len(sxs) != 1:
                    raise SyntaxError_(f"bad state type '{ty_src}'")
                theory = state_theory(_Parser(PURE, SEQ_NAT).value_ty(sxs[0]))
            else:
                raise SyntaxError_(f"unknown effect theory '{spec}'")
        elif line.startswith("#cost"):
            spec = line[len("#cost"):].strip()
            if spec not in MONOIDS:
                raise SyntaxError_(f"unknown cost monoid '{spec}'")
            monoid = MONOIDS[spec]
        elif line.startswith("#"):
            raise SyntaxError_(f"unknown header '{line}'")
        else:
            rest_lines.append(raw)
            continue
        rest_lines.append("")  # keep line numbers aligned with the source
    return name, theory or PURE, monoid or SEQ_NAT, "\n".join(rest_lines)


def parse(source: str) -> Program:
    """Parse one program: headers, then ``(: ty body)`` or a bare body.

    A bare body must synthesize its type; ascribe non-synthesizable
    programs (for instance a top-level ``fail``) explicitly.
    """
    name, theory, monoid, rest = _parse_headers(source)
    sxs = read_sexprs(rest)
    if len(sxs) != 1:
        raise SyntaxError_("expected exactly one program form")
    top = sxs[0]
    p = _Parser(theory, monoid)
    if (
        isinstance(top, SList)
        and len(top.items) == 3
        and isinstance(top.items[0], SAtom)
        and top.items[0].text == ":"
    ):
        ty = p.comp_ty(top.items[1])
        body = p.comp(top.items[2])
        return Program(name, theory, monoid, body, ty)
    body = p.comp(top)
    from .typecheck import Checker, TypeCheckError

    try:
        ty, _ = Checker(theory, monoid).infer_comp((), body)
    except TypeCheckError as e:
        raise SyntaxError_(
            f"program without a type ascription does not synthesize: "
            f"{e.message}", top.line, top.col,
        )
    return Program(name, theory, monoid, body, ty)


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------


def _rat_str(p: Fraction) -> str:
    return str(p.numerator) if p.denominator == 1 else f"{p.numerator}/{p.denominator}"


def _nat_chain(t: Term):
    n = 0
    while isinstance(t, Suc):
        n += 1
        t = t.arg
    return n if isinstance(t, Zero) else None


def cost_expr_str(c: CostExpr, monoid: CostMonoid) -> str:
    if isinstance(c, CostLit):
        return monoid.show(c.value)
    return term_str(c.term, monoid)


def term_str(t: Term, monoid: CostMonoid = SEQ_NAT) -> str:
    s = lambda x: term_str(x, monoid)
    match t:
        case Var(name):
            return name
        case Triv():
            return "tt"
        case BoolLit(v):
            return "true" if v else "false"
        case Zero():
            return "0"
        case Suc(_):
            n = _nat_chain(t)
            return str(n) if n is not None else f"(suc {s(t.arg)})"
        case Nil():
            return "nil"
        case Cons(h, tl):
            return f"(cons {s(h)} {s(tl)})"
        case Pair(a, b):
            return f"(pair {s(a)} {s(b)})"
        case Fst(p):
            return f"(fst {s(p)})"
        case Snd(p):
            return f"(snd {s(p)})"
        case Inl(a):
            return f"(inl {s(a)})"
        case Inr(a):
            return f"(inr {s(a)})"
        case Ret(v):
            return f"(ret {s(v)})"
        case Bind(e, x, b):
            return f"(bind {s(e)} ({x} {s(b)}))"
        case Lam(x, xty, b):
            return f"(lam ({x} : {ty_str(xty, monoid)}) {s(b)})"
        case Ap(f, a):
            return f"(ap {s(f)} {s(a)})"
        case Step(c, b):
            return f"(step {cost_expr_str(c, monoid)} {s(b)})"
        case NatRec(n, z, k, ih, sb):
            mot = f" (: {ty_str(t.motive, monoid)})" if t.motive else ""
            return f"(natrec {s(n)}{mot} {s(z)} ({k} {ih} {s(sb)}))"
        case ListRec(l, z, x, xs, ih, cb):
            mot = f" (: {ty_str(t.motive, monoid)})" if t.motive else ""
            return f"(listrec {s(l)}{mot} {s(z)} ({x} {xs} {ih} {s(cb)}))"
        case If(b, th, el):
            return f"(if {s(b)} {s(th)} {s(el)})"
        case SumCase(sc, xl, lb, xr, rb):
            return f"(case {s(sc)} ({xl} {s(lb)}) ({xr} {s(rb)}))"
        case Branch(l, r):
            return f"(branch {s(l)} {s(r)})"
        case Fail():
            return "fail"
        case Flip(p, l, r):
            return f"(flip {_rat_str(p)} {s(l)} {s(r)})"
        case Get(x, b):
            return f"(get ({x} {s(b)}))"
        case Put(v, b):
            return f"(set {s(v)} {s(b)})"
        case Par(l, r):
            return f"(par {s(l)} {s(r)})"
        case _:
            raise ValueError(f"cannot print {t!r}")


def ty_str(ty: Ty, monoid: CostMonoid = SEQ_NAT) -> str:
    match ty:
        case UnitTy():
            return "unit"
        case BoolTy():
            return "bool"
        case NatTy():
            return "nat"
        case ProdTy(a, b):
            return f"(prod {ty_str(a, monoid)} {ty_str(b, monoid)})"
        case SumTy(a, b):
            return f"(sum {ty_str(a, monoid)} {ty_str(b, monoid)})"
        case ListTy(e, None):
            return f"(list {ty_str(e, monoid)})"
        case ListTy(e, c):
            return f"(list {monoid.show(c)} {ty_str(e, monoid)})"
        case UTy(x):
            return f"(U {ty_str(x, monoid)})"
        case FTy(a):
            return f"(F {ty_str(a, monoid)})"
        case ArrowTy(a, x):
            return f"(-> {ty_str(a, monoid)} {ty_str(x, monoid)})"
        case _:
            raise ValueError(f"cannot print type {ty!r}")


def print_program(p: Program) -> str:
    """Canonical source text; ``parse(print_program(p))`` round-trips."""
    if p.theory.kind == "state":
        eff = f"state:{ty_str(p.theory.state_ty, p.monoid)}"
    else:
        eff = p.theory.kind
    return (
        f"#name {p.name}\n#effect {eff}\n#cost {p.monoid.name}\n"
        f"(: {ty_str(p.declared_ty, p.monoid)}\n   {term_str(p.body, p.monoid)})\n"
    )
