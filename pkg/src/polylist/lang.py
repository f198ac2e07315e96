"""A small internal language over the set model.

Contexts list typed variables, optionally cut down by equations; terms are
variables, applications and tuples.  A term ``t : B`` in context ``C`` is
interpreted as an arrow ``[C] -> B``; two terms are equal in ``C`` when
their interpretations agree on every enumerated element of ``[C]``.

Identifiers that are not bound by the context resolve, in order, to atoms
of the finite sets in the :class:`Scope` and to named arrows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Mapping

from . import arith
from .arith import SUCC
from .listobj import ListOps, list_kit
from .setmodel import (
    NAT,
    NIL,
    STAR,
    UNIT,
    Arrow,
    Budget,
    DEFAULT_BUDGET,
    FinSet,
    ListOf,
    ModelError,
    ObjExpr,
    Prod,
    Sub,
    arrows_equal,
    conforms,
    enumerate_obj,
    format_elem,
    prod,
    underlying,
)


class TermTypeError(ModelError):
    """A term does not typecheck; ``term`` is the offending subterm."""

    def __init__(self, message: str, term=None):
        super().__init__(message)
        self.term = term


class ObligationError(TermTypeError):
    """A value was used at a sub-object type it does not belong to."""

    def __init__(self, message: str, term=None, witness=None):
        super().__init__(message, term)
        self.witness = witness


class SubstitutionError(ModelError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


# -- terms ------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    """``head(args)``; ``head`` is a builtin or scope name, or an arrow."""

    head: str | Arrow
    args: tuple = ()

    @property
    def head_name(self) -> str:
        return self.head if isinstance(self.head, str) else (self.head.label or "<arrow>")


@dataclass(frozen=True)
class Tuple:
    items: tuple


Term = Var | App | Tuple


def numeral(n: int) -> Term:
    t: Term = App("0")
    for _ in range(n):
        t = App("s", (t,))
    return t


def list_literal(items) -> Term:
    t: Term = App("nil")
    for x in reversed(list(items)):
        t = App("cons", (x, t))
    return t


def free_vars(t: Term) -> set[str]:
    match t:
        case Var(name):
            return {name}
        case App(_, args) | Tuple(args):
            out: set[str] = set()
            for a in args:
                out |= free_vars(a)
            return out
    raise TypeError(f"not a term: {t!r}")


def show(t: Term) -> str:
    """Concrete syntax; numerals and list literals are folded back."""
    from .dsl import print_term

    return print_term(t)


# -- scope and contexts ------------------------------------------------------


NAT_OPS = {
    "s": 1, "P": 1, "add": 2, "mul": 2, "monus": 2,
    "min": 2, "max": 2, "absdiff": 2, "idUntil": 2,
}
LIST_OPS = ("nil", "cons", "len", "tr", "tail", "zerothDef", "nthDef", "concat")
BUILTINS = frozenset(("0", "ite", *NAT_OPS, *LIST_OPS))


@dataclass(frozen=True)
class Scope:
    """Finite sets whose atoms may appear in terms, and named arrows."""

    sets: tuple[FinSet, ...] = ()
    arrows: Mapping[str, Arrow] = field(default_factory=dict, hash=False, compare=False)

    def atom_type(self, name: str) -> FinSet | None:
        hits = [X for X in self.sets if name in X.elements]
        if len(hits) > 1:
            raise TermTypeError(f"atom {name} belongs to several sets", Var(name))
        return hits[0] if hits else None

    def set_named(self, name: str) -> FinSet | None:
        for X in self.sets:
            if X.name == name:
                return X
        return None


EMPTY_SCOPE = Scope()


@dataclass(frozen=True, eq=False)
class Context:
    """``(x1 : B1, ..., xn : Bn | s1 = t1, ...)``."""

    vars: tuple[tuple[str, ObjExpr], ...] = ()
    constraints: tuple[tuple[Term, Term], ...] = ()
    scope: Scope = EMPTY_SCOPE

    def __post_init__(self):
        names = [v for v, _ in self.vars]
        if len(set(names)) != len(names):
            raise TermTypeError(f"repeated variable in context: {names}")
        self.carrier  # typechecks the constraints

    @property
    def names(self) -> list[str]:
        return [v for v, _ in self.vars]

    def type_of(self, name: str) -> ObjExpr | None:
        for v, B in self.vars:
            if v == name:
                return B
        return None

    def unconstrained(self) -> "Context":
        return Context(self.vars, (), self.scope)

    def with_constraint(self, lhs: Term, rhs: Term) -> "Context":
        return Context(self.vars, self.constraints + ((lhs, rhs),), self.scope)

    @cached_property
    def carrier(self) -> ObjExpr:
        """``[C]``: the product of the variable types, cut down by each
        equation in turn."""
        current = prod(*(B for _, B in self.vars))
        for i, (l, r) in enumerate(self.constraints):
            prefix = _PrefixView(self, i, current)
            tl, tr = _synth(l, prefix, None), _synth(r, prefix, None)
            if underlying(tl) != underlying(tr):
                raise TermTypeError(
                    f"constraint sides have types {tl!r} and {tr!r}", (l, r)
                )
            fl, fr = _compile(l, prefix, None), _compile(r, prefix, None)
            current = Sub(
                current,
                Arrow(current, underlying(tl), fl, show(l)),
                Arrow(current, underlying(tl), fr, show(r)),
                self._render(i + 1),
            )
        return current

    def _render(self, upto: int | None = None) -> str:
        vs = ", ".join(f"{v}:{B!r}" for v, B in self.vars)
        cs = self.constraints if upto is None else self.constraints[:upto]
        if cs:
            vs += " | " + ", ".join(f"{show(l)} = {show(r)}" for l, r in cs)
        return f"({vs})"

    def __repr__(self):
        return self._render()

    def elements(self, budget: Budget = DEFAULT_BUDGET):
        return enumerate_obj(self.carrier, budget)

    def env(self, e) -> dict:
        """Variable bindings of a carrier element."""
        n = len(self.vars)
        if n == 0:
            return {}
        if n == 1:
            return {self.vars[0][0]: e}
        return {v: x for (v, _), x in zip(self.vars, e)}

    def pack(self, values: Mapping) -> object:
        """Inverse of :meth:`env`."""
        vals = [values[v] for v, _ in self.vars]
        if not vals:
            return STAR
        if len(vals) == 1:
            return vals[0]
        return tuple(vals)


@dataclass(frozen=True, eq=False)
class _PrefixView:
    """A context seen with only its first ``k`` constraints, for typing the
    ``k+1``-st."""

    full: Context
    k: int
    carrier: ObjExpr

    @property
    def vars(self):
        return self.full.vars

    @property
    def scope(self):
        return self.full.scope

    def type_of(self, name):
        return self.full.type_of(name)


# -- typing -----------------------------------------------------------------


def _flatten_args(args: tuple, arity: int, ctx, t: Term) -> tuple:
    """``g((a, b))`` is ``g(a, b)``."""
    if arity > 1 and len(args) == 1 and isinstance(args[0], Tuple):
        return args[0].items
    return args


def _components(dom: ObjExpr) -> tuple[ObjExpr, ...]:
    if dom == UNIT:
        return ()
    if isinstance(dom, Prod):
        return dom.components
    return (dom,)


def _check(t: Term, ctx, want: ObjExpr, obligations: list | None) -> None:
    got = _synth(t, ctx, want)
    if conforms(got, want):
        return
    if isinstance(want, Sub) and conforms(got, underlying(want)):
        if obligations is not None:
            obligations.append((t, want))
        return
    raise TermTypeError(f"{show(t)} has type {got!r}, expected {want!r}", t)


def _list_elem(t: Term, ctx, want: ObjExpr | None) -> ObjExpr:
    ty = underlying(_synth(t, ctx, want))
    if not isinstance(ty, ListOf):
        raise TermTypeError(f"{show(t)} has type {ty!r}, expected a list", t)
    return ty.elem


def _first_type(candidates, ctx, t: Term) -> ObjExpr:
    """Type of the first argument whose type can be synthesised alone."""
    err = None
    for sub, wrap in candidates:
        try:
            ty = underlying(_synth(sub, ctx, None))
        except TermTypeError as exc:
            err = err or exc
            continue
        return wrap(ty)
    raise err or TermTypeError(f"cannot infer the type of {show(t)}", t)


def _elem_of(ty: ObjExpr, t: Term) -> ObjExpr:
    if not isinstance(ty, ListOf):
        raise TermTypeError(f"{show(t)} has type {ty!r}, expected a list", t)
    return ty.elem


def _builtin_signature(t: App, ctx, want: ObjExpr | None) -> tuple[tuple[ObjExpr, ...], ObjExpr]:
    """Argument types and result type of a builtin application."""
    name, args = t.head, t.args
    want = underlying(want) if want is not None else None
    if name == "0":
        return (), NAT
    if name in NAT_OPS:
        return (NAT,) * NAT_OPS[name], NAT
    if name == "ite":
        if want is not None:
            B = want
        else:
            B = _first_type([(args[0], lambda x: x), (args[1], lambda x: x)], ctx, t) if len(args) == 3 else UNIT
        return (B, B, NAT), B
    # list builtins: find X
    if isinstance(want, ListOf) and name in ("nil", "cons", "tr", "tail", "concat"):
        X = want.elem
    elif name == "nil":
        raise TermTypeError("cannot infer the element type of nil here", t)
    else:
        slots = {
            "cons": [(0, lambda x: x), (1, lambda x: _elem_of(x, t))],
            "len": [(0, lambda x: _elem_of(x, t))],
            "tr": [(0, lambda x: _elem_of(x, t))],
            "tail": [(1, lambda x: _elem_of(x, t))],
            "zerothDef": [(0, lambda x: x), (1, lambda x: _elem_of(x, t))],
            "nthDef": [(0, lambda x: x), (2, lambda x: _elem_of(x, t))],
            "concat": [(0, lambda x: _elem_of(x, t)), (1, lambda x: _elem_of(x, t))],
        }[name]
        if name == "zerothDef" and want is not None:
            X = want
        elif name == "nthDef" and want is not None:
            X = want
        else:
            usable = [(args[i], w) for i, w in slots if i < len(args)]
            if not usable:
                raise TermTypeError(f"{name} expects arguments", t)
            X = _first_type(usable, ctx, t)
    LX = ListOf(X)
    return {
        "nil": ((), LX),
        "cons": ((X, LX), LX),
        "len": ((LX,), NAT),
        "tr": ((LX,), LX),
        "tail": ((NAT, LX), LX),
        "zerothDef": ((X, LX), X),
        "nthDef": ((X, NAT, LX), X),
        "concat": ((LX, LX), LX),
    }[name]


def _resolve_head(t: App, ctx) -> Arrow | None:
    """Named or literal arrow heads; ``None`` for builtins."""
    if isinstance(t.head, Arrow):
        return t.head
    if t.head in ctx.scope.arrows:
        return ctx.scope.arrows[t.head]
    if t.head in BUILTINS:
        return None
    raise TermTypeError(f"unknown function {t.head}", t)


def _synth(t: Term, ctx, want: ObjExpr | None, obligations: list | None = None) -> ObjExpr:
    match t:
        case Var(name):
            ty = ctx.type_of(name)
            if ty is not None:
                return ty
            X = ctx.scope.atom_type(name)
            if X is not None:
                return X
            if name in ctx.scope.arrows and ctx.scope.arrows[name].dom == UNIT:
                return ctx.scope.arrows[name].cod
            if name in ("0", "nil"):
                return _synth(App(name), ctx, want, obligations)
            raise TermTypeError(f"unbound variable {name}", t)
        case Tuple(items):
            wants = _components(want) if isinstance(want, Prod) and len(want.components) == len(items) else None
            if wants is None:
                return Prod(tuple(_synth(x, ctx, None, obligations) for x in items))
            for x, w in zip(items, wants):
                _check(x, ctx, w, obligations)
            return want
        case App(_, args):
            head = _resolve_head(t, ctx)
            if head is not None:
                doms, cod = _components(underlying(head.dom)), head.cod
            else:
                doms, cod = _builtin_signature(t, ctx, want)
            args = _flatten_args(args, len(doms), ctx, t)
            if len(args) != len(doms):
                raise TermTypeError(
                    f"{t.head_name} takes {len(doms)} argument(s), got {len(args)} in {show(t)}", t
                )
            for a, d in zip(args, doms):
                _check(a, ctx, d, obligations)
            if head is not None and isinstance(head.dom, Sub) and obligations is not None:
                packed = args[0] if len(args) == 1 else Tuple(tuple(args))
                obligations.append((packed, head.dom))
            return cod
    raise TermTypeError(f"not a term: {t!r}", t)


def typecheck(t: Term, ctx: Context, expected: ObjExpr | None = None) -> ObjExpr:
    """The type of ``t`` in ``ctx``; ``expected`` helps with ``nil``."""
    ty = _synth(t, ctx, expected)
    if expected is not None and not conforms(ty, expected) and not (
        isinstance(expected, Sub) and conforms(ty, underlying(expected))
    ):
        raise TermTypeError(f"{show(t)} has type {ty!r}, expected {expected!r}", t)
    return expected if expected is not None else ty


# -- interpretation ----------------------------------------------------------


def _nat_fn(name: str) -> Callable:
    table = {
        "s": SUCC, "P": arith.pred, "add": arith.add, "mul": arith.mul,
        "monus": arith.monus, "min": arith.min_op, "max": arith.max_op,
        "absdiff": arith.absdiff, "idUntil": arith.id_until,
    }
    return table[name].fn


def _list_fn(name: str, X: ObjExpr) -> Callable:
    ops = ListOps.standard(X)
    table = {
        "nil": lambda e: NIL,
        "cons": list_kit(X).cons.fn,
        "len": ops.len.fn,
        "tr": ops.tr.fn,
        "tail": ops.tail.fn,
        "zerothDef": ops.zeroth_def.fn,
        "nthDef": ops.nth_def.fn,
        "concat": ops.concat.fn,
    }
    return table[name]


def _compile(t: Term, ctx, want: ObjExpr | None) -> Callable:
    """A function from carrier elements to values."""
    match t:
        case Var(name):
            names = [v for v, _ in ctx.vars]
            if name in names:
                if len(names) == 1:
                    return lambda e: e
                i = names.index(name)
                return lambda e: e[i]
            if ctx.scope.atom_type(name) is not None:
                return lambda e: name
            if name in ctx.scope.arrows:
                c = ctx.scope.arrows[name].fn
                return lambda e: c(STAR)
            return _compile(App(name), ctx, want)
        case Tuple(items):
            wants = _components(want) if isinstance(want, Prod) and len(want.components) == len(items) else (None,) * len(items)
            fs = [_compile(x, ctx, w) for x, w in zip(items, wants)]
            return lambda e: tuple(f(e) for f in fs)
        case App(_, args):
            head = _resolve_head(t, ctx)
            if head is not None:
                doms, fn = _components(underlying(head.dom)), head.fn
            else:
                doms, cod = _builtin_signature(t, ctx, want)
                if t.head in NAT_OPS:
                    fn = _nat_fn(t.head)
                elif t.head == "0":
                    fn = lambda e: 0
                elif t.head == "ite":
                    fn = arith.ite(cod).fn
                else:
                    X = cod.elem if isinstance(cod, ListOf) else (cod if t.head in ("zerothDef", "nthDef") else doms[-1].elem)
                    fn = _list_fn(t.head, X)
            args = _flatten_args(args, len(doms), ctx, t)
            fs = [_compile(a, ctx, d) for a, d in zip(args, doms)]
            if not fs:
                return lambda e: fn(STAR)
            if len(fs) == 1:
                f0 = fs[0]
                return lambda e: fn(f0(e))
            return lambda e: fn(tuple(f(e) for f in fs))
    raise TermTypeError(f"not a term: {t!r}", t)


def interpret(t: Term, ctx: Context, budget: Budget = DEFAULT_BUDGET, expected: ObjExpr | None = None) -> Arrow:
    """``[t]_C : [C] -> B``.

    Uses of a value at a sub-object type are checked on every enumerated
    element of ``[C]``.
    """
    obligations: list = []
    ty = _synth(t, ctx, expected, obligations)
    if expected is not None:
        _check(t, ctx, expected, obligations)
        ty = expected
    fn = _compile(t, ctx, expected)
    for sub_term, S in obligations:
        g = _compile(sub_term, ctx, underlying(S))
        for e in ctx.elements(budget):
            v = g(e)
            if S.lhs(v) != S.rhs(v):
                raise ObligationError(
                    f"{show(sub_term)} = {format_elem(v)} is not in {S!r} "
                    f"at {_show_env(ctx, e)}",
                    sub_term,
                    e,
                )
    return Arrow(ctx.carrier, ty, fn, show(t))


def evaluate(t: Term, ctx: Context, values: Mapping | None = None, budget: Budget = DEFAULT_BUDGET):
    """Value of ``t`` at one element of ``[C]``, given by variable values."""
    e = ctx.pack(values or {})
    S = ctx.carrier
    while isinstance(S, Sub):
        if S.lhs(e) != S.rhs(e):
            raise ObligationError(f"{_show_env(ctx, e)} violates {S!r}", None, e)
        S = S.base
    typecheck(t, ctx)
    return _compile(t, ctx, None)(e)


def _show_env(ctx, e) -> str:
    env = Context.env(ctx, e) if isinstance(ctx, Context) else {}
    if not env:
        return format_elem(e)
    return ", ".join(f"{k}={format_elem(v)}" for k, v in env.items())


def equal_in(t1: Term, t2: Term, ctx: Context, budget: Budget = DEFAULT_BUDGET):
    """``t1 =_C t2`` under ``budget``; a :class:`Comparison`."""
    ty1, ty2 = typecheck(t1, ctx), typecheck(t2, ctx)
    if underlying(ty1) != underlying(ty2):
        raise TermTypeError(f"cannot compare {ty1!r} with {ty2!r}", (t1, t2))
    B = underlying(ty1)
    a1 = interpret(t1, ctx, budget)
    a2 = interpret(t2, ctx, budget)
    return arrows_equal(Arrow(a1.dom, B, a1.fn, a1.label), Arrow(a2.dom, B, a2.fn, a2.label), budget)


# -- substitution ------------------------------------------------------------


@dataclass(frozen=True)
class Subst:
    """Replacement terms for the variables of a source context, typed in
    ``target``."""

    mapping: Mapping[str, Term] = field(hash=False)
    target: Context = field(default_factory=Context, hash=False)


def replace(t: Term, mapping: Mapping[str, Term]) -> Term:
    """Structural replacement of variables (no binders, so no capture)."""
    match t:
        case Var(name):
            return mapping.get(name, t)
        case App(head, args):
            return App(head, tuple(replace(a, mapping) for a in args))
        case Tuple(items):
            return Tuple(tuple(replace(a, mapping) for a in items))
    raise TypeError(f"not a term: {t!r}")


def check_subst(sigma: Subst, src: Context, budget: Budget = DEFAULT_BUDGET) -> None:
    """Every replacement has its variable's type in the target context, and
    the source constraints hold after replacement."""
    tgt = sigma.target
    for v, B in src.vars:
        if v not in sigma.mapping:
            raise SubstitutionError(f"no replacement for {v}")
        try:
            interpret(sigma.mapping[v], tgt, budget, expected=B)
        except TermTypeError as exc:
            raise SubstitutionError(f"replacement for {v}: {exc}", getattr(exc, "witness", None)) from exc
    for l, r in src.constraints:
        l2, r2 = replace(l, sigma.mapping), replace(r, sigma.mapping)
        cmp = equal_in(l2, r2, tgt, budget)
        if not cmp:
            e = cmp.counterexample[0]
            vals = {v: _compile(sigma.mapping[v], tgt, B)(e) for v, B in src.vars}
            shown = ", ".join(f"{k}={format_elem(x)}" for k, x in vals.items())
            raise SubstitutionError(
                f"constraint {show(l)} = {show(r)} fails after substitution at {shown} "
                f"({show(l2)} = {format_elem(cmp.counterexample[1])}, "
                f"{show(r2)} = {format_elem(cmp.counterexample[2])})",
                e,
            )


def substitute(t: Term, sigma: Subst, src: Context, tgt: Context | None = None,
               budget: Budget = DEFAULT_BUDGET) -> Term:
    """``t[σ]``, after checking ``σ`` against ``src``."""
    if tgt is not None and tgt is not sigma.target:
        sigma = Subst(sigma.mapping, tgt)
    missing = (free_vars(t) & set(src.names)) - set(sigma.mapping)
    if missing:
        raise SubstitutionError(f"no replacement for {', '.join(sorted(missing))}")
    check_subst(sigma, src, budget)
    return replace(t, sigma.mapping)


def subst_arrow(sigma: Subst, src: Context, budget: Budget = DEFAULT_BUDGET) -> Arrow:
    """``⟨[u_1], ..., [u_n]⟩ : [target] -> [src]``."""
    check_subst(sigma, src, budget)
    tgt = sigma.target
    fs = [_compile(sigma.mapping[v], tgt, B) for v, B in src.vars]
    if not fs:
        fn = lambda e: STAR
    elif len(fs) == 1:
        fn = fs[0]
    else:
        fn = lambda e: tuple(f(e) for f in fs)
    return Arrow(tgt.carrier, src.carrier, fn, "subst")
