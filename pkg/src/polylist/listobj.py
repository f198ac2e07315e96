"""List objects: the list recursor, L(f), the basic list arrows, Seq/List,
nthDef, and the H/A arrows used to compare lists element by element."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import cached_property, lru_cache

from . import arith
from .arith import SUCC, ite, nno_rec
from .report import LawReport
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
    ObjExpr,
    Prod,
    Seq,
    StructuralError,
    compose,
    enumerate_obj,
    table_arrow,
)


class PreconditionError(ValueError):
    """An operation was called outside its stated precondition."""


@dataclass(frozen=True)
class ListKit:
    X: ObjExpr
    LX: ListOf
    nil: Arrow
    cons: Arrow


@lru_cache(maxsize=None)
def list_kit(X: ObjExpr) -> ListKit:
    LX = ListOf(X)
    return ListKit(
        X,
        LX,
        Arrow(UNIT, LX, lambda e: NIL, "nil"),
        Arrow(Prod((X, LX)), LX, lambda e: Seq((e[0],)) + e[1], "cons"),
    )


def cons(x, l: Seq) -> Seq:
    return Seq((x,)) + l


def list_rec(g: Arrow, h: Arrow, X: ObjExpr | None = None, label: str = "lrec") -> Arrow:
    """The unique ``f : A × L(X) -> B`` with ``f(a, ∅) = g(a)`` and
    ``f(a, x :: l) = h(a, x, l, f(a, l))``.

    As with :func:`nno_rec`, ``g : 1 -> B`` allows an unparameterised step
    ``h : X × L(X) × B -> B`` and gives ``f : L(X) -> B``.
    """
    A, B = g.dom, g.cod
    comps = h.dom.components if isinstance(h.dom, Prod) else ()
    unparam = A == UNIT and len(comps) == 3
    if X is None:
        if unparam:
            X = comps[0]
        elif len(comps) == 4:
            X = comps[1]
        else:
            raise StructuralError(f"cannot read an element type off {h.dom!r}")
    LX = ListOf(X)
    if unparam:
        expected = Prod((X, LX, B))
    else:
        expected = Prod((A, X, LX, B))
    if h.dom != expected:
        raise StructuralError(f"list recursor step has domain {h.dom!r}; expected {expected!r}")
    if h.cod != B:
        raise StructuralError(f"list recursor step lands in {h.cod!r}, base case in {B!r}")

    gf, hf = g.fn, h.fn

    @lru_cache(maxsize=1 << 16)
    def run(a, l):
        # fold from the right: f(a, l[i:]) for i = len(l) .. 0
        b = gf(a)
        for i in range(len(l) - 1, -1, -1):
            rest = l[i + 1:]
            b = hf((l[i], rest, b) if unparam else (a, l[i], rest, b))
        return b

    if unparam:
        return Arrow(LX, B, lambda l: run(STAR, l), label)
    return Arrow(Prod((A, LX)), B, lambda e: run(e[0], e[1]), label)


def map_list(f: Arrow) -> Arrow:
    """``L(f)``: ``L(f)(∅) = ∅``, ``L(f)(x :: l) = f(x) :: L(f)(l)``."""
    X, Y = f.dom, f.cod
    ff = f.fn
    return list_rec(
        list_kit(Y).nil,
        Arrow(Prod((X, ListOf(X), ListOf(Y))), ListOf(Y), lambda e: cons(ff(e[0]), e[2]), "cons(f.pi1,pi3)"),
        X,
        f"L({f.label})",
    )


def decompose_nonempty(l: Seq):
    """Split a non-empty list into head and rest."""
    if len(l) == 0:
        raise PreconditionError("cannot decompose the empty list")
    return l[0], l[1:]


# -- the standard list arrows, bundled per element object -------------------


def _make_len(X):
    LX = ListOf(X)
    return list_rec(arith.ZERO, Arrow(Prod((X, LX, NAT)), NAT, lambda e: SUCC(e[2]), "s.pi3"), X, "len")


def _make_tr(X):
    LX = ListOf(X)
    return list_rec(list_kit(X).nil, Arrow(Prod((X, LX, LX)), LX, lambda e: e[1], "pi2"), X, "tr")


def _make_tail(X, tr: Arrow):
    # tail(0, l) = l ; tail(sn, l) = tr(tail(n, l)); recursion on n with l as parameter
    LX = ListOf(X)
    trf = tr.fn
    inner = nno_rec(
        Arrow(LX, LX, lambda l: l, "id"),
        Arrow(Prod((LX, NAT, LX)), LX, lambda e: trf(e[2]), "tr.pi3"),
        "tail",
    )
    fn = inner.fn
    return Arrow(Prod((NAT, LX)), LX, lambda e: fn((e[1], e[0])), "tail")


def _make_zeroth_def(X):
    LX = ListOf(X)
    return list_rec(
        Arrow(X, X, lambda x: x, "id"),
        Arrow(Prod((X, X, LX, X)), X, lambda e: e[1], "pi2"),
        X,
        "zerothDef",
    )


def _make_concat(X):
    # ∅ ++ l2 = l2 ; (x :: l1) ++ l2 = x :: (l1 ++ l2); recursion on l1, l2 is the parameter
    LX = ListOf(X)
    inner = list_rec(
        Arrow(LX, LX, lambda l: l, "id"),
        Arrow(Prod((LX, X, LX, LX)), LX, lambda e: cons(e[1], e[3]), "cons(pi2,pi4)"),
        X,
        "concat",
    )
    fn = inner.fn
    return Arrow(Prod((LX, LX)), LX, lambda e: fn((e[1], e[0])), "concat")


@dataclass(frozen=True)
class ListOps:
    """The list arrows on ``L(X)``.  Derived arrows (nthDef, H, A) are built
    from the fields, so a deliberately broken ``tail`` propagates."""

    X: ObjExpr
    len: Arrow
    tr: Arrow
    tail: Arrow
    zeroth_def: Arrow
    concat: Arrow

    @classmethod
    def standard(cls, X: ObjExpr) -> "ListOps":
        return _standard_ops(X)

    def replace(self, **changes) -> "ListOps":
        fields = dict(X=self.X, len=self.len, tr=self.tr, tail=self.tail,
                      zeroth_def=self.zeroth_def, concat=self.concat)
        fields.update(changes)
        return ListOps(**fields)

    @property
    def LX(self) -> ListOf:
        return ListOf(self.X)

    @property
    def nil(self) -> Arrow:
        return list_kit(self.X).nil

    @property
    def cons(self) -> Arrow:
        return list_kit(self.X).cons

    @cached_property
    def singleton(self) -> Arrow:
        return Arrow(self.X, self.LX, lambda x: Seq((x,)), "singleton")

    @cached_property
    def nth_def(self) -> Arrow:
        """``nthDef(x, n, l) = zerothDef(x, tail(n, l))``."""
        zd, tl = self.zeroth_def.fn, self.tail.fn
        return Arrow(
            Prod((self.X, NAT, self.LX)),
            self.X,
            lambda e: zd((e[0], tl((e[1], e[2])))),
            "nthDef",
        )

    @cached_property
    def build_H(self) -> Arrow:
        """``H(x, k, l) = tail(len(l) ∸ k, l)``: all but the last ``k`` elements removed."""
        tl, ln = self.tail.fn, self.len.fn
        mon = arith.monus
        return Arrow(
            Prod((self.X, NAT, self.LX)),
            self.LX,
            lambda e: tl((mon(ln(e[2]), e[1]), e[2])),
            "H",
        )

    @cached_property
    def build_A(self) -> Arrow:
        """``A(x, k, l, L) = L`` if ``len(l) ≤ k``, else
        ``nthDef(x, P(len(l) ∸ k), l) :: L``."""
        ln, nd = self.len.fn, self.nth_def.fn
        mon, P = arith.monus, arith.pred
        itef = ite(self.LX).fn

        def run(e):
            x, k, l, L = e
            gap = mon(ln(l), k)
            return itef((L, cons(nd((x, P(gap), l)), L), gap))

        return Arrow(Prod((self.X, NAT, self.LX, self.LX)), self.LX, run, "A")

    def seq_build(self, f: Arrow) -> Arrow:
        return seq_build(f, self)

    def list_build(self, f: Arrow, p: Arrow) -> Arrow:
        return list_build(f, p, self)


@lru_cache(maxsize=None)
def _standard_ops(X: ObjExpr) -> ListOps:
    tr = _make_tr(X)
    return ListOps(X, _make_len(X), tr, _make_tail(X, tr), _make_zeroth_def(X), _make_concat(X))


def length(X: ObjExpr) -> Arrow:
    return _standard_ops(X).len


def truncate(X: ObjExpr) -> Arrow:
    return _standard_ops(X).tr


def tail(X: ObjExpr) -> Arrow:
    return _standard_ops(X).tail


def zeroth_def(X: ObjExpr) -> Arrow:
    return _standard_ops(X).zeroth_def


def nth_def(X: ObjExpr) -> Arrow:
    return _standard_ops(X).nth_def


def concat(X: ObjExpr) -> Arrow:
    return _standard_ops(X).concat


def singleton(X: ObjExpr) -> Arrow:
    return _standard_ops(X).singleton


def build_H(X: ObjExpr) -> Arrow:
    return _standard_ops(X).build_H


def build_A(X: ObjExpr) -> Arrow:
    return _standard_ops(X).build_A


# -- constructing maps into L(X) -------------------------------------------


def seq_build(f: Arrow, ops: ListOps | None = None) -> Arrow:
    """``Seq[f] : N × N × A -> L(X)`` for ``f : N × A -> X``:
    ``Seq[f](m, 0, a) = ∅`` and ``Seq[f](m, sn, a) = Seq[f](m, n, a) ++ [f(m + n, a)]``.

    Computed literally, by repeated appends.
    """
    if not (isinstance(f.dom, Prod) and len(f.dom.components) == 2 and f.dom.components[0] == NAT):
        raise StructuralError(f"Seq needs f : N x A -> X, got {f!r}")
    A = f.dom.components[1]
    X = f.cod
    ops = ops or _standard_ops(X)
    LX = ListOf(X)
    cat, ff, plus = ops.concat.fn, f.fn, arith.add
    MA = Prod((NAT, A))
    inner = nno_rec(
        Arrow(MA, LX, lambda e: NIL, "nil"),
        Arrow(Prod((MA, NAT, LX)), LX,
              lambda e: cat((e[2], Seq((ff((plus(e[0][0], e[1]), e[0][1])),)))), "snoc"),
        f"Seq[{f.label}]",
    )
    fn = inner.fn
    return Arrow(Prod((NAT, NAT, A)), LX, lambda e: fn(((e[0], e[2]), e[1])), f"Seq[{f.label}]")


def list_build(f: Arrow, p: Arrow, ops: ListOps | None = None) -> Arrow:
    """``List[f, p](a) = Seq[f](0, p(a), a)``."""
    seq = seq_build(f, ops).fn
    pf = p.fn
    A = f.dom.components[1]
    if p.dom != A or p.cod != NAT:
        raise StructuralError(f"List needs p : {A!r} -> N, got {p!r}")
    return Arrow(A, ListOf(f.cod), lambda a: seq((0, pf(a), a)), f"List[{f.label},{p.label}]")


# -- random arrows for the law suites ---------------------------------------


def random_function(rng: random.Random, dom_elems, cod_elems) -> dict:
    cod_elems = list(cod_elems)
    return {e: rng.choice(cod_elems) for e in dom_elems}


def random_sequence_arrow(rng: random.Random, A: ObjExpr, X: FinSet, A_elems, horizon: int) -> Arrow:
    """A random total ``f : N × A -> X``; indices past ``horizon`` reuse the
    value at ``horizon``."""
    table = {(m, a): rng.choice(X.elements) for m in range(horizon + 1) for a in A_elems}
    return Arrow(Prod((NAT, A)), X, lambda e: table[(min(e[0], horizon), e[1])], "f")


def atoms(n: int, name: str = "X", prefix: str = "x") -> FinSet:
    return FinSet(tuple(f"{prefix}{i}" for i in range(n)), name)


# -- list law suite ---------------------------------------------------------


def run_list_laws(
    budget: Budget = DEFAULT_BUDGET,
    card_x: int = 2,
    samples: int = 100,
    ops: ListOps | None = None,
    tag: str = "",
) -> LawReport:
    """Exhaustively check the list equalities on ``X`` with ``card_x`` atoms.

    Naturality laws are checked against ``samples`` seeded-random arrows
    ``f : X -> Y``; Seq/List laws against seeded-random ``f : N × A -> X``.
    """
    X = atoms(card_x)
    o = ops or ListOps.standard(X)
    if o.X != X:
        raise StructuralError(f"ops are for {o.X!r}, not {X!r}")
    LX = o.LX
    rng = random.Random(budget.seed * 1_000_003 + card_x)
    ln, tr, tl, zd, nd, cat = o.len, o.tr, o.tail, o.zeroth_def, o.nth_def, o.concat
    P, mon, plus = arith.pred, arith.monus, arith.add
    s = SUCC
    xs = list(enumerate_obj(X, budget))
    ns = list(enumerate_obj(NAT, budget))
    ls = list(enumerate_obj(LX, budget))
    suffix = tag or f"[X={card_x}]"
    r = LawReport(budget=budget)
    lt = lambda a, b: mon(s(a), b) == 0
    leq = lambda a, b: mon(a, b) == 0

    def law(name, cases, holds):
        return r.check(f"list.{name}{suffix}", cases, holds)

    nl = list(itertools.product(ns, ls))
    xl = list(itertools.product(xs, ls))
    xnl = list(itertools.product(xs, ns, ls))

    # defining equations and the coproduct L(X) = 1 + X × L(X)
    law("def.len", xl, lambda x, l: ln(NIL) == 0 and ln(cons(x, l)) == s(ln(l)))
    law("def.tr", xl, lambda x, l: tr(NIL) == NIL and tr(cons(x, l)) == l)
    law("def.tail", nl, lambda n, l: tl(0, l) == l and tl(s(n), l) == tr(tl(n, l)))
    law("def.zerothDef", xl, lambda x, l: zd(x, NIL) == x and all(zd(x, cons(y, l)) == y for y in xs))
    law("def.nthDef", xnl, lambda x, n, l: nd(x, n, l) == zd(x, tl(n, l)))
    law("def.concat", [(l2,) for l2 in ls],
        lambda l2: cat(NIL, l2) == l2 and all(cat(cons(x, l1), l2) == cons(x, cat(l1, l2))
                                              for x in xs for l1 in ls if len(l1) < budget.len_max))

    def nil_or_unique_cons(l):
        if l == NIL:
            return True
        hits = [(x, rest) for x in xs for rest in ls if cons(x, rest) == l]
        return len(hits) == 1 and decompose_nonempty(l) == hits[0]

    law("coproduct", [(l,) for l in ls], nil_or_unique_cons)

    # length decomposition
    law("lenDecomp.zero", [(l,) for l in ls], lambda l: ln(l) != 0 or l == NIL)
    law("lenDecomp.pos", xl, lambda d, l: not lt(0, ln(l)) or l == cons(zd(d, l), tr(l)))
    law("len_tr", [(l,) for l in ls], lambda l: ln(tr(l)) == P(ln(l)))
    law("lenIterTr", nl, lambda n, l: ln(tl(n, l)) == mon(ln(l), n))
    law("lenIterTr.empty", nl, lambda n, l: not leq(ln(l), n) or tl(n, l) == NIL)

    # nthDef
    law("nthEqualsDef", xnl, lambda x, n, l: not leq(ln(l), n) or nd(x, n, l) == x)
    law("nthNotDef", xnl,
        lambda x, n, l: not lt(n, ln(l)) or all(nd(x, n, l) == nd(y, n, l) for y in xs))

    # concatenation
    ll = list(itertools.product(ls, ls))
    law("lenConcat", ll, lambda l1, l2: ln(cat(l1, l2)) == plus(ln(l1), ln(l2)))

    # tail expansions and the H/A recurrence
    def tail_expand(x, m, l):
        rhs = NIL if leq(ln(l), m) else cons(nd(x, m, l), tl(s(m), l))
        return tl(m, l) == rhs

    def tail_pred_expand(x, m, l):
        if m == 0:
            rhs = tl(m, l)
        elif lt(ln(l), m):
            rhs = NIL
        else:
            rhs = cons(nd(x, P(m), l), tl(m, l))
        return tl(P(m), l) == rhs

    law("tailExpand", xnl, tail_expand)
    law("tailPredExpand", xnl, tail_pred_expand)
    H, Af = o.build_H, o.build_A
    law("H.zero", xl, lambda x, l: H(x, 0, l) == NIL)
    law("H.full", xl, lambda x, l: H(x, ln(l), l) == l)
    law("H.recurrence", xnl, lambda x, k, l: H(x, s(k), l) == Af(x, k, l, H(x, k, l)))
    law("A.short", [(x, k, l, L) for x, k, l in xnl for L in ls[:4]],
        lambda x, k, l, L: not leq(ln(l), k) or Af(x, k, l, L) == L)

    # naturality in X, against random f : X -> Y (each paired with g : Y -> Z)
    fs, gs = [], []
    for _ in range(samples):
        Y = atoms(rng.randint(1, 3), "Y", "y")
        Z = atoms(rng.randint(1, 3), "Z", "z")
        fs.append(table_arrow(X, Y, random_function(rng, xs, Y.elements), "f"))
        gs.append(table_arrow(Y, Z, random_function(rng, Y.elements, Z.elements), "g"))

    mapped = {}

    def Lf(f, l):
        key = (id(f), l)
        if key not in mapped:
            mapped[key] = map_list(f)(l)
        return mapped[key]

    def Y_ops(f):
        return ListOps.standard(f.cod)

    def natural(name, holds, cases):
        law(name, cases, lambda *case: all(holds(f, *case) for f in fs))

    natural("Lfunctor.len", lambda f, l: Y_ops(f).len(Lf(f, l)) == ln(l), [(l,) for l in ls])
    natural("Lfunctor.tr", lambda f, l: Y_ops(f).tr(Lf(f, l)) == Lf(f, tr(l)), [(l,) for l in ls])
    natural("Lfunctor.tail", lambda f, m, l: Y_ops(f).tail(m, Lf(f, l)) == Lf(f, tl(m, l)), nl)
    natural("Lfunctor.zerothDef", lambda f, x, l: Y_ops(f).zeroth_def(f(x), Lf(f, l)) == f(zd(x, l)), xl)
    natural("nthDefNatural",
            lambda f, x, m, l: Y_ops(f).nth_def(f(x), m, Lf(f, l)) == f(nd(x, m, l)), xnl)
    natural("Lfunctor.map", lambda f, l: Lf(f, l) == Seq(f(x) for x in l), [(l,) for l in ls])
    ident = Arrow(X, X, lambda x: x, "id")
    law("Lfunctor.identity", [(l,) for l in ls], lambda l: map_list(ident)(l) == l)
    pairs = list(zip(fs, gs))
    law("Lfunctor.compose", [(l,) for l in ls],
        lambda l: all(map_list(compose(g, f))(l) == map_list(g)(Lf(f, l)) for f, g in pairs))

    # Seq / List, against random f : N × A -> X
    A = atoms(2 if card_x else 0, "A", "a")
    as_ = list(A.elements)
    horizon = budget.nat_max * 2 + 1
    seq_fs = [random_sequence_arrow(rng, A, X, as_, horizon) for _ in range(max(1, samples // 10))]
    if not xs:
        seq_fs = [Arrow(Prod((NAT, A)), X, lambda e: None, "f")]  # A is empty, never called
    mna = list(itertools.product(ns, ns, as_))
    seqs = [(f, seq_build(f, o)) for f in seq_fs]

    def over_seqs(name, holds, cases):
        law(name, cases, lambda *case: all(holds(f, S, *case) for f, S in seqs))

    over_seqs("Seq.def", lambda f, S, m, n, a:
              S(m, 0, a) == NIL and S(m, s(n), a) == cat(S(m, n, a), Seq((f(plus(m, n), a),))), mna)
    over_seqs("Seq.oracle", lambda f, S, m, n, a:
              S(m, n, a) == Seq(f(m + i, a) for i in range(n)), mna)
    over_seqs("SeqHead", lambda f, S, m, n, a:
              S(m, s(n), a) == cons(f(m, a), S(s(m), n, a)), mna)
    over_seqs("trSeq", lambda f, S, m, n, a: tr(S(m, n, a)) == S(s(m), P(n), a), mna)
    kmna = [(k,) + c for k in ns for c in mna]
    over_seqs("iterTrSeq", lambda f, S, k, m, n, a:
              tl(k, S(m, n, a)) == S(plus(m, k), mon(n, k), a), kmna)

    ps = [table_arrow(A, NAT, {a: rng.randint(0, budget.len_max) for a in as_}, "p")
          for _ in range(4)]
    lists = [(f, p, list_build(f, p, o), seq_build(f, o)) for f in seq_fs for p in ps]
    ka = list(itertools.product(ns, as_))
    law("lenList", [(a,) for a in as_],
        lambda a: all(ln(Lb(a)) == p(a) for f, p, Lb, S in lists))
    law("iterTrList", ka,
        lambda k, a: all(tl(k, Lb(a)) == S(k, mon(p(a), k), a) for f, p, Lb, S in lists))
    law("nthList", [(x, m, a) for x in xs for m, a in ka],
        lambda x, m, a: all(not lt(m, p(a)) or nd(x, m, Lb(a)) == f(m, a) for f, p, Lb, S in lists))
    return r

