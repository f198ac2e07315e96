"""Natural numbers object: recursor, arithmetic, if-then-else, order, splits.

Every arithmetic arrow is produced by :func:`nno_rec` from its defining
equations (``x + sy = s(x + y)``, ``x ∸ sy = P(x ∸ y)``, ...).  Order tests
are encoded through truncated subtraction; Python's ``<`` on naturals is kept
for oracles only.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from functools import cached_property

from .report import LawReport
from .setmodel import (
    NAT,
    STAR,
    UNIT,
    Arrow,
    Budget,
    DEFAULT_BUDGET,
    ObjExpr,
    Prod,
    StructuralError,
    Sub,
    constant,
    enumerate_obj,
    prod,
)


@dataclass(frozen=True)
class NnoKit:
    N: ObjExpr
    zero: Arrow
    succ: Arrow


ZERO = Arrow(UNIT, NAT, lambda e: 0, "0")
SUCC = Arrow(NAT, NAT, lambda n: n + 1, "s")
NNO = NnoKit(NAT, ZERO, SUCC)


def nno_rec(g: Arrow, h: Arrow, label: str = "rec") -> Arrow:
    """The unique ``f`` with ``f(a, 0) = g(a)`` and ``f(a, sn) = h(a, n, f(a, n))``.

    With ``g : 1 -> B`` the parameter may be dropped: ``h : N × B -> B``
    gives ``f : N -> B``.
    """
    A, B = g.dom, g.cod
    if A == UNIT and h.dom == prod(NAT, B):
        unparam = True
    elif h.dom == Prod((A, NAT, B)):
        unparam = False
    else:
        raise StructuralError(
            f"recursor step has domain {h.dom!r}; expected {Prod((A, NAT, B))!r}"
        )
    if h.cod != B:
        raise StructuralError(f"recursor step lands in {h.cod!r}, base case in {B!r}")

    gf, hf = g.fn, h.fn
    memo: dict = {}
    lock = threading.Lock()

    def run(a, n):
        with lock:
            chain = memo.get(a)
            if chain is None:
                chain = memo[a] = [gf(a)]
            while len(chain) <= n:
                k = len(chain) - 1
                step = (k, chain[k]) if unparam else (a, k, chain[k])
                chain.append(hf(step))
            return chain[n]

    if unparam:
        return Arrow(NAT, B, lambda n: run(STAR, n), label)
    return Arrow(Prod((A, NAT)), B, lambda e: run(e[0], e[1]), label)


def _swap_args(f: Arrow, dom: ObjExpr, reorder, label: str) -> Arrow:
    fn = f.fn
    return Arrow(dom, f.cod, lambda e: fn(reorder(e)), label)


# -- the arithmetic arrows --------------------------------------------------

NN = Prod((NAT, NAT))
NNN = Prod((NAT, NAT, NAT))


def make_add() -> Arrow:
    # x + 0 = x ; x + sy = s(x + y)
    return nno_rec(
        Arrow(NAT, NAT, lambda x: x, "id"),
        Arrow(NNN, NAT, lambda e: SUCC(e[2]), "s.pi3"),
        "add",
    )


def make_pred() -> Arrow:
    # P(0) = 0 ; P(sy) = y
    return nno_rec(ZERO, Arrow(NN, NAT, lambda e: e[0], "pi1"), "P")


def make_mul(add: Arrow) -> Arrow:
    # x * 0 = 0 ; x * sy = (x * y) + x
    return nno_rec(
        constant(NAT, NAT, 0, "0"),
        Arrow(NNN, NAT, lambda e: add(e[2], e[0]), "add(pi3,pi1)"),
        "mul",
    )


def make_monus(pred: Arrow) -> Arrow:
    # x ∸ 0 = x ; x ∸ sy = P(x ∸ y)
    return nno_rec(
        Arrow(NAT, NAT, lambda x: x, "id"),
        Arrow(NNN, NAT, lambda e: pred(e[2]), "P.pi3"),
        "monus",
    )


@dataclass(frozen=True)
class ArithOps:
    """The four recursively defined operations plus everything derived
    from them.  Swapping in a wrong ``monus`` (say) propagates to ``min``,
    ``max``, the order tests and ``id_until``."""

    add: Arrow
    mul: Arrow
    pred: Arrow
    monus: Arrow

    @classmethod
    def standard(cls) -> "ArithOps":
        add, pred = make_add(), make_pred()
        return cls(add, make_mul(add), pred, make_monus(pred))

    @cached_property
    def min(self) -> Arrow:
        m = self.monus
        return Arrow(NN, NAT, lambda e: m(e[0], m(e[0], e[1])), "min")

    @cached_property
    def max(self) -> Arrow:
        a, m = self.add, self.monus
        return Arrow(NN, NAT, lambda e: a(e[0], m(e[1], e[0])), "max")

    @cached_property
    def absdiff(self) -> Arrow:
        a, m = self.add, self.monus
        return Arrow(NN, NAT, lambda e: a(m(e[0], e[1]), m(e[1], e[0])), "absdiff")

    @cached_property
    def id_until(self) -> Arrow:
        mn, p = self.min, self.pred
        return Arrow(NN, NAT, lambda e: mn(e[0], p(e[1])), "idUntil")

    def leq(self, m, n) -> bool:
        return self.monus(m, n) == 0

    def lt(self, m, n) -> bool:
        return self.monus(SUCC(m), n) == 0


STANDARD = ArithOps.standard()
add = STANDARD.add
mul = STANDARD.mul
pred = STANDARD.pred
monus = STANDARD.monus
min_op = STANDARD.min
max_op = STANDARD.max
absdiff = STANDARD.absdiff
id_until = STANDARD.id_until


def leq_holds(m: int, n: int) -> bool:
    """``m ≤ n`` read as ``m ∸ n = 0``."""
    return STANDARD.leq(m, n)


def lt_holds(m: int, n: int) -> bool:
    """``m < n`` read as ``s(m) ∸ n = 0``."""
    return STANDARD.lt(m, n)


# -- if-then-else and guards ------------------------------------------------


def ite(B: ObjExpr) -> Arrow:
    """``ITE_B : B × B × N -> B``: first branch on 0, second on a successor."""
    inner = nno_rec(
        Arrow(Prod((B, B)), B, lambda e: e[0], "pi1"),
        Arrow(Prod((Prod((B, B)), NAT, B)), B, lambda e: e[0][1], "pi2.pi1"),
        f"ITE_{B!r}",
    )
    return _swap_args(inner, Prod((B, B, NAT)), lambda e: ((e[0], e[1]), e[2]), f"ITE_{B!r}")


def leq_test(u: Arrow, w: Arrow) -> Arrow:
    """``u ∸ w``, which is zero exactly when ``u ≤ w``."""
    uf, wf = u.fn, w.fn
    return Arrow(u.dom, NAT, lambda e: monus(uf(e), wf(e)), f"({u.label} <= {w.label})")


def lt_test(u: Arrow, w: Arrow) -> Arrow:
    """``s(u) ∸ w``, which is zero exactly when ``u < w``."""
    uf, wf = u.fn, w.fn
    return Arrow(u.dom, NAT, lambda e: monus(SUCC(uf(e)), wf(e)), f"({u.label} < {w.label})")


def cases(branches, otherwise: Arrow) -> Arrow:
    """Multiway conditional: ``branches`` is a list of ``(test, value)``;
    the first test evaluating to zero picks its value.  Nested ITE."""
    result = otherwise
    for test, value in reversed(list(branches)):
        if test.dom != value.dom or value.dom != result.dom:
            raise StructuralError("case branches must share a domain")
        itef = ite(value.cod).fn
        tf, vf, rf = test.fn, value.fn, result.fn
        result = Arrow(
            value.dom,
            value.cod,
            lambda e, tf=tf, vf=vf, rf=rf, itef=itef: itef((vf(e), rf(e), tf(e))),
            f"if {test.label}=0 then {value.label} else {result.label}",
        )
    return result


# -- splits of a context ----------------------------------------------------


@dataclass(frozen=True)
class Split:
    """Two complementary sub-objects of ``carrier`` with their inclusions."""

    carrier: ObjExpr
    first: Sub
    second: Sub

    @property
    def first_inclusion(self) -> Arrow:
        return Arrow(self.first, self.carrier, lambda e: e, "incl")

    @property
    def second_inclusion(self) -> Arrow:
        return Arrow(self.second, self.carrier, lambda e: e, "incl")


def split_by_zero(t: Arrow, names=("", "")) -> Split:
    """``(C | t = 0)`` and ``(C | t > 0)``; the latter is ``1 ∸ t = 0``."""
    C = t.dom
    zero = constant(C, NAT, 0, "0")
    tf = t.fn
    positive = Arrow(C, NAT, lambda e: monus(1, tf(e)), f"s0 - {t.label}")
    return Split(C, Sub(C, t, zero, names[0]), Sub(C, positive, zero, names[1]))


def split_by_lt(u: Arrow, w: Arrow, names=("", "")) -> Split:
    """``(C | u < w)`` and ``(C | u ≥ w)``."""
    C = u.dom
    zero = constant(C, NAT, 0, "0")
    return Split(C, Sub(C, lt_test(u, w), zero, names[0]), Sub(C, leq_test(w, u), zero, names[1]))


# -- arithmetic law suite --------------------------------------------------


def run_arith_laws(budget: Budget = DEFAULT_BUDGET, ops: ArithOps | None = None) -> LawReport:
    """Exhaustively check the arithmetic and order laws for naturals up to
    ``budget.nat_max``.  ``ops`` may carry deliberately wrong operations."""
    o = ops or STANDARD
    add, mul, P, mon = o.add, o.mul, o.pred, o.monus
    mn, mx, ad = o.min, o.max, o.absdiff
    s = SUCC
    ns = list(enumerate_obj(NAT, budget))
    pairs = list(itertools.product(ns, repeat=2))
    triples = list(itertools.product(ns, repeat=3))
    leq = lambda a, b: mon(a, b) == 0
    lt = lambda a, b: mon(s(a), b) == 0
    r = LawReport(budget=budget)

    r.check("arith.def.add", pairs, lambda x, y: add(x, 0) == x and add(x, s(y)) == s(add(x, y)))
    r.check("arith.def.mul", pairs, lambda x, y: mul(x, 0) == 0 and mul(x, s(y)) == add(mul(x, y), x))
    r.check("arith.def.pred", [(y,) for y in ns], lambda y: P(0) == 0 and P(s(y)) == y)
    r.check("arith.def.monus", pairs, lambda x, y: mon(x, 0) == x and mon(x, s(y)) == P(mon(x, y)))

    r.check("arith.semiring.add_comm", pairs, lambda x, y: add(x, y) == add(y, x))
    r.check("arith.semiring.mul_comm", pairs, lambda x, y: mul(x, y) == mul(y, x))
    r.check("arith.semiring.add_assoc", triples, lambda x, y, z: add(add(x, y), z) == add(x, add(y, z)))
    r.check("arith.semiring.mul_assoc", triples, lambda x, y, z: mul(mul(x, y), z) == mul(x, mul(y, z)))
    r.check("arith.semiring.distrib", triples,
            lambda x, y, z: mul(x, add(y, z)) == add(mul(x, y), mul(x, z)))
    r.check("arith.semiring.units", [(x,) for x in ns],
            lambda x: add(x, 0) == x and add(0, x) == x and mul(x, 1) == x and mul(1, x) == x)

    r.check("arith.min.alt", pairs, lambda x, y: mn(x, y) == mon(y, mon(y, x)))
    r.check("arith.max.alt", pairs, lambda x, y: mx(x, y) == add(y, mon(x, y)))

    r.check("arith.basic.1", triples, lambda a, b, c: mon(a, add(b, c)) == mon(mon(a, b), c))
    r.check("arith.basic.2", pairs, lambda a, b: ad(mx(a, b), b) == mon(a, b))
    r.check("arith.basic.3", pairs, lambda a, b: mul(mon(a, b), mon(b, a)) == 0)

    def five_way(a, b):
        c1 = leq(a, b)
        c2 = mx(a, b) == b
        c3 = mn(a, b) == a
        c4 = any(add(a, x) == b for x in ns)
        c5 = any(a == mon(b, x) for x in ns)
        if not (c1 == c2 == c3 == c4 == c5):
            return False
        # when they hold, b ∸ a witnesses the existential clauses
        return not c1 or (add(a, mon(b, a)) == b and a == mon(b, mon(b, a)))

    r.check("arith.leq_equiv", pairs, five_way)

    r.check("arith.order.refl", [(x,) for x in ns], lambda x: leq(x, x))
    r.check("arith.order.antisym", pairs, lambda x, y: not (leq(x, y) and leq(y, x)) or ad(x, y) == 0)
    r.check("arith.order.trans", triples, lambda x, y, z: not (leq(x, y) and leq(y, z)) or leq(x, z))
    r.check("arith.order.mono_add", triples, lambda x, y, z: not leq(x, y) or leq(add(x, z), add(y, z)))
    r.check("arith.order.mono_mul", triples, lambda x, y, z: not leq(x, y) or leq(mul(x, z), mul(y, z)))
    r.check("arith.order.mono_monus", triples, lambda x, y, z: not leq(x, y) or leq(mon(x, z), mon(y, z)))

    r.check("arith.lt_iff_monus_pos", pairs, lambda a, b: lt(a, b) == lt(0, mon(b, a)))
    r.check("arith.natCalc1", pairs, lambda x, y: mon(s(x), mon(x, y)) == s(mon(x, mon(x, y))))
    r.check("arith.pos_is_succ", [(n,) for n in ns], lambda n: not lt(0, n) or n == s(P(n)))

    iu = o.id_until
    r.check("arith.idUntil.below", pairs, lambda m, n: not lt(0, n) or lt(iu(m, n), n))
    r.check("arith.idUntil.fixes", pairs, lambda m, n: not lt(m, n) or iu(m, n) == m)
    return r
