"""The polynomial ``1 <- E -> N -> 1`` and the universal property of
``(L_N(X), nth_X)``.

Given ``l_A : A -> N`` and ``g : E ×_N A -> X`` (an :class:`Instance`), we

* build ``h : A -> L(X)`` by cases on ``l_A(a) = 0`` (:func:`construct_h`),
* check ``l_A = len ∘ h`` and ``g = nth ∘ (Id ×_N h)`` (:func:`verify_solution`),
* enumerate every candidate ``h`` as an independent oracle
  (:func:`brute_force_solutions`), and
* replay the element-by-element comparison of two solutions
  (:func:`uniqueness_by_theory`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import prod as product_of

from . import arith
from .arith import SUCC, split_by_lt, split_by_zero
from .listobj import ListOps, PreconditionError, decompose_nonempty, list_build
from .report import LawReport, VerifyReport
from .setmodel import (
    NAT,
    NIL,
    Arrow,
    Budget,
    BudgetError,
    DEFAULT_BUDGET,
    ConeError,
    FinSet,
    ListOf,
    ObjExpr,
    Prod,
    Seq,
    StructuralError,
    Sub,
    arrows_equal,
    case_merge,
    constant,
    enumerate_obj,
    format_elem,
    pullback_obj,
)


class InstanceError(ValueError):
    """An instance is ill-formed (missing or stray ``g`` entries, ...)."""


class DefectError(RuntimeError):
    """A constructed solution failed its own verification."""


# -- E and pullbacks along it ----------------------------------------------

NN = Prod((NAT, NAT))
_ZERO_NN = constant(NN, NAT, 0, "0")
_LT_NN = Arrow(NN, NAT, lambda e: arith.monus(SUCC(e[0]), e[1]), "s(m) - n")
E = Sub(NN, _LT_NN, _ZERO_NN, "E")
PI2_E = Arrow(E, NAT, lambda e: e[1], "pi2E")


def make_E():
    """``E = {m, n : N | s(m) ∸ n = 0}`` and its second projection."""
    return E, PI2_E


@dataclass(frozen=True)
class ETimes:
    """``E ×_N A`` for a given ``l_A``, together with the isomorphism to
    ``{m : N, a : A | m < l_A(a)}`` (the *context form*)."""

    l_A: Arrow
    pullback: Sub
    context: Sub
    iso_to: Arrow
    iso_from: Arrow

    @property
    def A(self) -> ObjExpr:
        return self.l_A.dom

    def enumerate(self, budget: Budget = DEFAULT_BUDGET):
        """Pullback elements, listed through the context form so that only
        ``m ≤ nat_max`` is needed rather than all of ``E × A``."""
        return [self.iso_from(c) for c in enumerate_obj(self.context, budget)]


@lru_cache(maxsize=None)
def e_times(l_A: Arrow) -> ETimes:
    if l_A.cod != NAT:
        raise StructuralError(f"{l_A!r} does not land in N")
    A = l_A.dom
    pb = pullback_obj(PI2_E, l_A, f"E x_N {A!r}").obj
    lf = l_A.fn
    base = Prod((NAT, A))
    ctx = Sub(
        base,
        Arrow(base, NAT, lambda e: arith.monus(SUCC(e[0]), lf(e[1])), "s(m) - l(a)"),
        constant(base, NAT, 0, "0"),
        f"{{m:N, a:{A!r} | m < {l_A.label}(a)}}",
    )
    return ETimes(
        l_A,
        pb,
        ctx,
        Arrow(pb, ctx, lambda e: (e[0][0], e[1]), "((m,n),a) |-> (m,a)"),
        Arrow(ctx, pb, lambda e: ((e[0], lf(e[1])), e[1]), "(m,a) |-> ((m,l(a)),a)"),
    )


def id_times_f(f: Arrow, l_A: Arrow, l_B: Arrow, budget: Budget = DEFAULT_BUDGET) -> Arrow:
    """``Id_E ×_N f : E ×_N A -> E ×_N B``, defined when ``l_B ∘ f = l_A``."""
    if f.dom != l_A.dom or f.cod != l_B.dom:
        raise StructuralError(f"{f!r} does not go from {l_A.dom!r} to {l_B.dom!r}")
    for a in enumerate_obj(f.dom, budget):
        if l_B(f(a)) != l_A(a):
            raise ConeError(
                f"triangle fails at {format_elem(a)}: "
                f"{l_B.label}({format_elem(f(a))}) = {l_B(f(a))} but {l_A.label}(a) = {l_A(a)}",
                a,
            )
    src, dst = e_times(l_A), e_times(l_B)
    ff = f.fn
    return Arrow(src.pullback, dst.pullback, lambda e: (e[0], ff(e[1])), f"Id x_N {f.label}")


# -- nth ---------------------------------------------------------------------


def nth_context(X: ObjExpr) -> Sub:
    """``{m : N, l : L(X) | m < len(l)}``."""
    return e_times(ListOps.standard(X).len).context


@lru_cache(maxsize=None)
def default_term(X: ObjExpr) -> Arrow:
    """A default element in the context ``(m, l | m < len l)``: the head of ``l``."""
    return Arrow(nth_context(X), X, lambda e: decompose_nonempty(e[1])[0], "def")


@lru_cache(maxsize=None)
def nth_arrow(X: ObjExpr) -> Arrow:
    """``nth_X : E ×_N L(X) -> X``, ``nth(m, l) = nthDef(def, m, l)``."""
    et = e_times(ListOps.standard(X).len)
    to = et.iso_to.fn
    nd = ListOps.standard(X).nth_def.fn
    df = default_term(X).fn

    def run(e):
        c = to(e)
        return nd((df(c), c[0], c[1]))

    return Arrow(et.pullback, X, run, "nth")


def nth_value(X: ObjExpr, m: int, l: Seq):
    """``nth(m, l)`` on the context form; ``m < len(l)`` is required."""
    if not arith.lt_holds(m, len(l)):
        raise PreconditionError(f"index {m} is not below len {len(l)}")
    return nth_arrow(X)(((m, len(l)), l))


# -- instances --------------------------------------------------------------


@dataclass(frozen=True)
class Instance:
    """A finite verification problem: ``X``, ``A``, ``l_A`` and a table for ``g``."""

    X: FinSet
    A: FinSet
    lengths: dict = field(hash=False)
    g_table: dict = field(hash=False)

    def __post_init__(self):
        for a in self.A.elements:
            if a not in self.lengths:
                raise InstanceError(f"no length given for {a}")
            if not isinstance(self.lengths[a], int) or self.lengths[a] < 0:
                raise InstanceError(f"length of {a} is not a natural")
        for a in self.lengths:
            if a not in self.A.elements:
                raise InstanceError(f"length given for unknown element {a}")
        for (m, a), x in self.g_table.items():
            if a not in self.A.elements:
                raise InstanceError(f"g({m}, {a}) names an element outside A")
            if not 0 <= m < self.lengths[a]:
                raise InstanceError(f"g({m}, {a}) lies outside m < lA({a}) = {self.lengths[a]}")
            if x not in self.X.elements:
                raise InstanceError(f"g({m}, {a}) = {x} is not in X")
        for a in self.A.elements:
            for m in range(self.lengths[a]):
                if (m, a) not in self.g_table:
                    raise InstanceError(f"g({m}, {a}) is missing")

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other

    @cached_property
    def l_A(self) -> Arrow:
        return Arrow(self.A, NAT, self.lengths.__getitem__, "lA")

    @cached_property
    def etimes(self) -> ETimes:
        return e_times(self.l_A)

    @cached_property
    def g(self) -> Arrow:
        """``g : E ×_N A -> X``."""
        table = self.g_table
        return Arrow(self.etimes.pullback, self.X, lambda e: table[(e[0][0], e[1])], "g")

    @cached_property
    def g_context(self) -> Arrow:
        """``g`` on the context form ``{m, a | m < l_A(a)}``."""
        table = self.g_table
        return Arrow(self.etimes.context, self.X, lambda e: table[e], "g")

    def pullback_elements(self, budget: Budget) -> list:
        """``E ×_N A`` enumerated once per budget."""
        cache = self.__dict__.setdefault("_pb_cache", {})
        if budget not in cache:
            cache[budget] = self.etimes.enumerate(budget)
        return cache[budget]

    def budget(self, card_cap: int = 200_000) -> Budget:
        """The least budget that enumerates ``E ×_N A`` completely."""
        top = max(self.lengths.values(), default=0)
        return Budget(nat_max=top, len_max=top, card_cap=card_cap)


def extend_to_total(inst: Instance, pos: ObjExpr | None = None) -> Arrow:
    """``g' : N × [A_{>0}] -> X``, ``g'(m, a) = g(IdUntil(m, l_A(a)), a)``."""
    pos = pos or split_by_zero(inst.l_A).second
    g, lf, iu = inst.g_context.fn, inst.l_A.fn, arith.id_until
    return Arrow(Prod((NAT, pos)), inst.X, lambda e: g((iu(e[0], lf(e[1])), e[1])), "g'")


def construct_h(inst: Instance, budget: Budget | None = None) -> Arrow:
    """``h = ∅`` on ``l_A = 0`` and ``List[g', l_A]`` on ``l_A > 0``."""
    budget = budget or inst.budget()
    split = split_by_zero(inst.l_A, ("A0", "A>0"))
    LX = ListOf(inst.X)
    on_zero = constant(split.first, LX, NIL, "nil")
    l_pos = Arrow(split.second, NAT, inst.l_A.fn, "lA'")
    on_pos = list_build(extend_to_total(inst, split.second), l_pos, ListOps.standard(inst.X))
    h = case_merge(
        [(split.first_inclusion, on_zero), (split.second_inclusion, on_pos)], budget
    )
    h = Arrow(h.dom, h.cod, h.fn, "h")
    report = verify_solution(inst, h, budget)
    if not report.passed:
        raise DefectError("constructed h fails verification: " + "; ".join(report.lines()))
    return h


def _pointwise_failure(inst: Instance, a, l, budget: Budget, ops: ListOps):
    """Both equations restricted to one ``a``; ``None`` if they hold there,
    otherwise ``(equation, counterexample, note)``."""
    if ops.len(l) != inst.l_A(a):
        return "len-equation", a, ""
    nth = nth_arrow(inst.X)
    for m in range(inst.lengths[a]):
        if m > budget.nat_max:
            break
        got = nth(((m, ops.len(l)), l))
        want = inst.g_context((m, a))
        if got != want:
            return "g-equation", (m, a), f"(nth gives {format_elem(got)}, g gives {format_elem(want)})"
    return None


def verify_solution(inst: Instance, h: Arrow, budget: Budget | None = None) -> VerifyReport:
    """Check ``l_A = len ∘ h`` and ``g = nth ∘ (Id ×_N h)``.

    Both sides are compared on every element of ``A`` and every ``(m, a)``
    with ``m < l_A(a)``; where ``len(h(a)) ≠ l_A(a)`` the composite
    ``Id ×_N h`` is undefined and the g-equation is reported as failing too.
    """
    budget = budget or inst.budget()
    ops = ListOps.standard(inst.X)
    report = VerifyReport(budget=budget)
    bad_len = [a for a in enumerate_obj(inst.A, budget) if ops.len(h(a)) != inst.l_A(a)]
    report.record("len-equation", not bad_len, bad_len[0] if bad_len else None,
                  len(inst.A.elements))
    if bad_len:
        report.record("g-equation", False, bad_len[0], 0, "(Id x_N h undefined: len mismatch)")
        return report
    n = 0
    for a in enumerate_obj(inst.A, budget):
        n += 1
        fail = _pointwise_failure(inst, a, h(a), budget, ops)
        if fail is not None:
            report.record(fail[0], False, fail[1], n, fail[2])
            return report
    report.record("g-equation", True, None, sum(inst.lengths.values()))
    return report


# -- brute force ------------------------------------------------------------


def candidate_count(inst: Instance) -> int:
    """``∏_a |X|^{l_A(a)}``: the number of ``h`` with ``len ∘ h = l_A``."""
    k = len(inst.X.elements)
    return product_of(k ** inst.lengths[a] for a in inst.A.elements)


def brute_force_solutions(inst: Instance, budget: Budget | None = None) -> list[Arrow]:
    """Every ``h`` satisfying both equations, found by exhaustive search.

    Any solution satisfies ``len ∘ h = l_A``, so only those candidates are
    listed. Each candidate is judged by both equations at every point; since
    the equations are pointwise in ``a``, the verdict at ``(a, h(a))`` is
    computed once and shared between candidates.
    """
    budget = budget or inst.budget()
    size = candidate_count(inst)
    if size > budget.card_cap:
        raise BudgetError(f"search space has {size} candidates, cap is {budget.card_cap}", size)
    A, X, LX = inst.A, inst.X, ListOf(inst.X)
    ops = ListOps.standard(X)
    per_a = []
    verdicts = []
    for a in A.elements:
        lists = [Seq(c) for c in itertools.product(X.elements, repeat=inst.lengths[a])]
        per_a.append(lists)
        verdicts.append({l: _pointwise_failure(inst, a, l, budget, ops) is None for l in lists})
    found = []
    for choice in itertools.product(*per_a):
        if all(v[l] for v, l in zip(verdicts, choice)):
            table = dict(zip(A.elements, choice))
            h = Arrow(A, LX, table.__getitem__, "h*")
            # the shared verdicts must agree with the whole-arrow check
            if not verify_solution(inst, h, budget).passed:
                raise DefectError(f"pointwise and global verdicts disagree on {table}")
            found.append(h)
    return found


# -- uniqueness, replayed stage by stage -------------------------------------


def uniqueness_by_theory(
    inst: Instance, h1: Arrow, h2: Arrow, budget: Budget | None = None
) -> VerifyReport:
    """Show ``h1 = h2`` the long way round, for two solutions of ``inst``.

    1. nthDef agreement at every default and index, split into
       ``m < l_A(a)`` (where nthDef is nth) and ``m ≥ l_A(a)`` (where it is
       the default);
    2. the parameterised equality ``h1(a) = h2(a)`` in context ``(x, a)``,
       via the common recurrence of ``H_i(x, k, a) = H(x, k, h_i(a))``;
    3. ``h1 = h2`` outright, splitting ``A`` by ``l_A = 0`` and using the
       head of ``h1(a)`` as the default on ``l_A > 0``.
    """
    budget = budget or inst.budget()
    for name, h in (("h1", h1), ("h2", h2)):
        pre = verify_solution(inst, h, budget)
        if not pre.passed:
            raise PreconditionError(
                f"{name} is not a solution: " + "; ".join(r.line() for r in pre.failures())
            )
    X, A = inst.X, inst.A
    ops = ListOps.standard(X)
    ln, nd = ops.len, ops.nth_def
    l_A = inst.l_A
    report = VerifyReport(budget=budget)
    nat_top = max(budget.nat_max, max(inst.lengths.values(), default=0) + 1)
    stage_budget = Budget(nat_top, budget.len_max, budget.card_cap, budget.seed)

    # stage 1 ---------------------------------------------------------------
    D = Prod((X, NAT, A))
    u = Arrow(D, NAT, lambda e: e[1], "m")
    w = Arrow(D, NAT, lambda e: l_A(e[2]), "lA(a)")
    halves = split_by_lt(u, w, ("D0", "D1"))
    nth = nth_arrow(X)
    bad = None
    n = 0
    for e in enumerate_obj(halves.first, stage_budget):
        n += 1
        x, m, a = e
        vals = []
        for h in (h1, h2):
            l = h(a)
            via_nth = nth(((m, ln(l)), l))
            if nd(x, m, l) != via_nth:
                bad = bad or e
            vals.append(via_nth)
        if vals[0] != vals[1]:
            bad = bad or e
    for e in enumerate_obj(halves.second, stage_budget):
        n += 1
        x, m, a = e
        if not (nd(x, m, h1(a)) == x == nd(x, m, h2(a))):
            bad = bad or e
    report.record("stage1-nthDef-agreement", bad is None, bad, n)

    # stage 2 ---------------------------------------------------------------
    H, Af = ops.build_H, ops.build_A
    k_top = max(inst.lengths.values(), default=0)
    xs, as_ = X.elements, A.elements
    bad = None
    n = 0
    for x, a in itertools.product(xs, as_):
        l1, l2 = h1(a), h2(a)
        if H(x, 0, l1) != NIL or H(x, 0, l2) != NIL:
            bad = bad or (x, 0, a)
        for k in range(k_top + 1):
            n += 1
            # A_1 = A_2 on every accumulator, and both H_i follow it
            for L in (NIL, H(x, k, l1)):
                if Af(x, k, l1, L) != Af(x, k, l2, L):
                    bad = bad or (x, k, a)
            if H(x, SUCC(k), l1) != Af(x, k, l1, H(x, k, l1)):
                bad = bad or (x, k, a)
            if H(x, SUCC(k), l2) != Af(x, k, l2, H(x, k, l2)):
                bad = bad or (x, k, a)
            if H(x, k, l1) != H(x, k, l2):
                bad = bad or (x, k, a)
        if H(x, ln(l1), l1) != l1 or H(x, ln(l2), l2) != l2 or l1 != l2:
            bad = bad or (x, a)
    report.record("stage2-parameterised-equality", bad is None, bad, n,
                  "" if xs else "(vacuous: X is empty)")

    # stage 3 ---------------------------------------------------------------
    split = split_by_zero(l_A, ("A0", "A>0"))
    bad = None
    for a in enumerate_obj(split.first, budget):
        if h1(a) != NIL or h2(a) != NIL:
            bad = bad or a
    default = default_term(X)
    for a in enumerate_obj(split.second, budget):
        # substitute x := def(0, h1(a)) into the stage-2 equality
        d = default((0, h1(a)))
        if H(d, ln(h1(a)), h1(a)) != H(d, ln(h2(a)), h2(a)):
            bad = bad or a
    same = arrows_equal(h1, h2, budget)
    if not same and bad is None:
        bad = same.counterexample[0]
    report.record("stage3-equality", bad is None, bad, len(as_))
    return report


# -- listEqNoExt as a standalone property -----------------------------------


def lists_agree_elementwise(X: FinSet, h1: Arrow, h2: Arrow, budget: Budget) -> bool:
    """Equal lengths and equal nthDef at every default and index up to
    ``nat_max``."""
    ops = ListOps.standard(X)
    for a in enumerate_obj(h1.dom, budget):
        l1, l2 = h1(a), h2(a)
        if ops.len(l1) != ops.len(l2):
            return False
        for x in X.elements:
            for m in range(budget.nat_max + 1):
                if ops.nth_def(x, m, l1) != ops.nth_def(x, m, l2):
                    return False
    return True


def generate_instances(card_x: int, card_a: int, max_len: int):
    """Every instance with ``|X| = card_x``, ``|A| = card_a``, lengths
    ``≤ max_len`` and every ``g`` table."""
    X = FinSet(tuple("abcdefgh"[:card_x]), "X")
    A = FinSet(tuple("pqrstuvw"[:card_a]), "A")
    for lens in itertools.product(range(max_len + 1), repeat=card_a):
        lengths = dict(zip(A.elements, lens))
        slots = [(m, a) for a in A.elements for m in range(lengths[a])]
        for values in itertools.product(X.elements, repeat=len(slots)):
            yield Instance(X, A, lengths, dict(zip(slots, values)))


# -- the polyadj law suite ---------------------------------------------------


def run_poly_laws(budget: Budget = DEFAULT_BUDGET, card_x: int = 2, samples: int = 100) -> LawReport:
    """E, the ``E ×_N`` isomorphisms, nth, the list polynomial and the
    universal property on seeded-random instances."""
    import random

    from .listobj import atoms, map_list, random_function
    from .slices import list_bijection, list_polynomial, poly_extension

    X = atoms(card_x)
    suffix = f"[X={card_x}]"
    rng = random.Random(budget.seed * 1_000_003 + 17 * card_x + 5)
    r = LawReport(budget=budget)
    ns = list(enumerate_obj(NAT, budget))

    E_elems = list(enumerate_obj(E, budget))
    r.check("poly.E.fibers", [(n,) for n in ns],
            lambda n: sum(1 for e in E_elems if PI2_E(e) == n) == n)

    ops = ListOps.standard(X)
    et = e_times(ops.len)
    pb = list(enumerate_obj(et.pullback, budget))
    ctx = list(enumerate_obj(et.context, budget))
    r.check(f"poly.etimes.roundtrip{suffix}", [(e,) for e in pb],
            lambda e: et.iso_from(et.iso_to(e)) == e)
    r.check(f"poly.etimes.roundtrip_back{suffix}", [(c,) for c in ctx],
            lambda c: et.iso_to(et.iso_from(c)) == c)

    nth = nth_arrow(X)
    r.check(f"poly.nth.positional{suffix}", [(e,) for e in pb],
            lambda e: nth(e) == e[1][e[0][0]])

    Y = atoms(max(card_x, 1), "Y", "y")
    pairs = []
    if X.elements:
        for _ in range(samples):
            f = random_function(rng, X.elements, Y.elements)
            pairs.append(f)
    nth_Y = nth_arrow(Y)

    def natural(f):
        fa = Arrow(X, Y, f.__getitem__, "f")
        Lf = map_list(fa)
        return all(nth_Y(((e[0], Lf(e[1])))) == f[nth(e)] for e in pb)

    r.check(f"poly.nth.natural{suffix}", [(f,) for f in pairs], natural)

    insts = []
    if X.elements:
        A = FinSet(("p", "q", "r"), "A")
        for _ in range(samples // 4 or 1):
            lengths = {a: rng.randint(0, min(3, budget.nat_max)) for a in A.elements}
            table = {(m, a): rng.choice(X.elements) for a in A.elements for m in range(lengths[a])}
            insts.append(Instance(X, A, lengths, table))

    def clamps(inst):
        split = split_by_zero(inst.l_A)
        gt = extend_to_total(inst, split.second)
        for a in enumerate_obj(split.second, budget):
            la = inst.lengths[a]
            for m in ns:
                want = inst.g_table[(min(m, la - 1), a)]
                if gt((m, a)) != want:
                    return False
        return True

    r.check(f"poly.extendToTotal{suffix}", [(i,) for i in insts], clamps)
    r.check(f"poly.existence{suffix}", [(i,) for i in insts],
            lambda i: verify_solution(i, construct_h(i)).passed)

    def unique(inst):
        h = construct_h(inst)
        sols = brute_force_solutions(inst)
        return (len(sols) == 1 and bool(arrows_equal(h, sols[0], inst.budget()))
                and uniqueness_by_theory(inst, h, sols[0]).passed)

    r.check(f"poly.uniqueness{suffix}", [(i,) for i in insts], unique)

    ext = poly_extension(list_polynomial(), X, Budget(budget.len_max, budget.len_max, budget.card_cap))
    counts = ext.counts_over_B()
    r.record(f"poly.extension.counts{suffix}",
             all(c == card_x ** n for n, c in counts.items()), None, len(counts))
    check = list_bijection(ext)
    r.record(f"poly.extension.bijection{suffix}", check.passed, check.witness, check.size)
    return r
