"""Slice objects and the functors ``Σ_f``, ``Δ_f``, ``Π_f`` between them,
enough to compute polynomial functors ``Σ_t ∘ Π_f ∘ Δ_s`` on finite data."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any

from .setmodel import (
    NAT,
    UNIT,
    Arrow,
    Budget,
    BudgetError,
    DEFAULT_BUDGET,
    ListOf,
    ObjExpr,
    Prod,
    Seq,
    StructuralError,
    Sub,
    compose,
    constant,
    enumerate_obj,
    format_elem,
    pullback_obj,
    terminal_map,
)


@dataclass(frozen=True, eq=False)
class SliceObj:
    """An object of ``C/B``: a carrier with a map ``proj`` into ``B``.

    ``listing`` fixes the elements explicitly; dependent products use it
    because their carriers are only described, not enumerable, as objects.
    """

    carrier: ObjExpr
    proj: Arrow
    listing: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.proj.dom != self.carrier:
            raise StructuralError(f"{self.proj!r} does not start at {self.carrier!r}")

    @property
    def base(self) -> ObjExpr:
        return self.proj.cod

    def elements(self, budget: Budget = DEFAULT_BUDGET) -> list:
        if self.listing is not None:
            return list(self.listing)
        return _complete(self.carrier, budget)

    def fiber(self, b: Any, budget: Budget = DEFAULT_BUDGET) -> list:
        pf = self.proj.fn
        return [e for e in self.elements(budget) if pf(e) == b]

    def fiber_counts(self, budget: Budget = DEFAULT_BUDGET) -> dict:
        counts = {b: 0 for b in enumerate_obj(self.base, budget)}
        pf = self.proj.fn
        for e in self.elements(budget):
            counts[pf(e)] = counts.get(pf(e), 0) + 1
        return counts


def _complete(obj: ObjExpr, budget: Budget) -> list:
    elems = enumerate_obj(obj, budget)
    if elems.truncated:
        raise BudgetError(f"{obj!r} has more than {budget.card_cap} elements", len(elems))
    return list(elems)


def over_unit(X: ObjExpr) -> SliceObj:
    """``X`` as an object of ``C/1``."""
    return SliceObj(X, terminal_map(X))


def sigma_f(f: Arrow):
    """``Σ_f : C/A -> C/B``, post-composition with ``f``."""

    def apply(p: SliceObj) -> SliceObj:
        if p.base != f.dom:
            raise StructuralError(f"{p.proj!r} does not land in {f.dom!r}")
        return SliceObj(p.carrier, compose(f, p.proj), p.listing)

    return apply


def delta_f(f: Arrow):
    """``Δ_f : C/B -> C/A``, pulling back along ``f``; elements are ``(a, y)``
    with ``f(a) = proj(y)``."""

    def apply(q: SliceObj) -> SliceObj:
        if q.base != f.cod:
            raise StructuralError(f"{q.proj!r} does not land in {f.cod!r}")
        if q.listing is not None:
            raise StructuralError("pulling back an explicitly listed slice is not supported")
        pb = pullback_obj(f, q.proj, f"D_{f.label}")
        return SliceObj(pb.obj, pb.pi1)

    return apply


def _stable_fiber(f: Arrow, b: Any, budget: Budget) -> list:
    """The fiber of ``f`` over ``b``, certified finite: widening the budget
    must not reveal new elements."""
    ff = f.fn
    here = [a for a in _complete(f.dom, budget) if ff(a) == b]
    wider = [a for a in _complete(f.dom, budget.widened()) if ff(a) == b]
    if here != wider:
        raise BudgetError(
            f"fiber of {f.label or 'f'} over {format_elem(b)} keeps growing with the budget",
            len(wider),
        )
    return here


def pi_f(f: Arrow, p: SliceObj, budget: Budget = DEFAULT_BUDGET) -> SliceObj:
    """``Π_f(p)`` over ``B``: over each ``b``, every section choosing for each
    ``a`` in ``f⁻¹(b)`` an element of ``p`` over ``a``.

    Elements are ``(b, s)`` with ``s`` a :class:`Seq` whose ``i``-th entry
    lies over the ``i``-th element of the fiber of ``f`` (in enumeration order).
    """
    if p.base != f.dom:
        raise StructuralError(f"{p.proj!r} does not land in {f.dom!r}")
    P = p.carrier
    pf = p.proj.fn
    p_elems = p.elements(budget.widened())
    base = Prod((f.cod, ListOf(P)))
    fibers = {}
    listing = []
    for b in _complete(f.cod, budget):
        over = _stable_fiber(f, b, budget)
        fibers[b] = tuple(over)
        choices = [[y for y in p_elems if pf(y) == a] for a in over]
        size = 1
        for c in choices:
            size *= len(c)
        if size > budget.card_cap:
            raise BudgetError(f"{size} sections over {format_elem(b)}, cap is {budget.card_cap}", size)
        listing.extend((b, Seq(s)) for s in itertools.product(*choices))

    def is_section(e) -> int:
        b, s = e
        over = fibers.get(b)
        if over is None:
            over = tuple(_stable_fiber(f, b, budget))
        return int(len(s) == len(over) and all(pf(y) == a for y, a in zip(s, over)))

    carrier = Sub(
        base,
        Arrow(base, NAT, is_section, "is_section"),
        constant(base, NAT, 1, "1"),
        f"Pi_{f.label}",
    )
    return SliceObj(carrier, Arrow(carrier, f.cod, lambda e: e[0], "pi1"), tuple(listing))


# -- polynomials ------------------------------------------------------------


@dataclass(frozen=True)
class PolyDiagram:
    """``I <-s- A -f-> B -t-> J``."""

    s: Arrow
    f: Arrow
    t: Arrow

    def __post_init__(self):
        if self.s.dom != self.f.dom:
            raise StructuralError(f"s starts at {self.s.dom!r} but f at {self.f.dom!r}")
        if self.f.cod != self.t.dom:
            raise StructuralError(f"f ends at {self.f.cod!r} but t starts at {self.t.dom!r}")


def list_polynomial() -> PolyDiagram:
    """``1 <- E -> N -> 1`` with the middle arrow ``π₂ᴱ``."""
    from .polyadj import E, PI2_E

    return PolyDiagram(terminal_map(E), PI2_E, terminal_map(NAT))


@dataclass
class PolyExtension:
    """``Σ_t Π_f Δ_s (X)`` computed on finite data."""

    diagram: PolyDiagram
    X: SliceObj
    result: SliceObj
    middle: SliceObj
    budget: Budget

    @property
    def elements(self) -> list:
        return self.result.elements(self.budget)

    def counts_over_B(self) -> dict:
        """Number of elements over each ``b``; for lists, ``|X|^n`` over ``n``."""
        return self.middle.fiber_counts(self.budget)


def poly_extension(P: PolyDiagram, X: ObjExpr | SliceObj, budget: Budget = DEFAULT_BUDGET) -> PolyExtension:
    """The polynomial functor of ``P`` applied to ``X`` (an object over ``I``;
    a bare object is taken over ``1``)."""
    if not isinstance(X, SliceObj):
        if P.s.cod != UNIT:
            raise StructuralError("a bare object can only be fed to a polynomial with I = 1")
        X = over_unit(X)
    pulled = delta_f(P.s)(X)
    middle = pi_f(P.f, pulled, budget)
    return PolyExtension(P, X, sigma_f(P.t)(middle), middle, budget)


def section_to_list(e) -> Seq:
    """``(n, [((m, n), x), ...]) |-> [x, ...]``."""
    return Seq(y[1] for y in e[1])


def list_to_section(l: Seq):
    n = len(l)
    return (n, Seq(((m, n), x) for m, x in enumerate(l)))


@dataclass
class BijectionCheck:
    passed: bool
    size: int
    lists: int
    witness: Any = None


def list_bijection(ext: PolyExtension) -> BijectionCheck:
    """Round-trip the list polynomial's carrier against ``L(X)`` up to
    length ``nat_max`` of the extension's budget."""
    X = ext.X.carrier
    elems = ext.elements
    lists = list(enumerate_obj(ListOf(X), Budget(ext.budget.nat_max, ext.budget.nat_max, ext.budget.card_cap)))
    seen = set()
    for e in elems:
        l = section_to_list(e)
        if list_to_section(l) != e or l in seen:
            return BijectionCheck(False, len(elems), len(lists), e)
        seen.add(l)
    for l in lists:
        e = list_to_section(l)
        if section_to_list(e) != l or l not in seen:
            return BijectionCheck(False, len(elems), len(lists), l)
    ok = len(seen) == len(lists)
    return BijectionCheck(ok, len(elems), len(lists))
