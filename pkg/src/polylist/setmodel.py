"""The ambient category: lazily enumerated sets and total computable maps.

Objects are small syntax trees (:class:`Unit`, :class:`Nat`, :class:`ListOf`,
:class:`Prod`, :class:`Sub`, plus :class:`FinSet` for explicit finite
carriers).  Elements are plain Python values:

* ``STAR`` for the unique element of ``Unit``;
* ``int`` (unbounded) for naturals;
* ``str`` for atoms of a ``FinSet``;
* ``tuple`` for elements of a product;
* :class:`Seq` for finite lists.

An element of ``Sub(base, lhs, rhs)`` is just an element of ``base`` on which
``lhs`` and ``rhs`` agree; the inclusion is the identity on representations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Sequence, Union


class ModelError(Exception):
    """Base class for errors raised by the set model."""


class StructuralError(ModelError):
    """Domain/codomain mismatch between arrows or objects."""


class CoverageError(ModelError):
    """A case split does not partition its carrier."""

    def __init__(self, message, witnesses=()):
        super().__init__(message)
        self.witnesses = list(witnesses)


class ConeError(ModelError):
    """A would-be mediating arrow does not factor through a limit."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class BudgetError(ModelError):
    """A computation exceeded its explicit budget."""

    def __init__(self, message, size=None):
        super().__init__(message)
        self.size = size


# -- elements ---------------------------------------------------------------


class _Star:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "*"

    def __reduce__(self):
        return (_Star, ())


STAR = _Star()


class Seq(tuple):
    """A finite list.  Never equal to a plain tuple of the same items."""

    __slots__ = ()

    def __eq__(self, other):
        if not isinstance(other, Seq):
            return False
        return tuple.__eq__(self, other)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(("Seq", tuple(self)))

    def __repr__(self):
        return "[" + ", ".join(format_elem(x) for x in self) + "]"

    def __add__(self, other):
        return Seq(tuple(self) + tuple(other))

    def __getitem__(self, item):
        out = tuple.__getitem__(self, item)
        return Seq(out) if isinstance(item, slice) else out


NIL = Seq()

Elem = Union[_Star, int, str, tuple, Seq]


def format_elem(e: Any) -> str:
    """Render an element in the term DSL's literal syntax."""
    if e is STAR:
        return "*"
    if isinstance(e, Seq):
        return "[" + ",".join(format_elem(x) for x in e) + "]"
    if isinstance(e, tuple):
        return "(" + ",".join(format_elem(x) for x in e) + ")"
    return str(e)


# -- objects ----------------------------------------------------------------


class ObjExpr:
    """Base class of object expressions."""

    __slots__ = ()


@dataclass(frozen=True)
class Unit(ObjExpr):
    def __repr__(self):
        return "1"


@dataclass(frozen=True)
class Nat(ObjExpr):
    def __repr__(self):
        return "N"


@dataclass(frozen=True)
class FinSet(ObjExpr):
    """An explicit finite set of named atoms."""

    elements: tuple[str, ...]
    name: str = "X"

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise ValueError(f"duplicate atoms in {self.elements}")

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class ListOf(ObjExpr):
    elem: ObjExpr

    def __repr__(self):
        return f"L({self.elem!r})"


@dataclass(frozen=True)
class Prod(ObjExpr):
    components: tuple[ObjExpr, ...]

    def __post_init__(self):
        if len(self.components) < 2:
            raise ValueError("Prod needs at least two components; use prod()")

    def __repr__(self):
        return "(" + " * ".join(repr(c) for c in self.components) + ")"


@dataclass(frozen=True)
class Sub(ObjExpr):
    """Equaliser ``{e : base | lhs(e) = rhs(e)}``."""

    base: ObjExpr
    lhs: "Arrow"
    rhs: "Arrow"
    name: str = ""

    def __post_init__(self):
        if not conforms(self.base, self.lhs.dom) or not conforms(self.base, self.rhs.dom):
            raise StructuralError(
                f"equaliser arrows have domains {self.lhs.dom!r}, {self.rhs.dom!r}; "
                f"base is {self.base!r}"
            )
        if self.lhs.cod != self.rhs.cod:
            raise StructuralError(
                f"equaliser arrows have codomains {self.lhs.cod!r} and {self.rhs.cod!r}"
            )

    def __repr__(self):
        if self.name:
            return self.name
        return f"{{{self.base!r} | {self.lhs.label} = {self.rhs.label}}}"


UNIT = Unit()
NAT = Nat()


def prod(*components: ObjExpr) -> ObjExpr:
    """Canonical product: nullary is ``Unit``, unary is the component."""
    if len(components) == 1 and isinstance(components[0], (list, tuple)):
        components = tuple(components[0])
    if not components:
        return UNIT
    if len(components) == 1:
        return components[0]
    return Prod(tuple(components))


def underlying(obj: ObjExpr) -> ObjExpr:
    """Strip every ``Sub`` wrapper."""
    while isinstance(obj, Sub):
        obj = obj.base
    return obj


def conforms(src: ObjExpr, dst: ObjExpr) -> bool:
    """True when elements of ``src`` may be used where ``dst`` is expected
    without any check: equal objects, or ``src`` a sub-object of ``dst``."""
    if src == dst:
        return True
    if isinstance(src, Sub):
        return conforms(src.base, dst)
    if isinstance(src, Prod) and isinstance(dst, Prod):
        return len(src.components) == len(dst.components) and all(
            conforms(a, b) for a, b in zip(src.components, dst.components)
        )
    if isinstance(src, ListOf) and isinstance(dst, ListOf):
        return conforms(src.elem, dst.elem)
    return False


# -- arrows -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Arrow:
    """A total map ``dom -> cod``.

    Calling with several arguments packs them into a tuple, so ``add(2, 3)``
    and ``add((2, 3))`` are the same.
    """

    dom: ObjExpr
    cod: ObjExpr
    fn: Callable[[Any], Any] = field(repr=False)
    label: str = ""

    def __call__(self, *args):
        if len(args) == 1:
            return self.fn(args[0])
        return self.fn(tuple(args))

    def __repr__(self):
        return f"{self.label or '<arrow>'} : {self.dom!r} -> {self.cod!r}"


def arrow(dom: ObjExpr, cod: ObjExpr, label: str = ""):
    """Decorator form: ``@arrow(NAT, NAT, "double")``."""

    def wrap(fn):
        return Arrow(dom, cod, fn, label or fn.__name__)

    return wrap


# -- budgets and enumeration -----------------------------------------------


@dataclass(frozen=True)
class Budget:
    nat_max: int = 4
    len_max: int = 3
    card_cap: int = 200_000
    seed: int = 0

    def __post_init__(self):
        for name in ("nat_max", "len_max", "card_cap"):
            if getattr(self, name) < 0:
                raise ValueError(f"budget field {name} must be >= 0")

    def widened(self, by: int = 1) -> "Budget":
        return Budget(self.nat_max + by, self.len_max + by, self.card_cap, self.seed)


DEFAULT_BUDGET = Budget()


class Enumeration(list):
    """List of elements plus a flag recording truncation at ``card_cap``."""

    truncated: bool = False


def _iter_elems(obj: ObjExpr, budget: Budget, flags: list) -> Iterator[Any]:
    # flags collects truncation of component enumerations
    match obj:
        case Unit():
            yield STAR
        case Nat():
            yield from range(budget.nat_max + 1)
        case FinSet(elements=elements):
            yield from elements
        case ListOf(elem=x):
            xs = enumerate_obj(x, budget)
            if xs.truncated:
                flags.append(x)
            for n in range(budget.len_max + 1):
                for combo in itertools.product(xs, repeat=n):
                    yield Seq(combo)
        case Prod(components=cs):
            pools = [enumerate_obj(c, budget) for c in cs]
            if any(p.truncated for p in pools):
                flags.append(obj)
            for combo in itertools.product(*pools):
                yield combo
        case Sub(base=base, lhs=lhs, rhs=rhs):
            for e in _iter_elems(base, budget, flags):
                if lhs(e) == rhs(e):
                    yield e
        case _:
            raise StructuralError(f"cannot enumerate {obj!r}")


def enumerate_obj(obj: ObjExpr, budget: Budget = DEFAULT_BUDGET) -> Enumeration:
    """Deterministic, duplicate-free enumeration of ``obj`` under ``budget``.

    Naturals are ``0..nat_max``; lists are ordered by length (at most
    ``len_max``) and then lexicographically in the element enumeration;
    products are lexicographic; sub-objects filter their base.  At most
    ``card_cap`` elements are returned and ``truncated`` is set if more
    exist, including when a component was itself cut short.
    """
    out = Enumeration()
    flags: list = []
    for e in _iter_elems(obj, budget, flags):
        if len(out) >= budget.card_cap:
            out.truncated = True
            break
        out.append(e)
    if flags:
        out.truncated = True
    return out


def elem_has_type(e: Any, obj: ObjExpr, budget: Budget = DEFAULT_BUDGET) -> bool:
    """Structural membership test; for ``Sub`` also evaluates the equation."""
    match obj:
        case Unit():
            return e is STAR
        case Nat():
            return isinstance(e, int) and not isinstance(e, bool) and e >= 0
        case FinSet(elements=elements):
            return isinstance(e, str) and e in elements
        case ListOf(elem=x):
            return isinstance(e, Seq) and all(elem_has_type(y, x, budget) for y in e)
        case Prod(components=cs):
            return (
                type(e) is tuple
                and len(e) == len(cs)
                and all(elem_has_type(y, c, budget) for y, c in zip(e, cs))
            )
        case Sub(base=base, lhs=lhs, rhs=rhs):
            return elem_has_type(e, base, budget) and lhs(e) == rhs(e)
    return False


def check_arrow(f: Arrow, budget: Budget = DEFAULT_BUDGET):
    """Spot-check that ``f`` maps enumerated ``dom`` elements into ``cod``.

    Returns the first offending input, or ``None``.
    """
    for e in enumerate_obj(f.dom, budget):
        if not elem_has_type(f(e), f.cod, budget):
            return e
    return None


# -- category structure -----------------------------------------------------


def identity(obj: ObjExpr) -> Arrow:
    return Arrow(obj, obj, lambda e: e, f"id_{obj!r}")


def compose(g: Arrow, f: Arrow) -> Arrow:
    """``g ∘ f``."""
    if not conforms(f.cod, g.dom):
        raise StructuralError(
            f"cannot compose {g.label or 'g'} after {f.label or 'f'}: "
            f"codomain {f.cod!r} does not match domain {g.dom!r}"
        )
    gf, ff = g.fn, f.fn
    return Arrow(f.dom, g.cod, lambda e: gf(ff(e)), f"{g.label}.{f.label}")


def terminal_map(obj: ObjExpr) -> Arrow:
    return Arrow(obj, UNIT, lambda e: STAR, f"!_{obj!r}")


def constant(dom: ObjExpr, cod: ObjExpr, value, label: str = "") -> Arrow:
    return Arrow(dom, cod, lambda e: value, label or f"const {format_elem(value)}")


def pairing(*fs: Arrow) -> Arrow:
    """``<f1, ..., fn>``; a single arrow is returned unchanged."""
    if len(fs) == 1 and isinstance(fs[0], (list, tuple)):
        fs = tuple(fs[0])
    if not fs:
        raise StructuralError("pairing of no arrows")
    dom = fs[0].dom
    for f in fs[1:]:
        if f.dom != dom:
            raise StructuralError(
                f"cannot pair arrows with domains {dom!r} and {f.dom!r}"
            )
    if len(fs) == 1:
        return fs[0]
    fns = tuple(f.fn for f in fs)
    label = "<" + ", ".join(f.label for f in fs) + ">"
    return Arrow(dom, prod(*(f.cod for f in fs)), lambda e: tuple(fn(e) for fn in fns), label)


def proj(product: ObjExpr, i: int) -> Arrow:
    """Projection onto component ``i`` (zero-based) of ``product``."""
    base = underlying(product)
    if not isinstance(base, Prod):
        raise StructuralError(f"{product!r} is not a product")
    if not 0 <= i < len(base.components):
        raise StructuralError(f"{product!r} has no component {i}")
    return Arrow(product, base.components[i], lambda e: e[i], f"pi{i + 1}")


def par(*fs: Arrow) -> Arrow:
    """``f1 × ... × fn``."""
    if len(fs) < 2:
        raise StructuralError("par needs at least two arrows")
    fns = tuple(f.fn for f in fs)
    return Arrow(
        prod(*(f.dom for f in fs)),
        prod(*(f.cod for f in fs)),
        lambda e: tuple(fn(x) for fn, x in zip(fns, e)),
        " x ".join(f.label for f in fs),
    )


def restrict(f: Arrow, dom: ObjExpr) -> Arrow:
    """``f`` precomposed with the inclusion of a sub-object of its domain."""
    if not conforms(dom, f.dom):
        raise StructuralError(f"{dom!r} is not a sub-object of {f.dom!r}")
    return Arrow(dom, f.cod, f.fn, f.label)


def corestrict(f: Arrow, cod: ObjExpr, budget: Budget = DEFAULT_BUDGET) -> Arrow:
    """Factor ``f`` through a sub-object ``cod`` of its codomain, checking
    membership on every enumerated input."""
    if not conforms(cod, f.cod):
        raise StructuralError(f"{cod!r} is not a sub-object of {f.cod!r}")
    for e in enumerate_obj(f.dom, budget):
        if not elem_has_type(f(e), cod, budget):
            raise ConeError(
                f"{f.label or 'arrow'} sends {format_elem(e)} outside {cod!r}", e
            )
    return Arrow(f.dom, cod, f.fn, f.label)


# -- equality ---------------------------------------------------------------


@dataclass(frozen=True)
class Comparison:
    """Outcome of a bounded extensional comparison; truthy iff equal."""

    equal: bool
    counterexample: Any = None
    checked: int = 0
    truncated: bool = False

    def __bool__(self):
        return self.equal


def arrows_equal(f: Arrow, g: Arrow, budget: Budget = DEFAULT_BUDGET) -> Comparison:
    """Compare ``f`` and ``g`` on every enumerated element of their domain.

    On disagreement the least counterexample in enumeration order is
    reported as ``(input, f(input), g(input))``.
    """
    if f.dom != g.dom or f.cod != g.cod:
        raise StructuralError(
            f"arrows are not parallel: {f!r} versus {g!r}"
        )
    elems = enumerate_obj(f.dom, budget)
    for n, e in enumerate(elems):
        a, b = f(e), g(e)
        if a != b:
            return Comparison(False, (e, a, b), n + 1, elems.truncated)
    return Comparison(True, None, len(elems), elems.truncated)


# -- limits -----------------------------------------------------------------


@dataclass(frozen=True)
class Equalizer:
    obj: Sub
    inclusion: Arrow
    f: Arrow
    g: Arrow

    def mediate(self, h: Arrow, budget: Budget = DEFAULT_BUDGET) -> Arrow:
        """The unique factorisation of ``h`` through the equaliser."""
        if not conforms(h.cod, self.obj.base):
            raise StructuralError(f"{h!r} does not land in {self.obj.base!r}")
        for e in enumerate_obj(h.dom, budget):
            y = h(e)
            if self.f(y) != self.g(y):
                raise ConeError(
                    f"{h.label or 'arrow'} does not equalise at {format_elem(e)}: "
                    f"{format_elem(self.f(y))} != {format_elem(self.g(y))}",
                    e,
                )
        return Arrow(h.dom, self.obj, h.fn, h.label)


def equalizer_obj(f: Arrow, g: Arrow, name: str = "") -> Equalizer:
    if f.dom != g.dom or f.cod != g.cod:
        raise StructuralError(f"equaliser of non-parallel arrows {f!r}, {g!r}")
    obj = Sub(f.dom, f, g, name)
    return Equalizer(obj, Arrow(obj, f.dom, lambda e: e, "incl"), f, g)


@dataclass(frozen=True)
class Pullback:
    obj: Sub
    pi1: Arrow
    pi2: Arrow
    f: Arrow
    g: Arrow

    def mediate(self, p: Arrow, q: Arrow, budget: Budget = DEFAULT_BUDGET) -> Arrow:
        """``<p, q>`` into the pullback, checked on enumerated inputs."""
        if p.dom != q.dom:
            raise StructuralError(f"cone legs have domains {p.dom!r} and {q.dom!r}")
        for e in enumerate_obj(p.dom, budget):
            a, b = p(e), q(e)
            if self.f(a) != self.g(b):
                raise ConeError(
                    f"cone does not commute at {format_elem(e)}: "
                    f"{format_elem(self.f(a))} != {format_elem(self.g(b))}",
                    e,
                )
        pf, qf = p.fn, q.fn
        return Arrow(p.dom, self.obj, lambda e: (pf(e), qf(e)), f"<{p.label}, {q.label}>")


def pullback_obj(f: Arrow, g: Arrow, name: str = "") -> Pullback:
    if f.cod != g.cod:
        raise StructuralError(f"pullback of arrows with codomains {f.cod!r}, {g.cod!r}")
    base = Prod((f.dom, g.dom))
    ff, gf = f.fn, g.fn
    lhs = Arrow(base, f.cod, lambda e: ff(e[0]), f"{f.label}.pi1")
    rhs = Arrow(base, g.cod, lambda e: gf(e[1]), f"{g.label}.pi2")
    obj = Sub(base, lhs, rhs, name)
    return Pullback(
        obj,
        Arrow(obj, f.dom, lambda e: e[0], "pi1"),
        Arrow(obj, g.dom, lambda e: e[1], "pi2"),
        f,
        g,
    )


# -- case analysis ----------------------------------------------------------


def case_merge(
    parts: Sequence[tuple[Arrow, Arrow]], budget: Budget = DEFAULT_BUDGET
) -> Arrow:
    """Glue branches defined on sub-objects that partition a common carrier.

    ``parts`` is a list of ``(inclusion S_i -> A, branch S_i -> Y)``.  The
    partition is checked on every enumerated element of ``A``; at call time
    the unique containing part selects the branch.
    """
    if not parts:
        raise CoverageError("no parts given")
    carrier = parts[0][0].cod
    cod = parts[0][1].cod
    for inc, branch in parts:
        if inc.cod != carrier:
            raise StructuralError(f"inclusions land in {inc.cod!r} and {carrier!r}")
        if branch.cod != cod:
            raise StructuralError(f"branches land in {branch.cod!r} and {cod!r}")
        if inc.dom != branch.dom:
            raise StructuralError(f"branch domain {branch.dom!r} is not {inc.dom!r}")
        if not conforms(inc.dom, carrier):
            raise StructuralError(f"{inc.dom!r} is not a sub-object of {carrier!r}")
    subs = [inc.dom for inc, _ in parts]
    branches = [b.fn for _, b in parts]

    def owners(a):
        return [i for i, s in enumerate(subs) if elem_has_type(a, s, budget)]

    bad = []
    for a in enumerate_obj(carrier, budget):
        if len(owners(a)) != 1:
            bad.append(a)
    if bad:
        raise CoverageError(
            f"parts do not partition {carrier!r}; first bad element "
            f"{format_elem(bad[0])} ({len(bad)} total)",
            bad,
        )

    def run(a):
        owner = owners(a)
        if len(owner) != 1:
            raise CoverageError(f"{format_elem(a)} lies in {len(owner)} parts", [a])
        return branches[owner[0]](a)

    return Arrow(carrier, cod, run, "cases(" + ", ".join(b.label for _, b in parts) + ")")


# -- brute force over small hom-sets ---------------------------------------


def all_functions(domain: Sequence[Any], codomain: Sequence[Any]) -> Iterable[dict]:
    """Every function between two finite lists of elements, as dicts."""
    domain = list(domain)
    for values in itertools.product(list(codomain), repeat=len(domain)):
        yield dict(zip(domain, values))


def table_arrow(dom: ObjExpr, cod: ObjExpr, table: dict, label: str = "table") -> Arrow:
    """An arrow given by a finite lookup table."""
    return Arrow(dom, cod, table.__getitem__, label)
