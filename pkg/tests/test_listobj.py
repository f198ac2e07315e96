import itertools
import random

import pytest
from hypothesis import given, strategies as st

from polylist import arith
from polylist.arith import SUCC
from polylist.listobj import (
    ListOps,
    PreconditionError,
    atoms,
    cons,
    decompose_nonempty,
    list_build,
    list_kit,
    list_rec,
    map_list,
    run_list_laws,
    seq_build,
)
from polylist.setmodel import (
    NAT,
    NIL,
    STAR,
    UNIT,
    Arrow,
    Budget,
    FinSet,
    ListOf,
    Prod,
    Seq,
    StructuralError,
    arrows_equal,
    compose,
    constant,
    enumerate_obj,
    identity,
    table_arrow,
)


def L(*xs):
    return Seq(xs)


@pytest.fixture
def ops(X3):
    return ListOps.standard(X3)


def test_basic_arrows(ops):
    assert ops.len(L("a", "b", "c")) == 3
    assert ops.tail(2, L("a", "b", "c")) == L("c")
    assert ops.zeroth_def("a", NIL) == "a"
    assert ops.nth_def("a", 1, L("a", "b", "c")) == "b"
    assert ops.nth_def("c", 5, L("a", "b")) == "c"
    assert ops.nth_def("c", 0, NIL) == "c"
    assert ops.concat(L("a"), L("b", "c")) == L("a", "b", "c")
    assert ops.concat(NIL, L("b")) == L("b")
    assert ops.singleton("a") == L("a")


def test_nth_def_positional_oracle(X2):
    ops = ListOps.standard(X2)
    for l in enumerate_obj(ListOf(X2), Budget(len_max=4)):
        for n in range(6):
            for x in X2.elements:
                assert ops.nth_def(x, n, l) == (l[n] if n < len(l) else x)


def test_list_rec_len():
    X = FinSet(("a", "b"), "X")
    LX = ListOf(X)
    ln = list_rec(arith.ZERO, Arrow(Prod((X, LX, NAT)), NAT, lambda e: SUCC(e[2])))
    assert ln(L("a", "b", "a")) == 3


def test_list_rec_parameterised_base():
    X = FinSet(("a", "b"), "X")
    LX = ListOf(X)
    f = list_rec(identity(NAT), Arrow(Prod((NAT, X, LX, NAT)), NAT, lambda e: e[3] + 1))
    assert f(7, NIL) == 7
    assert f(7, L("a", "b")) == 9


def test_list_rec_returns_rest_on_singletons():
    X = FinSet(("a", "b"), "X")
    LX = ListOf(X)
    trish = list_rec(identity(LX), Arrow(Prod((LX, X, LX, LX)), LX, lambda e: e[2]))
    for x in X.elements:
        assert trish(L("b"), L(x)) == NIL


def test_list_rec_bad_step():
    X = FinSet(("a",), "X")
    with pytest.raises(StructuralError):
        list_rec(arith.ZERO, Arrow(Prod((X, NAT)), NAT, lambda e: 0))


def test_list_rec_unique_micro():
    # all maps L(X)_{<=2} -> B satisfying the two equations, |X| = 1, |B| = 3
    X = FinSet(("a",), "X")
    B = FinSet(("u", "v", "w"), "B")
    LX = ListOf(X)
    rng = random.Random(4)
    ls = list(enumerate_obj(LX, Budget(len_max=2)))
    g0 = rng.choice(B.elements)
    step = {(x, l, b): rng.choice(B.elements) for x in X.elements for l in ls for b in B.elements}
    f = list_rec(constant(UNIT, B, g0), Arrow(Prod((X, LX, B)), B, step.__getitem__))
    sols = []
    for values in itertools.product(B.elements, repeat=len(ls)):
        t = dict(zip(ls, values))
        if t[NIL] == g0 and all(t[cons(x, l)] == step[(x, l, t[l])] for l in ls[:-1] for x in X.elements):
            sols.append(t)
    assert len(sols) == 1
    assert all(f(l) == b for l, b in sols[0].items())


def test_map_list():
    m = map_list(SUCC)
    assert m(L(1, 2)) == L(2, 3)
    assert m(NIL) == NIL


def test_map_identity(X2):
    assert arrows_equal(map_list(identity(X2)), identity(ListOf(X2)), Budget(len_max=3))


@given(st.lists(st.sampled_from("ab"), max_size=4), st.lists(st.sampled_from("ab"), max_size=4))
def test_len_concat(l1, l2):
    ops = ListOps.standard(FinSet(("a", "b"), "X"))
    assert ops.len(ops.concat(Seq(l1), Seq(l2))) == len(l1) + len(l2)


def test_decompose():
    assert decompose_nonempty(L("a", "b")) == ("a", L("b"))
    assert decompose_nonempty(L("c")) == ("c", NIL)
    with pytest.raises(PreconditionError):
        decompose_nonempty(NIL)


def test_list_kit_coproduct(X2):
    kit = list_kit(X2)
    for l in enumerate_obj(ListOf(X2), Budget(len_max=3)):
        if l:
            x, rest = decompose_nonempty(l)
            assert kit.cons(x, rest) == l


def test_seq_and_list_build():
    f = Arrow(Prod((NAT, UNIT)), NAT, lambda e: e[0], "f")
    p = constant(UNIT, NAT, 3, "3")
    ops = ListOps.standard(NAT)
    assert list_build(f, p, ops)(STAR) == L(0, 1, 2)
    assert list_build(f, constant(UNIT, NAT, 0), ops)(STAR) == NIL
    assert seq_build(f, ops)(1, 2, STAR) == L(1, 2)


def test_list_build_wrong_p(X2):
    f = Arrow(Prod((NAT, UNIT)), X2, lambda e: "a")
    with pytest.raises(StructuralError):
        list_build(f, constant(NAT, NAT, 1))


def test_H_and_A(X2):
    ops = ListOps.standard(X2)
    H, A = ops.build_H, ops.build_A
    assert H("a", 0, L("a", "b")) == NIL
    l = L("a", "b", "b")
    assert H("a", 3, l) == l
    assert A("a", 3, l, L("b")) == L("b")
    for k in range(4):
        assert H("a", k + 1, l) == A("a", k, l, H("a", k, l))


@pytest.mark.parametrize("card", [0, 1, 2])
def test_list_laws_pass(card):
    r = run_list_laws(Budget(nat_max=4, len_max=3, seed=3), card_x=card)
    assert r.passed, [x.line() for x in r.failures()]


def test_tail_mutant_caught():
    X = atoms(2)
    ops = ListOps.standard(X)
    good = ops.tail.fn
    bad = Arrow(ops.tail.dom, ops.tail.cod, lambda e: good((arith.pred(e[0]), e[1])), "tail_mut")
    r = run_list_laws(Budget(nat_max=4, len_max=3), card_x=2, ops=ops.replace(tail=bad))
    failed = {x.law_id for x in r.failures()}
    assert "list.lenIterTr[X=2]" in failed
    assert r["list.lenIterTr[X=2]"].counterexample is not None


def test_naturality_of_nth_def(X2):
    Y = FinSet(("u", "v", "w"), "Y")
    rng = random.Random(0)
    ox, oy = ListOps.standard(X2), ListOps.standard(Y)
    for _ in range(20):
        f = table_arrow(X2, Y, {x: rng.choice(Y.elements) for x in X2.elements})
        Lf = map_list(f)
        for x in X2.elements:
            for m in range(4):
                for l in enumerate_obj(ListOf(X2), Budget(len_max=3)):
                    assert oy.nth_def(f(x), m, Lf(l)) == f(ox.nth_def(x, m, l))


def test_functor_composition(X2):
    Y = FinSet(("u", "v"), "Y")
    f = table_arrow(X2, Y, {"a": "v", "b": "v"})
    g = table_arrow(Y, X2, {"u": "a", "v": "b"})
    assert arrows_equal(map_list(compose(g, f)), compose(map_list(g), map_list(f)), Budget(len_max=3))
