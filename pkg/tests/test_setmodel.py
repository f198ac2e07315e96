import pytest
from hypothesis import given, strategies as st

from polylist.arith import SUCC, pred, monus
from polylist.polyadj import E, PI2_E
from polylist.listobj import ListOps, map_list
from polylist.setmodel import (
    NAT,
    NIL,
    STAR,
    UNIT,
    Arrow,
    Budget,
    ConeError,
    CoverageError,
    FinSet,
    ListOf,
    Prod,
    Seq,
    StructuralError,
    Sub,
    all_functions,
    arrows_equal,
    case_merge,
    compose,
    constant,
    elem_has_type,
    enumerate_obj,
    equalizer_obj,
    format_elem,
    identity,
    pairing,
    par,
    prod,
    proj,
    pullback_obj,
    table_arrow,
    terminal_map,
)

NN = Prod((NAT, NAT))


def test_prod_canonical():
    assert prod() == UNIT
    assert prod(NAT) == NAT
    assert prod(NAT, NAT) == NN
    with pytest.raises(ValueError):
        Prod((NAT,))


def test_enumerate_nat():
    assert enumerate_obj(NAT, Budget(nat_max=3)) == [0, 1, 2, 3]


def test_enumerate_list_of_unit():
    got = enumerate_obj(ListOf(UNIT), Budget(len_max=2))
    assert got == [Seq(), Seq((STAR,)), Seq((STAR, STAR))]
    assert [format_elem(e) for e in got] == ["[]", "[*]", "[*,*]"]


def test_enumerate_E():
    assert enumerate_obj(E, Budget(nat_max=2)) == [(0, 1), (0, 2), (1, 2)]


def test_enumerate_order_and_truncation(X2):
    ls = enumerate_obj(ListOf(X2), Budget(len_max=2))
    assert [format_elem(l) for l in ls] == ["[]", "[a]", "[b]", "[a,a]", "[a,b]", "[b,a]", "[b,b]"]
    capped = enumerate_obj(NAT, Budget(nat_max=10, card_cap=4))
    assert capped == [0, 1, 2, 3] and capped.truncated
    assert not enumerate_obj(NAT, Budget(nat_max=3)).truncated


def test_empty_finset_lists():
    X0 = FinSet((), "X")
    assert enumerate_obj(ListOf(X0), Budget(len_max=3)) == [NIL]
    assert enumerate_obj(X0) == []


def test_enumeration_deterministic_and_duplicate_free(X2):
    obj = Prod((NAT, ListOf(X2)))
    first = enumerate_obj(obj, Budget(nat_max=3, len_max=2))
    assert first == enumerate_obj(obj, Budget(nat_max=3, len_max=2))
    assert len(set(first)) == len(first)


def test_elem_has_type():
    assert elem_has_type(2, NAT)
    assert not elem_has_type((0, 0), E)
    assert elem_has_type((0, 1), E)
    assert not elem_has_type(Seq((STAR, STAR)), ListOf(NAT))
    assert not elem_has_type(True, NAT)
    assert not elem_has_type((1, 2), ListOf(NAT))


def test_seq_is_not_tuple():
    assert Seq((1, 2)) != (1, 2)
    assert hash(Seq((1, 2))) != hash((1, 2)) or Seq((1, 2)) != (1, 2)


def test_identity_and_pairing():
    f = Arrow(NAT, NAT, lambda n: 2 * n, "double")
    b = Budget(nat_max=6)
    assert arrows_equal(compose(identity(NAT), f), f, b)
    assert arrows_equal(compose(f, identity(NAT)), f, b)
    assert pairing(proj(NN, 0), proj(NN, 1))((3, 5)) == (3, 5)
    assert par(SUCC, pred)((2, 2)) == (3, 1)


def test_compose_mismatch_names_objects(X2):
    f = Arrow(X2, X2, lambda x: x, "f")
    with pytest.raises(StructuralError, match="N"):
        compose(f, SUCC)


def test_pairing_domain_mismatch(X2):
    with pytest.raises(StructuralError):
        pairing(SUCC, identity(X2))


def test_arrows_equal_counterexample():
    cmp = arrows_equal(SUCC, pred, Budget(nat_max=3))
    assert not cmp
    assert cmp.counterexample == (0, 1, 0)


def test_arrows_equal_not_parallel(X2):
    with pytest.raises(StructuralError):
        arrows_equal(SUCC, identity(X2))


def test_len_natural_under_map(X2):
    Y = FinSet(("u", "v", "w"), "Y")
    f = table_arrow(X2, Y, {"a": "w", "b": "w"})
    lx, ly = ListOps.standard(X2).len, ListOps.standard(Y).len
    assert arrows_equal(compose(ly, map_list(f)), lx, Budget(len_max=3))


def test_equalizer_E_and_mediate():
    lhs = Arrow(NN, NAT, lambda e: monus(SUCC(e[0]), e[1]), "s(m)-n")
    eq = equalizer_obj(lhs, constant(NN, NAT, 0))
    b = Budget(nat_max=3)
    assert enumerate_obj(eq.obj, b) == enumerate_obj(E, b)
    m = eq.mediate(constant(UNIT, NN, (0, 1)), b)
    assert m.cod == eq.obj and m(STAR) == (0, 1)
    assert arrows_equal(compose(eq.inclusion, m), constant(UNIT, NN, (0, 1)), b)
    with pytest.raises(ConeError):
        eq.mediate(constant(UNIT, NN, (1, 1)), b)


def test_equalizer_of_equal_arrows_is_everything():
    eq = equalizer_obj(SUCC, SUCC)
    b = Budget(nat_max=5)
    assert enumerate_obj(eq.obj, b) == enumerate_obj(NAT, b)


def test_equalizer_mediate_unique_small():
    # every arrow 1 -> {m,n | m<n} at nat_max=2 that factors h is h itself
    lhs = Arrow(NN, NAT, lambda e: monus(SUCC(e[0]), e[1]), "lt")
    eq = equalizer_obj(lhs, constant(NN, NAT, 0))
    b = Budget(nat_max=2)
    h = constant(UNIT, NN, (1, 2))
    med = eq.mediate(h, b)
    candidates = [
        t for t in all_functions([STAR], enumerate_obj(eq.obj, b))
        if eq.inclusion(t[STAR]) == h(STAR)
    ]
    assert candidates == [{STAR: med(STAR)}]


def test_pullback_diagonal():
    pb = pullback_obj(identity(NAT), identity(NAT))
    b = Budget(nat_max=3)
    assert enumerate_obj(pb.obj, b) == [(n, n) for n in range(4)]


def test_pullback_contains_example(X2):
    ln = ListOps.standard(X2).len
    pb = pullback_obj(PI2_E, ln)
    assert elem_has_type(((1, 2), Seq(("a", "b"))), pb.obj, Budget())
    assert not elem_has_type(((1, 3), Seq(("a", "b"))), pb.obj, Budget())


@given(st.lists(st.integers(0, 4), min_size=0, max_size=4))
def test_pullback_cardinality(lengths):
    A = FinSet(tuple(f"p{i}" for i in range(len(lengths))), "A")
    l = table_arrow(A, NAT, dict(zip(A.elements, lengths)), "l")
    pb = pullback_obj(PI2_E, l)
    assert len(enumerate_obj(pb.obj, Budget(nat_max=4))) == sum(lengths)


def test_pullback_mediate():
    pb = pullback_obj(identity(NAT), identity(NAT))
    b = Budget(nat_max=3)
    m = pb.mediate(identity(NAT), identity(NAT), b)
    assert m(2) == (2, 2)
    with pytest.raises(ConeError):
        pb.mediate(identity(NAT), SUCC, b)


def test_case_merge_partition():
    b = Budget(nat_max=5)
    zero = Sub(NAT, identity(NAT), constant(NAT, NAT, 0), "zero")
    pos = Sub(NAT, Arrow(NAT, NAT, lambda n: monus(1, n), "1-n"), constant(NAT, NAT, 0), "pos")
    f = case_merge([
        (Arrow(zero, NAT, lambda n: n, "i0"), constant(zero, NAT, 100)),
        (Arrow(pos, NAT, lambda n: n, "i1"), Arrow(pos, NAT, lambda n: n * 10)),
    ], b)
    assert [f(n) for n in range(4)] == [100, 10, 20, 30]


def test_case_merge_single_part():
    b = Budget(nat_max=3)
    whole = Sub(NAT, identity(NAT), identity(NAT), "all")
    f = case_merge([(Arrow(whole, NAT, lambda n: n), Arrow(whole, NAT, lambda n: n + 1))], b)
    assert [f(n) for n in range(4)] == [1, 2, 3, 4]


def test_case_merge_overlap():
    b = Budget(nat_max=3)
    geq0 = Sub(NAT, Arrow(NAT, NAT, lambda n: monus(0, n)), constant(NAT, NAT, 0), "ge0")
    leq = Sub(NAT, Arrow(NAT, NAT, lambda n: monus(n, 3)), constant(NAT, NAT, 0), "le3")
    with pytest.raises(CoverageError) as info:
        case_merge([
            (Arrow(geq0, NAT, lambda n: n), constant(geq0, NAT, 0)),
            (Arrow(leq, NAT, lambda n: n), constant(leq, NAT, 1)),
        ], b)
    assert info.value.witnesses[0] == 0


def test_sub_rejects_mismatched_codomains(X2):
    with pytest.raises(StructuralError):
        Sub(NAT, identity(NAT), terminal_map(NAT))


def test_budget_nonnegative():
    with pytest.raises(ValueError):
        Budget(nat_max=-1)


def test_truncation_propagates_from_components():
    from polylist.setmodel import NAT, Budget, ListOf, enumerate_obj, prod
    b = Budget(nat_max=5, len_max=1, card_cap=3)
    assert enumerate_obj(NAT, b).truncated
    assert enumerate_obj(prod(NAT, NAT), Budget(nat_max=5, card_cap=100)).truncated is False
    assert enumerate_obj(ListOf(NAT), Budget(nat_max=5, len_max=0, card_cap=3)).truncated
