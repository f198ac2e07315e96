import pytest
from hypothesis import given, settings, strategies as st

from polylist.listobj import PreconditionError, map_list
from polylist.polyadj import (
    E,
    PI2_E,
    Instance,
    InstanceError,
    brute_force_solutions,
    candidate_count,
    construct_h,
    default_term,
    e_times,
    extend_to_total,
    generate_instances,
    id_times_f,
    lists_agree_elementwise,
    make_E,
    nth_arrow,
    nth_value,
    uniqueness_by_theory,
    verify_solution,
)
from polylist.setmodel import (
    NAT,
    NIL,
    Arrow,
    Budget,
    BudgetError,
    ConeError,
    FinSet,
    ListOf,
    Seq,
    arrows_equal,
    enumerate_obj,
)

X2 = FinSet(("a", "b"), "X")
A3 = FinSet(("p", "q", "r"), "A")


def sample():
    return Instance(X2, A3, {"p": 2, "q": 0, "r": 1}, {(0, "p"): "a", (1, "p"): "b", (0, "r"): "a"})


def with_h(inst, table):
    return Arrow(inst.A, ListOf(inst.X), lambda a: Seq(table[a]), "h?")


def test_E_elements():
    obj, pi2 = make_E()
    assert obj is E and pi2 is PI2_E
    assert sorted(enumerate_obj(E, Budget(nat_max=3))) == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    assert PI2_E((1, 3)) == 3


def test_E_fibers_have_n_elements():
    es = enumerate_obj(E, Budget(nat_max=6))
    for n in range(7):
        assert sum(1 for e in es if e[1] == n) == n


def test_etimes_context_roundtrip():
    inst = sample()
    et = e_times(inst.l_A)
    b = inst.budget()
    pts = enumerate_obj(et.pullback, Budget(nat_max=2))
    assert sorted(map(et.iso_to, pts)) == sorted(enumerate_obj(et.context, b))
    for p in pts:
        assert et.iso_from(et.iso_to(p)) == p
    assert sorted(et.enumerate(b)) == sorted(pts)


def test_etimes_empty_when_lengths_zero():
    inst = Instance(X2, A3, {"p": 0, "q": 0, "r": 0}, {})
    assert inst.etimes.enumerate(Budget(nat_max=3)) == []


def test_etimes_requires_nat_codomain():
    with pytest.raises(Exception):
        e_times(Arrow(A3, X2, lambda a: "a"))


def test_id_times_f():
    inst = sample()
    ident = Arrow(A3, A3, lambda a: a, "id")
    f = id_times_f(ident, inst.l_A, inst.l_A, inst.budget())
    for e in inst.etimes.enumerate(inst.budget()):
        assert f(e) == e
    B = FinSet(("u", "v"), "B")
    l_B = Arrow(B, NAT, {"u": 2, "v": 0}.__getitem__, "lB")
    to_b = Arrow(A3, B, {"p": "u", "q": "v", "r": "v"}.__getitem__, "f")
    with pytest.raises(ConeError) as info:
        id_times_f(to_b, inst.l_A, l_B, inst.budget())
    assert info.value.witness == "r"


def test_default_and_nth():
    assert default_term(X2)((1, Seq("ab"))) == "a"
    assert nth_value(X2, 0, Seq("ba")) == "b"
    assert nth_value(X2, 1, Seq("ba")) == "a"
    with pytest.raises(PreconditionError):
        nth_value(X2, 2, Seq("ba"))
    nth = nth_arrow(X2)
    assert nth(((2, 3), Seq("abb"))) == "b"


def test_nth_naturality():
    X3 = FinSet(("x", "y", "z"), "Y")
    f = Arrow(X2, X3, {"a": "z", "b": "x"}.__getitem__, "f")
    lmap = map_list(f)
    for l in enumerate_obj(ListOf(X2), Budget(len_max=3)):
        for m in range(len(l)):
            assert nth_value(X3, m, lmap(l)) == f(nth_value(X2, m, l))


def test_extend_to_total_clamps():
    inst = sample()
    g2 = extend_to_total(inst)
    assert [g2((m, "p")) for m in range(5)] == ["a", "b", "b", "b", "b"]
    assert [g2((m, "r")) for m in range(4)] == ["a"] * 4


def test_construct_h_sample():
    inst = sample()
    h = construct_h(inst)
    assert [h(a) for a in "pqr"] == [Seq("ab"), NIL, Seq("a")]
    assert verify_solution(inst, h).passed


def test_verify_detects_wrong_entry():
    inst = sample()
    rep = verify_solution(inst, with_h(inst, {"p": "aa", "q": "", "r": "a"}))
    assert rep["len-equation"].passed
    assert not rep["g-equation"].passed
    assert rep["g-equation"].counterexample == (1, "p")


def test_verify_detects_wrong_length():
    inst = sample()
    rep = verify_solution(inst, with_h(inst, {"p": "ab", "q": "b", "r": "a"}))
    assert not rep["len-equation"].passed
    assert rep["len-equation"].counterexample == "q"
    assert not rep.passed


def test_brute_force_sample():
    inst = sample()
    assert candidate_count(inst) == 8
    sols = brute_force_solutions(inst)
    assert len(sols) == 1
    assert arrows_equal(sols[0], construct_h(inst), inst.budget())


def test_brute_force_all_zero():
    inst = Instance(X2, A3, {"p": 0, "q": 0, "r": 0}, {})
    sols = brute_force_solutions(inst)
    assert len(sols) == 1 and all(sols[0](a) == NIL for a in "pqr")


def test_brute_force_budget():
    inst = sample()
    with pytest.raises(BudgetError) as info:
        brute_force_solutions(inst, inst.budget(card_cap=4))
    assert info.value.size == 8


def test_empty_X_positive_length_impossible():
    X0 = FinSet((), "X")
    with pytest.raises(InstanceError):
        Instance(X0, A3, {"p": 1, "q": 0, "r": 0}, {})


def test_uniqueness_stages():
    inst = sample()
    h = construct_h(inst)
    rep = uniqueness_by_theory(inst, h, brute_force_solutions(inst)[0])
    assert [r.law_id for r in rep] == [
        "stage1-nthDef-agreement", "stage2-parameterised-equality", "stage3-equality"
    ]
    assert rep.passed


def test_uniqueness_requires_solutions():
    inst = sample()
    with pytest.raises(PreconditionError):
        uniqueness_by_theory(inst, construct_h(inst), with_h(inst, {"p": "bb", "q": "", "r": "a"}))


@pytest.mark.parametrize("lengths,g,msg", [
    ({"p": 1, "q": 0}, {(0, "p"): "a"}, "no length"),
    ({"p": 1, "q": 0, "r": 0}, {}, "missing"),
    ({"p": 1, "q": 0, "r": 0}, {(0, "p"): "a", (1, "p"): "a"}, "outside"),
    ({"p": 1, "q": 0, "r": 0}, {(0, "p"): "z"}, "not in X"),
    ({"p": -1, "q": 0, "r": 0}, {}, "natural"),
])
def test_instance_validation(lengths, g, msg):
    with pytest.raises(InstanceError, match=msg):
        Instance(X2, A3, lengths, g)


def test_generate_instances_count():
    # |X| = 2, |A| = 2, lengths <= 2: sum over (l1, l2) of 2^(l1+l2) = 7^2
    assert sum(1 for _ in generate_instances(2, 2, 2)) == 49


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_random_instances_solved_uniquely(data):
    k = data.draw(st.integers(1, 3))
    X = FinSet(tuple("abc"[:k]), "X")
    lengths = {a: data.draw(st.integers(0, 3)) for a in A3.elements}
    g = {(m, a): data.draw(st.sampled_from(X.elements)) for a in A3.elements for m in range(lengths[a])}
    inst = Instance(X, A3, lengths, g)
    h = construct_h(inst)
    assert [len(h(a)) for a in A3.elements] == [lengths[a] for a in A3.elements]
    assert all(h(a)[m] == g[(m, a)] for (m, a) in g)
    sols = brute_force_solutions(inst)
    assert len(sols) == 1
    assert lists_agree_elementwise(X, h, sols[0], inst.budget())
