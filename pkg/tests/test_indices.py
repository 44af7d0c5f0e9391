import pytest
from hypothesis import given

from treespace.fragmentation import TemplateMarking
from treespace.indices import (NotPresentableError, cb_closed_form, cb_derive, cb_rank,
                               interval_type, ordinal_index, point_to_ordinal, tree_of_interval)
from treespace.ordinal import OMEGA, ONE, ZERO, Ordinal, leading, omega_pow, parse
from treespace.oracles import oracle_cb_iteration, oracle_ordinal_index, point_to_ordinal_violations
from treespace.presentation import PointAddress, TreePresentation, cantor_tree, leaf, node
from trees import LEAF, T1, T1_NODE, T2, finite_child_tree, instances, ordinals


def test_ordinal_index_examples():
    assert ordinal_index(LEAF) == 1
    assert ordinal_index(T1) == 2 == oracle_ordinal_index(T1)
    assert ordinal_index(T2) == 3 == oracle_ordinal_index(T2)


def test_interval_type_examples():
    assert interval_type(LEAF) == ZERO
    assert point_to_ordinal(LEAF, PointAddress(0)) == ZERO
    assert interval_type(T1) == OMEGA
    assert point_to_ordinal(T1, PointAddress(0)) == OMEGA
    for n in range(5):
        assert point_to_ordinal(T1, PointAddress(0, ((0, n),))) == n
    assert interval_type(T2) == parse("w^(2)")


def test_interval_type_finite_children_and_forests():
    # two closed blocks [0,w] then the omega block of single points: (w+1)*2 + w
    p = TreePresentation((node((T1_NODE, 2), (leaf(), "omega")),))
    assert interval_type(p) == parse("w*3")
    q = TreePresentation((node((leaf(), 1), (T1_NODE, "omega")),))
    assert interval_type(q) == parse("w^(2)")
    assert interval_type(TreePresentation((T1_NODE, T1_NODE, leaf()))) == parse("w*2+1")
    assert interval_type(TreePresentation((node((leaf(), 3)),))) == Ordinal.of(3)


@pytest.mark.parametrize("text", ["0", "1", "w", "w*2+3", "w^(2)", "w^(3)*2+w^(2)+w+5", "w^(2)*3+1"])
def test_tree_of_interval_roundtrip(text):
    beta = parse(text)
    assert interval_type(tree_of_interval(beta)) == beta


def test_tree_of_interval_rejects_large():
    with pytest.raises(NotPresentableError, match="not presentable in regular class"):
        tree_of_interval(omega_pow(OMEGA))


def test_cb_rank_examples():
    assert cb_rank(LEAF) == (ONE, 1)
    assert cb_rank(T1) == (Ordinal.of(2), 1)
    assert cb_rank(TreePresentation((T1_NODE,) * 3)) == (Ordinal.of(2), 3)
    assert oracle_cb_iteration(TreePresentation((T1_NODE,) * 3)) == (2, 3)


def test_cb_closed_form_finite_intervals():
    # [0, n] is n+1 isolated points
    assert cb_closed_form(Ordinal.of(2)) == (ONE, 3)
    assert oracle_cb_iteration(TreePresentation((node((leaf(), 2)),))) == (1, 3)


def test_cb_derive_examples():
    full = TemplateMarking.full(T1)
    assert cb_derive(full).marked == {(0,)}
    assert not cb_derive(TemplateMarking(T1, {(0,)}))
    assert not cb_derive(TemplateMarking.empty(T1))


# -- properties -----------------------------------------------------------------------

@given(instances(max_depth=4))
def test_cb_rank_at_most_ordinal_index(inst):
    p, _ = inst
    rank, _ = cb_rank(p)
    assert not ordinal_index(p) < rank


@given(instances(max_depth=4))
def test_interval_type_bounded_by_omega_power(inst):
    p, _ = inst
    assert not omega_pow(ordinal_index(p)) < interval_type(p)


@given(instances(max_depth=4))
def test_ordinal_index_matches_oracle(inst):
    p, _ = inst
    assert ordinal_index(p) == oracle_ordinal_index(p, 2)


@given(ordinals(nested=0))
def test_roundtrip_and_closed_form(beta):
    t = tree_of_interval(beta)
    assert interval_type(t) == beta
    rank, count = cb_rank(t)
    if beta.is_finite():
        assert (rank, count) == (ONE, beta.to_int() + 1)
    else:
        e, c = leading(beta)
        assert (rank, count) == (e + 1, c)
    assert oracle_cb_iteration(t) == (rank.to_int(), count)


@given(instances(max_depth=4))
def test_cb_iteration_matches_rank(inst):
    p, _ = inst
    rank, count = cb_rank(p)
    assert oracle_cb_iteration(p) == (rank.to_int(), count)


@given(instances(max_depth=3, max_points=60))
def test_point_to_ordinal_is_embedding(inst):
    p, _ = inst
    assert point_to_ordinal_violations(p, 2) == []


def test_point_to_ordinal_embedding_examples():
    for p in (T1, T2, finite_child_tree(), cantor_tree(3)):
        assert point_to_ordinal_violations(p, 3) == []
