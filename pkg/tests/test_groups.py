import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hlgt.errors import NotAGroup, NotAHom, NotAnAction, OrderCapExceeded
from hlgt.groups import (action_from_spec, conjugacy_classes, cyclic, direct_product, group_from_generators,
                         group_from_spec, group_from_table, hom_from_spec, symmetric, trivial_group,
                         z2_multiplicative)


def small_groups():
    return st.sampled_from([
        trivial_group(), cyclic(2), cyclic(3), cyclic(5), z2_multiplicative(), symmetric(3),
        direct_product(cyclic(2), cyclic(2)), direct_product(symmetric(3), cyclic(2)), symmetric(4),
    ])


def test_cyclic_table():
    G = group_from_spec({"name": "Z3", "table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]]})
    assert G.order == 3 and G.identity == 0
    assert G.mul(2, 2) == 1 and G.inv(1) == 2


def test_trivial_table():
    assert group_from_table([[0]]).order == 1


def test_missing_inverse_rejected():
    with pytest.raises(NotAGroup):
        group_from_table([[0, 1], [1, 1]])


def test_non_latin_square_reports_row():
    with pytest.raises(NotAGroup, match="row 1"):
        group_from_table([[0, 1, 2], [1, 1, 0], [2, 0, 1]])


def test_associativity_failure_reports_triple():
    # Latin square with identity 0 that is not associative (order 5 loop)
    t = [[0, 1, 2, 3, 4],
         [1, 0, 3, 4, 2],
         [2, 4, 0, 1, 3],
         [3, 2, 4, 0, 1],
         [4, 3, 1, 2, 0]]
    with pytest.raises(NotAGroup, match="associativity fails for triple"):
        group_from_table(t)


def test_order_cap():
    with pytest.raises(OrderCapExceeded):
        cyclic(513)


def test_generators_closure_order():
    S3 = group_from_spec({"name": "S3", "degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]})
    assert S3.order == 6
    assert S3.perms[0] == (0, 1, 2)
    assert symmetric(4).order == 24


def test_generator_numbering_is_reproducible():
    a = group_from_generators([[1, 0, 2], [1, 2, 0]])
    b = group_from_generators([[1, 0, 2], [1, 2, 0]])
    assert a.perms == b.perms and np.array_equal(a.table, b.table)


def test_conjugacy_classes_examples():
    assert conjugacy_classes(cyclic(3)) == [(0,), (1,), (2,)]
    assert conjugacy_classes(cyclic(2)) == [(0,), (1,)]
    assert [len(c) for c in conjugacy_classes(symmetric(3))] == [1, 3, 2]


def test_conjugacy_classes_match_brute_force():
    S3 = symmetric(3)
    pairs = {(x, S3.conj(g, x)) for g in range(6) for x in range(6)}
    for cls in conjugacy_classes(S3):
        for x in cls:
            assert {y for (a, y) in pairs if a == x} == set(cls)


def test_hom_examples():
    Z3, Z2 = cyclic(3), z2_multiplicative()
    hom_from_spec(Z3, Z2, [0, 0, 0])
    hom_from_spec(Z3, Z3, [0, 1, 2])
    with pytest.raises(NotAHom, match=r"witness pair \(1, 2\)"):
        hom_from_spec(Z3, Z2, [0, 1, 0])


def test_action_rejections():
    Z3, Z2 = cyclic(3), cyclic(2)
    with pytest.raises(NotAnAction):
        action_from_spec(Z2, Z3, [[0, 1, 2], [1, 2, 0]])   # not an automorphism
    with pytest.raises(NotAnAction):
        action_from_spec(Z2, Z3, [[0, 2, 1], [0, 1, 2]])   # identity must act trivially
    action_from_spec(Z2, Z3, [[0, 1, 2], [0, 2, 1]])


@given(small_groups(), st.data())
def test_inverse_laws(G, data):
    a = data.draw(st.integers(0, G.order - 1))
    assert G.mul(a, G.inv(a)) == 0 == G.mul(G.inv(a), a)
    assert G.inv(G.inv(a)) == a


@given(small_groups())
def test_class_sizes_divide_order(G):
    sizes = [len(c) for c in conjugacy_classes(G)]
    assert sum(sizes) == G.order
    assert all(G.order % s == 0 for s in sizes)
    assert conjugacy_classes(G)[0] == (0,)


@given(small_groups(), small_groups())
def test_direct_product_is_a_group(A, B):
    P = direct_product(A, B)
    assert P.order == A.order * B.order
    group_from_table(P.table)
