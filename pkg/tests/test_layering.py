from __future__ import annotations

import pytest

from factor_forge.catalog import Catalog
from factor_forge.layering import (
    LayerPlan,
    LayerPlanError,
    OddDegreeHost,
    TypeNotRealizable,
    layer,
    layer_hwp,
    matching_map,
    realize_bipartite_pair,
    replicate,
    union_cycles,
)
from factor_forge.model import GraphSpec
from factor_forge.verify import cycle_type_of, verify_all

CAT = Catalog(None)
K4 = CAT.factorization(GraphSpec.complete(1, 4), [[4]])
K5 = CAT.factorization(GraphSpec.complete(1, 5), [[5], [5]])


def test_replicate():
    out = replicate(K5, 2)
    assert verify_all(GraphSpec.complete(2, 5), out, ftype=[[5]] * 4).ok
    assert replicate(K5, 1) is K5
    with pytest.raises(OddDegreeHost):
        replicate(K4, 2)


def test_realize_hamilton_pair():
    I = [(0, 1), (2, 3), (4, 5)]
    J = realize_bipartite_pair(I, [6])
    assert J == [(0, 5), (1, 2), (3, 4)]
    assert cycle_type_of(union_cycles(I, J)) == (6,)


def test_realize_with_a_two_cycle():
    I = [(0, 1), (2, 3), (4, 5)]
    J = realize_bipartite_pair(I, [2, 4])
    # the 2-cycle doubles the first edge; the other two edges close into a 4-cycle
    assert (0, 1) in J
    assert cycle_type_of(union_cycles(I, J)) == (2, 4)


def test_realize_rejects_odd_lengths():
    with pytest.raises(TypeNotRealizable):
        realize_bipartite_pair([(0, 1), (2, 3)], [3, 1])


def test_matching_map_is_a_permutation():
    perm = matching_map([(0, 3), (1, 2)], [(0, 1), (2, 3)], 4)
    assert sorted(perm) == [0, 1, 2, 3]
    assert {tuple(sorted((perm[0], perm[3]))), tuple(sorted((perm[1], perm[2])))} == {(0, 1), (2, 3)}


@pytest.mark.parametrize("filler,want", [([4], [[4], [4], [4]]), ([2, 2], [[4], [4], [2, 2]])])
def test_two_layers_of_k4(filler, want):
    out = layer(LayerPlan(4, [(1, K4, 2)], [filler]))
    assert verify_all(GraphSpec.complete(2, 4), out, ftype=want).ok


def test_odd_order_layers_need_no_fillers():
    out = layer(LayerPlan(5, [(1, K5, 2)], []))
    assert verify_all(GraphSpec.complete(2, 5), out, ftype=[[5]] * 4).ok
    with pytest.raises(LayerPlanError):
        layer(LayerPlan(5, [(1, K5, 2)], [[5]]))


def test_plan_validation():
    with pytest.raises(LayerPlanError):
        layer(LayerPlan(4, [(1, K4, 2)], []))
    with pytest.raises(LayerPlanError):
        layer(LayerPlan(4, [(1, K4, 2)], [[3, 1]]))
    with pytest.raises(LayerPlanError):
        layer(LayerPlan(4, [(2, K4, 1)], []))


def test_layer_hwp_k7():
    bases = {a: CAT.factorization(GraphSpec.complete(1, 7), [[3, 4]] * a + [[7]] * (3 - a)) for a in (0, 1, 3)}
    out = layer_hwp(2, 7, bases, {3: 1, 1: 1})
    assert verify_all(GraphSpec.complete(2, 7), out, ftype=[[3, 4]] * 4 + [[7]] * 2).ok


def test_layer_hwp_k6_with_filler():
    bases = {1: CAT.factorization(GraphSpec.complete(1, 6), [[6], [3, 3]])}
    out = layer_hwp(2, 6, bases, {1: 2}, [[6]])
    assert verify_all(GraphSpec.complete(2, 6), out, ftype=[[6]] * 3 + [[3, 3]] * 2).ok


def test_union_of_equal_matchings_is_two_cycles():
    I = [(0, 1), (2, 3)]
    assert sorted(map(sorted, union_cycles(I, I))) == [[0, 1], [2, 3]]
