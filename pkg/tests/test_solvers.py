from __future__ import annotations

import pytest

from factor_forge.catalog import SearchBudget
from factor_forge.model import GraphSpec
from factor_forge.solvers import (
    CONSTRUCTED,
    KNOWN_UNSOLVABLE,
    OPEN_CASE,
    UNSUPPORTED,
    HwpInstance,
    SmallEvenParams,
    Verdict,
    small_even_conditions,
    solve_alpha_resolvable,
    solve_HWP,
    solve_OP,
    solve_small_even,
)
from factor_forge.verify import verify_all

C, E = GraphSpec.complete, GraphSpec.equipartite


def _check(v: Verdict, ftype=None, profile=None):
    assert v.status == CONSTRUCTED, v
    assert verify_all(v.spec, v.witness, ftype=ftype, profile=profile).ok


def test_constructed_verdict_needs_witness():
    with pytest.raises(ValueError):
        Verdict(CONSTRUCTED, "nothing", C(1, 5))


def test_op_bipartite_layering():
    v = solve_OP(C(2, 8), [8])
    assert v.route == "signature-layering"
    _check(v, ftype=[[8]] * 7)


def test_op_k6_triangles_is_known_unsolvable():
    v = solve_OP(C(1, 6), [3, 3])
    assert v.status == KNOWN_UNSOLVABLE and v.route.startswith("exception-table")


def test_op_table_entries_for_higher_lambda_are_searched():
    v = solve_OP(C(2, 6), [3, 3])
    assert v.status == KNOWN_UNSOLVABLE and v.route == "exhaustive-search"


def test_op_octahedron_by_detachment():
    v = solve_OP(E(1, 3, 2), [6])
    assert v.route.startswith("detachment<-")
    _check(v, ftype=[[6], [6]])


def test_op_odd_order_replication():
    v = solve_OP(C(3, 7), [3, 4])
    assert v.route == "replication"
    _check(v, ftype=[[3, 4]] * 9)


def test_op_equipartite_replication_and_search():
    _check(solve_OP(E(2, 3, 2), [6]), ftype=[[6]] * 4)
    _check(solve_OP(E(1, 3, 4), [6, 6]), ftype=[[6, 6]] * 4)


def test_op_rejects_malformed_type():
    v = solve_OP(C(1, 7), [3, 3])
    assert v.status == UNSUPPORTED and v.route == "type-not-admissible"


def test_op_budget_exhaustion_is_open_not_unsolvable():
    v = solve_OP(C(1, 9), [3, 3, 3], budget=SearchBudget(node_limit=1))
    assert v.status in (OPEN_CASE, CONSTRUCTED)
    if v.status == OPEN_CASE:
        assert v.budget_exceeded


def test_hwp_table_and_open_cases():
    assert solve_HWP(HwpInstance(C(1, 7), [3, 4], [7], 2, 1)).status == KNOWN_UNSOLVABLE
    v = solve_HWP(HwpInstance(C(2, 7), [3, 4], [7], 5, 1))
    assert v.status == OPEN_CASE and v.route.startswith("open-table")


def test_hwp_bipartite_pair():
    v = solve_HWP(HwpInstance(C(2, 8), [8], [4, 4], 3, 4))
    _check(v, ftype=[[8]] * 3 + [[4, 4]] * 4)


def test_hwp_layer_split():
    v = solve_HWP(HwpInstance(C(2, 7), [3, 4], [7], 4, 2))
    assert v.route == "layer-split"
    _check(v, ftype=[[3, 4]] * 4 + [[7]] * 2)


def test_hwp_equipartite_by_detachment():
    v = solve_HWP(HwpInstance(E(1, 4, 2), [8], [4, 4], 2, 1))
    assert v.route.startswith("detachment<-")
    _check(v, ftype=[[8], [8], [4, 4]])


def test_hwp_equipartite_falls_back_to_search():
    # 2K_4 has no [4],[2,2],[2,2] factorization, yet K_{4x2} has the detached type
    v = solve_HWP(HwpInstance(E(1, 4, 2), [8], [4, 4], 1, 2))
    assert v.route == "catalog-search"
    _check(v, ftype=[[8], [4, 4], [4, 4]])


def test_hwp_invalid_instance():
    v = solve_HWP(HwpInstance(C(1, 7), [7], [7], 1, 2))
    assert v.status == UNSUPPORTED and "T1 != T2" in v.conditions
    v = solve_HWP(HwpInstance(C(1, 7), [3, 4], [7], 1, 1))
    assert v.status == UNSUPPORTED


@pytest.mark.parametrize("lam,n,m,alpha", [(1, 3, 2, 1), (2, 3, 2, 2)])
def test_alpha_resolvable_triangles(lam, n, m, alpha):
    v = solve_alpha_resolvable(E(lam, n, m), 3, alpha)
    k = lam * m * (n - 1) // (2 * alpha)
    _check(v, profile=[alpha] * k)
    assert all(len(c) == 3 * m for c in v.witness.cycles)


def test_alpha_resolvable_conditions():
    v = solve_alpha_resolvable(E(1, 3, 2), 3, 3)
    assert v.status == KNOWN_UNSOLVABLE and v.conditions == ("2*alpha | lambda*m*(n-1)",)
    assert solve_alpha_resolvable(E(1, 3, 2), 5, 1).status == UNSUPPORTED


def test_small_even_examples():
    _check(solve_small_even(2, SmallEvenParams(4, a=2, y=1, primes=((2, 2),))), ftype=[[4], [4], [2, 2]])
    v = solve_small_even(2, SmallEvenParams(8, a=0, b=3, c=4))
    assert v.status == CONSTRUCTED
    v = solve_small_even(2, SmallEvenParams(8, a=0, b=4, c=3))
    assert v.status == UNSUPPORTED
    assert v.conditions == ("if a=0 then c+y ≡ ⌊λ/2⌋ (mod 3)",)


def test_small_even_names_the_sum_condition():
    _, bad = small_even_conditions(1, SmallEvenParams(6, a=1, b=0))
    assert bad == ["a+b+y = ⌊λ(n-1)/2⌋"]
    _, bad = small_even_conditions(1, SmallEvenParams(6, a=0, b=2))
    assert bad == ["b <= λ"]


def test_small_even_equipartite():
    v = solve_small_even(1, SmallEvenParams(4, a=2, y=1, primes=((2, 2),), m=2))
    assert v.route == "detachment<-small-even-layering"
    _check(v, ftype=[[8], [8], [4, 4]])


def test_small_even_odd_layers():
    v = solve_small_even(2, SmallEvenParams(4, a=8, m=3, beta=2, fillers=((2, 4, 6),)))
    assert v.route == "small-even-odd-layers+detachment"
    _check(v, ftype=[[12]] * 8 + [[2, 4, 6]])


def test_two_cycle_type_through_signature_layering():
    v = solve_HWP(HwpInstance(C(2, 8), [8], [2, 6], 6, 1))
    assert v.route == "signature-layering"
    _check(v, ftype=[[8]] * 6 + [[2, 6]])
