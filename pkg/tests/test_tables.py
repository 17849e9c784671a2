from __future__ import annotations

from factor_forge.model import GraphSpec
from factor_forge.tables import hwp_known_unsolvable, hwp_open, load_tables, op_known_unsolvable


def test_tables_load_and_have_names():
    t = load_tables()
    for key in ("hwp_known_unsolvable", "hwp_open", "op_known_unsolvable"):
        assert t[key] and all(e["name"] for e in t[key])


def test_k7_entry_in_both_orientations():
    assert hwp_known_unsolvable(7, [3, 4], [7], 2, 1)
    assert hwp_known_unsolvable(7, [7], [3, 4], 1, 2)
    assert not hwp_known_unsolvable(7, [3, 4], [7], 1, 2)


def test_open_entries_for_lambda_two():
    hits7 = [a for a in range(7) if hwp_open(2, 7, [3, 4], [7], a, 6 - a)]
    assert hits7 == [5]
    hits8 = [a for a in range(8) if hwp_open(2, 8, [4, 4], [3, 5], a, 7 - a)]
    assert hits8 == [0, 2, 3, 5, 6]
    hits6 = [a for a in range(6) if hwp_open(2, 6, [6], [3, 3], a, 5 - a)]
    assert hits6 == [0, 1, 2]
    assert hwp_open(1, 7, [3, 4], [7], 2, 1) is None


def test_op_entries():
    assert op_known_unsolvable(GraphSpec.complete(1, 6), [3, 3])
    assert op_known_unsolvable(GraphSpec.complete(2, 6), [3, 3])
    assert not op_known_unsolvable(GraphSpec.complete(4, 6), [3, 3])
    assert op_known_unsolvable(GraphSpec.complete(1, 9), [4, 5])
    assert not op_known_unsolvable(GraphSpec.complete(2, 9), [4, 5])
    assert op_known_unsolvable(GraphSpec.equipartite(1, 2, 6), [6, 6])
