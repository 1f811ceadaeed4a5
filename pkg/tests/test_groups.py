import itertools
import json

import pytest
from hypothesis import given, strategies as st

from conftest import d4_matrices, matmul, q8_matrices
from frobmoon.errors import InvalidGroupTable, NoIdentity, NotAssociative, NotLatinSquare
from frobmoon.groups import (
    BUNDLED, conjugacy_classes, cyclic, element_order, from_table, get_group, group_from_json,
    load_group_file, power_map, relabel,
)


def test_trivial_group():
    G = from_table(["e"], [[0]])
    assert G.order == 1
    P = conjugacy_classes(G)
    assert P.classes == ((0,),) and P.sizes == (1,)


@pytest.mark.parametrize("name, matrices", [("D4", d4_matrices), ("Q8", q8_matrices)])
def test_cayley_table_matches_matrix_model(name, matrices):
    G = BUNDLED[name]
    mats = matrices()
    assert set(mats) == set(G.labels)
    for a, b in itertools.product(G.labels, repeat=2):
        prod = G.labels[G.mul(G.index(a), G.index(b))]
        assert mats[prod] == matmul(mats[a], mats[b]), (a, b)


def test_d4_classes():
    G = BUNDLED["D4"]
    P = G.classes
    assert P.sizes == (1, 1, 2, 2, 2)
    two = {frozenset(G.labels[g] for g in c) for c in P.classes if len(c) == 2}
    assert two == {frozenset({"r", "r3"}), frozenset({"s", "r2s"}), frozenset({"rs", "r3s"})}


def test_q8_classes():
    G = BUNDLED["Q8"]
    P = G.classes
    assert P.sizes == (1, 1, 2, 2, 2)
    two = {frozenset(G.labels[g] for g in c) for c in P.classes if len(c) == 2}
    assert two == {frozenset({"i", "-i"}), frozenset({"j", "-j"}), frozenset({"k", "-k"})}


def test_element_orders():
    D, Q = BUNDLED["D4"], BUNDLED["Q8"]
    assert element_order(D, D.identity) == 1
    assert element_order(D, D.index("r")) == 4
    assert element_order(Q, Q.index("-1")) == 2
    assert [element_order(Q, Q.index(x)) for x in ("i", "j", "k")] == [4, 4, 4]


def test_power_maps():
    D, Q = BUNDLED["D4"], BUNDLED["Q8"]
    for G, x, sq in ((D, "r", "r2"), (Q, "i", "-1")):
        P = G.classes
        m = power_map(G, P, 2)
        assert m[P.class_of[G.index(x)]] == P.class_of[G.index(sq)]
        assert power_map(G, P, 1) == {j: j for j in range(len(P))}


def test_power_map_rejects_negative():
    G = BUNDLED["Z4"]
    with pytest.raises(ValueError):
        power_map(G, G.classes, -1)


def test_not_latin_square_names_row():
    with pytest.raises(NotLatinSquare, match="row 1"):
        from_table(["a", "b"], [[0, 1], [1, 1]])


def test_no_identity():
    # Latin square of x - y mod 3 has no two-sided identity
    rows = [[(x - y) % 3 for y in range(3)] for x in range(3)]
    with pytest.raises(NoIdentity):
        from_table(["0", "1", "2"], rows)


def test_not_associative():
    # a loop of order 5 with identity 0 that is not a group
    rows = [[0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 4, 0, 1, 3],
            [3, 2, 4, 0, 1],
            [4, 3, 1, 2, 0]]
    with pytest.raises(NotAssociative):
        from_table(list("abcde"), rows)


def test_out_of_range_entry():
    with pytest.raises(InvalidGroupTable):
        from_table(["a", "b"], [[0, 2], [1, 0]])


@pytest.mark.parametrize("name", list(BUNDLED))
def test_class_partition_invariants(name):
    G = BUNDLED[name]
    P = G.classes
    assert sorted(g for c in P.classes for g in c) == list(range(G.order))
    assert sum(P.sizes) == G.order
    assert P.classes[0] == (G.identity,)
    orders = G.element_orders
    for c, o in zip(P.classes, P.orders):
        assert {orders[g] for g in c} == {o}
    for g, h in itertools.product(range(G.order), repeat=2):
        assert P.class_of[G.conj(g, h)] == P.class_of[h]


def test_bundle_covers_every_group_of_order_at_most_8():
    # numbers of isomorphism types for orders 1..8
    counts = {1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 5}
    seen = {}
    for G in BUNDLED.values():
        seen[G.order] = seen.get(G.order, 0) + 1
    assert seen == counts


def test_classes_deterministic():
    G = BUNDLED["D4"]
    again = group_from_json(json.loads(json.dumps(G.to_json())))
    assert conjugacy_classes(again) == conjugacy_classes(G)


@given(st.permutations(range(8)))
def test_relabeling_preserves_class_shape(perm):
    G = BUNDLED["Q8"]
    H = relabel(G, perm)
    assert sorted(zip(H.classes.orders, H.classes.sizes)) == sorted(zip(G.classes.orders, G.classes.sizes))
    assert sorted(H.element_orders) == sorted(G.element_orders)


def test_group_file_round_trip(tmp_path):
    G = cyclic(6)
    path = tmp_path / "z6.json"
    path.write_text(json.dumps(G.to_json()), encoding="utf-8")
    H = load_group_file(path)
    assert H.table == G.table and H.labels == G.labels
    assert get_group(str(path)).order == 6


def test_group_file_accepts_string_integers():
    G = BUNDLED["S3"]
    data = G.to_json()
    data["table"] = [[str(x) for x in row] for row in data["table"]]
    assert group_from_json(data).table == G.table


def test_unknown_group():
    with pytest.raises(KeyError):
        get_group("no-such-group")
