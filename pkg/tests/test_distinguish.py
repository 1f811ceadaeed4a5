import itertools
import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from frobmoon.characters import compute_character_table, get_table
from frobmoon.distinguish import (
    SCOPE_NOTE, compatible_class_matchings, equivalent_up_to_width, verify_witness,
)
from frobmoon.errors import BoundExceeded
from frobmoon.frobenius import r_char_recursive
from frobmoon.groups import BUNDLED, cyclic, direct_product, relabel

# (D4 tuple, Q8 tuple) pairs lined up by conjugacy class, values chi_5^(2) = (a, -a)
PAIRS = {
    ("s", "r2s"): ("j", "-j"), ("s", "s"): ("j", "j"),
    ("r2s", "s"): ("-j", "j"), ("r2s", "r2s"): ("-j", "-j"),
    ("rs", "r3s"): ("k", "-k"), ("rs", "rs"): ("k", "k"),
    ("r3s", "rs"): ("-k", "k"), ("r3s", "r3s"): ("-k", "-k"),
}


def test_identity_matching_present(all_tables):
    for T in all_tables.values():
        ms = compatible_class_matchings(T, T)
        assert any(m.class_map == tuple(range(T.size)) and m.row_map == tuple(range(T.size)) for m in ms)


def test_d4_q8_matchings_nonempty(D4, Q8):
    ms = compatible_class_matchings(D4, Q8)
    assert ms
    for m in ms:
        for i, j in itertools.product(range(5), repeat=2):
            assert D4.values[i][j] == Q8.values[m.row_map[i]][m.class_map[j]]
        assert [D4.partition.sizes[j] for j in range(5)] == [Q8.partition.sizes[m.class_map[j]] for j in range(5)]


def test_strict_matchings_respect_orders(D4, Q8, all_tables):
    # element orders differ (D4 has five involutions, Q8 one), so no order-preserving matching
    assert compatible_class_matchings(D4, Q8, preserve_power_maps=True) == []
    for T in all_tables.values():
        for m in compatible_class_matchings(T, T, preserve_power_maps=True):
            assert [T.partition.orders[j] for j in range(T.size)] == \
                [T.partition.orders[m.class_map[j]] for j in range(T.size)]


def test_degrees_differ_gives_no_matching(D4):
    assert compatible_class_matchings(D4, get_table("Z8")) == []
    v = equivalent_up_to_width(D4, get_table("Z8"), 1)
    assert not v.equivalent and v.witness is None


def test_width_one_equivalent(D4, Q8):
    v = equivalent_up_to_width(D4, Q8, 1)
    assert v.equivalent
    assert sorted(v.bijection.values()) == sorted(Q8.group.labels)
    assert SCOPE_NOTE in v.notes


def test_width_two_separated(D4, Q8):
    v = equivalent_up_to_width(D4, Q8, 2)
    assert not v.equivalent
    w = v.witness
    assert w.r == 2
    assert PAIRS[w.labels] == w.image_labels
    assert {w.left[w.character], w.right[w.character]} == {2, -2}
    assert verify_witness(D4, Q8, w)


def test_witness_recomputes_from_scratch(D4, Q8):
    w = equivalent_up_to_width(D4, Q8, 2).witness
    G, H = D4.group, Q8.group
    t = tuple(G.index(x) for x in w.labels)
    u = tuple(H.index(x) for x in w.image_labels)
    assert r_char_recursive(D4, 4, t) == w.left[4]
    assert r_char_recursive(Q8, 4, u) == w.right[4]
    assert w.left != w.right


def test_naive_multisets_coincide(D4, Q8):
    # the value multisets of chi_5^(2) agree, so separation needs the bijection constraint
    a = Counter(r_char_recursive(D4, 4, t) for t in itertools.product(range(8), repeat=2))
    b = Counter(r_char_recursive(Q8, 4, t) for t in itertools.product(range(8), repeat=2))
    assert a == b
    assert not equivalent_up_to_width(D4, Q8, 2).equivalent


def test_paired_tuples_have_opposite_values(D4, Q8):
    for a, b in PAIRS.items():
        x = r_char_recursive(D4, 4, tuple(map(D4.group.index, a)))
        y = r_char_recursive(Q8, 4, tuple(map(Q8.group.index, b)))
        assert x == -y and x in (2, -2)


def test_symmetry(D4, Q8):
    for s in (1, 2, 3):
        a, b = equivalent_up_to_width(D4, Q8, s), equivalent_up_to_width(Q8, D4, s)
        assert a.equivalent == b.equivalent
        if a.witness:
            assert (a.witness.labels, a.witness.image_labels) == (b.witness.image_labels, b.witness.labels)


def test_monotone_in_width(D4, Q8):
    verdicts = [equivalent_up_to_width(D4, Q8, s).equivalent for s in (1, 2, 3)]
    assert verdicts == [True, False, False]


@pytest.mark.parametrize("name", list(BUNDLED))
def test_group_equivalent_to_itself(name, all_tables):
    T = all_tables[name]
    v = equivalent_up_to_width(T, T, 3)
    assert v.equivalent


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(["D4", "Q8", "S3", "Z2xZ4"]), st.randoms(use_true_random=False))
def test_relabelled_copy_is_equivalent(name, rnd):
    G = BUNDLED[name]
    perm = list(range(G.order))
    rnd.shuffle(perm)
    H = relabel(G, perm)
    T, U = get_table(name), compute_character_table(H)
    for s in (1, 2, 3):
        assert equivalent_up_to_width(T, U, s).equivalent


def test_order_mismatch(D4):
    v = equivalent_up_to_width(D4, get_table("S3"), 2)
    assert not v.equivalent and "orders differ" in v.reason


def test_bounds(D4):
    with pytest.raises(BoundExceeded):
        equivalent_up_to_width(D4, D4, 4)
    big = compute_character_table(cyclic(17))
    with pytest.raises(BoundExceeded):
        equivalent_up_to_width(big, big, 1)


def test_order_sixteen_within_bound():
    # Z2 x D4 against Z2 x Q8: same character table, separated at width 2
    A = compute_character_table(direct_product(BUNDLED["Z2"], BUNDLED["D4"], "Z2xD4"))
    B = compute_character_table(direct_product(BUNDLED["Z2"], BUNDLED["Q8"], "Z2xQ8"))
    assert equivalent_up_to_width(A, B, 1).equivalent
    v = equivalent_up_to_width(A, B, 2)
    assert not v.equivalent
    assert verify_witness(A, B, v.witness)


def test_json_shape(D4, Q8):
    data = equivalent_up_to_width(D4, Q8, 2).to_json()
    assert data["verdict"] == "separated"
    assert data["witness"]["r"] == 2 and data["witness"]["character"] == 5
