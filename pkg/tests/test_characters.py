import cmath
import itertools
import json
from fractions import Fraction

import pytest

from conftest import d4_matrices, q8_matrices, trace
from frobmoon.characters import (
    char_value, compute_character_table, get_table, inner_product, load_table_file, match_tables,
    table_from_json, verify_column_sums, verify_row_orthogonality, verify_table,
)
from frobmoon.cyclotomic import Cyclotomic
from frobmoon.errors import BoundExceeded
from frobmoon.groups import BUNDLED, cyclic, direct_product, from_table

TABLE1 = [[1, 1, 1, 1, 1], [1, 1, -1, 1, -1], [1, 1, -1, -1, 1], [1, 1, 1, -1, -1], [2, -2, 0, 0, 0]]


def test_bundled_tables_are_table1(D4, Q8):
    assert D4.class_labels() == ["1", "r2", "r", "s", "rs"]
    assert Q8.class_labels() == ["1", "-1", "i", "j", "k"]
    for T in (D4, Q8):
        assert [[v.to_json() for v in row] for row in T.values] == TABLE1
        assert T.partition.sizes == (1, 1, 2, 2, 2)


def test_char_values(D4, Q8):
    D, Q = D4.group, Q8.group
    assert char_value(D4, 4, D.index("r2")) == -2
    assert char_value(Q8, 1, Q.index("i")) == -1
    assert char_value(Q8, 1, Q.index("-i")) == -1
    assert all(char_value(D4, 0, g) == 1 for g in range(8))


@pytest.mark.parametrize("name, matrices", [("D4", d4_matrices), ("Q8", q8_matrices)])
def test_two_dimensional_character_is_a_trace(name, matrices):
    T = get_table(name)
    mats = matrices()
    for g, label in enumerate(T.group.labels):
        assert abs(complex(T.value(4, g)) - trace(mats[label])) < 1e-12


def test_inner_products(D4):
    assert inner_product(D4, 4, 4) == 8
    assert inner_product(D4, 0, 1) == 0
    assert inner_product(D4, 0, 0) == 8


def test_column_sums(D4, Q8):
    assert verify_column_sums(D4).ok and verify_column_sums(Q8).ok


def brute_force_characters(n):
    """All homomorphisms Z_n -> C^*, as complex value lists on 1, a, a^2, ..."""
    return [[cmath.exp(2j * cmath.pi * k * x / n) for x in range(n)] for k in range(n)]


def test_z4_linear_characters():
    T = compute_character_table(BUNDLED["Z4"])
    assert T.dims == (1, 1, 1, 1)
    assert T.modulus == 4
    rnd = lambda z: (round(z.real, 9) + 0.0, round(z.imag, 9) + 0.0)
    got = sorted(tuple(rnd(complex(T.value(i, g))) for g in range(4)) for i in range(4))
    want = sorted(tuple(rnd(z) for z in row) for row in brute_force_characters(4))
    assert got == want


def test_z2():
    T = compute_character_table(BUNDLED["Z2"])
    assert [[v.to_json() for v in row] for row in T.values] == [[1, 1], [1, -1]]


@pytest.mark.parametrize("name", list(BUNDLED))
def test_every_bundled_table_verifies(name, all_tables):
    T = all_tables[name]
    assert T.size == len(T.group.classes)
    rep = verify_table(T)
    assert rep.ok, rep.violations
    assert T.is_trivial(0)
    assert sum(d * d for d in T.dims) == T.group.order


@pytest.mark.parametrize("name", list(BUNDLED))
def test_class_constant(name, all_tables):
    T = all_tables[name]
    G = T.group
    for i in range(T.size):
        for g, h in itertools.product(range(G.order), repeat=2):
            assert T.value(i, G.conj(h, g)) == T.value(i, g)


@pytest.mark.parametrize("name", ["D4", "Q8"])
def test_computed_table_matches_bundled_up_to_order(name):
    T = get_table(name)
    U = compute_character_table(T.group)
    assert verify_table(U).ok
    assert match_tables(T, U) is not None


def test_d4_q8_tables_coincide_under_table1_matching(D4, Q8):
    assert D4.values == Q8.values
    rows, cols = match_tables(D4, Q8)
    assert rows == list(range(5)) and cols == list(range(5))


def test_larger_groups():
    # order 16 and order 21 (the Frobenius group C7 : C3, whose characters need zeta_7 and zeta_3)
    T = compute_character_table(direct_product(BUNDLED["D4"], BUNDLED["Z2"]))
    assert T.dims.count(1) == 8 and T.dims.count(2) == 2
    elems = [(a, b) for b in range(3) for a in range(7)]
    index = {e: k for k, e in enumerate(elems)}
    # (a, b)(c, d) = (a + 2^b c, b + d) with 2 of order 3 mod 7
    rows = [[index[((a + pow(2, b, 7) * c) % 7, (b + d) % 3)] for (c, d) in elems] for (a, b) in elems]
    F21 = from_table([f"{a},{b}" for a, b in elems], rows, "F21")
    T = compute_character_table(F21)
    assert sorted(T.dims) == [1, 1, 1, 3, 3]
    assert verify_table(T).ok
    assert any(not v.is_rational() for row in T.values for v in row)


def test_bound():
    with pytest.raises(BoundExceeded):
        compute_character_table(cyclic(9), bound=8)


def test_row_order_is_canonical():
    T = compute_character_table(BUNDLED["S3"])
    assert T.dims == (1, 1, 2)
    assert [v.to_json() for v in T.values[1]] == [1, -1, 1]


def test_table_file_round_trip(tmp_path, Q8):
    path = tmp_path / "q8.json"
    path.write_text(json.dumps(Q8.to_json()), encoding="utf-8")
    T = load_table_file(path)
    assert T.values == Q8.values and T.class_labels() == Q8.class_labels()


def test_table_file_any_class_member_and_string_sizes(Q8):
    data = Q8.to_json()
    data["class_reps"] = ["1", "-1", "-i", "-j", "k"]
    data["class_sizes"] = [str(s) for s in data["class_sizes"]]
    assert table_from_json(data).partition.sizes == Q8.partition.sizes


def test_table_file_rejects_wrong_sizes(Q8):
    data = Q8.to_json()
    data["class_sizes"] = [1, 2, 1, 2, 2]
    with pytest.raises(ValueError):
        table_from_json(data)


def test_broken_table_reports_violation(D4):
    data = D4.to_json()
    data["values"][4] = [2, 2, 0, 0, 0]
    T = table_from_json(data)
    rep = verify_row_orthogonality(T)
    assert not rep.ok
    # the altered row keeps norm 8 but is no longer orthogonal to any linear character
    want = {(k, 5) for k in range(1, 5)} | {(5, k) for k in range(1, 5)}
    assert {(v["i"], v["j"]) for v in rep.violations} == want


def test_cyclotomic_values_in_json():
    T = compute_character_table(BUNDLED["Z3"])
    data = json.loads(json.dumps(T.to_json()))
    assert any(isinstance(v, dict) for row in data["values"] for v in row)
    assert table_from_json(data).values == T.values
