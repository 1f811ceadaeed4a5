import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import d4_matrices, matmul, trace
from frobmoon.cyclotomic import Cyclotomic
from frobmoon.errors import BoundExceeded, BudgetExceeded, WidthNotAboveDimension
from frobmoon.frobenius import (
    check_budget, check_vanish, check_zero_sum, cycle_decomposition, falling_product, lemma_aux1,
    lemma_aux2, omega_cycle_statistic, orthogonality_sum, r_char_cycle_formula, r_char_recursive,
    r_char_values, theorem_rhs, verify_lemmas, verify_orthogonality,
)
from frobmoon.groups import BUNDLED

NAMES = list(BUNDLED)


def idx(T, *labels):
    return tuple(T.group.index(x) for x in labels)


def chi3_explicit(T, i, a, b, c):
    """The six-term S_3 expansion written out by hand."""
    G = T.group
    x = lambda *g: T.value(i, G.product(list(g)))
    return (x(a) * x(b) * x(c) - x(a, b) * x(c) - x(a, c) * x(b) - x(b, c) * x(a)
            + x(a, b, c) + x(a, c, b))


# -- reference values ------------------------------------------------------------------------

def test_width_two_values_d4(D4):
    assert r_char_recursive(D4, 4, idx(D4, "s", "r2s")) == 2
    assert r_char_recursive(D4, 4, idx(D4, "s", "s")) == -2
    assert r_char_recursive(D4, 4, idx(D4, "r2s", "s")) == 2
    assert r_char_recursive(D4, 4, idx(D4, "r2s", "r2s")) == -2
    assert r_char_recursive(D4, 4, idx(D4, "rs", "r3s")) == 2
    assert r_char_recursive(D4, 4, idx(D4, "rs", "rs")) == -2
    assert r_char_recursive(D4, 4, idx(D4, "r3s", "rs")) == 2
    assert r_char_recursive(D4, 4, idx(D4, "r3s", "r3s")) == -2


def test_width_two_values_q8(Q8):
    assert r_char_recursive(Q8, 4, idx(Q8, "j", "-j")) == -2
    assert r_char_recursive(Q8, 4, idx(Q8, "j", "j")) == 2
    assert r_char_recursive(Q8, 4, idx(Q8, "-j", "j")) == -2
    assert r_char_recursive(Q8, 4, idx(Q8, "-j", "-j")) == 2
    assert r_char_recursive(Q8, 4, idx(Q8, "k", "-k")) == -2
    assert r_char_recursive(Q8, 4, idx(Q8, "k", "k")) == 2
    assert r_char_recursive(Q8, 4, idx(Q8, "-k", "k")) == -2
    assert r_char_recursive(Q8, 4, idx(Q8, "-k", "-k")) == 2


def test_width_one_is_the_character(D4):
    for i, g in itertools.product(range(5), range(8)):
        assert r_char_recursive(D4, i, (g,)) == D4.value(i, g)


def test_empty_tuple_rejected(D4):
    with pytest.raises(ValueError):
        r_char_recursive(D4, 0, ())
    with pytest.raises(ValueError):
        r_char_cycle_formula(D4, 0, ())


def test_linear_characters_have_zero_two_characters(all_tables):
    for T in all_tables.values():
        for i in range(T.size):
            if T.dims[i] == 1:
                for t in itertools.product(range(T.group.order), repeat=2):
                    assert r_char_recursive(T, i, t).is_zero()


def test_two_character_against_matrix_traces(D4):
    mats = d4_matrices()
    labels = D4.group.labels
    for a, b in itertools.product(range(8), repeat=2):
        A, B = mats[labels[a]], mats[labels[b]]
        want = trace(A) * trace(B) - trace(matmul(A, B))
        assert r_char_recursive(D4, 4, (a, b)) == want


@pytest.mark.parametrize("name", ["D4", "Q8", "S3", "Z3"])
def test_three_character_against_explicit_expansion(name, all_tables):
    T = all_tables[name]
    for i in range(T.size):
        for t in itertools.product(range(T.group.order), repeat=3):
            assert r_char_recursive(T, i, t) == chi3_explicit(T, i, *t)


# -- cycle formula -----------------------------------------------------------------------

def test_cycle_decomposition():
    c = cycle_decomposition((1, 2, 0, 3))
    assert c.cycles == ((0, 1, 2), (3,))
    assert c.cycle_count == 2 and c.sign == 1
    assert cycle_decomposition((1, 0)).sign == -1


@pytest.mark.parametrize("name", NAMES)
def test_recursion_equals_cycle_formula(name, all_tables):
    T = all_tables[name]
    n = T.group.order
    for r in (1, 2, 3):
        for t in itertools.product(range(n), repeat=r):
            for i in range(T.size):
                assert r_char_recursive(T, i, t) == r_char_cycle_formula(T, i, t)


@given(st.sampled_from(["D4", "Q8", "S3", "Z2xZ4"]), st.data())
def test_recursion_equals_cycle_formula_width_four(name, data):
    from frobmoon.characters import get_table
    T = get_table(name)
    t = tuple(data.draw(st.lists(st.integers(0, T.group.order - 1), min_size=4, max_size=4)))
    i = data.draw(st.integers(0, T.size - 1))
    assert r_char_recursive(T, i, t) == r_char_cycle_formula(T, i, t)


def test_cycle_formula_bound(D4):
    with pytest.raises(BoundExceeded):
        r_char_cycle_formula(D4, 4, (0,) * 7)


@pytest.mark.parametrize("name", NAMES)
def test_two_characters_are_symmetric(name, all_tables):
    T = all_tables[name]
    for i in range(T.size):
        for a, b in itertools.product(range(T.group.order), repeat=2):
            assert r_char_recursive(T, i, (a, b)) == r_char_recursive(T, i, (b, a))


# -- closed forms ------------------------------------------------------------------------

def test_theorem_rhs_values():
    assert theorem_rhs(8, 2, 1, True) == 8
    assert theorem_rhs(8, 2, 2, True) == 64
    assert theorem_rhs(8, 2, 3, True) == 0
    assert theorem_rhs(8, 2, 2, False) == 0
    assert theorem_rhs(6, 3, 3, True) == Fraction(6 * 216 * 2 * 1, 9)
    assert falling_product(5, 1) == 1
    with pytest.raises(ValueError):
        theorem_rhs(8, 0, 1, True)


def test_omega_examples():
    assert omega_cycle_statistic(8, 2, 1) == 8
    assert omega_cycle_statistic(8, 2, 2) == 64
    assert omega_cycle_statistic(8, 2, 3) == 0
    with pytest.raises(BoundExceeded):
        omega_cycle_statistic(8, 2, 7)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
@pytest.mark.parametrize("dim", [1, 2, 3, 4, 5, 6])
def test_omega_equals_closed_form(r, dim):
    for order in (1, 8, 24):
        assert omega_cycle_statistic(order, dim, r) == theorem_rhs(order, dim, r, True)


# -- orthogonality -----------------------------------------------------------------------

def test_orthogonality_examples(D4):
    assert orthogonality_sum(D4, 4, 4, 2) == 64
    assert orthogonality_sum(D4, 0, 0, 1) == 8
    assert orthogonality_sum(D4, 0, 4, 2) == 0
    assert orthogonality_sum(D4, 4, 4, 3) == 0


def test_orthogonality_numeric_oracle(D4):
    # the same sum in floating point from matrix traces
    mats = d4_matrices()
    labels = D4.group.labels
    total = 0.0
    for a, b in itertools.product(range(8), repeat=2):
        A, B = mats[labels[a]], mats[labels[b]]
        total += (trace(A) * trace(B) - trace(matmul(A, B))) ** 2
    assert total == 64


@pytest.mark.parametrize("name", NAMES)
def test_orthogonality_sweep(name, all_tables):
    rep = verify_orthogonality(all_tables[name], 3)
    assert rep.ok, rep.violations[:3]
    assert rep.checked == 3 * all_tables[name].size ** 2


# -- lemmas ------------------------------------------------------------------------------

def test_lemma_aux1_examples(D4):
    e, r, r2 = idx(D4, "1", "r", "r2")
    assert lemma_aux1(D4, 4, e, e) == (16, 16)
    assert lemma_aux1(D4, 4, r, r) == (0, 0)
    assert lemma_aux1(D4, 4, r2, r2) == (16, 16)


def test_lemma_aux2_examples(D4):
    e, r = idx(D4, "1", "r")
    assert lemma_aux2(D4, 4, 4, e, e) == (8, 8)
    assert lemma_aux2(D4, 4, 4, r, e) == (0, 0)
    for i, j in itertools.permutations(range(5), 2):
        lhs, rhs = lemma_aux2(D4, i, j, r, e)
        assert lhs == rhs == 0


@pytest.mark.parametrize("name", NAMES)
def test_lemma_sweep(name, all_tables):
    rep = verify_lemmas(all_tables[name], 3)
    assert rep.ok, rep.violations[:3]


def test_zero_sum_examples(D4, Q8):
    assert check_zero_sum(D4, 1, 1) == 0
    assert check_zero_sum(D4, 4, 2) == 0
    assert check_zero_sum(Q8, 4, 2) == 0
    with pytest.raises(ValueError):
        check_zero_sum(D4, 0, 2)


def test_vanishing(D4, Q8):
    assert check_vanish(D4, 1, 2).ok
    rep = check_vanish(D4, 4, 3)
    assert rep.ok and rep.checked == 512
    assert check_vanish(Q8, 4, 3).ok
    with pytest.raises(WidthNotAboveDimension):
        check_vanish(D4, 4, 2)


def test_vanishing_report_lists_violations(D4):
    from frobmoon.characters import table_from_json
    data = D4.to_json()
    data["values"][1] = [1, 1, 1, 1, -1]  # not a character
    bad = table_from_json(data)
    rep = check_vanish(bad, 1, 2)
    assert not rep.ok
    assert set(rep.violations[0]) == {"tuple", "value"}


# -- budget ------------------------------------------------------------------------------

def test_budget_env(monkeypatch, D4):
    monkeypatch.setenv("MOONSHINE_BUDGET", "100")
    with pytest.raises(BudgetExceeded):
        check_budget(8, 3)
    with pytest.raises(BudgetExceeded):
        r_char_values(D4, 4, 3)
    check_budget(8, 2)
    monkeypatch.delenv("MOONSHINE_BUDGET")
    assert len(r_char_values(D4, 4, 3)) == 512
