"""Frobenius r-characters and their orthogonality relations.

Character indices are 0-based throughout this module; reports render them
1-based so they line up with the usual chi_1, ..., chi_t numbering.
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .characters import CharacterTable, Report
from .cyclotomic import Cyclotomic, ONE, ZERO
from .errors import BoundExceeded, BudgetExceeded, WidthNotAboveDimension

DEFAULT_BUDGET = 10 ** 7
CYCLE_FORMULA_MAX_WIDTH = 6


def enumeration_budget() -> int:
    """Cap on |G|^r for exhaustive sums; MOONSHINE_BUDGET overrides the default."""
    raw = os.environ.get("MOONSHINE_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


def check_budget(order: int, r: int, budget: int | None = None) -> None:
    budget = enumeration_budget() if budget is None else budget
    if order ** r > budget:
        raise BudgetExceeded(f"|G|^r = {order}^{r} exceeds the enumeration budget {budget}")


def tuples(order: int, r: int) -> Iterator[tuple[int, ...]]:
    return itertools.product(range(order), repeat=r)


# -- permutations -----------------------------------------------------------------

@dataclass(frozen=True)
class CycleDecomposition:
    perm: tuple[int, ...]
    cycles: tuple[tuple[int, ...], ...]

    @property
    def cycle_count(self) -> int:
        return len(self.cycles)

    @property
    def sign(self) -> int:
        return -1 if (len(self.perm) - len(self.cycles)) % 2 else 1


def cycle_decomposition(perm: Sequence[int]) -> CycleDecomposition:
    """Disjoint cycles (1-cycles included), each starting at its smallest point."""
    seen = [False] * len(perm)
    cycles = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = perm[x]
        cycles.append(tuple(cyc))
    return CycleDecomposition(tuple(perm), tuple(cycles))


@lru_cache(maxsize=None)
def _symmetric_group(r: int) -> tuple[CycleDecomposition, ...]:
    return tuple(cycle_decomposition(p) for p in itertools.permutations(range(r)))


# -- r-characters -----------------------------------------------------------------

@lru_cache(maxsize=1 << 18)
def _rchar(T: CharacterTable, i: int, t: tuple[int, ...]) -> Cyclotomic:
    row = T.row(i)
    if len(t) == 1:
        return row[t[0]]
    mul = T.group.table
    g1, rest = t[0], t[1:]
    if len(t) == 2:
        return row[g1] * row[rest[0]] - row[mul[g1][rest[0]]]
    total = row[g1] * _rchar(T, i, rest)
    for k in range(len(rest)):
        shifted = rest[:k] + (mul[g1][rest[k]],) + rest[k + 1:]
        total = total - _rchar(T, i, shifted)
    return total


def r_char_recursive(T: CharacterTable, i: int, t: Sequence[int]) -> Cyclotomic:
    """chi_i^(r)(g_1, ..., g_r) by the defining recursion.

    chi^(r)(g_1..g_r) = chi(g_1) chi^(r-1)(g_2..g_r)
                        - sum_k chi^(r-1)(g_2, .., g_1 g_k, .., g_r)
    """
    t = tuple(t)
    if not t:
        raise ValueError("tuple must be nonempty")
    return _rchar(T, i, t)


def r_char_cycle_formula(T: CharacterTable, i: int, t: Sequence[int],
                         max_width: int = CYCLE_FORMULA_MAX_WIDTH) -> Cyclotomic:
    """Sum over S_r of sgn(sigma) times, per cycle, chi of the product along the cycle."""
    t = tuple(t)
    r = len(t)
    if r == 0:
        raise ValueError("tuple must be nonempty")
    if r > max_width:
        raise BoundExceeded(f"cycle expansion over S_{r} exceeds the width bound {max_width}")
    G = T.group
    row = T.row(i)
    total = ZERO
    for sigma in _symmetric_group(r):
        term = ONE if sigma.sign > 0 else -ONE
        for cyc in sigma.cycles:
            term = term * row[G.product([t[a] for a in cyc])]
            if term.is_zero():
                break
        total = total + term
    return total


def r_char_values(T: CharacterTable, i: int, r: int) -> dict[tuple[int, ...], Cyclotomic]:
    """Every value of chi_i^(r) on G^(r), keyed by tuple."""
    check_budget(T.group.order, r)
    return {t: _rchar(T, i, t) for t in tuples(T.group.order, r)}


# -- closed forms -----------------------------------------------------------------

def falling_product(dim: int, r: int) -> int:
    """(dim - 1)(dim - 2)...(dim - (r - 1)); the empty product (r = 1) is 1."""
    return math.prod(dim - k for k in range(1, r))


def theorem_rhs(order: int, dim: int, r: int, same: bool) -> Fraction:
    """Closed form of sum_g chi_i^(r)(g) conj(chi_j^(r)(g)) over G^(r)."""
    if dim < 1 or r < 1:
        raise ValueError("need dim >= 1 and r >= 1")
    if not same:
        return Fraction(0)
    return Fraction(math.factorial(r) * order ** r * falling_product(dim, r), dim ** (r - 1))


def omega_cycle_statistic(order: int, dim: int, r: int,
                          max_width: int = CYCLE_FORMULA_MAX_WIDTH) -> Fraction:
    """sum over sigma, tau in S_r of sgn(sigma) sgn(tau) |G|^r / dim^m(sigma, tau).

    m(sigma, tau) adds up (length - 1) over the cycles of sigma tau^-1.
    """
    if r > max_width:
        raise BoundExceeded(f"S_{r} x S_{r} enumeration exceeds the width bound {max_width}")
    perms = _symmetric_group(r)
    total = Fraction(0)
    for s in perms:
        for tau in perms:
            inv_tau = [0] * r
            for a, b in enumerate(tau.perm):
                inv_tau[b] = a
            # (sigma tau^-1)(x) = sigma(tau^-1(x))
            composite = cycle_decomposition([s.perm[inv_tau[x]] for x in range(r)])
            m = sum(len(c) - 1 for c in composite.cycles)
            total += Fraction(s.sign * tau.sign * order ** r, dim ** m)
    return total


# -- exhaustive sums and identity checks ----------------------------------------------

def check_vanish(T: CharacterTable, i: int, r: int) -> Report:
    """chi_i^(r) should vanish identically once r exceeds dim chi_i."""
    dim = T.dims[i]
    if r <= dim:
        raise WidthNotAboveDimension(f"r = {r} does not exceed dim chi_{i + 1} = {dim}")
    check_budget(T.group.order, r)
    rep = Report(f"vanishing of chi_{i + 1}^({r}) on {T.group.name}")
    labels = T.group.labels
    for t in tuples(T.group.order, r):
        v = _rchar(T, i, t)
        rep.checked += 1
        if not v.is_zero():
            rep.violations.append({"tuple": [labels[g] for g in t], "value": str(v)})
    return rep


def check_zero_sum(T: CharacterTable, i: int, r: int) -> Cyclotomic:
    """sum of chi_i^(r) over G^(r); zero for every nontrivial chi_i."""
    if T.is_trivial(i):
        raise ValueError("the zero-sum identity concerns nontrivial characters only")
    check_budget(T.group.order, r)
    total = ZERO
    for t in tuples(T.group.order, r):
        total = total + _rchar(T, i, t)
    return total


def orthogonality_sum(T: CharacterTable, i: int, j: int, r: int) -> Cyclotomic:
    check_budget(T.group.order, r)
    total = ZERO
    for t in tuples(T.group.order, r):
        a = _rchar(T, i, t)
        if a.is_zero():
            continue
        b = _rchar(T, j, t)
        if b.is_zero():
            continue
        total = total + a * b.conjugate()
    return total


def lemma_aux1(T: CharacterTable, i: int, h1: int, h2: int) -> tuple[Cyclotomic, Cyclotomic]:
    """(sum_g chi(g h1 g^-1 h2^-1), chi(h1) conj(chi(h2)) |G| / dim chi)."""
    G = T.group
    row = T.row(i)
    h2inv = G.inv(h2)
    lhs = ZERO
    for g in range(G.order):
        lhs = lhs + row[G.table[G.conj(g, h1)][h2inv]]
    rhs = row[h1] * row[h2].conjugate() * Fraction(G.order, T.dims[i])
    return lhs, rhs


def lemma_aux2(T: CharacterTable, i: int, j: int, h1: int, h2: int) -> tuple[Cyclotomic, Cyclotomic]:
    """(sum_g chi_i(h1 g) conj(chi_j(g h2)), chi_i(h1 h2^-1) |G| delta_ij / dim chi_i)."""
    G = T.group
    mul = G.table
    ri, cj = T.row(i), T.conj_row(j)
    lhs = ZERO
    for g in range(G.order):
        lhs = lhs + ri[mul[h1][g]] * cj[mul[g][h2]]
    if i != j:
        return lhs, ZERO
    rhs = ri[mul[h1][G.inv(h2)]] * Fraction(G.order, T.dims[i])
    return lhs, rhs


def verify_orthogonality(T: CharacterTable, max_width: int) -> Report:
    """Compare every exhaustive r-character inner product with its closed form."""
    rep = Report(f"r-character orthogonality on {T.group.name}")
    n = T.group.order
    for r in range(1, max_width + 1):
        check_budget(n, r)
        for i in range(T.size):
            for j in range(T.size):
                got = orthogonality_sum(T, i, j, r)
                want = theorem_rhs(n, T.dims[i], r, i == j)
                rep.checked += 1
                if got != want:
                    rep.violations.append({"r": r, "i": i + 1, "j": j + 1,
                                           "got": str(got), "expected": str(want)})
    return rep


def verify_lemmas(T: CharacterTable, max_width: int = 3) -> Report:
    """Conjugation-sum and shifted-product identities, vanishing above the degree, zero sums."""
    G = T.group
    rep = Report(f"lemmas on {G.name}")
    labels = G.labels
    for i in range(T.size):
        for h1 in range(G.order):
            for h2 in range(G.order):
                lhs, rhs = lemma_aux1(T, i, h1, h2)
                rep.checked += 1
                if lhs != rhs:
                    rep.violations.append({"lemma": "conjugation sum", "i": i + 1,
                                           "h": [labels[h1], labels[h2]], "lhs": str(lhs), "rhs": str(rhs)})
    for i in range(T.size):
        for j in range(T.size):
            for h1 in range(G.order):
                for h2 in range(G.order):
                    lhs, rhs = lemma_aux2(T, i, j, h1, h2)
                    rep.checked += 1
                    if lhs != rhs:
                        rep.violations.append({"lemma": "shifted inner product", "i": i + 1, "j": j + 1,
                                               "h": [labels[h1], labels[h2]],
                                               "lhs": str(lhs), "rhs": str(rhs)})
    for r in range(1, max_width + 1):
        if G.order ** r > enumeration_budget():
            break
        for i in range(T.size):
            if not T.is_trivial(i):
                total = check_zero_sum(T, i, r)
                rep.checked += 1
                if not total.is_zero():
                    rep.violations.append({"lemma": "zero sum", "i": i + 1, "r": r, "sum": str(total)})
            if r > T.dims[i]:
                sub = check_vanish(T, i, r)
                rep.checked += sub.checked
                for v in sub.violations:
                    rep.violations.append({"lemma": "vanishing above degree", "i": i + 1, "r": r, **v})
    return rep
