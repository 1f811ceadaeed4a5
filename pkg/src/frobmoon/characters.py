"""Character tables with exact cyclotomic values."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

from .cyclotomic import Cyclotomic, ONE, ZERO
from .errors import BoundExceeded, MoonshineError
from .groups import ConjugacyClassPartition, FiniteGroup, conjugacy_classes, get_group, BUNDLED

DEFAULT_TABLE_BOUND = 32
# groups whose tables ship in data/ with the column and row order of the literature
BUNDLED_TABLE_FILES = {"D4": "D4_table.json", "Q8": "Q8_table.json"}


@dataclass
class Report:
    """Outcome of an exact identity sweep; ``violations`` holds human-readable witnesses."""

    name: str
    checked: int = 0
    violations: list[dict[str, Any]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, other: "Report") -> "Report":
        self.checked += other.checked
        self.violations.extend(other.violations)
        return self

    def summary(self) -> str:
        status = "ok" if self.ok else f"{len(self.violations)} violation(s)"
        return f"{self.name}: {self.checked} checked, {status}"


@dataclass(frozen=True, eq=False)
class CharacterTable:
    group: FiniteGroup
    partition: ConjugacyClassPartition
    values: tuple[tuple[Cyclotomic, ...], ...]

    def __post_init__(self):
        t = len(self.partition)
        if len(self.values) != t or any(len(row) != t for row in self.values):
            raise ValueError(f"character table must be {t}x{t}")
        if self.partition.representatives[0] != self.group.identity:
            raise ValueError("first column must be the identity class")

    @property
    def size(self) -> int:
        return len(self.values)

    @cached_property
    def dims(self) -> tuple[int, ...]:
        out = []
        for row in self.values:
            d = row[0]
            if not d.is_integer() or d.to_fraction() <= 0:
                raise ValueError(f"character degree {d} is not a positive integer")
            out.append(int(d.to_fraction()))
        return tuple(out)

    @cached_property
    def modulus(self) -> int:
        return math.lcm(*(v.m for row in self.values for v in row))

    @cached_property
    def _element_values(self) -> tuple[tuple[Cyclotomic, ...], ...]:
        cls = self.partition.class_of
        return tuple(tuple(row[cls[g]] for g in range(self.group.order)) for row in self.values)

    @cached_property
    def _element_conj_values(self) -> tuple[tuple[Cyclotomic, ...], ...]:
        return tuple(tuple(v.conjugate() for v in row) for row in self._element_values)

    def value(self, i: int, g: int) -> Cyclotomic:
        """chi_i(g) with 0-based character index i and element index g."""
        return self._element_values[i][g]

    def row(self, i: int) -> tuple[Cyclotomic, ...]:
        """chi_i listed per element (not per class)."""
        return self._element_values[i]

    def conj_row(self, i: int) -> tuple[Cyclotomic, ...]:
        return self._element_conj_values[i]

    def is_trivial(self, i: int) -> bool:
        return all(v == 1 for v in self.values[i])

    def class_labels(self) -> list[str]:
        return [self.group.labels[r] for r in self.partition.representatives]

    def to_json(self) -> dict:
        return {
            "group": self.group.name,
            "class_reps": self.class_labels(),
            "class_sizes": list(self.partition.sizes),
            "values": [[v.to_json() for v in row] for row in self.values],
        }

    def format(self) -> str:
        labels = self.class_labels()
        cells = [["", *labels], ["size", *map(str, self.partition.sizes)],
                 ["order", *map(str, self.partition.orders)]]
        for i, row in enumerate(self.values, start=1):
            cells.append([f"chi{i}", *map(str, row)])
        widths = [max(len(r[c]) for r in cells) for c in range(len(cells[0]))]
        return "\n".join("  ".join(s.rjust(w) for s, w in zip(r, widths)) for r in cells)


def char_value(T: CharacterTable, i: int, g: int) -> Cyclotomic:
    return T.value(i, g)


def table_from_json(data: dict, group: FiniteGroup | None = None) -> CharacterTable:
    """Build a table from the documented file schema; columns follow ``class_reps``."""
    G = group or get_group(data["group"])
    base = G.classes
    perm = []
    for label in data["class_reps"]:
        perm.append(base.class_of[G.index(label)])
    if sorted(perm) != list(range(len(base))):
        raise ValueError("class_reps must name every conjugacy class exactly once")
    partition = base.reordered(perm)
    sizes = data.get("class_sizes")
    if sizes is not None:
        sizes = [int(s) for s in sizes]
    if sizes is not None and sizes != list(partition.sizes):
        raise ValueError(f"class sizes {sizes} disagree with the group ({list(partition.sizes)})")
    values = tuple(tuple(Cyclotomic.from_json(v) for v in row) for row in data["values"])
    return CharacterTable(G, partition, values)


def load_table_file(path: str | Path, group: FiniteGroup | None = None) -> CharacterTable:
    return table_from_json(json.loads(Path(path).read_text(encoding="utf-8")), group)


def bundled_table(name: str) -> CharacterTable:
    """The bundled table for a bundled group: shipped data for D4/Q8, computed otherwise."""
    if name in BUNDLED_TABLE_FILES:
        text = resources.files("frobmoon.data").joinpath(BUNDLED_TABLE_FILES[name]).read_text("utf-8")
        return table_from_json(json.loads(text), BUNDLED[name])
    return compute_character_table(BUNDLED[name])


_TABLE_CACHE: dict[str, CharacterTable] = {}


def get_table(name: str) -> CharacterTable:
    """Cached table lookup for bundled group names; otherwise computes from a group file."""
    if name not in _TABLE_CACHE:
        if name in BUNDLED:
            _TABLE_CACHE[name] = bundled_table(name)
        else:
            return compute_character_table(get_group(name))
    return _TABLE_CACHE[name]


# -- verification ---------------------------------------------------------------

def inner_product(T: CharacterTable, i: int, j: int) -> Cyclotomic:
    """sum over g of chi_i(g) * conj(chi_j(g)), accumulated per class."""
    total = ZERO
    for size, a, b in zip(T.partition.sizes, T.values[i], T.values[j]):
        total = total + a * b.conjugate() * size
    return total


def verify_row_orthogonality(T: CharacterTable) -> Report:
    rep = Report("row orthogonality")
    n = T.group.order
    for i in range(T.size):
        for j in range(T.size):
            got = inner_product(T, i, j)
            want = n if i == j else 0
            rep.checked += 1
            if got != want:
                rep.violations.append({"i": i + 1, "j": j + 1, "got": str(got), "expected": want})
    return rep


def verify_column_sums(T: CharacterTable) -> Report:
    rep = Report("character sums")
    for i in range(T.size):
        if T.is_trivial(i):
            continue
        total = ZERO
        for size, v in zip(T.partition.sizes, T.values[i]):
            total = total + v * size
        rep.checked += 1
        if total != 0:
            rep.violations.append({"i": i + 1, "got": str(total), "expected": 0})
    return rep


def verify_table(T: CharacterTable) -> Report:
    """Structural invariants plus both orthogonality sweeps."""
    rep = Report("character table")
    rep.checked += 1
    if not T.is_trivial(0):
        rep.violations.append({"check": "first row is the trivial character"})
    rep.checked += 1
    if sum(d * d for d in T.dims) != T.group.order:
        rep.violations.append({"check": "sum of squared degrees", "got": sum(d * d for d in T.dims),
                               "expected": T.group.order})
    rep.merge(verify_row_orthogonality(T))
    rep.merge(verify_column_sums(T))
    return rep


# -- computation ----------------------------------------------------------------

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def _choose_prime(exponent: int, order: int) -> int:
    p = exponent + 1
    while not (_is_prime(p) and p > 2 * order):
        p += exponent
    return p


def _primitive_root_of_unity(e: int, p: int) -> int:
    for z in range(2, p):
        if pow(z, e, p) == 1 and all(pow(z, e // q, p) != 1 for q in range(2, e + 1)
                                       if e % q == 0 and _is_prime(q)):
            return z
    if e == 1:
        return 1
    raise ArithmeticError(f"no primitive {e}-th root of unity modulo {p}")


def _rref(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [(x * inv) % p for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] % p:
                f = rows[r][col]
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
    return rows[:rank], pivots


def _nullspace(mat: list[list[int]], p: int) -> list[list[int]]:
    n = len(mat[0])
    red, pivots = _rref(mat, p)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for r, pc in enumerate(pivots):
            v[pc] = (-red[r][f]) % p
        basis.append(v)
    return basis


def class_structure_constants(G: FiniteGroup, P: ConjugacyClassPartition) -> list[list[list[int]]]:
    """a[j][k][l] = number of (x, y) in C_j x C_k with x*y equal to the representative of C_l."""
    t = len(P)
    a = [[[0] * t for _ in range(t)] for _ in range(t)]
    reps = P.representatives
    for j, Cj in enumerate(P.classes):
        for k, Ck in enumerate(P.classes):
            row = a[j][k]
            for x in Cj:
                tx = G.table[x]
                for y in Ck:
                    z = tx[y]
                    l = P.class_of[z]
                    if reps[l] == z:
                        row[l] += 1
    return a


def _split_common_eigenspaces(mats: list[list[list[int]]], t: int, p: int) -> list[list[int]]:
    spaces = [[[int(i == j) for j in range(t)] for i in range(t)]]
    for M in mats:
        if all(len(s) == 1 for s in spaces):
            break
        nxt = []
        for basis in spaces:
            d = len(basis)
            if d == 1:
                nxt.append(basis)
                continue
            basis, pivots = _rref(basis, p)
            # restricted operator: column c holds coordinates of M b_c
            images = [[sum(M[r][l] * b[l] for l in range(t)) % p for r in range(t)] for b in basis]
            A = [[images[c][pivots[r]] for c in range(d)] for r in range(d)]
            for lam in range(p):
                shifted = [[(A[r][c] - (lam if r == c else 0)) % p for c in range(d)] for r in range(d)]
                coords = _nullspace(shifted, p)
                if coords:
                    vecs = [[sum(c[k] * basis[k][l] for k in range(d)) % p for l in range(t)] for c in coords]
                    nxt.append(vecs)
        spaces = nxt
    if any(len(s) != 1 for s in spaces) or len(spaces) != t:
        raise ArithmeticError("class matrices failed to separate the irreducible characters")
    return [s[0] for s in spaces]


def compute_character_table(G: FiniteGroup, bound: int = DEFAULT_TABLE_BOUND) -> CharacterTable:
    """Irreducible characters from the class-sum algebra.

    Central characters are the common eigenvectors of the class multiplication
    matrices, found over F_p with p = 1 mod exp(G). Each character value is then
    lifted to Q(zeta_exp(G)) by counting eigenvalue multiplicities of rho(g), which
    is exact once p exceeds twice the group order. The result is re-verified with
    exact cyclotomic arithmetic before it is returned.
    """
    if G.order > bound:
        raise BoundExceeded(f"|G| = {G.order} exceeds the character-table bound {bound}")
    P = conjugacy_classes(G)
    t = len(P)
    e = G.exponent
    p = _choose_prime(e, G.order)
    a = class_structure_constants(G, P)
    # M_j acts on the vector of central-character values: (M_j w)_k = sum_l a[j][k][l] w_l
    mats = [a[j] for j in range(1, t)]
    vectors = _split_common_eigenspaces(mats, t, p)

    inverse_class = [P.class_of[G.inv(r)] for r in P.representatives]
    z_e = _primitive_root_of_unity(e, p)
    rows = []
    for v in vectors:
        s = pow(v[0], -1, p)
        omega = [(x * s) % p for x in v]
        total = sum(omega[j] * omega[inverse_class[j]] * pow(P.sizes[j], -1, p) for j in range(t)) % p
        deg_sq = (G.order * pow(total, -1, p)) % p
        dim = next((d for d in range(1, math.isqrt(G.order) + 1) if (d * d) % p == deg_sq), None)
        if dim is None:
            raise ArithmeticError("could not recover a character degree")
        chi_mod_p = [(dim * omega[j] * pow(P.sizes[j], -1, p)) % p for j in range(t)]
        row = []
        for j, g in enumerate(P.representatives):
            o = P.orders[j]
            z_o = pow(z_e, e // o, p)
            powers = [chi_mod_p[P.class_of[G.power(g, l)]] for l in range(o)]
            inv_o = pow(o, -1, p)
            coeffs = [0] * e
            for k in range(o):
                mult = inv_o * sum(powers[l] * pow(z_o, (-k * l) % o, p) for l in range(o)) % p
                if mult > dim:
                    raise ArithmeticError("eigenvalue multiplicity out of range; prime too small")
                coeffs[k * (e // o)] += mult
            row.append(Cyclotomic(e, coeffs))
        rows.append(tuple(row))

    def key(row):
        trivial = all(v == 1 for v in row)
        flat = tuple(-c for v in row for c in v.sort_key(e))
        return (row[0].to_fraction(), not trivial, flat)

    rows.sort(key=key)
    T = CharacterTable(G, P, tuple(rows))
    rep = verify_table(T)
    if not rep.ok:
        raise MoonshineError(f"computed table for {G.name} failed verification: {rep.violations[:3]}")
    return T


def match_tables(T: CharacterTable, U: CharacterTable) -> tuple[list[int], list[int]] | None:
    """Find (row permutation, column permutation) taking T onto U, if one exists.

    Returns ``(rows, cols)`` with ``T.values[i][j] == U.values[rows[i]][cols[j]]``.
    Only the first match in lexicographic order of column permutations is returned.
    """
    from .distinguish import iter_class_matchings
    m = next(iter_class_matchings(T, U), None)
    if m is None:
        return None
    return list(m.row_map), list(m.class_map)
