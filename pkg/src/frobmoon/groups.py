"""Finite groups given by explicit Cayley tables."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Sequence

from .errors import NoIdentity, NotAssociative, NotLatinSquare, InvalidGroupTable

ASSOCIATIVITY_CHECK_LIMIT = 64


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    name: str
    labels: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]
    identity: int

    @property
    def order(self) -> int:
        return len(self.table)

    def __len__(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def product(self, elems: Sequence[int]) -> int:
        """Left-to-right product of a sequence of element indices."""
        acc = self.identity
        for g in elems:
            acc = self.table[acc][g]
        return acc

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        e = self.identity
        inv = [0] * self.order
        for a in range(self.order):
            inv[a] = self.table[a].index(e)
        return tuple(inv)

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def conj(self, h: int, g: int) -> int:
        """h g h^-1."""
        return self.table[self.table[h][g]][self.inverses[h]]

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inverses[g], -k
        acc = self.identity
        for _ in range(k):
            acc = self.table[acc][g]
        return acc

    def index(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise KeyError(f"{self.name} has no element labelled {label!r}") from None

    @cached_property
    def _label_index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        return tuple(_order(self, g) for g in range(self.order))

    @cached_property
    def exponent(self) -> int:
        from math import lcm
        return lcm(*self.element_orders)

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    @cached_property
    def classes(self) -> "ConjugacyClassPartition":
        return conjugacy_classes(self)

    def to_json(self) -> dict:
        return {"name": self.name, "labels": list(self.labels), "table": [list(r) for r in self.table]}

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"


@dataclass(frozen=True)
class ConjugacyClassPartition:
    classes: tuple[tuple[int, ...], ...]
    representatives: tuple[int, ...]
    sizes: tuple[int, ...]
    orders: tuple[int, ...]
    class_of: tuple[int, ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.classes)

    def reordered(self, perm: Sequence[int]) -> "ConjugacyClassPartition":
        """Partition whose k-th class is our perm[k]-th class."""
        position = {old: new for new, old in enumerate(perm)}
        return ConjugacyClassPartition(
            classes=tuple(self.classes[p] for p in perm),
            representatives=tuple(self.representatives[p] for p in perm),
            sizes=tuple(self.sizes[p] for p in perm),
            orders=tuple(self.orders[p] for p in perm),
            class_of=tuple(position[c] for c in self.class_of),
        )


def _order(G: FiniteGroup, g: int) -> int:
    k, acc = 1, g
    while acc != G.identity:
        acc = G.table[acc][g]
        k += 1
    return k


def from_table(labels: Sequence[str], rows: Sequence[Sequence[int]], name: str = "G") -> FiniteGroup:
    """Validate a Cayley table and wrap it as a FiniteGroup.

    Associativity is checked exhaustively when the order is at most 64.
    """
    n = len(rows)
    if n == 0:
        raise InvalidGroupTable("empty table")
    if len(labels) != n:
        raise InvalidGroupTable(f"{len(labels)} labels for a table of {n} rows")
    if len(set(labels)) != n:
        raise InvalidGroupTable("element labels must be distinct")
    full = set(range(n))
    for i, row in enumerate(rows):
        if len(row) != n:
            raise InvalidGroupTable(f"row {i} has length {len(row)}, expected {n}")
        for x in row:
            if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < n:
                raise InvalidGroupTable(f"row {i} has out-of-range entry {x!r}")
        if set(row) != full:
            raise NotLatinSquare(f"row {i} ({labels[i]}) is not a permutation of the elements")
    for j in range(n):
        if {rows[i][j] for i in range(n)} != full:
            raise NotLatinSquare(f"column {j} ({labels[j]}) is not a permutation of the elements")
    identity = None
    for e in range(n):
        if all(rows[e][g] == g and rows[g][e] == g for g in range(n)):
            identity = e
            break
    if identity is None:
        raise NoIdentity("no element acts as a two-sided identity")
    if n <= ASSOCIATIVITY_CHECK_LIMIT:
        for a, b, c in itertools.product(range(n), repeat=3):
            if rows[rows[a][b]][c] != rows[a][rows[b][c]]:
                raise NotAssociative(
                    f"({labels[a]}*{labels[b]})*{labels[c]} != {labels[a]}*({labels[b]}*{labels[c]})")
    return FiniteGroup(name, tuple(labels), tuple(tuple(r) for r in rows), identity)


def element_order(G: FiniteGroup, g: int) -> int:
    return G.element_orders[g]


def conjugacy_classes(G: FiniteGroup) -> ConjugacyClassPartition:
    """Conjugacy classes sorted by (element order, class size, smallest member)."""
    seen: set[int] = set()
    found = []
    for g in range(G.order):
        if g in seen:
            continue
        cls = sorted({G.conj(h, g) for h in range(G.order)})
        seen.update(cls)
        found.append(tuple(cls))
    orders = G.element_orders
    found.sort(key=lambda c: (orders[c[0]], len(c), c[0]))
    class_of = [0] * G.order
    for k, cls in enumerate(found):
        for g in cls:
            class_of[g] = k
    return ConjugacyClassPartition(
        classes=tuple(found),
        representatives=tuple(c[0] for c in found),
        sizes=tuple(len(c) for c in found),
        orders=tuple(orders[c[0]] for c in found),
        class_of=tuple(class_of),
    )


def power_map(G: FiniteGroup, P: ConjugacyClassPartition, k: int) -> dict[int, int]:
    if k < 0:
        raise ValueError("power must be non-negative")
    return {j: P.class_of[G.power(rep, k)] for j, rep in enumerate(P.representatives)}


# -- bundled groups -----------------------------------------------------------

def _from_function(name: str, elements: Sequence, labels: Sequence[str], op) -> FiniteGroup:
    index = {e: i for i, e in enumerate(elements)}
    rows = [[index[op(a, b)] for b in elements] for a in elements]
    return from_table(labels, rows, name)


def cyclic(n: int, name: str | None = None) -> FiniteGroup:
    labels = ["1"] + [f"a{k}" if k > 1 else "a" for k in range(1, n)]
    return _from_function(name or f"Z{n}", list(range(n)), labels, lambda a, b: (a + b) % n)


def direct_product(G: FiniteGroup, H: FiniteGroup, name: str | None = None) -> FiniteGroup:
    elements = [(a, b) for a in range(G.order) for b in range(H.order)]

    def label(a: int, b: int) -> str:
        if a == G.identity and b == H.identity:
            return "1"
        return f"({G.labels[a]},{H.labels[b]})"

    return _from_function(
        name or f"{G.name}x{H.name}", elements, [label(a, b) for a, b in elements],
        lambda x, y: (G.table[x[0]][y[0]], H.table[x[1]][y[1]]))


def dihedral(n: int, name: str | None = None) -> FiniteGroup:
    """D_n of order 2n with elements r^k s^e, written r^k then s (labels 1, r, r2, ..., s, rs, r2s, ...)."""
    elements = [(k, e) for e in (0, 1) for k in range(n)]

    def label(k: int, e: int) -> str:
        rk = "" if k == 0 else ("r" if k == 1 else f"r{k}")
        if e == 0:
            return rk or "1"
        return rk + "s"

    # (r^a s^x)(r^b s^y) = r^(a + (-1)^x b) s^(x+y)
    def op(p, q):
        a, x = p
        b, y = q
        return ((a + (b if x == 0 else -b)) % n, (x + y) % 2)

    return _from_function(name or f"D{n}", elements, [label(*el) for el in elements], op)


def quaternion(name: str = "Q8") -> FiniteGroup:
    # unit quaternions as (sign, basis) with basis in 1, i, j, k
    basis_mul = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    elements = [(1, "1"), (-1, "1"), (1, "i"), (-1, "i"), (1, "j"), (-1, "j"), (1, "k"), (-1, "k")]
    labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]

    def op(p, q):
        s, b = basis_mul[(p[1], q[1])]
        return (p[0] * q[0] * s, b)

    return _from_function(name, elements, labels, op)


def symmetric3(name: str = "S3") -> FiniteGroup:
    perms = [(0, 1, 2), (1, 0, 2), (0, 2, 1), (2, 1, 0), (1, 2, 0), (2, 0, 1)]
    labels = ["1", "(12)", "(23)", "(13)", "(123)", "(132)"]
    # (p*q)(x) = p(q(x)): apply q first
    return _from_function(name, perms, labels, lambda p, q: tuple(p[q[x]] for x in range(3)))


def trivial(name: str = "1") -> FiniteGroup:
    return from_table(["1"], [[0]], name)


def _bundled() -> dict[str, FiniteGroup]:
    z2 = cyclic(2)
    z4 = cyclic(4)
    groups = [
        trivial(),
        z2,
        cyclic(3),
        z4,
        direct_product(z2, z2, "Z2xZ2"),
        cyclic(5),
        cyclic(6),
        symmetric3(),
        cyclic(7),
        dihedral(4, "D4"),
        quaternion("Q8"),
        cyclic(8),
        direct_product(z2, z4, "Z2xZ4"),
        direct_product(direct_product(z2, z2), z2, "Z2xZ2xZ2"),
    ]
    return {G.name: G for G in groups}


BUNDLED: dict[str, FiniteGroup] = _bundled()


def bundled_names() -> list[str]:
    return list(BUNDLED)


def load_group_file(path: str | Path) -> FiniteGroup:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return group_from_json(data)


def _int_entry(x):
    # CLI JSON output writes integers as decimal strings; accept both
    if isinstance(x, str) and x.lstrip("-").isdigit():
        return int(x)
    return x


def group_from_json(data: dict) -> FiniteGroup:
    rows = [[_int_entry(x) for x in row] for row in data["table"]]
    return from_table(data["labels"], rows, data.get("name", "G"))


def get_group(name_or_path: str) -> FiniteGroup:
    """Resolve a bundled group name, falling back to a JSON group file path."""
    if name_or_path in BUNDLED:
        return BUNDLED[name_or_path]
    path = Path(name_or_path)
    if path.is_file():
        return load_group_file(path)
    raise KeyError(f"unknown group {name_or_path!r}; bundled groups: {', '.join(BUNDLED)}")


def relabel(G: FiniteGroup, perm: Sequence[int], name: str | None = None) -> FiniteGroup:
    """Isomorphic copy in which old element g becomes index perm[g]."""
    n = G.order
    inv = [0] * n
    for old, new in enumerate(perm):
        inv[new] = old
    rows = [[perm[G.table[inv[a]][inv[b]]] for b in range(n)] for a in range(n)]
    labels = [G.labels[inv[a]] for a in range(n)]
    return from_table(labels, rows, name or f"{G.name}'")
