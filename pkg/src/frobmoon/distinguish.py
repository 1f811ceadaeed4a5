"""Separate groups by comparing r-characters under class-compatible element bijections.

Two groups are called equivalent at width s when some bijection theta between
their elements, mapping each conjugacy class onto a matched class, satisfies
chi^(r)(g_1..g_r) = chi'^(r)(theta g_1..theta g_r) for every r <= s, every
tuple and every character (rows matched along with the classes).
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator

from .characters import CharacterTable
from .cyclotomic import Cyclotomic
from .errors import BoundExceeded
from .frobenius import r_char_recursive

MAX_ORDER = 16
MAX_WIDTH = 3
ASSIGNMENT_CAP = 10 ** 6
MATCHING_CAP = 10 ** 5

INTERPRETATION = (
    "bijection-constrained comparison: theta maps each class onto its matched class and every "
    "r-character value must agree tuple by tuple (value multisets are not compared)")
SCOPE_NOTE = (
    "equivalence at width s is a bounded statement, not an isomorphism claim; only agreement of "
    "1-, 2- and 3-characters (s >= 3) together with complete moonshine pins down the group up to isomorphism")


@dataclass(frozen=True)
class ClassMatching:
    """class_map[j] is the column of H matched to column j of G; row_map likewise for characters."""

    class_map: tuple[int, ...]
    row_map: tuple[int, ...]


@dataclass(frozen=True)
class SeparationWitness:
    r: int
    tuple: tuple[int, ...]
    image: tuple[int, ...]
    left: tuple[Cyclotomic, ...]
    right: tuple[Cyclotomic, ...]
    character: int
    labels: tuple[str, ...] = ()
    image_labels: tuple[str, ...] = ()
    row_map: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {
            "r": self.r, "tuple": list(self.labels), "image": list(self.image_labels),
            "character": self.character + 1,
            "values": [v.to_json() for v in self.left], "image_values": [v.to_json() for v in self.right],
        }


@dataclass
class Verdict:
    equivalent: bool
    width: int
    left: str
    right: str
    matching: ClassMatching | None = None
    bijection: dict[str, str] | None = None
    witness: SeparationWitness | None = None
    reason: str = ""
    notes: list[str] = field(default_factory=lambda: [INTERPRETATION, SCOPE_NOTE])

    def to_json(self) -> dict:
        return {
            "left": self.left, "right": self.right, "width": self.width,
            "verdict": "equivalent" if self.equivalent else "separated",
            "reason": self.reason,
            "bijection": self.bijection,
            "witness": self.witness.to_json() if self.witness else None,
            "notes": self.notes,
        }


def _power_signature(T: CharacterTable, j: int, exponent: int) -> tuple[int, ...]:
    G, P = T.group, T.partition
    return tuple(P.class_of[G.power(P.representatives[j], k)] for k in range(exponent + 1))


def iter_class_matchings(T: CharacterTable, U: CharacterTable,
                         preserve_power_maps: bool = False) -> Iterator[ClassMatching]:
    """Column bijections matching class sizes under which the value matrices coincide.

    With ``preserve_power_maps`` the matching must also respect element orders
    and commute with every power map.
    """
    if T.group.order != U.group.order or T.size != U.size:
        return
    t = T.size
    cols_T = [tuple(T.values[i][j] for i in range(t)) for j in range(t)]
    cols_U = [tuple(U.values[i][j] for i in range(t)) for j in range(t)]
    sig_T = [(T.partition.sizes[j], Counter(cols_T[j])) for j in range(t)]
    sig_U = [(U.partition.sizes[j], Counter(cols_U[j])) for j in range(t)]
    if preserve_power_maps:
        ex = max(T.group.exponent, U.group.exponent)
        pow_T = [_power_signature(T, j, ex) for j in range(t)]
        pow_U = [_power_signature(U, j, ex) for j in range(t)]

    def consistent(assign: list[int]) -> bool:
        # partial rows of T must be a permutation of the partial rows of U
        k = len(assign)
        left = Counter(tuple(T.values[i][j] for j in range(k)) for i in range(t))
        right = Counter(tuple(U.values[i][assign[j]] for j in range(k)) for i in range(t))
        if left != right:
            return False
        if preserve_power_maps:
            for j in range(k):
                if T.partition.orders[j] != U.partition.orders[assign[j]]:
                    return False
                for a, b in zip(pow_T[j], pow_U[assign[j]]):
                    if a < k and assign[a] != b:
                        return False
        return True

    def extend(assign: list[int], used: set[int]) -> Iterator[list[int]]:
        j = len(assign)
        if j == t:
            yield list(assign)
            return
        for c in range(t):
            if c in used or sig_T[j] != sig_U[c]:
                continue
            assign.append(c)
            if consistent(assign):
                used.add(c)
                yield from extend(assign, used)
                used.discard(c)
            assign.pop()

    rows_U = {tuple(U.values[i]): i for i in range(t)}
    for cmap in extend([], set()):
        row_map = []
        for i in range(t):
            key = [None] * t
            for j in range(t):
                key[cmap[j]] = T.values[i][j]
            row_map.append(rows_U[tuple(key)])
        yield ClassMatching(tuple(cmap), tuple(row_map))


def compatible_class_matchings(T: CharacterTable, U: CharacterTable,
                               preserve_power_maps: bool = False,
                               cap: int = MATCHING_CAP) -> list[ClassMatching]:
    out = []
    for m in iter_class_matchings(T, U, preserve_power_maps):
        out.append(m)
        if len(out) > cap:
            raise BoundExceeded(f"more than {cap} compatible class matchings")
    return out


class _Search:
    def __init__(self, T: CharacterTable, U: CharacterTable, m: ClassMatching, width: int):
        self.T, self.U, self.m, self.width = T, U, m, width
        self.n = T.group.order
        self.theta: list[int | None] = [None] * self.n
        self.used: set[int] = set()
        self.first_witness: SeparationWitness | None = None

    def _values(self, t: tuple[int, ...]) -> tuple[tuple[Cyclotomic, ...], tuple[Cyclotomic, ...]]:
        image = tuple(self.theta[g] for g in t)
        left = tuple(r_char_recursive(self.T, i, t) for i in range(self.T.size))
        right = tuple(r_char_recursive(self.U, self.m.row_map[i], image) for i in range(self.T.size))
        return left, right

    def violation(self, k: int) -> SeparationWitness | None:
        """First (r, tuple) among tuples over elements 0..k that use element k."""
        for r in range(2, self.width + 1):
            for t in itertools.product(range(k + 1), repeat=r):
                if k not in t:
                    continue
                left, right = self._values(t)
                if left != right:
                    image = tuple(self.theta[g] for g in t)
                    i = next(i for i in range(len(left)) if left[i] != right[i])
                    return SeparationWitness(
                        r, t, image, left, right, i,
                        tuple(self.T.group.labels[g] for g in t),
                        tuple(self.U.group.labels[g] for g in image), self.m.row_map)
        return None

    def run(self, k: int = 0) -> bool:
        if k == self.n:
            return True
        target_class = self.m.class_map[self.T.partition.class_of[k]]
        for h in self.U.partition.classes[target_class]:
            if h in self.used:
                continue
            self.theta[k] = h
            self.used.add(h)
            w = self.violation(k)
            if w is None:
                if self.run(k + 1):
                    return True
            elif self.first_witness is None:
                self.first_witness = w
            self.used.discard(h)
            self.theta[k] = None
        return False


def equivalent_up_to_width(T: CharacterTable, U: CharacterTable, width: int,
                           preserve_power_maps: bool = False) -> Verdict:
    G, H = T.group, U.group
    if width < 1 or width > MAX_WIDTH:
        raise BoundExceeded(f"width must be between 1 and {MAX_WIDTH}")
    if max(G.order, H.order) > MAX_ORDER:
        raise BoundExceeded(f"bijection search is limited to groups of order <= {MAX_ORDER}")
    verdict = Verdict(False, width, G.name, H.name)
    if G.order != H.order:
        verdict.reason = f"orders differ ({G.order} vs {H.order})"
        return verdict
    witness = None
    any_matching = False
    for m in iter_class_matchings(T, U, preserve_power_maps):
        any_matching = True
        cost = math.prod(math.factorial(s) for s in T.partition.sizes)
        if cost > ASSIGNMENT_CAP:
            raise BoundExceeded(f"{cost} element assignments per class matching exceeds {ASSIGNMENT_CAP}")
        search = _Search(T, U, m, width)
        if search.run():
            verdict.equivalent = True
            verdict.matching = m
            verdict.bijection = {G.labels[g]: H.labels[search.theta[g]] for g in range(G.order)}
            verdict.reason = f"all r-characters agree for r <= {width}"
            return verdict
        if witness is None:
            witness = search.first_witness
    if not any_matching:
        verdict.reason = "no class matching identifies the character tables"
    else:
        verdict.reason = f"every class-compatible bijection breaks an r-character identity for some r <= {width}"
        verdict.witness = witness
    return verdict


def verify_witness(T: CharacterTable, U: CharacterTable, w: SeparationWitness, row_map=None) -> bool:
    """Recompute both sides of a witness from scratch."""
    row_map = w.row_map if row_map is None else row_map
    left = r_char_recursive(T, w.character, w.tuple)
    right = r_char_recursive(U, row_map[w.character], w.image)
    return left == w.left[w.character] and right == w.right[w.character] and left != right
