"""Width-s weak moonshine assembled from a class -> Hauptmodul assignment."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

from .characters import CharacterTable, Report, get_table
from .cyclotomic import Cyclotomic
from .errors import DimensionTooSmall, UnsupportedOrder, ZeroTotalMultiplicity
from .frobenius import (
    check_budget, enumeration_budget, falling_product, r_char_recursive, tuples,
)
from .qseries import DEFAULT_PRECISION, HAUPTMODUL_CATALOG, LaurentSeries, hauptmodul

BUNDLED_SPEC_FILES = {"D4": "D4_moonshine.json", "Q8": "Q8_moonshine.json"}


@dataclass(frozen=True, eq=False)
class ModuleSpec:
    """One McKay-Thompson series T(1, C_j) per column of ``table``."""

    table: CharacterTable
    assignment: tuple[LaurentSeries, ...]
    precision: int
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.assignment) != self.table.size:
            raise ValueError(f"{len(self.assignment)} series for {self.table.size} conjugacy classes")
        if any(f.precision < self.precision for f in self.assignment):
            raise ValueError("every assigned series must be known through the shared precision")
        object.__setattr__(self, "assignment", tuple(f.truncate(self.precision) for f in self.assignment))

    @property
    def group(self):
        return self.table.group

    @property
    def pole_order(self) -> int:
        """d such that every assigned series starts at q^-d or later."""
        return max(0, -min(f.valuation for f in self.assignment))

    def series_for_element(self, g: int) -> LaurentSeries:
        return self.assignment[self.table.partition.class_of[g]]

    def identity_dominates(self) -> bool:
        """Graded-dimension sanity: the identity series is weakly largest in every known grade."""
        e = self.assignment[0]
        lo = min(f.leading for f in self.assignment)
        for f in self.assignment[1:]:
            for n in range(lo, self.precision):
                a, b = e[n], f[n]
                if isinstance(b, Cyclotomic) and not b.is_rational():
                    continue
                if Fraction(b if isinstance(b, Fraction) else b.to_fraction()) > a:
                    return False
        return True

    def to_json(self) -> dict:
        reps = self.table.class_labels()
        out: dict[str, Any] = {}
        for rep, name in zip(reps, self.names or [""] * len(reps)):
            out[rep] = {"level": int(name[1:])} if name.startswith("f") else {"series": name}
        return {"group": self.group.name, "assignment": out}


@dataclass
class MultiplicityTable:
    spec: ModuleSpec
    series: tuple[LaurentSeries, ...]
    integral: bool
    nonnegative: bool
    complete: bool
    negative: list[dict[str, Any]] = field(default_factory=list)
    nonintegral: list[dict[str, Any]] = field(default_factory=list)

    def __getitem__(self, i: int) -> LaurentSeries:
        return self.series[i]

    def __len__(self) -> int:
        return len(self.series)

    def m(self, i: int, n: int):
        return self.series[i][n]


def assignment_from_levels(table: CharacterTable, levels: Sequence[int],
                           precision: int = DEFAULT_PRECISION) -> ModuleSpec:
    series = tuple(hauptmodul(level, precision) for level in levels)
    return ModuleSpec(table, series, precision, tuple(f"f{level}" for level in levels))


def order_based_levels(table: CharacterTable) -> list[int]:
    """Level ord(g) for each class, which must be in the Hauptmodul catalog."""
    levels = []
    for label, order in zip(table.class_labels(), table.partition.orders):
        if order not in HAUPTMODUL_CATALOG:
            raise UnsupportedOrder(f"class of {label} has order {order}; no catalog Hauptmodul of that level")
        levels.append(order)
    return levels


def spec_from_json(data: dict, table: CharacterTable | None = None,
                   precision: int = DEFAULT_PRECISION) -> ModuleSpec:
    """{"group": name, "assignment": {class_rep: {"level": N}}}; any class member may label a class."""
    T = table or get_table(data["group"])
    G = T.group
    levels: list[int | None] = [None] * T.size
    for label, entry in data["assignment"].items():
        col = T.partition.class_of[G.index(label)]
        if levels[col] is not None:
            raise ValueError(f"class of {label} is assigned twice")
        levels[col] = int(entry["level"])
    missing = [T.class_labels()[k] for k, lv in enumerate(levels) if lv is None]
    if missing:
        raise ValueError(f"no series assigned to the classes of {', '.join(missing)}")
    return assignment_from_levels(T, levels, precision)


def load_spec_file(path: str | Path, precision: int = DEFAULT_PRECISION) -> ModuleSpec:
    return spec_from_json(json.loads(Path(path).read_text(encoding="utf-8")), precision=precision)


def default_assignment(table: CharacterTable, precision: int = DEFAULT_PRECISION,
                       by_order: bool = False) -> ModuleSpec:
    """The worked assignment for D4 and Q8, otherwise the level-ord(g) Hauptmodul per class.

    For D4 and Q8 both receive (f1, f2, f4, f2, f2) on the classes of
    (1, central involution, {r, r^3} resp. {i, -i}, and the remaining two).
    ``by_order=True`` ignores the bundled choice and uses ord(g) everywhere.
    """
    name = table.group.name
    if not by_order and name in BUNDLED_SPEC_FILES:
        from .groups import BUNDLED
        if BUNDLED.get(name) is table.group:
            text = resources.files("frobmoon.data").joinpath(BUNDLED_SPEC_FILES[name]).read_text("utf-8")
            return spec_from_json(json.loads(text), table, precision)
    return assignment_from_levels(table, order_based_levels(table), precision)


# -- multiplicities and higher McKay-Thompson series --------------------------------

def _combine(series: Sequence[LaurentSeries], weights: Sequence) -> LaurentSeries:
    """sum_k weights[k] * series[k] with exact coefficient arithmetic."""
    prec = min(f.precision for f in series)
    lead = min(f.leading for f in series)
    out = []
    for n in range(lead, prec):
        acc = Fraction(0)
        for f, w in zip(series, weights):
            if w == 0:
                continue
            c = f[n]
            if c != 0:
                acc = acc + w * c
        if isinstance(acc, Cyclotomic) and acc.is_rational():
            acc = acc.to_fraction()
        out.append(acc)
    return LaurentSeries(lead, out, prec)


def _as_weight(x: Cyclotomic):
    return x.to_fraction() if x.is_rational() else x


def multiplicities(spec: ModuleSpec) -> MultiplicityTable:
    """M_i = (1/|G|) sum_j |C_j| conj(chi_i(C_j)) T(1, C_j)."""
    T = spec.table
    n = T.group.order
    sizes = T.partition.sizes
    series = []
    for i in range(T.size):
        weights = [_as_weight(v.conjugate() * Fraction(sizes[j], n)) for j, v in enumerate(T.values[i])]
        series.append(_combine(spec.assignment, weights))
    negative, nonintegral = [], []
    for i, f in enumerate(series):
        for k, c in f.items():
            if isinstance(c, Cyclotomic) or c.denominator != 1:
                nonintegral.append({"i": i + 1, "n": k, "value": str(c)})
            elif c < 0:
                negative.append({"i": i + 1, "n": k, "value": str(c)})
    complete = all(any(c != 0 for _, c in f.items()) for f in series)
    return MultiplicityTable(spec, tuple(series), not nonintegral, not negative, complete,
                             negative, nonintegral)


def frob_values(table: CharacterTable, t: Sequence[int]) -> tuple[Cyclotomic, ...]:
    return tuple(r_char_recursive(table, i, t) for i in range(table.size))


def frob_series(spec: ModuleSpec, mult: MultiplicityTable, r: int, t: Sequence[int]) -> LaurentSeries:
    """T(r, t; tau) = sum_i chi_i^(r)(t) M_i(tau)."""
    t = tuple(t)
    if r < 1 or len(t) != r:
        raise ValueError(f"expected a tuple of length r = {r}, got {len(t)}")
    weights = [_as_weight(v) for v in frob_values(spec.table, t)]
    return _combine(mult.series, weights)


def frob_coefficient(mult: MultiplicityTable, r: int, t: Sequence[int], n: int):
    """Frob_r(t; n) = sum_i m_i(n) chi_i^(r)(t), evaluated at a single grade."""
    T = mult.spec.table
    acc = Fraction(0)
    for i, v in enumerate(frob_values(T, tuple(t))):
        c = mult.m(i, n)
        if c != 0 and not v.is_zero():
            acc = acc + v * c
    if isinstance(acc, Cyclotomic) and acc.is_rational():
        acc = acc.to_fraction()
    return acc


def recovery_prefactor(order: int, dim: int, r: int) -> Fraction:
    return Fraction(dim ** (r - 1), math.factorial(r) * order ** r * falling_product(dim, r))


def recover_multiplicities(spec: ModuleSpec, r: int, i: int,
                           mult: MultiplicityTable | None = None) -> LaurentSeries:
    """M_i rebuilt from the width-r series: prefactor * sum_t conj(chi_i^(r)(t)) T(r, t)."""
    T = spec.table
    dim = T.dims[i]
    if dim < r:
        raise DimensionTooSmall(f"dim chi_{i + 1} = {dim} < r = {r}")
    n = T.group.order
    check_budget(n, r)
    mult = mult or multiplicities(spec)
    series, weights = [], []
    for t in tuples(n, r):
        c = r_char_recursive(T, i, t)
        if c.is_zero():
            continue
        series.append(frob_series(spec, mult, r, t))
        weights.append(_as_weight(c.conjugate()))
    if not series:
        return LaurentSeries.zero(spec.precision)
    total = _combine(series, weights)
    return total.scale(recovery_prefactor(n, dim, r)).rationalized()


# -- asymptotic distribution -------------------------------------------------------------

@dataclass(frozen=True)
class DeltaRow:
    grade: int
    values: tuple[Fraction, ...]
    targets: tuple[Fraction, ...]

    def rendered(self, places: int = 5) -> tuple[str, ...]:
        """Digits cut after ``places`` decimals, the convention of "0.16779..." style tables."""
        return tuple(truncate_fraction(v, places) for v in self.values)

    def rounded(self, places: int = 5) -> tuple[str, ...]:
        return tuple(round_fraction(v, places) for v in self.values)


def truncate_fraction(x: Fraction, places: int = 5) -> str:
    """Decimal string of x truncated toward zero at ``places`` digits."""
    scale = 10 ** places
    q = abs(x.numerator) * scale // x.denominator
    sign = "-" if x < 0 and q else ""
    return f"{sign}{q // scale}.{q % scale:0{places}d}"


def round_fraction(x: Fraction, places: int = 5) -> str:
    """Decimal string of x rounded half-up at ``places`` digits, computed exactly."""
    scale = 10 ** places
    num = x.numerator * scale
    q, rem = divmod(abs(num), x.denominator)
    if 2 * rem >= x.denominator:
        q += 1
    sign = "-" if num < 0 and q else ""
    return f"{sign}{q // scale}.{q % scale:0{places}d}"


def asymptotic_deltas(mult: MultiplicityTable, n: int) -> DeltaRow:
    """delta_i(n) = m_i(n) / sum_j m_j(n), with limits dim chi_i / sum_j dim chi_j."""
    T = mult.spec.table
    ms = [mult.m(i, n) for i in range(len(mult))]
    if any(isinstance(c, Cyclotomic) for c in ms):
        raise ValueError(f"non-rational multiplicity at grade {n}")
    total = sum(ms, Fraction(0))
    if total == 0:
        raise ZeroTotalMultiplicity(f"all multiplicities vanish at grade {n}")
    dsum = sum(T.dims)
    return DeltaRow(n, tuple(Fraction(c) / total for c in ms), tuple(Fraction(d, dsum) for d in T.dims))


# -- certification -------------------------------------------------------------------------

@dataclass
class Certificate:
    group: str
    width: int
    precision: int
    integral: bool
    nonnegative: bool
    complete: bool
    identity_dominates: bool
    checks: list[Report] = field(default_factory=list)
    deltas: list[DeltaRow] = field(default_factory=list)
    negative: list[dict[str, Any]] = field(default_factory=list)
    nonintegral: list[dict[str, Any]] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.integral and self.nonnegative and all(c.ok for c in self.checks)

    def to_json(self) -> dict:
        return {
            "group": self.group, "width": self.width, "precision": self.precision,
            "passed": self.passed, "integral": self.integral, "nonnegative": self.nonnegative,
            "complete": self.complete, "identity_dominates": self.identity_dominates,
            "checks": [{"name": c.name, "checked": c.checked, "violations": c.violations} for c in self.checks],
            "negative": self.negative, "nonintegral": self.nonintegral,
            "deltas": [{"n": d.grade, "exact": [str(v) for v in d.values], "decimal": list(d.rendered()),
                        "limits": [str(v) for v in d.targets]} for d in self.deltas],
            "skipped": self.skipped,
        }


def certify(spec: ModuleSpec, width: int) -> Certificate:
    """Integrality, positivity and completeness of the multiplicities, plus width-r consistency checks."""
    T = spec.table
    G = T.group
    mult = multiplicities(spec)
    cert = Certificate(G.name, width, spec.precision, mult.integral, mult.nonnegative, mult.complete,
                       spec.identity_dominates(), negative=mult.negative, nonintegral=mult.nonintegral)
    lo = min(f.leading for f in mult.series)

    # sum_i dim chi_i M_i recovers the graded dimension T(1, e)
    rep = Report("graded dimension = sum of dim * multiplicity")
    rep.checked += 1
    total = _combine(mult.series, list(T.dims))
    if not total.agrees_with(spec.assignment[0]):
        rep.violations.append({"expected": str(spec.assignment[0]), "got": str(total)})
    cert.checks.append(rep)

    # width 1: Frob_1(g; n) reproduces the assigned trace of every element
    rep = Report("r = 1 series reproduce the assignment")
    for g in range(G.order):
        rep.checked += 1
        if not frob_series(spec, mult, 1, (g,)).agrees_with(spec.series_for_element(g)):
            rep.violations.append({"element": G.labels[g]})
    cert.checks.append(rep)

    budget = enumeration_budget()
    for r in range(1, width + 1):
        if G.order ** r > budget:
            cert.skipped.append(f"r = {r}: |G|^r exceeds the enumeration budget {budget}")
            continue
        rep = Report(f"r = {r}: series equal per-grade r-Frobenius traces and are class invariant")
        for t in tuples(G.order, r):
            f = frob_series(spec, mult, r, t)
            rep.checked += 1
            bad = [n for n in range(lo, spec.precision) if f[n] != frob_coefficient(mult, r, t, n)]
            if bad:
                rep.violations.append({"tuple": [G.labels[g] for g in t], "grades": bad})
            if not f.is_integral() and mult.integral:
                rep.violations.append({"tuple": [G.labels[g] for g in t], "non-integral": True})
            vals = frob_values(T, t)
            for h in range(G.order):
                conj = tuple(G.conj(h, g) for g in t)
                if frob_values(T, conj) != vals:
                    rep.violations.append({"tuple": [G.labels[g] for g in t], "conjugator": G.labels[h]})
                    break
        cert.checks.append(rep)

        rep = Report(f"r = {r}: multiplicities recovered from width-{r} series")
        for i in range(T.size):
            if T.dims[i] < r:
                continue
            rep.checked += 1
            got = recover_multiplicities(spec, r, i, mult)
            if not got.agrees_with(mult.series[i]):
                rep.violations.append({"i": i + 1, "got": str(got), "expected": str(mult.series[i])})
        cert.checks.append(rep)

    if mult.integral:
        for n in range(max(lo, 1), spec.precision):
            try:
                cert.deltas.append(asymptotic_deltas(mult, n))
            except ZeroTotalMultiplicity:
                continue
    return cert
