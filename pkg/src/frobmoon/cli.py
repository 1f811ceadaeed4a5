"""Command-line entry point: ``frobmoon <subcommand> ...``.

Exit status is 0 on success, 2 when a verification sweep finds a violated
identity and 1 on usage or input errors. JSON output writes every integer as a
decimal string so nothing is ever squeezed through a float.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from .characters import (
    CharacterTable, Report, compute_character_table, get_table, load_table_file, verify_table,
)
from .cyclotomic import Cyclotomic
from .distinguish import equivalent_up_to_width
from .errors import MoonshineError
from .frobenius import (
    r_char_cycle_formula, r_char_recursive, tuples, verify_lemmas, verify_orthogonality,
)
from .groups import BUNDLED, FiniteGroup, get_group
from .moonshine import (
    asymptotic_deltas, certify, default_assignment, frob_series, load_spec_file, multiplicities,
)
from .qseries import LaurentSeries, eta_quotient, hauptmodul, parse_eta_spec

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2
SAFE_WIDTHS = (1, 2, 3)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- output helpers ----------------------------------------------------------------

def _jsonable(x: Any) -> Any:
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Cyclotomic):
        return _jsonable(x.to_json())
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _dump(obj: Any) -> None:
    print(json.dumps(_jsonable(obj), indent=2, ensure_ascii=False))


def _series_json(f: LaurentSeries) -> dict:
    return {"leading": f.leading, "precision": f.precision,
            "coefficients": {str(n): c for n, c in f.items()}}


def _series_lines(f: LaurentSeries) -> list[str]:
    return [f"q^{n}: {c}" for n, c in f.items()]


def _pretty(f: LaurentSeries) -> str:
    """Nonzero terms only, without the O(q^N) tail."""
    out = str(f)
    head, sep, _ = out.rpartition(" + O(")
    if not sep:
        head, sep, _ = out.rpartition(" - O(")
    return head if sep else "0"


def _report_lines(rep: Report, limit: int = 5) -> list[str]:
    lines = [rep.summary()]
    for v in rep.violations[:limit]:
        lines.append("  violation: " + json.dumps(_jsonable(v), ensure_ascii=False))
    if len(rep.violations) > limit:
        lines.append(f"  ... {len(rep.violations) - limit} more")
    return lines


# -- argument resolution --------------------------------------------------------------

def _group(name: str) -> FiniteGroup:
    try:
        return get_group(name)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None


def _table(name: str, table_file: str | None = None) -> CharacterTable:
    if table_file:
        return load_table_file(table_file, _group(name))
    if name in BUNDLED:
        return get_table(name)
    return compute_character_table(_group(name))


def _elements(G: FiniteGroup, text: str) -> tuple[int, ...]:
    out = []
    for label in text.split(","):
        label = label.strip()
        try:
            out.append(G.index(label))
        except (KeyError, ValueError):
            raise UsageError(f"--tuple: {label!r} is not an element of {G.name} "
                             f"(elements: {', '.join(G.labels)})") from None
    return tuple(out)


def _prec(n: int) -> int:
    # --prec counts terms starting at the q^-1 pole
    if n < 2:
        raise UsageError(f"--prec must be at least 2, got {n}")
    return n - 1


def _width(n: int, unsafe: bool) -> int:
    if n < 1 or (n not in SAFE_WIDTHS and not unsafe):
        raise UsageError(f"--width/--max-width must be one of {SAFE_WIDTHS} (got {n}); "
                         "pass --unsafe-width to go further")
    return n


def _grades(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi if sep else lo)
    except ValueError:
        raise UsageError(f"--grades expects N or A..B, got {text!r}") from None
    if a < 1 or b < a:
        raise UsageError(f"--grades must be a nonempty range of positive grades, got {text!r}")
    return range(a, b + 1)


def _spec(args, precision: int):
    if getattr(args, "spec_file", None):
        return load_spec_file(args.spec_file, precision)
    return default_assignment(_table(args.group), precision, by_order=args.by_order)


# -- group -----------------------------------------------------------------------------

def cmd_group_list(args) -> int:
    rows = [{"name": n, "order": G.order, "classes": len(G.classes), "abelian": G.is_abelian()}
            for n, G in BUNDLED.items()]
    if args.json:
        _dump(rows)
    else:
        for r in rows:
            print(f"{r['name']:<10} order {r['order']:>2}  classes {r['classes']:>2}"
                  f"  {'abelian' if r['abelian'] else 'nonabelian'}")
    return EXIT_OK


def cmd_group_show(args) -> int:
    G = _group(args.group)
    if args.json:
        _dump(G.to_json())
        return EXIT_OK
    print(f"{G.name}: order {G.order}, exponent {G.exponent}, "
          f"{'abelian' if G.is_abelian() else 'nonabelian'}")
    w = max(len(s) for s in G.labels)
    print(" " * w + " | " + " ".join(s.rjust(w) for s in G.labels))
    print("-" * w + "-+-" + "-" * ((w + 1) * G.order - 1))
    for a in range(G.order):
        print(G.labels[a].rjust(w) + " | " + " ".join(G.labels[b].rjust(w) for b in G.table[a]))
    return EXIT_OK


def cmd_group_classes(args) -> int:
    G = _group(args.group)
    P = G.classes
    rows = [{"representative": G.labels[rep], "size": size, "order": order,
             "members": [G.labels[g] for g in cls]}
            for rep, size, order, cls in zip(P.representatives, P.sizes, P.orders, P.classes)]
    if args.json:
        _dump({"group": G.name, "classes": rows})
    else:
        for k, r in enumerate(rows, start=1):
            print(f"C{k}: rep {r['representative']}, size {r['size']}, order {r['order']}: "
                  f"{{{', '.join(r['members'])}}}")
    return EXIT_OK


# -- chartab ---------------------------------------------------------------------------

def cmd_chartab_show(args) -> int:
    T = _table(args.group, args.table)
    if args.json:
        _dump(T.to_json())
    else:
        print(T.format())
    return EXIT_OK


def cmd_chartab_verify(args) -> int:
    T = _table(args.group, args.table)
    rep = verify_table(T)
    rep.name = f"character table of {T.group.name}"
    if args.json:
        _dump({"name": rep.name, "checked": rep.checked, "ok": rep.ok, "violations": rep.violations})
    else:
        print("\n".join(_report_lines(rep)))
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def cmd_chartab_compute(args) -> int:
    G = _group(args.group)
    T = compute_character_table(G, bound=args.bound)
    if args.json:
        _dump(T.to_json())
    else:
        print(T.format())
    return EXIT_OK


# -- rchar -----------------------------------------------------------------------------

def _char_index(T: CharacterTable, k: int) -> int:
    if not 1 <= k <= T.size:
        raise UsageError(f"--char must be between 1 and {T.size}, got {k}")
    return k - 1


def cmd_rchar_eval(args) -> int:
    T = _table(args.group)
    t = _elements(T.group, args.tuple)
    chars = [_char_index(T, args.char)] if args.char is not None else list(range(T.size))
    values = [(i, r_char_recursive(T, i, t)) for i in chars]
    if args.json:
        _dump({"group": T.group.name, "tuple": [T.group.labels[g] for g in t], "r": len(t),
               "values": {str(i + 1): v for i, v in values}})
    elif args.char is not None:
        print(values[0][1])
    else:
        for i, v in values:
            print(f"chi{i + 1}^({len(t)}): {v}")
    return EXIT_OK


def cmd_rchar_orthogonality(args) -> int:
    T = _table(args.group)
    width = _width(args.max_width, args.unsafe_width)
    rep = verify_orthogonality(T, width)
    if args.json:
        _dump({"name": rep.name, "checked": rep.checked, "ok": rep.ok, "violations": rep.violations})
    else:
        print("\n".join(_report_lines(rep)))
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def cmd_rchar_lemmas(args) -> int:
    T = _table(args.group)
    width = _width(args.max_width, args.unsafe_width)
    rep = verify_lemmas(T, width)
    if args.json:
        _dump({"name": rep.name, "checked": rep.checked, "ok": rep.ok, "violations": rep.violations})
    else:
        print("\n".join(_report_lines(rep)))
    return EXIT_OK if rep.ok else EXIT_VIOLATION


# -- series ----------------------------------------------------------------------------

def _emit_series(f: LaurentSeries, as_json: bool, header: dict) -> None:
    if as_json:
        _dump({**header, **_series_json(f)})
    else:
        print("\n".join(_series_lines(f)))


def cmd_series_hauptmodul(args) -> int:
    f = hauptmodul(args.level, _prec(args.prec))
    _emit_series(f, args.json, {"level": args.level})
    return EXIT_OK


def cmd_series_eta(args) -> int:
    try:
        scales = parse_eta_spec(args.spec)
    except ValueError:
        raise UsageError(f"--spec expects M:E pairs such as 1:24,2:-24, got {args.spec!r}") from None
    if args.prec < 1:
        raise UsageError(f"--prec must be positive, got {args.prec}")
    w24 = sum(m * e for m, e in scales)
    lead = w24 // 24
    f = eta_quotient(scales, lead + args.prec)
    _emit_series(f, args.json, {"spec": args.spec})
    return EXIT_OK


# -- moonshine -------------------------------------------------------------------------

def cmd_moonshine_multiplicities(args) -> int:
    spec = _spec(args, _prec(args.prec))
    mult = multiplicities(spec)
    if args.json:
        _dump({"group": spec.group.name, "assignment": spec.to_json()["assignment"],
               "integral": mult.integral, "nonnegative": mult.nonnegative, "complete": mult.complete,
               "multiplicities": [_series_json(f) for f in mult.series]})
        return EXIT_OK
    for i, f in enumerate(mult.series, start=1):
        print(f"M{i} = {f}")
    flags = [("integral", mult.integral), ("nonnegative", mult.nonnegative), ("complete", mult.complete)]
    print("; ".join(f"{k}: {'yes' if v else 'no'}" for k, v in flags))
    return EXIT_OK


def cmd_moonshine_mt(args) -> int:
    spec = _spec(args, _prec(args.prec))
    width = _width(args.width, args.unsafe_width)
    t = _elements(spec.group, args.tuple)
    if len(t) != width:
        raise UsageError(f"--tuple has {len(t)} entries but --width is {width}")
    f = frob_series(spec, multiplicities(spec), width, t)
    if args.json:
        _dump({"group": spec.group.name, "r": width, "tuple": [spec.group.labels[g] for g in t],
               **_series_json(f)})
    else:
        print(_pretty(f))
    return EXIT_OK


def cmd_moonshine_certify(args) -> int:
    spec = _spec(args, _prec(args.prec))
    width = _width(args.width, args.unsafe_width)
    cert = certify(spec, width)
    if args.json:
        _dump(cert.to_json())
    else:
        print(f"{cert.group}, width {cert.width}, through q^{cert.precision - 1}: "
              f"{'certified' if cert.passed else 'FAILED'}")
        print(f"integral: {cert.integral}; nonnegative: {cert.nonnegative}; complete: {cert.complete}; "
              f"identity series dominates: {cert.identity_dominates}")
        for rep in cert.checks:
            print("\n".join(_report_lines(rep)))
        for s in cert.skipped:
            print(f"skipped: {s}")
    return EXIT_OK if cert.passed else EXIT_VIOLATION


def cmd_moonshine_deltas(args) -> int:
    grades = _grades(args.grades)
    spec = _spec(args, grades[-1] + 1)
    mult = multiplicities(spec)
    rows = [asymptotic_deltas(mult, n) for n in grades]
    if args.json:
        _dump({"group": spec.group.name, "limits": [str(v) for v in rows[0].targets],
               "rows": [{"n": r.grade, "exact": [str(v) for v in r.values],
                         "decimal": list(r.rendered(args.places)),
                         "rounded": list(r.rounded(args.places))} for r in rows]})
        return EXIT_OK
    t = spec.table.size
    print("n  " + "  ".join(f"delta{i + 1}".ljust(args.places + 5) for i in range(t)))
    for r in rows:
        print(f"{r.grade}  " + "  ".join(f"{s}..." for s in r.rendered(args.places)))
    print("limits: " + ", ".join(str(v) for v in rows[0].targets))
    return EXIT_OK


# -- distinguish -----------------------------------------------------------------------

def cmd_distinguish(args) -> int:
    T, U = _table(args.group_a), _table(args.group_b)
    v = equivalent_up_to_width(T, U, args.width, preserve_power_maps=args.strict)
    if args.json:
        _dump(v.to_json())
        return EXIT_OK
    print(f"{v.left} vs {v.right} at width {v.width}: {'equivalent' if v.equivalent else 'separated'}")
    print(f"reason: {v.reason}")
    if v.witness:
        w = v.witness
        print(f"witness: chi{w.character + 1}^({w.r})({', '.join(w.labels)}) = {w.left[w.character]} "
              f"but chi'{w.character + 1}^({w.r})({', '.join(w.image_labels)}) = {w.right[w.character]}")
    if v.bijection:
        print("bijection: " + ", ".join(f"{a}->{b}" for a, b in v.bijection.items()))
    for note in v.notes:
        print(f"note: {note}")
    return EXIT_OK


# -- verify ----------------------------------------------------------------------------

def _cross_formula(T: CharacterTable, width: int, rng: random.Random, samples: int) -> Report:
    """Recursion against the S_r cycle expansion: exhaustive for r <= 3, sampled above."""
    G = T.group
    rep = Report(f"recursion = cycle expansion on {G.name}")
    for r in range(1, width + 1):
        if r <= 3:
            pool = tuples(G.order, r)
        else:
            pool = [tuple(rng.randrange(G.order) for _ in range(r)) for _ in range(samples)]
        for t in pool:
            for i in range(T.size):
                rep.checked += 1
                a, b = r_char_recursive(T, i, t), r_char_cycle_formula(T, i, t)
                if a != b:
                    rep.violations.append({"i": i + 1, "tuple": [G.labels[g] for g in t],
                                           "recursion": str(a), "cycles": str(b)})
    return rep


def cmd_verify_all(args) -> int:
    width = _width(args.max_width, args.unsafe_width)
    rng = random.Random(args.seed)
    reports = []
    for name, G in BUNDLED.items():
        if G.order > args.max_order:
            continue
        T = get_table(name)
        rep = verify_table(T)
        rep.name = f"character table of {name}"
        reports.extend([rep, verify_orthogonality(T, width), verify_lemmas(T, width),
                        _cross_formula(T, width, rng, args.samples)])
    total = sum(r.checked for r in reports)
    bad = [r for r in reports if not r.ok]
    if args.json:
        _dump({"checked": total, "ok": not bad,
               "reports": [{"name": r.name, "checked": r.checked, "violations": r.violations}
                           for r in reports]})
    else:
        for r in reports:
            print("\n".join(_report_lines(r)))
        groups = len(reports) // 4
        print(f"verified {total} identities over {groups} groups up to width {width}: "
              f"{'all hold' if not bad else f'{len(bad)} sweep(s) with violations'}")
    return EXIT_OK if not bad else EXIT_VIOLATION


# -- parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="frobmoon", description="Frobenius r-characters and width-s weak moonshine.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def leaf(parent, name, func, help_):
        q = parent.add_parser(name, help=help_)
        q.set_defaults(func=func)
        q.add_argument("--json", action="store_true", help="machine-readable output")
        return q

    def unsafe(q):
        q.add_argument("--unsafe-width", action="store_true",
                       help="allow widths above 3 (subject to MOONSHINE_BUDGET)")

    g = sub.add_parser("group", help="bundled groups and group files").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    leaf(g, "list", cmd_group_list, "list bundled groups")
    leaf(g, "show", cmd_group_show, "print a Cayley table").add_argument("group")
    leaf(g, "classes", cmd_group_classes, "conjugacy classes").add_argument("group")

    c = sub.add_parser("chartab", help="character tables").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    q = leaf(c, "show", cmd_chartab_show, "print a character table")
    q.add_argument("group")
    q.add_argument("--table", help="character-table JSON file for the group")
    q = leaf(c, "verify", cmd_chartab_verify, "check orthogonality and degree identities")
    q.add_argument("group")
    q.add_argument("--table", help="character-table JSON file for the group")
    q = leaf(c, "compute", cmd_chartab_compute, "compute a table from a group file or name")
    q.add_argument("group")
    q.add_argument("--bound", type=int, default=32, help="largest group order accepted")

    r = sub.add_parser("rchar", help="Frobenius r-characters").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    q = leaf(r, "eval", cmd_rchar_eval, "evaluate chi^(r) on a tuple")
    q.add_argument("--group", required=True)
    q.add_argument("--char", type=int, help="1-based character index (default: all)")
    q.add_argument("--tuple", required=True, help="comma-separated labels; use --tuple=-k,k for labels with '-'")
    q = leaf(r, "verify-orthogonality", cmd_rchar_orthogonality, "exhaustive orthogonality sweep")
    q.add_argument("--group", required=True)
    q.add_argument("--max-width", type=int, default=3)
    unsafe(q)
    q = leaf(r, "verify-lemmas", cmd_rchar_lemmas, "auxiliary identities, zero sums and vanishing")
    q.add_argument("--group", required=True)
    q.add_argument("--max-width", type=int, default=3)
    unsafe(q)

    s = sub.add_parser("series", help="q-series").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    q = leaf(s, "hauptmodul", cmd_series_hauptmodul, "normalised Hauptmodul of level 1, 2 or 4")
    q.add_argument("--level", type=int, required=True)
    q.add_argument("--prec", type=int, default=16, help="number of terms from q^-1")
    q = leaf(s, "eta-quotient", cmd_series_eta, "product of eta(M tau)^E")
    q.add_argument("--spec", required=True, help='M:E pairs, e.g. "1:24,2:-24"')
    q.add_argument("--prec", type=int, default=16, help="number of terms from the leading power")

    m = sub.add_parser("moonshine", help="multiplicities and McKay-Thompson series").add_subparsers(
        dest="action", required=True, parser_class=_Parser)

    def module(q, prec=8):
        q.add_argument("--group", required=True)
        q.add_argument("--spec", dest="spec_file", help="assignment JSON file (overrides --group default)")
        q.add_argument("--by-order", action="store_true", help="assign the level-ord(g) Hauptmodul to each class")
        if prec:
            q.add_argument("--prec", type=int, default=prec, help="number of terms from q^-1")

    module(leaf(m, "multiplicities", cmd_moonshine_multiplicities, "multiplicity generating functions"))
    q = leaf(m, "mt", cmd_moonshine_mt, "width-r McKay-Thompson series of a tuple")
    module(q, prec=5)
    q.add_argument("--width", type=int, required=True)
    q.add_argument("--tuple", required=True)
    unsafe(q)
    q = leaf(m, "certify", cmd_moonshine_certify, "integrality, positivity and width-r consistency")
    module(q)
    q.add_argument("--width", type=int, default=2)
    unsafe(q)
    q = leaf(m, "deltas", cmd_moonshine_deltas, "asymptotic distribution of multiplicities")
    module(q, prec=0)
    q.add_argument("--grades", default="1..4")
    q.add_argument("--places", type=int, default=5)

    q = leaf(sub, "distinguish", cmd_distinguish, "compare two groups through r-characters")
    q.add_argument("group_a")
    q.add_argument("group_b")
    q.add_argument("--width", type=int, choices=SAFE_WIDTHS, required=True)
    q.add_argument("--strict", action="store_true",
                   help="class matchings must also preserve element orders and power maps")

    v = sub.add_parser("verify", help="verification sweeps").add_subparsers(
        dest="action", required=True, parser_class=_Parser)
    q = leaf(v, "all", cmd_verify_all, "every identity on every bundled group")
    q.add_argument("--max-order", type=int, default=8)
    q.add_argument("--max-width", type=int, default=3)
    q.add_argument("--seed", type=int, default=0, help="seed for sampled checks above width 3")
    q.add_argument("--samples", type=int, default=200, help="sampled tuples per width above 3")
    unsafe(q)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"frobmoon: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MoonshineError, KeyError, ValueError, OSError, json.JSONDecodeError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"frobmoon: error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
