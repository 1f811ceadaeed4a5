"""Exact truncated Laurent series in q, eta quotients and the Hauptmoduln f1, f2, f4."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Sequence

from .errors import FractionalPower, PrecisionError, UnsupportedLevel

DEFAULT_PRECISION = 16
# extra exponents carried through quotients so that division does not eat the requested range
HEADROOM = 2


def _exact(c):
    if isinstance(c, int) and not isinstance(c, bool):
        return Fraction(c)
    return c


def _is_zero(c) -> bool:
    return c == 0


class LaurentSeries:
    """sum_{n >= leading} c_n q^n, known modulo O(q^precision).

    Coefficients are exact (``Fraction``, or ``Cyclotomic`` when a linear
    combination with character values is not rational).
    """

    __slots__ = ("leading", "coeffs", "precision")

    def __init__(self, leading: int, coeffs: Sequence, precision: int | None = None):
        coeffs = [_exact(c) for c in coeffs]
        if precision is None:
            precision = leading + len(coeffs)
        if precision < leading:
            leading = precision
        known = precision - leading
        if len(coeffs) < known:
            coeffs += [Fraction(0)] * (known - len(coeffs))
        self.leading = leading
        self.coeffs = tuple(coeffs[:known])
        self.precision = precision

    # -- construction -------------------------------------------------------
    @classmethod
    def from_dict(cls, terms: dict[int, object], precision: int) -> "LaurentSeries":
        keys = [k for k in terms if k < precision]
        lead = min(keys) if keys else precision
        return cls(lead, [terms.get(n, 0) for n in range(lead, precision)], precision)

    @classmethod
    def constant(cls, c, precision: int) -> "LaurentSeries":
        return cls(0, [c], precision) if precision > 0 else cls(precision, [], precision)

    @classmethod
    def zero(cls, precision: int) -> "LaurentSeries":
        return cls(precision, [], precision)

    # -- access ------------------------------------------------------------------
    def __getitem__(self, n: int):
        if n >= self.precision:
            raise PrecisionError(f"coefficient of q^{n} is beyond O(q^{self.precision})")
        if n < self.leading:
            return Fraction(0)
        return self.coeffs[n - self.leading]

    coefficient = __getitem__

    def items(self) -> Iterator[tuple[int, object]]:
        for k, c in enumerate(self.coeffs):
            yield self.leading + k, c

    def nonzero_items(self) -> Iterator[tuple[int, object]]:
        return ((n, c) for n, c in self.items() if not _is_zero(c))

    @property
    def valuation(self) -> int:
        """Exponent of the first nonzero known coefficient (precision if none)."""
        for n, c in self.items():
            if not _is_zero(c):
                return n
        return self.precision

    def truncate(self, precision: int) -> "LaurentSeries":
        if precision > self.precision:
            raise PrecisionError(f"cannot extend O(q^{self.precision}) to O(q^{precision})")
        return LaurentSeries(self.leading, self.coeffs, precision)

    def coefficient_list(self, start: int, stop: int) -> list:
        return [self[n] for n in range(start, stop)]

    # -- arithmetic --------------------------------------------------------------
    def _binary_add(self, other: "LaurentSeries", sign: int) -> "LaurentSeries":
        prec = min(self.precision, other.precision)
        lead = min(self.leading, other.leading)
        out = []
        for n in range(lead, prec):
            a = self[n]
            b = other[n]
            out.append(a + b if sign > 0 else a - b)
        return LaurentSeries(lead, out, prec)

    def __add__(self, other):
        if isinstance(other, LaurentSeries):
            return self._binary_add(other, 1)
        try:
            return self._binary_add(LaurentSeries.constant(other, self.precision), 1)
        except TypeError:
            return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, LaurentSeries):
            return self._binary_add(other, -1)
        return self._binary_add(LaurentSeries.constant(other, self.precision), -1)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return LaurentSeries(self.leading, [-c for c in self.coeffs], self.precision)

    def scale(self, c) -> "LaurentSeries":
        c = _exact(c)
        return LaurentSeries(self.leading, [c * x for x in self.coeffs], self.precision)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by q^k."""
        return LaurentSeries(self.leading + k, self.coeffs, self.precision + k)

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        va, vb = self.valuation, other.valuation
        prec = min(self.precision + vb, other.precision + va)
        lead = va + vb
        if prec <= lead:
            return LaurentSeries.zero(prec)
        a = [self[n] for n in range(va, min(self.precision, prec - vb))]
        b = [other[n] for n in range(vb, min(other.precision, prec - va))]
        out = [Fraction(0)] * (prec - lead)
        for i, x in enumerate(a):
            if _is_zero(x):
                continue
            for j in range(min(len(b), prec - lead - i)):
                y = b[j]
                if not _is_zero(y):
                    out[i + j] = out[i + j] + x * y
        return LaurentSeries(lead, out, prec)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentSeries":
        """1/f by iterative coefficient solving after factoring out the leading monomial."""
        v = self.valuation
        if v >= self.precision:
            raise ZeroDivisionError("series is zero to known precision")
        c0 = self[v]
        rel = self.precision - v
        f = [self[v + k] for k in range(rel)]
        inv0 = 1 / c0 if isinstance(c0, Fraction) else c0.inverse()
        g = [inv0]
        for n in range(1, rel):
            acc = Fraction(0)
            for k in range(1, n + 1):
                if not _is_zero(f[k]):
                    acc = acc + f[k] * g[n - k]
            g.append(-(acc * inv0))
        return LaurentSeries(-v, g, -v + rel)

    def __truediv__(self, other):
        if isinstance(other, LaurentSeries):
            return self * other.inverse()
        other = _exact(other)
        inv = 1 / other if isinstance(other, Fraction) else other.inverse()
        return self.scale(inv)

    def __pow__(self, e: int) -> "LaurentSeries":
        """Integer powers via the J.C.P. Miller recurrence on the unit part."""
        if not isinstance(e, int):
            return NotImplemented
        v = self.valuation
        if v >= self.precision:
            if e > 0 and self.precision > 0:
                return LaurentSeries.zero(self.precision * e)
            raise PrecisionError("power of a series with no known nonzero coefficient")
        c0 = self[v]
        rel = self.precision - v
        u = [self[v + k] / c0 for k in range(rel)]
        g = _unit_power(u, e, rel)
        return LaurentSeries(v * e, g, v * e + rel).scale(c0 ** e)

    # -- comparison and inspection -------------------------------------------------
    def agrees_with(self, other: "LaurentSeries", upto: int | None = None) -> bool:
        """Coefficientwise equality on [min leading, upto); both must be known there."""
        stop = min(self.precision, other.precision) if upto is None else upto
        if stop > self.precision or stop > other.precision:
            raise PrecisionError(f"comparison through q^{stop - 1} exceeds known precision")
        start = min(self.leading, other.leading)
        return all(self[n] == other[n] for n in range(start, stop))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self.agrees_with(other)

    __hash__ = None

    def is_integral(self) -> bool:
        return all(_is_integer(c) for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(isinstance(c, Fraction) or c.is_rational() for c in self.coeffs)

    def rationalized(self) -> "LaurentSeries":
        """Convert rational Cyclotomic coefficients to Fraction where possible."""
        out = []
        for c in self.coeffs:
            if not isinstance(c, Fraction) and c.is_rational():
                c = c.to_fraction()
            out.append(c)
        return LaurentSeries(self.leading, out, self.precision)

    def __repr__(self) -> str:
        return f"LaurentSeries({self})"

    def __str__(self) -> str:
        return format_series(self)


def _is_integer(c) -> bool:
    if isinstance(c, Fraction):
        return c.denominator == 1
    return c.is_integer()


def _unit_power(u: list, e: int, n: int) -> list:
    # (1 + u_1 q + ...)^e with g_k = (1/k) sum_{j=1..k} ((e + 1) j - k) u_j g_{k-j}
    g = [Fraction(1)]
    for k in range(1, n):
        acc = Fraction(0)
        for j in range(1, k + 1):
            if not _is_zero(u[j]):
                acc = acc + u[j] * g[k - j] * ((e + 1) * j - k)
        g.append(acc / k)
    return g


def format_series(f: LaurentSeries, var: str = "q") -> str:
    terms = []
    for n, c in f.nonzero_items():
        mono = "" if n == 0 else (var if n == 1 else f"{var}^{n}")
        s = str(c)
        if not isinstance(c, Fraction) and len(f"{c}".split()) > 1:
            s = f"({s})"
        if not mono:
            terms.append(s)
        elif s == "1":
            terms.append(mono)
        elif s == "-1":
            terms.append(f"-{mono}")
        else:
            terms.append(f"{s}{mono}" if isinstance(c, Fraction) and c.denominator == 1 else f"{s}*{mono}")
    terms.append(f"O({var}^{f.precision})")
    out = " + ".join(terms)
    return out.replace("+ -", "- ")


# -- eta products ------------------------------------------------------------------

@lru_cache(maxsize=32)
def _euler_product(n: int) -> tuple[int, ...]:
    """Coefficients of prod_{k >= 1} (1 - q^k) below q^n."""
    c = [0] * n
    if n:
        c[0] = 1
    for k in range(1, n):
        for m in range(n - 1, k - 1, -1):
            c[m] -= c[m - k]
    return tuple(c)


def eta_over_q24(precision: int) -> LaurentSeries:
    """eta(tau) / q^(1/24) = prod (1 - q^n), modulo O(q^precision)."""
    if precision < 1:
        raise ValueError("precision must be at least 1")
    return LaurentSeries(0, _euler_product(precision), precision)


def parse_eta_spec(text: str) -> list[tuple[int, int]]:
    """'1:24,2:-24' -> [(1, 24), (2, -24)]."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        m, _, e = part.partition(":")
        out.append((int(m), int(e)))
    if not out:
        raise ValueError("empty eta-quotient specification")
    return out


def eta_quotient(scales: Iterable[tuple[int, int]], precision: int = DEFAULT_PRECISION,
                 fractional_check: bool = True) -> LaurentSeries:
    """prod eta(M tau)^E over the (M, E) pairs, as a series in integral powers of q."""
    scales = [(int(m), int(e)) for m, e in scales]
    if any(m < 1 for m, _ in scales):
        raise ValueError("eta multipliers must be positive")
    weight24 = sum(m * e for m, e in scales)
    if weight24 % 24:
        if fractional_check:
            raise FractionalPower(f"q-prefactor q^({weight24}/24) is not an integral power of q")
    lead = weight24 // 24
    rel = max(precision - lead, 0) + HEADROOM
    result = LaurentSeries(0, [1], rel)
    for m, e in scales:
        if e == 0:
            continue
        base = _euler_product(-(-rel // m) + 1)
        stretched = [0] * rel
        for k, c in enumerate(base):
            if k * m < rel:
                stretched[k * m] = c
        factor = LaurentSeries(0, _unit_power([Fraction(c) for c in stretched], e, rel), rel)
        result = result * factor
    return LaurentSeries(lead, result.coeffs[: max(precision - lead, 0)], precision)


# -- Eisenstein series and Hauptmoduln ---------------------------------------------------

def _sigma(n: int, k: int) -> int:
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def eisenstein_e4(precision: int = DEFAULT_PRECISION) -> LaurentSeries:
    """E4 = 1 + 240 sum sigma_3(n) q^n."""
    if precision < 1:
        raise ValueError("precision must be at least 1")
    return LaurentSeries(0, [1] + [240 * _sigma(n, 3) for n in range(1, precision)], precision)


def discriminant(precision: int = DEFAULT_PRECISION) -> LaurentSeries:
    """Delta = eta^24 = q - 24 q^2 + ..."""
    return eta_quotient([(1, 24)], precision)


def klein_j(precision: int = DEFAULT_PRECISION) -> LaurentSeries:
    """J = E4^3 / Delta - 744."""
    work = precision + HEADROOM
    e4 = eisenstein_e4(work)
    j = (e4 * e4 * e4) * discriminant(work).inverse()
    return (j - 744).truncate(precision)


def _f2(precision: int) -> LaurentSeries:
    return eta_quotient([(1, 24), (2, -24)], precision) + 24


def _f4(precision: int) -> LaurentSeries:
    return eta_quotient([(1, 8), (4, -8)], precision) + 8


def odd_part_violations(f: LaurentSeries) -> list[int]:
    """Even exponents >= 2 carrying a nonzero coefficient; f4 has none."""
    return [n for n, c in f.items() if n >= 2 and n % 2 == 0 and c != 0]


HAUPTMODUL_CATALOG: dict[int, Callable[[int], LaurentSeries]] = {1: klein_j, 2: _f2, 4: _f4}


def register_hauptmodul(level: int, builder: Callable[[int], LaurentSeries]) -> None:
    HAUPTMODUL_CATALOG[level] = builder
    _hauptmodul_cached.cache_clear()


@lru_cache(maxsize=64)
def _hauptmodul_cached(level: int, precision: int) -> LaurentSeries:
    return HAUPTMODUL_CATALOG[level](precision)


def hauptmodul(level: int, precision: int = DEFAULT_PRECISION) -> LaurentSeries:
    """Normalised Hauptmodul q^-1 + O(q) for Gamma_0(level)."""
    if level not in HAUPTMODUL_CATALOG:
        raise UnsupportedLevel(f"no Hauptmodul of level {level} in the catalog "
                               f"(available: {sorted(HAUPTMODUL_CATALOG)})")
    f = _hauptmodul_cached(level, precision)
    if not f.is_integral():
        raise ArithmeticError(f"level-{level} Hauptmodul has a non-integral coefficient")
    if level == 4 and odd_part_violations(f):
        raise ArithmeticError(f"level-4 Hauptmodul has even-exponent terms at {odd_part_violations(f)}")
    return f
