"""Exact arithmetic in cyclotomic fields Q(zeta_m).

Elements are stored in the power basis ``1, z, ..., z^(phi(m)-1)`` where ``z``
is ``exp(2*pi*i/m)``, reduced modulo the m-th cyclotomic polynomial. Rational
elements are always normalised to ``m == 1`` so that hashing and printing
do not depend on the field an element happened to be computed in.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction, "Cyclotomic"]


def _poly_divmod_monic(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # coefficient lists are lowest degree first; den is monic
    num = list(num)
    dd = len(den) - 1
    quo = [0] * max(len(num) - dd, 1)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        if c:
            quo[k - dd] = c
            for j in range(dd + 1):
                num[k - dd + j] -= c * den[j]
    return quo, num[:dd]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError("modulus must be positive")
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num, rem = _poly_divmod_monic(num, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return tuple(num)


@lru_cache(maxsize=None)
def euler_phi(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


@lru_cache(maxsize=None)
def _mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


@lru_cache(maxsize=None)
def _power_reductions(m: int) -> tuple[tuple[Fraction, ...], ...]:
    """Row k holds z^k for 0 <= k < m written in the reduced power basis."""
    phi = cyclotomic_polynomial(m)
    deg = len(phi) - 1
    rows: list[list[int]] = []
    cur = [1] + [0] * (deg - 1) if deg else []
    for _ in range(m):
        rows.append(list(cur))
        # multiply by z, then fold z^deg = -sum(phi[j] z^j)
        top = cur[-1] if deg else 0
        cur = [0] + cur[:-1] if deg else []
        for j in range(deg):
            cur[j] -= top * phi[j]
    return tuple(tuple(Fraction(c) for c in row) for row in rows)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class Cyclotomic:
    """An element of Q(zeta_m) with exact rational coordinates."""

    __slots__ = ("m", "coeffs", "_hash")

    def __init__(self, m: int, coeffs: Sequence):
        """Build from power-basis coefficients of any length; exponents wrap mod m."""
        if m < 1:
            raise ValueError("modulus must be positive")
        deg = euler_phi(m)
        red = _power_reductions(m)
        acc = [Fraction(0)] * deg
        for k, c in enumerate(coeffs):
            c = _as_fraction(c)
            if c:
                row = red[k % m]
                for j in range(deg):
                    if row[j]:
                        acc[j] += c * row[j]
        self._set(m, acc)

    def _set(self, m: int, acc: list[Fraction]) -> None:
        if m != 1 and not any(acc[1:]):
            m, acc = 1, acc[:1]
        self.m = m
        self.coeffs = tuple(acc)
        self._hash = None

    @classmethod
    def _raw(cls, m: int, acc: list[Fraction]) -> "Cyclotomic":
        obj = object.__new__(cls)
        obj._set(m, acc)
        return obj

    # -- constructors -----------------------------------------------------
    @classmethod
    def rational(cls, x) -> "Cyclotomic":
        return cls._raw(1, [_as_fraction(x)])

    @classmethod
    def root_of_unity(cls, m: int, k: int = 1) -> "Cyclotomic":
        """zeta_m ** k."""
        return cls._raw(m, list(_power_reductions(m)[k % m])) if m > 1 else cls.rational(1)

    @classmethod
    def coerce(cls, x: Number) -> "Cyclotomic":
        if isinstance(x, Cyclotomic):
            return x
        return cls.rational(x)

    # -- field embeddings -------------------------------------------------
    def lift(self, n: int) -> "Cyclotomic":
        """Rewrite in Q(zeta_n); requires m | n."""
        if n % self.m:
            raise ValueError(f"Q(zeta_{self.m}) is not contained in Q(zeta_{n})")
        if n == self.m or self.m == 1:
            return self
        step = n // self.m
        full = [Fraction(0)] * n
        for k, c in enumerate(self.coeffs):
            full[k * step] = c
        return Cyclotomic(n, full)

    def _common(self, other: "Cyclotomic") -> tuple[int, "Cyclotomic", "Cyclotomic"]:
        if self.m == other.m:
            return self.m, self, other
        if other.m == 1:
            return self.m, self, other
        if self.m == 1:
            return other.m, self, other
        n = self.m * other.m // math.gcd(self.m, other.m)
        return n, self.lift(n), other.lift(n)

    # -- predicates -------------------------------------------------------
    def is_rational(self) -> bool:
        return self.m == 1

    def is_integer(self) -> bool:
        return self.m == 1 and self.coeffs[0].denominator == 1

    def is_zero(self) -> bool:
        return self.m == 1 and self.coeffs[0] == 0

    def to_fraction(self) -> Fraction:
        if self.m != 1:
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Cyclotomic):
            if isinstance(other, (int, Fraction)):
                acc = list(self.coeffs)
                acc[0] += other
                return Cyclotomic._raw(self.m, acc)
            return NotImplemented
        m, a, b = self._common(other)
        if b.m == 1:
            acc = list(a.coeffs)
            acc[0] += b.coeffs[0]
        elif a.m == 1:
            acc = list(b.coeffs)
            acc[0] += a.coeffs[0]
        else:
            acc = [x + y for x, y in zip(a.coeffs, b.coeffs)]
        return Cyclotomic._raw(m, acc)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._raw(self.m, [-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if not isinstance(other, Cyclotomic):
            if isinstance(other, (int, Fraction)):
                return Cyclotomic._raw(self.m, [c * other for c in self.coeffs])
            return NotImplemented
        if other.m == 1:
            s = other.coeffs[0]
            return Cyclotomic._raw(self.m, [c * s for c in self.coeffs])
        if self.m == 1:
            s = self.coeffs[0]
            return Cyclotomic._raw(other.m, [c * s for c in other.coeffs])
        m, a, b = self._common(other)
        prod = [Fraction(0)] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return Cyclotomic(m, prod)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (Cyclotomic.rational(1) / self) ** (-k)
        result, base = Cyclotomic.rational(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def galois(self, k: int) -> "Cyclotomic":
        """Apply the automorphism z -> z^k (k coprime to m)."""
        if math.gcd(k, self.m) != 1:
            raise ValueError("Galois exponent must be coprime to the modulus")
        full = [Fraction(0)] * self.m
        for j, c in enumerate(self.coeffs):
            full[(j * k) % self.m] += c
        return Cyclotomic(self.m, full)

    def conjugate(self) -> "Cyclotomic":
        """Complex conjugation, z -> z^-1."""
        if self.m == 1:
            return self
        return self.galois(-1 % self.m)

    def norm(self) -> Fraction:
        """Field norm down to Q, computed over Q(zeta_m)."""
        result = Cyclotomic.rational(1)
        for k in range(1, self.m + 1):
            if math.gcd(k, self.m) == 1:
                result = result * self.galois(k)
        return result.to_fraction()

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in cyclotomic field")
        if self.m == 1:
            return Cyclotomic.rational(1 / self.coeffs[0])
        # x^-1 = (product of the other conjugates) / N(x)
        other = Cyclotomic.rational(1)
        for k in range(2, self.m + 1):
            if math.gcd(k, self.m) == 1:
                other = other * self.galois(k)
        return other * (1 / self.norm())

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, Cyclotomic):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    # -- comparison and hashing ------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.m == 1 and self.coeffs[0] == other
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        if self.m == 1 or other.m == 1:
            return self.m == other.m and self.coeffs == other.coeffs
        _, a, b = self._common(other)
        return a.coeffs == b.coeffs

    def normalized_trace(self) -> Fraction:
        """Tr(x)/[Q(zeta_m):Q]; independent of the ambient cyclotomic field."""
        total = Fraction(0)
        for k, c in enumerate(self.coeffs):
            if c:
                order = self.m // math.gcd(k, self.m)
                total += c * Fraction(_mobius(order), euler_phi(order))
        return total

    def __hash__(self) -> int:
        if self._hash is None:
            if self.m == 1:
                self._hash = hash(self.coeffs[0])
            else:
                self._hash = hash(("cyclotomic", self.normalized_trace(),
                                   (self * self.conjugate()).normalized_trace()))
        return self._hash

    def sort_key(self, m: int | None = None) -> tuple[Fraction, ...]:
        """Coordinate tuple in Q(zeta_m), suitable for deterministic ordering."""
        m = m or self.m
        return self.lift(m).coeffs if self.m != 1 else (self.coeffs[0],) + (Fraction(0),) * (euler_phi(m) - 1)

    # -- conversion -------------------------------------------------------
    def __complex__(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.m)
        return sum((float(c) * z ** k for k, c in enumerate(self.coeffs)), 0j)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"Cyclotomic({self.m}, {[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if self.m == 1:
            return str(self.coeffs[0])
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
                continue
            z = f"z{self.m}" if k == 1 else f"z{self.m}^{k}"
            if c == 1:
                terms.append(z)
            elif c == -1:
                terms.append(f"-{z}")
            else:
                terms.append(f"{c}*{z}")
        out = " + ".join(terms)
        return out.replace("+ -", "- ")

    def to_json(self):
        """int, "p/q" string, or {"m": m, "coeffs": [...]} for irrational values."""
        if self.m == 1:
            c = self.coeffs[0]
            return int(c) if c.denominator == 1 else str(c)
        return {"m": self.m, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj) -> "Cyclotomic":
        if isinstance(obj, bool):
            raise TypeError("booleans are not character values")
        if isinstance(obj, (int, str)):
            return cls.rational(Fraction(obj))
        if isinstance(obj, dict):
            return cls(int(obj["m"]), [Fraction(c) for c in obj["coeffs"]])
        raise TypeError(f"unrecognised cyclotomic encoding: {obj!r}")


def csum(values: Iterable[Number]) -> Cyclotomic:
    """Exact sum; always returns a Cyclotomic (0 for an empty iterable)."""
    total = Cyclotomic.rational(0)
    for v in values:
        total = total + v
    return total


ZERO = Cyclotomic.rational(0)
ONE = Cyclotomic.rational(1)
