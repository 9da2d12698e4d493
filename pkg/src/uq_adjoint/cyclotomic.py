"""Exact arithmetic in the cyclotomic field Q(zeta_l).

Elements are stored as an integer numerator vector over the power basis
1, zeta, ..., zeta^(phi-1) together with a single positive denominator, always
reduced modulo the l-th cyclotomic polynomial and to lowest terms.  This keeps
every field operation on machine-friendly Python ints.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

__all__ = [
    "Cyc",
    "CyclotomicField",
    "ComplexEnclosure",
    "SignInconclusive",
    "cyclotomic_polynomial",
    "rat_to_str",
    "rat_from_str",
    "field",
]

Rat = Fraction


class SignInconclusive(ArithmeticError):
    """Raised when an interval enclosure cannot certify the sign of a real number."""


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # integer polynomials, lowest degree first; den monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        out[k] = c
        if c:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    if any(num[: len(den) - 1]):
        raise ValueError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n (lowest degree first), from x^n - 1 = prod_{d | n} Phi_d."""
    if n < 1:
        raise ValueError("n must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def rat_to_str(r: Fraction | int) -> str:
    r = Fraction(r)
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def rat_from_str(s: str) -> Fraction:
    return Fraction(s.strip())


class Cyc:
    """An element of Q(zeta_l): ``sum(num[i] * zeta**i) / den``."""

    __slots__ = ("K", "num", "den", "_hash")

    def __init__(self, K: "CyclotomicField", num: tuple[int, ...], den: int = 1):
        # trusted constructor: callers pass reduced vectors of length K.phi
        self.K = K
        self.num = num
        self.den = den
        self._hash = None

    # -- construction helpers -------------------------------------------------
    @staticmethod
    def _make(K, num, den):
        if den < 0:
            num = [-c for c in num]
            den = -den
        g = math.gcd(den, *num)
        if g != 1:
            num = [c // g for c in num]
            den //= g
        if not any(num):
            return K.zero
        return Cyc(K, tuple(num), den)

    def _coerce(self, other):
        if type(other) is Cyc:
            if other.K is not self.K:
                raise TypeError("elements of different cyclotomic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.K(other)
        return NotImplemented

    # -- predicates -------------------------------------------------------------
    def __bool__(self) -> bool:
        return self is not self.K.zero and any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    def coeffs(self) -> list[Fraction]:
        return [Fraction(c, self.den) for c in self.num]

    def __eq__(self, other) -> bool:
        if type(other) is not Cyc:
            if isinstance(other, (int, Fraction)):
                other = self.K(other)
            else:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.K.l, self.num, self.den))
        return self._hash

    # -- ring operations --------------------------------------------------------
    def __neg__(self) -> "Cyc":
        if not self:
            return self
        return Cyc(self.K, tuple(-c for c in self.num), self.den)

    def __add__(self, other) -> "Cyc":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other:
            return self
        if not self:
            return other
        a, da, b, db = self.num, self.den, other.num, other.den
        if da == db:
            return Cyc._make(self.K, [x + y for x, y in zip(a, b)], da)
        return Cyc._make(self.K, [x * db + y * da for x, y in zip(a, b)], da * db)

    __radd__ = __add__

    def __sub__(self, other) -> "Cyc":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other:
            return self
        a, da, b, db = self.num, self.den, other.num, other.den
        if da == db:
            return Cyc._make(self.K, [x - y for x, y in zip(a, b)], da)
        return Cyc._make(self.K, [x * db - y * da for x, y in zip(a, b)], da * db)

    def __rsub__(self, other) -> "Cyc":
        return (-self).__add__(other)

    def __mul__(self, other) -> "Cyc":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self or not other:
            return self.K.zero
        K = self.K
        a, b = self.num, other.num
        if not any(b[1:]):
            s = b[0]
            return Cyc._make(K, [x * s for x in a], self.den * other.den)
        if not any(a[1:]):
            s = a[0]
            return Cyc._make(K, [x * s for x in b], self.den * other.den)
        n = K.phi
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = prod[:n]
        for k in range(n, 2 * n - 1):
            c = prod[k]
            if c:
                for i, r in K._reduce_rows[k - n]:
                    out[i] += c * r
        return Cyc._make(K, out, self.den * other.den)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Cyc":
        if e < 0:
            return self.inv() ** (-e)
        result = self.K.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def galois(self, k: int) -> "Cyc":
        """Image under the automorphism zeta -> zeta^k (gcd(k, l) = 1)."""
        K = self.K
        acc = [0] * K.phi
        for i, c in enumerate(self.num):
            if c:
                for idx, r in K._zeta_pow_sparse((i * k) % K.l):
                    acc[idx] += c * r
        return Cyc._make(K, acc, self.den)

    def norm(self) -> Fraction:
        """Field norm to Q."""
        p = self
        for k in self.K.galois_group()[1:]:
            p = p * self.galois(k)
        return p.to_fraction()

    def inv(self) -> "Cyc":
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(zeta)")
        if self.is_rational():
            return self.K(Fraction(self.den, self.num[0]))
        conj = self.K.one
        for k in self.K.galois_group()[1:]:
            conj = conj * self.galois(k)
        nrm = (self * conj).to_fraction()
        return conj * (1 / nrm)

    def __truediv__(self, other) -> "Cyc":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __rtruediv__(self, other) -> "Cyc":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inv()

    # -- display / serialization ----------------------------------------------
    def to_json(self) -> list[str]:
        return [rat_to_str(c) for c in self.coeffs()]

    def __repr__(self) -> str:
        if not self:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs()):
            if not c:
                continue
            if i == 0:
                parts.append(rat_to_str(c))
            else:
                mono = "z" if i == 1 else f"z^{i}"
                if c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append("-" + mono)
                else:
                    parts.append(f"{rat_to_str(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def embed(self, embedding_exponent: int = 1, precision_bits: int = 128) -> "ComplexEnclosure":
        return self.K.embed(self, embedding_exponent, precision_bits)


@dataclass(frozen=True)
class ComplexEnclosure:
    """Rigorous rectangular enclosure of a complex number (mpmath interval endpoints)."""

    real: object
    imag: object
    precision_bits: int

    @property
    def radius(self) -> float:
        return float(max(self.real.delta, self.imag.delta)) / 2

    def approx(self) -> complex:
        return complex(float(self.real.mid), float(self.imag.mid))

    def real_sign(self) -> int:
        """Sign of the real part; raises SignInconclusive if the interval contains zero."""
        if self.real.a > 0:
            return 1
        if self.real.b < 0:
            return -1
        raise SignInconclusive(f"real part enclosure {self.real} contains 0")

    def is_real(self) -> bool:
        return self.imag.a <= 0 <= self.imag.b


class CyclotomicField:
    """The field Q(zeta_l) for odd l >= 3, with q = zeta**root_exponent."""

    def __init__(self, l: int, root_exponent: int = 1):
        if l < 3 or l % 2 == 0:
            raise ValueError(f"l must be odd and >= 3, got {l}")
        if math.gcd(root_exponent, l) != 1:
            raise ValueError(f"root_exponent {root_exponent} is not coprime to {l}")
        self.l = l
        self.root_exponent = root_exponent % l
        self.modulus = cyclotomic_polynomial(l)
        self.phi = len(self.modulus) - 1
        n = self.phi
        # x^k mod Phi_l for k in [n, 2n-2], stored sparsely
        rows = []
        cur = [-c for c in self.modulus[:n]]  # x^n
        for _ in range(n - 1):
            rows.append(tuple((i, c) for i, c in enumerate(cur) if c))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [c - top * m for c, m in zip(cur, self.modulus[:n])]
        self._reduce_rows = rows
        self._zeta_cache: dict[int, tuple] = {}
        self.zero = Cyc(self, (0,) * n, 1)
        self.one = Cyc(self, (1,) + (0,) * (n - 1), 1)
        self.zeta = self.zeta_power(1)
        self.q = self.q_power(1)
        self.qinv = self.q_power(-1)
        self._qint_cache: dict[int, Cyc] = {}

    def __repr__(self) -> str:
        return f"CyclotomicField(l={self.l}, root_exponent={self.root_exponent})"

    def __call__(self, value) -> Cyc:
        if type(value) is Cyc:
            return value
        if isinstance(value, int):
            if value == 0:
                return self.zero
            return Cyc(self, (value,) + (0,) * (self.phi - 1), 1)
        if isinstance(value, Fraction):
            return Cyc._make(self, [value.numerator] + [0] * (self.phi - 1), value.denominator)
        if isinstance(value, str):
            return self(Fraction(value))
        raise TypeError(f"cannot convert {value!r} to {self}")

    def from_coeffs(self, coeffs) -> Cyc:
        """Element sum(coeffs[i] * zeta**i); any length, reduced mod Phi_l."""
        coeffs = [Fraction(c) for c in coeffs]
        den = 1
        for c in coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        acc = [0] * self.phi
        for i, c in enumerate(coeffs):
            v = c.numerator * (den // c.denominator)
            if v:
                for idx, r in self._zeta_pow_sparse(i % self.l):
                    acc[idx] += v * r
        return Cyc._make(self, acc, den)

    @classmethod
    def from_json(cls, K: "CyclotomicField", data) -> Cyc:
        if isinstance(data, str):
            data = json.loads(data)
        return K.from_coeffs([rat_from_str(s) for s in data])

    def _zeta_pow_sparse(self, k: int):
        k %= self.l
        hit = self._zeta_cache.get(k)
        if hit is None:
            n = self.phi
            if k < n:
                hit = ((k, 1),)
            else:
                vec = [0] * n
                vec[n - 1] = 1
                for _ in range(k - n + 1):
                    top = vec[-1]
                    vec = [0] + vec[:-1]
                    if top:
                        vec = [c - top * m for c, m in zip(vec, self.modulus[:n])]
                hit = tuple((i, c) for i, c in enumerate(vec) if c)
            self._zeta_cache[k] = hit
        return hit

    def zeta_power(self, k: int) -> Cyc:
        vec = [0] * self.phi
        for i, c in self._zeta_pow_sparse(k):
            vec[i] = c
        return Cyc._make(self, vec, 1)

    def q_power(self, k: int) -> Cyc:
        return self.zeta_power(self.root_exponent * k)

    def galois_group(self) -> list[int]:
        return [k for k in range(1, self.l) if math.gcd(k, self.l) == 1]

    # -- quantum numbers --------------------------------------------------------
    def qint(self, i: int) -> Cyc:
        """(i)_q = (q^i - q^-i) / (q - q^-1)."""
        hit = self._qint_cache.get(i)
        if hit is None:
            hit = (self.q_power(i) - self.q_power(-i)) / (self.q - self.qinv)
            self._qint_cache[i] = hit
        return hit

    def qdiff_sq(self, i: int = 1) -> Cyc:
        """(q^i - q^-i)^2."""
        d = self.q_power(i) - self.q_power(-i)
        return d * d

    def casimir_root(self, j: int) -> Cyc:
        """b_j = (q^(j+1) + q^(-j-1)) / (q - q^-1)^2, the Casimir eigenvalue on L(j)."""
        return (self.q_power(j + 1) + self.q_power(-j - 1)) / self.qdiff_sq(1)

    # -- complex embeddings -----------------------------------------------------
    def embed(self, a: Cyc, embedding_exponent: int = 1, precision_bits: int = 128) -> ComplexEnclosure:
        """Enclose the image of ``a`` under zeta -> exp(2 pi i embedding_exponent / l).

        The enclosure is computed with mpmath interval arithmetic at
        ``precision_bits`` of working precision and checked to have radius at most
        2**(-precision_bits/2).
        """
        if math.gcd(embedding_exponent, self.l) != 1:
            raise ValueError("embedding_exponent must be coprime to l")
        if precision_bits < 64:
            raise ValueError("precision_bits must be >= 64")
        iv = mpmath.iv
        old = iv.prec
        iv.prec = precision_bits
        try:
            re_acc = iv.mpf(0)
            im_acc = iv.mpf(0)
            two_pi = 2 * iv.pi
            for i, c in enumerate(a.num):
                if c:
                    ang = two_pi * (embedding_exponent * i % self.l) / self.l
                    re_acc += c * iv.cos(ang)
                    im_acc += c * iv.sin(ang)
            re_acc /= a.den
            im_acc /= a.den
        finally:
            iv.prec = old
        enc = ComplexEnclosure(re_acc, im_acc, precision_bits)
        if enc.radius > 2.0 ** (-precision_bits / 2):
            raise SignInconclusive(f"enclosure radius {enc.radius} exceeds bound")
        return enc

    def embedding_for_angle(self, numerator: int, denominator: int) -> int:
        """Exponent e with q -> exp(pi i numerator/denominator) under zeta -> exp(2 pi i e / l)."""
        # q = zeta^r maps to exp(2 pi i e r / l); need e*r = numerator*l/(2*denominator) mod l
        if (numerator * self.l) % (2 * denominator):
            raise ValueError("angle is not an l-th root of unity")
        target = (numerator * self.l // (2 * denominator)) % self.l
        return (target * pow(self.root_exponent, -1, self.l)) % self.l


@lru_cache(maxsize=None)
def _field(l: int, root_exponent: int) -> CyclotomicField:
    return CyclotomicField(l, root_exponent)


def field(l: int, root_exponent: int = 1) -> CyclotomicField:
    """Shared field instance per (l, root_exponent)."""
    return _field(l, root_exponent % l)
