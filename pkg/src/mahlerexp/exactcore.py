"""Exact arithmetic substrate.

Coefficient rings (integers, rationals, integers modulo m), dense
polynomials and truncated power series with explicit precision
bookkeeping.

Ring elements are stored as plain Python values: ``int`` for ZZ,
``Fraction`` for QQ and a reduced ``int`` residue for ``Zmod(m)``.
The ring object carries the semantics (normalisation, inversion).
:class:`ModularInt` is the standalone scalar type for residues when a
self-describing value is needed outside a series or polynomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction]


class RingError(ArithmeticError):
    """Raised on ring mismatch or on a non-invertible element."""


class InsufficientOrder(ValueError):
    """Raised when a result would need coefficients beyond the known order."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Ring:
    name = "?"
    is_field = False
    characteristic = 0

    def __call__(self, x):
        return self.normalize(x)

    def normalize(self, x):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def div(self, a, b):
        """Exact quotient ``a / b``; raises if it is not in the ring."""
        return self.normalize(a * self.inv(b))

    def to_json(self, a):
        return a

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, Ring) and self.name == other.name

    def __hash__(self):
        return hash(self.name)


class IntegerRing(Ring):
    name = "ZZ"

    def normalize(self, x):
        if isinstance(x, int):
            return x
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise RingError(f"{x} is not an integer")
            return x.numerator
        if isinstance(x, ModularInt):
            raise RingError("cannot lift a residue to ZZ implicitly")
        return int(x)

    def is_unit(self, a):
        return a in (1, -1)

    def inv(self, a):
        if a not in (1, -1):
            raise RingError(f"{a} is not a unit in ZZ")
        return a

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in ZZ")
        q, r = divmod(a, b)
        if r:
            raise RingError(f"{a} is not divisible by {b} in ZZ")
        return q


class RationalField(Ring):
    name = "QQ"
    is_field = True

    def normalize(self, x):
        if isinstance(x, ModularInt):
            raise RingError("cannot lift a residue to QQ implicitly")
        return Fraction(x)

    def is_unit(self, a):
        return a != 0

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in QQ")
        return 1 / Fraction(a)

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in QQ")
        return Fraction(a) / b

    def to_json(self, a):
        a = Fraction(a)
        return a.numerator if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


class IntegersMod(Ring):
    """Z/mZ. Division is only defined by units; m need not be prime."""

    def __init__(self, modulus: int):
        if modulus < 2:
            raise ValueError("modulus must be >= 2")
        self.modulus = modulus
        self.name = f"Zmod({modulus})"
        self.is_field = _is_prime(modulus)
        self.characteristic = modulus

    def normalize(self, x):
        m = self.modulus
        if isinstance(x, int):
            return x % m
        if isinstance(x, Fraction):
            den = x.denominator % m
            if math.gcd(den, m) != 1:
                raise RingError(f"denominator of {x} is not a unit mod {m}")
            return x.numerator * pow(den, -1, m) % m
        if isinstance(x, ModularInt):
            if x.modulus != m:
                raise RingError("modulus mismatch")
            return x.residue
        return int(x) % m

    def is_unit(self, a):
        return math.gcd(a % self.modulus, self.modulus) == 1

    def inv(self, a):
        a %= self.modulus
        if a == 0:
            raise ZeroDivisionError(f"division by zero mod {self.modulus}")
        if math.gcd(a, self.modulus) != 1:
            raise RingError(f"{a} is not a unit mod {self.modulus}")
        return pow(a, -1, self.modulus)

    def div(self, a, b):
        return a * self.inv(b) % self.modulus

    def element(self, x) -> "ModularInt":
        return ModularInt(self.normalize(x), self.modulus)


ZZ = IntegerRing()
QQ = RationalField()


@lru_cache(maxsize=None)
def Zmod(m: int) -> IntegersMod:
    return IntegersMod(m)


def GF(p: int) -> IntegersMod:
    ring = Zmod(p)
    if not ring.is_field:
        raise ValueError(f"{p} is not prime")
    return ring


def ring_from_name(name: str) -> Ring:
    if name == "ZZ":
        return ZZ
    if name == "QQ":
        return QQ
    if name.startswith("Zmod(") and name.endswith(")"):
        return Zmod(int(name[5:-1]))
    raise ValueError(f"unknown ring {name!r}")


def _check_same(r1: Ring, r2: Ring) -> Ring:
    if r1 != r2:
        raise RingError(f"ring mismatch: {r1} vs {r2}")
    return r1


@dataclass(frozen=True)
class ModularInt:
    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be >= 2")
        if not 0 <= self.residue < self.modulus:
            object.__setattr__(self, "residue", self.residue % self.modulus)

    def _other(self, other) -> int:
        if isinstance(other, ModularInt):
            if other.modulus != self.modulus:
                raise RingError("arithmetic between different moduli")
            return other.residue
        if isinstance(other, int):
            return other % self.modulus
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return ModularInt((self.residue + o) % self.modulus, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return ModularInt((self.residue - o) % self.modulus, self.modulus)

    def __rsub__(self, other):
        o = self._other(other)
        return ModularInt((o - self.residue) % self.modulus, self.modulus)

    def __mul__(self, other):
        o = self._other(other)
        return ModularInt(self.residue * o % self.modulus, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return ModularInt(-self.residue % self.modulus, self.modulus)

    def inverse(self) -> "ModularInt":
        return ModularInt(Zmod(self.modulus).inv(self.residue), self.modulus)

    def __truediv__(self, other):
        o = self._other(other)
        return self * ModularInt(o, self.modulus).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return ModularInt(pow(self.residue, e, self.modulus), self.modulus)

    def __eq__(self, other):
        if isinstance(other, ModularInt):
            return (self.residue, self.modulus) == (other.residue, other.modulus)
        if isinstance(other, int):
            return self.residue == other % self.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.residue, self.modulus))

    def __bool__(self):
        return self.residue != 0

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"{self.residue} (mod {self.modulus})"


# ----------------------------------------------------------------------
# Polynomials


class Polynomial:
    """Dense univariate polynomial; ``coeffs[i]`` is the coefficient of z^i."""

    __slots__ = ("coeffs", "ring")

    def __init__(self, coeffs: Iterable = (), ring: Ring = ZZ):
        cs = [ring.normalize(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self.ring = ring

    @classmethod
    def monomial(cls, k: int, c=1, ring: Ring = ZZ) -> "Polynomial":
        return cls([0] * k + [c], ring)

    @property
    def degree(self) -> int:
        # deg 0 = -1
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.ring.normalize(0)

    def valuation(self) -> int | None:
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return None

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            _check_same(self.ring, other.ring)
            return other
        return Polynomial([other], self.ring)

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial([self[i] + other[i] for i in range(n)], self.ring)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs], self.ring)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = self.ring.normalize(other)
            return Polynomial([c * a for a in self.coeffs], self.ring)
        _check_same(self.ring, other.ring)
        if self.is_zero() or other.is_zero():
            return Polynomial([], self.ring)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out, self.ring)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = Polynomial([1], self.ring)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == Polynomial([other], self.ring)
        return NotImplemented

    def __hash__(self):
        return hash((self.coeffs, self.ring))

    def __call__(self, x):
        """Horner evaluation; ``x`` may be int, Fraction or a ring element."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose_power(self, d: int) -> "Polynomial":
        """P(z^d)."""
        if d < 1:
            raise ValueError("d must be >= 1")
        out = [0] * (d * self.degree + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[i * d] = c
        return Polynomial(out, self.ring)

    def shift(self, k: int) -> "Polynomial":
        """z^k * P."""
        return Polynomial([0] * k + list(self.coeffs), self.ring)

    def change_ring(self, ring: Ring) -> "Polynomial":
        return Polynomial(self.coeffs, ring)

    def divmod(self, other: "Polynomial"):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        R = self.ring
        lead = other.coeffs[-1]
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Polynomial([], R), self
        quot = [0] * (dq + 1)
        for i in range(dq, -1, -1):
            c = rem[i + len(other.coeffs) - 1]
            if c == 0:
                continue
            q = R.div(c, lead)
            quot[i] = q
            for j, b in enumerate(other.coeffs):
                rem[i + j] = R.normalize(rem[i + j] - q * b)
        return Polynomial(quot, R), Polynomial(rem, R)

    def exquo(self, other: "Polynomial") -> "Polynomial":
        """Exact division; raises :class:`RingError` on a nonzero remainder."""
        q, r = self.divmod(other)
        if not r.is_zero():
            raise RingError("polynomial division is not exact")
        return q

    def to_series(self, order: int) -> "TruncatedSeries":
        cs = list(self.coeffs[:order]) + [0] * max(0, order - len(self.coeffs))
        return TruncatedSeries(cs, self.ring, order)

    def to_json(self):
        return [self.ring.to_json(c) for c in self.coeffs]

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(f"{c}" if i == 0 else f"{c}*z^{i}")
        return " + ".join(terms)


def poly(coeffs: Sequence, ring: Ring = ZZ) -> Polynomial:
    return Polynomial(coeffs, ring)


# ----------------------------------------------------------------------
# Truncated power series


class TruncatedSeries:
    """A power series known exactly at indices ``0 .. order-1``.

    Coefficients at index ``>= order`` are unknown, not zero.  Every
    operation returns the largest order it can prove.
    """

    __slots__ = ("coeffs", "ring", "order")

    def __init__(self, coeffs: Iterable, ring: Ring = ZZ, order: int | None = None):
        cs = [ring.normalize(c) for c in coeffs]
        if order is None:
            order = len(cs)
        if order < 0:
            raise ValueError("order must be >= 0")
        if len(cs) < order:
            raise InsufficientOrder(f"{len(cs)} coefficients supplied for order {order}")
        self.coeffs = tuple(cs[:order])
        self.ring = ring
        self.order = order

    @classmethod
    def _raw(cls, coeffs, ring, order):
        # trusted constructor: coefficients already normalised, len == order
        obj = cls.__new__(cls)
        obj.coeffs = tuple(coeffs)
        obj.ring = ring
        obj.order = order
        return obj

    @classmethod
    def zero(cls, order: int, ring: Ring = ZZ) -> "TruncatedSeries":
        return cls._raw([ring.normalize(0)] * order, ring, order)

    @classmethod
    def one(cls, order: int, ring: Ring = ZZ) -> "TruncatedSeries":
        cs = [ring.normalize(0)] * order
        if order:
            cs[0] = ring.normalize(1)
        return cls._raw(cs, ring, order)

    def __len__(self):
        return self.order

    def __getitem__(self, i):
        if isinstance(i, slice):
            return self.coeffs[i]
        if not 0 <= i < self.order:
            raise InsufficientOrder(f"coefficient {i} is beyond order {self.order}")
        return self.coeffs[i]

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.ring, self.order, self.coeffs) == (other.ring, other.order, other.coeffs)

    def __hash__(self):
        return hash((self.ring, self.order, self.coeffs))

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:12])
        more = ", ..." if self.order > 12 else ""
        return f"TruncatedSeries([{head}{more}], {self.ring}, order={self.order})"

    def agrees_with(self, other: "TruncatedSeries") -> bool:
        """True when both series coincide on their common known range."""
        n = min(self.order, other.order)
        return self.ring == other.ring and self.coeffs[:n] == other.coeffs[:n]

    def valuation(self) -> int | None:
        """Index of the first nonzero known coefficient, ``None`` if all vanish."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return None

    def is_zero(self) -> bool:
        return self.valuation() is None

    def truncate(self, n: int) -> "TruncatedSeries":
        if n > self.order:
            raise InsufficientOrder(f"cannot extend order {self.order} to {n}")
        return TruncatedSeries._raw(self.coeffs[:n], self.ring, n)

    def drop(self, k: int) -> "TruncatedSeries":
        """Drop the first ``k`` coefficients: (f - prefix) / z^k."""
        if k > self.order:
            raise InsufficientOrder(f"cannot drop {k} coefficients of order {self.order}")
        return TruncatedSeries._raw(self.coeffs[k:], self.ring, self.order - k)

    def times_z(self, k: int) -> "TruncatedSeries":
        """z^k * f; the k new leading zeros are exact, so the order grows by k."""
        zero = self.ring.normalize(0)
        return TruncatedSeries._raw((zero,) * k + self.coeffs, self.ring, self.order + k)

    def change_ring(self, ring: Ring) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs, ring, self.order)

    def scale(self, c) -> "TruncatedSeries":
        R = self.ring
        c = R.normalize(c)
        return TruncatedSeries._raw([R.normalize(c * a) for a in self.coeffs], R, self.order)

    def __neg__(self):
        R = self.ring
        return TruncatedSeries._raw([R.normalize(-a) for a in self.coeffs], R, self.order)

    def __add__(self, other):
        return series_arith(self, other, "add")

    def __sub__(self, other):
        return series_arith(self, other, "sub")

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return self.mul_poly(other)
        if isinstance(other, TruncatedSeries):
            return series_arith(self, other, "mul")
        return self.scale(other)

    __rmul__ = __mul__

    def mul_poly(self, p: Polynomial) -> "TruncatedSeries":
        """Multiply by an exact polynomial; the order is preserved."""
        R = _check_same(self.ring, p.ring)
        n = self.order
        out = [0] * n
        for i, a in enumerate(p.coeffs):
            if a == 0 or i >= n:
                continue
            for j in range(n - i):
                out[i + j] += a * self.coeffs[j]
        return TruncatedSeries._raw([R.normalize(c) for c in out], R, n)

    def inverse(self) -> "TruncatedSeries":
        return series_invert(self)

    def compose_power(self, d: int) -> "TruncatedSeries":
        return compose_power(self, d)

    def divide_exact(self, c) -> "TruncatedSeries":
        """Divide every coefficient by the scalar ``c`` (exactly)."""
        R = self.ring
        return TruncatedSeries._raw([R.div(a, c) for a in self.coeffs], R, self.order)

    def evaluate(self, x) -> Number:
        """Exact value of the known prefix at ``x`` (no tail estimate)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_polynomial(self) -> Polynomial:
        return Polynomial(self.coeffs, self.ring)

    def to_json(self):
        return {
            "ring": self.ring.name,
            "coeffs": [self.ring.to_json(c) for c in self.coeffs],
            "order": self.order,
        }

    @classmethod
    def from_json(cls, data) -> "TruncatedSeries":
        ring = ring_from_name(data["ring"])
        coeffs = [Fraction(c) if isinstance(c, str) else c for c in data["coeffs"]]
        return cls(coeffs, ring, data["order"])


def series(coeffs: Sequence, ring: Ring = ZZ, order: int | None = None) -> TruncatedSeries:
    return TruncatedSeries(coeffs, ring, order)


def series_arith(a: TruncatedSeries, b: TruncatedSeries, kind: str) -> TruncatedSeries:
    """Add, subtract or multiply two series; result order is ``min`` of orders."""
    R = _check_same(a.ring, b.ring)
    n = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    if kind == "add":
        out = [R.normalize(ac[i] + bc[i]) for i in range(n)]
    elif kind == "sub":
        out = [R.normalize(ac[i] - bc[i]) for i in range(n)]
    elif kind == "mul":
        acc = [0] * n
        for i in range(n):
            x = ac[i]
            if x == 0:
                continue
            for j in range(n - i):
                acc[i + j] += x * bc[j]
        out = [R.normalize(c) for c in acc]
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return TruncatedSeries._raw(out, R, n)


def series_invert(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse to the same order as ``a``."""
    R = a.ring
    n = a.order
    if n == 0:
        raise InsufficientOrder("cannot invert a series of order 0")
    if a.coeffs[0] == 0:
        if a.is_zero():
            raise ZeroDivisionError("series is zero to its known order")
        raise RingError("constant term is zero; series is not invertible")
    inv0 = R.inv(a.coeffs[0])
    out = [inv0]
    ac = a.coeffs
    for m in range(1, n):
        s = 0
        for i in range(1, m + 1):
            if ac[i]:
                s += ac[i] * out[m - i]
        out.append(R.normalize(-s * inv0))
    return TruncatedSeries._raw(out, R, n)


def compose_power(a: TruncatedSeries, d: int) -> TruncatedSeries:
    """f(z^d); the order becomes ``d * order`` since the gaps are exact zeros."""
    if d < 2:
        raise ValueError("compose_power needs d >= 2")
    zero = a.ring.normalize(0)
    out = [zero] * (a.order * d)
    for j, c in enumerate(a.coeffs):
        out[j * d] = c
    return TruncatedSeries._raw(out, a.ring, a.order * d)


def rational_to_series(P: Polynomial, Q: Polynomial, N: int) -> TruncatedSeries:
    """Expansion of P/Q to order N; requires Q(0) invertible."""
    R = _check_same(P.ring, Q.ring)
    if Q[0] == 0:
        raise RingError("Q(0) = 0: P/Q has no power series expansion")
    inv0 = R.inv(Q[0])
    qc = Q.coeffs
    out = []
    for m in range(N):
        s = P[m]
        for i in range(1, min(m, len(qc) - 1) + 1):
            s -= qc[i] * out[m - i]
        out.append(R.normalize(s * inv0))
    return TruncatedSeries._raw(out, R, N)
