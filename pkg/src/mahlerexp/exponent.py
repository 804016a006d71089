"""Rigorous evaluation at 1/b, certified continued fractions and exponent estimates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactcore import TruncatedSeries


class ExponentError(ValueError):
    pass


@dataclass(frozen=True)
class CoefficientBound:
    """Declared growth of |c_j|: ``const`` K, ``linear`` j+1, or ``geometric`` r^j."""

    kind: str
    value: Fraction = Fraction(1)

    def __post_init__(self):
        if self.kind not in ("const", "linear", "geometric"):
            raise ExponentError(f"unknown bound kind {self.kind!r}")
        if Fraction(self.value) <= 0:
            raise ExponentError("bound parameter must be positive")

    @classmethod
    def parse(cls, text: str) -> "CoefficientBound":
        """'const:K', 'linear' or 'geometric:r'."""
        kind, _, val = text.partition(":")
        return cls(kind, Fraction(val) if val else Fraction(1))

    def at(self, j: int) -> Fraction:
        if self.kind == "const":
            return Fraction(self.value)
        if self.kind == "linear":
            return Fraction(j + 1)
        return Fraction(self.value) ** j

    def tail(self, b: int, M: int) -> Fraction:
        """sum_{j >= M} bound(j) b^{-j} in closed form."""
        x = Fraction(1, b)
        if self.kind == "const":
            return Fraction(self.value) * x**M / (1 - x)
        if self.kind == "linear":
            return x**M * ((M + 1) / (1 - x) + x / (1 - x) ** 2)
        r = Fraction(self.value) * x
        if r >= 1:
            raise ExponentError("geometric bound r >= b: the tail diverges")
        return r**M / (1 - r)


@dataclass(frozen=True)
class EvaluatedNumber:
    approximation: Fraction
    error_bound: Fraction
    b: int
    M: int

    def interval(self) -> tuple[Fraction, Fraction]:
        return self.approximation - self.error_bound, self.approximation + self.error_bound


def evaluate_series_at(f: TruncatedSeries | Sequence[int], b: int, M: int, bound: CoefficientBound) -> EvaluatedNumber:
    """sum_{j<M} c_j b^{-j} exactly, plus the declared tail bound.

    Every known coefficient is checked against the declared bound.
    """
    if b < 2:
        raise ExponentError("b must be >= 2")
    coeffs = f.coeffs if isinstance(f, TruncatedSeries) else tuple(f)
    if len(coeffs) < M:
        raise ExponentError(f"need {M} coefficients, have {len(coeffs)}")
    tail = bound.tail(b, M)
    acc = 0
    for j, c in enumerate(coeffs[:M]):
        c = int(c)
        if abs(c) > bound.at(j):
            raise ExponentError(f"|c_{j}| = {abs(c)} exceeds the declared bound {bound.at(j)}")
        acc = acc * b + c
    approx = Fraction(acc, b ** (M - 1)) if M else Fraction(0)
    return EvaluatedNumber(approx, tail, b, M)


def evaluate_at(spec, b: int, M: int, bound: CoefficientBound) -> EvaluatedNumber:
    """Evaluate a SequenceSpec (or anything with ``generate(N)``) at 1/b."""
    return evaluate_series_at(spec.generate(M), b, M, bound)


# ----------------------------------------------------------------------
# continued fractions


def cf_expand(x: Fraction) -> list[int]:
    """Finite continued fraction of a rational, [a_0; a_1, ..., a_n]."""
    p, q = x.numerator, x.denominator
    out = []
    while q:
        a, r = divmod(p, q)
        out.append(a)
        p, q = q, r
    return out


def convergents(pq: Sequence[int]) -> list[tuple[int, int]]:
    out = []
    p0, q0, p1, q1 = 1, 0, pq[0], 1
    out.append((p1, q1))
    for a in pq[1:]:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append((p1, q1))
    return out


@dataclass(frozen=True)
class ExponentEstimate:
    partial_quotients: tuple[int, ...]
    denominators: tuple[int, ...]
    mu_hat: float
    mu_hat_full: float
    window_start: int

    @property
    def certified(self) -> int:
        return len(self.partial_quotients)

    def to_json(self) -> dict:
        return {
            "certified_partial_quotients": self.certified,
            "partial_quotients_head": [str(a) for a in self.partial_quotients[:40]],
            "max_partial_quotient_bits": max((a.bit_length() for a in self.partial_quotients[1:]), default=0),
            "last_denominator_bits": self.denominators[-1].bit_length() if self.denominators else 0,
            "mu_hat": self.mu_hat,
            "mu_hat_full": self.mu_hat_full,
            "window_start": self.window_start,
        }


def certified_prefix(lo: Fraction, hi: Fraction) -> list[int]:
    """Partial quotients shared by every real in [lo, hi].

    The last quotient of each finite expansion is dropped, since a rational
    endpoint has two expansions and its neighbours continue differently.
    """
    a, b = cf_expand(lo)[:-1], cf_expand(hi)[:-1]
    out = []
    for x, y in zip(a, b):
        if x != y:
            break
        out.append(x)
    return out


def _mu_ratio(a_next: int, q: int) -> float | None:
    if q <= 1:
        return None
    return math.log(a_next) / math.log(q) if a_next > 1 else 0.0


def mu_from_quotients(pq: Sequence[int], window: int | None = None) -> tuple[float, float, int]:
    """(windowed max, full max, window start) of 2 + log a_{k+1} / log q_k."""
    qs = [q for _, q in convergents(pq)]
    ratios = []
    for k in range(len(pq) - 1):
        r = _mu_ratio(pq[k + 1], qs[k])
        ratios.append(r)
    n = len(ratios)
    start = n // 2 if window is None else max(0, n - window)
    full = [r for r in ratios if r is not None]
    tail = [r for r in ratios[start:] if r is not None]
    return 2 + max(tail, default=0.0), 2 + max(full, default=0.0), start


def certified_cf(x: EvaluatedNumber, window: int | None = None) -> ExponentEstimate:
    """Certified partial quotients of the true value and the exponent estimate.

    ``window`` is the number of trailing ratios used for the windowed max;
    the default is the last half of the certified range.
    """
    if x.error_bound >= Fraction(1, 2):
        raise ExponentError("error bound must be below 1/2")
    lo, hi = x.interval()
    pq = certified_prefix(lo, hi)
    if not pq:
        raise ExponentError("no partial quotient can be certified at this precision")
    qs = tuple(q for _, q in convergents(pq))
    mu, mu_full, start = mu_from_quotients(pq, window)
    return ExponentEstimate(tuple(pq), qs, mu, mu_full, start)


def mu_bound_from_rho(rho, d: int) -> Fraction:
    """(1 + rho) min(rho^2, d)."""
    rho = Fraction(rho)
    if rho < 1:
        raise ExponentError("rho must be >= 1")
    if d < 2:
        raise ExponentError("d must be >= 2")
    return (1 + rho) * min(rho * rho, Fraction(d))
