"""Super delta-fractions (Hankel continued fractions for delta = 2).

A series g is written as

    g = v_0 z^{k_0} / (1 + u_1(z) z - v_1 z^{k_0+k_1+delta} / (1 + u_2(z) z - ...))

The expansion keeps the current tail as a quotient A/B of two series with
B(0) a unit, so each level costs one short inversion and one polynomial
product instead of a full series inversion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .exactcore import (
    QQ,
    ZZ,
    InsufficientOrder,
    Polynomial,
    Ring,
    RingError,
    TruncatedSeries,
)


class HFractionError(ValueError):
    pass


@dataclass(frozen=True)
class Level:
    v: object
    k: int
    u: Polynomial | None  # None for level 0


@dataclass
class HFraction:
    delta: int
    ring: Ring
    levels: list[Level] = field(default_factory=list)
    terminated: bool = False
    # data beyond the last level, when the input order allowed computing it
    next_u: Polynomial | None = None
    remainder: TruncatedSeries | None = None
    # low coefficients of the next u when the data ends inside it
    partial_u: Polynomial | None = None
    partial_width: int = 0

    @property
    def certified_levels(self) -> int:
        return len(self.levels)

    def s_values(self) -> list[int]:
        """s_0 = 0, s_j = k_0 + ... + k_{j-1} + j for j = 0..len(levels)."""
        s = [0]
        for lev in self.levels:
            s.append(s[-1] + lev.k + 1)
        return s

    def provable_order(self) -> float:
        """Order to which the fraction determines the series (math.inf if exact)."""
        if self.terminated:
            return math.inf
        if not self.levels:
            return self.remainder.order if self.remainder is not None else 0
        if self.next_u is None:
            order = self.levels[-1].k + max(1, self.partial_width)
            inner = self.levels[:-1]
        else:
            order = self.remainder.order
            inner = self.levels
        for lev in reversed(inner):
            order += 2 * lev.k + self.delta
        return order

    def hankel_horizon(self) -> float:
        """All H_n with n <= horizon follow from the levels (delta = 2)."""
        s = self.s_values()
        if self.terminated:
            return math.inf
        if self.next_u is None or self.remainder is None:
            return s[-1]
        val = self.remainder.valuation()
        return s[-1] + (self.remainder.order if val is None else val)

    def to_json(self) -> dict:
        R = self.ring
        levels = []
        for lev in self.levels:
            levels.append(
                {
                    "v": R.to_json(lev.v),
                    "k": lev.k,
                    "u": None if lev.u is None else lev.u.to_json(),
                }
            )
        horizon = self.hankel_horizon()
        return {
            "delta": self.delta,
            "ring": R.name,
            "levels": levels,
            "certified_levels": self.certified_levels,
            "terminated": self.terminated,
            "next_u": None if self.next_u is None else self.next_u.to_json(),
            "partial_u": None if self.partial_u is None else self.partial_u.to_json(),
            "hankel_horizon": None if horizon == math.inf else horizon,
        }


def _field_of(f: TruncatedSeries) -> TruncatedSeries:
    if f.ring == ZZ:
        return f.change_ring(QQ)
    if not f.ring.is_field:
        raise RingError(f"H-fraction expansion needs a field, got {f.ring}")
    return f


def hfrac_expand(
    f: TruncatedSeries, delta: int = 2, max_levels: int | None = None, exact: bool = False
) -> HFraction:
    """Expand ``f`` as far as its known order certifies.

    ``exact=True`` asserts that ``f`` is a rational function whose expansion
    is fully described by the prefix; only then can the result be marked
    terminated.
    """
    if delta < 1:
        raise HFractionError("delta must be >= 1")
    f = _field_of(f)
    R = f.ring
    h = HFraction(delta, R)
    A = f
    B = TruncatedSeries.one(f.order, R)
    u_prev: Polynomial | None = None
    one = Polynomial([1], R)
    while True:
        k = A.valuation()
        if k is None or k >= min(A.order, B.order):
            # tail is zero to its known order
            h.next_u = u_prev
            h.remainder = TruncatedSeries.zero(min(A.order, B.order), R)
            if exact:
                h.terminated = True
            return h
        v = R.div(A[k], B[0])
        h.levels.append(Level(v, k, u_prev))
        Ahat = A.drop(k)
        width = k + delta
        if Ahat.order < width or B.order < width:
            h.next_u = None
            h.remainder = None
            w = min(Ahat.order, B.order)
            if w >= 2:
                ratio = (Ahat.truncate(w).inverse() * B.truncate(w)).scale(v)
                h.partial_u = Polynomial(ratio.coeffs[1:w], R)
                h.partial_width = w
            return h
        # v B / Ahat = 1 + u z + O(z^{k+delta})
        ratio = (Ahat.truncate(width).inverse() * B.truncate(width)).scale(v)
        u = Polynomial(ratio.coeffs[1:width], R)
        assert u.degree <= k + delta - 2
        lhs = Ahat.mul_poly(one + u.shift(1)) - B.scale(v)
        if lhs.valuation() is not None and lhs.valuation() < width:
            raise HFractionError("internal: peel-off left low-order terms")
        A, B = lhs.drop(width), Ahat
        u_prev = u
        if max_levels is not None and len(h.levels) >= max_levels:
            h.next_u = u
            h.remainder = _quotient(A, B)
            return h


def _quotient(A: TruncatedSeries, B: TruncatedSeries) -> TruncatedSeries:
    n = min(A.order, B.order)
    if n == 0:
        return TruncatedSeries.zero(0, A.ring)
    return A.truncate(n) * B.truncate(n).inverse()


def hfrac_evaluate(h: HFraction, N: int) -> TruncatedSeries:
    """Series of the continued fraction to order N (N must be provable)."""
    R = h.ring
    if N > h.provable_order():
        raise InsufficientOrder(
            f"fraction determines the series only to order {h.provable_order()}, asked {N}"
        )
    if not h.levels:
        return TruncatedSeries.zero(N, R)
    zero = R.normalize(0)
    if h.next_u is not None and h.remainder is not None and not h.terminated:
        tail = list(h.remainder.coeffs[:N]) + [zero] * max(0, N - h.remainder.order)
        tail_u = h.next_u
    elif h.terminated:
        tail = [zero] * N
        tail_u = h.next_u if h.next_u is not None else Polynomial([], R)
    else:
        tail = [zero] * N
        tail_u = h.partial_u if h.partial_u is not None else Polynomial([], R)
    g = TruncatedSeries._raw(tail, R, N)
    us = [lev.u for lev in h.levels[1:]] + [tail_u]
    one = Polynomial([1], R)
    for lev, u in zip(reversed(h.levels), reversed(us)):
        den = (one + u.shift(1)).to_series(N) - g.times_z(lev.k + h.delta).truncate(N)
        g = den.inverse().scale(lev.v).times_z(lev.k).truncate(N)
    return g


def hankel_from_hfrac(h: HFraction) -> list[tuple[int, object]]:
    """[(s_j, H_{s_j})] for j = 1..len(levels); H_n = 0 at every other n <= horizon."""
    if h.delta != 2:
        raise HFractionError("Hankel determinants follow from the fraction only for delta = 2")
    R = h.ring
    s = h.s_values()
    out = []
    for j in range(1, len(h.levels) + 1):
        eps = sum(lev.k * (lev.k + 1) // 2 for lev in h.levels[:j])
        val = R.normalize(-1 if eps % 2 else 1)
        for i in range(j):
            val = R.normalize(val * h.levels[i].v ** (s[j] - s[i]))
        out.append((s[j], val))
    return out


def hankel_list_from_hfrac(h: HFraction, N: int) -> list:
    """H_1..H_N reconstructed from the fraction; requires N <= hankel_horizon."""
    if N > h.hankel_horizon():
        raise InsufficientOrder(f"fraction determines Hankel determinants only to n = {h.hankel_horizon()}")
    R = h.ring
    out = [R.normalize(0)] * N
    for n, val in hankel_from_hfrac(h):
        if n <= N:
            out[n - 1] = val
    return out


def level_stream(h: HFraction) -> list[tuple]:
    """Hashable (v, k, u-coefficients) tuples, for periodicity scans."""
    return [(lev.v, lev.k, None if lev.u is None else lev.u.coeffs) for lev in h.levels]


def hfrac_convergent(h: HFraction, j: int) -> tuple[Polynomial, Polynomial]:
    """(numerator, denominator) of the fraction cut after levels 0..j-1.

    The cut keeps u_j and replaces the tail below it by zero.
    """
    top = len(h.levels) if h.next_u is not None else len(h.levels) - 1
    if not 1 <= j <= top:
        raise HFractionError(f"convergent index must lie in 1..{top}")
    R = h.ring
    one = Polynomial([1], R)
    num, den = Polynomial([], R), one
    for idx in range(j - 1, -1, -1):
        lev = h.levels[idx]
        u = h.levels[idx + 1].u if idx + 1 < len(h.levels) else h.next_u
        # v z^k / (1 + u z - z^{k+delta} num/den)
        num, den = (
            den.shift(lev.k) * lev.v,
            den * (one + u.shift(1)) - num.shift(lev.k + h.delta),
        )
    return num, den
