"""Padé approximants [k-1/k] from explicit determinant formulas."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .determinants import det
from .exactcore import (
    QQ,
    ZZ,
    InsufficientOrder,
    Polynomial,
    RingError,
    TruncatedSeries,
    rational_to_series,
)
from .hankel import bordered_det, hankel_det


class PadeError(ValueError):
    pass


@dataclass(frozen=True)
class PadeApproximant:
    P: Polynomial
    Q: Polynomial
    k: int
    k_prime: int | None  # None: no nonzero bordered determinant within the known order
    h_k: object | None
    H_k: object
    H_k_kprime: object | None
    contact_verified_to: int

    @property
    def exact_match(self) -> bool:
        return self.k_prime is None

    def to_json(self) -> dict:
        R = self.P.ring
        return {
            "k": self.k,
            "k_prime": self.k_prime,
            "P": self.P.to_json(),
            "Q": self.Q.to_json(),
            "H_k": R.to_json(self.H_k),
            "H_k_kprime": None if self.H_k_kprime is None else R.to_json(self.H_k_kprime),
            "h_k": None if self.h_k is None else R.to_json(self.h_k),
            "contact_verified_to": self.contact_verified_to,
        }


def _last_row_minors(f: TruncatedSeries, k: int) -> list:
    """Signed cofactors (-1)^{k+j} M_{k,j} of the last row, j = 0..k."""
    c = f.coeffs
    top = [[c[i + j] for j in range(k + 1)] for i in range(k)]
    out = []
    for j in range(k + 1):
        minor = [row[:j] + row[j + 1:] for row in top]
        sign = -1 if (k + j) % 2 else 1
        out.append(f.ring.normalize(sign * det(minor, f.ring)))
    return out


def pade_polynomials(f: TruncatedSeries, k: int) -> tuple[Polynomial, Polynomial]:
    """(P, Q) of the [k-1/k] determinant formulas, without normalisation.

    Q has last row (z^k, ..., z, 1); P has last row entries
    sum_{i<j} c_i z^{i+k-j}.  Both are expanded along that row.
    """
    if k < 1:
        raise PadeError("k must be >= 1")
    if f.order < 2 * k:
        raise InsufficientOrder(f"[{k - 1}/{k}] needs order {2 * k}, series has {f.order}")
    R = f.ring
    cof = _last_row_minors(f, k)
    q = [0] * (k + 1)
    p = [0] * k
    for j, m in enumerate(cof):
        q[k - j] += m
        for i in range(j):
            p[i + k - j] += m * f.coeffs[i]
    return Polynomial(p, R), Polynomial(q, R)


def pade_construct(f: TruncatedSeries, k: int) -> PadeApproximant:
    """[k-1/k] approximant, contact exponent k' and h_k = H_{k,k'} / H_k."""
    if f.ring == ZZ:
        f = f.change_ring(QQ)
    elif not f.ring.is_field:
        raise RingError(f"Padé construction needs a field, got {f.ring}")
    R = f.ring
    Hk = hankel_det(f, k)
    if Hk == 0:
        raise PadeError(f"H_{k}(f) = 0: the [{k - 1}/{k}] approximant has no normal form")
    P, Q = pade_polynomials(f, k)
    assert Q[0] == Hk
    k_prime = None
    Hkk = None
    for kp in range(k, f.order - k):
        val = bordered_det(f, k, kp)
        if val != 0:
            k_prime, Hkk = kp, val
            break
    h_k = None if k_prime is None else R.div(Hkk, Hk)
    return PadeApproximant(P, Q, k, k_prime, h_k, Hk, Hkk, f.order)


def residual(f: TruncatedSeries, approx: PadeApproximant) -> TruncatedSeries:
    """f Q - P to the order of f."""
    R = approx.P.ring
    if f.ring != R:
        f = f.change_ring(R)
    return f.mul_poly(approx.Q) - approx.P.to_series(f.order)


def contact_order(f: TruncatedSeries, approx: PadeApproximant):
    """Valuation of f Q - P; ``math.inf`` for the exact-match (rational) case.

    Raises when the valuation is not determinable within the order of f
    or when it disagrees with k + k'.
    """
    r = residual(f, approx)
    val = r.valuation()
    if val is None:
        if approx.k_prime is None:
            return math.inf
        raise InsufficientOrder(f"residual vanishes to order {r.order}; k + k' not reached")
    if approx.k_prime is not None:
        if val != approx.k + approx.k_prime:
            raise PadeError(f"residual valuation {val} != k + k' = {approx.k + approx.k_prime}")
        if r[val] != approx.H_k_kprime:
            raise PadeError("leading residual coefficient differs from H_{k,k'}")
    return val


def pade_series(approx: PadeApproximant, N: int) -> TruncatedSeries:
    """Expansion of P/Q to order N."""
    return rational_to_series(approx.P, approx.Q, N)
