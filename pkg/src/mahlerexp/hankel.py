"""Shifted Hankel determinants, bordered determinants and table analysis."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .determinants import det, leading_minors_mod
from .exactcore import InsufficientOrder, IntegersMod, Ring, RingError, TruncatedSeries

DEFAULT_WINDOW = 8
KRONECKER_NOTE = "kronecker_flag is evidence from a finite prefix, not a proof of rationality"


def hankel_matrix(f: TruncatedSeries, n: int, k: int = 0) -> list[list]:
    """(c_{k+i+j})_{0<=i,j<n}."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be >= 0")
    need = k + 2 * n - 1
    if n and f.order < need:
        raise InsufficientOrder(f"H_{n}^({k}) needs order {need}, series has {f.order}")
    c = f.coeffs
    return [[c[k + i + j] for j in range(n)] for i in range(n)]


def hankel_det(f: TruncatedSeries, n: int, k: int = 0):
    """H_n^{(k)}(f); H_0 = 1."""
    rows = hankel_matrix(f, n, k)
    return f.ring.normalize(det(rows, f.ring))


def bordered_det(f: TruncatedSeries, k: int, k_prime: int):
    """(k+1)x(k+1) determinant: rows c_{i+j} for i<k, last row c_{k'+j}."""
    if k < 0 or k_prime < k:
        raise ValueError("need 0 <= k <= k'")
    need = k + k_prime + 1
    if f.order < need:
        raise InsufficientOrder(f"H_({k},{k_prime}) needs order {need}, series has {f.order}")
    c = f.coeffs
    rows = [[c[i + j] for j in range(k + 1)] for i in range(k)]
    rows.append([c[k_prime + j] for j in range(k + 1)])
    return f.ring.normalize(det(rows, f.ring))


def hankel_values(f: TruncatedSeries, N: int, k: int = 0) -> list:
    """[H_1^{(k)}, ..., H_N^{(k)}]."""
    if N < 0:
        raise ValueError("N must be >= 0")
    need = k + 2 * N - 1
    if N and f.order < need:
        raise InsufficientOrder(f"table to N={N} needs order {need}, series has {f.order}")
    R = f.ring
    if isinstance(R, IntegersMod) and R.is_field and R.modulus < 2**20 and N:
        return leading_minors_mod(hankel_matrix(f, N, k), R.modulus)
    return [hankel_det(f, n, k) for n in range(1, N + 1)]


def rho_from_indices(indices: Sequence[int], window: int = DEFAULT_WINDOW) -> Fraction | None:
    """Max of n_{i+1}/n_i over the last ``window`` gaps; None with < 2 indices."""
    if window < 1:
        raise ValueError("window must be >= 1")
    if len(indices) < 2:
        return None
    tail = list(indices)[-(window + 1):]
    return max(Fraction(b, a) for a, b in zip(tail, tail[1:]))


@dataclass(frozen=True)
class HankelReport:
    shift: int
    table: tuple
    nonzero_indices: tuple[int, ...]
    rho_estimate: Fraction | str | None
    kronecker_flag: bool
    ring: Ring
    window: int = DEFAULT_WINDOW

    @property
    def N(self) -> int:
        return len(self.table)

    def value(self, n: int):
        if n == 0:
            return self.ring.normalize(1)
        return self.table[n - 1]

    def to_json(self) -> dict:
        rho = self.rho_estimate
        if isinstance(rho, Fraction):
            rho = str(rho) if rho.denominator != 1 else rho.numerator
        return {
            "shift": self.shift,
            "ring": self.ring.name,
            "N": self.N,
            "table": [self.ring.to_json(x) for x in self.table],
            "nonzero_indices": list(self.nonzero_indices),
            "rho_estimate": rho,
            "rho_window": self.window,
            "kronecker_flag": self.kronecker_flag,
            "note": KRONECKER_NOTE,
        }


def hankel_table(
    f: TruncatedSeries, N: int, k: int = 0, window: int = DEFAULT_WINDOW
) -> HankelReport:
    """H_1^{(k)}..H_N^{(k)} with nonzero-index analysis.

    ``kronecker_flag`` is set when the trailing run of zeros is longer than
    the last nonzero index n_0, i.e. H_n = 0 for n_0 < n <= N and N > 2 n_0.
    In that case ``rho_estimate`` is ``"inf"``.
    """
    values = hankel_values(f, N, k)
    nonzero = tuple(n for n, h in enumerate(values, start=1) if h != 0)
    last = nonzero[-1] if nonzero else 0
    kronecker = N > 2 * last
    rho = "inf" if kronecker else rho_from_indices(nonzero, window)
    return HankelReport(k, tuple(values), nonzero, rho, kronecker, f.ring, window)


# ----------------------------------------------------------------------
# periodicity


@dataclass(frozen=True)
class PeriodicityEvidence:
    modulus: int | None
    preperiod: int
    period: int
    verified_length: int
    pattern: tuple = ()

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "preperiod": self.preperiod,
            "period": self.period,
            "verified_length": self.verified_length,
            "pattern": list(self.pattern),
        }


def find_period(values: Sequence, modulus: int | None = None) -> PeriodicityEvidence | None:
    """Smallest preperiod+period (ties: smaller period) with
    values[i] == values[i+period] for i >= preperiod and preperiod + 2*period <= len.
    """
    vals = list(values)
    L = len(vals)
    best = None
    for per in range(1, L // 2 + 1):
        pre = 0
        for i in range(L - per - 1, -1, -1):
            if vals[i] != vals[i + per]:
                pre = i + 1
                break
        if pre + 2 * per > L:
            continue
        key = (pre + per, per)
        if best is None or key < best[0]:
            best = (key, pre, per)
    if best is None:
        return None
    _, pre, per = best
    return PeriodicityEvidence(modulus, pre, per, L, tuple(vals[pre:pre + per]))


def mod_p_scan(f: TruncatedSeries, N: int) -> PeriodicityEvidence | None:
    """Ultimate periodicity of H_1..H_N over a prime field; None if not detected."""
    R = f.ring
    if not isinstance(R, IntegersMod):
        raise RingError("mod_p_scan needs a series over Zmod(p)")
    if not R.is_field:
        raise RingError(
            f"composite modulus {R.modulus}: compute the table over ZZ and reduce it"
        )
    if N < 4:
        raise ValueError("N must be >= 4")
    return find_period(hankel_values(f, N), R.modulus)
