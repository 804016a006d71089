"""Exact determinants over the coefficient rings of :mod:`exactcore`."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations

import numpy as np

from .exactcore import QQ, ZZ, IntegersMod, Ring, RingError


def det_bareiss(rows) -> int | Fraction:
    """Fraction-free Gaussian elimination (Bareiss) with row pivoting.

    Exact over ZZ; also correct for Fraction entries.
    """
    n = len(rows)
    if n == 0:
        return 1
    M = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = M[k][k]
        rowk = M[k]
        for i in range(k + 1, n):
            rowi = M[i]
            a = rowi[k]
            for j in range(k + 1, n):
                v = pivot * rowi[j] - a * rowk[j]
                if isinstance(v, int):
                    rowi[j] = v // prev
                else:
                    rowi[j] = v / prev
            rowi[k] = 0
        prev = pivot
    return sign * M[n - 1][n - 1]


def det_mod(rows, modulus: int) -> int:
    """Determinant over a prime field Z/pZ by plain elimination."""
    p = modulus
    n = len(rows)
    if n == 0:
        return 1 % p
    M = [[x % p for x in r] for r in rows]
    det = 1
    for k in range(n):
        piv = None
        for i in range(k, n):
            if M[i][k]:
                piv = i
                break
        if piv is None:
            return 0
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            det = -det
        pk = M[k][k]
        det = det * pk % p
        inv = pow(pk, -1, p)
        rowk = M[k]
        for i in range(k + 1, n):
            rowi = M[i]
            f = rowi[k] * inv % p
            if f:
                for j in range(k + 1, n):
                    rowi[j] = (rowi[j] - f * rowk[j]) % p
    return det % p


def det_mod_numpy(rows, modulus: int) -> int:
    """Vectorised mod-p elimination; ``modulus`` must be prime and < 2**31."""
    p = modulus
    M = np.array(rows, dtype=np.int64) % p
    n = M.shape[0]
    if n == 0:
        return 1 % p
    det = 1
    for k in range(n):
        nz = np.flatnonzero(M[k:, k])
        if nz.size == 0:
            return 0
        piv = k + int(nz[0])
        if piv != k:
            M[[k, piv]] = M[[piv, k]]
            det = -det
        pk = int(M[k, k])
        det = det * pk % p
        if k + 1 < n:
            inv = pow(pk, -1, p)
            f = (M[k + 1:, k] * inv) % p
            M[k + 1:, k:] = (M[k + 1:, k:] - np.outer(f, M[k, k:]) % p) % p
    return det % p


def det_cofactor(rows):
    """Leibniz/Laplace reference determinant; only for tiny matrices."""
    n = len(rows)
    if n == 0:
        return 1
    total = 0
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1 if inversions % 2 else 1
        for i, j in enumerate(perm):
            term *= rows[i][j]
            if term == 0:
                break
        total += term
    return total


def det(rows, ring: Ring):
    """Exact determinant of a square matrix over ``ring``."""
    if ring == ZZ:
        return det_bareiss(rows)
    if ring == QQ:
        return QQ.normalize(det_bareiss([[Fraction(x) for x in r] for r in rows]))
    if isinstance(ring, IntegersMod):
        if not ring.is_field:
            raise RingError(
                f"elimination over composite modulus {ring.modulus} is not supported; "
                "compute over ZZ and reduce"
            )
        if len(rows) > 24 and ring.modulus < 2**31:
            return det_mod_numpy(rows, ring.modulus)
        return det_mod(rows, ring.modulus)
    raise RingError(f"no determinant routine for {ring}")


def _solve_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """A^{-1} B over Z/pZ for a nonsingular square A."""
    t = A.shape[0]
    aug = np.concatenate([A, B], axis=1) % p
    for k in range(t):
        nz = np.flatnonzero(aug[k:, k])
        piv = k + int(nz[0])
        if piv != k:
            aug[[k, piv]] = aug[[piv, k]]
        inv = pow(int(aug[k, k]), -1, p)
        aug[k] = aug[k] * inv % p
        f = aug[:, k].copy()
        f[k] = 0
        aug = (aug - np.outer(f, aug[k]) % p) % p
    return aug[:, t:]


def leading_minors_mod(rows, modulus: int) -> list[int]:
    """All leading principal minors det(M[:n, :n]), n = 1..N, over Z/pZ.

    Keeps the Schur complement of the last nonsingular leading block, so a
    table costs O(N^3) when zero runs are short instead of O(N^4).
    """
    p = modulus
    if p >= 2**20:
        raise ValueError("modulus too large for int64 block products")
    S = np.array(rows, dtype=np.int64) % p
    N = S.shape[0]
    out = [0] * N
    base = 1
    m = 0
    while m < N:
        if not S.any():
            break  # remaining minors all vanish
        rest = N - m
        found = 0
        d = 0
        for t in range(1, rest + 1):
            block = S[:t, :t]
            if block[t - 1].any() and block[:, t - 1].any():
                d = det_mod_numpy(block, p)
                if d:
                    found = t
                    break
        if not found:
            break
        t = found
        out[m + t - 1] = base * d % p
        base = base * d % p
        if t < rest:
            X = _solve_mod(S[:t, :t], S[:t, t:], p)
            S = (S[t:, t:] - (S[t:, :t] @ X) % p) % p
        m += t
    return out
