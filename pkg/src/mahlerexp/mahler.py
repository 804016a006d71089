"""Iterated Mahler equations and the explicit rational approximations built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from .exactcore import QQ, ZZ, Polynomial, RingError, TruncatedSeries, compose_power
from .hfrac import hfrac_expand
from .pade import pade_construct
from .sequences import MahlerEquation


class MahlerError(ValueError):
    pass


@dataclass(frozen=True)
class IteratedEquation:
    """f = A_m/B_m + (C_m/D_m) f(z^{d^m})."""

    m: int
    d: int
    A: Polynomial
    B: Polynomial
    C: Polynomial
    D: Polynomial

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "d": self.d,
            "A": self.A.to_json(),
            "B": self.B.to_json(),
            "C": self.C.to_json(),
            "D": self.D.to_json(),
            "degrees": [self.A.degree, self.B.degree, self.C.degree, self.D.degree],
        }


def degree_bounds(eq: MahlerEquation, m: int) -> dict:
    alpha, beta, gamma, delta = (max(x, 0) for x in eq.degrees)
    d = eq.d
    geo = (d**m - 1) // (d - 1)
    return {
        "C": gamma * geo,
        "D": delta * geo,
        "B": (beta + delta) * d**m,
        "A": (alpha + beta + gamma + delta) * d**m,
    }


def _iterate(eq: MahlerEquation, m: int) -> IteratedEquation:
    d = eq.d
    one = Polynomial([1])
    Cs, Ds, Bs, As = [], [], [], []  # P(z^{d^j}) for j < m
    for j in range(m):
        step = d**j
        Cs.append(eq.C.compose_power(step))
        Ds.append(eq.D.compose_power(step))
        Bs.append(eq.B.compose_power(step))
        As.append(eq.A.compose_power(step))
    prefix_C = [one]
    prefix_D = [one]
    for j in range(m):
        prefix_C.append(prefix_C[-1] * Cs[j])
        prefix_D.append(prefix_D[-1] * Ds[j])
    C_m, D_m = prefix_C[m], prefix_D[m]
    if m == 0:
        return IteratedEquation(0, d, Polynomial([]), one, one, one)
    B_m = reduce(lambda a, b: a * b, Bs, prefix_D[m - 1])
    A_m = Polynomial([])
    for j in range(m):
        if As[j].is_zero():
            continue
        try:
            cofactor = B_m.exquo(prefix_D[j] * Bs[j])
        except RingError as exc:
            raise MahlerError(f"internal: D_{j} B(z^(d^{j})) does not divide B_{m}") from exc
        A_m = A_m + prefix_C[j] * As[j] * cofactor
    return IteratedEquation(m, d, A_m, B_m, C_m, D_m)


def iterate_equation(eq: MahlerEquation, m: int) -> IteratedEquation:
    """The m-fold iterate of ``eq``, with the degree bounds asserted."""
    if m < 1:
        raise MahlerError("m must be >= 1")
    it = _iterate(eq, m)
    bounds = degree_bounds(eq, m)
    if it.C.degree != bounds["C"] or it.D.degree != bounds["D"]:
        raise MahlerError("degree of C_m or D_m differs from the closed form")
    if it.B.degree > bounds["B"] or it.A.degree > bounds["A"]:
        raise MahlerError("degree bound on A_m or B_m violated")
    return it


def compose_iterates(first: IteratedEquation, second: IteratedEquation) -> IteratedEquation:
    """Substitute ``second`` (taken at z^{d^{m1}}) into ``first``.

    f = A1/B1 + C1/D1 (A2/B2 + C2/D2 f(z^{d^{m1+m2}}))(z^{d^{m1}}), written over
    the same normal form as iterate_equation (not reduced).
    """
    if first.d != second.d:
        raise MahlerError("different d")
    s = first.d**first.m
    A2, B2, C2, D2 = (p.compose_power(s) for p in (second.A, second.B, second.C, second.D))
    A = first.A * first.D * B2 + first.B * first.C * A2
    B = first.B * first.D * B2
    return IteratedEquation(first.m + second.m, first.d, A, B, first.C * C2, first.D * D2)


def iterated_residual(it: IteratedEquation, f: TruncatedSeries) -> TruncatedSeries:
    """D_m B_m f - D_m A_m - C_m B_m f(z^{d^m}) to the order of f."""
    n = f.order
    if it.m == 0:
        return TruncatedSeries.zero(n)
    fd = compose_power(f, it.d**it.m).truncate(n)
    return f.mul_poly(it.D * it.B) - (it.D * it.A).to_series(n) - fd.mul_poly(it.C * it.B)


# ----------------------------------------------------------------------
# explicit approximations


def _integer_pair(P: Polynomial, Q: Polynomial) -> tuple[Polynomial, Polynomial, int]:
    den = 1
    for c in P.coeffs + Q.coeffs:
        den = math.lcm(den, Fraction(c).denominator)
    Pi = Polynomial([int(Fraction(c) * den) for c in P.coeffs])
    Qi = Polynomial([int(Fraction(c) * den) for c in Q.coeffs])
    return Pi, Qi, den


def scaled_value(P: Polynomial, b: int, E: int) -> int:
    """b^E P(1/b) as an exact integer, by Horner on the reversed coefficients."""
    if P.degree > E:
        raise MahlerError(f"scaling exponent {E} below degree {P.degree}")
    acc = 0
    cs = list(P.coeffs) + [0] * (E + 1 - len(P.coeffs))
    for c in cs:
        acc = acc * b + c
    # acc = sum c_j b^{E-j}
    return acc


def scaled_value_rational(P: Polynomial, b: int, E: int) -> int:
    """Same as :func:`scaled_value`, through Fraction evaluation."""
    v = P(Fraction(1, b)) * Fraction(b) ** E
    if v.denominator != 1:
        raise MahlerError("scaled value is not an integer")
    return v.numerator


@dataclass(frozen=True)
class ExplicitApproximant:
    i: int
    m: int
    b: int
    n_i: int
    n_i_prime: int
    e_i: int
    P: Polynomial
    Q: Polynomial
    p: int
    q: int
    clearing: int
    gcd: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "m": self.m,
            "b": self.b,
            "n_i": self.n_i,
            "n_i_prime": self.n_i_prime,
            "e_i": self.e_i,
            "p": str(self.p),
            "q": str(self.q),
            "q_bits": self.q.bit_length(),
            "clearing": self.clearing,
            "gcd": self.gcd,
        }


def hankel_structure(f: TruncatedSeries, count: int) -> list[int]:
    """First ``count`` nonzero Hankel indices n_0 < n_1 < ... (from the H-fraction)."""
    h = hfrac_expand(f.change_ring(QQ) if f.ring == ZZ else f, max_levels=count + 1)
    s = h.s_values()[1:]
    if len(s) < count:
        raise MahlerError(f"only {len(s)} nonzero Hankel indices are certified")
    return s


def build_approximant(
    eq: MahlerEquation, f: TruncatedSeries, b: int, i_index: int, m: int
) -> ExplicitApproximant:
    """p/q approximating f(1/b) from the [n_i-1/n_i] Padé pair and m iterations.

    ``i_index`` counts the nonzero Hankel indices of f from 0.
    P_{i,m} = A_m D_m Q_i(z^{d^m}) + B_m C_m P_i(z^{d^m}),
    Q_{i,m} = B_m D_m Q_i(z^{d^m}).
    """
    if b < 2:
        raise MahlerError("b must be >= 2")
    if i_index < 0 or m < 0:
        raise MahlerError("i and m must be >= 0")
    s = hankel_structure(f, i_index + 2)
    n_i, n_next = s[i_index], s[i_index + 1]
    approx = pade_construct(f, n_i)
    if approx.k_prime is None:
        raise MahlerError("k' not located: the series looks rational at this level")
    n_i_prime = approx.k_prime
    if n_i_prime != n_next - 1:
        raise MahlerError(
            f"contact exponent k' = {n_i_prime} disagrees with the next nonzero index {n_next}"
        )
    Pi, Qi, clearing = _integer_pair(approx.P, approx.Q)
    it = _iterate(eq, m) if m == 0 else iterate_equation(eq, m)
    step = eq.d**m
    Qs, Ps = Qi.compose_power(step), Pi.compose_power(step)
    P_im = it.A * it.D * Qs + it.B * it.C * Ps
    Q_im = it.B * it.D * Qs
    alpha, beta, gamma, delta = eq.degrees
    e_i = alpha + beta + gamma + 2 * delta + n_i
    E = e_i * step
    if max(P_im.degree, Q_im.degree) > E:
        raise MahlerError("scaling exponent e_i d^m below the degree of P_im or Q_im")
    qv = scaled_value(Q_im, b, E)
    if qv == 0:
        raise MahlerError("Q_{i,m}(1/b) = 0; the evaluation hypothesis fails")
    pv = scaled_value(P_im, b, E)
    sign = 1 if qv > 0 else -1
    p, q = pv * sign, abs(qv)
    return ExplicitApproximant(
        i_index, m, b, n_i, n_i_prime, e_i, P_im, Q_im, p, q, clearing, math.gcd(p, q)
    )


# ----------------------------------------------------------------------
# audit


def log_abs(x: Fraction, base: int) -> float:
    """log_base |x| for a nonzero rational of any size."""
    if x == 0:
        raise ValueError("log of zero")
    num, den = abs(x.numerator), x.denominator

    def log2_int(n: int) -> float:
        shift = max(0, n.bit_length() - 60)
        return math.log2(n >> shift) + shift

    return (log2_int(num) - log2_int(den)) / math.log2(base)


def predicted_exponent(n_i: int, n_i_prime: int, eta: int, iota: int, d: int, m: int) -> int:
    return (n_i + n_i_prime) * d**m + (eta + iota) * (d**m - 1) // (d - 1)


@dataclass(frozen=True)
class AuditRecord:
    i: int
    m: int
    q_bits: int
    measured_exponent: float | None
    predicted_exponent: int
    ratio: float | None
    within_tolerance: bool
    degenerate: bool = False

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "m": self.m,
            "q_bits": self.q_bits,
            "measured_exponent": self.measured_exponent,
            "predicted_exponent": self.predicted_exponent,
            "ratio": self.ratio,
            "within_tolerance": self.within_tolerance,
            "degenerate": self.degenerate,
        }


def audit_approximation(
    app: ExplicitApproximant,
    f_value,
    eq: MahlerEquation,
    tolerance: float = 0.05,
) -> AuditRecord:
    """Compare -log_b |f(1/b) - p/q| with the predicted exponent.

    ``f_value`` is an EvaluatedNumber (approximation + rigorous error bound).
    """
    eta = eq.C.valuation() or 0
    iota = eq.D.valuation() or 0
    pred = predicted_exponent(app.n_i, app.n_i_prime, eta, iota, eq.d, app.m)
    diff = f_value.approximation - app.value
    if diff == 0 and f_value.error_bound == 0:
        return AuditRecord(app.i, app.m, app.q.bit_length(), None, pred, None, False, True)
    if f_value.error_bound * 10 > abs(diff):
        raise MahlerError(
            "evaluation error bound is not an order of magnitude below |f - p/q|; increase M"
        )
    measured = -log_abs(diff, app.b)
    ratio = measured / pred
    return AuditRecord(
        app.i, app.m, app.q.bit_length(), measured, pred, ratio, abs(ratio - 1) <= tolerance
    )


def q_sandwich(qs: list[int], d: int, eps: float) -> list[bool]:
    """q_m < q_{m+1} <= q_m^{d(1+eps)} for consecutive pairs (checked in log scale)."""
    out = []
    for a, b in zip(qs, qs[1:]):
        la, lb = log_abs(Fraction(a), 2), log_abs(Fraction(b), 2)
        out.append(a < b and lb <= d * (1 + eps) * la)
    return out
