"""Exact coefficient prefixes of automatic and Mahler-type series.

Each named series has a direct definition (recurrence, digit rule or
defining sum) and, where one exists, a Mahler functional equation in
:data:`EQUATIONS`; the two routes are cross-checked in the test-suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from .exactcore import (
    GF,
    QQ,
    ZZ,
    Polynomial,
    Ring,
    RingError,
    TruncatedSeries,
    compose_power,
    rational_to_series,
)


class SequenceError(ValueError):
    pass


def _check_n(N: int) -> None:
    if N < 1:
        raise SequenceError("N must be >= 1")


@dataclass(frozen=True)
class MahlerEquation:
    """f(z) = A(z)/B(z) + C(z)/D(z) * f(z^d), polynomials over ZZ."""

    A: Polynomial
    B: Polynomial
    C: Polynomial
    D: Polynomial
    d: int

    def __post_init__(self):
        if self.B.is_zero() or self.D.is_zero():
            raise SequenceError("B and D must be nonzero")
        if self.d < 2:
            raise SequenceError("d must be >= 2")

    @classmethod
    def from_lists(cls, A, B, C, D, d: int, ring: Ring = ZZ) -> "MahlerEquation":
        return cls(*(Polynomial(p, ring) for p in (A, B, C, D)), d)

    @classmethod
    def from_json(cls, data: dict) -> "MahlerEquation":
        return cls.from_lists(data["A"], data["B"], data["C"], data["D"], int(data["d"]))

    def to_json(self) -> dict:
        return {
            "A": self.A.to_json(),
            "B": self.B.to_json(),
            "C": self.C.to_json(),
            "D": self.D.to_json(),
            "d": self.d,
        }

    @property
    def degrees(self) -> tuple[int, int, int, int]:
        return self.A.degree, self.B.degree, self.C.degree, self.D.degree

    def residual(self, f: TruncatedSeries) -> TruncatedSeries:
        """D B f - D A - C B f(z^d), to the order of ``f``."""
        R = f.ring
        A, B, C, D = (p.change_ring(R) for p in (self.A, self.B, self.C, self.D))
        lhs = f.mul_poly(D * B)
        fd = compose_power(f, self.d).truncate(f.order)
        rhs = fd.mul_poly(C * B) + (D * A).to_series(f.order)
        return lhs - rhs


def feq_generate(
    eq: MahlerEquation, N: int, c0=None, ring: Ring = ZZ
) -> TruncatedSeries:
    """Coefficients of the power-series solution of ``eq`` to order N.

    The constant term is forced by the equation unless D(0) = C(0), in which
    case it must be supplied (and is checked for consistency).
    """
    _check_n(N)
    A, B, C, D = (p.change_ring(ring) for p in (eq.A, eq.B, eq.C, eq.D))
    E = D * B
    DA = D * A
    CB = C * B
    if E[0] == 0:
        raise SequenceError("B(0) D(0) must be nonzero")
    # constant term: E0 c0 = DA0 + CB0 c0
    lam = E[0] - CB[0]
    if lam == 0:
        if c0 is None:
            raise SequenceError("constant term is not determined by the equation; pass c0")
        if DA[0] != 0:
            raise SequenceError("inconsistent constant term")
        c0 = ring.normalize(c0)
    else:
        try:
            forced = ring.div(DA[0], lam)
        except (RingError, ZeroDivisionError) as exc:
            raise SequenceError(f"constant term not in {ring}: {exc}") from exc
        if c0 is not None and ring.normalize(c0) != forced:
            raise SequenceError("supplied c0 contradicts the equation")
        c0 = forced
    e0 = E[0]
    Ec, CBc = E.coeffs, CB.coeffs
    d = eq.d
    c = [c0]
    for m in range(1, N):
        s = DA[m]
        # (CB * f(z^d))_m
        for i, cb in enumerate(CBc):
            if cb == 0 or i > m:
                continue
            t = m - i
            if t % d == 0:
                s += cb * c[t // d]
        for i in range(1, min(m, len(Ec) - 1) + 1):
            s -= Ec[i] * c[m - i]
        try:
            c.append(ring.div(ring.normalize(s), e0))
        except RingError as exc:
            raise SequenceError(f"coefficient {m} is not in {ring}") from exc
    return TruncatedSeries(c, ring, N)


# ----------------------------------------------------------------------
# direct definitions


def thue_morse_bits(N: int) -> list[int]:
    t = [0] * N
    for n in range(1, N):
        t[n] = t[n // 2] if n % 2 == 0 else 1 - t[n // 2]
    return t


def stern_diatomic(N: int) -> list[int]:
    """a_0..a_{N-1} of Stern's sequence."""
    a = [0, 1] + [0] * max(0, N - 2)
    for n in range(2, N):
        h = n // 2
        a[n] = a[h] if n % 2 == 0 else a[h] + a[h + 1]
    return a[:N]


def stern_twisted(N: int) -> list[int]:
    b = [0, 1] + [0] * max(0, N - 2)
    for n in range(2, N):
        h = n // 2
        b[n] = -b[h] if n % 2 == 0 else -(b[h] + b[h + 1])
    return b[:N]


def paperfolding_bits(N: int) -> list[int]:
    u = [0] * N
    for n in range(N):
        if n % 4 == 0:
            u[n] = 1
        elif n % 4 == 2:
            u[n] = 0
        else:
            u[n] = u[(n - 1) // 2]
    return u


def cantor_bits(N: int) -> list[int]:
    out = []
    for n in range(N):
        m = n
        ok = 1
        while m:
            if m % 3 == 1:
                ok = 0
                break
            m //= 3
        out.append(ok)
    return out


def _v2(m: int) -> int:
    return (m & -m).bit_length() - 1


def _powers_below(base: int, N: int, start: int = 0):
    k = start
    while base**k < N:
        yield k
        k += 1


def _mahler_sum(N: int, sign: int) -> list[int]:
    # sum_j (-1)^j z^{2^j} / prod_{i<j} (1 - z^{2^i}) when sign = -1, else +1
    total = TruncatedSeries.zero(N)
    denom = TruncatedSeries.one(N)
    for j in _powers_below(2, N):
        term = denom.inverse().times_z(2**j).truncate(N)
        total = total + (term if sign > 0 or j % 2 == 0 else -term)
        denom = denom.mul_poly(Polynomial([1]) - Polynomial.monomial(2**j))
    return list(total.coeffs)


MAHLER_FACTORS = {
    "F5": (5, [1, -1, -1, -1, 1]),
    "F11": (11, [1, -1, -1, 1, -1, 1, 1, 1, 1, -1, -1]),
    "F13": (13, [1, -1, -1, 1, -1, -1, -1, -1, -1, 1, -1, -1, 1]),
    "F17a": (17, [1, -1, -1, 1, -1, 1, 1, 1, 1, 1, 1, 1, -1, 1, -1, -1, 1]),
    "F17b": (17, [1, -1, -1, -1, 1, 1, -1, 1, 1, 1, -1, 1, 1, -1, -1, -1, 1]),
}


def _product_power(base: int, factor: Polynomial, N: int) -> list[int]:
    # prod_k factor(z^{base^k}) truncated to order N
    f = TruncatedSeries.one(N)
    for k in _powers_below(base, N):
        f = f.mul_poly(factor.compose_power(base**k) if k else factor)
    return list(f.coeffs)


def _calF(N: int) -> list[int]:
    out = [0] * N
    for m in range(1, N):
        s = 0
        for n in range(_v2(m) + 1):
            s += -1 if (m >> n) % 2 == 0 else 1
        out[m] = s
    return out


REGISTRY: dict[str, tuple[str, Callable[[int], list]]] = {
    "thue_morse_01": ("Thue-Morse t_n on {0,1}", thue_morse_bits),
    "thue_morse_pm1": ("(-1)^{t_n} = prod (1 - z^{2^n})", lambda N: [1 - 2 * t for t in thue_morse_bits(N)]),
    "stern_S": ("S(z) = sum a_{n+1} z^n, Stern diatomic", lambda N: stern_diatomic(N + 1)[1:]),
    "stern_T": ("T(z) = sum b_{n+1} z^n, twisted Stern", lambda N: stern_twisted(N + 1)[1:]),
    "paperfolding": ("regular paperfolding u_n on {0,1}", paperfolding_bits),
    "cantor": ("Cantor indicator: no digit 1 in base 3", cantor_bits),
    "gros": ("Gros sequence, z^m coefficient v_2(m)+1", lambda N: [0] + [_v2(m) + 1 for m in range(1, N)]),
    "calG": ("sum z^{2^n} / (1 - z^{2^n})", lambda N: [0] + [_v2(m) + 1 for m in range(1, N)]),
    "calF": ("sum z^{2^n} / (1 + z^{2^n})", _calF),
    "L": ("sum z^{2^j} / prod_{i<j} (1 - z^{2^i})", lambda N: _mahler_sum(N, +1)),
    "M": ("sum (-1)^j z^{2^j} / prod_{i<j} (1 - z^{2^i})", lambda N: _mahler_sum(N, -1)),
}
for _name, (_base, _coeffs) in MAHLER_FACTORS.items():
    REGISTRY[_name] = (
        f"prod_k P(z^{{{_base}^k}}), P = {_coeffs}",
        (lambda b, c: lambda N: _product_power(b, Polynomial(c), N))(_base, _coeffs),
    )


def _eq(A, B, C, D, d, c0=None):
    return MahlerEquation.from_lists(A, B, C, D, d), c0


# name -> (equation, constant term when the equation leaves it free)
EQUATIONS: dict[str, tuple[MahlerEquation, Any]] = {
    "thue_morse_01": _eq([0, 1], [1, 0, -1], [1, -1], [1], 2, 0),
    "thue_morse_pm1": _eq([0], [1], [1, -1], [1], 2, 1),
    "stern_S": _eq([0], [1], [1, 1, 1], [1], 2, 1),
    "stern_T": _eq([2], [1], [-1, -1, -1], [1], 2),
    "paperfolding": _eq([1], [1, 0, 0, 0, -1], [0, 1], [1], 2),
    "cantor": _eq([0], [1], [1, 0, 1], [1], 3, 1),
    "gros": _eq([0, 1], [1, -1], [1], [1], 2, 0),
    "calG": _eq([0, 1], [1, -1], [1], [1], 2, 0),
    "calF": _eq([0, 1], [1, 1], [1], [1], 2, 0),
    "L": _eq([0, 1], [1], [1], [1, -1], 2, 0),
    "M": _eq([0, 1], [1], [-1], [1, -1], 2),
}
for _name, (_base, _coeffs) in MAHLER_FACTORS.items():
    EQUATIONS[_name] = _eq([0], [1], _coeffs, [1], _base, 1)


def gen_named(name: str, N: int, ring: Ring = ZZ) -> TruncatedSeries:
    """First N coefficients of a registered series."""
    _check_n(N)
    try:
        _, fn = REGISTRY[name]
    except KeyError:
        raise SequenceError(f"unknown sequence {name!r}") from None
    return TruncatedSeries(fn(N), ZZ, N).change_ring(ring)


def list_sequences() -> list[dict]:
    return [
        {"name": name, "description": desc, "has_equation": name in EQUATIONS}
        for name, (desc, _) in REGISTRY.items()
    ]


# ----------------------------------------------------------------------
# infinite products


def product2_generate(u: int, C: Polynomial, D: Polynomial, N: int) -> TruncatedSeries:
    """prod_{n>=0} (1 + u z^{2^n} + 2 z^{2^{n+1}} C(z^{2^n}) / D(z^{2^n}))."""
    _check_n(N)
    if D[0] != 1:
        raise SequenceError("product2 requires D(0) = 1")
    z = Polynomial([0, 1])
    num = D + z * D * u + z * z * C * 2
    f = TruncatedSeries.one(N)
    n = 0
    while 2**n < N:
        step = 2**n
        m = -(-N // step)
        factor = rational_to_series(num, D, m)
        if step > 1:
            factor = compose_power(factor, step)
        f = f * factor.truncate(N)
        n += 1
    return f


def product3_generate(C: Polynomial, D: Polynomial, N: int) -> TruncatedSeries:
    """prod_{n>=0} C(z^{3^n}) / D(z^{3^n})."""
    _check_n(N)
    if C[0] != 1 or D[0] != 1:
        raise SequenceError("product3 requires C(0) = D(0) = 1")
    f = TruncatedSeries.one(N)
    n = 0
    while 3**n < N:
        step = 3**n
        m = -(-N // step)
        factor = rational_to_series(C, D, m)
        if step > 1:
            factor = compose_power(factor, step)
        f = f * factor.truncate(N)
        n += 1
    return f


def product_generate(spec: "SequenceSpec", N: int) -> TruncatedSeries:
    p = spec.params
    if spec.kind == "product2":
        return product2_generate(p["u"], _as_poly(p["C"]), _as_poly(p["D"]), N)
    if spec.kind == "product3":
        return product3_generate(_as_poly(p["C"]), _as_poly(p["D"]), N)
    raise SequenceError(f"not a product spec: {spec.kind}")


def derived_g(f: TruncatedSeries, u: int) -> TruncatedSeries:
    """g with f = 1 / (1 - u z + 2 z^2 g), for a product2 series f.

    The order drops by 2 (division by z^2).
    """
    w = f.inverse() - Polynomial([1, -u]).to_series(f.order)
    if w[0] != 0 or (f.order > 1 and w[1] != 0):
        raise SequenceError("1/f - 1 + u z does not vanish to order 2")
    try:
        return w.drop(2).divide_exact(2)
    except RingError as exc:
        raise SequenceError("1/f - 1 + u z is not divisible by 2") from exc


def product2_auxiliary_equation(u: int, C: Polynomial, D: Polynomial):
    """(A*, B*, C*) with A* + B* g(z) + C* g(z^2) = 0 for the derived g."""
    z = Polynomial([0, 1])
    A = (Polynomial([1]) - z * u) * C - D * (u * (u - 1) // 2)
    B = (Polynomial([1]) + z * u) * D + z * z * C * 2
    Cs = -(z * z * D)
    return A, B, Cs


# ----------------------------------------------------------------------
# F_{alpha,beta}, G_{alpha,beta}


def double_sum_generate(alpha: int, beta: int, sign: int, N: int) -> TruncatedSeries:
    """z^{-2^a} sum_n z^{2^{n+a}} / (1 + sign z^{2^{n+b}}), exact to order N.

    ``sign=+1`` gives F_{alpha,beta}, ``sign=-1`` gives G_{alpha,beta}.
    """
    _check_n(N)
    if alpha < 0 or beta < 0:
        raise SequenceError("alpha, beta must be >= 0")
    if sign not in (1, -1):
        raise SequenceError("sign must be +1 or -1")
    out = [0] * N
    n = 0
    while True:
        start = 2 ** (n + alpha) - 2**alpha
        if start >= N:
            break
        step = 2 ** (n + beta)
        coef = 1
        for e in range(start, N, step):
            out[e] += coef
            coef *= -sign
        n += 1
    return TruncatedSeries(out, ZZ, N)


def double_sum_equation(alpha: int, beta: int, sign: int) -> MahlerEquation:
    """F = 1/(1 + sign z^{2^b}) + z^{2^a} F(z^2)."""
    B = [1] + [0] * (2**beta - 1) + [sign]
    return MahlerEquation.from_lists([1], B, [0] * 2**alpha + [1], [1], 2)


# ----------------------------------------------------------------------
# quadratic equations A + B F + C F^2 = 0


def _series_sqrt_unit(w: TruncatedSeries) -> TruncatedSeries:
    R = w.ring
    if w[0] != 1:
        raise SequenceError("square root needs constant term 1")
    inv2 = R.inv(2)
    s = [R.normalize(1)]
    for n in range(1, w.order):
        acc = w[n]
        for i in range(1, n):
            acc -= s[i] * s[n - i]
        s.append(R.normalize(acc * inv2))
    return TruncatedSeries(s, R, w.order)


def quadratic_generate(
    A: Polynomial, B: Polynomial, C: Polynomial, N: int, constant_term=None
) -> TruncatedSeries:
    """Power-series root F of A + B F + C F^2 = 0 over a field, to order N.

    When the constant term of F is not forced (C(0) != 0), pass the root
    through ``constant_term``.  B = 0 with C(0) = 1 is solved by a square
    root of -A/C, taking the branch with leading coefficient
    ``constant_term`` (default: the square root with residue 1 of the
    normalized leading term).
    """
    _check_n(N)
    R = A.ring
    if not R.is_field:
        raise SequenceError("quadratic_generate needs a field")
    if B.is_zero():
        if C[0] != 1:
            raise SequenceError("B = 0 requires C(0) = 1")
        k2 = A.valuation()
        if k2 is None or k2 % 2:
            raise SequenceError("A must be nonzero with even valuation")
        w = rational_to_series(-A, C, N + k2 // 2)
        k = k2 // 2
        lead = w[k2]
        a = constant_term
        if a is None:
            a = next((x for x in range(1, R.characteristic) if R.normalize(x * x) == lead), None)
            if a is None:
                raise SequenceError("leading coefficient is not a square")
        a = R.normalize(a)
        if R.normalize(a * a) != lead:
            raise SequenceError("constant_term does not square to the leading coefficient")
        unit = w.drop(k2).divide_exact(lead)
        root = _series_sqrt_unit(unit).scale(a).times_z(k)
        return root.truncate(N)
    a0, b0, c0 = A[0], B[0], C[0]
    if c0 == 0:
        F0 = R.div(-a0, b0)
        if constant_term is not None and R.normalize(constant_term) != F0:
            raise SequenceError("constant_term contradicts the equation")
    else:
        if constant_term is None:
            raise SequenceError("constant term is not forced; pass constant_term")
        F0 = R.normalize(constant_term)
        if R.normalize(a0 + b0 * F0 + c0 * F0 * F0) != 0:
            raise SequenceError("constant_term is not a root at z = 0")
    lam = R.normalize(b0 + 2 * c0 * F0)
    if lam == 0:
        raise SequenceError("degenerate root: linear coefficient vanishes")
    inv = R.inv(lam)
    F = [F0]
    sq = [R.normalize(F0 * F0)]  # coefficients of F^2 known so far
    for n in range(1, N):
        # F^2 coefficient n without the 2 F0 F_n part
        partial = 0
        for j in range(1, n):
            partial += F[j] * F[n - j]
        s = A[n]
        for i in range(1, min(n, B.degree) + 1):
            s += B[i] * F[n - i]
        s += c0 * partial
        for i in range(1, min(n, C.degree) + 1):
            s += C[i] * sq[n - i]
        Fn = R.normalize(-s * inv)
        F.append(Fn)
        sq.append(R.normalize(partial + 2 * F0 * Fn))
    return TruncatedSeries(F, R, N)


def quadratic_residual(A, B, C, F: TruncatedSeries) -> TruncatedSeries:
    n = F.order
    return A.to_series(n) + F.mul_poly(B) + (F * F).mul_poly(C)


# ----------------------------------------------------------------------
# sequence descriptions


def _as_poly(p, ring: Ring = ZZ) -> Polynomial:
    if isinstance(p, Polynomial):
        return p
    return Polynomial(p, ring)


KINDS = ("named", "functional_equation", "product2", "product3", "double_sum")


@dataclass(frozen=True)
class SequenceSpec:
    kind: str
    params: dict = field(default_factory=dict)
    ring: Ring = ZZ

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SequenceError(f"unknown kind {self.kind!r}")
        p = self.params
        if self.kind == "named" and p.get("name") not in REGISTRY:
            raise SequenceError(f"unknown sequence {p.get('name')!r}")
        if self.kind == "product2" and _as_poly(p["D"])[0] != 1:
            raise SequenceError("product2 requires D(0) = 1")
        if self.kind == "product3" and (_as_poly(p["C"])[0] != 1 or _as_poly(p["D"])[0] != 1):
            raise SequenceError("product3 requires C(0) = D(0) = 1")
        if self.kind == "double_sum" and p.get("sign") not in (1, -1):
            raise SequenceError("double_sum needs sign = +1 or -1")

    @classmethod
    def named(cls, name: str, ring: Ring = ZZ) -> "SequenceSpec":
        return cls("named", {"name": name}, ring)

    def generate(self, N: int) -> TruncatedSeries:
        p = self.params
        if self.kind == "named":
            f = gen_named(p["name"], N)
        elif self.kind == "functional_equation":
            eq = p["equation"]
            if not isinstance(eq, MahlerEquation):
                eq = MahlerEquation.from_json(eq)
            f = feq_generate(eq, N, p.get("c0"))
        elif self.kind in ("product2", "product3"):
            f = product_generate(self, N)
        else:
            f = double_sum_generate(p["alpha"], p["beta"], p["sign"], N)
        return f if self.ring == ZZ else f.change_ring(self.ring)

    def equation(self) -> tuple[MahlerEquation, Any] | None:
        """The Mahler equation behind this spec, when one is known."""
        p = self.params
        if self.kind == "named":
            return EQUATIONS.get(p["name"])
        if self.kind == "functional_equation":
            eq = p["equation"]
            return (eq if isinstance(eq, MahlerEquation) else MahlerEquation.from_json(eq)), p.get("c0")
        if self.kind == "double_sum":
            return double_sum_equation(p["alpha"], p["beta"], p["sign"]), None
        if self.kind == "product2":
            z = Polynomial([0, 1])
            C, D = _as_poly(p["C"]), _as_poly(p["D"])
            return MahlerEquation(Polynomial([0]), Polynomial([1]), D + z * D * p["u"] + z * z * C * 2, D, 2), 1
        if self.kind == "product3":
            return MahlerEquation(Polynomial([0]), Polynomial([1]), _as_poly(p["C"]), _as_poly(p["D"]), 3), 1
        return None


# ----------------------------------------------------------------------
# quadratic fixtures over F_p, one or more per case of A + B F + C F^2 = 0

# name -> (p, case, A, B, C, constant term or None)
QUADRATIC_FIXTURES: dict[str, tuple] = {
    # paperfolding = F_{0,2} mod 2
    "case_i_F2": (2, "i", [1], [1, 0, 0, 0, 1], [0, 1, 0, 0, 0, 1], None),
    "case_i_F3": (3, "i", [1], [1, 1, 1], [0, 0, 1], None),
    "case_ii_F2": (2, "ii", [1], [1, 1, 0, 1], [], None),
    "case_ii_F3": (3, "ii", [1, 2], [1, 1, 2], [], None),
    # L mod 2: z(z-1) + (1-z) L - L^2 = 0
    "case_iii_F2": (2, "iii", [0, 1, 1], [1, 1], [1], 0),
    "case_iii_F3": (3, "iii", [0, 1], [1], [1], 0),
    # Cantor series mod 3: -1 + (1+z^2) F^2 = 0
    "case_iv_F3": (3, "iv", [-1], [], [1, 0, 1], None),
    # prod (1 - z^{3^k}) mod 3
    "case_iv_F3_b": (3, "iv", [-1], [], [1, -1], None),
}


def quadratic_fixture(name: str, N: int) -> TruncatedSeries:
    try:
        p, _, A, B, C, c0 = QUADRATIC_FIXTURES[name]
    except KeyError:
        raise SequenceError(f"unknown quadratic fixture {name!r}") from None
    R = GF(p)
    return quadratic_generate(Polynomial(A, R), Polynomial(B, R), Polynomial(C, R), N, c0)
