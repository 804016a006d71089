"""Named reproducibility fixtures for claims that a finite prefix can check."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .exactcore import GF, Polynomial, TruncatedSeries
from .hankel import find_period, hankel_table, hankel_values, mod_p_scan
from .hfrac import hfrac_expand, level_stream
from .sequences import (
    EQUATIONS,
    MAHLER_FACTORS,
    QUADRATIC_FIXTURES,
    derived_g,
    double_sum_equation,
    double_sum_generate,
    feq_generate,
    gen_named,
    product2_generate,
    product3_generate,
    quadratic_fixture,
)


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class FixtureResult:
    fixture: str
    claim: str
    checked_range: str
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "fixture": self.fixture,
            "claim": self.claim,
            "checked_range": self.checked_range,
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
        }


def scaled_parities(values, offset: int, start: int = 1) -> list[int | None]:
    """H_n / 2^{n-offset} mod 2 for n = start..; None where the quotient is not an integer."""
    out = []
    for n, h in enumerate(values, start=1):
        if n < start:
            continue
        e = n - offset
        if e < 0 or h % (1 << e):
            out.append(None)
        else:
            out.append((h >> e) % 2)
    return out


def stern_pattern(n: int) -> int:
    return 0 if n % 4 in (0, 1) else 1


def _stern_checks(name: str, n_max: int) -> Check:
    f = gen_named(name, 2 * n_max)
    values = hankel_values(f, n_max)
    got = scaled_parities(values, 2, start=2)
    expected = [stern_pattern(n) for n in range(2, n_max + 1)]
    bad = [n for n, g, e in zip(range(2, n_max + 1), got, expected) if g != e]
    return Check(
        f"H_n({name})/2^(n-2) mod 2 follows 0,0,1,1 by n mod 4",
        not bad,
        {"first_failures": bad[:5], "H_2": values[1], "H_3": values[2]},
    )


def stern_congruence(n: int = 64) -> FixtureResult:
    return FixtureResult(
        "stern_congruence",
        "Stern and twisted Stern Hankel determinants modulo 2^(n-1)",
        f"2 <= n <= {n}",
        [_stern_checks("stern_S", n), _stern_checks("stern_T", n)],
    )


def _odd_scaled(name: str, f: TruncatedSeries, n_max: int) -> Check:
    values = hankel_values(f, n_max)
    got = scaled_parities(values, 1)
    bad = [n for n, g in enumerate(got, start=1) if g != 1]
    return Check(f"H_n({name})/2^(n-1) is an odd integer", not bad, {"first_failures": bad[:5]})


def tmm_hankel(n: int = 64) -> FixtureResult:
    f = gen_named("thue_morse_pm1", 2 * n)
    return FixtureResult(
        "tmm_hankel",
        "Thue-Morse +-1 Hankel determinants divided by 2^(n-1) are odd",
        f"1 <= n <= {n}",
        [_odd_scaled("thue_morse_pm1", f, n)],
    )


def mahler_factor_congruences(n: int = 40) -> FixtureResult:
    checks = []
    for name in MAHLER_FACTORS:
        checks.append(_odd_scaled(name, gen_named(name, 2 * n), n))
        eq, c0 = EQUATIONS[name]
        checks.append(
            Check(f"{name}: product expansion equals functional-equation solution",
                  gen_named(name, 2 * n) == feq_generate(eq, 2 * n, c0))
        )
    return FixtureResult(
        "mahler_factor_congruences",
        "F5, F11, F13, F17a, F17b: H_n/2^(n-1) odd",
        f"1 <= n <= {n}",
        checks,
    )


PRODUCT2_INSTANCES = [
    (-1, [0], [1]),
    (1, [1], [1]),
    (3, [2, 0, 1], [1, 1]),
    (0, [1, 1], [1, -1]),
]


def product_hankel_reduction(n: int = 24) -> FixtureResult:
    checks = []
    for u, C, D in PRODUCT2_INSTANCES:
        f = product2_generate(u, Polynomial(C), Polynomial(D), 2 * n + 2)
        g = derived_g(f, u)
        Hf = hankel_values(f, n)
        Hg = [1] + hankel_values(g, n - 1)
        bad = [k for k in range(1, n + 1) if Hf[k - 1] != (-2) ** (k - 1) * Hg[k - 1]]
        checks.append(
            Check(f"u={u}, C={C}, D={D}: H_n(f) = (-2)^(n-1) H_(n-1)(g)", not bad,
                  {"first_failures": bad[:5]})
        )
        # f mod 4 non-rational evidence: g mod 2 has a non-Kronecker table
        rep = hankel_table(g.change_ring(GF(2)), n - 1)
        checks.append(
            Check(f"u={u}, C={C}, D={D}: g mod 2 shows no Kronecker cut-off",
                  not rep.kronecker_flag, {"nonzero_count": len(rep.nonzero_indices)})
        )
    return FixtureResult(
        "product_hankel_reduction",
        "products over 2^n: Hankel determinant reduction to the derived series g",
        f"1 <= n <= {n}",
        checks,
    )


def _nonrational_periodic(label: str, f: TruncatedSeries, n: int) -> list[Check]:
    ev = mod_p_scan(f, n)
    rep = hankel_table(f, n)
    return [
        Check(f"{label}: Hankel table mod {f.ring.characteristic} ultimately periodic",
              ev is not None, ev.to_json() if ev else {}),
        Check(f"{label}: no Kronecker cut-off", not rep.kronecker_flag,
              {"nonzero_count": len(rep.nonzero_indices)}),
    ]


def double_sum_mod2(n: int = 64) -> FixtureResult:
    checks = []
    for alpha, beta in [(0, 0), (0, 2), (1, 0), (1, 3), (2, 1)]:
        for sign in (1, -1):
            f = double_sum_generate(alpha, beta, sign, 2 * n)
            eq = double_sum_equation(alpha, beta, sign)
            checks.append(Check(f"F/G({alpha},{beta},{sign:+d}): single sum satisfies its functional equation",
                                eq.residual(f).is_zero()))
        checks += _nonrational_periodic(f"F({alpha},{beta}) mod 2",
                                        double_sum_generate(alpha, beta, 1, 2 * n).change_ring(GF(2)), n)
    for alpha in range(3):
        f = double_sum_generate(alpha, alpha + 1, -1, 2 * n)
        closed = [1 if m % (2**alpha) == 0 else 0 for m in range(2 * n)]
        checks.append(Check(f"G({alpha},{alpha + 1}) = 1/(1 - z^(2^{alpha}))", list(f.coeffs) == closed))
    return FixtureResult("double_sum_mod2", "F_{a,b}, G_{a,b} with b != a+1 are not rational mod 2",
                         f"order {2 * n}, n <= {n}", checks)


def stern_nonzero_indices(n: int = 64) -> FixtureResult:
    checks = []
    for name in ("stern_S", "stern_T"):
        rep = hankel_table(gen_named(name, 2 * n), n)
        required = [k for k in range(2, n + 1) if k % 4 in (2, 3)]
        missing = [k for k in required if rep.value(k) == 0]
        checks.append(Check(f"{name}: H_n != 0 for n = 2,3 mod 4", not missing,
                            {"rho_estimate": str(rep.rho_estimate)}))
    return FixtureResult("stern_nonzero_indices", "Stern numbers: nonzero Hankel indices have ratio tending to 1",
                         f"2 <= n <= {n}", checks)


def cantor_mod3(n: int = 64) -> FixtureResult:
    f = product3_generate(Polynomial([1, 0, 1]), Polynomial([1]), 2 * n)
    checks = [Check("product of (1+z^(2*3^k)) is the Cantor series",
                    f == gen_named("cantor", 2 * n))]
    checks += _nonrational_periodic("Cantor mod 3", f.change_ring(GF(3)), n)
    return FixtureResult("cantor_mod3", "products over 3^n are not rational mod 3", f"n <= {n}", checks)


def ternary_products_mod3(n: int = 64) -> FixtureResult:
    checks = []
    for C in ([1, -1], [1, 1, -1], [1, -1, -1]):
        f = product3_generate(Polynomial(C), Polynomial([1]), 2 * n)
        checks += _nonrational_periodic(f"prod C(z^(3^k)), C={C}", f.change_ring(GF(3)), n)
    return FixtureResult("ternary_products_mod3", "products (1-z^(3^k)) and (1 +- z^(3^k) - z^(2*3^k)) mod 3",
                         f"n <= {n}", checks)


def quadratic_reduction_mod2(n: int = 64) -> FixtureResult:
    checks = []
    for fixture in ("case_i_F2", "case_iii_F2"):
        f = quadratic_fixture(fixture, 2 * n)
        checks += _nonrational_periodic(fixture, f, n)
    checks.append(Check("paperfolding mod 2 is the case (i) root",
                        quadratic_fixture("case_i_F2", 2 * n) == gen_named("paperfolding", 2 * n, GF(2))))
    checks.append(Check("L mod 2 is the case (iii) root",
                        quadratic_fixture("case_iii_F2", 2 * n) == gen_named("L", 2 * n, GF(2))))
    return FixtureResult("quadratic_reduction_mod2", "equations in f(z), f(z^2) reduce to quadratics mod 2",
                         f"n <= {n}", checks)


def lm_mod2(n: int = 64) -> FixtureResult:
    checks = []
    for name in ("L", "M"):
        eq, c0 = EQUATIONS[name]
        f = gen_named(name, 2 * n)
        checks.append(Check(f"{name}: defining sum equals functional-equation solution",
                            f == feq_generate(eq, 2 * n, c0)))
        checks += _nonrational_periodic(f"{name} mod 2", f.change_ring(GF(2)), n)
    return FixtureResult("lm_mod2", "L and M are not rational mod 2", f"n <= {n}", checks)


def periodicity_evidence(fixture: str, horizon: int) -> dict:
    """Hankel-table and level-stream periods at ``horizon`` and twice it."""
    out = {"fixture": fixture, "case": QUADRATIC_FIXTURES[fixture][1], "runs": []}
    for hor in (horizon, 2 * horizon):
        f = quadratic_fixture(fixture, 2 * hor + 2)
        table = find_period(hankel_values(f, hor), f.ring.characteristic)
        h = hfrac_expand(f, max_levels=hor)
        stream = level_stream(h)[1:]
        if len(stream) < 4:
            levels = {"finite_expansion": True, "levels": len(h.levels)}
        else:
            ev = find_period(stream)
            levels = ev.to_json() if ev else None
            if levels:
                levels.pop("pattern")
        out["runs"].append({
            "horizon": hor,
            "table": table.to_json() if table else None,
            "levels": levels,
            "level_count": len(h.levels),
        })
    a, b = out["runs"]
    out["passed"] = (
        a["table"] is not None and b["table"] is not None
        and a["table"]["period"] == b["table"]["period"]
        and a["levels"] is not None and b["levels"] is not None
        and a["levels"].get("period") == b["levels"].get("period")
    )
    return out


def quadratic_periodicity(horizon: int = 200) -> FixtureResult:
    checks = []
    for name in QUADRATIC_FIXTURES:
        ev = periodicity_evidence(name, horizon)
        checks.append(Check(f"{name}: periods stable from horizon {horizon} to {2 * horizon}",
                            ev["passed"], ev))
    return FixtureResult("quadratic_periodicity", "quadratic equations over F_p: ultimately periodic H-fraction and table",
                         f"horizons {horizon} and {2 * horizon}", checks)


FIXTURES: dict[str, tuple[Callable[..., FixtureResult], int]] = {
    "product_hankel_reduction": (product_hankel_reduction, 24),
    "double_sum_mod2": (double_sum_mod2, 64),
    "stern_nonzero_indices": (stern_nonzero_indices, 64),
    "cantor_mod3": (cantor_mod3, 64),
    "quadratic_reduction_mod2": (quadratic_reduction_mod2, 64),
    "ternary_products_mod3": (ternary_products_mod3, 64),
    "lm_mod2": (lm_mod2, 64),
    "mahler_factor_congruences": (mahler_factor_congruences, 40),
    "stern_congruence": (stern_congruence, 64),
    "tmm_hankel": (tmm_hankel, 64),
}


def run_fixture(name: str, n: int | None = None) -> FixtureResult:
    try:
        fn, default = FIXTURES[name]
    except KeyError:
        raise ValueError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None
    return fn(default if n is None else n)
