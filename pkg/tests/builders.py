"""Series with a prescribed H-fraction, used to plant Hankel-zero gaps."""

import random

from mahlerexp.exactcore import QQ, Polynomial, TruncatedSeries
from mahlerexp.hfrac import HFraction, Level, hfrac_evaluate


def random_unit_series(rng: random.Random, order: int, ring=QQ) -> TruncatedSeries:
    return TruncatedSeries([rng.choice([-2, -1, 1, 2])] + [rng.randint(-3, 3) for _ in range(order - 1)], ring)


def planted_fraction(rng: random.Random, ks, ring=QQ, tail_order: int = 8) -> HFraction:
    """An H-fraction with levels of valuation ks[j] and a random unit tail."""
    levels = []
    for j, k in enumerate(ks):
        v = rng.choice([-1, 1, 2, -3])
        u = None
        if j:
            width = ks[j - 1] + 1  # deg u_j <= k_{j-1}
            u = Polynomial([rng.randint(-2, 2) for _ in range(width)], ring)
        levels.append(Level(ring.normalize(v), k, u))
    next_u = Polynomial([rng.randint(-2, 2) for _ in range(ks[-1] + 1)], ring)
    tail = random_unit_series(rng, tail_order, ring)
    return HFraction(2, ring, levels, False, next_u, tail)


def planted_series(rng: random.Random, ks, ring=QQ, tail_order: int = 8):
    h = planted_fraction(rng, ks, ring, tail_order)
    return h, hfrac_evaluate(h, int(h.provable_order()))
