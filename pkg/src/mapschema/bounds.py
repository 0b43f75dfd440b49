"""Lower bounds on communication cost and reducer count, plus upper-bound annotations.

All arithmetic is exact: rational intermediates are Fractions and integer bounds
are their ceilings, since achieved costs and counts are integers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import DomainError


@dataclass(frozen=True)
class BoundPair:
    cost_bound: int
    reducer_bound: int
    raw_cost: Fraction | None = None
    raw_reducers: Fraction | None = None


def _ceil(x: Fraction) -> int:
    return math.ceil(x)


def _check_capacity(q: int, least: int = 1) -> None:
    if q < least:
        raise DomainError(f"capacity must be at least {least}, got {q}")


def lb_a2a(s: int, q: int) -> BoundPair:
    """Any A2A schema over inputs of total size s costs >= s^2/q and needs >= s^2/q^2 reducers."""
    _check_capacity(q)
    if s < 0:
        raise DomainError("total size must be non-negative")
    cost = Fraction(s * s, q)
    reducers = Fraction(s * s, q * q)
    return BoundPair(_ceil(cost), _ceil(reducers), cost, reducers)


def lb_a2a_binned(s: int, q: int, k: int) -> int:
    """Cost lower bound for schemas that first pack inputs into bins of size q/k.

    Evaluates s * floor((s*k/q - 1) / (k - 1)); negative values (s < q/k) are
    clamped to 0 since a cost is never negative.
    """
    _check_capacity(q)
    if k < 2:
        raise DomainError(f"k must be at least 2, got {k}")
    if q % k:
        raise DomainError(f"k={k} does not divide q={q}")
    per_input = math.floor((Fraction(s * k, q) - 1) / (k - 1))
    return max(0, s * per_input)


def lb_a2a_unit(m: int, q: int) -> BoundPair:
    """Bounds for m unit-size inputs: cost m*floor((m-1)/(q-1)), reducers floor(m/q)*floor((m-1)/(q-1))."""
    if q < 2:
        raise DomainError(f"unit bound needs q >= 2, got {q}")
    if m < 1:
        raise DomainError(f"unit bound needs m >= 1, got {m}")
    rep = (m - 1) // (q - 1)
    cost = m * rep
    reducers = (m // q) * rep
    return BoundPair(cost, reducers, Fraction(cost), Fraction(reducers))


def lb_x2y(sum_x: int, sum_y: int, q: int) -> BoundPair:
    _check_capacity(q)
    if sum_x < 0 or sum_y < 0:
        raise DomainError("sums must be non-negative")
    cost = Fraction(2 * sum_x * sum_y, q)
    reducers = Fraction(2 * sum_x * sum_y, q * q)
    return BoundPair(_ceil(cost), _ceil(reducers), cost, reducers)


# Upper-bound annotations. These are claims about specific constructions, not
# guarantees of this module; the test suite checks generated schemas against them.

def ub_binpack_pairs(s: int, q: int) -> tuple[Fraction, Fraction]:
    """(reducers, cost) claimed for pairing half-capacity bins: 8s^2/q^2 and 4s^2/q."""
    return Fraction(8 * s * s, q * q), Fraction(4 * s * s, q)


def ub_alg1a_cost(s: int, q: int, k: int) -> Fraction:
    """Cost claimed for the odd-k two-step construction."""
    g = math.ceil(Fraction(s * k, q * (k - 1)))
    return Fraction(q, 2 * k) * g * (g - 1)


def ub_alg2(p: int, l: int, q: int) -> tuple[Fraction, Fraction]:
    """(reducers, cost) claimed for the prime-decomposition construction."""
    z_num = 2 * l * l * (p + 1) ** 2
    return p * (p + 1) + Fraction(z_num, q * q), q * p * (p + 1) + Fraction(z_num, q)


def ub_alg3(q: int, l: int) -> tuple[int, int]:
    """(reducers, cost) claimed for the recursive prime-power construction."""
    base = (q * (q + 1)) ** (l - 1)
    return q * base, q * q * base


def ub_big_input(m: int, s: int, q: int) -> tuple[Fraction, Fraction]:
    return m - 1 + Fraction(8 * s * s, q * q), (m - 1) * q + Fraction(4 * s * s, q)


def ub_x2y(sum_x: int, sum_y: int, b: int) -> tuple[Fraction, Fraction]:
    """(reducers, cost) for pairing bins of size b = q/2 from both lists."""
    return Fraction(4 * sum_x * sum_y, b * b), Fraction(4 * sum_x * sum_y, b)
