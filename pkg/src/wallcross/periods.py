"""Classical relative period sequences for the standard examples.

Closed-form factorial-quotient coefficients, exact big integers, and the
change-of-variable relations between them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

SPECS = ("p3_k3", "q4_k3", "x_blowup_k3")


@lru_cache(maxsize=None)
def _fact(n: int) -> int:
    if n < 0:
        raise ValueError("factorial of a negative integer")
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def quartic_coefficient(d: int) -> int:
    """(4d)! / (d!)^4."""
    return _fact(4 * d) // _fact(d) ** 4


def period_coeffs(spec: str, bound: int):
    """Exact coefficients of the named period series.

    p3_k3: the series in t with support t^(4d); returned as the dense list
    of t-coefficients up to t^bound.  q4_k3: coefficients of t^d, d <= bound.
    x_blowup_k3: the 2d array (4 d1)! (d1+d2)! / ((d1!)^5 d2!).
    """
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    if spec == "p3_k3":
        out = [0] * (bound + 1)
        for d in range(0, bound // 4 + 1):
            out[4 * d] = quartic_coefficient(d)
        return out
    if spec == "q4_k3":
        return [quartic_coefficient(d) for d in range(bound + 1)]
    if spec == "x_blowup_k3":
        return [
            [
                _fact(4 * d1) * _fact(d1 + d2) // (_fact(d1) ** 5 * _fact(d2))
                for d2 in range(bound + 1)
            ]
            for d1 in range(bound + 1)
        ]
    raise ValueError(f"unknown period spec {spec!r}; choose from {SPECS}")


@dataclass(frozen=True)
class RelationReport:
    bound: int
    quartic_vs_hyperplane: bool
    blowup_restriction: bool

    @property
    def ok(self) -> bool:
        return self.quartic_vs_hyperplane and self.blowup_restriction


def period_relations(bound: int) -> RelationReport:
    """Check the two change-of-variable identities coefficientwise.

    First: the q4_k3 coefficient at degree d equals the p3_k3 coefficient
    at t^(4d) (substitution t^4 -> t).  Second: the d2 = 0 slice of
    x_blowup_k3, reindexed by y1 = t^4, equals the p3_k3 series.
    """
    q4 = period_coeffs("q4_k3", bound)
    p3 = period_coeffs("p3_k3", 4 * bound)
    first = all(q4[d] == p3[4 * d] for d in range(bound + 1))
    blow = period_coeffs("x_blowup_k3", bound)
    second = all(blow[d1][0] == p3[4 * d1] for d1 in range(bound + 1))
    return RelationReport(bound, first, second)
