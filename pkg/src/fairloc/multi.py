"""Two-facility mechanisms and the refusal path for three or more facilities."""

from __future__ import annotations

from .core import Instance, Placement


class UnsupportedFacilityCount(ValueError):
    """No deterministic, anonymous, strategyproof mechanism has a bounded ratio for k >= 3."""

    def __init__(self, k: int):
        self.k = k
        super().__init__(
            f"unsupported: unbounded approximation for k≥3 (requested k={k}); "
            "no deterministic, anonymous, strategyproof mechanism achieves a bounded "
            "approximation ratio for three or more facilities")


def reject_k_ge_3(k: int):
    if k >= 3:
        raise UnsupportedFacilityCount(k)
    raise ValueError(f"k={k} is supported; refusal only applies to k >= 3")


def check_k(k: int) -> int:
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if k >= 3:
        reject_k_ge_3(k)
    return k


def endpoint(inst: Instance) -> Placement:
    """Facilities at the leftmost and rightmost reported locations."""
    return Placement((inst.locations[0], inst.locations[-1]))


def dictatorial(inst: Instance, dictator: int) -> Placement:
    """One facility at the dictator's report, the other at a fixed distance rule.

    With d_l, d_r the distances from the dictator to the leftmost and
    rightmost reports, the second facility goes to x_j - max(d_l, 2 d_r)
    when d_l > d_r and to x_j + max(d_r, 2 d_l) otherwise.
    """
    if not 0 <= dictator < inst.n:
        raise IndexError(f"dictator index {dictator} out of range for n={inst.n}")
    xj = inst.locations[dictator]
    d_l = abs(inst.locations[0] - xj)
    d_r = abs(inst.locations[-1] - xj)
    if d_l > d_r:
        second = xj - max(d_l, 2 * d_r)
    else:
        second = xj + max(d_r, 2 * d_l)
    return Placement((xj, second))
