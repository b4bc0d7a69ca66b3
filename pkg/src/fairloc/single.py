"""Deterministic single-facility mechanisms.

Every function maps a canonical :class:`~fairloc.core.Instance` to one
facility location. Mechanism logic compares counts, weights and reported
coordinates exactly; no tolerances are involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .core import Instance


@dataclass(frozen=True)
class PhantomConfig:
    """Constant phantom points for :func:`major_phantom`.

    The values must never be derived from the reported profile.
    """

    values: tuple = ()

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("phantom values must be finite")
        object.__setattr__(self, "values", tuple(sorted(vals)))

    @classmethod
    def zeros(cls, count: int) -> "PhantomConfig":
        return cls((0.0,) * count)


def counts(inst: Instance, y: float) -> tuple:
    """Per-group counts of members at or left of ``y`` (L) and strictly right of it (R)."""
    left = [0] * inst.m
    right = [0] * inst.m
    for a in inst.agents:
        side = left if a.location <= y else right
        for j in a.groups:
            side[j] += 1
    return left, right


def balanced(inst: Instance) -> float:
    """Smallest agent location where max_j w_j L_j(y) >= max_j w_j R_j(y).

    Both sides only change at agent locations, so scanning the sorted
    locations left to right finds the minimum over the whole line.
    """
    w = inst.weights
    left = [0] * inst.m
    right = [len(g) for g in inst.members]
    agents = inst.agents
    i = 0
    while i < inst.n:
        y = agents[i].location
        # absorb every agent sitting at y before testing the condition
        while i < inst.n and agents[i].location == y:
            for j in agents[i].groups:
                left[j] += 1
                right[j] -= 1
            i += 1
        lhs = max(wj * lj for wj, lj in zip(w, left))
        rhs = max(wj * rj for wj, rj in zip(w, right))
        if lhs >= rhs:
            return y
    # unreachable: at y = x_n every R_j is zero
    return agents[-1].location


def heaviest_group(inst: Instance) -> int:
    """Index of the maximum-weight group, smallest id on ties."""
    best = 0
    for j in range(1, inst.m):
        if inst.weights[j] > inst.weights[best]:
            best = j
    return best


def largest_group(inst: Instance) -> int:
    """Index of the group with the most members, smallest id on ties."""
    best = 0
    for j in range(1, inst.m):
        if len(inst.members[j]) > len(inst.members[best]):
            best = j
    return best


def major_phantom(inst: Instance, phantoms: PhantomConfig | Sequence[float] | None = None) -> float:
    """Median of the heaviest group's locations together with |G_max| - 1 constant phantoms.

    ``phantoms=None`` places every phantom at 0.
    """
    g = heaviest_group(inst)
    locs = [inst.agents[i].location for i in inst.members[g]]
    need = len(locs) - 1
    if phantoms is None:
        phantoms = PhantomConfig.zeros(need)
    elif not isinstance(phantoms, PhantomConfig):
        phantoms = PhantomConfig(tuple(phantoms))
    if len(phantoms.values) != need:
        raise ValueError(
            f"major-phantom needs {need} phantom(s) for a heaviest group of size {len(locs)}, "
            f"got {len(phantoms.values)}")
    pool = sorted(locs + list(phantoms.values))
    return pool[need]


def med(inst: Instance) -> float:
    """The ceil(n/2)-th smallest location (left median for even n)."""
    return inst.locations[(inst.n - 1) // 2]


def leftmost(inst: Instance) -> float:
    return inst.locations[0]


def major(inst: Instance) -> float:
    """Left median of the largest group's member locations."""
    g = largest_group(inst)
    locs = [inst.agents[i].location for i in inst.members[g]]
    return locs[(len(locs) - 1) // 2]
