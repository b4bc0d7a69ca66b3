"""Strategyproofness certification and approximation-ratio measurement.

Strategyproofness is certified by exhaustive enumeration of a finite
universe of profiles and misreports; a clean result speaks for that universe
only. Ratios are measured against the exact solvers in :mod:`fairloc.optimal`.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Iterator, Optional, Sequence

from . import generators as gen
from .core import Instance, Objective, Placement, cost, mge_value
from .mechanisms import MechanismSpec
from .optimal import DEFAULT_CONFIG, SolverConfig, solve

SP_MARGIN = 1e-12
BOUND_SLACK = 1e-9


class BudgetExceeded(RuntimeError):
    def __init__(self, count: int, budget: int):
        self.count = count
        self.budget = budget
        super().__init__(f"universe has up to {count} instances, over the budget of {budget}")


def _spec(mech) -> MechanismSpec:
    return mech if isinstance(mech, MechanismSpec) else MechanismSpec.parse(mech)


# ------------------------------------------------------------ strategyproofness

@dataclass(frozen=True)
class SpViolation:
    instance: Instance
    mechanism: str
    agent: int
    true_x: float
    misreport_x: float
    cost_truthful: float
    cost_misreport: float


def sp_check_instance(mech, inst: Instance, misreport_grid: Iterable[float]) -> list:
    """Every unilateral location misreport that strictly lowers the misreporter's cost.

    Misreports range over ``misreport_grid`` plus all reported locations;
    group memberships stay fixed.
    """
    mech = _spec(mech)
    if not mech.applicable(inst):
        raise ValueError(f"mechanism {mech} does not apply to this instance")
    truthful = mech.apply(inst)
    reports = sorted(set(float(v) for v in misreport_grid) | set(inst.locations))
    found = []
    for i, x in enumerate(inst.locations):
        c_true = cost(truthful, x)
        if c_true == 0:
            continue
        for xr in reports:
            if xr == x:
                continue
            dev, index_map = inst.with_location(i, xr)
            c_dev = cost(mech.follow(index_map).apply(dev), x)
            if c_dev < c_true - SP_MARGIN:
                found.append(SpViolation(inst, str(mech), i, x, xr, c_true, c_dev))
    return found


def _weights_for(m: int, weight_sets: Sequence[Sequence[float]]) -> list:
    exact = [tuple(w) for w in weight_sets if len(w) == m]
    if exact:
        return list(dict.fromkeys(exact))
    prefixes = [tuple(w[:m]) for w in weight_sets if len(w) > m]
    if not prefixes:
        raise ValueError(f"no weight set covers m={m}")
    return list(dict.fromkeys(prefixes))


def _subsets(m: int) -> list:
    return [s for r in range(1, m + 1) for s in combinations(range(m), r)]


def universe_size(n_max: int, m_max: int, loc_grid: Sequence[float],
                  weight_sets: Sequence[Sequence[float]]) -> int:
    """Instance count before discarding profiles that leave a group empty."""
    total = 0
    for m in range(1, m_max + 1):
        types = len(set(loc_grid)) * (2 ** m - 1)
        for n in range(1, n_max + 1):
            total += math.comb(types + n - 1, n) * len(_weights_for(m, weight_sets))
    return total


def enumerate_universe(n_max: int, m_max: int, loc_grid: Sequence[float],
                       weight_sets: Sequence[Sequence[float]]) -> Iterator[Instance]:
    """All profiles up to agent reordering, with every group nonempty."""
    grid = sorted(set(float(v) for v in loc_grid))
    for m in range(1, m_max + 1):
        types = [(x, s) for x in grid for s in _subsets(m)]
        wts = _weights_for(m, weight_sets)
        for n in range(1, n_max + 1):
            for combo in combinations_with_replacement(types, n):
                covered = set().union(*(s for _, s in combo))
                if len(covered) < m:
                    continue
                xs = [x for x, _ in combo]
                gs = [list(s) for _, s in combo]
                for w in wts:
                    yield Instance.build(xs, gs, w)


def sp_exhaustive(mech, n_max: int, m_max: int, loc_grid: Sequence[float],
                  weight_sets: Sequence[Sequence[float]], budget: int = 2_000_000) -> list:
    """Run :func:`sp_check_instance` over the whole finite universe.

    Instances the mechanism cannot run on (a dictator index beyond n, an
    explicit phantom list of the wrong length) are skipped.
    """
    mech = _spec(mech)
    size = universe_size(n_max, m_max, loc_grid, weight_sets)
    if size > budget:
        raise BudgetExceeded(size, budget)
    found = []
    for inst in enumerate_universe(n_max, m_max, loc_grid, weight_sets):
        if mech.applicable(inst):
            found.extend(sp_check_instance(mech, inst, loc_grid))
    return found


# ------------------------------------------------------------------- ratios

@dataclass(frozen=True)
class RatioResult:
    instance: Instance
    mechanism: str
    objective: Objective
    mechanism_value: float
    optimal_value: float
    mechanism_placement: Placement
    optimal_placement: Placement
    ratio: float


def ratio_of(mech_value: float, opt_value: float) -> float:
    if opt_value > 0:
        return mech_value / opt_value
    return math.inf if mech_value > 0 else 1.0


def ratio(mech, inst: Instance, obj: Objective, cfg: SolverConfig = DEFAULT_CONFIG) -> RatioResult:
    mech = _spec(mech)
    obj = Objective.parse(obj)
    placement = mech.apply(inst)
    mv = mge_value(inst, placement, obj)
    opt = solve(inst, obj, mech.k, cfg)
    return RatioResult(inst, str(mech), obj, mv, opt.value, placement, opt.placement,
                       ratio_of(mv, opt.value))


BOUND_FORMULAS = {
    ("balanced", Objective.WTGC): "2",
    ("major-phantom", Objective.WMGC): "2",
    ("endpoint", Objective.WTGC): "1+(n-2)*w_max/w_min",
    ("endpoint", Objective.WMGC): "1+w_max/w_min",
    ("med", Objective.WTGC): "1+(m-1)*w_max/w_min",
    ("leftmost", Objective.WTGC): "1+(n-1)*w_max/w_min",
    ("major", Objective.WTGC): "1+2*w_max/w_min",
    ("med", Objective.WMGC): "1+w_max/w_min",
    ("leftmost", Objective.WMGC): "1+w_max/w_min",
    ("major", Objective.WMGC): "1+w_max/w_min",
}


def ratio_bound(mech, obj: Objective, n: int, m: int, w_max: float, w_min: float) -> Optional[float]:
    """Proven worst-case ratio for the pair, or None when no bound is known."""
    name = _spec(mech).name
    r = w_max / w_min
    key = (name, Objective.parse(obj))
    if key not in BOUND_FORMULAS:
        return None
    if key[0] in ("balanced", "major-phantom"):
        return 2.0
    if key == ("endpoint", Objective.WTGC):
        # with one agent the mechanism is optimal; the formula assumes n >= 2
        return 1 + max(n - 2, 0) * r
    if key == ("med", Objective.WTGC):
        return 1 + (m - 1) * r
    if key == ("leftmost", Objective.WTGC):
        return 1 + (n - 1) * r
    if key == ("major", Objective.WTGC):
        return 1 + 2 * r
    return 1 + r


def instance_bound(mech, obj: Objective, inst: Instance) -> Optional[float]:
    return ratio_bound(mech, obj, inst.n, inst.m, inst.w_max, inst.w_min)


# ------------------------------------------------------------------- search

@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    trials: int = 1000
    n_min: int = 1
    n_max: int = 6
    m_min: int = 1
    m_max: int = 3
    location_grid: Optional[tuple] = tuple(i / 20 for i in range(21))
    location_range: tuple = (0.0, 1.0)  # used when location_grid is None
    weight_choices: tuple = (1.0, 2.0, 5.0)
    inject_tight: bool = True

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not 1 <= self.n_min <= self.n_max or not 1 <= self.m_min <= self.m_max:
            raise ValueError("n and m ranges must be nonempty and start at 1 or above")
        if self.location_grid is not None and len(self.location_grid) == 0:
            raise ValueError("location grid is empty")
        if not self.weight_choices or min(self.weight_choices) <= 0:
            raise ValueError("weight choices must be positive and nonempty")
        lo, hi = self.location_range
        if not lo <= hi:
            raise ValueError("location range is empty")


def random_instance(rng: random.Random, search: SearchConfig) -> Instance:
    n = rng.randint(search.n_min, search.n_max)
    m = rng.randint(search.m_min, search.m_max)
    if search.location_grid is not None:
        xs = [rng.choice(search.location_grid) for _ in range(n)]
    else:
        lo, hi = search.location_range
        xs = [rng.uniform(lo, hi) for _ in range(n)]
    if rng.random() < 0.5:
        groups = [{rng.randrange(m)} for _ in range(n)]
    else:
        groups = [{j for j in range(m) if rng.random() < 0.4} or {rng.randrange(m)}
                  for _ in range(n)]
    for j in range(m):
        if not any(j in g for g in groups):
            groups[rng.randrange(n)].add(j)
    ws = [rng.choice(search.weight_choices) for _ in range(m)]
    return Instance.build(xs, [sorted(g) for g in groups], ws)


def tight_instances(search: SearchConfig) -> list:
    """Every tight-family instance whose n and m fall inside the search ranges."""
    wc = sorted(set(float(w) for w in search.weight_choices))
    pairs = [(a, b) for a in wc for b in wc if a <= b]
    out = []
    for a, b in pairs:
        out.append(gen.tight_two_point(a, b))
        out.append(gen.tight_major_wtgc(a, b))
        for n in range(2, search.n_max + 1):
            out.append(gen.tight_leftmost_wtgc(n, a, b))
            if n >= 3:
                out.append(gen.tight_endpoint_wtgc(n, a, b))
                out.append(gen.tight_endpoint_wmgc(n, a, b))
        for m in range(2, search.m_max + 1):
            out.append(gen.tight_med_wtgc(m, a, b))
    keep = [i for i in out
            if search.n_min <= i.n <= search.n_max and search.m_min <= i.m <= search.m_max]
    return list(dict.fromkeys(keep))


def search_instances(search: SearchConfig) -> Iterator[Instance]:
    if search.inject_tight:
        yield from tight_instances(search)
    rng = random.Random(search.seed)
    for _ in range(search.trials):
        yield random_instance(rng, search)


@dataclass
class SearchReport:
    mechanism: str
    objective: Objective
    worst: RatioResult
    evaluated: int
    exceeded: list = field(default_factory=list)
    has_bound: bool = False


def search_report(mech, obj: Objective, search: SearchConfig,
                  cfg: SolverConfig = DEFAULT_CONFIG) -> SearchReport:
    """Largest ratio over the seeded sample, plus every instance breaking the proven bound."""
    mech = _spec(mech)
    obj = Objective.parse(obj)
    worst = None
    exceeded = []
    count = 0
    has_bound = (mech.name, obj) in BOUND_FORMULAS
    for inst in search_instances(search):
        if not mech.applicable(inst):
            continue
        res = ratio(mech, inst, obj, cfg)
        count += 1
        if worst is None or res.ratio > worst.ratio:
            worst = res
        bound = instance_bound(mech, obj, inst)
        if bound is not None and not res.ratio <= bound + BOUND_SLACK:
            exceeded.append(res)
    if worst is None:
        raise ValueError(f"mechanism {mech} applies to none of the sampled instances")
    return SearchReport(str(mech), obj, worst, count, exceeded, has_bound)


def worst_case_search(mech, obj: Objective, search: SearchConfig,
                      cfg: SolverConfig = DEFAULT_CONFIG) -> RatioResult:
    return search_report(mech, obj, search, cfg).worst
