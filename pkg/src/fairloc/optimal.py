"""Optimal placements for the maximum group effect, plus brute-force grid oracles.

k=1 is solved exactly by candidate enumeration over the breakpoints of the
convex piecewise-linear objective. k=2 enumerates contiguous splits of the
sorted agents; under a forced split WMGC decouples into two weighted
1-center problems, and WTGC is a 2-D convex piecewise-linear problem whose
minimum sits on a vertex of the cell arrangement, which is enumerated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .core import Instance, Objective, Placement, mge_value
from .multi import check_k

GOLDEN = (math.sqrt(5) - 1) / 2


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    location_tol: float = 1e-9
    value_tol: Optional[float] = None  # None: 1e-9 * instance diameter, floored at 1e-12
    grid_points: int = 2001
    cross_check: bool = False
    cross_check_points: int = 201  # per axis, used for the k=2 cross-check

    def __post_init__(self):
        if self.location_tol <= 0 or (self.value_tol is not None and self.value_tol <= 0):
            raise ValueError("tolerances must be positive")
        if self.grid_points < 3 or self.cross_check_points < 3:
            raise ValueError("grid_points must be at least 3")

    def tol_for(self, inst: Instance) -> float:
        if self.value_tol is not None:
            return self.value_tol
        return max(1e-9 * inst.span, 1e-12)


DEFAULT_CONFIG = SolverConfig()


@dataclass(frozen=True)
class OptResult:
    placement: Placement
    value: float
    method: str  # candidate-exact | split-exact | nested-search | grid | closed-form
    error_bound: float = 0.0


def _tie(v: float, best: float) -> bool:
    return v <= best + 1e-12 * max(1.0, abs(best))


def _pick(cands):
    """Minimum value; within tie tolerance the lexicographically smallest key wins."""
    best = min(c[0] for c in cands)
    return min((c for c in cands if _tie(c[0], best)), key=lambda c: c[1:])


# ---------------------------------------------------------------- closed forms

def two_agent_opt_wmgc(x1: float, x2: float, w1: float, w2: float, same_group: bool) -> OptResult:
    """Single-facility WMGC optimum for two agents with maximum weights w1, w2."""
    if x1 > x2:
        raise ValueError(f"expected x1 <= x2, got {x1} > {x2}")
    if w1 <= 0 or w2 <= 0:
        raise ValueError("weights must be positive")
    if same_group:
        y = (x1 + x2) / 2
        value = w1 * (x2 - x1) / 2
    else:
        y = (w2 * x2 + w1 * x1) / (w1 + w2)
        value = w1 * w2 * (x2 - x1) / (w1 + w2)
    return OptResult(Placement((y,)), value, "closed-form")


# ---------------------------------------------------------- 1-D building blocks

def _wmgc_1d(xs: Sequence[float], ws: Sequence[float]):
    """Weighted 1-center: min_y max_i ws[i] * |y - xs[i]| for sorted xs."""
    if xs[0] == xs[-1]:
        return xs[0], 0.0
    cands = set(xs)
    for a, b in combinations(range(len(xs)), 2):
        xa, xb = xs[a], xs[b]
        if xa < xb:
            y = (ws[a] * xa + ws[b] * xb) / (ws[a] + ws[b])
            cands.add(min(max(y, xa), xb))
    scored = [(max(w * abs(y - x) for x, w in zip(xs, ws)), y) for y in cands]
    v, y = _pick(scored)
    return y, v


def _affine_pieces(points, weights, m, lo, hi):
    """Affine forms (intercept, slope) of every group effect on [lo, hi].

    ``points`` are (x, groups) pairs with no x strictly inside (lo, hi).
    """
    a = [0.0] * m
    b = [0.0] * m
    for x, groups in points:
        if x <= lo:
            da, db = -x, 1.0
        else:
            da, db = x, -1.0
        for j in groups:
            a[j] += da
            b[j] += db
    return [(weights[j] * a[j], weights[j] * b[j]) for j in range(m)]


def _intersections(pieces, lo, hi):
    out = []
    for (ca, sa), (cb, sb) in combinations(pieces, 2):
        if sa != sb:
            y = (cb - ca) / (sa - sb)
            if lo <= y <= hi:
                out.append(y)
    return out


def _intervals(values):
    if len(values) == 1:
        return [(values[0], values[0])]
    return list(zip(values[:-1], values[1:]))


def _wtgc_candidates(points, weights, m):
    locs = sorted({x for x, _ in points})
    cands = set(locs)
    for lo, hi in _intervals(locs):
        if lo < hi:
            cands.update(_intersections(_affine_pieces(points, weights, m, lo, hi), lo, hi))
    return sorted(cands)


def _wtgc_eval(points, weights, m, y):
    tot = [0.0] * m
    for x, groups in points:
        d = abs(y - x)
        for j in groups:
            tot[j] += d
    return max(weights[j] * tot[j] for j in range(m))


def _wtgc_1d(points, weights, m):
    """min_y max_j w_j * sum_{i in G_j} |y - x_i| over the given (x, groups) points."""
    scored = [(_wtgc_eval(points, weights, m, y), y) for y in _wtgc_candidates(points, weights, m)]
    v, y = _pick(scored)
    return y, v


# ------------------------------------------------------------------- k = 1

def opt_single(inst: Instance, obj: Objective, cfg: SolverConfig = DEFAULT_CONFIG) -> OptResult:
    obj = Objective.parse(obj)
    if inst.span == 0:
        return OptResult(Placement((inst.locations[0],)), 0.0, "candidate-exact")
    if obj is Objective.WMGC:
        y, _ = _wmgc_1d(inst.locations, inst.agent_weights)
    else:
        pts = [(a.location, a.groups) for a in inst.agents]
        y, _ = _wtgc_1d(pts, inst.weights, inst.m)
    res = OptResult(Placement((y,)), mge_value(inst, y, obj), "candidate-exact")
    if cfg.cross_check:
        _cross_check(res, grid_oracle_single(inst, obj, cfg.grid_points), cfg.tol_for(inst))
    return res


def single_candidates(inst: Instance, obj: Objective) -> list:
    """The candidate set :func:`opt_single` searches, sorted ascending."""
    obj = Objective.parse(obj)
    if obj is Objective.WTGC:
        return _wtgc_candidates([(a.location, a.groups) for a in inst.agents], inst.weights, inst.m)
    xs, ws = inst.locations, inst.agent_weights
    cands = set(xs)
    for a, b in combinations(range(inst.n), 2):
        if xs[a] < xs[b]:
            cands.add((ws[a] * xs[a] + ws[b] * xs[b]) / (ws[a] + ws[b]))
    return sorted(cands)


# ------------------------------------------------------------------- k = 2

def _cell_coeffs(left, right, weights, m, a0, b0):
    """Per-group (alpha, beta, gamma) with effect = alpha + beta*y1 + gamma*y2 on a cell."""
    al = [0.0] * m
    be = [0.0] * m
    ga = [0.0] * m
    for x, groups in left:
        da, db = (-x, 1.0) if x <= a0 else (x, -1.0)
        for j in groups:
            al[j] += da
            be[j] += db
    for x, groups in right:
        da, dg = (-x, 1.0) if x <= b0 else (x, -1.0)
        for j in groups:
            al[j] += da
            ga[j] += dg
    return [(weights[j] * al[j], weights[j] * be[j], weights[j] * ga[j]) for j in range(m)]


def _cell_vertices(coef, a0, a1, b0, b1):
    """Every vertex of the max-of-affine epigraph restricted to the box [a0,a1] x [b0,b1]."""
    pts = [(a0, b0), (a0, b1), (a1, b0), (a1, b1)]
    pairs = list(combinations(coef, 2))
    for (pa, pb, pc), (qa, qb, qc) in pairs:
        # edges with y1 fixed
        if pc != qc:
            for y1 in {a0, a1}:
                y2 = (qa + qb * y1 - pa - pb * y1) / (pc - qc)
                if b0 <= y2 <= b1:
                    pts.append((y1, y2))
        # edges with y2 fixed
        if pb != qb:
            for y2 in {b0, b1}:
                y1 = (qa + qc * y2 - pa - pc * y2) / (pb - qb)
                if a0 <= y1 <= a1:
                    pts.append((y1, y2))
    if a0 < a1 and b0 < b1:
        for (pa, pb, pc), (qa, qb, qc), (ra, rb, rc) in combinations(coef, 3):
            # p = q and p = r
            m11, m12, r1 = pb - qb, pc - qc, qa - pa
            m21, m22, r2 = pb - rb, pc - rc, ra - pa
            det = m11 * m22 - m12 * m21
            if det == 0:
                continue
            y1 = (r1 * m22 - m12 * r2) / det
            y2 = (m11 * r2 - r1 * m21) / det
            if a0 <= y1 <= a1 and b0 <= y2 <= b1:
                pts.append((y1, y2))
    return pts


def _split_wtgc_exact(left, right, weights, m):
    p_locs = sorted({x for x, _ in left})
    q_locs = sorted({x for x, _ in right})
    cands = []
    for a0, a1 in _intervals(p_locs):
        for b0, b1 in _intervals(q_locs):
            coef = _cell_coeffs(left, right, weights, m, a0, b0)
            for y1, y2 in _cell_vertices(coef, a0, a1, b0, b1):
                v = max(al + be * y1 + ga * y2 for al, be, ga in coef)
                cands.append((v, y1, y2))
    return _pick(cands)


def _forced_wtgc(left, right, weights, m, y1, y2):
    tot = [0.0] * m
    for x, groups in left:
        d = abs(y1 - x)
        for j in groups:
            tot[j] += d
    for x, groups in right:
        d = abs(y2 - x)
        for j in groups:
            tot[j] += d
    return max(weights[j] * tot[j] for j in range(m))


def _golden(f, lo, hi, tol):
    """Minimize a unimodal f on [lo, hi]; returns (x, f(x))."""
    if hi - lo <= tol:
        return lo, f(lo)
    c = hi - GOLDEN * (hi - lo)
    d = lo + GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + GOLDEN * (hi - lo)
            fd = f(d)
    best = min([(f(lo), lo), (fc, c), (fd, d), (f(hi), hi)])
    return best[1], best[0]


def _split_wtgc_nested(left, right, weights, m, tol):
    p0, p1 = left[0][0], left[-1][0]
    q0, q1 = right[0][0], right[-1][0]

    def inner(y1):
        return _golden(lambda y2: _forced_wtgc(left, right, weights, m, y1, y2), q0, q1, tol)

    y1, _ = _golden(lambda y: inner(y)[1], p0, p1, tol)
    y2, v = inner(y1)
    cands = [(v, y1, y2)]
    # polish on the product of the one-sided candidate sets
    for c1 in _wtgc_candidates(left, weights, m):
        for c2 in _wtgc_candidates(right, weights, m):
            cands.append((_forced_wtgc(left, right, weights, m, c1, c2), c1, c2))
    return _pick(cands)


def opt_two(inst: Instance, obj: Objective, cfg: SolverConfig = DEFAULT_CONFIG,
            method: str = "exact") -> OptResult:
    """Two-facility optimum by enumerating contiguous splits of the sorted agents.

    ``method="nested"`` swaps the WTGC vertex enumeration for nested golden
    section search polished on candidate pairs; it exists as a cross-check.
    """
    obj = Objective.parse(obj)
    if method not in ("exact", "nested"):
        raise ValueError(f"unknown method {method!r}")
    if inst.span == 0:
        x = inst.locations[0]
        return OptResult(Placement((x, x)), 0.0, "split-exact")
    n = inst.n
    pts = [(a.location, a.groups) for a in inst.agents]
    xs, ws = inst.locations, inst.agent_weights
    cands = []
    for s in range(n + 1):
        if obj is Objective.WMGC:
            if s == 0 or s == n:
                y, v = _wmgc_1d(xs, ws)
                y1 = y2 = y
            else:
                y1, v1 = _wmgc_1d(xs[:s], ws[:s])
                y2, v2 = _wmgc_1d(xs[s:], ws[s:])
                v = max(v1, v2)
        else:
            if s == 0 or s == n:
                y, v = _wtgc_1d(pts, inst.weights, inst.m)
                y1 = y2 = y
            elif method == "exact":
                v, y1, y2 = _split_wtgc_exact(pts[:s], pts[s:], inst.weights, inst.m)
            else:
                v, y1, y2 = _split_wtgc_nested(pts[:s], pts[s:], inst.weights, inst.m,
                                               cfg.location_tol)
        cands.append((v, s, y1, y2))
    _, _, y1, y2 = _pick(cands)
    tag = "nested-search" if (method == "nested" and obj is Objective.WTGC) else "split-exact"
    placement = Placement((y1, y2))
    res = OptResult(placement, mge_value(inst, placement, obj), tag)
    if cfg.cross_check:
        _cross_check(res, grid_oracle_two(inst, obj, cfg.cross_check_points), cfg.tol_for(inst))
    return res


def solve(inst: Instance, obj: Objective, k: int, cfg: SolverConfig = DEFAULT_CONFIG) -> OptResult:
    check_k(k)
    obj = Objective.parse(obj)
    return _solve_cached(inst, obj, k, cfg)


@lru_cache(maxsize=1 << 17)
def _solve_cached(inst, obj, k, cfg):
    return opt_single(inst, obj, cfg) if k == 1 else opt_two(inst, obj, cfg)


def _cross_check(res: OptResult, oracle: OptResult, tol: float):
    if res.value > oracle.value + tol:
        raise SolverError(
            f"{res.method} value {res.value!r} exceeds grid oracle {oracle.value!r} by more than {tol}")


# --------------------------------------------------------------- grid oracles

def grid_error_bound(inst: Instance, obj: Objective, grid_points: int) -> float:
    """Upper bound on (grid value - optimum) for a uniform grid over [x_1, x_n].

    Each facility is within half a step of a grid point; a group's effect
    moves by at most w_max per unit for WMGC and w_max * |G_j| for WTGC.
    """
    obj = Objective.parse(obj)
    step = inst.span / (grid_points - 1)
    lip = inst.w_max * (1 if obj is Objective.WMGC else max(len(g) for g in inst.members))
    return step * lip


def _grid(inst: Instance, grid_points: int) -> np.ndarray:
    xs = np.asarray(inst.locations, dtype=float)
    return np.unique(np.concatenate([np.linspace(xs[0], xs[-1], grid_points), xs]))


def _membership(inst: Instance) -> np.ndarray:
    mem = np.zeros((inst.n, inst.m), dtype=bool)
    for i, a in enumerate(inst.agents):
        mem[i, list(a.groups)] = True
    return mem


def _effects_from_costs(costs: np.ndarray, inst: Instance, obj: Objective) -> np.ndarray:
    """costs: (..., n) agent costs -> (...,) maximum group effect."""
    w = np.asarray(inst.weights, dtype=float)
    if obj is Objective.WTGC:
        return ((costs @ _membership(inst).astype(float)) * w).max(axis=-1)
    out = None
    for j, members in enumerate(inst.members):
        e = costs[..., list(members)].max(axis=-1) * w[j]
        out = e if out is None else np.maximum(out, e)
    return out


def grid_oracle_single(inst: Instance, obj: Objective, grid_points: int = 2001) -> OptResult:
    if grid_points < 3:
        raise ValueError("grid_points must be at least 3")
    obj = Objective.parse(obj)
    ys = _grid(inst, grid_points)
    xs = np.asarray(inst.locations, dtype=float)
    f = _effects_from_costs(np.abs(ys[:, None] - xs[None, :]), inst, obj)
    i = int(np.argmin(f))
    return OptResult(Placement((float(ys[i]),)), float(f[i]), "grid",
                     grid_error_bound(inst, obj, grid_points))


def grid_oracle_two(inst: Instance, obj: Objective, grid_points: int = 201,
                    chunk: int = 64) -> OptResult:
    if grid_points < 3:
        raise ValueError("grid_points must be at least 3")
    obj = Objective.parse(obj)
    ys = _grid(inst, grid_points)
    xs = np.asarray(inst.locations, dtype=float)
    dist = np.abs(ys[:, None] - xs[None, :])
    g = len(ys)
    cols = np.arange(g)
    best_v, best_ij = math.inf, (0, 0)
    for start in range(0, g, chunk):
        rows = np.arange(start, min(start + chunk, g))
        costs = np.minimum(dist[rows][:, None, :], dist[None, :, :])
        f = _effects_from_costs(costs, inst, obj)
        f[cols[None, :] < rows[:, None]] = np.inf
        flat = int(np.argmin(f))
        v = float(f.flat[flat])
        if v < best_v:
            best_v = v
            best_ij = (int(rows[flat // g]), flat % g)
    placement = Placement((float(ys[best_ij[0]]), float(ys[best_ij[1]])))
    return OptResult(placement, best_v, "grid", grid_error_bound(inst, obj, grid_points))
