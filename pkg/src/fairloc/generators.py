"""Worst-case instance families on which each mechanism's ratio bound is attained."""

from __future__ import annotations

from .core import Instance


def _need(cond: bool, msg: str):
    if not cond:
        raise ValueError(msg)


def _weights_ok(w_min: float, w_max: float):
    _need(0 < w_min <= w_max, f"need 0 < w_min <= w_max, got {w_min}, {w_max}")


def tight_endpoint_wtgc(n: int, w_min: float, w_max: float) -> Instance:
    """Light agent at 0; n-2 heavy agents at 1/2 and one heavy agent at 1."""
    _need(n >= 3, "tight_endpoint_wtgc needs n >= 3")
    _weights_ok(w_min, w_max)
    xs = [0.0] + [0.5] * (n - 2) + [1.0]
    groups = [[0]] + [[1]] * (n - 1)
    return Instance.build(xs, groups, [w_min, w_max])


def tight_endpoint_wmgc(n: int, w_min: float, w_max: float) -> Instance:
    """n-2 light agents at 0, heavy agents at 1/2 and 1.

    Every agent stacked at 0 stays in the light group: a heavy agent there
    would pin the left facility and the ratio collapses to 2.
    """
    _need(n >= 3, "tight_endpoint_wmgc needs n >= 3")
    _weights_ok(w_min, w_max)
    xs = [0.0] * (n - 2) + [0.5, 1.0]
    groups = [[0]] * (n - 2) + [[1], [1]]
    return Instance.build(xs, groups, [w_min, w_max])


def tight_med_wtgc(m: int, w_min: float, w_max: float) -> Instance:
    """m-1 singleton light groups at 0 and m-1 members of one heavy group at 1."""
    _need(m >= 2, "tight_med_wtgc needs m >= 2")
    _weights_ok(w_min, w_max)
    xs = [0.0] * (m - 1) + [1.0] * (m - 1)
    groups = [[j] for j in range(1, m)] + [[0]] * (m - 1)
    return Instance.build(xs, groups, [w_max] + [w_min] * (m - 1))


def tight_leftmost_wtgc(n: int, w_min: float, w_max: float) -> Instance:
    """One light agent at 0, n-1 heavy agents at 1."""
    _need(n >= 2, "tight_leftmost_wtgc needs n >= 2")
    _weights_ok(w_min, w_max)
    xs = [0.0] + [1.0] * (n - 1)
    groups = [[0]] + [[1]] * (n - 1)
    return Instance.build(xs, groups, [w_min, w_max])


def tight_major_wtgc(w_min: float, w_max: float) -> Instance:
    """Light group {0, 2w/(2w+w')} ties in size with the heavy pair at 1, so MAJOR picks it."""
    _weights_ok(w_min, w_max)
    mid = 2 * w_max / (2 * w_max + w_min)
    return Instance.build([0.0, mid, 1.0, 1.0], [[0], [0], [1], [1]], [w_min, w_max])


def tight_two_point(w_min: float, w_max: float) -> Instance:
    """A light agent at 0 and a heavy agent at 1.

    With w_min == w_max this is the two-agent maximum-cost instance on which
    any deterministic strategyproof single-facility mechanism is off by 2.
    """
    _weights_ok(w_min, w_max)
    return Instance.build([0.0, 1.0], [[0], [1]], [w_min, w_max])


def tight_dictatorial_wtgc(n: int, w_min: float, w_max: float) -> Instance:
    """Dictator alone at 0 in the light group; n-2 heavy agents at 1/2 and one at 1.

    The dictator is agent 0 of the returned (location-sorted) instance.
    """
    _need(n >= 5, "tight_dictatorial_wtgc needs n >= 5")
    return tight_endpoint_wtgc(n, w_min, w_max)


TIGHT_DICTATOR = 0

FAMILIES = {
    "endpoint-wtgc": (tight_endpoint_wtgc, ("n", "w_min", "w_max")),
    "endpoint-wmgc": (tight_endpoint_wmgc, ("n", "w_min", "w_max")),
    "med": (tight_med_wtgc, ("m", "w_min", "w_max")),
    "leftmost": (tight_leftmost_wtgc, ("n", "w_min", "w_max")),
    "major": (tight_major_wtgc, ("w_min", "w_max")),
    "two-point": (tight_two_point, ("w_min", "w_max")),
    "dictatorial": (tight_dictatorial_wtgc, ("n", "w_min", "w_max")),
}


def generate(family: str, **params) -> Instance:
    try:
        fn, names = FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}") from None
    missing = [p for p in names if p not in params]
    if missing:
        raise ValueError(f"family {family!r} needs parameter(s): {', '.join(missing)}")
    extra = sorted(set(params) - set(names))
    if extra:
        raise ValueError(f"family {family!r} does not take: {', '.join(extra)}")
    args = [int(params[p]) if p in ("n", "m") else float(params[p]) for p in names]
    return fn(*args)
