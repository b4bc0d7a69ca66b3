"""Data model and objective evaluation for group facility location on a line.

Group ids are 0-based. An agent may belong to several groups; every group
must have at least one member and a strictly positive weight.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union


class InstanceError(ValueError):
    """Raised when raw instance data violates one or more invariants."""

    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class Objective(str, enum.Enum):
    WTGC = "wtgc"  # weighted total group cost
    WMGC = "wmgc"  # weighted maximum group cost

    @classmethod
    def parse(cls, value: Union[str, "Objective"]) -> "Objective":
        if isinstance(value, Objective):
            return value
        try:
            return cls(value.lower())
        except ValueError:
            raise ValueError(f"unknown objective {value!r} (expected wtgc or wmgc)") from None


@dataclass(frozen=True)
class Agent:
    location: float
    groups: frozenset


@dataclass(frozen=True)
class Placement:
    locations: tuple

    def __post_init__(self):
        locs = tuple(float(v) for v in self.locations)
        if not locs:
            raise ValueError("placement needs at least one facility")
        if not all(math.isfinite(v) for v in locs):
            raise ValueError("placement locations must be finite")
        object.__setattr__(self, "locations", tuple(sorted(locs)))

    @property
    def k(self) -> int:
        return len(self.locations)

    def __iter__(self):
        return iter(self.locations)

    def __len__(self):
        return len(self.locations)

    def __getitem__(self, i):
        return self.locations[i]


PlacementLike = Union[Placement, Sequence[float], float]


def as_placement(value: PlacementLike) -> Placement:
    if isinstance(value, Placement):
        return value
    if isinstance(value, (int, float)):
        return Placement((value,))
    return Placement(tuple(value))


@dataclass(frozen=True)
class Instance:
    """A profile of agents sorted by location plus one weight per group.

    Build instances through :func:`validate` or :meth:`Instance.build`; the
    constructor assumes its arguments are already canonical.
    """

    agents: tuple
    weights: tuple

    @classmethod
    def build(cls, locations: Sequence[float], groups: Sequence[Iterable[int]],
              weights: Sequence[float]) -> "Instance":
        if len(locations) != len(groups):
            raise InstanceError(["locations and groups differ in length"])
        return validate({
            "weights": list(weights),
            "agents": [{"x": x, "groups": list(g)} for x, g in zip(locations, groups)],
        })

    @property
    def n(self) -> int:
        return len(self.agents)

    @property
    def m(self) -> int:
        return len(self.weights)

    @cached_property
    def locations(self) -> tuple:
        return tuple(a.location for a in self.agents)

    @cached_property
    def members(self) -> tuple:
        """Agent indices of each group, in ascending index order."""
        out = [[] for _ in range(self.m)]
        for i, a in enumerate(self.agents):
            for j in a.groups:
                out[j].append(i)
        return tuple(tuple(g) for g in out)

    @cached_property
    def agent_weights(self) -> tuple:
        return tuple(max(self.weights[j] for j in a.groups) for a in self.agents)

    @property
    def w_max(self) -> float:
        return max(self.weights)

    @property
    def w_min(self) -> float:
        return min(self.weights)

    @property
    def span(self) -> float:
        return self.locations[-1] - self.locations[0]

    def with_location(self, i: int, x: float) -> tuple:
        """Move agent ``i`` to ``x``; returns the re-sorted instance and an old->new index map."""
        moved = list(self.agents)
        moved[i] = Agent(float(x), self.agents[i].groups)
        order = sorted(range(self.n), key=lambda t: moved[t].location)
        new_index = [0] * self.n
        for new, old in enumerate(order):
            new_index[old] = new
        return Instance(tuple(moved[t] for t in order), self.weights), tuple(new_index)

    def to_dict(self) -> dict:
        return {
            "weights": list(self.weights),
            "agents": [{"x": a.location, "groups": sorted(a.groups)} for a in self.agents],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def validate(raw: Mapping) -> Instance:
    """Canonicalize raw instance data, raising :class:`InstanceError` listing every violation."""
    errors = []
    if not isinstance(raw, Mapping):
        raise InstanceError(["instance must be an object with 'weights' and 'agents'"])
    weights = raw.get("weights")
    agents = raw.get("agents")
    if not isinstance(weights, (list, tuple)):
        errors.append("weights: missing or not a list")
        weights = []
    if not isinstance(agents, (list, tuple)):
        errors.append("agents: missing or not a list")
        agents = []

    m = len(weights)
    if m == 0:
        errors.append("weights: m=0, at least one group required")
    clean_w = []
    for j, w in enumerate(weights):
        if isinstance(w, bool) or not isinstance(w, (int, float)):
            errors.append(f"weights[{j}]: not a number")
            continue
        if not math.isfinite(w) or w <= 0:
            errors.append(f"weights[{j}]: nonpositive weight {w!r}")
            continue
        clean_w.append(float(w))

    if len(agents) == 0:
        errors.append("agents: n=0, at least one agent required")
    parsed = []
    seen = set()
    for i, a in enumerate(agents):
        if not isinstance(a, Mapping):
            errors.append(f"agents[{i}]: not an object")
            continue
        x = a.get("x")
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            errors.append(f"agents[{i}].x: not a number")
            continue
        if not math.isfinite(x):
            errors.append(f"agents[{i}].x: non-finite location")
            continue
        gs = a.get("groups")
        if not isinstance(gs, (list, tuple, set, frozenset)):
            errors.append(f"agents[{i}].groups: missing or not a list")
            continue
        if len(gs) == 0:
            errors.append(f"agents[{i}].groups: empty group set")
            continue
        bad = [g for g in gs if isinstance(g, bool) or not isinstance(g, int) or not 0 <= g < m]
        if bad:
            errors.append(f"agents[{i}].groups: invalid group id(s) {bad}")
            continue
        seen.update(gs)
        parsed.append(Agent(float(x), frozenset(gs)))

    if not errors:
        for j in range(m):
            if j not in seen:
                errors.append(f"weights[{j}]: empty group {j}")
    if errors:
        raise InstanceError(errors)
    # sorted() is stable, so equal locations keep input order
    parsed.sort(key=lambda ag: ag.location)
    return Instance(tuple(parsed), tuple(clean_w))


def load_instance(text: Union[str, bytes]) -> Instance:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError([f"malformed JSON: {exc}"]) from None
    return validate(raw)


def cost(placement: PlacementLike, x: float) -> float:
    """Distance from ``x`` to the nearest facility."""
    return min(abs(y - x) for y in as_placement(placement))


def agent_weight(inst: Instance, i: int) -> float:
    """Largest weight among the groups agent ``i`` belongs to."""
    if not 0 <= i < inst.n:
        raise IndexError(f"agent index {i} out of range for n={inst.n}")
    return inst.agent_weights[i]


def agent_costs(inst: Instance, placement: PlacementLike) -> list:
    ys = as_placement(placement).locations
    if len(ys) == 1:
        y = ys[0]
        return [abs(y - x) for x in inst.locations]
    return [min(abs(y - x) for y in ys) for x in inst.locations]


def _effect(inst: Instance, costs: Sequence[float], obj: Objective, j: int) -> float:
    member_costs = [costs[i] for i in inst.members[j]]
    if obj is Objective.WTGC:
        return inst.weights[j] * sum(member_costs)
    return inst.weights[j] * max(member_costs)


def group_effect(inst: Instance, placement: PlacementLike, obj: Objective, j: int) -> float:
    if not 0 <= j < inst.m:
        raise IndexError(f"group id {j} out of range for m={inst.m}")
    obj = Objective.parse(obj)
    return _effect(inst, agent_costs(inst, placement), obj, j)


@dataclass(frozen=True)
class EvalReport:
    effects: tuple
    mge: float
    argmax_group: int


def mge(inst: Instance, placement: PlacementLike, obj: Objective) -> EvalReport:
    """Per-group effects and their maximum; ties on the maximum go to the smallest group id."""
    obj = Objective.parse(obj)
    costs = agent_costs(inst, placement)
    effects = tuple(_effect(inst, costs, obj, j) for j in range(inst.m))
    best = 0
    for j in range(1, inst.m):
        if effects[j] > effects[best]:
            best = j
    return EvalReport(effects, effects[best], best)


def mge_value(inst: Instance, placement: PlacementLike, obj: Objective) -> float:
    return mge(inst, placement, obj).mge
