"""Named mechanism choices, as used on the command line and by the verifier.

Accepted names::

    balanced
    major-phantom[:v1,v2,...]     (no values: every phantom at 0)
    med
    leftmost
    major
    endpoint
    dictatorial:<agent-index>     (index into the location-sorted profile)
    midpoint-extremes             (NOT strategyproof; a control for the SP checker)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import multi, single
from .core import Instance, Placement

SINGLE = ("balanced", "major-phantom", "med", "leftmost", "major")
DOUBLE = ("endpoint", "dictatorial")
CONTROLS = ("midpoint-extremes",)
NAMES = SINGLE + DOUBLE + CONTROLS


def midpoint_extremes(inst: Instance) -> float:
    """Midpoint of the extreme reports. Manipulable; used only to test the SP checker."""
    return (inst.locations[0] + inst.locations[-1]) / 2


@dataclass(frozen=True)
class MechanismSpec:
    name: str
    phantoms: Optional[tuple] = None
    dictator: Optional[int] = None

    def __post_init__(self):
        if self.name not in NAMES:
            raise ValueError(f"unknown mechanism {self.name!r}; expected one of {', '.join(NAMES)}")
        if self.name == "dictatorial" and (self.dictator is None or self.dictator < 0):
            raise ValueError("dictatorial needs a nonnegative agent index, e.g. dictatorial:0")

    @classmethod
    def parse(cls, text: str) -> "MechanismSpec":
        text = text.strip()
        name, _, arg = text.partition(":")
        name = name.strip().lower()
        if name == "major-phantom":
            if not arg.strip():
                return cls(name)
            return cls(name, phantoms=tuple(float(v) for v in arg.split(",")))
        if name == "dictatorial":
            if not arg.strip():
                raise ValueError("dictatorial needs an agent index, e.g. dictatorial:0")
            return cls(name, dictator=int(arg))
        if arg:
            raise ValueError(f"mechanism {name!r} takes no parameters")
        return cls(name)

    def __str__(self):
        if self.name == "major-phantom" and self.phantoms is not None:
            return "major-phantom:" + ",".join(repr(v) for v in self.phantoms)
        if self.name == "dictatorial":
            return f"dictatorial:{self.dictator}"
        return self.name

    @property
    def k(self) -> int:
        return 2 if self.name in DOUBLE else 1

    def applicable(self, inst: Instance) -> bool:
        if self.name == "dictatorial":
            return self.dictator < inst.n
        if self.name == "major-phantom" and self.phantoms is not None:
            g = single.heaviest_group(inst)
            return len(self.phantoms) == len(inst.members[g]) - 1
        return True

    def follow(self, index_map: Sequence[int]) -> "MechanismSpec":
        """Re-target agent-indexed parameters after the profile was re-sorted."""
        if self.name == "dictatorial":
            return MechanismSpec(self.name, dictator=index_map[self.dictator])
        return self

    def apply(self, inst: Instance) -> Placement:
        name = self.name
        if name == "balanced":
            y = single.balanced(inst)
        elif name == "major-phantom":
            y = single.major_phantom(inst, self.phantoms)
        elif name == "med":
            y = single.med(inst)
        elif name == "leftmost":
            y = single.leftmost(inst)
        elif name == "major":
            y = single.major(inst)
        elif name == "midpoint-extremes":
            y = midpoint_extremes(inst)
        elif name == "endpoint":
            return multi.endpoint(inst)
        else:
            return multi.dictatorial(inst, self.dictator)
        return Placement((y,))


def run_mechanism(spec: MechanismSpec | str, inst: Instance, k: Optional[int] = None) -> Placement:
    """Run a mechanism, refusing k >= 3 and k mismatches explicitly."""
    if isinstance(spec, str):
        spec = MechanismSpec.parse(spec)
    if k is not None:
        multi.check_k(k)
        if k != spec.k:
            raise ValueError(f"mechanism {spec} places {spec.k} facility(ies), not {k}")
    return spec.apply(inst)
