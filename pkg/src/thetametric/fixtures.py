"""Named built-in fixtures, so acceptance runs need no external files."""
from __future__ import annotations

import copy
from dataclasses import dataclass
from typing import Optional

from .actions import Action
from .fixedpoint import CaristiData, MultiMap, TableMap
from .spaces import FiniteSpace


@dataclass(frozen=True)
class Fixture:
    name: str
    description: str
    space: dict
    action: dict
    map: Optional[dict] = None
    multimap: Optional[dict] = None
    caristi: Optional[dict] = None

    def build_space(self) -> FiniteSpace:
        return FiniteSpace.from_json(self.space, name=self.name)

    def build_action(self) -> Action:
        return Action.from_json(self.action)

    def build_map(self, sp: FiniteSpace) -> TableMap:
        return TableMap.from_labels(sp, self.map)

    def build_multimap(self, sp: FiniteSpace) -> MultiMap:
        return MultiMap.from_labels(sp, self.multimap)

    def build_caristi(self, sp: FiniteSpace, a: Action) -> CaristiData:
        return CaristiData.from_json(self.caristi, sp, a)


_CHAIN = ["p0", "p1", "p2"]
_CHAIN_PHI = {"p0": 4.0, "p1": 2.0, "p2": 0.0}  # phi(p_i) = 2 (2 - i)
_CHAIN_MAP = {"p0": "p1", "p1": "p2", "p2": "p2"}
_CHAIN_MULTI = {"p0": ["p1", "p2"], "p1": ["p2"], "p2": ["p2"]}

_FIXTURES = {
    f.name: f
    for f in [
        Fixture(
            "paper-3pt",
            "three points violating the ordinary triangle inequality; valid under s+t+st",
            {"points": ["x", "y", "z"], "distances": [[0, 2, 6], [2, 0, 10], [6, 10, 0]]},
            {"kind": "sum_plus_prod", "params": {}},
        ),
        Fixture(
            "remark-metric",
            "an ordinary metric that fails the halved-sum triangle condition",
            {"points": ["1", "2", "3"], "distances": [[0, 1, 1], [1, 0, 2], [1, 2, 0]]},
            {"kind": "k_sum", "params": {"k": 1.0}},
        ),
        Fixture(
            "caristi-chain",
            "chain p0, p1, p2 with d = |i - j|, psi = phi(y) - phi(x), T shifting down the chain",
            {"points": _CHAIN, "distances": [[0, 1, 2], [1, 0, 1], [2, 1, 0]]},
            {"kind": "k_sum", "params": {"k": 1.0}},
            map=_CHAIN_MAP,
            multimap=_CHAIN_MULTI,
            caristi={"gamma": {"kind": "identity"}, "psi": {"kind": "odd_root_phi", "phi": _CHAIN_PHI, "n": 0}},
        ),
        Fixture(
            "caristi-cuberoot",
            "discrete three-point chain under the cube-root action with a cube-root potential",
            {"points": _CHAIN, "distances": [[0, 1, 1], [1, 0, 1], [1, 1, 0]]},
            {"kind": "root_sum_power", "params": {"n": 3}},
            map=_CHAIN_MAP,
            multimap=_CHAIN_MULTI,
            caristi={"gamma": {"kind": "identity"}, "psi": {"kind": "odd_root_phi", "phi": _CHAIN_PHI, "n": 1}},
        ),
        Fixture(
            "contraction-5pt",
            "points 0, 1, 3, 7, 15 on a line; the map q_i -> q_{i-1} contracts by 1/2",
            {
                "points": ["q0", "q1", "q2", "q3", "q4"],
                "distances": [[abs(a - b) for b in (0, 1, 3, 7, 15)] for a in (0, 1, 3, 7, 15)],
            },
            {"kind": "k_sum", "params": {"k": 1.0}},
            map={"q0": "q0", "q1": "q0", "q2": "q1", "q3": "q2", "q4": "q3"},
        ),
    ]
}


def bundled_fixtures() -> dict:
    """Fresh copies of every built-in fixture, keyed by name."""
    return copy.deepcopy(_FIXTURES)


def get_fixture(name: str) -> Fixture:
    from .errors import InputError

    try:
        return copy.deepcopy(_FIXTURES[name])
    except KeyError:
        raise InputError(f"no built-in fixture {name!r}; available: {', '.join(sorted(_FIXTURES))}") from None
