from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Qualifier(str, Enum):
    """How far a verdict can be trusted.

    ``Exact`` verdicts quantify over the whole (finite) universe.
    ``WindowBounded`` verdicts quantify over a finite window of an infinite
    integer algebra. ``WitnessDepthBounded`` verdicts depend on a term-witness
    relation, where "no witness" only means none was found up to the depth.
    """

    EXACT = "Exact"
    WINDOW = "WindowBounded"
    DEPTH = "WitnessDepthBounded"


_RANK = {Qualifier.EXACT: 0, Qualifier.WINDOW: 1, Qualifier.DEPTH: 2}


def combine(*quals):
    return max(quals, key=_RANK.__getitem__, default=Qualifier.EXACT)


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: tuple | None = None
    qualifier: Qualifier = Qualifier.EXACT
    detail: str = ""
    swept: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.holds and self.witness is not None:
            raise ValueError("a holding verdict carries no witness")
        if not self.holds and self.witness is None:
            raise ValueError("a failing verdict must carry a witness")

    def __bool__(self):
        return self.holds

    @property
    def values(self):
        """Witness values without slot names (``None`` when the verdict holds)."""
        if self.witness is None:
            return None
        return tuple(v for _, v in self.witness)

    def to_dict(self):
        return {
            "holds": self.holds,
            "qualifier": self.qualifier.value,
            "witness": None if self.witness is None
            else [[slot, _jsonable(v)] for slot, v in self.witness],
            "detail": self.detail,
            "swept": self.swept,
        }


def _jsonable(v):
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    if isinstance(v, (tuple, list)):
        return [_jsonable(x) for x in v]
    return str(v)


def ok(qualifier=Qualifier.EXACT, detail="", swept=0):
    return Verdict(True, None, qualifier, detail, swept)


def fail(slots, values, qualifier=Qualifier.EXACT, detail="", swept=0):
    return Verdict(False, tuple(zip(slots, values)), qualifier, detail, swept)
