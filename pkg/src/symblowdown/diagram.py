"""Balance check for 3-fold sum gluing diagrams.

Two glued surfaces ``F, F'`` can be summed only if
``F.F + F'.F' = -(number of triple points involving the pair)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field


class DiagramError(ValueError):
    """Structurally malformed diagram (unknown ids, repeated pairings...)."""


@dataclass(frozen=True)
class Surface:
    id: str
    host: str
    self_intersection: int


@dataclass(frozen=True)
class SumDiagram:
    surfaces: tuple[Surface, ...]
    pairings: tuple[tuple[str, str], ...]
    triple_points: tuple[tuple[int, int, int], ...] = ()
    note: str = ""

    def __post_init__(self):
        object.__setattr__(self, "surfaces", tuple(self.surfaces))
        object.__setattr__(self, "pairings", tuple(tuple(p) for p in self.pairings))
        object.__setattr__(self, "triple_points", tuple(tuple(t) for t in self.triple_points))
        by_id = {}
        for s in self.surfaces:
            if s.id in by_id:
                raise DiagramError(f"duplicate surface id {s.id!r}")
            by_id[s.id] = s
        seen = set()
        for k, pair in enumerate(self.pairings):
            if len(pair) != 2:
                raise DiagramError(f"pairing {k} must join exactly two surfaces")
            a, b = pair
            for sid in pair:
                if sid not in by_id:
                    raise DiagramError(f"pairing {k} references unknown surface {sid!r}")
            if by_id[a].host == by_id[b].host:
                raise DiagramError(f"pairing {k} glues two surfaces of {by_id[a].host!r}")
            key = frozenset(pair)
            if key in seen:
                raise DiagramError(f"pairing {k} repeats {sorted(key)}")
            seen.add(key)
        for k, tp in enumerate(self.triple_points):
            if len(tp) != 3 or len(set(tp)) != 3:
                raise DiagramError(f"triple point {k} needs three distinct pairings")
            if any(not (0 <= i < len(self.pairings)) for i in tp):
                raise DiagramError(f"triple point {k} references a missing pairing")

    def surface(self, sid: str) -> Surface:
        for s in self.surfaces:
            if s.id == sid:
                return s
        raise KeyError(sid)

    def with_self_intersection(self, sid: str, value: int) -> "SumDiagram":
        surfaces = tuple(
            Surface(s.id, s.host, value) if s.id == sid else s for s in self.surfaces
        )
        return SumDiagram(surfaces, self.pairings, self.triple_points, self.note)

    def with_triple_point(self, tp: tuple[int, int, int]) -> "SumDiagram":
        return SumDiagram(self.surfaces, self.pairings, self.triple_points + (tuple(tp),), self.note)


@dataclass(frozen=True)
class PairingCheck:
    pairing: tuple[str, str]
    self_intersection_sum: int
    triple_points: int
    residual: int

    @property
    def valid(self) -> bool:
        return self.residual == 0


@dataclass(frozen=True)
class DiagramVerdict:
    checks: tuple[PairingCheck, ...] = field(default_factory=tuple)

    @property
    def valid(self) -> bool:
        return all(c.valid for c in self.checks)

    @property
    def violations(self) -> list[PairingCheck]:
        return [c for c in self.checks if not c.valid]


def validate_threefold_diagram(d: SumDiagram) -> DiagramVerdict:
    counts = [0] * len(d.pairings)
    for tp in d.triple_points:
        for i in tp:
            counts[i] += 1
    checks = []
    for (a, b), count in zip(d.pairings, counts):
        total = d.surface(a).self_intersection + d.surface(b).self_intersection
        checks.append(PairingCheck((a, b), total, count, total + count))
    return DiagramVerdict(tuple(checks))


def diagram_from_json(doc: dict) -> SumDiagram:
    surfaces = [Surface(str(s["id"]), str(s["host"]), int(s["self_intersection"])) for s in doc["surfaces"]]
    return SumDiagram(surfaces, [tuple(p) for p in doc["pairings"]],
                      [tuple(t) for t in doc.get("triple_points", [])], doc.get("note", ""))


def diagram_to_json(d: SumDiagram) -> dict:
    out = {
        "surfaces": [{"id": s.id, "host": s.host, "self_intersection": s.self_intersection} for s in d.surfaces],
        "pairings": [list(p) for p in d.pairings],
        "triple_points": [list(t) for t in d.triple_points],
    }
    if d.note:
        out["note"] = d.note
    return out


def verdict_to_json(v: DiagramVerdict) -> dict:
    return {
        "valid": v.valid,
        "pairings": [
            {"pairing": list(c.pairing), "self_intersection_sum": c.self_intersection_sum,
             "triple_points": c.triple_points, "residual": c.residual, "valid": c.valid}
            for c in v.checks
        ],
    }
