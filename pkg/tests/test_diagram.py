import random

import pytest

from symblowdown.diagram import (
    DiagramError,
    Surface,
    SumDiagram,
    diagram_from_json,
    diagram_to_json,
    validate_threefold_diagram,
)
from symblowdown.jsonio import load_fixtures


@pytest.fixture(scope="module")
def fixtures():
    return {k: diagram_from_json(v) for k, v in load_fixtures().items()}


def verdict_map(d):
    return {c.pairing: c.valid for c in validate_threefold_diagram(d).checks}


@pytest.mark.parametrize("name, valid", [
    ("conic-sum", True),
    ("triangle-balanced", True),
    ("triangle-unbalanced", False),
])
def test_fixture_verdicts(fixtures, name, valid):
    assert validate_threefold_diagram(fixtures[name]).valid is valid


def test_unbalanced_lists_exact_violation(fixtures):
    v = validate_threefold_diagram(fixtures["triangle-unbalanced"])
    assert [(c.pairing, c.self_intersection_sum, c.triple_points, c.residual) for c in v.violations] == [
        (("x1", "y1"), 0, 1, 1)
    ]


@pytest.mark.parametrize("name", ["conic-sum", "triangle-balanced", "triangle-unbalanced"])
@pytest.mark.parametrize("delta", [1, -1])
def test_mutation_flips_touched_pairings(fixtures, name, delta):
    d = fixtures[name]
    base = verdict_map(d)
    for s in d.surfaces:
        mutated = verdict_map(d.with_self_intersection(s.id, s.self_intersection + delta))
        touched = {p for p in d.pairings if s.id in p}
        flipped = {p for p in base if base[p] != mutated[p]}
        # a pairing that was valid must turn invalid; an invalid one flips only if the shift repairs it
        assert flipped <= touched
        for p in touched:
            if base[p]:
                assert p in flipped


def test_mutation_flips_exactly_touched_in_valid_fixtures(fixtures):
    for name in ("conic-sum", "triangle-balanced"):
        d = fixtures[name]
        for s in d.surfaces:
            for delta in (1, -1):
                v = validate_threefold_diagram(d.with_self_intersection(s.id, s.self_intersection + delta))
                assert {c.pairing for c in v.violations} == {p for p in d.pairings if s.id in p}


def test_unbalanced_repaired_by_mutation(fixtures):
    d = fixtures["triangle-unbalanced"]
    assert validate_threefold_diagram(d.with_self_intersection("y1", 2)).valid


def test_added_triple_point_breaks_three():
    surfaces = [Surface(f"{h}{k}", h, 0) for h in "ABC" for k in (1, 2)]
    base = SumDiagram(surfaces, [("A1", "B2"), ("B1", "C2"), ("C1", "A2")])
    assert validate_threefold_diagram(base).valid
    hit = validate_threefold_diagram(base.with_triple_point((0, 1, 2)))
    assert len(hit.violations) == 3
    assert all(c.residual == 1 for c in hit.violations)
    # decrementing one side of every pairing restores balance
    fixed = base.with_triple_point((0, 1, 2))
    for sid in ("A1", "B1", "C1"):
        fixed = fixed.with_self_intersection(sid, -1)
    assert validate_threefold_diagram(fixed).valid


def test_triple_point_touches_only_its_pairings():
    hosts = "ABCDE"
    surfaces = [Surface(f"{h}{k}", h, 0) for h in hosts for k in range(4)]
    pairings = [("A0", "B0"), ("B1", "C0"), ("C1", "D0"), ("D1", "E0"), ("E1", "A1")]
    base = SumDiagram(surfaces, pairings)
    v = validate_threefold_diagram(base.with_triple_point((0, 2, 4)))
    assert {c.pairing for c in v.violations} == {pairings[0], pairings[2], pairings[4]}


def test_order_independence(fixtures):
    rng = random.Random(0)
    for d in fixtures.values():
        want = {frozenset(c.pairing): c.residual for c in validate_threefold_diagram(d).checks}
        for _ in range(20):
            surfaces = list(d.surfaces)
            rng.shuffle(surfaces)
            order = list(range(len(d.pairings)))
            rng.shuffle(order)
            where = {old: new for new, old in enumerate(order)}
            pairings = [tuple(reversed(d.pairings[i])) if rng.random() < 0.5 else d.pairings[i] for i in order]
            triples = [tuple(sorted(where[i] for i in tp)) for tp in d.triple_points]
            got = validate_threefold_diagram(SumDiagram(surfaces, pairings, triples))
            assert {frozenset(c.pairing): c.residual for c in got.checks} == want


def test_json_round_trip(fixtures):
    for d in fixtures.values():
        assert diagram_from_json(diagram_to_json(d)) == d


@pytest.mark.parametrize("surfaces, pairings, triples", [
    ([Surface("a", "X", 0), Surface("a", "Y", 0)], [], []),
    ([Surface("a", "X", 0)], [("a", "b")], []),
    ([Surface("a", "X", 0), Surface("b", "X", 0)], [("a", "b")], []),
    ([Surface("a", "X", 0), Surface("b", "Y", 0)], [("a", "b"), ("b", "a")], []),
    ([Surface("a", "X", 0), Surface("b", "Y", 0)], [("a", "b")], [(0, 0, 0)]),
    ([Surface("a", "X", 0), Surface("b", "Y", 0)], [("a", "b")], [(0, 1, 2)]),
])
def test_malformed(surfaces, pairings, triples):
    with pytest.raises(DiagramError):
        SumDiagram(surfaces, pairings, triples)
