"""Acceptance suite: one test per criterion, each at its stated tolerance.

A PASS/FAIL line per criterion is printed in the terminal summary (see conftest).
"""
import json
import random
import subprocess
import sys
import time
from fractions import Fraction
from itertools import product
from math import gcd

from symblowdown.diagram import diagram_from_json, validate_threefold_diagram
from symblowdown.domains import (
    edge_sphere_invariants,
    make_ball_collar_domain,
    make_chain_domain,
    reduction_point_map,
)
from symblowdown.jsonio import load_fixtures
from symblowdown.lattice import chain_convergents, neg_cf_eval, neg_cf_expand
from symblowdown.surgery import (
    BallSpec,
    ChainSpec,
    ball_feasible,
    ball_volume,
    blowdown_report,
    blowdown_volume_delta,
    chain_budget,
    choose_ball,
    is_negative_definite,
    leading_minors,
    plumbing_matrix,
    verify_embeddings,
    ManifoldInvariants,
)


def nested(terms):
    v = Fraction(terms[-1])
    for b in reversed(terms[:-1]):
        v = b - 1 / v
    return v


def random_chain(rng):
    n = rng.randint(3, 9)
    # rational areas in (0, 10]
    return ChainSpec(n, [Fraction(rng.randint(1, 10 * q), q) for q in (rng.randint(1, 12) for _ in range(n - 1))])


def feasible_ball(rng, c):
    n, budget = c.n, chain_budget(c)
    am = budget / (n * n + n - 1) * Fraction(rng.randint(1, 99), 100)
    lo, hi = (n + 1) * am, (budget - am) / (n - 1)
    return BallSpec(lo + (hi - lo) * Fraction(rng.randint(1, 99), 100), am)


def test_criterion_01_cf_round_trip():
    t0 = time.perf_counter()
    count = 0
    for n in range(2, 201):
        for m in range(1, n):
            if gcd(n, m) != 1:
                continue
            terms = neg_cf_expand(n, m)
            assert min(terms) >= 2
            assert neg_cf_eval(terms) == (n, m)
            count += 1
    elapsed = time.perf_counter() - t0
    assert count == sum(1 for n in range(2, 201) for m in range(1, n) if gcd(n, m) == 1)
    assert elapsed < 1.0, f"round trip took {elapsed:.3f}s"


def test_criterion_02_convergent_closed_form():
    for n in range(2, 51):
        pairs, r = chain_convergents(n, n - 1)
        for i, (ni, mi) in enumerate(pairs, start=1):
            assert (ni, mi) == ((n + 1) * i + 1, i)
            assert Fraction(ni, mi) == nested([n + 2] + [2] * (i - 1))
        assert pairs[-1] == (n * n, n - 1)
        assert neg_cf_eval([n + 2] + [2] * (n - 2)) == (n * n, n - 1)
        for i, ri in enumerate(r, start=1):
            assert (n - 1) * ri.x - n * n * ri.y == n - i
        # unit area on sphere i alone isolates its coefficient
        for i in range(1, n):
            eps = Fraction(1, 10**9)
            areas = [eps] * (n - 1)
            areas[i - 1] = 1
            total = chain_budget(ChainSpec(n, areas))
            assert total == (n - i) + eps * (sum(range(1, n)) - (n - i))


def test_criterion_03_edge_invariants():
    rng = random.Random(3)
    for n in range(2, 13):
        areas = [Fraction(rng.randint(1, 50), rng.randint(1, 7)) for _ in range(n - 1)]
        got = [(e.area, e.self_intersection) for e in edge_sphere_invariants(make_chain_domain(n, areas))]
        assert got == list(zip(areas, [-(n + 2)] + [-2] * (n - 2)))
    for n in range(3, 13):
        am = Fraction(rng.randint(1, 20), rng.randint(1, 5))
        ap = (n + 1) * am + Fraction(rng.randint(1, 20), rng.randint(1, 5))
        inv = {e.label: (e.area, e.self_intersection) for e in edge_sphere_invariants(make_ball_collar_domain(n, ap, am))}
        assert inv == {"L1": (ap, n + 1), "L2": (am, -(n - 1))}


def test_criterion_04_fit_inequality():
    rng = random.Random(4)
    for _ in range(120):
        c = random_chain(rng)
        b = choose_ball(c)
        fit = ball_feasible(c, b)
        assert fit.feasible
        assert fit.phi2.r.y < fit.phi1.r.y
        verify_embeddings(c, b)
        n, budget = c.n, chain_budget(c)
        # first strict inequality violated: alpha_plus <= (n+1) alpha_minus (equality included)
        am = b.alpha_minus
        for ap in ((n + 1) * am, (n + 1) * am * Fraction(rng.randint(1, 99), 100)):
            assert not ball_feasible(c, BallSpec(ap, am)).feasible
        assert not ball_feasible(c, BallSpec(b.alpha_plus, 0)).feasible
        # second strict inequality violated: (n-1) alpha_plus + alpha_minus >= budget
        am = budget / (2 * (n * n + n - 1))
        for ap in ((budget - am) / (n - 1), (budget - am) / (n - 1) + Fraction(rng.randint(1, 50), 7)):
            assert ap > (n + 1) * am
            assert not ball_feasible(c, BallSpec(ap, am)).feasible


def test_criterion_05_volume():
    for a in (Fraction(1), Fraction(2), Fraction(7, 3), Fraction(41, 5)):
        conic_line = a / 2
        assert blowdown_volume_delta(ChainSpec(2, [a])) == conic_line**2 / 2 == a * a / 8
    assert blowdown_volume_delta(ChainSpec(4, [1, 1, 1])) == Fraction(11, 8)
    rng = random.Random(5)
    for _ in range(40):
        c = random_chain(rng)
        balls = set()
        while len(balls) < 5:
            balls.add(feasible_ball(rng, c))
        deltas = set()
        for b in balls:
            assert ball_feasible(c, b).feasible
            rep = blowdown_report(ManifoldInvariants(0, 0, 20, 0), c, b)
            deltas.add(rep.volume_delta)
            assert rep.volume_delta > ball_volume(c.n, b)
        assert deltas == {blowdown_volume_delta(c)}


def test_criterion_06_ball_double_count():
    rng = random.Random(6)
    for _ in range(120):
        n = rng.randint(3, 12)
        am = Fraction(rng.randint(1, 40), rng.randint(1, 9))
        ap = (n + 1) * am + Fraction(rng.randint(1, 40), rng.randint(1, 9))
        t = (ap - am) / n
        assert ball_volume(n, BallSpec(ap, am)) == t * am + (n - 1) * t * t / 2
    assert ball_volume(4, BallSpec(20, 1)) == Fraction(1235, 32)


def test_criterion_07_plumbing_forms():
    for s in range(1, 7):
        for terms in product(range(2, 8), repeat=s):
            mat = plumbing_matrix(terms)
            assert is_negative_definite(mat)
            assert abs(leading_minors(mat)[-1]) == neg_cf_eval(list(terms))[0]


def test_criterion_08_point_map_jacobian():
    rng = random.Random(8)
    h = 1e-6
    # Darboux-paired order on both sides: (p1, q1, p2, q2) -> (x1, y1, x2, y2)
    paired = (0, 2, 1, 3)
    for _ in range(100):
        x = [rng.uniform(0.1, 5.0), rng.uniform(0.1, 5.0), rng.uniform(0, 1), rng.uniform(0, 1)]
        cols = []
        for k in paired:
            up, dn = list(x), list(x)
            up[k] += h
            dn[k] -= h
            fu, fd = reduction_point_map(*up), reduction_point_map(*dn)
            cols.append([(a - b) / (2 * h) for a, b in zip(fu, fd)])
        mat = [[cols[k][j] for k in range(4)] for j in range(4)]
        for lo in (0, 2):
            block = mat[lo][lo] * mat[lo + 1][lo + 1] - mat[lo][lo + 1] * mat[lo + 1][lo]
            assert abs(block - 1) < 1e-6
        assert abs(_det4(mat) - 1) < 1e-6


def _det4(m):
    def minor(a, i):
        return [row[:i] + row[i + 1:] for row in a[1:]]

    def det(a):
        if len(a) == 1:
            return a[0][0]
        return sum((-1) ** i * a[0][i] * det(minor(a, i)) for i in range(len(a)))

    return det(m)


def test_criterion_09_diagram_validator():
    fixtures = {k: diagram_from_json(v) for k, v in load_fixtures().items()}
    expected = {"conic-sum": True, "triangle-balanced": True, "triangle-unbalanced": False}
    for name, want in expected.items():
        assert validate_threefold_diagram(fixtures[name]).valid is want
    for name, d in fixtures.items():
        base = {c.pairing: c for c in validate_threefold_diagram(d).checks}
        for s in d.surfaces:
            for delta in (1, -1):
                mutated = {c.pairing: c for c in validate_threefold_diagram(
                    d.with_self_intersection(s.id, s.self_intersection + delta)).checks}
                touched = {p for p in d.pairings if s.id in p}
                for p in d.pairings:
                    shift = mutated[p].residual - base[p].residual
                    assert shift == (delta if p in touched else 0)
                    if base[p].valid:
                        assert mutated[p].valid is (p not in touched)
                flipped = {p for p in d.pairings if mutated[p].valid != base[p].valid}
                if expected[name]:
                    assert flipped == touched


def test_criterion_10_determinism(tmp_path):
    job = {"command": "blowdown", "chain": {"n": 5, "areas": ["1/3", 2, 3, "7/2"]},
           "invariants": {"euler": 100, "signature": -20, "b2": 30, "volume": "50"}}
    path = tmp_path / "job.json"
    path.write_text(json.dumps(job))
    commands = [
        ["blowdown", "--json", str(path)],
        ["fit", "--n", "4", "--areas", "30", "1", "1", "--ball", "20", "1"],
        ["render", "--figure", "fit", "--n", "4", "--areas", "30", "1", "1", "--ball", "20", "1"],
        ["render", "--figure", "collar", "--n", "6", "--areas", "1", "2", "3", "4", "5"],
        ["render", "--figure", "plumbing", "--n", "5", "--areas", "1", "1", "1", "1"],
    ]
    for args in commands:
        outs = [subprocess.run([sys.executable, "-m", "symblowdown", *args], capture_output=True, check=False)
                for _ in range(2)]
        assert outs[0].returncode == outs[1].returncode
        assert outs[0].stdout == outs[1].stdout
        assert outs[0].stdout
