"""Fit inequality, embedding translations, volumes and invariant deltas of the
symplectic rational blowdown along a ``C_n`` chain."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .domains import (
    InfeasibleBallError,
    PolyDomain,
    ball_corner_height,
    closures_disjoint,
    domain_contains,
    make_ball_collar_domain,
    make_chain_domain,
    make_wedge,
    polygon_area,
    translate,
)
from .lattice import UnimodularMap, Vec, as_rational, chain_convergents, neg_cf_eval


class SurgeryError(ValueError):
    pass


@dataclass(frozen=True)
class ChainSpec:
    n: int
    areas: tuple[Fraction, ...]

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise SurgeryError(f"chain parameter n must be an integer >= 2, got {self.n}")
        areas = tuple(as_rational(a) for a in self.areas)
        if len(areas) != self.n - 1:
            raise SurgeryError(f"C_{self.n} needs {self.n - 1} sphere areas, got {len(areas)}")
        if any(a <= 0 for a in areas):
            raise SurgeryError("sphere areas must be positive")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "areas", areas)

    def scaled(self, factor) -> "ChainSpec":
        return ChainSpec(self.n, tuple(a * as_rational(factor) for a in self.areas))


@dataclass(frozen=True)
class BallSpec:
    alpha_plus: Fraction
    alpha_minus: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha_plus", as_rational(self.alpha_plus))
        object.__setattr__(self, "alpha_minus", as_rational(self.alpha_minus))

    def is_valid_for(self, n: int) -> bool:
        return self.alpha_plus > (n + 1) * self.alpha_minus > 0


@dataclass(frozen=True)
class ManifoldInvariants:
    euler: int
    signature: int
    b2: int
    volume: Fraction

    def __post_init__(self):
        if self.b2 < 0:
            raise SurgeryError("b2 must be non-negative")
        object.__setattr__(self, "volume", as_rational(self.volume))

    @property
    def c1_squared(self) -> int:
        return 2 * self.euler + 3 * self.signature


@dataclass(frozen=True)
class FitReport:
    feasible: bool
    phi1: UnimodularMap
    phi2: Optional[UnimodularMap]
    margin: Optional[Fraction]
    reason: str = ""


@dataclass(frozen=True)
class BlowdownReport:
    fit: FitReport
    volume_delta: Fraction
    new_invariants: ManifoldInvariants
    deltas: dict = field(default_factory=dict)


def chain_budget(c: ChainSpec) -> Fraction:
    """Right-hand side of the fit inequality, ``sum ((n-1) n_{i-1} - n^2 m_{i-1}) a_i``."""
    n = c.n
    _, r = chain_convergents(n, n - 1)
    total = Fraction(0)
    for i, (ri, a) in enumerate(zip(r, c.areas), start=1):
        coeff = (n - 1) * ri.x - n * n * ri.y
        if coeff != n - i:
            raise AssertionError(f"budget coefficient {i} of C_{n} is {coeff}, expected {n - i}")
        total += coeff * a
    return total


def embedding_phi1(c: ChainSpec) -> UnimodularMap:
    """Translation placing ``U_{C_n^-}`` in ``U_{n^2, n-1}`` with its legs on the wedge edges."""
    return UnimodularMap.translation(0, chain_budget(c) / c.n**2)


def embedding_phi2(c: ChainSpec, b: BallSpec) -> UnimodularMap:
    """Translation placing ``U_{A'_n}`` in the same wedge, its corner on the wedge corner."""
    if not b.is_valid_for(c.n):
        raise InfeasibleBallError(f"ball {b} violates alpha_plus > (n+1) alpha_minus > 0 for n={c.n}")
    return UnimodularMap.translation(0, ball_corner_height(c.n, b.alpha_plus, b.alpha_minus))


def placed_chain(c: ChainSpec, collar: bool = True) -> PolyDomain:
    return translate(make_chain_domain(c.n, c.areas, collar=collar), *embedding_phi1(c).r)


def placed_ball(c: ChainSpec, b: BallSpec, filled: bool = False) -> PolyDomain:
    ball = make_ball_collar_domain(c.n, b.alpha_plus, b.alpha_minus, filled=filled)
    return translate(ball, *embedding_phi2(c, b).r)


def verify_embeddings(c: ChainSpec, b: BallSpec) -> None:
    """Exact geometric check of both embeddings; raises ``AssertionError`` on failure."""
    wedge = make_wedge(c.n**2, c.n - 1)
    chain = placed_chain(c)
    ball = placed_ball(c, b)
    if not domain_contains(wedge, chain):
        raise AssertionError("translated chain collar leaves the wedge")
    if not domain_contains(wedge, ball):
        raise AssertionError("translated ball collar leaves the wedge")
    if not closures_disjoint(placed_chain(c, collar=False), placed_ball(c, b, filled=True)):
        raise AssertionError("ball collar does not lie strictly below the chain")


def ball_feasible(c: ChainSpec, b: BallSpec) -> FitReport:
    n = c.n
    phi1 = embedding_phi1(c)
    if n == 2:
        return FitReport(False, phi1, None, None, "n = 2 is blown down by a conic sum; no ball collar")
    if not b.is_valid_for(n):
        return FitReport(False, phi1, None, None, "alpha_plus > (n+1) alpha_minus > 0 fails")
    phi2 = embedding_phi2(c, b)
    margin = phi1.r.y - phi2.r.y
    if margin <= 0:
        used = (n - 1) * b.alpha_plus + b.alpha_minus
        return FitReport(False, phi1, phi2, margin, f"(n-1) alpha_plus + alpha_minus = {used} is not below budget {chain_budget(c)}")
    verify_embeddings(c, b)
    return FitReport(True, phi1, phi2, margin)


def choose_ball(c: ChainSpec) -> BallSpec:
    """Deterministic ball using half of the budget, with ``alpha_plus = (n+2) alpha_minus``."""
    n = c.n
    if n < 3:
        raise SurgeryError("n = 2 needs no ball (conic sum)")
    alpha_minus = chain_budget(c) / (2 * (n * n + n - 1))
    return BallSpec((n + 2) * alpha_minus, alpha_minus)


def blowdown_region(c: ChainSpec) -> list[Vec]:
    """Vertices of the region below the placed chain inside the wedge."""
    chain = placed_chain(c, collar=False)
    return [Vec(0, 0)] + chain.vertices


def blowdown_volume_delta(c: ChainSpec) -> Fraction:
    return polygon_area(blowdown_region(c))


def ball_volume(n: int, b: BallSpec) -> Fraction:
    """Volume of the ball region, by shoelace and by the ruled-surface formula."""
    if n < 3:
        raise SurgeryError("ball volume is defined for n >= 3")
    if not b.is_valid_for(n):
        raise InfeasibleBallError(f"ball {b} violates alpha_plus > (n+1) alpha_minus > 0 for n={n}")
    ap, am = b.alpha_plus, b.alpha_minus
    shoelace = polygon_area([
        Vec(0, 0), Vec(ap, 0), Vec(ap - (n + 1) * am, -am), Vec(0, -ball_corner_height(n, ap, am)),
    ])
    t = (ap - am) / n
    ruled = t * am + (n - 1) * t * t / 2
    if shoelace != ruled:
        raise AssertionError(f"ball volume mismatch: {shoelace} != {ruled}")
    return shoelace


# --- intersection forms --------------------------------------------------------------


def plumbing_matrix(terms: Sequence[int]) -> list[list[int]]:
    s = len(terms)
    if s < 1:
        raise SurgeryError("empty plumbing")
    mat = [[0] * s for _ in range(s)]
    for i, b in enumerate(terms):
        mat[i][i] = -int(b)
        if i + 1 < s:
            mat[i][i + 1] = mat[i + 1][i] = 1
    return mat


def leading_minors(mat: Sequence[Sequence[int]]) -> list[Fraction]:
    """All leading principal minors from one Bareiss pass; its pivots are the minors."""
    a = [list(row) for row in mat]
    k = len(a)
    minors, prev = [], 1
    for i in range(k):
        if a[i][i] == 0:
            # zero pivot: finish with pivoting determinants
            return minors + [_det([row[: j + 1] for row in mat[: j + 1]]) for j in range(i, k)]
        minors.append(Fraction(a[i][i]))
        for r in range(i + 1, k):
            for col in range(i + 1, k):
                num = a[r][col] * a[i][i] - a[r][i] * a[i][col]
                a[r][col] = num // prev if isinstance(num, int) and isinstance(prev, int) else Fraction(num) / prev
        prev = a[i][i]
    return minors


def _det(mat) -> Fraction:
    a = [[Fraction(x) for x in row] for row in mat]
    k = len(a)
    det = Fraction(1)
    for i in range(k):
        piv = next((r for r in range(i, k) if a[r][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            a[i], a[piv] = a[piv], a[i]
            det = -det
        det *= a[i][i]
        for r in range(i + 1, k):
            f = a[r][i] / a[i][i]
            for col in range(i, k):
                a[r][col] -= f * a[i][col]
    return det


def is_negative_definite(mat: Sequence[Sequence[int]]) -> bool:
    """Sylvester's criterion: the k-th leading minor has sign ``(-1)^k``."""
    k = len(mat)
    if any(len(row) != k for row in mat):
        raise SurgeryError("matrix must be square")
    if any(mat[i][j] != mat[j][i] for i in range(k) for j in range(k)):
        raise SurgeryError("matrix must be symmetric")
    return all((m < 0) if i % 2 == 0 else (m > 0) for i, m in enumerate(leading_minors(mat)))


def chain_terms(n: int) -> list[int]:
    return [n + 2] + [2] * (n - 2)


def chain_signature(n: int) -> int:
    """Signature of the ``C_n`` plumbing; negative definite so it is ``-rank``."""
    mat = plumbing_matrix(chain_terms(n))
    if not is_negative_definite(mat):
        raise AssertionError(f"C_{n} plumbing is not negative definite")
    return -len(mat)


def invariant_deltas(n: int) -> dict:
    """Changes in (chi, sigma, b2, c1^2) when ``C_n`` is replaced by a rational ball.

    ``chi(C_n) = n`` (a chain of ``n-1`` spheres), ``chi(B_n) = 1`` and ``B_n``
    carries no second homology.
    """
    terms = chain_terms(n)
    if neg_cf_eval(terms) != (n * n, n - 1):
        raise AssertionError(f"boundary of C_{n} is not L({n * n}, {n - 1})")
    rank = len(terms)
    d_chi = 1 - (1 + rank)
    d_sigma = -chain_signature(n)
    return {"euler": d_chi, "signature": d_sigma, "b2": -rank, "c1_squared": 2 * d_chi + 3 * d_sigma}


def blowdown_report(m: ManifoldInvariants, c: ChainSpec, b: Optional[BallSpec] = None) -> BlowdownReport:
    if c.n == 2:
        if b is not None:
            raise SurgeryError("n = 2 takes no ball (conic sum)")
        fit = FitReport(True, embedding_phi1(c), None, None, "conic sum")
    else:
        b = choose_ball(c) if b is None else b
        fit = ball_feasible(c, b)
        if not fit.feasible:
            raise InfeasibleBallError(f"ball does not fit: {fit.reason}")
    delta = blowdown_volume_delta(c)
    d = invariant_deltas(c.n)
    new = ManifoldInvariants(
        euler=m.euler + d["euler"],
        signature=m.signature + d["signature"],
        b2=m.b2 + d["b2"],
        volume=m.volume + delta,
    )
    return BlowdownReport(fit, delta, new, d)
