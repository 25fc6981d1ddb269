"""Exact lattice arithmetic: 2-vectors, GL(2,Z) affine maps and negative
continued fractions.

Every quantity here is either a Python ``int`` or a ``fractions.Fraction``;
nothing is ever rounded.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Iterator, Sequence, Union

Number = Union[int, Fraction]


class LatticeError(ValueError):
    """Raised on invalid lattice input (non-coprime pairs, bad matrices...)."""


def as_rational(value) -> Fraction:
    """Coerce ``int``/``Fraction``/``"p/q"`` to ``Fraction``; floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        num, sep, den = text.partition("/")
        try:
            if sep:
                return Fraction(int(num), int(den))
            return Fraction(int(num))
        except (ValueError, ZeroDivisionError):
            raise LatticeError(f"not a rational string: {value!r}") from None
    raise TypeError(f"cannot treat {type(value).__name__} as an exact rational")


def format_rational(value: Number) -> str:
    """Serialize as ``"p/q"`` in lowest terms, ``"p"`` when the denominator is 1."""
    return str(Fraction(value))


@dataclass(frozen=True)
class Vec:
    """A 2-vector with exact (``int`` or ``Fraction``) components."""

    x: Number
    y: Number

    def __iter__(self) -> Iterator[Number]:
        yield self.x
        yield self.y

    def __add__(self, other: "Vec") -> "Vec":
        return Vec(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec") -> "Vec":
        return Vec(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "Vec":
        return Vec(-self.x, -self.y)

    def __mul__(self, s: Number) -> "Vec":
        return Vec(self.x * s, self.y * s)

    __rmul__ = __mul__

    def cross(self, other: "Vec") -> Number:
        return self.x * other.y - self.y * other.x

    def dot(self, other: "Vec") -> Number:
        return self.x * other.x + self.y * other.y

    def left_normal(self) -> "Vec":
        """Rotate by +90 degrees; for interior-left boundaries this is the inward normal."""
        return Vec(-self.y, self.x)

    def is_lattice(self) -> bool:
        return Fraction(self.x).denominator == 1 and Fraction(self.y).denominator == 1

    def is_primitive(self) -> bool:
        if not self.is_lattice():
            return False
        x, y = int(self.x), int(self.y)
        return (x, y) != (0, 0) and gcd(x, y) == 1

    def exact(self) -> "Vec":
        """Normalize components: integral values become ``int``, others ``Fraction``."""
        def norm(v):
            f = Fraction(v)
            return f.numerator if f.denominator == 1 else f
        return Vec(norm(self.x), norm(self.y))

    def to_json(self) -> list:
        return [format_rational(self.x), format_rational(self.y)]


ORIGIN = Vec(0, 0)

Matrix = tuple[tuple[int, int], tuple[int, int]]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def mat_det(a: Matrix) -> int:
    return a[0][0] * a[1][1] - a[0][1] * a[1][0]


def mat_apply(a: Matrix, v: Vec) -> Vec:
    return Vec(a[0][0] * v.x + a[0][1] * v.y, a[1][0] * v.x + a[1][1] * v.y)


IDENTITY: Matrix = ((1, 0), (0, 1))


@dataclass(frozen=True)
class UnimodularMap:
    """Affine map ``p -> B p + r`` with ``B`` in GL(2,Z) and rational ``r``.

    This is the p-component of the symplectomorphism
    ``(p, q) -> (B p + r, B^{-T} q)`` of ``T*T^2``.
    """

    B: Matrix = IDENTITY
    r: Vec = ORIGIN

    def __post_init__(self):
        B = tuple(tuple(int(c) for c in row) for row in self.B)
        if len(B) != 2 or any(len(row) != 2 for row in B):
            raise LatticeError("B must be a 2x2 integer matrix")
        if any(Fraction(c) != int(c) for row in self.B for c in row):
            raise LatticeError("B must have integer entries")
        if mat_det(B) not in (1, -1):
            raise LatticeError(f"det(B) = {mat_det(B)}, expected +-1")
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "r", Vec(as_rational(self.r.x), as_rational(self.r.y)).exact())

    @classmethod
    def translation(cls, dx: Number, dy: Number) -> "UnimodularMap":
        return cls(IDENTITY, Vec(dx, dy))

    @property
    def det(self) -> int:
        return mat_det(self.B)

    def __call__(self, p: Vec) -> Vec:
        return (mat_apply(self.B, p) + self.r).exact()

    def linear(self, v: Vec) -> Vec:
        return mat_apply(self.B, v)

    def __matmul__(self, other: "UnimodularMap") -> "UnimodularMap":
        """Composition ``self o other``."""
        return UnimodularMap(mat_mul(self.B, other.B), mat_apply(self.B, other.r) + self.r)

    def inverse(self) -> "UnimodularMap":
        (a, b), (c, d) = self.B
        det = self.det
        inv = ((d * det, -b * det), (-c * det, a * det))
        return UnimodularMap(inv, -mat_apply(inv, self.r))

    def to_json(self) -> dict:
        return {"B": [list(row) for row in self.B], "r": self.r.to_json()}


# --- negative continued fractions -------------------------------------------


def neg_cf_expand(n: int, m: int) -> list[int]:
    """Expand ``n/m`` as ``b1 - 1/(b2 - 1/(... - 1/bs))`` with every ``bi >= 2``.

    >>> neg_cf_expand(16, 3)
    [6, 2, 2]
    """
    n, m = int(n), int(m)
    if n <= 0 or m <= 0:
        raise LatticeError("n and m must be positive")
    if m >= n:
        raise LatticeError(f"need m < n, got {n}/{m}")
    if gcd(n, m) != 1:
        raise LatticeError(f"{n} and {m} are not coprime")
    terms = []
    while m:
        b = -(-n // m)  # ceil
        terms.append(b)
        n, m = m, b * m - n
    return terms


def neg_cf_eval(terms: Sequence[int]) -> tuple[int, int]:
    """Value of ``[b1, ..., bs]`` as a coprime pair ``(n, m)``."""
    if not terms:
        raise LatticeError("empty expansion")
    if any(int(b) != b or b < 2 for b in terms):
        raise LatticeError(f"all terms must be integers >= 2: {list(terms)}")
    num, den = int(terms[-1]), 1
    for b in reversed(terms[:-1]):
        num, den = int(b) * num - den, num
    return num, den


def chain_convergents(n: int, count: int) -> tuple[list[tuple[int, int]], list[Vec]]:
    """Convergents ``(n_i, m_i)`` of ``[n+2, 2, ..., 2]`` and the directions ``r_i``.

    Returns ``(pairs, directions)`` where ``pairs[i-1] = (n_i, m_i)`` is the
    value of the length-``i`` expansion and ``directions[i-1] = r_i =
    (n_{i-1}, m_{i-1})`` with ``(n_0, m_0) = (1, 0)``, for ``i = 1..count``.
    """
    if n < 2:
        raise LatticeError("chain parameter n must be >= 2")
    if not 1 <= count <= n:
        raise LatticeError(f"count must lie in [1, {n}], got {count}")
    pairs = []
    for i in range(1, count + 1):
        value = neg_cf_eval([n + 2] + [2] * (i - 1))
        closed = ((n + 1) * i + 1, i)
        if value != closed:
            raise AssertionError(f"convergent {i} of C_{n}: evaluated {value}, closed form {closed}")
        pairs.append(value)
    directions = [Vec(1, 0)] + [Vec(*p) for p in pairs[:-1]]
    return pairs, directions


def general_convergents(terms: Sequence[int]) -> list[Vec]:
    """Directions ``r_1..r_{s+1}`` for the plumbing ``[b1, ..., bs]``.

    ``r_1 = (1, 0)`` and ``r_{i+1}`` is the value of ``[b1, ..., bi]``.
    """
    if not terms:
        raise LatticeError("empty expansion")
    return [Vec(1, 0)] + [Vec(*neg_cf_eval(terms[:i])) for i in range(1, len(terms) + 1)]


def rotation_matrix(k: int) -> Matrix:
    return ((k, -1), (1, 0))


def gluing_map(n: int, i: int, areas: Sequence[Number]) -> UnimodularMap:
    """The map ``p -> T_i p + t_i`` carrying the standard ``N_2`` model onto the
    ``i``-th sphere of the chain, with ``T_i = R_{n+2} R_2^{i-2}``."""
    if n < 3:
        raise LatticeError("gluing maps exist only for n >= 3")
    if not 2 <= i <= n - 1:
        raise LatticeError(f"index i={i} outside [2, {n - 1}]")
    areas = [as_rational(a) for a in areas]
    if len(areas) < i - 1:
        raise LatticeError(f"need at least {i - 1} areas")
    if any(a <= 0 for a in areas[: i - 1]):
        raise LatticeError("areas must be positive")
    T = rotation_matrix(n + 2)
    for _ in range(i - 2):
        T = mat_mul(T, rotation_matrix(2))
    _, r = chain_convergents(n, n - 1)
    t = ORIGIN
    for j in range(i - 1):
        t = t + r[j] * areas[j]
    return UnimodularMap(T, t)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def normalizing_matrix(u: Vec) -> Matrix:
    """A determinant-1 integer matrix sending the primitive vector ``u`` to ``(0, 1)``."""
    if not u.is_primitive():
        raise LatticeError(f"{tuple(u)} is not primitive")
    a, b = int(u.x), int(u.y)
    g, s, t = _xgcd(a, b)
    if g < 0:
        s, t = -s, -t
    return ((b, -a), (s, t))


def canonical_lens(n: int, m: int) -> tuple[int, int]:
    """Canonical representative of ``L(n, m)`` under ``m <-> m^{-1} mod n``."""
    if n == 1:
        return (1, 0)
    m %= n
    return (n, min(m, pow(m, -1, n)))


def lens_from_corner(u: Vec, v: Vec) -> tuple[int, int]:
    """Lens space type of the corner spanned by edge directions ``u`` and ``v``.

    ``(1, 0)`` means a smooth (Delzant) corner.
    """
    if not (u.is_primitive() and v.is_primitive()):
        raise LatticeError("corner directions must be primitive")
    A = normalizing_matrix(u)
    w = mat_apply(A, v)
    n = abs(int(w.x))
    if n == 0:
        raise LatticeError("corner directions are parallel")
    return canonical_lens(n, int(w.y) % n)
