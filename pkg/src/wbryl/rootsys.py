"""Root system data for A_l and its untwisted affinization.

Finite weights live in the zero-sum hyperplane of Q^(l+1) (epsilon
coordinates), with the form normalized so roots have square length 2.
Affine weights carry a level and a delta coefficient on top of that.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Optional

from .exactcore import CycScalar

Vector = tuple[Fraction, ...]


def _vec(values) -> Vector:
    return tuple(Fraction(v) for v in values)


class RootSystemA:
    """The root system of sl_{l+1} in epsilon coordinates."""

    def __init__(self, rank: int):
        if rank < 1:
            raise ValueError("rank must be at least 1")
        self.rank = rank
        self.h = rank + 1  # Coxeter number

    def zero(self) -> Vector:
        return _vec([0] * self.h)

    def epsilon_diff(self, i: int, j: int) -> Vector:
        v = [Fraction(0)] * self.h
        v[i] += 1
        v[j] -= 1
        return tuple(v)

    def simple_root(self, i: int) -> Vector:
        """alpha_i = eps_{i-1} - eps_i for i = 1..rank."""
        if not 1 <= i <= self.rank:
            raise ValueError("simple root index out of range")
        return self.epsilon_diff(i - 1, i)

    def simple_roots(self) -> list[Vector]:
        return [self.simple_root(i) for i in range(1, self.rank + 1)]

    def positive_roots(self) -> list[Vector]:
        return [
            self.epsilon_diff(i, j)
            for i in range(self.h)
            for j in range(i + 1, self.h)
        ]

    def all_roots(self) -> list[Vector]:
        pos = self.positive_roots()
        return pos + [self.negate(a) for a in pos]

    def theta(self) -> Vector:
        """Highest root eps_0 - eps_l."""
        return self.epsilon_diff(0, self.h - 1)

    def rho(self) -> Vector:
        """Half sum of positive roots; pairs to 1 with every simple coroot."""
        return _vec([Fraction(self.h - 1 - 2 * i, 2) for i in range(self.h)])

    def fundamental_weight(self, i: int) -> Vector:
        """Dual basis to the simple roots inside the hyperplane."""
        return _vec(
            [1 - Fraction(i, self.h)] * i + [-Fraction(i, self.h)] * (self.h - i)
        )

    @staticmethod
    def inner(x: Vector, y: Vector) -> Fraction:
        return sum((a * b for a, b in zip(x, y)), Fraction(0))

    @staticmethod
    def add(x: Vector, y: Vector) -> Vector:
        return tuple(a + b for a, b in zip(x, y))

    @staticmethod
    def sub(x: Vector, y: Vector) -> Vector:
        return tuple(a - b for a, b in zip(x, y))

    @staticmethod
    def negate(x: Vector) -> Vector:
        return tuple(-a for a in x)

    @staticmethod
    def scale(c, x: Vector) -> Vector:
        c = Fraction(c)
        return tuple(c * a for a in x)

    def simple_coords(self, x: Vector) -> tuple[Fraction, ...]:
        """Coordinates of a zero-sum vector in the simple root basis."""
        if sum(x):
            raise ValueError("vector is not in the zero-sum hyperplane")
        acc = Fraction(0)
        coords = []
        for i in range(self.rank):
            acc += x[i]
            coords.append(acc)
        return tuple(coords)

    def from_simple_coords(self, coords) -> Vector:
        out = self.zero()
        for i, c in enumerate(coords, start=1):
            if c:
                out = self.add(out, self.scale(c, self.simple_root(i)))
        return out

    def reflect(self, alpha: Vector, x: Vector) -> Vector:
        c = self.inner(x, alpha)  # <alpha, alpha> = 2, so coroot pairing = c
        return self.sub(x, self.scale(c, alpha))


def exponents_and_degrees(rank: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Exponents 1..l and degrees 2..l+1 of sl_{l+1}."""
    exps = tuple(range(1, rank + 1))
    return exps, tuple(e + 1 for e in exps)


def affine_exponents_up_to(rank: int, n: int) -> list[int]:
    """Positive integers <= n avoiding multiples of the Coxeter number."""
    h = rank + 1
    return [j for j in range(1, n + 1) if j % h != 0]


# ---------------------------------------------------------------------------
# affine weights
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineWeight:
    """(finite part, level, delta coefficient) with componentwise addition."""

    finite: Vector
    level: Fraction
    delta: Fraction

    def __add__(self, other: "AffineWeight") -> "AffineWeight":
        return AffineWeight(
            RootSystemA.add(self.finite, other.finite),
            self.level + other.level,
            self.delta + other.delta,
        )

    def __sub__(self, other: "AffineWeight") -> "AffineWeight":
        return AffineWeight(
            RootSystemA.sub(self.finite, other.finite),
            self.level - other.level,
            self.delta - other.delta,
        )

    def scaled(self, c) -> "AffineWeight":
        c = Fraction(c)
        return AffineWeight(RootSystemA.scale(c, self.finite), c * self.level, c * self.delta)


def lambda0(rs: RootSystemA) -> AffineWeight:
    return AffineWeight(rs.zero(), Fraction(1), Fraction(0))


def delta_weight(rs: RootSystemA) -> AffineWeight:
    return AffineWeight(rs.zero(), Fraction(0), Fraction(1))


def affine_rho(rs: RootSystemA) -> AffineWeight:
    """The weight pairing to 1 with every simple coroot; delta part pinned to 0.

    Only differences of the form w(lam + rho) - (mu + rho) are ever used, so
    any delta shift of rho cancels; we fix the zero-delta representative.
    """
    return AffineWeight(rs.rho(), Fraction(rs.h), Fraction(0))


def simple_reflection(rs: RootSystemA, i: int, w: AffineWeight) -> AffineWeight:
    """Affine simple reflection s_i (i = 0..rank) on weights."""
    if i == 0:
        theta = rs.theta()
        c = w.level - rs.inner(w.finite, theta)
        # alpha_0 = delta - theta
        return AffineWeight(
            RootSystemA.add(w.finite, rs.scale(c, theta)),
            w.level,
            w.delta - c,
        )
    alpha = rs.simple_root(i)
    return AffineWeight(rs.reflect(alpha, w.finite), w.level, w.delta)


def pairing_with_simple_coroot(rs: RootSystemA, w: AffineWeight, i: int) -> Fraction:
    if i == 0:
        return w.level - rs.inner(w.finite, rs.theta())
    return rs.inner(w.finite, rs.simple_root(i))


def is_dominant(rs: RootSystemA, w: AffineWeight) -> bool:
    return all(
        pairing_with_simple_coroot(rs, w, i) >= 0 for i in range(rs.rank + 1)
    )


# ---------------------------------------------------------------------------
# affine roots
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineRoot:
    """A positive affine root: finite part (None for imaginary) + n*delta."""

    finite: Optional[Vector]
    n: int
    mult: int

    @property
    def is_imaginary(self) -> bool:
        return self.finite is None


def positive_affine_roots_up_to(rs: RootSystemA, n_max: int) -> list[AffineRoot]:
    """All positive affine roots of delta-height <= n_max.

    Ordered by increasing delta-height, then lexicographically by finite part,
    with the imaginary root last within each height.
    """
    if n_max < 0:
        raise ValueError("height bound must be nonnegative")
    out: list[AffineRoot] = []
    pos = sorted(rs.positive_roots())
    alls = sorted(rs.all_roots())
    for a in pos:
        out.append(AffineRoot(a, 0, 1))
    for n in range(1, n_max + 1):
        for a in alls:
            out.append(AffineRoot(a, n, 1))
        out.append(AffineRoot(None, n, rs.rank))
    return out


# ---------------------------------------------------------------------------
# affine Weyl orbit enumeration
# ---------------------------------------------------------------------------

class WeylTerm(NamedTuple):
    word: tuple[int, ...]
    sign: int
    weight: AffineWeight  # w(lam + rho)


def affine_weyl_elements_for(
    rs: RootSystemA,
    lam: AffineWeight,
    mu: AffineWeight,
    rho: AffineWeight | None = None,
    reflection_order: tuple[int, ...] | None = None,
) -> list[WeylTerm]:
    """Weyl elements w with w(lam+rho) - (mu+rho) in the positive root cone.

    Breadth-first search from lam+rho along length-increasing simple
    reflections.  A branch is cut once the delta-height spent, i.e. the delta
    drop from lam+rho to w(lam+rho), exceeds the budget of (lam+rho)-(mu+rho);
    the drop never decreases along length-increasing edges (asserted), so the
    cut is sound.
    """
    if lam.level != mu.level:
        raise ValueError("weights must have equal level")
    if rho is None:
        rho = affine_rho(rs)
    if not (is_dominant(rs, lam) and is_dominant(rs, mu)):
        raise ValueError("weights must be dominant")
    start = lam + rho
    target = mu + rho
    budget = start.delta - target.delta
    if reflection_order is None:
        reflection_order = tuple(range(rs.rank + 1))

    results: list[WeylTerm] = []
    frontier: list[tuple[tuple[int, ...], AffineWeight]] = [((), start)]
    seen = {(start.finite, start.delta)}
    depth = 0
    while frontier:
        next_frontier: list[tuple[tuple[int, ...], AffineWeight]] = []
        for word, wt in frontier:
            if _in_positive_cone(rs, wt - target):
                results.append(WeylTerm(word, -1 if depth % 2 else 1, wt))
            for i in reflection_order:
                c = pairing_with_simple_coroot(rs, wt, i)
                if c <= 0:
                    continue  # not a length-increasing edge
                nxt = simple_reflection(rs, i, wt)
                assert start.delta - nxt.delta >= start.delta - wt.delta, (
                    "delta drop decreased along a length-increasing edge"
                )
                if start.delta - nxt.delta > budget:
                    continue
                key = (nxt.finite, nxt.delta)
                if key not in seen:
                    seen.add(key)
                    next_frontier.append((word + (i,), nxt))
        frontier = next_frontier
        depth += 1
    return results


def _in_positive_cone(rs: RootSystemA, beta: AffineWeight) -> bool:
    # beta = gamma + n*delta lies in Q_+ iff n >= 0 and every simple
    # coordinate of gamma is an integer >= -n (theta has all coordinates 1)
    if beta.level != 0:
        return False
    n = beta.delta
    if n < 0 or n.denominator != 1:
        return False
    for c in rs.simple_coords(beta.finite):
        if c.denominator != 1 or c < -n:
            return False
    return True


# ---------------------------------------------------------------------------
# the Coxeter element and its eigenbasis
# ---------------------------------------------------------------------------

class CoxeterAction:
    """Cyclic coordinate shift on epsilon coordinates, a Coxeter element.

    Restricted to the zero-sum hyperplane it has order h and no nonzero fixed
    vector.  Its eigenvectors over Q(zeta_h) are discrete Fourier vectors
    v_m with sigma(v_m) = zeta^m v_m and <v_m, v_m'> = h when m + m' = 0 mod h.
    """

    def __init__(self, rs: RootSystemA):
        self.rs = rs
        self.h = rs.h

    def apply(self, x: Vector) -> Vector:
        return x[-1:] + x[:-1]

    def apply_power(self, x: Vector, k: int) -> Vector:
        k %= self.h
        return x[-k:] + x[:-k] if k else x

    def eigenvector(self, m: int) -> tuple[CycScalar, ...]:
        """v_m with coordinates zeta^(-m*i); zero-sum for m != 0 mod h."""
        h = self.h
        return tuple(CycScalar.zeta(h, (-m * i) % h) for i in range(h))

    @lru_cache(maxsize=None)
    def _eigen_cache(self, m: int) -> tuple[CycScalar, ...]:
        return self.eigenvector(m)

    def pairing(self, m1: int, m2: int) -> CycScalar:
        h = self.h
        if (m1 + m2) % h == 0:
            return CycScalar.rational(h, h)
        return CycScalar.zero(h)

    def decompose(self, x: Vector) -> dict[int, CycScalar]:
        """Write a rational zero-sum vector as sum of c_m v_m, m = 1..rank."""
        if sum(x):
            raise ValueError("vector is not in the zero-sum hyperplane")
        h = self.h
        out: dict[int, CycScalar] = {}
        for m in range(1, self.rs.rank + 1):
            partner = self._eigen_cache((h - m) % h)
            c = CycScalar.zero(h)
            for xi, vi in zip(x, partner):
                if xi:
                    c = c + vi * xi
            c = c * Fraction(1, h)
            if c:
                out[m] = c
        return out
