"""Lusztig t-analogs of weight multiplicities for affine type A.

The t-analog of Kostant's partition function counts decompositions of a
positive-cone element into positive affine roots, weighted by t per part,
with the imaginary root carrying its full multiplicity.  The Lusztig
polynomial is the signed sum of these values over the affine Weyl elements
produced by :func:`wbryl.rootsys.affine_weyl_elements_for`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .exactcore import TPoly, colored_partitions, product_series
from .rootsys import (
    AffineWeight,
    RootSystemA,
    affine_rho,
    affine_weyl_elements_for,
    delta_weight,
    exponents_and_degrees,
    lambda0,
    positive_affine_roots_up_to,
)

# a cone element is (simple-root coordinates of the finite part, delta height)
ConeElement = tuple[tuple[int, ...], int]


def cone_element(rs: RootSystemA, beta: AffineWeight) -> ConeElement | None:
    """Express a level-zero weight in root coordinates, or None if not integral."""
    if beta.level != 0:
        return None
    n = beta.delta
    if n.denominator != 1:
        return None
    coords = []
    for c in rs.simple_coords(beta.finite):
        if c.denominator != 1:
            return None
        coords.append(int(c))
    return tuple(coords), int(n)


def in_positive_cone(element: ConeElement) -> bool:
    coords, n = element
    return n >= 0 and all(c >= -n for c in coords)


class TKostantTable:
    """Exact table of t-Kostant values over a bounded coordinate box.

    The box is chosen from the queries: any sub-multiset of a decomposition of
    a query beta keeps each simple coordinate within [-n(beta), c_i(beta) +
    n(beta)], so convolving inside the box loses nothing.
    """

    def __init__(self, rs: RootSystemA, queries: Iterable[ConeElement]):
        queries = [q for q in queries if in_positive_cone(q)]
        self.rs = rs
        self.n_max = max((q[1] for q in queries), default=0)
        lo = -self.n_max
        his = [self.n_max] * rs.rank
        for coords, n in queries:
            for i, c in enumerate(coords):
                his[i] = max(his[i], c + n)
        self.lo = lo
        self.his = tuple(his)
        self.table: dict[ConeElement, TPoly] = {}
        self._build()

    def _in_box(self, coords: tuple[int, ...], n: int) -> bool:
        if not 0 <= n <= self.n_max:
            return False
        return all(self.lo <= c <= hi for c, hi in zip(coords, self.his))

    def _cell_order(self) -> list[ConeElement]:
        # every positive root strictly increases (delta height, total height),
        # so this order lets one forward pass realize a geometric factor
        import itertools

        ranges = [range(self.lo, hi + 1) for hi in self.his]
        cells = [
            (coords, n)
            for n in range(self.n_max + 1)
            for coords in itertools.product(*ranges)
        ]
        cells.sort(key=lambda cell: (cell[1], sum(cell[0]), cell[0]))
        return cells

    def _build(self) -> None:
        table: dict[ConeElement, TPoly] = {((0,) * self.rs.rank, 0): TPoly.one()}
        order = self._cell_order()
        roots = positive_affine_roots_up_to(self.rs, self.n_max)
        for root in roots:
            if root.is_imaginary:
                step = (0,) * self.rs.rank
            else:
                step = tuple(int(c) for c in self.rs.simple_coords(root.finite))
            for _ in range(root.mult):
                for coords, n in order:
                    val = table.get((coords, n))
                    if not val:
                        continue
                    nc = tuple(a + b for a, b in zip(coords, step))
                    nn = n + root.n
                    if self._in_box(nc, nn):
                        bumped = val.shift(1)
                        cur = table.get((nc, nn))
                        table[(nc, nn)] = cur + bumped if cur else bumped
        self.table = table

    def value(self, element: ConeElement) -> TPoly:
        if not in_positive_cone(element):
            return TPoly.zero()
        if not self._in_box(*element):
            raise KeyError("query outside the table box")
        return self.table.get(element, TPoly.zero())


def t_kostant(rs: RootSystemA, element: ConeElement, n_max: int | None = None) -> TPoly:
    """t-analog of the Kostant partition function at one cone element.

    Elements outside the nonnegative root cone give the zero polynomial.
    """
    if not in_positive_cone(element):
        return TPoly.zero()
    if n_max is not None and element[1] > n_max:
        raise ValueError("delta height exceeds the stated bound")
    return TKostantTable(rs, [element]).value(element)


def lusztig_poly(
    rs: RootSystemA,
    lam: AffineWeight,
    mu: AffineWeight,
    rho: AffineWeight | None = None,
) -> TPoly:
    """Lusztig t-analog of the multiplicity of mu in the module of weight lam."""
    if rho is None:
        rho = affine_rho(rs)
    terms = affine_weyl_elements_for(rs, lam, mu, rho=rho)
    target = mu + rho
    queries = []
    for term in terms:
        q = cone_element(rs, term.weight - target)
        if q is None:
            raise ArithmeticError("Weyl term difference is not in the root lattice")
        queries.append(q)
    table = TKostantTable(rs, queries)
    out = TPoly.zero()
    for term, q in zip(terms, queries):
        val = table.value(q)
        out = out + (val if term.sign > 0 else -val)
    return out


@dataclass(frozen=True)
class IdentityRow:
    n: int
    lusztig: TPoly
    product: TPoly
    matches: bool


def level1_product_coefficients(rank: int, n_max: int) -> list[TPoly]:
    """q-slices of prod_k prod_{j>=1} (1 - t^{d_k} q^j)^(-1) for n <= n_max."""
    _, degrees = exponents_and_degrees(rank)
    t_max = max(degrees) * n_max if n_max else 1
    factors = [(d, j, 1) for d in degrees for j in range(1, n_max + 1)]
    series = product_series(factors, t_max=t_max, q_max=n_max)
    return [series.q_coefficient(n) for n in range(n_max + 1)]


def verify_level1_identity(rank: int, n_max: int) -> list[IdentityRow]:
    """Compare the Weyl-sum route with the product expansion for n <= n_max."""
    rs = RootSystemA(rank)
    lam = lambda0(rs)
    delta = delta_weight(rs)
    product = level1_product_coefficients(rank, n_max)
    rows = []
    for n in range(n_max + 1):
        mu = lam - delta.scaled(n)
        lhs = lusztig_poly(rs, lam, mu)
        rows.append(IdentityRow(n, lhs, product[n], lhs == product[n]))
    return rows


def lusztig_at_one_checks(rank: int, n_max: int) -> bool:
    """Specialization t = 1 must count colored partitions."""
    rs = RootSystemA(rank)
    lam = lambda0(rs)
    delta = delta_weight(rs)
    for n in range(n_max + 1):
        poly = lusztig_poly(rs, lam, lam - delta.scaled(n))
        if poly.at_one() != colored_partitions(rank, n):
            return False
    return True
