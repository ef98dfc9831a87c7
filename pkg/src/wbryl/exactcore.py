"""Exact scalar and series arithmetic.

Everything in this module is exact: rationals are ``fractions.Fraction``,
cyclotomic numbers are represented modulo the cyclotomic polynomial, and
power series carry explicit truncation orders.  No floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction]


# ---------------------------------------------------------------------------
# binomials and partition counts
# ---------------------------------------------------------------------------

def generalized_binomial(x: Rational, k: int) -> Fraction:
    """Binomial coefficient x(x-1)...(x-k+1)/k! with rational upper argument."""
    if k < 0:
        raise ValueError("lower argument must be nonnegative")
    num = Fraction(1)
    for j in range(k):
        num *= Fraction(x) - j
    den = 1
    for j in range(2, k + 1):
        den *= j
    return num / den


@lru_cache(maxsize=None)
def _colored_partition_table(colors: int, n_max: int) -> tuple[int, ...]:
    # coefficients of prod_{j>=1} (1-q^j)^(-colors) up to q^n_max
    counts = [0] * (n_max + 1)
    counts[0] = 1
    for _ in range(colors):
        for part in range(1, n_max + 1):
            for n in range(part, n_max + 1):
                counts[n] += counts[n - part]
    return tuple(counts)


def colored_partitions(colors: int, n: int) -> int:
    """Number of partitions of n with parts in the given number of colors."""
    if colors < 1:
        raise ValueError("need at least one color")
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _colored_partition_table(colors, n)[n]


def partitions_with_min_parts(min_parts: Sequence[int], n_max: int) -> tuple[int, ...]:
    """Coefficients of prod_k prod_{n >= min_parts[k]} (1-q^n)^(-1) up to q^n_max."""
    counts = [0] * (n_max + 1)
    counts[0] = 1
    for lo in min_parts:
        for part in range(lo, n_max + 1):
            for n in range(part, n_max + 1):
                counts[n] += counts[n - part]
    return tuple(counts)


# ---------------------------------------------------------------------------
# dense integer polynomials in t
# ---------------------------------------------------------------------------

class TPoly:
    """Polynomial in t with integer coefficients, stored densely."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls) -> "TPoly":
        return cls()

    @classmethod
    def one(cls) -> "TPoly":
        return cls((1,))

    @classmethod
    def t_power(cls, k: int) -> "TPoly":
        return cls((0,) * k + (1,))

    def coeff(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "TPoly") -> "TPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return TPoly(self.coeff(k) + other.coeff(k) for k in range(n))

    def __sub__(self, other: "TPoly") -> "TPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return TPoly(self.coeff(k) - other.coeff(k) for k in range(n))

    def __neg__(self) -> "TPoly":
        return TPoly(-c for c in self.coeffs)

    def __mul__(self, other: "TPoly") -> "TPoly":
        if not self.coeffs or not other.coeffs:
            return TPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return TPoly(out)

    def scale(self, c: int) -> "TPoly":
        return TPoly(c * a for a in self.coeffs)

    def shift(self, k: int) -> "TPoly":
        """Multiply by t^k."""
        if not self.coeffs:
            return self
        return TPoly((0,) * k + self.coeffs)

    def at_one(self) -> int:
        return sum(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                head = "" if c == 1 else ("-" if c == -1 else f"{c}*")
                parts.append(f"{head}t" if k == 1 else f"{head}t^{k}")
        return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# truncated two-variable series in (t, q)
# ---------------------------------------------------------------------------

class SeriesTQ:
    """Truncated power series in t and q with exact rational coefficients.

    All operations discard degrees above the truncation orders; every stored
    coefficient below them is exact.
    """

    __slots__ = ("t_max", "q_max", "coeffs")

    def __init__(self, t_max: int, q_max: int, coeffs: dict | None = None):
        if t_max < 0 or q_max < 0:
            raise ValueError("truncation orders must be nonnegative")
        self.t_max = t_max
        self.q_max = q_max
        self.coeffs: dict[tuple[int, int], Fraction] = {}
        if coeffs:
            for (i, j), c in coeffs.items():
                if 0 <= i <= t_max and 0 <= j <= q_max and c:
                    self.coeffs[(i, j)] = Fraction(c)

    @classmethod
    def one(cls, t_max: int, q_max: int) -> "SeriesTQ":
        return cls(t_max, q_max, {(0, 0): Fraction(1)})

    def coeff(self, i: int, j: int) -> Fraction:
        return self.coeffs.get((i, j), Fraction(0))

    def q_coefficient(self, n: int) -> TPoly:
        """Coefficient of q^n as a polynomial in t (must have integer entries)."""
        out = [0] * (self.t_max + 1)
        for (i, j), c in self.coeffs.items():
            if j == n:
                if c.denominator != 1:
                    raise ValueError("non-integer coefficient in q-slice")
                out[i] = c.numerator
        return TPoly(out)

    def __add__(self, other: "SeriesTQ") -> "SeriesTQ":
        t_max = min(self.t_max, other.t_max)
        q_max = min(self.q_max, other.q_max)
        out = SeriesTQ(t_max, q_max)
        for (i, j), c in self.coeffs.items():
            if i <= t_max and j <= q_max:
                out.coeffs[(i, j)] = c
        for (i, j), c in other.coeffs.items():
            if i <= t_max and j <= q_max:
                s = out.coeffs.get((i, j), Fraction(0)) + c
                if s:
                    out.coeffs[(i, j)] = s
                else:
                    out.coeffs.pop((i, j), None)
        return out

    def __mul__(self, other: "SeriesTQ") -> "SeriesTQ":
        t_max = min(self.t_max, other.t_max)
        q_max = min(self.q_max, other.q_max)
        out = SeriesTQ(t_max, q_max)
        acc = out.coeffs
        for (i1, j1), c1 in self.coeffs.items():
            if i1 > t_max or j1 > q_max:
                continue
            for (i2, j2), c2 in other.coeffs.items():
                i, j = i1 + i2, j1 + j2
                if i <= t_max and j <= q_max:
                    acc[(i, j)] = acc.get((i, j), Fraction(0)) + c1 * c2
        for key in [k for k, v in acc.items() if not v]:
            del acc[key]
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SeriesTQ):
            return NotImplemented
        t_max = min(self.t_max, other.t_max)
        q_max = min(self.q_max, other.q_max)
        keys = set(self.coeffs) | set(other.coeffs)
        return all(
            self.coeff(i, j) == other.coeff(i, j)
            for (i, j) in keys
            if i <= t_max and j <= q_max
        )

    def __repr__(self) -> str:
        return f"SeriesTQ(t_max={self.t_max}, q_max={self.q_max}, {len(self.coeffs)} terms)"


def product_series(
    factors: Iterable[tuple[int, int, int]], t_max: int, q_max: int
) -> SeriesTQ:
    """Truncated expansion of prod (1 - t^a q^b)^(-m) over (a, b, m) factors.

    A factor with m < 0 multiplies by (1 - t^a q^b)^|m| instead.  Factors with
    a == b == 0 are rejected since the constant term would not be invertible.
    """
    out = SeriesTQ.one(t_max, q_max)
    for a, b, mult in factors:
        if a == 0 and b == 0:
            raise ValueError("factor (1 - t^0 q^0) has no invertible expansion")
        if a < 0 or b < 0:
            raise ValueError("factor degrees must be nonnegative")
        if a > t_max and b > q_max:
            continue
        for _ in range(abs(mult)):
            if mult > 0:
                # geometric factor: sweep cells in increasing (q, t) order so
                # each cell is final before it feeds the next multiple
                for j in range(q_max + 1):
                    j2 = j + b
                    if j2 > q_max:
                        break
                    for i in range(t_max + 1):
                        i2 = i + a
                        if i2 > t_max:
                            break
                        c = out.coeffs.get((i, j))
                        if c:
                            out.coeffs[(i2, j2)] = out.coeffs.get((i2, j2), Fraction(0)) + c
            else:
                updates = {}
                for (i, j), c in out.coeffs.items():
                    i2, j2 = i + a, j + b
                    if i2 <= t_max and j2 <= q_max:
                        updates[(i2, j2)] = updates.get((i2, j2), Fraction(0)) - c
                for key, c in updates.items():
                    s = out.coeffs.get(key, Fraction(0)) + c
                    if s:
                        out.coeffs[key] = s
                    else:
                        out.coeffs.pop(key, None)
    return out


# ---------------------------------------------------------------------------
# q-series with a rational leading exponent
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QSeries:
    """q^offset times an integer power series, truncated after ``coeffs``."""

    offset: Fraction
    coeffs: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __repr__(self) -> str:
        return f"q^({self.offset}) * ({list(self.coeffs)} + O(q^{len(self.coeffs)}))"


# ---------------------------------------------------------------------------
# cyclotomic numbers
# ---------------------------------------------------------------------------

def _poly_div_exact(num: list[int], den: list[int]) -> list[int]:
    # exact division of integer polynomials, den monic up to sign
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        if c % lead != 0:
            raise ArithmeticError("division not exact")
        q = c // lead
        out[k] = q
        if q:
            for i, d in enumerate(den):
                num[k + i] -= q * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("division not exact")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(h: int) -> tuple[int, ...]:
    """Coefficients (ascending) of the h-th cyclotomic polynomial."""
    if h < 1:
        raise ValueError("order must be positive")
    if h == 1:
        return (-1, 1)
    poly = [-1] + [0] * (h - 1) + [1]
    for d in range(1, h):
        if h % d == 0:
            poly = _poly_div_exact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _zeta_power_table(h: int) -> tuple[tuple[Fraction, ...], ...]:
    # x^j reduced mod Phi_h for j = 0..h-1 (valid since Phi_h divides x^h - 1)
    phi = cyclotomic_polynomial(h)
    deg = len(phi) - 1
    rows: list[tuple[Fraction, ...]] = []
    cur = [Fraction(0)] * deg
    cur[0] = Fraction(1)
    for _ in range(h):
        rows.append(tuple(cur))
        # multiply by x, reduce the top coefficient using x^deg = -(low part)
        top = cur[-1]
        cur = [Fraction(0)] + cur[:-1]
        if top:
            for i in range(deg):
                cur[i] -= top * phi[i]
    return tuple(rows)


def _coerce_coeffs(h: int, value) -> tuple[Fraction, ...]:
    deg = len(cyclotomic_polynomial(h)) - 1
    coeffs = [Fraction(0)] * deg
    coeffs[0] = Fraction(value)
    return tuple(coeffs)


class CycScalar:
    """Element of Q(zeta_h) represented in the power basis mod Phi_h.

    Zero testing is a plain coefficient check, which the exact kernel
    computations rely on.  Values are immutable.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable[Rational]):
        deg = len(cyclotomic_polynomial(order)) - 1
        cs = tuple(Fraction(c) for c in coeffs)
        if len(cs) != deg:
            raise ValueError(f"expected {deg} coefficients for order {order}")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", cs)

    def __setattr__(self, *args):
        raise AttributeError("CycScalar is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "CycScalar":
        return cls(order, [0] * (len(cyclotomic_polynomial(order)) - 1))

    @classmethod
    def one(cls, order: int) -> "CycScalar":
        return cls.rational(order, 1)

    @classmethod
    def rational(cls, order: int, value: Rational) -> "CycScalar":
        return cls(order, _coerce_coeffs(order, value))

    @classmethod
    def zeta(cls, order: int, power: int = 1) -> "CycScalar":
        return cls(order, _zeta_power_table(order)[power % order])

    # -- ring structure ----------------------------------------------------

    def _check(self, other: "CycScalar") -> None:
        if self.order != other.order:
            raise ValueError("mixed cyclotomic orders")

    def _wrap(self, other) -> "CycScalar":
        if isinstance(other, CycScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return CycScalar.rational(self.order, other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other) -> "CycScalar":
        other = self._wrap(other)
        if other is NotImplemented:
            return NotImplemented
        self._check(other)
        return CycScalar(self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> "CycScalar":
        return CycScalar(self.order, [-a for a in self.coeffs])

    def __sub__(self, other) -> "CycScalar":
        other = self._wrap(other)
        if other is NotImplemented:
            return NotImplemented
        self._check(other)
        return CycScalar(self.order, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other) -> "CycScalar":
        return (-self) + other

    def __mul__(self, other) -> "CycScalar":
        other = self._wrap(other)
        if other is NotImplemented:
            return NotImplemented
        self._check(other)
        deg = len(self.coeffs)
        conv = [Fraction(0)] * (2 * deg - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        conv[i + j] += a * b
        table = _zeta_power_table(self.order)
        out = list(conv[:deg])
        for j in range(deg, len(conv)):
            c = conv[j]
            if c:
                row = table[j % self.order]
                for i in range(deg):
                    out[i] += c * row[i]
        return CycScalar(self.order, out)

    __rmul__ = __mul__

    def inverse(self) -> "CycScalar":
        if not self:
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        phi = [Fraction(c) for c in cyclotomic_polynomial(self.order)]
        # extended Euclid over Q[x] for gcd(self, Phi_h) = 1
        r0, r1 = phi, list(self.coeffs)
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while any(r1):
            q, rem = _frac_poly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _frac_poly_sub(s0, _frac_poly_mul(q, s1))
        # r0 is a nonzero constant gcd
        const = next(c for c in r0 if c)
        inv = [c / const for c in s0]
        deg = len(self.coeffs)
        # reduce degree overflow (can only come from the Bezout lift)
        table = _zeta_power_table(self.order)
        out = list((inv + [Fraction(0)] * deg)[:deg])
        for j in range(deg, len(inv)):
            c = inv[j]
            if c:
                row = table[j % self.order]
                for i in range(deg):
                    out[i] += c * row[i]
        return CycScalar(self.order, out)

    def __truediv__(self, other) -> "CycScalar":
        other = self._wrap(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "CycScalar":
        return self._wrap(other) * self.inverse()

    def __pow__(self, k: int) -> "CycScalar":
        if k < 0:
            return self.inverse() ** (-k)
        out = CycScalar.one(self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- field automorphisms ----------------------------------------------

    def galois(self, k: int) -> "CycScalar":
        """Apply the automorphism zeta -> zeta^k (k coprime to the order)."""
        import math

        if math.gcd(k, self.order) != 1:
            raise ValueError("exponent must be coprime to the order")
        table = _zeta_power_table(self.order)
        deg = len(self.coeffs)
        out = [Fraction(0)] * deg
        for i, a in enumerate(self.coeffs):
            if a:
                row = table[(k * i) % self.order]
                for j in range(deg):
                    out[j] += a * row[j]
        return CycScalar(self.order, out)

    def conj(self) -> "CycScalar":
        """Complex conjugation zeta -> zeta^(h-1)."""
        return self.galois(self.order - 1)

    def as_rational(self) -> Fraction:
        if any(self.coeffs[1:]):
            raise ValueError("not a rational number")
        return self.coeffs[0]

    # -- comparisons -------------------------------------------------------

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CycScalar.rational(self.order, other)
        if not isinstance(other, CycScalar):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.order, self.coeffs))

    def __repr__(self) -> str:
        return f"Cyc{self.order}{list(self.coeffs)}"


def _frac_poly_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    b = list(b)
    while b and not b[-1]:
        b.pop()
    if not b:
        raise ZeroDivisionError
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b):
        c = a[-1] / b[-1]
        k = len(a) - len(b)
        q[k] = c
        for i, bc in enumerate(b):
            a[k + i] -= c * bc
        while a and not a[-1]:
            a.pop()
    return q, a


def _frac_poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _frac_poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]
