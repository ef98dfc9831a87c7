"""The Heisenberg vertex algebra of the Cartan and its oscillator modules.

States are sparse sums of creation monomials over the simple-root basis with
exact rational coefficients.  Mode monomials are kept canonically sorted by
(basis index, mode), so sparse keys are unique.  All products are computed by
structural recursion with exact weight bounds; nothing is truncated.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .exactcore import QSeries, colored_partitions, generalized_binomial
from .rootsys import RootSystemA, Vector

# a mode monomial: sorted tuple of (simple root index, negative mode)
Mono = tuple[tuple[int, int], ...]

EMPTY: Mono = ()


def mono_weight(mono: Mono) -> int:
    return sum(-n for _, n in mono)


def _sorted_with(mono: Mono, factor: tuple[int, int]) -> Mono:
    return tuple(sorted(mono + (factor,)))


class FockState:
    """Element of the oscillator module with highest weight ``label``."""

    __slots__ = ("rs", "label", "terms")

    def __init__(self, rs: RootSystemA, label: Vector, terms: dict[Mono, Fraction] | None = None):
        self.rs = rs
        self.label = label
        self.terms: dict[Mono, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    self.terms[mono] = Fraction(c)

    # -- constructors --------------------------------------------------------

    @classmethod
    def vacuum(cls, rs: RootSystemA) -> "FockState":
        return cls(rs, rs.zero(), {EMPTY: Fraction(1)})

    @classmethod
    def highest_weight(cls, rs: RootSystemA, label: Vector) -> "FockState":
        return cls(rs, label, {EMPTY: Fraction(1)})

    @classmethod
    def zero(cls, rs: RootSystemA, label: Vector | None = None) -> "FockState":
        return cls(rs, label if label is not None else rs.zero(), {})

    # -- vector space structure ----------------------------------------------

    def _compatible(self, other: "FockState") -> None:
        if self.rs is not other.rs and self.rs.rank != other.rs.rank:
            raise ValueError("states over different root systems")
        if self.label != other.label:
            raise ValueError("states in different oscillator modules")

    def __add__(self, other: "FockState") -> "FockState":
        self._compatible(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono, Fraction(0)) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return FockState(self.rs, self.label, out)

    def __sub__(self, other: "FockState") -> "FockState":
        return self + other.scaled(-1)

    def scaled(self, c) -> "FockState":
        c = Fraction(c)
        if not c:
            return FockState.zero(self.rs, self.label)
        return FockState(self.rs, self.label, {m: c * v for m, v in self.terms.items()})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FockState):
            return NotImplemented
        return self.label == other.label and self.terms == other.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for mono in sorted(self.terms):
            coeff = self.terms[mono]
            ops = " ".join(f"a{i}({n})" for i, n in mono) or "|.>"
            bits.append(f"{coeff}*{ops}")
        return " + ".join(bits)

    # -- grading ---------------------------------------------------------------

    def oscillator_weight(self) -> int:
        """Common creation weight of all monomials; requires homogeneity."""
        weights = {mono_weight(m) for m in self.terms}
        if not weights:
            return 0
        if len(weights) > 1:
            raise ValueError("state is not weight homogeneous")
        return weights.pop()

    def is_homogeneous(self) -> bool:
        return len({mono_weight(m) for m in self.terms}) <= 1

    def conformal_weight(self) -> Fraction:
        return self.rs.inner(self.label, self.label) / 2 + self.oscillator_weight()


# ---------------------------------------------------------------------------
# mode actions
# ---------------------------------------------------------------------------

def heis_mode(hvec: Vector, n: int, state: FockState) -> FockState:
    """Action of the current mode h t^n on an oscillator module.

    Negative modes multiply, positive modes contract one factor at a time
    with bracket [h1 t^j, h2 t^k] = j delta_{j+k,0} <h1,h2>, and the zero
    mode is the scalar <h, label>.
    """
    rs = state.rs
    out: dict[Mono, Fraction] = {}
    if n == 0:
        c = rs.inner(hvec, state.label)
        return state.scaled(c)
    if n < 0:
        coords = rs.simple_coords(hvec)
        for mono, val in state.terms.items():
            for i, ci in enumerate(coords, start=1):
                if ci:
                    key = _sorted_with(mono, (i, n))
                    s = out.get(key, Fraction(0)) + ci * val
                    if s:
                        out[key] = s
                    else:
                        out.pop(key, None)
        return FockState(rs, state.label, out)
    for mono, val in state.terms.items():
        seen = set()
        for idx, (i, mode) in enumerate(mono):
            if mode != -n or (i, mode) in seen:
                continue
            seen.add((i, mode))
            count = sum(1 for f in mono if f == (i, mode))
            coeff = val * count * n * rs.inner(hvec, rs.simple_root(i))
            if coeff:
                reduced = list(mono)
                reduced.pop(idx)
                key = tuple(reduced)
                s = out.get(key, Fraction(0)) + coeff
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
    return FockState(rs, state.label, out)


def _simple_mode(rs: RootSystemA, i: int, n: int, state: FockState) -> FockState:
    return heis_mode(rs.simple_root(i), n, state)


# cache of monomial-on-monomial products keyed by structure, not identity
_NTH_CACHE: dict[tuple, dict[Mono, Fraction]] = {}


def nth_product(a: FockState, n: int, b: FockState) -> FockState:
    """The n-th vertex algebra product a_(n) b for a in the vacuum module."""
    if any(a.label):
        raise ValueError("left factor must be a vacuum-module state")
    rs = b.rs
    out = FockState.zero(rs, b.label)
    for amono, ac in a.terms.items():
        for bmono, bc in b.terms.items():
            terms = _nth_product_mono(rs, amono, n, bmono, b.label)
            if terms:
                out = out + FockState(rs, b.label, {m: ac * bc * v for m, v in terms.items()})
    return out


def _nth_product_mono(
    rs: RootSystemA, amono: Mono, n: int, bmono: Mono, blabel: Vector
) -> dict[Mono, Fraction]:
    key = (rs.rank, amono, n, bmono, blabel)
    hit = _NTH_CACHE.get(key)
    if hit is not None:
        return hit
    if not amono:
        result = {bmono: Fraction(1)} if n == -1 else {}
        _NTH_CACHE[key] = result
        return result

    (i1, n1), rest = amono[0], amono[1:]
    b = FockState(rs, blabel, {bmono: Fraction(1)})
    acc = FockState.zero(rs, blabel)
    osc_b = mono_weight(bmono)
    wt_rest = mono_weight(rest)

    # first group: x_(n1-j) (rest_(n+j) b); rest_(s) vanishes above the
    # weight bound s > wt(rest) + osc(b) - 1
    j_max = wt_rest + osc_b - 1 - n
    for j in range(0, j_max + 1):
        inner = _nth_product_mono(rs, rest, n + j, bmono, blabel)
        if not inner:
            continue
        coeff = generalized_binomial(n1, j) * (-1) ** j
        if not coeff:
            continue
        inner_state = FockState(rs, blabel, inner)
        acc = acc + _simple_mode(rs, i1, n1 - j, inner_state).scaled(coeff)

    # second group: rest_(n+n1-j) (x_(j) b); x_(j) b vanishes for j > osc(b)
    sign = -1 if n1 % 2 == 0 else 1  # the factor -(-1)^n1
    for j in range(0, osc_b + 1):
        xb = _simple_mode(rs, i1, j, b)
        if not xb:
            continue
        coeff = generalized_binomial(n1, j) * (-1) ** j * sign
        if not coeff:
            continue
        for xmono, xval in xb.terms.items():
            inner = _nth_product_mono(rs, rest, n + n1 - j, xmono, blabel)
            for m, v in inner.items():
                acc = acc + FockState(rs, blabel, {m: coeff * xval * v})

    _NTH_CACHE[key] = dict(acc.terms)
    return _NTH_CACHE[key]


# ---------------------------------------------------------------------------
# the conformal vector and Virasoro modes
# ---------------------------------------------------------------------------

def _gram_schmidt_pairs(rs: RootSystemA) -> list[tuple[Vector, Vector]]:
    basis: list[Vector] = []
    for alpha in rs.simple_roots():
        u = alpha
        for v in basis:
            c = rs.inner(u, v) / rs.inner(v, v)
            u = rs.sub(u, rs.scale(c, v))
        basis.append(u)
    return [(u, rs.scale(1 / rs.inner(u, u), u)) for u in basis]


@lru_cache(maxsize=None)
def conformal_vector(rank: int, dual_choice: str = "simple") -> FockState:
    """(1/2) sum_i a^i_(-1) b^i_(-1) |0> for dual bases of the Cartan.

    ``dual_choice`` picks the dual-basis pair; the resulting state is the
    same for every choice (asserted in the tests).
    """
    rs = RootSystemA(rank)
    if dual_choice == "simple":
        pairs = [(rs.simple_root(i), rs.fundamental_weight(i)) for i in range(1, rank + 1)]
    elif dual_choice == "orthogonal":
        pairs = _gram_schmidt_pairs(rs)
    else:
        raise ValueError(f"unknown dual basis choice {dual_choice!r}")
    acc = FockState.zero(rs)
    for a, b in pairs:
        state = heis_mode(a, -1, heis_mode(b, -1, FockState.vacuum(rs)))
        acc = acc + state.scaled(Fraction(1, 2))
    return acc


def virasoro_mode(n: int, state: FockState) -> FockState:
    """L_n acting on an oscillator module, via the conformal vector."""
    omega = conformal_vector(state.rs.rank)
    return nth_product(omega, n + 1, state)


# ---------------------------------------------------------------------------
# screening zero-modes
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _creation_exponential(rank: int, alpha_key: tuple, w: int) -> dict[Mono, Fraction]:
    """Creation part of the screening vertex operator at z-power w.

    Satisfies w E_w = sum_{k=1..w} alpha_(-k) E_{w-k}, the derivative
    recurrence of exp(sum_k z^k alpha_(-k)/k) applied to the empty monomial.
    """
    rs = RootSystemA(rank)
    alpha = tuple(Fraction(num, den) for num, den in alpha_key)
    if w == 0:
        return {EMPTY: Fraction(1)}
    acc = FockState.zero(rs)
    for k in range(1, w + 1):
        prev = FockState(rs, rs.zero(), _creation_exponential(rank, alpha_key, w - k))
        acc = acc + heis_mode(alpha, -k, prev)
    return {m: v / w for m, v in acc.terms.items()}


def _alpha_key(alpha: Vector) -> tuple:
    return tuple((c.numerator, c.denominator) for c in alpha)


def screening_mode(alpha: Vector, n: int, state: FockState) -> FockState:
    """Mode n of the lattice vertex operator for alpha on a Fock module.

    Maps the module with label beta to the one with label beta + alpha; the
    label shift is taken cocycle-free.  A term creating weight a and
    annihilating weight b carries z to the power <alpha,beta> + a - b, so
    the mode picks out a = b - n - 1 - <alpha,beta> and only finitely many
    terms of the two exponentials contribute at any fixed weight.
    """
    rs = state.rs
    beta = state.label
    shift = rs.inner(alpha, beta)
    new_label = rs.add(beta, alpha)
    out = FockState.zero(rs, new_label)
    if shift.denominator != 1:
        return out  # fractional z-powers never hit an integer mode
    for mono, val in state.terms.items():
        d = mono_weight(mono)
        current = FockState(rs, beta, {mono: val})
        # annihilation layers S_b, built by b S_b = -sum_k alpha_(k) S_{b-k}
        layers = [current]
        for b in range(1, d + 1):
            acc = FockState.zero(rs, beta)
            for k in range(1, b + 1):
                acc = acc + heis_mode(alpha, k, layers[b - k])
            layers.append(acc.scaled(Fraction(-1, b)))
        for b in range(0, d + 1):
            a = b - n - 1 - int(shift)
            if a < 0 or not layers[b]:
                continue
            creation = _creation_exponential(rs.rank, _alpha_key(alpha), a)
            for cmono, cval in creation.items():
                for smono, sval in layers[b].terms.items():
                    key = tuple(sorted(cmono + smono))
                    s = out.terms.get(key, Fraction(0)) + cval * sval
                    if s:
                        out.terms[key] = s
                    else:
                        out.terms.pop(key, None)
    return out


def screening_zero_mode(alpha: Vector, state: FockState) -> FockState:
    """Zero mode of the lattice vertex operator; its joint kernels cut out W."""
    return screening_mode(alpha, 0, state)


# ---------------------------------------------------------------------------
# basis enumeration and characters
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def fock_basis(rank: int, weight: int) -> tuple[Mono, ...]:
    """All creation monomials of the given weight, canonically ordered."""
    if weight == 0:
        return (EMPTY,)
    out: list[Mono] = []

    def rec(remaining: int, last: tuple[int, int], prefix: list[tuple[int, int]]):
        if remaining == 0:
            out.append(tuple(sorted(prefix)))
            return
        for part in range(remaining, 0, -1):
            for color in range(rank, 0, -1):
                item = (part, color)
                if item > last:
                    continue
                rec(remaining - part, item, prefix + [(color, -part)])

    rec(weight, (weight + 1, rank + 1), [])
    return tuple(sorted(out))


def state_coords(state: FockState, basis: Iterable[Mono]) -> list[Fraction]:
    return [state.terms.get(m, Fraction(0)) for m in basis]


def oscillator_character(rs: RootSystemA, label: Vector, order: int) -> QSeries:
    """q^(|lambda|^2/2) / phi(q)^rank up to the given relative order."""
    offset = rs.inner(label, label) / 2
    coeffs = tuple(colored_partitions(rs.rank, n) for n in range(order + 1))
    return QSeries(offset, coeffs)
