"""The Brylinski filtration on the W-span of the twisted highest weight vector.

The filtration subspace of level d is the joint kernel of all products of
d+1 positive twisted Heisenberg modes.  On an energy slice only operator
words of total energy up to the slice energy matter; the rest annihilate the
slice outright.  All kernels are exact, over the cyclotomic field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .exactcore import CycScalar, colored_partitions, product_series
from .linalg import Subspace, nullspace, rref
from .rootsys import RootSystemA, exponents_and_degrees
from .twistedfock import (
    TwMono,
    TwistedEngine,
    TwistedState,
    mode_eigenlabel,
    pbw_vector,
    pbw_words,
)


def legal_magnitudes(h: int, budget: Fraction) -> list[Fraction]:
    """Positive creation magnitudes up to the budget, fixed-point-free."""
    out = []
    s = 1
    while Fraction(s, h) <= budget:
        if s % h != 0:
            out.append(Fraction(s, h))
        s += 1
    return out


@lru_cache(maxsize=None)
def twisted_basis(h: int, numerator: int) -> tuple[TwMono, ...]:
    """Monomials of the twisted Fock space at energy numerator/h."""
    if numerator == 0:
        return ((),)
    out: list[TwMono] = []

    def rec(rem: int, max_part: int, acc: list[int]):
        if rem == 0:
            out.append(tuple(Fraction(s, h) for s in sorted(acc)))
            return
        for part in range(min(rem, max_part), 0, -1):
            if part % h == 0:
                continue
            rec(rem - part, part, acc + [part])

    rec(numerator, numerator, [])
    return tuple(sorted(out))


def twisted_slice_basis(h: int, energy: Fraction) -> tuple[TwMono, ...]:
    energy = Fraction(energy)
    numerator = energy * h
    if numerator.denominator != 1 or numerator < 0:
        return ()
    return twisted_basis(h, int(numerator))


def twisted_coords(state: TwistedState, basis: Sequence[TwMono]) -> list[CycScalar]:
    zero = CycScalar.zero(state.h)
    return [state.terms.get(mono, zero) for mono in basis]


def apply_positive_word(word: Sequence[Fraction], state: TwistedState) -> TwistedState:
    """Apply a product of positive twisted modes (order is immaterial)."""
    from .twistedfock import twisted_heis_mode

    for q in word:
        if not state:
            break
        m = mode_eigenlabel(state.h, Fraction(q))
        if m is None:
            raise ValueError(f"illegal positive mode {q}")
        state = twisted_heis_mode(m, Fraction(q), state)
    return state


def positive_mode_products(
    rank: int, length: int, budget: Fraction
) -> list[tuple[Fraction, ...]]:
    """Multisets of ``length`` positive legal modes with total energy <= budget."""
    if length < 0:
        raise ValueError("length must be nonnegative")
    h = rank + 1
    budget = Fraction(budget)
    out: list[tuple[Fraction, ...]] = []
    magnitudes = legal_magnitudes(h, budget)

    def rec(idx: int, left: int, spent: Fraction, acc: list[Fraction]):
        if left == 0:
            out.append(tuple(acc))
            return
        for i in range(idx, len(magnitudes)):
            q = magnitudes[i]
            if spent + q * left > budget:
                # magnitudes grow, so all later choices also overshoot
                break
            rec(i, left - 1, spent + q, acc + [q])

    rec(0, length, Fraction(0), [])
    return out


# ---------------------------------------------------------------------------
# energy slices of the W-span
# ---------------------------------------------------------------------------

@dataclass
class ZSlice:
    """PBW words of one integer energy with their twisted-module coordinates."""

    n: int
    words: list[tuple[tuple[int, int], ...]]
    states: list[TwistedState]
    basis: tuple[TwMono, ...]
    matrix: list[list[CycScalar]]  # rows = word states in monomial coordinates
    h: int

    @property
    def dim(self) -> int:
        return len(self.words)


def build_Z_slice(engine: TwistedEngine, gens, n: int) -> ZSlice:
    """Evaluate all PBW words of energy n and certify their independence.

    Raises if the states are dependent or their count differs from the
    colored partition number, either of which would falsify the desk-scale
    instance of the Verma-module statement.
    """
    rank = engine.rs.rank
    h = engine.h
    words = pbw_words(rank, n)
    expected = colored_partitions(rank, n)
    if len(words) != expected:
        raise ArithmeticError(
            f"word count {len(words)} differs from p_{rank}({n}) = {expected}"
        )
    states = [pbw_vector(engine, gens, w) for w in words]
    basis = twisted_slice_basis(h, Fraction(n))
    matrix = [twisted_coords(s, basis) for s in states]
    reduced, pivots = rref(matrix, len(basis))
    if len(pivots) != len(words):
        raise ArithmeticError(
            f"PBW states of energy {n} are linearly dependent "
            f"(rank {len(pivots)} < {len(words)})"
        )
    return ZSlice(n, words, states, basis, matrix, h)


def _word_constraint_matrix(
    slice_states: Sequence[TwistedState],
    word: Sequence[Fraction],
    h: int,
) -> list[list[CycScalar]]:
    images = [apply_positive_word(word, s) for s in slice_states]
    target_monos = sorted({m for img in images for m in img.terms})
    zero = CycScalar.zero(h)
    return [
        [img.terms.get(mono, zero) for img in images] for mono in target_monos
    ]


def brylinski_subspace(slice_: ZSlice, d: int, rank: int, budget_margin: int = 0) -> Subspace:
    """F^d of the slice, as coordinates in the span of the slice states.

    Operator words above the slice energy annihilate it outright, so the
    budget truncation is lossless; ``budget_margin`` widens it to let the
    tests assert that nothing changes.
    """
    h = slice_.h
    one = CycScalar.one(h)
    zero = CycScalar.zero(h)
    ncols = slice_.dim
    if d < 0:
        return Subspace([], ncols)
    constraints: list[list[CycScalar]] = []
    for word in positive_mode_products(rank, d + 1, Fraction(slice_.n + budget_margin)):
        constraints.extend(_word_constraint_matrix(slice_.states, word, h))
    if not constraints:
        return Subspace(
            [[one if i == j else zero for j in range(ncols)] for i in range(ncols)],
            ncols,
        )
    kernel = nullspace(constraints, ncols, one=one, zero=zero)
    return Subspace(kernel, ncols)


# ---------------------------------------------------------------------------
# the main verification report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiltrationCell:
    n: int
    d: int
    dim_filtration: int
    graded_dim: int
    expected_graded: int
    words_at_level: int
    words_up_to_level: int
    words_contained: bool
    subset_spans: bool

    @property
    def passed(self) -> bool:
        return (
            self.graded_dim == self.expected_graded
            and self.words_contained
            and self.subset_spans
        )


@dataclass
class FiltrationReport:
    rank: int
    n_max: int
    cells: list[FiltrationCell] = field(default_factory=list)
    slice_dims: dict[int, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(cell.passed for cell in self.cells)

    def failures(self) -> list[FiltrationCell]:
        return [c for c in self.cells if not c.passed]


def _word_filtration_level(word: Sequence[tuple[int, int]], degrees: Sequence[int]) -> int:
    return sum(degrees[p - 1] for p, _ in word)


def verify_main_theorem(
    engine: TwistedEngine,
    gens,
    n_max: int,
    d_max: int | None = None,
) -> FiltrationReport:
    """Check graded dimensions and PBW compatibility for all n <= n_max.

    For each energy n and filtration level d, the graded dimension must match
    the two-variable product coefficient, the PBW words of filtration weight
    at most d must lie in F^d, and their count must exhaust its dimension
    (which makes them a basis of F^d and the whole family compatible).
    """
    rank = engine.rs.rank
    h = engine.h
    _, degrees = exponents_and_degrees(rank)
    top = max(degrees)
    report = FiltrationReport(rank, n_max)

    t_hi = top * n_max if n_max else 1
    factors = [(dk, j, 1) for dk in degrees for j in range(1, n_max + 1)]
    series = product_series(factors, t_max=t_hi, q_max=n_max)

    for n in range(n_max + 1):
        slice_ = build_Z_slice(engine, gens, n)
        report.slice_dims[n] = slice_.dim
        levels = {w: _word_filtration_level(w, degrees) for w in slice_.words}
        d_top = top * n if d_max is None else min(d_max, top * n)
        prev_dim = 0
        prev_space: Subspace | None = None
        for d in range(0, d_top + 1):
            space = brylinski_subspace(slice_, d, rank)
            if prev_space is not None and not (prev_space <= space):
                raise ArithmeticError(f"filtration not increasing at (n={n}, d={d})")
            expected = series.coeff(d, n)
            if expected.denominator != 1:
                raise ArithmeticError("non-integer graded coefficient")
            unit_rows = {
                w: [
                    CycScalar.one(h) if j == i else CycScalar.zero(h)
                    for j in range(slice_.dim)
                ]
                for i, w in enumerate(slice_.words)
            }
            subset = [w for w in slice_.words if levels[w] <= d]
            contained = all(space.contains(unit_rows[w]) for w in subset)
            spans = len(subset) == space.dim
            report.cells.append(
                FiltrationCell(
                    n=n,
                    d=d,
                    dim_filtration=space.dim,
                    graded_dim=space.dim - prev_dim,
                    expected_graded=int(expected),
                    words_at_level=sum(1 for w in slice_.words if levels[w] == d),
                    words_up_to_level=len(subset),
                    words_contained=contained,
                    subset_spans=spans,
                )
            )
            prev_dim = space.dim
            prev_space = space
        if prev_dim != slice_.dim:
            raise ArithmeticError(f"filtration did not exhaust the slice at n={n}")
    return report


# ---------------------------------------------------------------------------
# filtration on full twisted-module slices, for the mode shift properties
# ---------------------------------------------------------------------------

def full_slice_filtration(engine: TwistedEngine, energy: Fraction, d: int) -> Subspace:
    """F^d of the whole twisted-module slice at the given (fractional) energy."""
    h = engine.h
    basis = twisted_slice_basis(h, energy)
    one = CycScalar.one(h)
    zero = CycScalar.zero(h)
    ncols = len(basis)
    if d < 0 or ncols == 0:
        return Subspace([], ncols)
    states = [TwistedState(h, {mono: one}) for mono in basis]
    constraints: list[list[CycScalar]] = []
    for word in positive_mode_products(engine.rs.rank, d + 1, Fraction(energy)):
        constraints.extend(_word_constraint_matrix(states, word, h))
    if not constraints:
        return Subspace(
            [[one if i == j else zero for j in range(ncols)] for i in range(ncols)],
            ncols,
        )
    kernel = nullspace(constraints, ncols, one=one, zero=zero)
    return Subspace(kernel, ncols)


def _subspace_states(engine: TwistedEngine, space: Subspace, energy: Fraction) -> list[TwistedState]:
    basis = twisted_slice_basis(engine.h, energy)
    return [
        TwistedState(engine.h, {m: c for m, c in zip(basis, row) if c})
        for row in space.rows
    ]


def check_heisenberg_mode_shifts(
    engine: TwistedEngine, energy_cap: Fraction, d_cap: int
) -> list[tuple[Fraction, int, Fraction, int, bool]]:
    """Positive modes lower the filtration level by one, negative raise it.

    Returns rows (slice energy, d, mode index, sign, ok) over all legal modes
    within the caps, verified on the computed full-slice subspaces.
    """
    from .twistedfock import twisted_heis_mode

    h = engine.h
    rows = []
    energies = [Fraction(s, h) for s in range(0, int(energy_cap * h) + 1)]
    for e in energies:
        if not twisted_slice_basis(h, e):
            continue
        for d in range(0, d_cap + 1):
            space = full_slice_filtration(engine, e, d)
            if space.dim == 0:
                continue
            states = _subspace_states(engine, space, e)
            for q in legal_magnitudes(h, e):
                target = full_slice_filtration(engine, e - q, d - 1)
                tbasis = twisted_slice_basis(h, e - q)
                ok = True
                for s in states:
                    image = twisted_heis_mode(mode_eigenlabel(h, q), q, s)
                    if image and not target.contains(twisted_coords(image, tbasis)):
                        ok = False
                rows.append((e, d, q, -1, ok))
            for q in legal_magnitudes(h, Fraction(energy_cap) - e):
                target = full_slice_filtration(engine, e + q, d + 1)
                tbasis = twisted_slice_basis(h, e + q)
                ok = True
                for s in states:
                    image = twisted_heis_mode(mode_eigenlabel(h, -q), -q, s)
                    if image and not target.contains(twisted_coords(image, tbasis)):
                        ok = False
                rows.append((e, d, q, +1, ok))
    return rows


def check_generator_mode_shifts(
    engine: TwistedEngine,
    gens,
    energy_cap: Fraction,
    d_cap: int,
    k_values: Iterable[Fraction],
) -> list[tuple[int, Fraction, Fraction, int, bool]]:
    """Generator modes raise the filtration level by at most their degree."""
    h = engine.h
    rows = []
    energies = [Fraction(s, h) for s in range(0, int(energy_cap * h) + 1)]
    for p in range(1, engine.rs.rank + 1):
        dp = gens.degree(p)
        state_p = gens.state(p)
        for e in energies:
            if not twisted_slice_basis(h, e):
                continue
            for d in range(0, d_cap + 1):
                space = full_slice_filtration(engine, e, d)
                if space.dim == 0:
                    continue
                states = _subspace_states(engine, space, e)
                for k in k_values:
                    k = Fraction(k)
                    target_e = e - k
                    if target_e < 0:
                        continue
                    target = full_slice_filtration(engine, target_e, d + dp)
                    tbasis = twisted_slice_basis(h, target_e)
                    ok = True
                    for s in states:
                        image = engine.mode_renumbered(state_p, k, s)
                        if image and not target.contains(twisted_coords(image, tbasis)):
                            ok = False
                    rows.append((p, e, k, d, ok))
    return rows
