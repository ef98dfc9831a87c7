"""The W-algebra of sl_{l+1} inside the Heisenberg vertex algebra.

The algebra is cut out as the joint kernel of the screening zero-modes of
all roots, degree by degree.  Free generators are selected deterministically
from the graded kernels, and the module provides the character utilities for
Verma and primitive highest weight modules.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .exactcore import QSeries, colored_partitions, partitions_with_min_parts
from .heisenberg import (
    FockState,
    conformal_vector,
    fock_basis,
    nth_product,
    screening_zero_mode,
    state_coords,
    virasoro_mode,
)
from .linalg import Subspace, mat_vec, nullspace, rref
from .rootsys import RootSystemA, Vector, exponents_and_degrees


@lru_cache(maxsize=None)
def _sorted_roots(rank: int) -> tuple[Vector, ...]:
    return tuple(sorted(RootSystemA(rank).all_roots()))


@lru_cache(maxsize=None)
def screening_matrix(rank: int, root_index: int, d: int) -> tuple[tuple[Fraction, ...], ...]:
    """Matrix of the screening zero-mode from weight d to weight d-1 states.

    Rows are indexed by the target monomial basis, columns by the source one.
    """
    rs = RootSystemA(rank)
    alpha = _sorted_roots(rank)[root_index]
    source = fock_basis(rank, d)
    target = fock_basis(rank, d - 1) if d >= 1 else ()
    columns = []
    for mono in source:
        state = FockState(rs, rs.zero(), {mono: Fraction(1)})
        image = screening_zero_mode(alpha, state)
        columns.append(state_coords(image, target))
    return tuple(
        tuple(columns[c][r] for c in range(len(source))) for r in range(len(target))
    )


def expected_walg_dim(rank: int, d: int) -> int:
    """Number of free-field PBW monomials of weight d.

    Words use modes at most -d_p for the degree-d_p generator, so this is the
    coefficient of q^d in prod_k prod_{n >= d_k} (1 - q^n)^(-1).
    """
    if d < 0:
        raise ValueError("weight must be nonnegative")
    _, degrees = exponents_and_degrees(rank)
    return partitions_with_min_parts(degrees, d)[d]


def walg_graded_basis(rs: RootSystemA, d: int) -> list[FockState]:
    """Canonical basis of the weight-d joint kernel of all screenings.

    The screening matrices on the Heisenberg algebra are rational, so the
    kernel is computed over Q with deterministic pivoting; the returned
    basis is the reduced echelon basis in the monomial coordinate order.
    """
    rank = rs.rank
    basis = fock_basis(rank, d)
    ncols = len(basis)
    if d == 0:
        return [FockState.vacuum(rs)]
    # intersect kernels one screening at a time; spaces shrink quickly
    kernel: list[list[Fraction]] | None = None
    for root_index in range(len(_sorted_roots(rank))):
        matrix = screening_matrix(rank, root_index, d)
        if kernel is None:
            kernel = nullspace(matrix, ncols)
            continue
        if not kernel:
            break
        images = [mat_vec(matrix, vec) for vec in kernel]
        constraint = [
            [images[j][r] for j in range(len(kernel))] for r in range(len(matrix))
        ]
        coeffs = nullspace(constraint, len(kernel))
        kernel = [
            [
                sum((x[j] * kernel[j][c] for j in range(len(kernel)) if x[j]), Fraction(0))
                for c in range(ncols)
            ]
            for x in coeffs
        ]
    assert kernel is not None
    reduced, _ = rref(kernel, ncols)
    return [
        FockState(rs, rs.zero(), {m: v for m, v in zip(basis, vec) if v})
        for vec in reduced
    ]


def screening_images_vanish(rs: RootSystemA, state: FockState) -> bool:
    return all(not screening_zero_mode(alpha, state) for alpha in rs.all_roots())


# ---------------------------------------------------------------------------
# generator selection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WGeneratorSet:
    """Chosen free generators of the W-algebra, one per degree 2..l+1."""

    rank: int
    degrees: tuple[int, ...]
    states: tuple[FockState, ...]

    def state(self, p: int) -> FockState:
        return self.states[p - 1]

    def degree(self, p: int) -> int:
        return self.degrees[p - 1]


def ff_basis_words(degrees: Sequence[int], weight: int) -> list[tuple[tuple[int, int], ...]]:
    """PBW words of total weight ``weight`` with modes k <= -d_p per letter.

    A word is ((p_1, k_1), ..., (p_r, k_r)) with p_1 >= ... >= p_r and, for
    equal p, ascending k.  Canonical enumeration order.
    """
    words: list[tuple[tuple[int, int], ...]] = []

    def rec(p: int, remaining: int, prefix: list[tuple[int, int]]):
        if p == 0:
            if remaining == 0:
                words.append(tuple(prefix))
            return
        min_part = degrees[p - 1]

        def partitions(rem: int, max_first: int, acc: list[int]):
            # nonincreasing parts >= min_part give ascending modes k = -part
            if rem == 0:
                rec(p - 1, remaining - sum(acc), prefix + [(p, -m) for m in acc])
                return
            for part in range(min(rem, max_first), min_part - 1, -1):
                partitions(rem - part, part, acc + [part])

        for used in range(0, remaining + 1):
            partitions(used, used, [])

    rec(len(degrees), weight, [])
    return sorted(set(words))


def evaluate_word(gens: WGeneratorSet, word: Iterable[tuple[int, int]], rs: RootSystemA) -> FockState:
    """Apply a PBW word to the vacuum using weight-renumbered modes."""
    state = FockState.vacuum(rs)
    for p, k in reversed(list(word)):
        gen = gens.state(p)
        state = nth_product(gen, k + gens.degree(p) - 1, state)
    return state


def choose_generators(rs: RootSystemA, check_up_to: int | None = None) -> WGeneratorSet:
    """Pick free generators by deterministic pivoting in the graded kernels.

    The degree-2 generator is pinned to the conformal vector.  Each later
    generator is the first canonical kernel basis vector outside the span of
    the words in the earlier generators.  Fails loudly if no such vector
    exists, which would contradict free generation.
    """
    rank = rs.rank
    _, degrees = exponents_and_degrees(rank)
    if check_up_to is None:
        check_up_to = degrees[-1]
    if check_up_to < degrees[-1]:
        raise ValueError("check degree must reach the largest generator degree")

    states: list[FockState] = []
    for p, d in enumerate(degrees, start=1):
        kernel = walg_graded_basis(rs, d)
        if p == 1:
            omega = conformal_vector(rank)
            space = Subspace([state_coords(v, fock_basis(rank, d)) for v in kernel], len(fock_basis(rank, d)))
            if not space.contains(state_coords(omega, fock_basis(rank, d))):
                raise ArithmeticError("conformal vector escaped the screening kernel")
            states.append(omega)
            continue
        partial = WGeneratorSet(rank, tuple(degrees[: p - 1]), tuple(states))
        words = ff_basis_words(degrees[: p - 1], d)
        basis = fock_basis(rank, d)
        span_vectors = [
            state_coords(evaluate_word(partial, w, rs), basis) for w in words
        ]
        decomposable = Subspace(span_vectors, len(basis))
        chosen = None
        for candidate in kernel:
            if not decomposable.contains(state_coords(candidate, basis)):
                chosen = candidate
                break
        if chosen is None:
            raise ArithmeticError(f"no new generator found at degree {d}")
        states.append(chosen)

    gens = WGeneratorSet(rank, degrees, tuple(states))
    for p, d in enumerate(degrees, start=1):
        state = gens.state(p)
        if state.oscillator_weight() != d:
            raise ArithmeticError("generator is not weight homogeneous")
        if not screening_images_vanish(rs, state):
            raise ArithmeticError("generator escapes a screening kernel")
        if virasoro_mode(0, state) != state.scaled(d):
            raise ArithmeticError("generator is not an L_0 eigenvector")
    return gens


def verify_pbw_span(rs: RootSystemA, gens: WGeneratorSet, d_max: int) -> list[tuple[int, int, int, bool]]:
    """Degreewise check that PBW words of the generators span the kernel.

    Returns rows (d, kernel dim, word count, ok) where ok requires the words
    to be independent, to lie in the kernel, and to match the expected count.
    """
    rows = []
    for d in range(d_max + 1):
        kernel_dim = len(walg_graded_basis(rs, d))
        words = ff_basis_words(gens.degrees, d)
        basis = fock_basis(rs.rank, d)
        vectors = [state_coords(evaluate_word(gens, w, rs), basis) for w in words]
        space = Subspace(vectors, len(basis))
        in_kernel = all(
            screening_images_vanish(rs, evaluate_word(gens, w, rs)) for w in words
        )
        ok = (
            space.dim == len(words)
            and len(words) == expected_walg_dim(rs.rank, d)
            and kernel_dim == len(words)
            and in_kernel
        )
        rows.append((d, kernel_dim, len(words), ok))
    return rows


# ---------------------------------------------------------------------------
# characters
# ---------------------------------------------------------------------------

def verma_character(rs: RootSystemA, lam: Vector, order: int) -> QSeries:
    """q^(|lam+rho|^2/2) / phi(q)^rank up to the given relative order."""
    shifted = rs.add(lam, rs.rho())
    offset = rs.inner(shifted, shifted) / 2
    return QSeries(offset, tuple(colored_partitions(rs.rank, n) for n in range(order + 1)))


def primitive_character(s: Sequence[Fraction], order: int) -> QSeries:
    """Character of the primitive module with the given exponents.

    Requires all pairwise differences to be non-integral.
    """
    s = [Fraction(x) for x in s]
    n = len(s)
    for i in range(n):
        for j in range(i + 1, n):
            if (s[i] - s[j]).denominator == 1:
                raise ValueError("exponents must differ by non-integers")
    offset = sum((x * (x - 1) / 2 for x in s), Fraction(0))
    return QSeries(offset, tuple(colored_partitions(n, k) for k in range(order + 1)))
