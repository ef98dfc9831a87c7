import itertools
import random
from fractions import Fraction

import pytest

from wbryl.exactcore import colored_partitions, generalized_binomial
from wbryl.heisenberg import (
    screening_mode,
    EMPTY,
    FockState,
    conformal_vector,
    fock_basis,
    heis_mode,
    mono_weight,
    nth_product,
    oscillator_character,
    screening_zero_mode,
    state_coords,
    virasoro_mode,
)
from wbryl.linalg import rank as mat_rank
from wbryl.rootsys import RootSystemA


def test_modes_on_highest_weight_vectors():
    rs = RootSystemA(2)
    vac = FockState.vacuum(rs)
    alpha = rs.simple_root(1)
    for n in range(0, 4):
        assert not heis_mode(alpha, n, vac)
    lam = rs.rho()
    hw = FockState.highest_weight(rs, lam)
    assert heis_mode(alpha, 0, hw) == hw.scaled(rs.inner(alpha, lam))


def test_single_bracket():
    rs = RootSystemA(2)
    vac = FockState.vacuum(rs)
    for h1, h2 in itertools.product(rs.simple_roots(), repeat=2):
        created = heis_mode(h2, -1, vac)
        back = heis_mode(h1, 1, created)
        assert back == vac.scaled(rs.inner(h1, h2))


def test_modes_commute_at_distinct_levels():
    rs = RootSystemA(1)
    vac = FockState.vacuum(rs)
    a = rs.simple_root(1)
    one_way = heis_mode(a, -2, heis_mode(a, -1, vac))
    other = heis_mode(a, -1, heis_mode(a, -2, vac))
    assert one_way == other


def test_nth_product_vacuum_axioms():
    rs = RootSystemA(2)
    vac = FockState.vacuum(rs)
    b = heis_mode(rs.simple_root(1), -2, heis_mode(rs.simple_root(2), -1, vac))
    for n in range(-3, 3):
        expect = b if n == -1 else FockState.zero(rs)
        assert nth_product(vac, n, b) == expect


def test_nth_product_generator_is_mode():
    rs = RootSystemA(2)
    vac = FockState.vacuum(rs)
    for i in (1, 2):
        gen = heis_mode(rs.simple_root(i), -1, vac)
        b = heis_mode(rs.simple_root(1), -3, heis_mode(rs.simple_root(2), -1, vac))
        for n in range(-3, 4):
            assert nth_product(gen, n, b) == heis_mode(rs.simple_root(i), n, b)


def test_nth_product_pairing():
    rs = RootSystemA(2)
    vac = FockState.vacuum(rs)
    for i, j in itertools.product((1, 2), repeat=2):
        a = heis_mode(rs.simple_root(i), -1, vac)
        b = heis_mode(rs.simple_root(j), -1, vac)
        prod = nth_product(a, 1, b)
        assert prod == vac.scaled(rs.inner(rs.simple_root(i), rs.simple_root(j)))


def _random_state(rs, rng, max_weight=3):
    vac = FockState.vacuum(rs)
    state = FockState.zero(rs)
    for _ in range(rng.randint(1, 3)):
        cur = vac
        total = 0
        while total < max_weight and rng.random() < 0.8:
            n = -rng.randint(1, max_weight - total)
            i = rng.randint(1, rs.rank)
            cur = heis_mode(rs.simple_root(i), n, cur)
            total += -n
        state = state + cur.scaled(Fraction(rng.randint(-3, 3), rng.randint(1, 2)))
    return state


def test_nth_product_vanishing_bound():
    rs = RootSystemA(2)
    rng = random.Random(13)
    for _ in range(10):
        a = _random_state(rs, rng)
        b = _random_state(rs, rng)
        bound = 3 + 3  # max weights used above
        for n in range(bound, bound + 3):
            assert not nth_product(a, n, b)


def test_untwisted_borcherds_identity_sampled():
    # sum_j (-1)^j C(n,j) [a_(m+n-j)(b_(k+j)c) - (-1)^n b_(k+n-j)(a_(m+j)c)]
    #   = sum_j C(m,j) (a_(n+j) b)_(k+m-j) c
    rs = RootSystemA(1)
    vac = FockState.vacuum(rs)
    al = rs.simple_root(1)
    a = heis_mode(al, -1, vac)
    b = heis_mode(al, -1, heis_mode(al, -1, vac))
    c = heis_mode(al, -2, vac)
    for m, n, k in itertools.product((-2, -1, 0, 1, 2), repeat=3):
        lhs = FockState.zero(rs)
        for j in range(0, 24):
            coeff = generalized_binomial(n, j) * (-1) ** j
            if coeff:
                t1 = nth_product(a, m + n - j, nth_product(b, k + j, c))
                t2 = nth_product(b, k + n - j, nth_product(a, m + j, c))
                sgn = 1 if n % 2 == 0 else -1
                lhs = lhs + (t1 - t2.scaled(sgn)).scaled(coeff)
        rhs = FockState.zero(rs)
        for j in range(0, 24):
            coeff = generalized_binomial(m, j)
            if coeff:
                rhs = rhs + nth_product(nth_product(a, n + j, b), k + m - j, c).scaled(coeff)
        assert lhs == rhs, (m, n, k)


def test_conformal_vector_dual_basis_independent():
    for rank_ in (1, 2, 3):
        assert conformal_vector(rank_, "simple") == conformal_vector(rank_, "orthogonal")
        omega = conformal_vector(rank_)
        assert omega.oscillator_weight() == 2


def test_virasoro_on_highest_weight():
    rs = RootSystemA(2)
    lam = rs.scale(Fraction(1, 3), rs.rho())
    hw = FockState.highest_weight(rs, lam)
    expected = rs.inner(lam, lam) / 2
    assert virasoro_mode(0, hw) == hw.scaled(expected)
    for n in (1, 2, 3):
        assert not virasoro_mode(n, hw)


def test_virasoro_grading_and_axioms():
    rs = RootSystemA(2)
    vac = FockState.vacuum(rs)
    for i in (1, 2):
        for n in (1, 2, 3):
            state = heis_mode(rs.simple_root(i), -n, vac)
            assert virasoro_mode(0, state) == state.scaled(n)
    assert not virasoro_mode(-1, vac)
    assert virasoro_mode(-2, vac) == conformal_vector(2)


def test_virasoro_commutators_sampled():
    # [L_m, L_n] = (m-n) L_{m+n} + delta_{m+n,0} (m^3-m)/12 * rank
    rng = random.Random(41)
    for rank_ in (1, 2):
        rs = RootSystemA(rank_)
        for _ in range(4):
            v = _random_state(rs, rng)
            for m, n in itertools.product((-3, -1, 0, 1, 2, 3), repeat=2):
                lhs = virasoro_mode(m, virasoro_mode(n, v)) - virasoro_mode(
                    n, virasoro_mode(m, v)
                )
                rhs = virasoro_mode(m + n, v).scaled(m - n)
                if m + n == 0:
                    central = Fraction((m**3 - m) * rank_, 12)
                    rhs = rhs + v.scaled(central)
                assert lhs == rhs, (rank_, m, n)


def test_screening_annihilates_vacuum():
    rs = RootSystemA(2)
    vac = FockState.vacuum(rs)
    for alpha in rs.all_roots():
        assert not screening_zero_mode(alpha, vac)


def test_screening_weight_one_kernel_empty():
    # no nonzero h_(-1)|0> is killed by every screening zero-mode
    for rank_ in (1, 2):
        rs = RootSystemA(rank_)
        basis = fock_basis(rank_, 1)
        target = fock_basis(rank_, 0)
        matrix = []
        for alpha in rs.all_roots():
            for t_idx in range(len(target)):
                row = []
                for mono in basis:
                    state = FockState(rs, rs.zero(), {mono: Fraction(1)})
                    image = screening_zero_mode(alpha, state)
                    row.append(state_coords(image, target)[t_idx])
                matrix.append(row)
        assert mat_rank(matrix, len(basis)) == len(basis)


def test_screening_kills_conformal_vector():
    for rank_ in (1, 2, 3):
        rs = RootSystemA(rank_)
        omega = conformal_vector(rank_)
        for alpha in rs.all_roots():
            assert not screening_zero_mode(alpha, omega), (rank_, alpha)


def test_screening_shifts_label():
    rs = RootSystemA(2)
    alpha = rs.simple_root(1)
    state = heis_mode(rs.simple_root(2), -1, FockState.vacuum(rs))
    image = screening_zero_mode(alpha, state)
    assert image.label == alpha


def test_screening_series_expansion_low_weight():
    # expand e^alpha on a weight-1 state by hand: contributions with
    # (creation weight a) - (annihilation weight b) = -1 and b <= 1
    rs = RootSystemA(1)
    al = rs.simple_root(1)
    vac = FockState.vacuum(rs)
    state = heis_mode(al, -1, vac)  # alpha_(-1)|0>
    # b=1: annihilate alpha_(-1) giving <al,al> = 2, creation weight 0
    expected = FockState(rs, al, {EMPTY: Fraction(-1) * 2 * Fraction(1, 1)})
    # S_1 = -alpha_(1), so S_1(state) = -2|0>, then E_0 = 1
    image = screening_zero_mode(al, state)
    assert image == expected


def test_screening_on_shifted_module():
    # on the module labeled -alpha the z-power shift is -2, so the zero mode
    # creates one unit of weight: e^alpha_(0) |-alpha> = alpha_(-1)|0>
    rs = RootSystemA(1)
    al = rs.simple_root(1)
    state = FockState.highest_weight(rs, rs.negate(al))
    image = screening_zero_mode(al, state)
    expected = heis_mode(al, -1, FockState.vacuum(rs))
    assert image.label == rs.zero()
    assert image.terms == expected.terms
    # one step further down: weight grows quadratically with the label
    state2 = FockState.highest_weight(rs, rs.scale(-2, al))
    image2 = screening_zero_mode(al, state2)
    assert image2
    assert image2.oscillator_weight() == 3


def test_screening_commutes_with_modes_up_to_bracket():
    # [h_(n), e^alpha_(m)] = <h, alpha> e^alpha_(m+n), spot-checked exactly
    rs = RootSystemA(2)
    vac = FockState.vacuum(rs)
    al = rs.simple_root(1)
    states = [
        heis_mode(rs.simple_root(1), -1, vac),
        heis_mode(rs.simple_root(2), -2, heis_mode(rs.simple_root(1), -1, vac)),
    ]
    for h in (rs.simple_root(1), rs.simple_root(2), rs.rho()):
        for v in states:
            for n in (-2, -1, 1, 2):
                for m in (0, 1, -1):
                    lhs = heis_mode(h, n, screening_mode(al, m, v)) - screening_mode(
                        al, m, heis_mode(h, n, v)
                    )
                    rhs = screening_mode(al, m + n, v).scaled(rs.inner(h, al))
                    assert lhs == rhs, (h, n, m)


def test_oscillator_character_values():
    rs = RootSystemA(1)
    char = oscillator_character(rs, rs.zero(), 5)
    assert char.offset == 0
    assert char.coeffs == (1, 1, 2, 3, 5, 7)
    lam = rs.scale(Fraction(1, 2), rs.rho())
    char2 = oscillator_character(rs, lam, 3)
    assert char2.offset == Fraction(1, 16)
    rs3 = RootSystemA(3)
    char3 = oscillator_character(rs3, rs3.zero(), 4)
    assert char3.coeffs == tuple(colored_partitions(3, n) for n in range(5))


def test_fock_basis_counts():
    for rank_ in (1, 2, 3):
        for d in range(0, 7):
            basis = fock_basis(rank_, d)
            assert len(basis) == colored_partitions(rank_, d)
            assert len(set(basis)) == len(basis)
            assert all(mono_weight(m) == d for m in basis)
            assert list(basis) == sorted(basis)
