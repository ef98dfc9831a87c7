import random
from fractions import Fraction

from wbryl.exactcore import CycScalar
from wbryl.linalg import Subspace, mat_vec, nullspace, rank, rref


def test_rref_and_rank():
    rows = [
        [Fraction(1), Fraction(2), Fraction(3)],
        [Fraction(2), Fraction(4), Fraction(6)],
        [Fraction(0), Fraction(1), Fraction(1)],
    ]
    reduced, pivots = rref(rows, 3)
    assert pivots == [0, 1]
    assert rank(rows, 3) == 2
    assert reduced[0] == [1, 0, 1]
    assert reduced[1] == [0, 1, 1]


def test_nullspace_annihilates():
    rng = random.Random(5)
    for _ in range(10):
        nrows, ncols = rng.randint(1, 5), rng.randint(1, 6)
        rows = [
            [Fraction(rng.randint(-3, 3)) for _ in range(ncols)] for _ in range(nrows)
        ]
        basis = nullspace(rows, ncols)
        assert len(basis) == ncols - rank(rows, ncols)
        for vec in basis:
            assert all(v == 0 for v in mat_vec(rows, vec))


def test_nullspace_is_canonical():
    rows = [[Fraction(1), Fraction(1), Fraction(0)]]
    b1 = nullspace(rows, 3)
    b2 = nullspace([list(r) for r in rows], 3)
    assert b1 == b2


def test_subspace_membership():
    v1 = [Fraction(1), Fraction(0), Fraction(1)]
    v2 = [Fraction(0), Fraction(1), Fraction(1)]
    space = Subspace([v1, v2], 3)
    assert space.dim == 2
    assert space.contains([Fraction(1), Fraction(1), Fraction(2)])
    assert not space.contains([Fraction(1), Fraction(1), Fraction(0)])
    smaller = Subspace([v1], 3)
    assert smaller <= space
    assert not space <= smaller


def test_rref_over_cyclotomic_field():
    h = 3
    z = CycScalar.zeta(h)
    one = CycScalar.one(h)
    zero = CycScalar.zero(h)
    rows = [[one, z], [z.conj(), one]]
    # det = 1 - z * conj(z) = 1 - 1 = 0, so rank 1
    assert rank(rows, 2) == 1
    basis = nullspace(rows, 2, one=one, zero=zero)
    assert len(basis) == 1
    image = mat_vec(rows, basis[0], zero=zero)
    assert all(not x for x in image)
