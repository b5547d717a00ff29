import random

from motivic_lambda.gf2 import BitMatrix, Echelon, image_basis, kernel_basis, rank, solve


def test_identity_rank_kernel():
    m = BitMatrix.identity(3)
    assert rank(m) == 3
    assert kernel_basis(m) == []


def test_zero_matrix_kernel_full():
    m = BitMatrix(4, 3)
    ker = kernel_basis(m)
    assert len(ker) == 3
    assert sorted(ker) == [1, 2, 4]


def test_rank_nullity():
    rng = random.Random(7)
    for _ in range(60):
        rows, cols = rng.randint(1, 12), rng.randint(1, 12)
        m = BitMatrix(rows, cols, [rng.getrandbits(rows) for _ in range(cols)])
        assert rank(m) + len(kernel_basis(m)) == cols


def test_kernel_vectors_annihilate():
    rng = random.Random(11)
    for _ in range(40):
        rows, cols = rng.randint(1, 10), rng.randint(1, 10)
        m = BitMatrix(rows, cols, [rng.getrandbits(rows) for _ in range(cols)])
        for w in kernel_basis(m):
            acc = 0
            for j in range(cols):
                if (w >> j) & 1:
                    acc ^= m.columns[j]
            assert acc == 0


def test_solve_consistent_and_not():
    m = BitMatrix(3, 2, [0b011, 0b110])
    x = solve(m, 0b101)  # sum of both columns
    assert x is not None
    acc = 0
    for j in range(2):
        if (x >> j) & 1:
            acc ^= m.columns[j]
    assert acc == 0b101
    assert solve(m, 0b001) is None  # not in the span


def test_echelon_membership():
    ech = Echelon()
    ech.add(0b1010)
    ech.add(0b0011)
    assert ech.contains(0b1001)
    assert not ech.contains(0b0100)
    assert ech.rank == 2


def test_matrix_mul_composition():
    rng = random.Random(3)
    a = BitMatrix(5, 4, [rng.getrandbits(5) for _ in range(4)])
    b = BitMatrix(4, 3, [rng.getrandbits(4) for _ in range(3)])
    ab = a.mul(b)
    for j in range(3):
        acc = 0
        for i in range(4):
            if b.entry(i, j):
                acc ^= a.columns[i]
        assert ab.columns[j] == acc
