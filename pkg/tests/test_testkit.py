import random

import pytest

from abelian_cs.chain_complex import IntegerChain
from abelian_cs.exact_linalg import IntMatrix, solve_integer
from abelian_cs.linking import classify, intersection_number
from abelian_cs.testkit import (
    bounded_solution_search,
    crossing_count_oracle,
    random_chain,
    random_simple_cycle,
    rank_mod_prime,
    rank_oracle,
)


def test_rank_oracle_examples(s3):
    assert rank_oracle(IntMatrix.zeros(3, 4)) == 0
    assert rank_oracle(IntMatrix.identity(5)) == 5
    cx = s3.complex
    betti1 = cx.sizes[1] - rank_oracle(cx.boundary_matrix(1)) - rank_oracle(cx.boundary_matrix(2))
    assert betti1 == 0


def test_rank_mod_prime():
    A = IntMatrix.from_rows([[2, 0], [0, 3]])
    assert rank_mod_prime(A, 2) == 1
    assert rank_mod_prime(A, 3) == 1
    assert rank_mod_prime(A, 5) == 2


def test_bounded_search_examples():
    assert bounded_solution_search(IntMatrix.from_rows([[2]]), [4], 3) == [2]
    assert bounded_solution_search(IntMatrix.from_rows([[2]]), [3], 5) is None


def test_bounded_search_limits():
    with pytest.raises(ValueError):
        bounded_solution_search(IntMatrix.zeros(1, 8), [0], 10)
    with pytest.raises(ValueError):
        bounded_solution_search(IntMatrix.zeros(1, 2), [0, 0], 1)


def test_tiny_torsion_witness():
    # a Z/2 relation: the cycle x bounds only twice
    A = IntMatrix.from_rows([[2, 0], [0, 1]])
    b = [1, 0]
    assert bounded_solution_search(A, b, 4) is None and solve_integer(A, b) is None
    b2 = [2, 0]
    found = bounded_solution_search(A, b2, 4)
    x = solve_integer(A, b2)
    assert list(A.apply(found)) == list(A.apply(x)) == b2


def test_crossing_oracle_examples(s3h, rp3):
    C = s3h.complex.boundary(IntegerChain(3, {7: 1}))
    rng = random.Random(1)
    z = random_simple_cycle(s3h, rng)
    assert crossing_count_oracle(C, z, s3h) == 0 == intersection_number(C, z, s3h)
    assert crossing_count_oracle(IntegerChain(2), z, s3h) == 0
    w = classify(rp3.designated["tau1"], rp3).witness
    n = crossing_count_oracle(w, rp3.designated["tau2"], rp3)
    assert n % 2 == 1 and n == intersection_number(w, rp3.designated["tau2"], rp3)


def test_random_helpers(rp3):
    rng = random.Random(0)
    for _ in range(20):
        z = random_simple_cycle(rp3, rng)
        assert z.is_simple()
        rp3.validate_cycle(z)
    c = random_chain(rp3, rng, 2, 5)
    assert c.degree == 2 and all(0 <= f < len(rp3.faces) for f in c.support())
