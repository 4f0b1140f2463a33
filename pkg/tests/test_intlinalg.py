"""Exact integer linear algebra: ranks, normal forms, gcd combinations."""

import random

from hypothesis import given, strategies as st

from scobasis.intlinalg import (
    bareiss_rank,
    extended_gcd_combination,
    rank_mod_p,
    row_hermite,
    smith_normal_form,
    solve_integral,
)


def test_bareiss_rank_known():
    assert bareiss_rank([[1, 0], [0, 1]]) == 2
    assert bareiss_rank([[1, 2], [2, 4]]) == 1
    assert bareiss_rank([[0, 0], [0, 0]]) == 0
    assert bareiss_rank([[1, 2, 3]]) == 1
    assert bareiss_rank([]) == 0


def test_rank_mod_large_prime_agrees():
    rng = random.Random(11)
    p = (1 << 61) - 1
    for _ in range(20):
        rows = [
            [rng.randrange(-9, 10) for _ in range(5)] for _ in range(4)
        ]
        assert rank_mod_p(rows, p) == bareiss_rank(rows)


def test_smith_normal_form_known():
    assert smith_normal_form([[2, 0], [0, 3]]) == [1, 6]
    assert smith_normal_form([[2, 0], [0, 2]]) == [2, 2]
    assert smith_normal_form([[1, 0], [0, 1]]) == [1, 1]
    assert smith_normal_form([[0, 0], [0, 0]]) == []
    assert smith_normal_form([]) == []


def test_smith_factors_divide():
    rng = random.Random(3)
    for _ in range(25):
        rows = [
            [rng.randrange(-6, 7) for _ in range(4)] for _ in range(4)
        ]
        factors = smith_normal_form(rows)
        assert len(factors) == bareiss_rank(rows)
        for a, b in zip(factors, factors[1:]):
            assert a > 0 and b % a == 0


def test_row_hermite_preserves_row_lattice():
    rows = [[2, 4], [3, 6]]
    h, _, _ = row_hermite(rows)
    nonzero = [r for r in h if any(r)]
    assert nonzero == [[1, 2]]
    for r in rows:
        assert solve_integral(nonzero, r) is not None
    for r in nonzero:
        assert solve_integral(rows, r) is not None


def test_solve_integral_known():
    assert solve_integral([[2, 0], [0, 3]], [4, 9]) == [2, 3]
    assert solve_integral([[2]], [3]) is None
    assert solve_integral([[1, 1], [0, 2]], [1, 0]) is None


@given(
    st.lists(st.integers(min_value=-40, max_value=40), min_size=1, max_size=8)
)
def test_gcd_combination_property(values):
    g, coeffs = extended_gcd_combination(values)
    assert len(coeffs) == len(values)
    assert sum(c * v for c, v in zip(coeffs, values)) == g
    if any(values):
        import math

        assert g == math.gcd(*(abs(v) for v in values))
    else:
        assert g == 0


def test_gcd_combination_edges():
    assert extended_gcd_combination([]) == (0, [])
    assert extended_gcd_combination([0, 0]) == (0, [0, 0])
    g, coeffs = extended_gcd_combination([6, 10, 15])
    assert g == 1 and 6 * coeffs[0] + 10 * coeffs[1] + 15 * coeffs[2] == 1


@given(
    st.lists(
        st.lists(st.integers(min_value=-5, max_value=5), min_size=3, max_size=3),
        min_size=1,
        max_size=4,
    ),
    st.lists(st.integers(min_value=-3, max_value=3), min_size=1, max_size=4),
)
def test_solve_integral_recovers_combinations(rows, weights):
    weights = weights[: len(rows)] + [0] * max(0, len(rows) - len(weights))
    target = [
        sum(w * r[j] for w, r in zip(weights, rows)) for j in range(3)
    ]
    sol = solve_integral(rows, target)
    assert sol is not None
    built = [sum(c * r[j] for c, r in zip(sol, rows)) for j in range(3)]
    assert built == target
