"""Parameter solvers hitting a target limit slope within epsilon."""
from fractions import Fraction

import pytest

from chernslope.density import (
    find_uv,
    lambda_fn,
    solve,
    solve_family_a,
    solve_family_aprime,
)
from chernslope.geometry import Family, limit_slope

TARGETS = [Fraction(2), Fraction(5, 2), Fraction(3), Fraction(314159, 100000),
           Fraction(4), Fraction(10)]
EPS = Fraction(1, 100)


class TestLambda:
    def test_fixed_points(self):
        assert lambda_fn(Fraction(1)) == 0
        assert lambda_fn(Fraction(2)) == Fraction(1, 8)

    def test_symmetric_in_inversion(self):
        for x in (Fraction(3, 2), Fraction(7, 3), Fraction(5)):
            assert lambda_fn(x) == lambda_fn(1 / x)


class TestFindUV:
    def test_produces_valid_window(self):
        u, v, d = find_uv(Fraction(3), Fraction(1, 50))
        assert u < v
        assert (v - u) % 2 == 1
        assert v - u >= 5
        assert d == (v + 1 - u) // 2


@pytest.mark.parametrize("target", TARGETS)
class TestSolvers:
    def test_sections_family(self, target):
        solved = solve_family_a(target, EPS)
        assert solved.status == "ok"
        assert abs(solved.achieved_limit - target) < EPS
        # independent recomputation through the arrangement closed forms
        assert limit_slope(solved.params) == solved.achieved_limit

    def test_paired_family(self, target):
        solved = solve_family_aprime(target, EPS)
        assert solved.status == "ok"
        assert abs(solved.achieved_limit - target) < EPS
        assert limit_slope(solved.params) == solved.achieved_limit


class TestDispatcher:
    def test_routes_by_family(self):
        a = solve(Fraction(3), EPS, family="A")
        b = solve(Fraction(3), EPS, family=Family.APRIME)
        assert a.params.family is Family.A
        assert b.params.family is Family.APRIME

    def test_float_targets_accepted(self):
        solved = solve(3.14159, Fraction(1, 100), family="APRIME")
        assert abs(solved.achieved_limit - Fraction(314159, 100000)) < EPS

    def test_error_field_matches(self):
        solved = solve(Fraction(4), EPS, family="A")
        assert solved.error == abs(solved.achieved_limit - Fraction(4))

    def test_target_below_two_rejected(self):
        with pytest.raises(Exception):
            solve(Fraction(3, 2), EPS, family="A")
