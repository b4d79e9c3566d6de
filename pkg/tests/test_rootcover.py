"""Degree-q cover invariants from a branch multiplicity assignment."""
from fractions import Fraction

import pytest

from chernslope.geometry import ArrangementParams, Family, build_resolution
from chernslope.numtheory import c_value, hj_length
from chernslope.rootcover import (
    BranchAssignment,
    InvalidAssignmentError,
    chern_of_cover,
    defect_bound,
    node_residue,
)


@pytest.fixture(scope="module")
def small_config():
    params = ArrangementParams(Family.A, p=2, r=1, e=1, d=3, g=0, u=1, w=1)
    return build_resolution(params)


@pytest.fixture(scope="module")
def hand_assignment(small_config):
    # x = (1, 1, 1, 1) on S1..S3, H1 and y = (2, 2, 2, 3) on F1..F3, R1
    # solve 2*(1+1+1+1) + (2+2+2+3) = 17 with the forced value 13 on S4
    base = {"S1": 1, "S2": 1, "S3": 1, "H1": 1,
            "F1": 2, "F2": 2, "F3": 2, "R1": 3, "S4": 13}
    return BranchAssignment.from_base(small_config, 17, base)


class TestNodeResidue:
    def test_known_value(self):
        assert node_residue(2, 3, 7) == 2
        assert node_residue(3, 2, 7) == 4

    def test_swap_gives_inverse(self):
        q = 101
        for i in range(1, 20):
            for j in range(1, 20):
                a = node_residue(i, j, q)
                b = node_residue(j, i, q)
                assert (a * b) % q == 1

    def test_equal_multiplicities_give_full_turn(self):
        assert node_residue(5, 5, 17) == 16


class TestBranchAssignment:
    def test_extends_chains(self, small_config, hand_assignment):
        # chain values over a tangency: k*(nu_a + nu_b) + nu_F mod q
        tang = small_config.tangencies[0]
        nus = hand_assignment.nus
        base_sum = nus[tang.sections[0]] + nus[tang.sections[1]]
        for k, gc in enumerate(tang.chain, start=1):
            assert nus[gc] == (k * base_sum + nus[tang.fiber]) % 17

    def test_rejects_zero_multiplicity(self, small_config):
        base = {"S1": 1, "S2": 1, "S3": 1, "H1": 1,
                "F1": 2, "F2": 2, "F3": 2, "R1": 3, "S4": 17}
        with pytest.raises(InvalidAssignmentError):
            BranchAssignment.from_base(small_config, 17, base)

    def test_rejects_missing_component(self, small_config):
        with pytest.raises(InvalidAssignmentError):
            BranchAssignment.from_base(small_config, 17, {"S1": 1})

    def test_residues_cover_every_node(self, small_config, hand_assignment):
        nodes = {(i, j, c) for i, j, c in small_config.nodes}
        seen = {node for node, _ in hand_assignment.residues(small_config)}
        assert seen == nodes


class TestCoverInvariants:
    def test_chi_is_integral(self, small_config, hand_assignment):
        inv = chern_of_cover(small_config, hand_assignment)
        assert (inv.c1sq + inv.c2) % 12 == 0
        assert inv.chi == (inv.c1sq + inv.c2) // 12
        assert inv.chi_is_integral

    def test_slope_consistent(self, small_config, hand_assignment):
        inv = chern_of_cover(small_config, hand_assignment)
        assert inv.slope == Fraction(inv.c1sq, inv.c2)

    def test_corrections_match_singularity_records(self, small_config, hand_assignment):
        inv = chern_of_cover(small_config, hand_assignment)
        total_c = sum(s.c * s.node[2] for s in inv.singularities)
        total_l = sum(s.l * s.node[2] for s in inv.singularities)
        assert inv.c_correction == total_c
        assert inv.l_correction == total_l
        for s in inv.singularities:
            assert s.c == c_value(inv.q, s.a)
            assert s.l == hj_length(inv.q, s.a)

    def test_chern_numbers_scale_with_degree(self, small_config, hand_assignment):
        # c2(X) = c2_bar * q + (c2 - c2_bar) + sum of lengths
        from chernslope.geometry import log_chern_pair

        inv = chern_of_cover(small_config, hand_assignment)
        c1b, c2b = log_chern_pair(small_config)
        amb_c2 = small_config.c2_ambient
        assert inv.c2 == c2b * inv.q + (amb_c2 - c2b) + inv.l_correction


class TestDefectBound:
    def test_formula(self):
        # (6 * ceil(sqrt(q)) + 7) * t2 with ceil(sqrt(17)) = 5
        assert defect_bound(17, 10) == 370
        assert defect_bound(101, 1) == 6 * 11 + 7

    def test_rejects_small_q(self):
        with pytest.raises(Exception):
            defect_bound(13, 10)
