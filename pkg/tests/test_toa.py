import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from circlebin.geometry import CircleGeom, Point, Tolerance, boundary_clearance
from circlebin.model import BinState, Placement, Solution, validate
from circlebin.toa import (
    BIN,
    PackRequest,
    construct,
    feasible_candidates,
    pack,
    sort_for_packing,
)
from tests.conftest import make_instance


class TestFeasibleCandidates:
    def test_empty_bin_bootstrap(self):
        inst = make_instance([1.0], 3.0)
        cands = feasible_candidates(inst.item(1), BinState(()), inst)
        assert len(cands) == 1
        c = cands[0]
        assert math.isclose(c.position.x, 5.0) and math.isclose(c.position.y, 3.0)
        assert math.isclose(c.clearance, 0.0, abs_tol=1e-12)
        assert c.touching == (BIN, BIN)

    def test_one_placed_item(self):
        # Unit item already at (5, 3) in a bin of radius 3 at (3, 3):
        # a second unit item has two candidates at (4, 3 +- sqrt(3)).
        inst = make_instance([1.0, 1.0], 3.0)
        bin_ = BinState((Placement(1, 5.0, 3.0),))
        cands = feasible_candidates(inst.item(2), bin_, inst)
        got = sorted((round(c.position.x, 9), round(c.position.y, 9)) for c in cands)
        s3 = math.sqrt(3)
        assert got == [(4.0, round(3 - s3, 9)), (4.0, round(3 + s3, 9))]
        for c in cands:
            assert set(c.touching) == {BIN, 1}
            assert math.isclose(c.clearance, 0.0, abs_tol=1e-9)

    def test_oversized_item_rejected(self):
        from circlebin.model import Item

        inst = make_instance([1.0], 3.0)
        with pytest.raises(ValueError, match="larger than bin"):
            feasible_candidates(Item(9, 4.0), BinState(()), inst)

    @given(st.integers(0, 10_000))
    @settings(max_examples=100, deadline=None)
    def test_candidates_feasible(self, seed):
        rng = random.Random(seed)
        radii = [rng.uniform(0.5, 2.5) for _ in range(rng.randint(2, 6))]
        R = rng.uniform(4, 8)
        inst = make_instance(radii, R)
        sol = construct(inst)
        bin_ = sol.bins[0]
        item = inst.items[-1]
        placed = {p.item_id for p in bin_.placements}
        if item.id in placed:
            return
        tol = inst.tolerance()
        for c in feasible_candidates(item, bin_, inst):
            cand = CircleGeom(c.position, item.radius)
            from circlebin.geometry import contains, overlaps

            assert contains(inst.bin_circle(), cand, Tolerance(tol.eps * 10))
            for p in bin_.placements:
                other = CircleGeom(Point(p.x, p.y), inst.item(p.item_id).radius)
                assert not overlaps(cand, other, tol)


class TestSortForPacking:
    def test_radius_descending_ties_by_id(self):
        inst = make_instance([2.0, 3.0, 2.0, 5.0], 10.0)
        assert sort_for_packing([1, 2, 3, 4], inst) == [4, 2, 1, 3]


class TestPack:
    def test_empty_request_returns_base(self):
        inst = make_instance([1.0], 3.0)
        base = Solution(inst, (BinState(()),))
        out = pack(PackRequest((), (0,), base))
        assert out is base

    def test_pack_into_empty_bin(self):
        inst = make_instance([1.0], 3.0)
        base = Solution(inst, (BinState(()),))
        out = pack(PackRequest((1,), (0,), base))
        p = out.bins[0].placements[0]
        assert math.isclose(p.x, 5.0) and math.isclose(p.y, 3.0)

    def test_minimum_clearance_chosen(self):
        # Two items of radius 1 and 0.4 in a bin of radius 3: the small item
        # should hug the boundary, not sit in the middle.
        inst = make_instance([1.0, 0.4], 3.0)
        base = Solution(inst, (BinState((Placement(1, 5.0, 3.0),)),))
        out = pack(PackRequest((2,), (0,), base))
        p = out.bins[0].placements[-1]
        clearance = boundary_clearance(Point(p.x, p.y), 0.4, inst.bin_circle())
        assert clearance < 1e-9

    def test_infeasible_returns_none(self):
        inst = make_instance([2.5, 2.5], 3.0)
        base = Solution(inst, (BinState((Placement(1, 3.0, 3.0),)),))
        assert pack(PackRequest((2,), (0,), base)) is None

    def test_first_fit_over_bins(self):
        inst = make_instance([2.5, 2.5, 1.0], 3.0)
        base = Solution(
            inst,
            (BinState((Placement(1, 3.0, 3.0),)), BinState((Placement(2, 3.0, 3.0),))),
        )
        with pytest.raises(ValueError):
            # item 1 already placed
            PackRequest((1,), (0, 1), base)
        out = pack(PackRequest((3,), (1, 0), base))
        # first listed bin (index 1) can't take it either -- both blocked;
        # radius 2.5 at center leaves only a 0.5-wide annulus
        assert out is None

    def test_bin_index_out_of_range(self):
        inst = make_instance([1.0], 3.0)
        base = Solution(inst, (BinState(()),))
        with pytest.raises(ValueError, match="out of range"):
            PackRequest((1,), (2,), base)

    def test_respects_bin_order(self):
        inst = make_instance([1.0], 3.0)
        base = Solution(inst, (BinState(()), BinState(())))
        out = pack(PackRequest((1,), (1, 0), base))
        assert not out.bins[0].placements
        assert out.bins[1].placements[0].item_id == 1


class TestConstruct:
    def test_three_units_single_bin(self, three_unit_instance):
        sol = construct(three_unit_instance)
        assert len(sol.bins) == 1
        assert validate(sol).feasible

    def test_single_item(self):
        inst = make_instance([2.0], 3.0)
        sol = construct(inst)
        assert len(sol.bins) == 1
        assert validate(sol).feasible

    def test_forced_multiple_bins(self):
        inst = make_instance([2.5, 2.5, 2.5], 3.0)
        sol = construct(inst)
        assert len(sol.bins) == 3
        assert validate(sol).feasible

    def test_deterministic(self):
        inst = make_instance([3.0, 2.0, 2.0, 1.5, 1.0, 1.0, 0.5], 5.0)
        a, b = construct(inst), construct(inst)
        assert a == b

    @given(st.integers(0, 10_000))
    @settings(max_examples=60, deadline=None)
    def test_always_feasible(self, seed):
        rng = random.Random(seed)
        radii = [rng.uniform(0.3, 3.0) for _ in range(rng.randint(1, 15))]
        R = rng.uniform(3.5, 8)
        inst = make_instance(radii, R)
        sol = construct(inst)
        assert validate(sol).feasible
        assert all(b.placements for b in sol.bins)

    def test_first_item_against_boundary(self):
        inst = make_instance([2.0, 1.0], 5.0)
        sol = construct(inst)
        first = sol.bins[0].placements[0]
        assert first.item_id == 1
        assert math.isclose(first.x, 5.0 + 5.0 - 2.0)
        assert math.isclose(first.y, 5.0)
