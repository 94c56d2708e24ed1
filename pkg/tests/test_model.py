import math

import pytest
from hypothesis import given, strategies as st

from circlebin.model import (
    BinState,
    Instance,
    Item,
    Placement,
    Solution,
    compact,
    density,
    metrics_from_densities,
    objective,
    validate,
)
from tests.conftest import make_instance


class TestInstance:
    def test_basic(self):
        inst = make_instance([1.0, 2.0, 3.0], 5.0)
        assert inst.n == 3
        assert inst.item(2).radius == 2.0
        assert (inst.bin_center().x, inst.bin_center().y) == (5.0, 5.0)

    def test_ids_must_be_contiguous(self):
        with pytest.raises(ValueError):
            Instance("bad", 5.0, (Item(1, 1.0), Item(3, 1.0)))

    def test_nonpositive_radius_rejected(self):
        with pytest.raises(ValueError):
            make_instance([1.0, -2.0], 5.0)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            make_instance([], 5.0)


class TestDensityObjective:
    def test_density_single_full(self):
        inst = make_instance([5.0], 5.0)
        sol = Solution(inst, (BinState((Placement(1, 5.0, 5.0),)),))
        assert math.isclose(density(sol.bins[0], inst), 1.0)

    def test_density_sum_of_squares(self):
        inst = make_instance([3.0, 4.0], 10.0)
        b = BinState((Placement(1, 5.0, 5.0), Placement(2, 13.0, 10.0)))
        assert math.isclose(density(b, inst), (9 + 16) / 100)

    def test_objective_identity_six_bins(self):
        # -K + d_max - d_min over the given density multiset
        densities = [0.84, 0.80, 0.74, 0.74, 0.71, 0.03]
        m = metrics_from_densities(densities)
        assert abs(m.f_obj - (-5.19)) < 1e-12

    def test_objective_identity_three_bins(self):
        m = metrics_from_densities([0.84, 0.81, 0.71])
        assert abs(m.f_obj - (-2.87)) < 1e-12

    def test_objective_empty_rejected(self):
        with pytest.raises(ValueError):
            metrics_from_densities([])

    def test_objective_single_bin(self):
        m = metrics_from_densities([0.5])
        assert math.isclose(m.f_obj, -1.0)
        assert m.k_used == 1

    @given(st.lists(st.floats(0.01, 1.0), min_size=1, max_size=10))
    def test_objective_bounds(self, ds):
        m = metrics_from_densities(ds)
        # F = -K + spread, spread in [0, 1)
        assert -m.k_used <= m.f_obj < -m.k_used + 1

    @given(st.lists(st.floats(0.01, 1.0), min_size=1, max_size=10))
    def test_objective_permutation_invariant(self, ds):
        a = metrics_from_densities(ds)
        b = metrics_from_densities(list(reversed(ds)))
        assert a.f_obj == b.f_obj

    def test_objective_from_solution(self):
        inst = make_instance([3.0, 4.0], 5.0)
        sol = Solution(
            inst,
            (
                BinState((Placement(1, 5.0, 5.0),)),
                BinState((Placement(2, 5.0, 5.0),)),
            ),
        )
        m = objective(sol)
        assert m.k_used == 2
        assert math.isclose(m.f_obj, -2 + 16 / 25 - 9 / 25)


class TestValidate:
    def _ok_solution(self):
        inst = make_instance([1.0, 1.0], 3.0)
        sol = Solution(
            inst,
            (BinState((Placement(1, 2.0, 3.0), Placement(2, 4.0, 3.0))),),
        )
        return inst, sol

    def test_feasible(self):
        _, sol = self._ok_solution()
        report = validate(sol)
        assert report.feasible
        assert str(report) == "OK"

    def test_overlap_detected(self):
        inst = make_instance([1.0, 1.0], 3.0)
        sol = Solution(
            inst,
            (BinState((Placement(1, 2.5, 3.0), Placement(2, 3.5, 3.0))),),
        )
        report = validate(sol)
        assert not report.feasible
        assert any(v.kind == "overlap" for v in report.violations)

    def test_containment_detected(self):
        inst = make_instance([1.0], 3.0)
        sol = Solution(inst, (BinState((Placement(1, 5.5, 3.0),)),))
        report = validate(sol)
        assert any(v.kind == "containment" for v in report.violations)

    def test_missing_item(self):
        inst = make_instance([1.0, 1.0], 3.0)
        sol = Solution(inst, (BinState((Placement(1, 3.0, 3.0),)),))
        report = validate(sol)
        assert any(v.kind == "missing" for v in report.violations)

    def test_duplicate_item(self):
        inst = make_instance([1.0], 5.0)
        sol = Solution(
            inst,
            (
                BinState((Placement(1, 3.0, 5.0),)),
                BinState((Placement(1, 3.0, 5.0),)),
            ),
        )
        report = validate(sol)
        assert any(v.kind == "duplicate" for v in report.violations)

    def test_unknown_item(self):
        inst = make_instance([1.0], 5.0)
        sol = Solution(
            inst,
            (BinState((Placement(1, 5.0, 5.0), Placement(7, 5.0, 5.0))),),
        )
        report = validate(sol)
        assert any(v.kind == "unknown" for v in report.violations)

    def test_tangency_is_feasible(self):
        # exact tangency between items and with the boundary
        inst = make_instance([1.0, 1.0], 2.0)
        sol = Solution(
            inst,
            (BinState((Placement(1, 1.0, 2.0), Placement(2, 3.0, 2.0))),),
        )
        assert validate(sol).feasible


class TestCompact:
    def test_drops_empty_bins(self):
        inst = make_instance([1.0], 3.0)
        sol = Solution(
            inst,
            (BinState(()), BinState((Placement(1, 3.0, 3.0),)), BinState(())),
        )
        out = compact(sol)
        assert len(out.bins) == 1
        assert out.bins[0].placements[0].item_id == 1

    def test_all_empty_rejected(self):
        inst = make_instance([1.0], 3.0)
        with pytest.raises(ValueError, match="empty solution"):
            compact(Solution(inst, (BinState(()),)))

    def test_preserves_order(self):
        inst = make_instance([1.0, 1.0], 3.0)
        sol = Solution(
            inst,
            (
                BinState((Placement(2, 3.0, 3.0),)),
                BinState(()),
                BinState((Placement(1, 3.0, 3.0),)),
            ),
        )
        out = compact(sol)
        assert [b.placements[0].item_id for b in out.bins] == [2, 1]
