import math
import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from circlebin.asags import (
    CIRCLE,
    SECTOR,
    AnnealParams,
    acceptance_probability,
    derive_schedule,
    generate_neighbor,
    initial_solution,
    removed_set,
    run,
    sample_circle_region,
    sample_sector,
)
from circlebin.geometry import SectorRegion
from circlebin.model import objective, validate
from circlebin.toa import construct
from tests.conftest import make_instance


class TestSchedule:
    def test_t_cool_n100(self):
        sched = derive_schedule(AnnealParams(alpha=0.9), 100)
        assert sched.t_cool == 8 / 9

    def test_t_greedy_n50(self):
        sched = derive_schedule(AnnealParams(beta=0.08), 50)
        assert sched.t_greedy == 4

    def test_t_greedy_rounds_half_up(self):
        # beta*n = 4.5 -> 5
        assert derive_schedule(AnnealParams(beta=0.09), 50).t_greedy == 5

    def test_t_greedy_floor_one(self):
        assert derive_schedule(AnnealParams(beta=0.08), 2).t_greedy == 1

    def test_t_cool_clamped_for_tiny_products(self):
        # alpha*sqrt(n) <= 1 makes the raw coefficient non-positive
        sched = derive_schedule(AnnealParams(alpha=0.9), 1)
        assert sched.t_cool == 0.5

    @given(st.integers(1, 10_000), st.floats(0.1, 2.0), st.floats(0.01, 0.5))
    def test_schedule_ranges(self, n, alpha, beta):
        sched = derive_schedule(AnnealParams(alpha=alpha, beta=beta), n)
        assert 0 < sched.t_cool < 1
        assert sched.t_greedy >= 1


class TestAcceptanceProbability:
    def test_zero_delta_always_accepts(self):
        assert acceptance_probability(0.0, 0.05, 50) == 1.0

    def test_improving_clamped_to_one(self):
        assert acceptance_probability(-1.0, 0.05, 50) == 1.0

    def test_known_value(self):
        # exp(-0.05/0.1 * ln 50) = 50**-0.5
        p = acceptance_probability(0.05, 0.1, 100)
        assert math.isclose(p, 50 ** -0.5, rel_tol=1e-12)

    def test_small_n_floor(self):
        # n floored at 3 so the log factor stays positive
        assert acceptance_probability(1.0, 0.1, 1) == acceptance_probability(1.0, 0.1, 3)
        assert acceptance_probability(1.0, 0.1, 2) < 1.0

    def test_nonpositive_temperature_rejected(self):
        with pytest.raises(ValueError):
            acceptance_probability(0.1, 0.0, 10)

    @given(st.floats(0, 10), st.floats(1e-6, 1.0), st.integers(1, 1000))
    def test_always_a_probability(self, dE, t, n):
        p = acceptance_probability(dE, t, n)
        assert 0.0 <= p <= 1.0

    @given(st.floats(1e-3, 5), st.integers(3, 1000))
    def test_monotone_in_temperature(self, dE, n):
        assert acceptance_probability(dE, 0.2, n) >= acceptance_probability(dE, 0.1, n)


class TestInitialSolution:
    def test_one_item_per_bin_at_center(self):
        inst = make_instance([1.0, 2.0, 3.0], 5.0)
        sol = initial_solution(inst)
        assert len(sol.bins) == 3
        for b in sol.bins:
            assert len(b.placements) == 1
            p = b.placements[0]
            assert (p.x, p.y) == (5.0, 5.0)
        assert validate(sol).feasible


class TestRegionSampling:
    def test_circle_region_anchored_on_item(self):
        inst = make_instance([1.0, 1.0], 3.0)
        sol = construct(inst)
        rng = random.Random(0)
        anchors = {(p.x, p.y) for p in sol.bins[0].placements}
        for _ in range(50):
            reg = sample_circle_region(sol.bins[0], inst.bin_radius, rng, inst)
            assert (reg.center.x, reg.center.y) in anchors
            assert 0 <= reg.radius <= inst.bin_radius / 2

    def test_circle_region_radius_uniform(self):
        # Kolmogorov-Smirnov one-sample test against U[0, R/2]
        scipy_stats = pytest.importorskip("scipy.stats")
        inst = make_instance([1.0], 4.0)
        sol = construct(inst)
        rng = random.Random(7)
        draws = [
            sample_circle_region(sol.bins[0], 4.0, rng, inst).radius
            for _ in range(5000)
        ]
        res = scipy_stats.kstest(draws, "uniform", args=(0, 2.0))
        assert res.pvalue > 0.01

    def test_circle_region_empty_bin_rejected(self):
        from circlebin.model import BinState

        inst = make_instance([1.0], 3.0)
        with pytest.raises(ValueError):
            sample_circle_region(BinState(()), 3.0, random.Random(0), inst)

    def test_sector_span_distribution(self):
        rng = random.Random(11)
        spans = Counter()
        for _ in range(8200):
            s = sample_sector(None, rng, 5.0)
            span = (s.beta_deg - s.alpha_deg) % 360
            assert span == int(span)
            spans[int(span)] += 1
        assert set(spans) == set(range(20, 61))
        # each of 41 values expected ~200 times
        assert min(spans.values()) > 100

    def test_sector_alpha_integer_range(self):
        rng = random.Random(3)
        for _ in range(1000):
            s = sample_sector(None, rng, 5.0)
            assert s.alpha_deg == int(s.alpha_deg)
            assert 0 <= s.alpha_deg < 360

    def test_sector_fixed_span(self):
        rng = random.Random(3)
        s = sample_sector(45.0, rng, 5.0)
        assert (s.beta_deg - s.alpha_deg) % 360 == 45.0
        assert (s.origin.x, s.origin.y) == (5.0, 5.0)


class TestRemovedSet:
    def test_sector_removal(self):
        inst = make_instance([1.0, 1.0], 3.0)
        sol = construct(inst)
        # a full sweep removes everything
        full = SectorRegion(inst.bin_center(), 3.0, 0.0, 359.999)
        assert removed_set(sol.bins[0], full, inst) == {1, 2}

    def test_circle_region_removal(self):
        from circlebin.geometry import CircleGeom, Point

        inst = make_instance([1.0, 1.0], 3.0)
        sol = construct(inst)
        p = sol.bins[0].placements[0]
        tiny = CircleGeom(Point(p.x, p.y), 1e-308)
        removed = removed_set(sol.bins[0], tiny, inst)
        assert p.item_id in removed


class TestGenerateNeighbor:
    @given(st.integers(0, 10_000), st.sampled_from([CIRCLE, SECTOR]))
    @settings(max_examples=80, deadline=None)
    def test_conserves_items_and_feasibility(self, seed, kind):
        rng = random.Random(seed)
        radii = [rng.uniform(0.5, 2.0) for _ in range(rng.randint(3, 10))]
        inst = make_instance(radii, 4.0)
        sol = construct(inst)
        out = generate_neighbor(sol, kind, inst, random.Random(seed))
        if out is None:
            return
        assert sorted(out.placed_ids()) == sorted(sol.placed_ids())
        assert validate(out).feasible

    def test_unknown_kind_rejected(self):
        inst = make_instance([1.0], 3.0)
        with pytest.raises(ValueError, match="unknown perturbation"):
            generate_neighbor(construct(inst), "square", inst, random.Random(0))

    def test_deterministic(self):
        inst = make_instance([1.0, 1.2, 0.8, 1.5, 0.6], 4.0)
        sol = construct(inst)
        a = generate_neighbor(sol, CIRCLE, inst, random.Random(42))
        b = generate_neighbor(sol, CIRCLE, inst, random.Random(42))
        assert a == b


class TestRun:
    def test_three_units_reaches_single_bin(self, three_unit_instance):
        params = AnnealParams(n_iters=10_000, seed=1)
        sol, stats = run(three_unit_instance, params)
        assert len(sol.bins) == 1
        assert validate(sol).feasible

    def test_deterministic(self):
        inst = make_instance([2.0, 1.5, 1.5, 1.0, 1.0, 0.8, 0.5], 4.0)
        params = AnnealParams(n_iters=3000, seed=9)
        a, _ = run(inst, params)
        b, _ = run(inst, params)
        assert a == b

    def test_returns_best_seen(self):
        inst = make_instance([2.0, 1.5, 1.5, 1.0, 1.0], 4.0)
        params = AnnealParams(n_iters=5000, seed=4)
        sol, stats = run(inst, params)
        m = objective(sol)
        assert math.isclose(m.energy, stats.best_f, rel_tol=1e-12)
        assert validate(sol).feasible

    def test_never_worse_than_initial(self):
        inst = make_instance([1.0, 1.0, 1.0, 1.0], 3.0)
        params = AnnealParams(n_iters=2000, seed=0)
        sol, stats = run(inst, params)
        init = objective(initial_solution(inst))
        assert stats.best_f <= init.energy + 1e-12

    def test_trace_recorded(self):
        inst = make_instance([1.0, 1.0, 1.0], 3.0)
        _, stats = run(inst, AnnealParams(n_iters=1000, seed=2), trace_points=16)
        assert stats.f_trace
        gens = [g for g, *_ in stats.f_trace]
        assert gens == sorted(gens)
        assert stats.iterations_done <= 1000
