import math

import numpy as np
import pytest

from lipsurf.brw import (OffspringLaw, evolve, martingale_table, run_key,
                         sample_offspring, sample_shift, survival_curve)
from lipsurf.lattice import count_l1_sphere
from lipsurf.stats import mean_and_se

LAW = OffspringLaw(2, 0.99, math.log(2))


def test_offspring_children_are_displaced_geometrically():
    # child at parent - n + g with g >= 1 means location >= parent - depth_cap
    kids = []
    for i in range(400):
        children, _ = sample_offspring(0, LAW, run_key(1, i))
        kids.extend(loc for loc, _ in children)
    assert kids
    assert min(kids) >= -LAW.depth_cap  # g >= 1 keeps children above -cap
    assert max(kids) >= 0 or len(kids) < 50  # geometric upside occasionally


def test_offspring_mean_count():
    # expected children per particle is q * sum of level counts
    law = OffspringLaw(2, 0.9999, math.log(2), depth_cap=40)
    expect = law.q * sum(count_l1_sphere(1, n) for n in range(1, 41))
    counts = []
    for i in range(10000):
        children, _ = sample_offspring(0, law, run_key(7, i))
        counts.append(len(children))
    mean, se = mean_and_se(counts)
    assert abs(mean - expect) <= 3 * max(se, 1e-6)


def test_offspring_weighted_sum_matches_laplace():
    sums = []
    for i in range(10000):
        children, discarded = sample_offspring(0, LAW, run_key(21, i))
        sums.append(sum(math.exp(LAW.mu * loc) for loc, _ in children) + discarded)
    mean, _ = mean_and_se(sums)
    exact_se = math.sqrt(
        (LAW.offspring_second_moment() - LAW.alpha() ** 2) / len(sums))
    assert abs(mean - LAW.alpha_truncated()) <= 3 * exact_se


def test_second_moment_matches_empirical_variance():
    vals = [evolve(LAW, 1, 31, run_index=i).s_values[1] for i in range(20000)]
    emp_var = float(np.var(vals, ddof=1))
    th_var = LAW.s_second_moment(1) - LAW.alpha() ** 2
    assert abs(emp_var - th_var) / th_var < 0.25


def test_martingale_means_within_exact_se():
    rows = martingale_table(LAW, 6, 4000, master_seed=11)
    for r in rows[1:]:
        se = LAW.mean_standard_error(r.n, 4000)
        assert abs(r.mean_s - r.alpha_pow) <= 3 * se + r.cap_bias
    assert rows[0].mean_s == 1.0


def test_cap_remainder_tiny():
    assert 0 <= LAW.cap_remainder() < 1e-9


def test_extinction_is_absorbing():
    seen_extinct = False
    for i in range(100):
        run = evolve(LAW, 8, 77, run_index=i)
        died = None
        for n, pop in enumerate(run.population):
            if pop == 0:
                died = n
                break
        if died is not None:
            seen_extinct = True
            assert all(p == 0 for p in run.population[died:])
            assert all(s == 0.0 for s in run.s_values[died:])
            assert all(m is None for m in run.max_locations[died:])
    assert seen_extinct


def test_pruning_monotone_and_accounted():
    # on the keyed stream, raising the floor only removes weight, and the
    # first generation's kept-plus-discarded weight is exactly conserved
    law0 = OffspringLaw(2, 0.95, math.log(2), weight_floor=0.0)
    law1 = OffspringLaw(2, 0.95, math.log(2), weight_floor=0.05)
    law2 = OffspringLaw(2, 0.95, math.log(2), weight_floor=0.10)
    for i in range(200):
        runs = [evolve(law, 4, 5, run_index=i) for law in (law0, law1, law2)]
        for a, b in zip(runs, runs[1:]):
            for n in range(5):
                assert b.s_values[n] <= a.s_values[n] + 1e-12
        s0_kept_plus_dropped = runs[1].s_values[1] + runs[1].discarded_cum[1]
        assert math.isclose(s0_kept_plus_dropped, runs[0].s_values[1],
                            rel_tol=1e-12, abs_tol=1e-15)


def test_shift_consistency():
    for i in range(50):
        plain = evolve(LAW, 5, 13, run_index=i)
        shifted = evolve(LAW, 5, 13, run_index=i, shift=3)
        for a, b in zip(plain.max_locations, shifted.max_locations):
            if a is None:
                assert b is None
            else:
                assert b == a + 3
    assert evolve(LAW, 2, 13, shift=2).s_values[0] == math.exp(LAW.mu * 2)
    assert evolve(LAW, 2, 13).s_values[0] == 1.0


def test_determinism():
    a = evolve(LAW, 6, 99, run_index=5)
    b = evolve(LAW, 6, 99, run_index=5)
    assert a == b
    assert sample_shift(LAW, 99, 5) == sample_shift(LAW, 99, 5)
    assert sample_shift(LAW, 99, 5) >= 1


def test_survival_rows():
    rows = survival_curve(LAW, 6, 3000, master_seed=17)
    # the shifted root starts at C >= 1, so generation 0 always survives
    assert rows[0].frequency == 1.0
    for r in rows[1:]:
        assert r.frequency <= r.bound + r.allowance
    # nonincreasing within the interval slack
    for a, b in zip(rows[1:], rows[2:]):
        assert b.frequency <= a.frequency + (a.ci_hi - a.frequency)


def test_invalid_law_params():
    with pytest.raises(ValueError):
        OffspringLaw(1, 0.99, 0.5)
    with pytest.raises(ValueError):
        OffspringLaw(2, 0.99, -0.5)
    with pytest.raises(ValueError):
        OffspringLaw(2, 1.5, 0.5)
