import itertools
import json

from lipsurf.lattice import (ConstantField, ExplicitConfig, ExplicitField,
                             BoxRegion, OverrideField, PercolationField,
                             SignedPermutationField, SiteState)
from lipsurf.reach import Budget
from lipsurf.surface import (Cert, SurfacePatch, build_surface, climb_set,
                             minimal_cover, surface_from_covers, verify_surface)

ALL_OPEN = ConstantField(2, SiteState.OPEN)


def _base(radius, k=1):
    return [tuple(c) for c in itertools.product(range(-radius, radius + 1), repeat=k)]


def test_build_surface_all_open():
    patch = build_surface(ALL_OPEN, _base(3))
    assert all(v == 1 for v in patch.values.values())
    assert patch.certified_fraction() == 1.0


def test_build_surface_single_closed_site():
    field = OverrideField(2, closed=[(0, 1)])
    patch = build_surface(field, _base(3))
    expect = {(-3,): 1, (-2,): 1, (-1,): 1, (0,): 2, (1,): 1, (2,): 1, (3,): 1}
    assert patch.values == expect
    assert patch.certified_fraction() == 1.0


def test_surface_many_columns_validity():
    # one wide patch: every certified column has an open site at its value
    # and neighbours differ by at most one
    field = PercolationField(2, 0.99, master_seed=101)
    patch = build_surface(field, _base(5000))
    assert patch.certified_fraction() == 1.0
    report = verify_surface(field, patch)
    assert report.ok
    assert report.columns_checked == 10001
    assert report.pairs_checked == 10000
    assert max(patch.values.values()) >= 2  # some genuine bumps appeared


def test_verify_surface_fault_injection():
    field = PercolationField(2, 0.99, master_seed=7)
    patch = build_surface(field, _base(10))
    bad_values = dict(patch.values)
    bad_values[(0,)] += 2
    corrupted = SurfacePatch(patch.columns, bad_values, dict(patch.status),
                             patch.method)
    report = verify_surface(field, corrupted)
    assert report.lipschitz_violations
    assert all((0,) in (a, b) for a, b, _, _ in report.lipschitz_violations)


def test_surface_validity_random_d3():
    for rep in range(25):
        field = PercolationField(3, 0.98, master_seed=55, replicate=rep)
        patch = build_surface(field, _base(3, k=2))
        assert verify_surface(field, patch).ok


def test_climb_set_all_open():
    sites, cert = climb_set(ALL_OPEN, (0,))
    assert sites == frozenset({(0, 0)})
    assert cert is Cert.CERTIFIED


def test_climb_set_single_closed():
    field = OverrideField(2, closed=[(0, 1)])
    sites, cert = climb_set(field, (0,))
    assert sites == frozenset({(0, 0), (0, 1), (1, 0), (-1, 0)})
    assert cert is Cert.CERTIFIED


def test_climb_set_never_below_floor_and_contiguous():
    for rep in range(150):
        field = PercolationField(2, 0.95, master_seed=88, replicate=rep)
        sites, cert = climb_set(field, (0,))
        assert all(s[1] >= 0 for s in sites)
        by_col = {}
        for s in sites:
            by_col.setdefault(s[0], set()).add(s[1])
        for heights in by_col.values():
            assert heights == set(range(max(heights) + 1))


def test_minimal_cover_examples():
    cover = minimal_cover(ALL_OPEN, (0,))
    assert cover.entries == {(0,): 1}
    assert cover.cover_radius == 1 and cover.spread_radius == 0
    field = OverrideField(2, closed=[(0, 1)])
    cover = minimal_cover(field, (0,))
    assert cover.entries == {(0,): 2, (1,): 1, (-1,): 1}
    assert cover.cover_radius == 2 and cover.spread_radius == 1
    assert cover.certified


def _assert_valid_cover(field, cover):
    x = cover.center
    assert cover.entries.get(x, 0) >= 1
    for col, lv in cover.entries.items():
        assert lv >= 1
        assert not field.is_closed((*col, lv))
        for i in range(len(col)):
            for s in (1, -1):
                nb = col[:i] + (col[i] + s,) + col[i + 1:]
                assert abs(lv - cover.entries.get(nb, 0)) <= 1


def test_minimal_cover_is_valid_cover():
    for rep in range(120):
        field = PercolationField(2, 0.95, master_seed=14, replicate=rep)
        cover = minimal_cover(field, (0,))
        if cover.certified:
            _assert_valid_cover(field, cover)
            assert cover.cover_radius <= cover.spread_radius + 1
    for rep in range(40):
        field = PercolationField(3, 0.97, master_seed=15, replicate=rep)
        cover = minimal_cover(field, (0, 0))
        if cover.certified:
            _assert_valid_cover(field, cover)
            assert cover.cover_radius <= cover.spread_radius + 1


def test_minimal_cover_matches_oracle_smoke():
    from lipsurf.oracle import NoCoverInBox, cover_fixed_point
    box = BoxRegion((-1, 0), (1, 2))
    budget = Budget(margin=1, height=2, growth_cap=0)
    both = 0
    for bits in range(1 << 9):
        config = ExplicitConfig.from_bits(box, bits)
        fast = minimal_cover(ExplicitField(config), (0,), budget)
        slow = cover_fixed_point(config, (0,), 2)
        if fast.certified and not isinstance(slow, NoCoverInBox):
            both += 1
            assert fast.entries == slow.entries
            assert fast.cover_radius == slow.cover_radius
    assert both > 0


def test_surface_from_covers_examples():
    patch = surface_from_covers(ALL_OPEN, _base(2), _base(4))
    assert all(v == 1 for v in patch.values.values())
    field = OverrideField(2, closed=[(0, 1)])
    patch = surface_from_covers(field, _base(2), _base(5))
    assert patch.values[(0,)] == 2
    assert patch.values[(1,)] == 1 and patch.values[(-1,)] == 1
    assert "via-covers" in patch.method


def test_surface_from_covers_below_floor_surface():
    base = _base(2)
    window = _base(5)
    for rep in range(100):
        field = PercolationField(2, 0.97, master_seed=202, replicate=rep)
        via_covers = surface_from_covers(field, base, window)
        via_floor = build_surface(field, base)
        for col in base:
            if (via_floor.status[col] is Cert.CERTIFIED
                    and via_covers.status[col] is Cert.CERTIFIED):
                assert via_covers.values[col] <= via_floor.values[col]


def test_equivariance_smoke():
    from lipsurf.harness import signed_permutations
    base = _base(2, k=2)
    for rep in range(5):
        field = PercolationField(3, 0.98, master_seed=303, replicate=rep)
        patch = build_surface(field, base)
        for perm, signs in signed_permutations(2):
            view = SignedPermutationField(field, perm, signs)
            vpatch = build_surface(view, base)
            for col in base:
                mapped = view.map_column(col)
                assert vpatch.values[col] == patch.values[mapped]
                assert vpatch.status[col] is patch.status[mapped]


def test_antitone_coupling_in_p():
    base = _base(8)
    for rep in range(50):
        lo_field = PercolationField(2, 0.97, master_seed=404, replicate=rep)
        hi_field = lo_field.with_p(0.99)
        lo_patch = build_surface(lo_field, base)
        hi_patch = build_surface(hi_field, base)
        for col in base:
            if (lo_patch.status[col] is Cert.CERTIFIED
                    and hi_patch.status[col] is Cert.CERTIFIED):
                assert hi_patch.values[col] <= lo_patch.values[col]


def test_serialization_shapes():
    field = OverrideField(2, closed=[(0, 1)])
    patch = build_surface(field, _base(2))
    obj = json.loads(patch.to_json_str())
    assert set(obj) == {"columns", "values", "status", "method"}
    assert len(obj["columns"]) == len(obj["values"]) == len(obj["status"]) == 5
    cover = minimal_cover(field, (0,))
    cov = cover.to_json()
    assert cov["status"] == "certified-finite"
    assert cov["cover_radius"] == 2 and cov["spread_radius"] == 1


def test_unresolved_on_tiny_budget():
    # growth cap zero and a one-level box cannot certify busy columns
    field = PercolationField(2, 0.9, master_seed=9)
    patch = build_surface(field, _base(2), Budget(margin=1, height=2, growth_cap=0))
    assert set(patch.status.values()) <= {Cert.CERTIFIED, Cert.UNRESOLVED}
    cover = minimal_cover(field, (0,), Budget(margin=1, height=1, growth_cap=0))
    assert isinstance(cover.certified, bool)
