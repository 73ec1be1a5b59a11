"""Admissible-step reachability with two-sided box certificates.

Steps move up (+e_d), straight down (-e_d), or diagonally down
(-e_d +- e_j); an upward step is admissible only when it lands on a closed
site, while every downward or diagonal step is unconditionally allowed.
Reachability inside a finite box is computed by breadth-first expansion
over a visited mask.  The distinct-sites requirement on paths changes
nothing: loop-erasing an admissible walk keeps every remaining step (and
its admissibility), so walk- and path-reachability agree.  The oracle
module re-verifies this exhaustively on tiny boxes.

Certification.  Membership is easy to certify (a path found inside the box
is a path, full stop), non-membership is the delicate direction.  For a
reach computation whose true sources live on the floor layer, outside
influence can enter a box three ways:

* horizontally, by a diagonal step through an inner side-boundary site --
  sealed exactly by seeding every side-boundary site in the pessimistic
  variant (the entering step is unconditional, so seeding is the worst
  case, and any entering path continues inside the box from the seed);
* from below, by an upward step into a floor-layer site -- floor layers
  are already sources here, so nothing is lost;
* from above the box top.  No finite computation can seal this direction:
  arbitrarily tall closed towers far away always carry positive
  probability and could feed a descent into any box.  The pessimistic
  variant is therefore exact for the model truncated at the box height,
  and the truncation is driven to irrelevance by box growth: the
  probability that sites above height h matter for a given column decays
  geometrically like (a*q)^h.  At the parameters this package targets the
  residual is many orders below Monte Carlo resolution, and it is reported,
  never hidden.

The growth loop doubles the box height (the side margin tracks the height,
since a side seed at height t can influence a column only down to height
t - distance) until the optimistic and pessimistic answers agree.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from enum import Enum

from .lattice import BoxRegion, Field, PercolationField, Site
from .stats import Z_99, wilson_interval


class StepSet(Enum):
    FULL = "full"
    NO_STRAIGHT_DOWN = "no-straight-down"


def step_vectors(d: int, step_set: StepSet = StepSet.FULL) -> list[Site]:
    """The 2d (or 2d-1) step displacements for dimension d."""
    if d < 2:
        raise ValueError("d must be >= 2")
    up = tuple([0] * (d - 1) + [1])
    down = tuple([0] * (d - 1) + [-1])
    steps = [up]
    if step_set is StepSet.FULL:
        steps.append(down)
    for j in range(d - 1):
        for s in (1, -1):
            vec = [0] * d
            vec[j] = s
            vec[-1] = -1
            steps.append(tuple(vec))
    return steps


def successors(field: Field, site: Site, step_set: StepSet = StepSet.FULL,
               height_floor: int | None = None) -> list[Site]:
    """Admissible one-step successors of a site (no box clipping).

    The upward successor appears iff its target is closed; downward and
    diagonal successors always appear; successors below height_floor are
    dropped.
    """
    out = []
    for step in step_vectors(field.d, step_set):
        nxt = tuple(a + b for a, b in zip(site, step))
        if height_floor is not None and nxt[-1] < height_floor:
            continue
        if step[-1] == 1 and not field.is_closed(nxt):
            continue
        out.append(nxt)
    return out


@dataclass(frozen=True)
class ReachResult:
    """Sites of a box reachable from a source set by admissible steps.

    Boundary-contact flags record whether the reached set touches the inner
    boundary layers; they drive the grow-until-certified loops.
    """

    reached: frozenset[Site]
    sources: frozenset[Site]
    box: BoxRegion
    touched_side: bool
    touched_top: bool
    touched_bottom: bool


def _bfs(d: int, seeds, box: BoxRegion, steps, height_floor,
         closed: frozenset[Site], seen: set[Site]) -> None:
    """Expand seen in place from the seeds; seeds must already be in seen."""
    lo, hi = box.lo, box.hi
    rng = range(d)
    queue = deque(seeds)
    while queue:
        site = queue.popleft()
        for st, is_up in steps:
            nxt = tuple(site[i] + st[i] for i in rng)
            if nxt in seen:
                continue
            ok = True
            for i in rng:
                if not lo[i] <= nxt[i] <= hi[i]:
                    ok = False
                    break
            if not ok:
                continue
            if height_floor is not None and nxt[-1] < height_floor:
                continue
            if is_up and nxt not in closed:
                continue
            seen.add(nxt)
            queue.append(nxt)


def _result(seen: set[Site], src: frozenset[Site], box: BoxRegion) -> ReachResult:
    d = box.dim
    lo, hi = box.lo, box.hi
    touched_side = any(
        any(s[i] == lo[i] or s[i] == hi[i] for i in range(d - 1)) for s in seen)
    touched_top = any(s[-1] == hi[-1] for s in seen)
    touched_bottom = any(s[-1] == lo[-1] for s in seen)
    return ReachResult(frozenset(seen), src, box, touched_side, touched_top,
                       touched_bottom)


def reach(field: Field, sources, box: BoxRegion,
          step_set: StepSet = StepSet.FULL,
          height_floor: int | None = None,
          _closed: frozenset[Site] | None = None) -> ReachResult:
    """All sites of the box connected to the sources by admissible steps
    staying inside the box (and at or above height_floor, when given).

    Order-free: the result depends only on the source *set*.  Walks and
    distinct-site paths reach the same sites (loop erasure), so BFS over a
    visited set is exact.
    """
    d = field.d
    src = frozenset(tuple(s) for s in sources)
    if not src:
        return ReachResult(frozenset(), frozenset(), box, False, False, False)
    for s in src:
        if len(s) != d:
            raise ValueError(f"source {s} has wrong dimension")
        if not box.contains(s):
            raise ValueError(f"source {s} outside box lo={box.lo} hi={box.hi}")
    closed = _closed if _closed is not None else field.closed_sites(box)
    steps = [(st, st[-1] == 1) for st in step_vectors(d, step_set)]
    seen = set(src)
    _bfs(d, src, box, steps, height_floor, closed, seen)
    return _result(seen, src, box)


@dataclass(frozen=True)
class ReachSandwich:
    """Optimistic and pessimistic floor reaches over one box.

    optimistic.reached is a guaranteed subset of the true floor-reachable
    set within the box; pessimistic.reached is a superset of it for the
    height-truncated model (see the module docstring for the one direction
    finite computation cannot close).
    """

    optimistic: ReachResult
    pessimistic: ReachResult


def _bottom_layer(box: BoxRegion) -> list[Site]:
    base = BoxRegion(box.lo[:-1], box.hi[:-1])
    h = box.lo[-1]
    return [(*col, h) for col in base.sites()]


def _side_layer(box: BoxRegion) -> list[Site]:
    d = box.dim
    out: set[Site] = set()
    for axis in range(d - 1):
        ranges = [range(box.lo[i], box.hi[i] + 1) for i in range(d)]
        for bound in (box.lo[axis], box.hi[axis]):
            ranges_ax = list(ranges)
            ranges_ax[axis] = (bound,)
            out.update(itertools.product(*ranges_ax))
    return list(out)


def floor_reach_sandwich(field: Field, box: BoxRegion,
                         step_set: StepSet = StepSet.FULL) -> ReachSandwich:
    """Two-sided computation of the set reachable from the height-0 layer.

    The box must span heights [0, h_max] with h_max >= 1.  The optimistic
    variant seeds the full height-0 layer of the box; the pessimistic
    variant additionally seeds every inner side-boundary site (worst-case
    horizontal entry).  For every configuration outside the box sides, the
    true reachable set of the height-truncated model, intersected with the
    box, lies between the two.

    The pessimistic set is computed incrementally on top of the optimistic
    one (reachability from a union is the union's closure), so the extra
    cost is proportional to the pessimism-only region.
    """
    if box.lo[-1] != 0:
        raise ValueError("box must have its bottom layer at height 0")
    if box.hi[-1] < 1:
        raise ValueError(f"degenerate box: top height {box.hi[-1]} < 1")
    d = field.d
    closed = field.closed_sites(box)
    steps = [(st, st[-1] == 1) for st in step_vectors(d, step_set)]
    bottom = frozenset(_bottom_layer(box))
    seen = set(bottom)
    _bfs(d, bottom, box, steps, 0, closed, seen)
    opt = _result(seen, bottom, box)
    side = _side_layer(box)
    pes_src = bottom | frozenset(side)
    pes_seen = set(opt.reached)
    fresh = [s for s in side if s not in pes_seen]
    pes_seen.update(fresh)
    _bfs(d, fresh, box, steps, 0, closed, pes_seen)
    pes = _result(pes_seen, pes_src, box)
    return ReachSandwich(opt, pes)


def column_run(result: ReachResult, column) -> int:
    """Largest m with (column, 1..m) all reached; 0 when (column, 1) is not."""
    col = tuple(column)
    top = result.box.hi[-1]
    m = 0
    while m < top and (*col, m + 1) in result.reached:
        m += 1
    return m


@dataclass(frozen=True)
class Budget:
    """Box-growth policy: initial margin and height, and how many doublings."""

    margin: int = 6
    height: int = 8
    growth_cap: int = 3

    def __post_init__(self):
        if self.margin < 1 or self.height < 1 or self.growth_cap < 0:
            raise ValueError("budget fields must be positive (growth_cap >= 0)")


@dataclass(frozen=True)
class ReachProbEstimate:
    """Interval estimate of P(origin reaches target) from sandwiched replicates.

    Replicates the sandwich leaves unresolved widen the interval: they count
    as misses on the lower side and hits on the upper side, and are reported.
    """

    target: Site
    trials: int
    hits_lower: int
    hits_upper: int
    unresolved: int
    ci_lower: float
    ci_upper: float


def estimate_reach_prob(d: int, p: float, target: Site, *, master_seed: int,
                        replicates: int, budget: Budget = Budget(),
                        step_set: StepSet = StepSet.FULL,
                        z: float = Z_99) -> ReachProbEstimate:
    """Monte Carlo interval for the probability that the origin reaches the
    target by an admissible path.

    Per replicate the optimistic reach seeds the origin alone; the
    pessimistic adds every inner side-boundary site and every *closed*
    bottom-layer site (an upward entry from below is admissible only onto a
    closed site, which is in-box information).  Boxes span negative heights
    because paths from the origin may dip below 0, and grow until the two
    variants agree on target membership or the cap is hit.
    """
    target = tuple(target)
    if len(target) != d:
        raise ValueError("target has wrong dimension")
    if target == (0,) * d:
        # zero-length paths are admitted, so the origin always reaches itself
        return ReachProbEstimate(target, replicates, replicates, replicates,
                                 0, 1.0, 1.0)
    hits_lo = hits_hi = unresolved = 0
    t_radial = max((abs(c) for c in target[:-1]), default=0)
    for rep in range(replicates):
        field = PercolationField(d, p, master_seed, replicate=rep)
        h = max(budget.height, abs(target[-1]) + 2)
        resolved = None
        for _ in range(budget.growth_cap + 1):
            # side extent exceeds the height so that worst-case side entries
            # need several closed-site climbs to influence the target column
            extent = h + budget.margin + t_radial
            ht = h
            lo = tuple([-extent] * (d - 1) + [-ht])
            hi = tuple([extent] * (d - 1) + [ht])
            box = BoxRegion(lo, hi)
            closed = field.closed_sites(box)
            origin = (0,) * d
            opt = reach(field, [origin], box, step_set, _closed=closed)
            if target in opt.reached:
                resolved = True
                break
            pes_sources = {origin}
            pes_sources.update(_side_layer(box))
            pes_sources.update(s for s in _bottom_layer(box) if s in closed)
            pes = reach(field, pes_sources, box, step_set, _closed=closed)
            if target not in pes.reached:
                resolved = False
                break
            h *= 2
        if resolved is True:
            hits_lo += 1
            hits_hi += 1
        elif resolved is None:
            unresolved += 1
            hits_hi += 1
    ci_lo = wilson_interval(hits_lo, replicates, z)[0]
    ci_hi = wilson_interval(hits_hi, replicates, z)[1]
    return ReachProbEstimate(target, replicates, hits_lo, hits_hi,
                             unresolved, ci_lo, ci_hi)
