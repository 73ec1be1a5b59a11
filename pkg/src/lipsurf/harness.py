"""Monte Carlo experiments: tail curves against explicit bounds, surface
validity, existence probing, equivariance and monotonicity checks, and the
config-file driven runner behind the command line.

Estimates are accounted pessimistically: a replicate the certification
budget cannot resolve widens the reported interval (miss on the lower
side, hit on the upper side) and is counted in unresolved_frac, never
silently dropped.  Replicate seeds derive from (master_seed,
replicate_index) through the lattice mixing, so any partition of the
replicate range over workers merges by plain count addition; outputs are
a pure function of the experiment description.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass
from typing import Iterable

from . import __version__ as _version
from .bounds import (HypothesisError, spread_rate, spread_tail_bound,
                     surface_tail_bound)
from .brw import OffspringLaw, martingale_table, survival_curve
from .lattice import BoxRegion, Column, PercolationField, SignedPermutationField
from .reach import Budget, StepSet, column_run, floor_reach_sandwich
from .stats import Z_99, wilson_interval
from .surface import Cert, build_surface, minimal_cover, verify_surface

TAIL_CSV_HEADER = "k,trials,hits_lo,hits_hi,p_lo,p_hi,ci_lo,ci_hi,bound,unresolved_frac"

KINDS = ("f_tail", "radh_tail", "rho_tail", "surface_validity",
         "existence_curve", "equivariance", "monotonicity", "brw")
_BOUND_KINDS = ("f_tail", "radh_tail", "rho_tail")


class ConfigError(ValueError):
    """Invalid experiment description; the message names the offending field."""

    def __init__(self, field_name: str, problem: str):
        self.field_name = field_name
        super().__init__(f"config field '{field_name}': {problem}")


class BudgetExceededError(RuntimeError):
    """Certification left more replicates unresolved than the threshold allows."""


@dataclass(frozen=True)
class Experiment:
    """One experiment description; JSON configs mirror these fields."""

    kind: str
    d: int = 2
    p: float = 0.99
    p_grid: tuple[float, ...] | None = None
    replicates: int = 1000
    seed: int = 0
    k_max: int = 4
    box_margin: int = 6
    box_height: int = 8
    growth_cap: int = 3
    step_mode: StepSet = StepSet.FULL
    base_radius: int = 5
    mu: float = 0.6931471805599453
    runs: int = 1000
    generations: int = 8
    depth_cap: int = 30
    weight_floor: float = 0.0
    unresolved_threshold: float = 1e-3

    @property
    def budget(self) -> Budget:
        return Budget(self.box_margin, self.box_height, self.growth_cap)


_FIELD_TYPES = {
    "kind": str, "d": int, "p": float, "p_grid": list, "replicates": int,
    "seed": int, "k_max": int, "n_max": int, "box_margin": int,
    "box_height": int, "growth_cap": int, "step_mode": str,
    "base_radius": int, "mu": float, "runs": int, "generations": int,
    "depth_cap": int, "weight_floor": float, "unresolved_threshold": float,
    "out": str, "format": str,
}


def experiment_from_config(obj: dict) -> Experiment:
    """Validate a raw config mapping; every failure names its field."""
    if not isinstance(obj, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    for key, val in obj.items():
        if key not in _FIELD_TYPES:
            raise ConfigError(key, "unknown field")
        want = _FIELD_TYPES[key]
        if want is float and isinstance(val, int) and not isinstance(val, bool):
            continue
        if not isinstance(val, want) or isinstance(val, bool):
            raise ConfigError(key, f"expected {want.__name__}, got {type(val).__name__}")
    if "kind" not in obj:
        raise ConfigError("kind", "missing (one of %s)" % ", ".join(KINDS))
    if obj["kind"] not in KINDS:
        raise ConfigError("kind", f"unknown kind '{obj['kind']}'")
    kwargs = {k: v for k, v in obj.items() if k in Experiment.__dataclass_fields__}
    if "n_max" in obj:
        kwargs["k_max"] = obj["n_max"]
    if "step_mode" in obj:
        modes = {s.value: s for s in StepSet}
        if obj["step_mode"] not in modes:
            raise ConfigError("step_mode", f"expected one of {sorted(modes)}")
        kwargs["step_mode"] = modes[obj["step_mode"]]
    if "p_grid" in obj and obj["p_grid"] is not None:
        grid = obj["p_grid"]
        if not grid or any(not isinstance(x, (int, float)) or isinstance(x, bool)
                           for x in grid):
            raise ConfigError("p_grid", "must be a nonempty list of numbers")
        if sorted(grid) != list(grid):
            raise ConfigError("p_grid", "must be sorted ascending")
        if any(not 0.0 < x < 1.0 for x in grid):
            raise ConfigError("p_grid", "entries must lie in (0,1)")
        kwargs["p_grid"] = tuple(float(x) for x in grid)
    exp = Experiment(**kwargs)
    if exp.d < 2:
        raise ConfigError("d", "must be >= 2")
    if not 0.0 < exp.p < 1.0:
        raise ConfigError("p", "must lie in (0,1)")
    if exp.replicates < 1:
        raise ConfigError("replicates", "must be >= 1")
    if exp.k_max < 0:
        raise ConfigError("k_max", "must be >= 0")
    if exp.box_margin < 1 or exp.box_height < 1:
        raise ConfigError("box_margin/box_height", "must be >= 1")
    if exp.growth_cap < 0:
        raise ConfigError("growth_cap", "must be >= 0")
    if exp.kind == "existence_curve" and exp.p_grid is None:
        raise ConfigError("p_grid", "required for existence_curve")
    if exp.kind in ("radh_tail", "rho_tail") and exp.step_mode is not StepSet.FULL:
        raise ConfigError("step_mode",
                          "spread/cover tails are defined for the full step set only")
    return exp


@dataclass(frozen=True)
class TailRow:
    k: int
    trials: int
    hits_lo: int
    hits_hi: int
    ci_lo: float
    ci_hi: float
    bound: float

    @property
    def p_lo(self) -> float:
        return self.hits_lo / self.trials

    @property
    def p_hi(self) -> float:
        return self.hits_hi / self.trials

    @property
    def unresolved_frac(self) -> float:
        return (self.hits_hi - self.hits_lo) / self.trials


@dataclass(frozen=True)
class TailCurve:
    """Per-level tail estimates with Wilson 99% intervals and the matching
    closed-form bound column (recomputed from the bounds module, never
    cached elsewhere)."""

    kind: str
    d: int
    p: float
    rows: tuple[TailRow, ...]

    def max_unresolved_frac(self) -> float:
        return max((r.unresolved_frac for r in self.rows), default=0.0)

    def to_csv(self) -> str:
        lines = [TAIL_CSV_HEADER]
        for r in self.rows:
            lines.append(",".join([
                repr(r.k), repr(r.trials), repr(r.hits_lo), repr(r.hits_hi),
                repr(r.p_lo), repr(r.p_hi), repr(r.ci_lo), repr(r.ci_hi),
                repr(r.bound), repr(r.unresolved_frac)]))
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"kind": self.kind, "d": self.d, "p": self.p,
                "rows": [{"k": r.k, "trials": r.trials, "hits_lo": r.hits_lo,
                          "hits_hi": r.hits_hi, "p_lo": r.p_lo, "p_hi": r.p_hi,
                          "ci_lo": r.ci_lo, "ci_hi": r.ci_hi, "bound": r.bound,
                          "unresolved_frac": r.unresolved_frac}
                         for r in self.rows]}


def _tail_rows(kind, d, p, hits_lo, hits_hi, trials, bound_at) -> TailCurve:
    rows = []
    for k in range(len(hits_lo)):
        lo, hi = hits_lo[k], hits_hi[k]
        rows.append(TailRow(k, trials, lo, hi,
                            wilson_interval(lo, trials, Z_99)[0],
                            wilson_interval(hi, trials, Z_99)[1],
                            bound_at(k)))
    return TailCurve(kind, d, p, tuple(rows))


def _origin_floor_runs(field, k_max: int, budget: Budget,
                       step_set: StepSet) -> tuple[int, int]:
    """Optimistic and pessimistic runs of the floor-reachable set in the
    origin column, grown until agreement strictly below the box top."""
    h = max(budget.height, k_max + 2)
    col = (0,) * (field.d - 1)
    ro = rp = 0
    for attempt in range(budget.growth_cap + 1):
        pad = h + budget.margin
        lo = tuple([-pad] * (field.d - 1) + [0])
        hi = tuple([pad] * (field.d - 1) + [h])
        sw = floor_reach_sandwich(field, BoxRegion(lo, hi), step_set)
        ro = column_run(sw.optimistic, col)
        rp = column_run(sw.pessimistic, col)
        # resolved: the sides agree strictly below the top, or every level
        # up to k_max is already a certain hit
        if (ro == rp and rp < h - 1) or ro >= k_max:
            break
        if attempt < budget.growth_cap:
            h *= 2
    return ro, rp


def surface_tail_curve(exp: Experiment) -> TailCurve:
    """Tail of the surface height at the origin column: per replicate the
    sandwich certifies how far the origin column lies in the floor-reachable
    set, and F(0) > k exactly when the run reaches height k."""
    restricted = exp.step_mode is StepSet.NO_STRAIGHT_DOWN
    if spread_rate(exp.d, exp.p, restricted) >= 1.0:
        raise HypothesisError(
            f"a^2*q >= 1 at d={exp.d}, p={exp.p}; tail bound hypothesis violated")
    kmax = exp.k_max
    hits_lo = [0] * (kmax + 1)
    hits_hi = [0] * (kmax + 1)
    for rep in range(exp.replicates):
        field = PercolationField(exp.d, exp.p, exp.seed, rep)
        ro, rp = _origin_floor_runs(field, kmax, exp.budget, exp.step_mode)
        for k in range(kmax + 1):
            if ro >= k:
                hits_lo[k] += 1
            if rp >= k:
                hits_hi[k] += 1
    return _tail_rows("f_tail", exp.d, exp.p, hits_lo, hits_hi, exp.replicates,
                      lambda k: surface_tail_bound(exp.d, exp.p, k, restricted))


def spread_tail_curve(exp: Experiment) -> TailCurve:
    """Tail of the climb-set spread radius at the origin column."""
    if spread_rate(exp.d, exp.p) >= 1.0:
        raise HypothesisError(
            f"a^2*q >= 1 at d={exp.d}, p={exp.p}; tail bound hypothesis violated")
    kmax = exp.k_max
    hits_lo = [0] * (kmax + 1)
    hits_hi = [0] * (kmax + 1)
    origin = (0,) * (exp.d - 1)
    for rep in range(exp.replicates):
        field = PercolationField(exp.d, exp.p, exp.seed, rep)
        cover = minimal_cover(field, origin, exp.budget)
        for k in range(kmax + 1):
            if cover.spread_radius >= k:
                hits_lo[k] += 1
                hits_hi[k] += 1
            elif not cover.certified:
                hits_hi[k] += 1
    return _tail_rows("radh_tail", exp.d, exp.p, hits_lo, hits_hi, exp.replicates,
                      lambda k: spread_tail_bound(exp.d, exp.p, k))


def cover_tail_curve(exp: Experiment) -> TailCurve:
    """Tail of the minimal-cover radius at the origin column, levels
    n = 0..k_max+1; the bound column is the spread bound shifted by one
    (the cover radius exceeds the spread radius by exactly one)."""
    if spread_rate(exp.d, exp.p) >= 1.0:
        raise HypothesisError(
            f"a^2*q >= 1 at d={exp.d}, p={exp.p}; tail bound hypothesis violated")
    nmax = exp.k_max + 1
    hits_lo = [0] * (nmax + 1)
    hits_hi = [0] * (nmax + 1)
    origin = (0,) * (exp.d - 1)
    for rep in range(exp.replicates):
        field = PercolationField(exp.d, exp.p, exp.seed, rep)
        cover = minimal_cover(field, origin, exp.budget)
        for n in range(nmax + 1):
            if cover.cover_radius >= n:
                hits_lo[n] += 1
                hits_hi[n] += 1
            elif not cover.certified:
                hits_hi[n] += 1

    def bound_at(n: int) -> float:
        return spread_tail_bound(exp.d, exp.p, max(0, n - 1))

    return _tail_rows("rho_tail", exp.d, exp.p, hits_lo, hits_hi,
                      exp.replicates, bound_at)


def surface_validity(exp: Experiment) -> dict:
    """Build replicate surfaces over a base patch and verify openness and
    the Lipschitz property on every certified column."""
    base = _base_ball(exp.d, exp.base_radius)
    total = certified = 0
    open_bad = lip_bad = 0
    for rep in range(exp.replicates):
        field = PercolationField(exp.d, exp.p, exp.seed, rep)
        patch = build_surface(field, base, exp.budget)
        report = verify_surface(field, patch)
        total += len(patch.columns)
        certified += len(patch.certified_columns())
        open_bad += len(report.openness_violations)
        lip_bad += len(report.lipschitz_violations)
    return {
        "kind": "surface_validity", "d": exp.d, "p": exp.p,
        "replicates": exp.replicates, "columns_total": total,
        "columns_certified": certified,
        "certified_fraction": certified / total if total else 1.0,
        "openness_violations": open_bad, "lipschitz_violations": lip_bad,
    }


def _base_ball(d: int, radius: int) -> list[Column]:
    rng = range(-radius, radius + 1)
    return [tuple(c) for c in itertools.product(rng, repeat=d - 1)]


_REGIME_LABEL = "outside proven regime"


def existence_curve(exp: Experiment) -> list[dict]:
    """Fraction of replicates with a fully certified surface over the base,
    per grid p, on coupled uniforms (same seed and replicate across p).

    This probes where construction succeeds; it estimates no critical
    parameter.  Rows with p at or below 1 - (2d-1)^-2 are labelled as
    outside the regime any bound covers.
    """
    if exp.p_grid is None:
        raise ConfigError("p_grid", "required for existence_curve")
    base = _base_ball(exp.d, exp.base_radius)
    threshold = 1.0 - (2 * exp.d - 1) ** -2
    rows = []
    for p in exp.p_grid:
        successes = 0
        for rep in range(exp.replicates):
            field = PercolationField(exp.d, p, exp.seed, rep)
            patch = build_surface(field, base, exp.budget)
            if all(st is Cert.CERTIFIED for st in patch.status.values()):
                successes += 1
        rows.append({
            "p": p, "successes": successes, "trials": exp.replicates,
            "fraction": successes / exp.replicates,
            "regime": "proven" if p > threshold else _REGIME_LABEL,
        })
    return rows


def signed_permutations(k: int):
    """All isometries of Z^k fixing the origin: coordinate permutations
    composed with sign flips (2^k * k! of them; 8 when k = 2)."""
    for perm in itertools.permutations(range(k)):
        for signs in itertools.product((1, -1), repeat=k):
            yield perm, signs


def equivariance_check(exp: Experiment) -> dict:
    """Exact commutation of surface construction with lattice symmetries:
    building on the remapped field equals remapping the built surface,
    configuration by configuration."""
    base = _base_ball(exp.d, exp.base_radius)
    mismatches = 0
    isometries = list(signed_permutations(exp.d - 1))
    for rep in range(exp.replicates):
        field = PercolationField(exp.d, exp.p, exp.seed, rep)
        patch = build_surface(field, base, exp.budget)
        for perm, signs in isometries:
            view = SignedPermutationField(field, perm, signs)
            vpatch = build_surface(view, base, exp.budget)
            for col in vpatch.columns:
                mapped = view.map_column(col)
                if (vpatch.values[col] != patch.values[mapped]
                        or vpatch.status[col] is not patch.status[mapped]):
                    mismatches += 1
    return {"kind": "equivariance", "d": exp.d, "p": exp.p,
            "replicates": exp.replicates, "isometries": len(isometries),
            "mismatches": mismatches}


def monotonicity_check(exp: Experiment) -> dict:
    """On shared-uniform coupled fields, certified surface values must never
    increase when p increases (opening sites shrinks the floor-reachable set)."""
    if exp.p_grid is None or len(exp.p_grid) < 2:
        raise ConfigError("p_grid", "monotonicity needs a grid of at least two p values")
    base = _base_ball(exp.d, exp.base_radius)
    violations = 0
    pairs = 0
    for rep in range(exp.replicates):
        patches = []
        for p in exp.p_grid:
            field = PercolationField(exp.d, p, exp.seed, rep)
            patches.append(build_surface(field, base, exp.budget))
        for lo_patch, hi_patch in zip(patches, patches[1:]):
            for col in base:
                if (lo_patch.status[col] is Cert.CERTIFIED
                        and hi_patch.status[col] is Cert.CERTIFIED):
                    pairs += 1
                    if hi_patch.values[col] > lo_patch.values[col]:
                        violations += 1
    return {"kind": "monotonicity", "d": exp.d, "p_grid": list(exp.p_grid),
            "replicates": exp.replicates, "pairs_checked": pairs,
            "violations": violations}


BRW_CSV_HEADER = "n,mean_S,se_S,alpha_pow_n,survival_hat,survival_ci_hi,bound"


def brw_rows(exp: Experiment) -> list[dict]:
    """Merged martingale and survival table for the CSV interface."""
    law = OffspringLaw(exp.d, exp.p, exp.mu, exp.depth_cap, exp.weight_floor)
    mart = martingale_table(law, exp.generations, exp.runs, exp.seed)
    surv = survival_curve(law, exp.generations, exp.runs, exp.seed)
    rows = []
    for m, s in zip(mart, surv):
        rows.append({"n": m.n, "mean_S": m.mean_s, "se_S": m.se_s,
                     "alpha_pow_n": m.alpha_pow, "survival_hat": s.frequency,
                     "survival_ci_hi": s.ci_hi, "bound": s.bound})
    return rows


def _rows_to_csv(rows: list[dict], header: str) -> str:
    cols = header.split(",")
    lines = [header]
    for r in rows:
        lines.append(",".join(repr(r[c]) for c in cols))
    return "\n".join(lines) + "\n"


def _existence_csv(rows: list[dict]) -> str:
    header = "p,successes,trials,fraction,regime"
    lines = [header]
    for r in rows:
        lines.append(",".join([repr(r["p"]), repr(r["successes"]),
                               repr(r["trials"]), repr(r["fraction"]),
                               r["regime"]]))
    return "\n".join(lines) + "\n"


def run_experiment(config, out_path: str | None = None) -> dict:
    """Run one experiment from a config mapping or JSON file path.

    Returns {"payload": ..., "csv": ..., "paths": [...]} and, when an output
    path is given (argument or config["out"]), writes the CSV (or JSON) body
    there plus a sibling .meta.json with seed, version, and wall time.  The
    body is a pure function of the config; only the metadata carries timing.
    """
    if isinstance(config, (str, bytes)):
        try:
            with open(config, "r", encoding="utf-8") as fh:
                config = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError("<file>", f"cannot read config: {e}") from e
    out_path = out_path or config.get("out")
    fmt = config.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError("format", "expected 'csv' or 'json'")
    exp = experiment_from_config(config)

    start = time.time()
    if exp.kind == "f_tail":
        curve = surface_tail_curve(exp)
        payload, csv_text = curve.to_json(), curve.to_csv()
        overflow = curve.max_unresolved_frac() > exp.unresolved_threshold
    elif exp.kind == "radh_tail":
        curve = spread_tail_curve(exp)
        payload, csv_text = curve.to_json(), curve.to_csv()
        overflow = curve.max_unresolved_frac() > exp.unresolved_threshold
    elif exp.kind == "rho_tail":
        curve = cover_tail_curve(exp)
        payload, csv_text = curve.to_json(), curve.to_csv()
        overflow = curve.max_unresolved_frac() > exp.unresolved_threshold
    elif exp.kind == "surface_validity":
        payload = surface_validity(exp)
        csv_text = _rows_to_csv(
            [payload], ",".join(k for k in payload if k != "kind"))
        overflow = (1.0 - payload["certified_fraction"]) > exp.unresolved_threshold
    elif exp.kind == "existence_curve":
        rows = existence_curve(exp)
        payload = {"kind": "existence_curve", "rows": rows}
        csv_text = _existence_csv(rows)
        overflow = False
    elif exp.kind == "equivariance":
        payload = equivariance_check(exp)
        csv_text = _rows_to_csv([payload], "d,p,replicates,isometries,mismatches")
        overflow = False
    elif exp.kind == "monotonicity":
        payload = monotonicity_check(exp)
        csv_text = _rows_to_csv([payload], "replicates,pairs_checked,violations")
        overflow = False
    elif exp.kind == "brw":
        rows = brw_rows(exp)
        payload = {"kind": "brw", "rows": rows}
        csv_text = _rows_to_csv(rows, BRW_CSV_HEADER)
        overflow = False
    else:  # pragma: no cover - kinds validated upstream
        raise ConfigError("kind", f"unhandled kind {exp.kind}")
    elapsed = time.time() - start

    paths = []
    if out_path:
        body = json.dumps(payload, sort_keys=True, indent=2) + "\n" \
            if fmt == "json" else csv_text
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(body)
        meta = {
            "config": {k: (list(v) if isinstance(v, tuple) else v)
                       for k, v in config.items()},
            "kind": exp.kind, "seed": exp.seed, "version": _version,
            "wall_time_s": elapsed,
        }
        meta_path = out_path + ".meta.json"
        with open(meta_path, "w", encoding="utf-8") as fh:
            json.dump(meta, fh, sort_keys=True, indent=2)
            fh.write("\n")
        paths = [out_path, meta_path]

    if overflow:
        raise BudgetExceededError(
            f"unresolved fraction exceeded threshold {exp.unresolved_threshold}")
    return {"payload": payload, "csv": csv_text, "paths": paths,
            "wall_time_s": elapsed}


def cover_sweep(p: float = 0.99, radius: int = 2, h_max: int = 2) -> dict:
    """Exhaustive sweep over every configuration of the d=2 box
    [-radius, radius] x [0, h_max]: the engine's minimal cover must equal
    the oracle's least fixed point wherever both certify, and the sweep
    accumulates exact spread-tail probabilities for cross-checking Monte
    Carlo intervals."""
    from .lattice import ExplicitConfig, ExplicitField
    from .oracle import NoCoverInBox, attained_spread, cover_fixed_point

    box = BoxRegion((-radius, 0), (radius, h_max))
    n = box.size
    budget = Budget(margin=radius, height=h_max, growth_cap=0)
    q = 1.0 - p
    p_pow = [p ** k for k in range(n + 1)]
    q_pow = [q ** k for k in range(n + 1)]
    origin = (0,)
    both = mismatches = 0
    spread_prob = {k: 0.0 for k in range(1, h_max + 1)}
    for bits in range(1 << n):
        config = ExplicitConfig.from_bits(box, bits)
        prob = p_pow[bits.bit_count()] * q_pow[n - bits.bit_count()]
        spread = attained_spread(config, origin)
        for k in spread_prob:
            if spread >= k:
                spread_prob[k] += prob
        fast = minimal_cover(ExplicitField(config), origin, budget)
        orc = cover_fixed_point(config, origin, h_max)
        if fast.certified and not isinstance(orc, NoCoverInBox):
            both += 1
            if (fast.entries != orc.entries
                    or fast.spread_radius != orc.spread_radius
                    or fast.cover_radius != orc.cover_radius):
                mismatches += 1
    return {"name": "cover_sweep", "configs": 1 << n, "both_certified": both,
            "mismatches": mismatches, "exact_spread_tail": spread_prob,
            "passed": mismatches == 0}


def walk_path_sweep() -> dict:
    """Every configuration of a 3x3 (d=2) box: breadth-first walk reach,
    the oracle's naive walk fixed point, and the oracle's distinct-site
    path enumeration must reach identical site sets."""
    from .lattice import ExplicitConfig, ExplicitField
    from .oracle import path_reach, walk_reach
    from .reach import reach

    box = BoxRegion((-1, 0), (1, 2))
    bottom = [(-1, 0), (0, 0), (1, 0)]
    disagreements = 0
    cases = 0
    for bits in range(1 << box.size):
        config = ExplicitConfig.from_bits(box, bits)
        field = ExplicitField(config)
        for sources, floor in (([(0, 0)], 0), (bottom, 0),
                               ([(0, 1)], None), ([(0, 2)], None)):
            cases += 1
            fast = reach(field, sources, box, height_floor=floor).reached
            slow_walk = walk_reach(config, sources, height_floor=floor)
            slow_path = path_reach(config, sources, height_floor=floor)
            if not (fast == slow_walk == slow_path):
                disagreements += 1
    return {"name": "walk_path_sweep", "cases": cases,
            "disagreements": disagreements, "passed": disagreements == 0}


def bucket_check(d: int, max_len: int, step_set: StepSet = StepSet.FULL) -> dict:
    """Every (up, down) bucket of the exhaustive path enumeration must hold
    at most a^(up+down) paths."""
    from .bounds import step_count
    from .oracle import enum_paths

    a = step_count(d, step_set is StepSet.NO_STRAIGHT_DOWN)
    enum = enum_paths(d, step_set, max_len)
    worst = 0.0
    failures = 0
    for (u, dn), cnt in enum.by_ud.items():
        ratio = cnt / a ** (u + dn)
        worst = max(worst, ratio)
        if cnt > a ** (u + dn):
            failures += 1
    return {"name": f"bucket_check(d={d},len<={max_len},{step_set.value})",
            "buckets": len(enum.by_ud), "worst_ratio": worst,
            "failures": failures, "passed": failures == 0}


def en_check(d: int, p: float, max_len: int,
             pairs: Iterable[tuple[int, int]] = ((0, 0), (1, 0), (0, 1), (-1, 1)),
             step_set: StepSet = StepSet.FULL) -> dict:
    """Truncated expected-path sums must stay below the closed-form bound."""
    from .bounds import path_sum_bound
    from .oracle import partial_expected_visits

    restricted = step_set is StepSet.NO_STRAIGHT_DOWN
    results = []
    failures = 0
    for h, r in pairs:
        partial = partial_expected_visits(d, p, h, r, max_len, step_set)
        bound = path_sum_bound(d, p, h, r, restricted)
        ok = partial <= bound
        failures += 0 if ok else 1
        results.append({"h": h, "r": r, "partial": partial, "bound": bound,
                        "ok": ok})
    return {"name": f"en_check(d={d},p={p})", "pairs": results,
            "failures": failures, "passed": failures == 0}


def oracle_suite(p: float = 0.99, max_len: int = 6) -> dict:
    """The standard oracle sweeps behind the `oracle` subcommand."""
    checks = [
        cover_sweep(p=p),
        walk_path_sweep(),
        bucket_check(2, max_len),
        bucket_check(2, max_len, StepSet.NO_STRAIGHT_DOWN),
        bucket_check(3, min(max_len, 6)),
        en_check(2, p, max_len),
        en_check(3, p, min(max_len, 6)),
    ]
    return {"checks": checks, "all_passed": all(c["passed"] for c in checks)}
