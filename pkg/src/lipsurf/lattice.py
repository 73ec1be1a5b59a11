"""Site percolation fields on Z^d with deterministic, splittable sampling.

Every site of the hypercubic lattice is open with probability p and closed
otherwise, independently across sites.  Fields here are *virtual* infinite
configurations: the state of a site is a pure function of
(master_seed, replicate, coordinates, p), obtained by avalanche-mixing the
integers into a 64-bit per-site uniform and comparing against a threshold
derived from p.  Three consequences are load-bearing for the rest of the
package:

* replayable -- any worker may query any site in any order, and enlarging
  a query window never changes previously observed states;
* splittable -- distinct (master_seed, replicate) pairs give independent
  streams, so Monte Carlo replicates need no shared generator state;
* monotone coupling -- the per-site uniform does not depend on p, so for
  fields sharing (master_seed, replicate), raising p can only turn closed
  sites open, never the reverse.

The uniform is quantized to 64 bits, so p is honoured to resolution 2**-64,
far below Monte Carlo noise at any feasible sample size.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Iterable, Iterator

import numpy as np

Site = tuple[int, ...]
Column = tuple[int, ...]

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_C1 = 0xBF58476D1CE4E5B9
_C2 = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """splitmix64 finalizer with the golden-ratio increment folded in."""
    x = (x + _GOLDEN) & _MASK
    x ^= x >> 30
    x = (x * _C1) & _MASK
    x ^= x >> 27
    x = (x * _C2) & _MASK
    return x ^ (x >> 31)


def absorb(h: int, value: int) -> int:
    """Fold one integer into a running 64-bit hash state."""
    return mix64(h ^ (value & _MASK))


_NP_GOLDEN = np.uint64(_GOLDEN)
_NP_C1 = np.uint64(_C1)
_NP_C2 = np.uint64(_C2)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)


def _absorb_vec(h: np.ndarray, value: np.ndarray) -> np.ndarray:
    # identical arithmetic to absorb(), elementwise on uint64 arrays
    x = h ^ value
    x = x + _NP_GOLDEN
    x ^= x >> _S30
    x = x * _NP_C1
    x ^= x >> _S27
    x = x * _NP_C2
    return x ^ (x >> _S31)


def open_threshold(p: float) -> int:
    """Exact 64-bit threshold: a site is open iff its uniform is < threshold."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0,1), got {p}")
    return int(Fraction(p) * (1 << 64))


class SiteState(Enum):
    OPEN = "open"
    CLOSED = "closed"


@dataclass(frozen=True)
class BoxRegion:
    """Axis-aligned finite box of Z^d, bounds inclusive on every axis."""

    lo: Site
    hi: Site

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ValueError("lo and hi must have equal length")
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise ValueError(f"empty box: lo={self.lo} hi={self.hi}")
        object.__setattr__(self, "lo", tuple(int(c) for c in self.lo))
        object.__setattr__(self, "hi", tuple(int(c) for c in self.hi))

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(b - a + 1 for a, b in zip(self.lo, self.hi))

    @property
    def size(self) -> int:
        n = 1
        for s in self.shape:
            n *= s
        return n

    def contains(self, site: Site) -> bool:
        return all(a <= c <= b for a, c, b in zip(self.lo, site, self.hi))

    def sites(self) -> Iterator[Site]:
        """All sites in lexicographic order."""
        ranges = [range(a, b + 1) for a, b in zip(self.lo, self.hi)]
        return itertools.product(*ranges)

    def to_json(self) -> dict:
        return {"lo": list(self.lo), "hi": list(self.hi)}

    @staticmethod
    def from_json(obj: dict) -> "BoxRegion":
        return BoxRegion(tuple(obj["lo"]), tuple(obj["hi"]))


def height(site: Site) -> int:
    """Last coordinate of a site."""
    return site[-1]


def radial(site: Site) -> int:
    """1-norm of all coordinates except the last."""
    return sum(abs(c) for c in site[:-1])


def count_l1_sphere(dim: int, n: int) -> int:
    """Number of integer points of Z^dim at 1-norm exactly n.

    Split by the number k of nonzero coordinates: choose them, choose signs,
    and compose n into k positive parts.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return 1
    return sum(
        (1 << k) * comb(dim, k) * comb(n - 1, k - 1)
        for k in range(1, min(dim, n) + 1)
    )


class Field:
    """A (possibly virtual) site configuration on Z^d.

    Subclasses provide is_closed(); bulk queries come in two flavours,
    a dense boolean mask and the usually-sparse set of closed sites.
    """

    d: int

    def is_closed(self, site: Site) -> bool:
        raise NotImplementedError

    def state(self, site: Site) -> SiteState:
        return SiteState.CLOSED if self.is_closed(site) else SiteState.OPEN

    def _check_site(self, site: Site) -> None:
        if len(site) != self.d:
            raise ValueError(f"site {site} has dimension {len(site)}, field has d={self.d}")

    def closed_mask(self, box: BoxRegion) -> np.ndarray:
        mask = np.empty(box.shape, dtype=bool)
        for site in box.sites():
            idx = tuple(c - a for c, a in zip(site, box.lo))
            mask[idx] = self.is_closed(site)
        return mask

    def closed_sites(self, box: BoxRegion) -> frozenset[Site]:
        mask = self.closed_mask(box)
        lo = np.asarray(box.lo)
        coords = np.argwhere(mask) + lo
        return frozenset(map(tuple, coords.tolist()))


class PercolationField(Field):
    """Virtual infinite i.i.d. configuration keyed by (master_seed, replicate).

    The per-site uniform is a pure hash of (master_seed, replicate, coords);
    the site is open iff the uniform falls below the 64-bit threshold for p.
    """

    def __init__(self, d: int, p: float, master_seed: int, replicate: int = 0):
        if d < 2:
            raise ValueError("d must be >= 2")
        if replicate < 0:
            raise ValueError("replicate must be >= 0")
        self.d = d
        self.p = float(p)
        self.master_seed = int(master_seed)
        self.replicate = int(replicate)
        self._threshold = open_threshold(self.p)
        # uniform stream base does not involve p: enables monotone coupling
        self._base = absorb(absorb(0, self.master_seed), self.replicate)

    def uniform64(self, site: Site) -> int:
        self._check_site(site)
        h = self._base
        for c in site:
            h = absorb(h, c)
        return h

    def is_closed(self, site: Site) -> bool:
        return self.uniform64(site) >= self._threshold

    def closed_mask(self, box: BoxRegion) -> np.ndarray:
        if box.dim != self.d:
            raise ValueError(f"box dimension {box.dim} != field dimension {self.d}")
        h = np.full(box.shape, self._base, dtype=np.uint64)
        for axis, (a, b) in enumerate(zip(box.lo, box.hi)):
            coords = np.arange(a, b + 1, dtype=np.int64).astype(np.uint64)
            shape = [1] * box.dim
            shape[axis] = b - a + 1
            h = _absorb_vec(h, coords.reshape(shape))
        return h >= np.uint64(self._threshold)

    def with_p(self, p: float) -> "PercolationField":
        """Coupled field: same uniforms, different threshold."""
        return PercolationField(self.d, p, self.master_seed, self.replicate)

    def __repr__(self):
        return (f"PercolationField(d={self.d}, p={self.p}, "
                f"master_seed={self.master_seed}, replicate={self.replicate})")


class ConstantField(Field):
    """Every site in one fixed state; handy for boundary-case tests."""

    def __init__(self, d: int, state: SiteState):
        self.d = d
        self._closed = state is SiteState.CLOSED

    def is_closed(self, site: Site) -> bool:
        self._check_site(site)
        return self._closed

    def closed_mask(self, box: BoxRegion) -> np.ndarray:
        return np.full(box.shape, self._closed, dtype=bool)

    def closed_sites(self, box: BoxRegion) -> frozenset[Site]:
        if not self._closed:
            return frozenset()
        return frozenset(box.sites())


class OverrideField(Field):
    """All sites open except an explicit finite set of closed sites."""

    def __init__(self, d: int, closed: Iterable[Site] = ()):
        self.d = d
        self.closed = frozenset(tuple(s) for s in closed)
        for s in self.closed:
            self._check_site(s)

    def is_closed(self, site: Site) -> bool:
        self._check_site(site)
        return tuple(site) in self.closed

    def closed_mask(self, box: BoxRegion) -> np.ndarray:
        mask = np.zeros(box.shape, dtype=bool)
        for s in self.closed:
            if box.contains(s):
                mask[tuple(c - a for c, a in zip(s, box.lo))] = True
        return mask

    def closed_sites(self, box: BoxRegion) -> frozenset[Site]:
        return frozenset(s for s in self.closed if box.contains(s))


class SignedPermutationField(Field):
    """View of a base field with the column coordinates remapped.

    The mapping y -> sign * y[perm] is an isometry of Z^(d-1); heights pass
    through untouched.  Used to test that surface construction commutes with
    lattice symmetries.
    """

    def __init__(self, base: Field, perm: tuple[int, ...], signs: tuple[int, ...]):
        k = base.d - 1
        if sorted(perm) != list(range(k)) or any(s not in (-1, 1) for s in signs):
            raise ValueError("perm must permute 0..d-2 and signs must be +-1")
        if len(signs) != k:
            raise ValueError("signs length must be d-1")
        self.base = base
        self.d = base.d
        self.perm = tuple(perm)
        self.signs = tuple(signs)

    def map_column(self, col: Column) -> Column:
        return tuple(self.signs[i] * col[self.perm[i]] for i in range(len(col)))

    def is_closed(self, site: Site) -> bool:
        self._check_site(site)
        return self.base.is_closed((*self.map_column(site[:-1]), site[-1]))

    def closed_mask(self, box: BoxRegion) -> np.ndarray:
        k = self.d - 1
        # image box of the view's columns under the mapping
        pre_lo, pre_hi = [0] * k, [0] * k
        for i in range(k):
            a = self.signs[i] * box.lo[self.perm[i]]
            b = self.signs[i] * box.hi[self.perm[i]]
            pre_lo[i], pre_hi[i] = min(a, b), max(a, b)
        pre_box = BoxRegion((*pre_lo, box.lo[-1]), (*pre_hi, box.hi[-1]))
        mask = self.base.closed_mask(pre_box)
        for i in range(k):
            if self.signs[i] == -1:
                mask = np.flip(mask, axis=i)
        inv = [0] * k
        for t in range(k):
            inv[self.perm[t]] = t
        return np.transpose(mask, axes=(*inv, k))


@dataclass(frozen=True)
class ExplicitConfig:
    """A fully materialized configuration on a finite box.

    states holds one entry per site in lexicographic site order, 1 for open
    and 0 for closed.  Kept to at most 30 sites when driving exhaustive
    2^N sweeps.
    """

    box: BoxRegion
    states: tuple[int, ...]

    def __post_init__(self):
        if len(self.states) != self.box.size:
            raise ValueError(
                f"states has {len(self.states)} entries, box has {self.box.size} sites")
        if any(s not in (0, 1) for s in self.states):
            raise ValueError("states entries must be 0 or 1")

    def index_of(self, site: Site) -> int:
        idx = 0
        for c, a, b in zip(site, self.box.lo, self.box.hi):
            if not a <= c <= b:
                raise ValueError(f"site {site} outside box {self.box}")
            idx = idx * (b - a + 1) + (c - a)
        return idx

    def is_closed(self, site: Site) -> bool:
        return self.states[self.index_of(site)] == 0

    def closed_site_set(self) -> frozenset[Site]:
        return frozenset(
            s for s, st in zip(self.box.sites(), self.states) if st == 0)

    def to_json(self) -> dict:
        return {"box": self.box.to_json(), "states": list(self.states)}

    @staticmethod
    def from_json(obj) -> "ExplicitConfig":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return ExplicitConfig(BoxRegion.from_json(obj["box"]), tuple(obj["states"]))

    @staticmethod
    def from_bits(box: BoxRegion, bits: int) -> "ExplicitConfig":
        """Config from an integer bit pattern; bit i = state of the i-th site."""
        n = box.size
        return ExplicitConfig(box, tuple((bits >> i) & 1 for i in range(n)))


class ExplicitField(Field):
    """Field backed by an ExplicitConfig; queries outside its box are errors."""

    def __init__(self, config: ExplicitConfig):
        self.config = config
        self.d = config.box.dim

    def is_closed(self, site: Site) -> bool:
        self._check_site(site)
        return self.config.is_closed(site)

    def closed_sites(self, box: BoxRegion) -> frozenset[Site]:
        return frozenset(s for s in self.config.closed_site_set() if box.contains(s))

    def closed_mask(self, box: BoxRegion) -> np.ndarray:
        mask = np.zeros(box.shape, dtype=bool)
        for s in self.closed_sites(box):
            mask[tuple(c - a for c, a in zip(s, box.lo))] = True
        return mask


def site_state(field: Field, site: Site) -> SiteState:
    """State of one site; deterministic for fixed field and site."""
    field._check_site(tuple(site))
    return field.state(tuple(site))
