"""Torus GIT problems on a vector space: semistable loci, walls, chambers.

A point of ``X = sum_i X_i`` is semistable exactly when the polarization
lies in the closed cone generated by the weights of its nonzero
coordinates, so every question here reduces to cone membership over
*supports* (subsets of weight indices).  Supports are 0-based tuples of
weight-entry indices in increasing order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Optional, Sequence

from . import ratlin
from .errors import WallError

Support = tuple  # tuple[int, ...], sorted


def support(indices) -> Support:
    return tuple(sorted(set(indices)))


@dataclass(frozen=True)
class WeightSystem:
    """Torus ``(C*)^rank`` acting on ``sum_i X_i^{m_i}`` with polarization ``nu``.

    Entries with equal weight vectors are kept apart: their indices are
    what supports refer to.
    """

    rank: int
    weights: tuple
    multiplicities: tuple = None
    nu: tuple = None
    labels: Optional[tuple] = None
    _cone_cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        weights = tuple(tuple(int(x) for x in w) for w in self.weights)
        if not weights:
            raise ValueError("a weight system needs at least one weight")
        for w in weights:
            if len(w) != self.rank:
                raise ValueError(f"weight {w} does not have length {self.rank}")
        mult = self.multiplicities
        mult = tuple(1 for _ in weights) if mult is None else tuple(int(m) for m in mult)
        if len(mult) != len(weights) or any(m < 1 for m in mult):
            raise ValueError("multiplicities must be positive, one per weight")
        nu = ratlin.qvec(self.nu) if self.nu is not None else None
        if nu is None or len(nu) != self.rank:
            raise ValueError(f"polarization must have length {self.rank}")
        if self.labels is not None and len(self.labels) != len(weights):
            raise ValueError("one label per weight")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "multiplicities", mult)
        object.__setattr__(self, "nu", nu)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))

    @property
    def k(self) -> int:
        return len(self.weights)

    @property
    def total_multiplicity(self) -> int:
        return sum(self.multiplicities)

    def with_nu(self, nu) -> "WeightSystem":
        return WeightSystem(self.rank, self.weights, self.multiplicities, nu, self.labels)

    def weight_multiset(self) -> dict:
        """Total multiplicity per distinct weight vector."""
        out: dict = {}
        for w, m in zip(self.weights, self.multiplicities):
            out[w] = out.get(w, 0) + m
        return out

    def slots(self) -> list:
        """Weight-entry index of every coordinate, multiplicity expanded."""
        return [i for i, m in enumerate(self.multiplicities) for _ in range(m)]

    def vectors(self, supp: Sequence[int]) -> list:
        return [self.weights[i] for i in supp]

    def cone_decision(self, supp: Sequence[int], target=None) -> ratlin.ConeDecision:
        """Cached cone membership of ``target`` (default ``nu``) over a support."""
        target = self.nu if target is None else ratlin.qvec(target)
        key = (frozenset(self.weights[i] for i in supp), target)
        hit = self._cone_cache.get(key)
        if hit is None:
            gens = sorted(key[0])
            hit = (gens, ratlin.cone_member(gens, target))
            self._cone_cache[key] = hit
        return hit[1]

    @cached_property
    def weight_rank(self) -> int:
        return ratlin.rank(self.weights)


def _pmap(fn, items, jobs: int):
    if jobs <= 1:
        return list(map(fn, items))
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def all_supports(k: int):
    for size in range(k + 1):
        yield from combinations(range(k), size)


def is_ss_support(ws: WeightSystem, supp: Sequence[int]) -> bool:
    for i in supp:
        if not 0 <= i < ws.k:
            raise IndexError(f"support index {i} out of range")
    return ws.cone_decision(supp).member


def max_unstable_supports(ws: WeightSystem) -> list:
    """Inclusion-maximal supports whose coordinate subspace is unstable.

    Semistability is upward closed, so the search walks down from the full
    support and stops descending as soon as it meets an unstable set.
    """
    k = ws.k
    seen = set()
    unstable = set()
    stack = [tuple(range(k))]
    while stack:
        s = stack.pop()
        if s in seen:
            continue
        seen.add(s)
        if is_ss_support(ws, s):
            for i in s:
                stack.append(tuple(j for j in s if j != i))
        else:
            unstable.add(s)
    maximal = [
        s for s in unstable
        if not any(t != s and set(s) <= set(t) for t in unstable)
    ]
    return sorted(maximal, key=lambda s: (-len(s), s))


def _hyperplane_flats(ws: WeightSystem) -> list:
    """Maximal sets of weight indices whose span has dimension < rank."""
    r = ws.rank
    if ws.weight_rank < r:
        return [tuple(range(ws.k))]
    distinct = sorted({w for w in ws.weights if any(w)})
    flats = set()
    for combo in combinations(distinct, r - 1):
        if ratlin.rank(combo) != r - 1:
            continue
        flat = tuple(i for i, w in enumerate(ws.weights) if ratlin.span_member(combo, w))
        flats.add(flat)
    if r == 1:
        flats.add(tuple(i for i, w in enumerate(ws.weights) if not any(w)))
    return sorted(flats)


def wall_witness(ws: WeightSystem) -> Optional[Support]:
    """A lower-rank support whose cone contains ``nu``, if any."""
    for flat in _hyperplane_flats(ws):
        if ws.cone_decision(flat).member:
            return flat
    return None


def stable_eq_ss(ws: WeightSystem) -> bool:
    """True iff ``nu`` avoids every cone over a rank-deficient set of weights."""
    return wall_witness(ws) is None


def is_proper(ws: WeightSystem) -> bool:
    return ratlin.open_halfspace_witness(list(ws.weights), ws.rank) is not None


def chamber_signature(ws: WeightSystem, jobs: int = 1) -> tuple:
    """All semistable supports, sorted by size then lexicographically."""
    wall = wall_witness(ws)
    if wall is not None:
        raise WallError(f"polarization lies on the wall spanned by support {list(wall)}")
    supports = list(all_supports(ws.k))
    flags = _pmap(lambda s: is_ss_support(ws, s), supports, jobs)
    return tuple(s for s, ok in zip(supports, flags) if ok)


def same_chamber(ws: WeightSystem, nu_a, nu_b) -> bool:
    return chamber_signature(ws.with_nu(nu_a)) == chamber_signature(ws.with_nu(nu_b))


@dataclass(frozen=True)
class FixedPoint:
    support: Support  # slot indices (multiplicity expanded)
    isotropy: int


@dataclass(frozen=True)
class QuotientReport:
    nonempty: bool
    dimension: Optional[int]
    proper: bool
    stable_eq_ss: bool
    fixed_points: tuple
    weighted_projective: Optional[tuple] = None


def isotropy_order(vectors: Sequence[Sequence[int]], r: int) -> Optional[int]:
    """Order of the finite kernel ``{t : t^mu = 1 for all mu}``; None if infinite."""
    if not vectors:
        return None if r else 1
    return ratlin.snf(vectors, ncols=r).order()


def fixed_points(ws: WeightSystem, jobs: int = 1) -> tuple:
    """Torus-fixed points of the quotient: semistable full-rank slot supports of size r."""
    slots = ws.slots()
    r = ws.rank

    def check(combo):
        vecs = [ws.weights[slots[s]] for s in combo]
        if ratlin.rank(vecs) != r:
            return None
        if not ws.cone_decision([slots[s] for s in combo]).member:
            return None
        return FixedPoint(tuple(combo), isotropy_order(vecs, r))

    found = _pmap(check, list(combinations(range(len(slots)), r)), jobs)
    return tuple(fp for fp in found if fp is not None)


def quotient_report(ws: WeightSystem, jobs: int = 1) -> QuotientReport:
    nonempty = is_ss_support(ws, tuple(range(ws.k)))
    seq = stable_eq_ss(ws)
    dim = ws.total_multiplicity - ws.rank if (nonempty and seq) else None
    wp = None
    if ws.rank == 1 and ws.nu[0] > 0 and all(w[0] > 0 for w in ws.weights):
        wp = tuple(sorted(ws.weights[i][0] for i in ws.slots()))
    return QuotientReport(
        nonempty=nonempty,
        dimension=dim,
        proper=is_proper(ws),
        stable_eq_ss=seq,
        fixed_points=fixed_points(ws, jobs) if nonempty else (),
        weighted_projective=wp,
    )
