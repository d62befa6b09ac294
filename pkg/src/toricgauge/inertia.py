"""Twisted sectors of the inertia stack of a toric GIT quotient.

A torsion element ``g = exp(2 pi i q)`` of the torus fixes the coordinates
``X_i`` with ``<mu_i, q>`` integral.  Its sector is the quotient of that
coordinate subspace, which is nonempty iff the fixed support is semistable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional

from . import ratlin
from .errors import GroupTooLargeError, InfiniteInertiaError
from .gitq import Support, WeightSystem, is_ss_support, wall_witness

DEFAULT_ORDER_CAP = 10**6


def order_cap() -> int:
    return int(os.environ.get("TORICGAUGE_INERTIA_CAP", DEFAULT_ORDER_CAP))


@dataclass(frozen=True, order=True)
class TorsionElement:
    order: int
    representative: tuple  # entries in [0, 1)

    @classmethod
    def from_vector(cls, q) -> "TorsionElement":
        rep = tuple(ratlin.to_fraction(x) % 1 for x in q)
        return cls(lcm(1, *(x.denominator for x in rep)), rep)

    def inverse(self) -> "TorsionElement":
        return TorsionElement.from_vector(-x for x in self.representative)

    def is_identity(self) -> bool:
        return self.order == 1

    def phase(self, mu) -> Fraction:
        """Exponent ``<mu, q> mod 1`` of the root of unity acting on ``X_mu``."""
        return ratlin.dot(mu, self.representative) % 1


@dataclass(frozen=True)
class Sector:
    element: TorsionElement
    support: Support
    dimension: int
    element_order: int
    divisor_count: int


def sector_support(ws: WeightSystem, g: TorsionElement) -> Support:
    return tuple(i for i, w in enumerate(ws.weights) if g.phase(w) == 0)


def torsion_candidates(ws: WeightSystem, cap: Optional[int] = None) -> list:
    """Elements fixing some semistable point, i.e. all finite stabilizers.

    Every full-rank semistable support contains a size-``rank`` semistable
    one (Caratheodory plus being off the walls), whose kernel is larger, so
    the union runs over size-``rank`` supports only.
    """
    from itertools import combinations

    cap = order_cap() if cap is None else cap
    wall = wall_witness(ws)
    if wall is not None:
        raise InfiniteInertiaError(
            f"support {list(wall)} is semistable with a positive-dimensional stabilizer"
        )
    r = ws.rank
    distinct = sorted(set(ws.weights))
    seen = {TorsionElement.from_vector([0] * r)}
    total = 0
    for combo in combinations(distinct, r):
        if ratlin.rank(combo) != r:
            continue
        supp = [i for i, w in enumerate(ws.weights) if w in combo]
        if not ws.cone_decision(supp).member:
            continue
        try:
            elems = ratlin.kernel_torus_elements(combo, r, cap=cap - total)
        except OverflowError:
            raise GroupTooLargeError(f"torsion enumeration exceeds the cap of {cap} elements")
        total += len(elems)
        seen.update(TorsionElement.from_vector(q) for q in elems)
    return sorted(seen)


def make_sector(ws: WeightSystem, g: TorsionElement) -> Sector:
    supp = sector_support(ws, g)
    mult = sum(ws.multiplicities[i] for i in supp)
    return Sector(
        element=g,
        support=supp,
        dimension=mult - ws.rank,
        element_order=g.order,
        divisor_count=mult,
    )


def inertia_sectors(ws: WeightSystem, cap: Optional[int] = None) -> list:
    """Nonempty twisted sectors, sorted by (order, representative)."""
    return [
        make_sector(ws, g)
        for g in torsion_candidates(ws, cap)
        if is_ss_support(ws, sector_support(ws, g))
    ]
