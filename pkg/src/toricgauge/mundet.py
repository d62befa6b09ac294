"""Abelian Mundet stability for gauged maps with torus structure group.

For a gauged map of class ``d`` whose section has support ``S``, a
one-parameter subgroup ``lam`` is admissible when every weight of ``S``
pairs nonnegatively with it (the limit exists), and its weight is

    w(lam) = -<d, lam> - rho * area * <nu, lam>.

The map is rho-semistable iff no admissible ``lam`` has ``w > 0``.  By
Farkas duality that is the same as ``d + rho * area * nu`` lying in the
cone over ``S``, which is how it is decided here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import ratlin
from .errors import InadmissibleError, WallError
from .gitq import Support, WeightSystem, all_supports, wall_witness

OneParamSubgroup = tuple  # tuple[int, ...], primitive unless zero


@dataclass(frozen=True)
class MundetProblem:
    ws: WeightSystem
    degree: tuple
    rho: Fraction
    area: Fraction = Fraction(1)

    def __post_init__(self):
        d = ratlin.qvec(self.degree)
        if len(d) != self.ws.rank:
            raise ValueError(f"degree must have length {self.ws.rank}")
        rho = ratlin.to_fraction(self.rho)
        area = ratlin.to_fraction(self.area)
        if rho <= 0 or area <= 0:
            raise ValueError("rho and area must be positive")
        object.__setattr__(self, "degree", d)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "area", area)

    def shifted_polarization(self) -> tuple:
        """``d + rho * area * nu``: the effective GIT target at this rho."""
        s = self.rho * self.area
        return tuple(x + s * y for x, y in zip(self.degree, self.ws.nu))


def destab_certificate(ws: WeightSystem, supp: Sequence[int]) -> Optional[OneParamSubgroup]:
    """A destabilizing ``lam`` (nonnegative on ``supp``, ``<nu, lam> < 0``) or None."""
    dec = ws.cone_decision(supp)
    if dec.member:
        return None
    return tuple(-x for x in dec.certificate)


def gauged_weight(mp: MundetProblem, supp: Sequence[int], lam: Sequence[int]) -> Fraction:
    for i in supp:
        if ratlin.dot(mp.ws.weights[i], lam) < 0:
            raise InadmissibleError(
                f"lambda={list(lam)} pairs negatively with weight {mp.ws.weights[i]} in the support"
            )
    return -ratlin.dot(mp.degree, lam) - mp.rho * mp.area * ratlin.dot(mp.ws.nu, lam)


def is_gauged_semistable(mp: MundetProblem, supp: Sequence[int]) -> bool:
    return mp.ws.cone_decision(supp, mp.shifted_polarization()).member


def _support_threshold(ws: WeightSystem, gens: list, d: tuple, area: Fraction) -> Fraction:
    """Least rho0 beyond which ``d + rho*area*nu in cone(gens)`` matches GIT.

    Writing ``t = 1 / (rho * area)``, membership holds on an interval of
    ``t``.  If ``nu`` is in the cone the interval starts at 0 and rho0 comes
    from its right end; otherwise rho0 comes from its left end.
    """
    r = ws.rank
    k = len(gens)
    # variables: c_1..c_k, t ;  sum c_i g_i - t d = nu
    A = [[Fraction(g[i]) for g in gens] + [-d[i]] for i in range(r)]
    cost = [Fraction(0)] * k
    inside = ratlin.cone_member(gens, ws.nu).member
    if inside:
        res = ratlin.lp_minimize(A, ws.nu, cost + [Fraction(-1)])
        if res.status == "unbounded":
            return Fraction(0)
        t_edge = res.x[k]
        if t_edge == 0:
            raise WallError("polarization on the boundary of a support cone")
    else:
        res = ratlin.lp_minimize(A, ws.nu, cost + [Fraction(1)])
        if res.status == "infeasible":
            return Fraction(0)
        t_edge = res.x[k]
    return 1 / (area * t_edge)


def rho_threshold(ws: WeightSystem, d, area=1) -> Fraction:
    """Least ``rho0`` such that rho-semistability equals GIT semistability for all rho > rho0."""
    wall = wall_witness(ws)
    if wall is not None:
        raise WallError(f"polarization lies on the wall spanned by support {list(wall)}")
    d = ratlin.qvec(d)
    area = ratlin.to_fraction(area)
    best = Fraction(0)
    seen = set()
    for supp in all_supports(ws.k):
        key = frozenset(ws.weights[i] for i in supp)
        if key in seen:
            continue
        seen.add(key)
        best = max(best, _support_threshold(ws, sorted(key), d, area))
    return best
