"""Quasimap spaces over genus-zero curves and affine gauged maps.

For a bundle of degree ``d`` on P^1 the sections of the associated bundle
form the representation ``X(d)``: weight ``mu_j`` appears
``max(0, <d, mu_j> + 1)`` times per copy of ``X_j``.  On the affine line a
fractional degree is allowed; the leading-coefficient support ``J(d)`` (the
weights with nonnegative integral pairing) must be semistable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, lcm

from . import ratlin
from .errors import InvalidDegreeError, WallError
from .gitq import QuotientReport, Support, WeightSystem, is_ss_support, isotropy_order, quotient_report, stable_eq_ss
from .inertia import TorsionElement

DegreeVector = tuple  # tuple[Fraction, ...]


def degree(values) -> DegreeVector:
    if isinstance(values, (int, str, Fraction)):
        values = [values]
    return ratlin.qvec(values)


def _pairings(ws: WeightSystem, d) -> list:
    d = degree(d)
    if len(d) != ws.rank:
        raise ValueError(f"degree must have length {ws.rank}")
    return [ratlin.dot(w, d) for w in ws.weights]


def quasimap_problem(ws: WeightSystem, d) -> WeightSystem:
    d = degree(d)
    if not ratlin.is_integral(d):
        raise InvalidDegreeError("quasimap spaces need an integral degree")
    weights, mults, labels = [], [], []
    for i, p in enumerate(_pairings(ws, d)):
        factor = max(0, int(p) + 1)
        if factor:
            weights.append(ws.weights[i])
            mults.append(ws.multiplicities[i] * factor)
            if ws.labels is not None:
                labels.append(ws.labels[i])
    if not weights:
        raise InvalidDegreeError(f"X(d) is zero for d = {[str(x) for x in d]}")
    return WeightSystem(ws.rank, weights, mults, ws.nu, tuple(labels) if ws.labels is not None else None)


def quasimap_report(ws: WeightSystem, d, jobs: int = 1) -> QuotientReport:
    return quotient_report(quasimap_problem(ws, d), jobs)


@dataclass(frozen=True)
class AffineReport:
    degree: DegreeVector
    valid: bool
    dimension: int
    monomial_counts: tuple
    leading_support: Support
    stabilizer_order: int
    sector: TorsionElement


def affine_report(ws: WeightSystem, d, strict: bool = True) -> AffineReport:
    """Invariants of affine gauged maps of class ``d``.

    Component ``j`` is a polynomial of degree ``<= <d, mu_j>`` and vanishes
    when that pairing is negative.  With ``strict`` an unstable leading
    support raises :class:`InvalidDegreeError`; otherwise the report comes
    back with ``valid=False``.
    """
    if not stable_eq_ss(ws):
        raise WallError("affine reports need a polarization off the walls")
    d = degree(d)
    pairings = _pairings(ws, d)
    counts = tuple(floor(p) + 1 if p >= 0 else 0 for p in pairings)
    lead = tuple(i for i, p in enumerate(pairings) if p >= 0 and p.denominator == 1)
    valid = is_ss_support(ws, lead)
    if strict and not valid:
        raise InvalidDegreeError(
            f"leading support {[i + 1 for i in lead]} of degree {[str(x) for x in d]} is unstable"
        )
    dim = sum(m * c for m, c in zip(ws.multiplicities, counts)) - ws.rank
    stab = isotropy_order([ws.weights[i] for i in lead], ws.rank) if valid else 0
    return AffineReport(
        degree=d,
        valid=valid,
        dimension=dim,
        monomial_counts=counts,
        leading_support=lead,
        stabilizer_order=stab,
        sector=TorsionElement.from_vector(d),
    )


def effective_affine_degrees(ws: WeightSystem, bound) -> list:
    """Degrees ``0 <= d <= bound`` carrying affine gauged maps (rank one only)."""
    if ws.rank != 1:
        raise ValueError("degree sweeps are only defined for rank-one tori")
    bound = ratlin.to_fraction(bound)
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    cands = {Fraction(0)}
    for (w,) in ws.weights:
        if w == 0:
            continue
        step = Fraction(1, abs(w))
        cands.update(step * e for e in range(int(bound / step) + 1))
    return [
        (d,) for d in sorted(cands)
        if affine_report(ws, (d,), strict=False).valid
    ]


def weight_lcm(ws: WeightSystem) -> int:
    return lcm(*(abs(x) for w in ws.weights for x in w if x))
