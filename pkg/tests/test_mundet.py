from fractions import Fraction
from itertools import combinations

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from toricgauge import gitq, mundet, ratlin
from toricgauge.errors import InadmissibleError, WallError
from toricgauge.gitq import WeightSystem
from toricgauge.mundet import MundetProblem

TWO_CHAMBER = [(1, 0), (1, 0), (1, 1), (0, 1)]


def crossing_values(ws, d):
    """Positive rho where d + rho*nu meets a hyperplane spanned by weights."""
    r = ws.rank
    out = set()
    vecs = sorted({w for w in ws.weights if any(w)})
    for combo in combinations(vecs, r - 1):
        if r > 1 and oracles.sp_rank(list(combo)) != r - 1:
            continue
        if r == 1:
            normal = [1]
        else:
            normal = list(sympy.Matrix([list(c) for c in combo]).nullspace()[0])
        nn = sum(sympy.Rational(x) * y for x, y in zip(ws.nu, normal))
        if nn == 0:
            continue
        rho = -sum(sympy.Rational(x) * y for x, y in zip(d, normal)) / nn
        if rho > 0:
            out.add(Fraction(int(rho.p), int(rho.q)))
    return sorted(out)


def disagrees(ws, d, rho):
    shifted = [Fraction(x) + rho * Fraction(y) for x, y in zip(d, ws.nu)]
    for s in gitq.all_supports(ws.k):
        vecs = [ws.weights[i] for i in s]
        if oracles.cone_member_bruteforce(vecs, shifted) != oracles.cone_member_bruteforce(vecs, ws.nu):
            return True
    return False


def threshold_sweep(ws, d):
    cands = crossing_values(ws, d)
    best = Fraction(0)
    prev = Fraction(0)
    for c in cands:
        if disagrees(ws, d, c) or disagrees(ws, d, (prev + c) / 2):
            best = c
        prev = c
    return best


@st.composite
def generic_problem(draw, max_r=2, max_k=4):
    r = draw(st.integers(1, max_r))
    k = draw(st.integers(1, max_k))
    weights = [tuple(draw(st.integers(-2, 2)) for _ in range(r)) for _ in range(k)]
    nu = tuple(draw(st.integers(-3, 3)) for _ in range(r))
    d = tuple(Fraction(draw(st.integers(-4, 4)), draw(st.integers(1, 2))) for _ in range(r))
    return WeightSystem(r, weights, nu=nu), d


# ---------------------------------------------------------------- examples


def test_two_chamber_threshold():
    ws = WeightSystem(2, TWO_CHAMBER, nu=(1, 2))
    assert mundet.rho_threshold(ws, (1, 0)) == 1
    assert threshold_sweep(ws, (1, 0)) == 1
    assert mundet.rho_threshold(ws.with_nu((2, 1)), (1, 0)) == 0


def test_two_chamber_destabilizer():
    ws = WeightSystem(2, TWO_CHAMBER, nu=(1, 2))
    lam = mundet.destab_certificate(ws, (0, 1, 2))
    assert lam == (1, -1)
    assert mundet.destab_certificate(ws, (0, 3)) is None


def test_weight_one_threshold():
    ws = WeightSystem(1, [(1,)], nu=(1,))
    assert mundet.rho_threshold(ws, (3,)) == 0
    assert mundet.rho_threshold(ws, (-3,)) == 3
    # just below the threshold the full support is gauged-unstable
    below = MundetProblem(ws, (-3,), Fraction(29, 10))
    above = MundetProblem(ws, (-3,), Fraction(31, 10))
    assert not mundet.is_gauged_semistable(below, (0,))
    assert mundet.is_gauged_semistable(above, (0,))


def test_gauged_weight_and_admissibility():
    ws = WeightSystem(2, TWO_CHAMBER, nu=(1, 2))
    mp = MundetProblem(ws, (1, 0), 2)
    assert mundet.gauged_weight(mp, (0, 1, 2), (1, -1)) == -1 - 2 * (1 - 2)
    with pytest.raises(InadmissibleError):
        mundet.gauged_weight(mp, (3,), (1, -1))


def test_problem_validation():
    ws = WeightSystem(1, [(1,)], nu=(1,))
    with pytest.raises(ValueError):
        MundetProblem(ws, (1,), 0)
    with pytest.raises(ValueError):
        MundetProblem(ws, (1,), 1, area=-1)
    with pytest.raises(ValueError):
        MundetProblem(ws, (1, 2), 1)


def test_threshold_refuses_walls():
    with pytest.raises(WallError):
        mundet.rho_threshold(WeightSystem(2, TWO_CHAMBER, nu=(1, 1)), (0, 0))


# -------------------------------------------------------------- properties


@settings(max_examples=150, deadline=None)
@given(generic_problem(max_r=3))
def test_certificate_exists_iff_unstable(problem):
    ws, _ = problem
    for s in gitq.all_supports(ws.k):
        lam = mundet.destab_certificate(ws, s)
        assert (lam is None) == gitq.is_ss_support(ws, s)
        if lam is not None:
            assert all(ratlin.dot(ws.weights[i], lam) >= 0 for i in s)
            assert ratlin.dot(ws.nu, lam) < 0


@settings(max_examples=100, deadline=None)
@given(generic_problem(), st.fractions(min_value=Fraction(1, 4), max_value=6, max_denominator=4))
def test_gauged_semistability_matches_box_search(problem, rho):
    ws, d = problem
    mp = MundetProblem(ws, d, rho)
    for s in gitq.all_supports(ws.k):
        assert mundet.is_gauged_semistable(mp, s) == oracles.gauged_semistable_bruteforce(
            ws.weights, s, d, ws.nu, rho)


@settings(max_examples=100, deadline=None)
@given(generic_problem())
def test_threshold_matches_sweep(problem):
    ws, d = problem
    assume(gitq.stable_eq_ss(ws))
    assert mundet.rho_threshold(ws, d) == threshold_sweep(ws, d)


@settings(max_examples=80, deadline=None)
@given(generic_problem(), st.integers(1, 5), st.integers(1, 5))
def test_threshold_homogeneity(problem, c, a):
    ws, d = problem
    assume(gitq.stable_eq_ss(ws))
    base = mundet.rho_threshold(ws, d)
    assert mundet.rho_threshold(ws, tuple(c * x for x in d)) == c * base
    assert mundet.rho_threshold(ws, d, area=a) == base / a


@settings(max_examples=80, deadline=None)
@given(generic_problem(), st.integers(1, 8))
def test_agreement_above_threshold(problem, step):
    ws, d = problem
    assume(gitq.stable_eq_ss(ws))
    rho = mundet.rho_threshold(ws, d) + Fraction(step, 4)
    mp = MundetProblem(ws, d, rho)
    for s in gitq.all_supports(ws.k):
        assert mundet.is_gauged_semistable(mp, s) == gitq.is_ss_support(ws, s)
