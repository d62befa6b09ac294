from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from toricgauge import gitq
from toricgauge.errors import WallError
from toricgauge.gitq import WeightSystem

TWO_CHAMBER = [(1, 0), (1, 0), (1, 1), (0, 1)]


@st.composite
def weight_systems(draw, max_r=3, max_k=5, lo=-2, hi=2, mult=False):
    r = draw(st.integers(1, max_r))
    k = draw(st.integers(1, max_k))
    vint = st.integers(lo, hi)
    weights = [tuple(draw(vint) for _ in range(r)) for _ in range(k)]
    mults = [draw(st.integers(1, 2)) for _ in range(k)] if mult else None
    nu = tuple(Fraction(draw(st.integers(-4, 4)), draw(st.integers(1, 3))) for _ in range(r))
    return WeightSystem(r, weights, mults, nu)


def wall_bruteforce(ws):
    """Some rank-deficient subset of weights has nu in its cone."""
    for s in oracles.all_supports(ws.k):
        vecs = [ws.weights[i] for i in s]
        if oracles.sp_rank(vecs) < ws.rank and oracles.cone_member_bruteforce(vecs, ws.nu):
            return True
    return False


# ---------------------------------------------------------------- examples


def test_two_chamber_first_chamber_unstable_supports():
    ws = WeightSystem(2, TWO_CHAMBER, nu=(1, 2))
    assert gitq.max_unstable_supports(ws) == [(0, 1, 2), (3,)]


def test_two_chamber_second_chamber_unstable_supports():
    ws = WeightSystem(2, TWO_CHAMBER, nu=(2, 1))
    assert gitq.max_unstable_supports(ws) == [(0, 1), (2, 3)]
    assert gitq.max_unstable_supports(ws) == oracles.max_unstable_bruteforce(TWO_CHAMBER, (2, 1))


def test_two_chamber_chambers_differ_and_are_proper():
    a = WeightSystem(2, TWO_CHAMBER, nu=(1, 2))
    b = a.with_nu((2, 1))
    assert gitq.chamber_signature(a) != gitq.chamber_signature(b)
    assert not gitq.same_chamber(a, (1, 2), (2, 1))
    assert gitq.same_chamber(a, (1, 2), (1, 3))
    for ws in (a, b):
        rep = gitq.quotient_report(ws)
        assert rep.nonempty and rep.proper and rep.stable_eq_ss
        assert rep.dimension == 2


def test_two_chamber_fixed_points():
    rep = gitq.quotient_report(WeightSystem(2, TWO_CHAMBER, nu=(1, 2)))
    assert len(rep.fixed_points) == 3
    assert all(fp.isotropy == 1 for fp in rep.fixed_points)


def test_wall_polarization():
    ws = WeightSystem(2, TWO_CHAMBER, nu=(1, 1))
    assert not gitq.stable_eq_ss(ws)
    assert gitq.wall_witness(ws) == (2,)
    with pytest.raises(WallError):
        gitq.chamber_signature(ws)
    assert gitq.quotient_report(ws).dimension is None


def test_weighted_projective_line():
    ws = WeightSystem(1, [(2,), (3,)], nu=(1,))
    rep = gitq.quotient_report(ws)
    assert rep.weighted_projective == (2, 3)
    assert rep.dimension == 1
    assert sorted(fp.isotropy for fp in rep.fixed_points) == [2, 3]


def test_empty_quotient_for_negative_polarization():
    ws = WeightSystem(1, [(1,), (1,)], nu=(-1,))
    rep = gitq.quotient_report(ws)
    assert not rep.nonempty
    assert rep.fixed_points == ()
    assert gitq.max_unstable_supports(ws) == [(0, 1)]


def test_affine_line_is_not_proper():
    ws = WeightSystem(1, [(1,), (-1,)], nu=(1,))
    assert not gitq.is_proper(ws)


def test_bad_inputs():
    with pytest.raises(ValueError):
        WeightSystem(2, [(1,)], nu=(1, 1))
    with pytest.raises(ValueError):
        WeightSystem(1, [(1,)], [0], nu=(1,))
    with pytest.raises(ValueError):
        WeightSystem(1, [(1,)], nu=(1, 2))
    with pytest.raises(IndexError):
        gitq.is_ss_support(WeightSystem(1, [(1,)], nu=(1,)), (3,))


# -------------------------------------------------------------- properties


@settings(max_examples=120, deadline=None)
@given(weight_systems())
def test_semistability_is_upward_closed(ws):
    for s in gitq.all_supports(ws.k):
        if gitq.is_ss_support(ws, s):
            for i in range(ws.k):
                if i not in s:
                    assert gitq.is_ss_support(ws, gitq.support(s + (i,)))


@settings(max_examples=120, deadline=None)
@given(weight_systems(max_k=4))
def test_max_unstable_matches_bruteforce(ws):
    assert gitq.max_unstable_supports(ws) == oracles.max_unstable_bruteforce(ws.weights, ws.nu)


@settings(max_examples=120, deadline=None)
@given(weight_systems(max_k=4))
def test_wall_detection_matches_bruteforce(ws):
    assert gitq.stable_eq_ss(ws) == (not wall_bruteforce(ws))


@settings(max_examples=100, deadline=None)
@given(weight_systems(), st.integers(1, 6))
def test_signature_invariant_under_positive_rescaling(ws, c):
    assume(gitq.stable_eq_ss(ws))
    scaled = ws.with_nu(tuple(c * x for x in ws.nu))
    assert gitq.chamber_signature(ws) == gitq.chamber_signature(scaled)


@settings(max_examples=100, deadline=None)
@given(weight_systems(), st.randoms(use_true_random=False))
def test_signature_equivariant_under_permutation(ws, rnd):
    assume(gitq.stable_eq_ss(ws))
    perm = list(range(ws.k))
    rnd.shuffle(perm)
    permuted = WeightSystem(ws.rank, [ws.weights[p] for p in perm], nu=ws.nu)
    # index j of the permuted system is index perm[j] of the original
    mapped = {gitq.support(perm[j] for j in s) for s in gitq.chamber_signature(permuted)}
    assert mapped == set(gitq.chamber_signature(ws))


@settings(max_examples=80, deadline=None)
@given(weight_systems(max_r=2, max_k=4, mult=True))
def test_fixed_points_match_bruteforce(ws):
    assume(gitq.is_ss_support(ws, tuple(range(ws.k))))
    got = [(fp.support, fp.isotropy) for fp in gitq.fixed_points(ws)]
    assert got == oracles.fixed_points_bruteforce(ws.weights, ws.multiplicities, ws.nu)


@settings(max_examples=60, deadline=None)
@given(weight_systems())
def test_parallel_signature_is_identical(ws):
    assume(gitq.stable_eq_ss(ws))
    assert gitq.chamber_signature(ws, jobs=4) == gitq.chamber_signature(ws, jobs=1)
