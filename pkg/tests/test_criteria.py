import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hgft import criteria
from hgft.criteria import NecessaryCase, QuadraticFormLMN, SpiralAngle, Status
from hgft.errors import LambdaZero, NotZeroImbalanced
from hgft.specfun import ParamTriple, d2f1, gauss_2f1, hyp2f1_array

from conftest import EX_A, EX_B, EX_LAMBDA, random_complex, rng

coord = st.floats(-4, 4, allow_nan=False)
cplx = st.builds(complex, coord, coord)
angle = st.floats(-1.5, 1.5).filter(lambda x: abs(x) > 1e-3)


def valid_triple(a, b, c):
    try:
        return ParamTriple(a, b, c)
    except ValueError:
        return None


# ---------------------------------------------------------------------------
# types


def test_spiral_angle_range():
    assert SpiralAngle(0.3) == 0.3
    for bad in (math.pi / 2, -2.0):
        with pytest.raises(ValueError):
            SpiralAngle(bad)


@given(st.floats(-10, 10), st.floats(-10, 10), st.floats(-10, 10))
def test_psd_matches_grid_minimum(L, M, N):
    q = QuadraticFormLMN(L, M, N)
    s = np.linspace(-1e3, 1e3, 200001)
    grid_ok = np.min(q(s)) >= -1e-6 * (1 + abs(L) + abs(M) + abs(N))
    # the grid cannot see a minimiser outside [-1e3, 1e3]
    if L > 0 and abs(M / L) > 1e3:
        return
    if abs(L) < 1e-9 or abs(q.det) < 1e-6:
        return
    assert q.psd() == grid_ok


# ---------------------------------------------------------------------------
# necessary condition at z = 1


def test_necessary_spec_examples():
    case, v = criteria.necessary_spirallike(ParamTriple(1, 1, 4), 0)
    assert case is NecessaryCase.I and v.status is Status.HOLDS
    assert "h(1) = 2" in v.diagnostics
    case, v = criteria.necessary_spirallike(ParamTriple(1, 1, 1.5), 0.3)
    assert case is NecessaryCase.V and v.status is Status.FAILS
    case, v = criteria.necessary_spirallike(ParamTriple(0.5, 0.5, 1.5), 0)
    assert case is NecessaryCase.IV and v.status is Status.HOLDS
    assert v.margin == pytest.approx(math.pi / 4)


def test_necessary_case_snapping():
    assert criteria.necessary_case(ParamTriple(1, 1, 3 + 5e-13)) is NecessaryCase.III
    assert criteria.necessary_case(ParamTriple(1, 1, 3 + 1e-9)) is NecessaryCase.I
    assert criteria.necessary_case(ParamTriple(1, 1, 3 + 0.5j)) is NecessaryCase.II
    # c = a + b computed in floating point lands in case (iv), not (v)
    a, b = 0.1 + 0.7j, 0.2 - 0.3j
    assert criteria.necessary_case(ParamTriple(a, b, a + b)) is NecessaryCase.IV


def test_necessary_case_iv_requires_real_excess():
    _, v = criteria.necessary_spirallike(ParamTriple(1, 1, 2.5 + 0.2j), 0)
    assert v.status is Status.FAILS


def test_necessary_case_ii_two_forms_agree():
    gen = rng(11)
    for _ in range(40):
        a, b = random_complex(gen, 3), random_complex(gen, 3)
        s = gen.uniform(-3, 3)
        p = valid_triple(a, b, a + b + 1 + 1j * s)
        if p is None or abs(s) < 0.05:
            continue
        data = criteria.case_ii_data(p)
        assert data.R1 == pytest.approx(data.R1_alt, rel=1e-10)
        assert criteria.necessary_spirallike(p, 0.1)[0] is NecessaryCase.II


def test_necessary_case_ii_agrees_with_limit_of_h():
    # Re(c-a-b) = 1: along z = 1 - t e^{i theta}, |h - w1| tends to
    # R1 e^{-s theta - pi|s|/2}, so R1 is the supremum over directions
    p = ParamTriple(0.7, 0.4, 2.1 + 0.8j)
    data = criteria.case_ii_data(p)
    for theta in (0.0, -1.2, 1.2):
        z = 1 - 1e-6 * cmath.exp(1j * theta)
        F = gauss_2f1(p, z).value
        h = 1 + z * d2f1(p, z).value / F
        expected = data.R1 * math.exp(-data.s * theta - math.pi * abs(data.s) / 2)
        assert abs(abs(h - data.w1) - expected) < 1e-2 * expected


def test_necessary_case_iii_uses_arg_ab():
    p = ParamTriple(1j, 1j, 1 + 2j)
    _, v = criteria.necessary_spirallike(p, 0.0)
    # arg(ab) = pi, so lambda = 0 is exactly at the half-plane edge
    assert v.margin == pytest.approx(-math.pi / 2)
    assert v.status is Status.FAILS


def test_necessary_ab_zero_not_applicable():
    case, v = criteria.necessary_spirallike(ParamTriple(0, 2, 3), 0)
    assert case is None and v.status is Status.NOT_APPLICABLE


# ---------------------------------------------------------------------------
# starlike and convex


def test_starlike_spec_examples():
    v, lmn = criteria.sufficient_starlike(ParamTriple(2, 1, 3))
    assert v.status is Status.HOLDS
    assert (lmn.L, lmn.M, lmn.N, lmn.det) == (2, 0, 2, 4)
    v, lmn = criteria.sufficient_starlike(ParamTriple(2, 2, 1))
    assert v.status is Status.BOUNDARY
    assert (lmn.L, lmn.M, lmn.N) == (0, 0, 0)
    v, lmn = criteria.sufficient_starlike(ParamTriple(2, 1.2 + 1j, 2 + 1j))
    assert v.status is Status.HOLDS
    assert lmn.L == pytest.approx(0.16) and lmn.N == pytest.approx(0.16) and abs(lmn.M) < 1e-12


def test_starlike_not_applicable_for_complex_p():
    v, _ = criteria.sufficient_starlike(ParamTriple(1 + 1j, 1, 3))
    assert v.status is Status.NOT_APPLICABLE


def test_a2_family_matches_closed_form():
    # a = 2: L = N = Re[c-b] Re[b+c-3], M = 0
    gen = rng(12)
    for _ in range(50):
        b, c, s = gen.uniform(-2, 5), gen.uniform(0.1, 5), gen.uniform(-3, 3)
        _, lmn = criteria.sufficient_starlike(ParamTriple(2, b + 1j * s, c + 1j * s))
        ref = (c - b) * (b + c - 3)
        assert lmn.L == pytest.approx(ref, abs=1e-9) and lmn.N == pytest.approx(ref, abs=1e-9)
        assert abs(lmn.M) < 1e-9


def test_rotated_b_family_degenerate_form():
    # (2, b, 3 - conj(b)): Re[ab] = p and L = M = N = 0
    for b in (1.7 + 0.4j, 2.5 - 1j, 0.3 + 2j):
        v, lmn = criteria.sufficient_starlike(ParamTriple(2, b, 3 - b.conjugate()))
        assert max(abs(lmn.L), abs(lmn.M), abs(lmn.N)) < 1e-12
        assert v.status is Status.BOUNDARY


def _convexity_min(a, b, c, n=720):
    """min Re(1 + z F''/F') on |z| = 0.999, F''/F' from the shifted function."""
    p = ParamTriple(a, b, c)
    z = 0.999 * np.exp(2j * np.pi * np.arange(n) / n)
    g1, _, _ = hyp2f1_array(p.shifted(1), z)
    g2, _, _ = hyp2f1_array(p.shifted(2), z)
    k = (a + 1) * (b + 1) / (c + 1)
    return float(np.min((1 + z * k * g2 / g1).real))


def test_convex_uses_alexander_shift_upwards():
    # F(3, 2; 4; z) is not convex; the shifted-down formulas would accept it
    v, lmn = criteria.sufficient_convex(ParamTriple(3, 2, 4))
    assert v.status is Status.FAILS
    assert (lmn.L, lmn.M, lmn.N) == (6, 0, -18)
    assert _convexity_min(3, 2, 4) < -0.2
    v, lmn = criteria.sufficient_convex(ParamTriple(1, 1 + 1j, 2 + 1j))
    assert v.status is Status.HOLDS
    assert (lmn.L, lmn.N) == (2, 2) and abs(lmn.M) < 1e-15


def test_convex_holds_implies_numerically_convex():
    gen = rng(13)
    found = 0
    for _ in range(400):
        a, b = gen.uniform(-0.9, 2, 2) + 1j * gen.uniform(-1, 1, 2) * (gen.uniform() < 0.5)
        c = a + b + 2 - gen.uniform(-3, 1)
        p = valid_triple(a, b, c)
        if p is None:
            continue
        v, _ = criteria.sufficient_convex(p)
        if v.status is Status.HOLDS and v.margin > 1e-3:
            found += 1
            assert _convexity_min(p.a, p.b, p.c) >= -1e-6
            if found == 15:
                break
    assert found == 15


@given(cplx, cplx, cplx)
def test_alexander_shift_identity(a, b, c):
    p, q = valid_triple(a, b, c), valid_triple(a + 1, b + 1, c + 1)
    if p is None or q is None or a * b == 0:
        return
    vc, lc = criteria.sufficient_convex(p)
    vs, ls = criteria.sufficient_starlike(q)
    assert vc.status is vs.status
    for x, y in zip((lc.L, lc.M, lc.N), (ls.L, ls.M, ls.N)):
        assert abs(x - y) <= 1e-12 * max(1, abs(x))


# ---------------------------------------------------------------------------
# spirallike


def test_spirallike_spec_examples():
    lam = math.pi / 4
    a = 2 * cmath.exp(1j * lam) * math.cos(lam)
    v, lmn = criteria.sufficient_spirallike(a, 1, lam)
    assert v.status is Status.HOLDS and abs(lmn.M) < 1e-12
    assert lmn.L == pytest.approx(2 * (2 + math.cos(2 * lam)) * math.cos(lam))
    assert lmn.N == pytest.approx(2 * (2 * math.cos(lam) ** 2 + 1) * math.cos(lam))
    v, _ = criteria.sufficient_spirallike(EX_A, EX_B, EX_LAMBDA)
    assert v.status is Status.HOLDS
    with pytest.raises(LambdaZero):
        criteria.sufficient_spirallike(1, 1, 0)


def test_radius_bound_family():
    lam = math.pi / 4
    v = criteria.cor_spl_radius(2.5857864376, lam)
    assert v.status is Status.HOLDS
    assert "2.58578643763" in v.diagnostics
    R = (1 - math.sin(lam)) * (3 + 2 * math.sin(lam)) / (math.sin(lam) * math.cos(lam))
    v, lmn = criteria.sufficient_spirallike(2, R * cmath.exp(1j * lam), lam)
    assert v.status is Status.HOLDS and abs(lmn.det) < 1e-9
    v, _ = criteria.sufficient_spirallike(2, 1.01 * R * cmath.exp(1j * lam), lam)
    assert v.status is Status.FAILS
    assert criteria.cor_spl_radius(1.01 * R, -lam).status is Status.FAILS


@given(st.floats(0.05, 1.5), st.floats(0.01, 20))
def test_radius_bound_matches_general_test(lam, R):
    bound = (1 - math.sin(lam)) * (3 + 2 * math.sin(lam)) / (math.sin(lam) * math.cos(lam))
    if abs(R - bound) < 1e-6:
        return
    v, _ = criteria.sufficient_spirallike(2, R * cmath.exp(1j * lam), lam)
    assert (v.status is Status.HOLDS) == criteria.cor_spl_radius(R, lam).holds


@given(st.floats(0.01, 10), angle)
def test_rotated_a_family_always_holds(b, lam):
    a = 2 * cmath.exp(1j * lam) * math.cos(lam)
    v, _ = criteria.sufficient_spirallike(a, b, lam)
    assert v.status is Status.HOLDS
    assert criteria.rotated_family_check(b, lam).holds


def test_cor1_examples():
    v = criteria.cor1_check(EX_A, EX_B, EX_LAMBDA)
    assert v.status is Status.HOLDS
    assert v.margin == pytest.approx(0.875)
    assert criteria.cor1_check(1 + 1j, 2, 0.3).status is Status.NOT_APPLICABLE
    # small q with a large real sum
    lam = 0.4
    q = 1e-6
    s = 50
    r = cmath.sqrt(s * s - 4 * q * cmath.exp(1j * lam))
    a, b = (s + r) / 2, (s - r) / 2
    assert criteria.cor1_check(a, b, lam).status is Status.HOLDS


def test_cor_s_example_arithmetic():
    v = criteria.cor_s_check(EX_A, EX_B, EX_LAMBDA)
    assert v.status is Status.HOLDS
    assert v.margin == pytest.approx(0.4375, abs=1e-14)
    assert "0.9375" in v.diagnostics


def test_cor2_examples():
    assert criteria.cor2_check(1, 2, math.pi / 3).status is Status.NOT_APPLICABLE
    assert criteria.cor2_check(1 + 1j, 2, 0.3).status is Status.NOT_APPLICABLE
    assert criteria.cor2_check(1, 1, 0.2).status is Status.HOLDS


def _pair_from_sum_product(s, q):
    r = cmath.sqrt(s * s - 4 * q)
    return (s + r) / 2, (s - r) / 2


@given(cplx, st.floats(0.01, 10), angle)
def test_cor1_specializes_general_test(sum_ab, q, lam):
    a, b = _pair_from_sum_product(sum_ab, q * cmath.exp(1j * lam))
    v = criteria.cor1_check(a, b, lam)
    if v.status is Status.HOLDS and v.margin > 1e-6:
        assert criteria.sufficient_spirallike(a, b, lam)[0].status is Status.HOLDS


@given(cplx, st.floats(0.01, 10), st.floats(-1.04, 1.04).filter(lambda x: abs(x) > 1e-3))
def test_cor2_specializes_general_test(sum_ab, q, lam):
    a, b = _pair_from_sum_product(sum_ab, q)
    v = criteria.cor2_check(a, b, lam)
    if v.status is Status.HOLDS and v.margin > 1e-6:
        assert criteria.sufficient_spirallike(a, b, lam)[0].status is Status.HOLDS


@given(cplx, cplx, angle)
def test_conjugation_symmetry_of_verdicts(a, b, lam):
    ac, bc = a.conjugate(), b.conjugate()
    v1, l1 = criteria.sufficient_spirallike(a, b, lam)
    v2, l2 = criteria.sufficient_spirallike(ac, bc, -lam)
    if abs(v1.margin - v2.margin) < 1e-9 or min(abs(v1.margin), abs(v2.margin)) > 1e-6:
        assert v1.status is v2.status
    assert criteria.cor1_check(a, b, lam).status is criteria.cor1_check(ac, bc, -lam).status
    assert criteria.cor2_check(a, b, lam).status is criteria.cor2_check(ac, bc, -lam).status
    p = valid_triple(a, b, a + b + 1)
    if p is not None:
        c1, n1 = criteria.necessary_spirallike(p, lam)
        c2, n2 = criteria.necessary_spirallike(p.conjugate(), -lam)
        assert c1 is c2
        assert n1.status is n2.status or abs(n1.margin) < 1e-9


# ---------------------------------------------------------------------------
# strong starlikeness


def test_strongly_starlike_examples():
    v = criteria.strongly_starlike_check(1, 1, 0.9)
    assert v.status is Status.HOLDS
    assert v.margin == pytest.approx(9 * math.sin(0.45 * math.pi) ** 2 - 3)
    v = criteria.strongly_starlike_check(1, 1, 0.34)
    assert v.status is Status.FAILS
    assert v.margin == pytest.approx(9 * math.sin(0.17 * math.pi) ** 2 - 3)


def test_ellipse_examples():
    assert criteria.cor_ss_ellipse(1, 0, 0.9).status is Status.HOLDS
    for alpha in (0.35, 0.5, 0.9, 0.99):
        assert criteria.cor_ss_ellipse(0, 0, alpha).status is Status.FAILS
        centre = 2 * math.sin(math.pi * alpha / 2) ** 2
        assert criteria.cor_ss_ellipse(centre, 0, alpha).status is Status.HOLDS


@given(st.floats(-3, 6), st.floats(-4, 4), st.floats(0.34, 0.99))
def test_ellipse_equals_eq_ss(s, t, alpha):
    if s * s + t * t == 0:
        return
    v1 = criteria.cor_ss_ellipse(s, t, alpha)
    v2 = criteria.strongly_starlike_check(s + 1j * t, s - 1j * t, alpha)
    assert v1.status is v2.status
    assert v1.margin == pytest.approx(v2.margin, abs=1e-9)


@given(st.floats(0.05, 6), st.floats(0.01, 9), st.floats(0.34, 0.99))
def test_strong_starlikeness_bridge(s, q, alpha):
    a, b = _pair_from_sum_product(s, q)
    v = criteria.strongly_starlike_check(a, b, alpha)
    if v.status is Status.HOLDS and v.margin > 1e-6:
        lam = (1 - alpha) * math.pi / 2
        for sgn in (1, -1):
            assert criteria.sufficient_spirallike(a, b, sgn * lam)[0].status is Status.HOLDS


# ---------------------------------------------------------------------------
# classical results and helpers


def test_thm_a_examples():
    case, val, exact = criteria.thmA_sigma(ParamTriple(-0.5, 1, 3))
    assert case == "ii" and exact
    assert val == pytest.approx(2 / 3)
    case, val, exact = criteria.thmA_sigma(ParamTriple(1, 1, 2))
    assert case == "i" and exact
    assert val == pytest.approx(0.72134752044448170368, abs=1e-12)
    assert val >= 2 / 3
    assert criteria.thmA_sigma(ParamTriple(2, 1, 2)) == ("iii", 0.0, False)
    assert criteria.thmA_sigma(ParamTriple(1 + 1j, 1, 2))[0] == "none"


def test_thm_a_case_ii_is_h_at_one():
    p = ParamTriple(-0.5, 1, 3)
    h1 = 1 + p.a * p.b / (p.excess - 1)
    assert criteria.thmA_sigma(p)[1] == pytest.approx(h1.real)


def test_thm_a_case_i_bound_random():
    gen = rng(14)
    for _ in range(100):
        a, b, c = np.sort(gen.uniform(0.01, 5, 3))
        _, val, _ = criteria.thmA_sigma(ParamTriple(a, b, c))
        assert val >= 1 - a * b / (b + c) - 1e-10


def test_classical_starlike_examples():
    assert criteria.corB_starlike(ParamTriple(1, 1, 2)).status is Status.HOLDS
    v = criteria.corB_starlike(ParamTriple(-0.5, 1, 3))
    assert v.status is Status.HOLDS and v.margin == pytest.approx(1.0)
    assert criteria.corB_starlike(ParamTriple(3, 1, 1)).status is Status.FAILS
    assert criteria.corB_starlike(ParamTriple(1, 0.5 + 0.2j, 1.5 + 0.2j)).status is Status.HOLDS


def test_coefficient_bound_examples():
    assert criteria.coefficient_bound_check(ParamTriple(2, 2, 1)).status is Status.FAILS
    assert criteria.coefficient_bound_check(ParamTriple(1, 1, 2)).status is Status.HOLDS
    v = criteria.coefficient_bound_check(ParamTriple(2, 1.6, 1.4))
    assert v.status is Status.FAILS and v.margin == pytest.approx(2 - 3.2 / 1.4)


def test_coefficient_bound_on_degenerate_family():
    # (2, b, 3 - conj(b)) passes the coefficient test exactly when Re b <= 3/2
    for b in (1.2 + 0.5j, 1.5 + 1j, 1.8 - 0.3j, 2.4 + 2j):
        v = criteria.coefficient_bound_check(ParamTriple(2, b, 3 - b.conjugate()))
        assert v.holds == (b.real <= 1.5)


def test_boundedness_examples():
    assert criteria.boundedness(ParamTriple(1, 1, 3))
    assert not criteria.boundedness(ParamTriple(1, 1, 2))
    assert not criteria.boundedness(ParamTriple(1, 1, 1.5))
    assert criteria.boundedness(ParamTriple(1, 1, 2 + 1j))


def test_cluster_annulus_examples():
    ann = criteria.cluster_annulus(ParamTriple(1, 1, 2 + 1j))
    assert abs(ann.w0 - (1 - 1j)) < 1e-12
    assert ann.R == pytest.approx(0.38470717891526908028, rel=1e-12)
    assert ann.inner == pytest.approx(ann.R * math.exp(-math.pi / 2))
    assert ann.outer == pytest.approx(ann.R * math.exp(math.pi / 2))
    conj = criteria.cluster_annulus(ParamTriple(1, 1, 2 - 1j))
    assert abs(conj.w0 - ann.w0.conjugate()) < 1e-12 and conj.R == pytest.approx(ann.R)
    with pytest.raises(NotZeroImbalanced):
        criteria.cluster_annulus(ParamTriple(1, 1, 2))


def test_verdict_serialisation():
    v = criteria.corB_starlike(ParamTriple(3, 1, 1))
    d = v.to_dict()
    assert d["status"] == "Fails" and d["margin"] is None
