import numpy as np
import pytest
from hypothesis import given

from g2algebra.canonical import (NotInG2Error, block_parameters, classify_rank, g2_block, g2_canonical_form,
                                 lambda7_block, lambda7_canonical_form, maximal_torus_check, numerical_rank,
                                 pick_unit, rank4_block_form, restriction_charpoly, skew_canonical_form, so7_block,
                                 torus_element)
from g2algebra.cross import Frame, is_associative, random_g2_frame
from g2algebra.rng import gaussian_skew, make_rng
from g2algebra.splitting import bracket, is_in_g2, norm, phi_contract, random_g2, wedge2

from conftest import seeds, skew_matrices


def charpoly_from_blocks(lam, nu, mu):
    """Coefficients of t (t^2 + lam^2)(t^2 + nu^2)(t^2 + mu^2)."""
    p = np.poly1d([1, 0])
    for s in (lam, nu, mu):
        p = p * np.poly1d([1, 0, s * s])
    return p.coeffs


def test_so7_zero():
    s = skew_canonical_form(np.zeros((7, 7)))
    assert s.lambdas == (0.0, 0.0, 0.0)
    np.testing.assert_array_equal(s.frame.basis, np.eye(7))


def test_so7_of_seven_part(E):
    x = phi_contract(E[0])
    s = skew_canonical_form(x)
    np.testing.assert_allclose(s.lambdas, 1.0)
    assert s.off_block < 1e-12


def test_lambda7_pattern_needs_one_reflection(E):
    x = phi_contract(E[0])
    m = Frame.standard().matrix_of(x)
    np.testing.assert_array_equal(m, lambda7_block(1.0))
    upper = [m[1, 2], m[3, 4], m[5, 6]]
    assert upper == [1, 1, -1]
    flip = np.eye(7)
    flip[5, 5] = -1
    m2 = flip @ m @ flip.T
    assert len({m2[1, 2], m2[3, 4], m2[5, 6]}) == 1


@given(skew_matrices())
def test_so7_reconstruction_and_charpoly(x):
    if norm(x) < 1e-6:
        return
    s = skew_canonical_form(x)
    lam, nu, mu = s.lambdas
    assert lam >= nu >= mu >= 0
    n = norm(x)
    np.testing.assert_allclose(s.frame.form_from(s.block_matrix()), x, atol=1e-9 * n)
    assert s.off_block < 1e-9 * n
    ref = np.real(np.poly(x))
    ours = charpoly_from_blocks(lam, nu, mu)
    scale = np.array([n ** k for k in range(8)])
    np.testing.assert_allclose(ours / scale, ref / scale, atol=1e-8)


def test_so7_decomposable(E):
    s = skew_canonical_form(wedge2(E[0], E[1]))
    assert s.lambdas == (1.0, 0.0, 0.0)
    assert numerical_rank(wedge2(E[0], E[1]))[0] == 2


def test_lambda7_canonical(E):
    lam, frame = lambda7_canonical_form(E[0])
    assert lam == 1.0
    np.testing.assert_array_equal(frame.basis, E)
    assert lambda7_canonical_form(np.zeros(7))[0] == 0.0


def test_lambda7_canonical_random(rng):
    for _ in range(100):
        u = rng.standard_normal(7)
        lam, frame = lambda7_canonical_form(u)
        assert lam == pytest.approx(np.linalg.norm(u))
        assert frame.g2_adapted
        np.testing.assert_allclose(frame.matrix_of(phi_contract(u)), lambda7_block(lam), atol=1e-12 * lam)
        assert numerical_rank(phi_contract(u))[0] == 6


def test_g2_zero_case():
    r = g2_canonical_form(np.zeros((7, 7)))
    assert r.rank_class == 0 and r.lam == 0


def test_g2_case_two_standard(E):
    r = g2_canonical_form(g2_block(1.0, 0.0))
    assert r.rank_class == 4
    assert (r.lam, r.nu, r.mu) == pytest.approx((1.0, 1.0, 0.0))
    k = r.kernel_basis
    np.testing.assert_allclose(np.abs(k @ E[[2, 4, 5]].T), np.eye(3), atol=1e-12)
    assert is_associative(k)


def test_g2_displayed_matrix():
    r = g2_canonical_form(g2_block(2.0, 1.0))
    assert (r.lam, r.nu, r.mu, r.rank_class) == pytest.approx((2.0, 1.0, 1.0, 6))


def test_g2_rejects_non_member(E):
    with pytest.raises(NotInG2Error):
        g2_canonical_form(phi_contract(E[0]))


@given(seeds)
def test_g2_canonical_random(seed):
    x = random_g2(seed)
    n = norm(x)
    r = g2_canonical_form(x)
    assert r.frame.g2_adapted and r.frame.adapted_error < 1e-9
    np.testing.assert_allclose(r.frame.matrix_of(x), r.block_matrix(), atol=1e-8 * n)
    assert abs(r.lam - r.nu - r.mu) < 1e-9 * n
    assert r.lam >= r.nu >= r.mu >= 0
    assert r.rank_class == 6 and not r.rotated
    assert r.reconstruction_error < 1e-8


@given(seeds)
def test_restriction_charpoly(seed):
    x = random_g2(seed)
    r = g2_canonical_form(x)
    expected = (np.poly1d([1, 0, r.nu**2]) * np.poly1d([1, 0, r.mu**2])).coeffs
    n = norm(x)
    scale = np.array([n ** k for k in range(5)])
    np.testing.assert_allclose(restriction_charpoly(x, r) / scale, expected / scale, atol=1e-8)


@given(seeds)
def test_alternate_form_parameters(seed):
    x = random_g2(seed)
    r = g2_canonical_form(x)
    a, b, c = block_parameters(r.frame.matrix_of(x))
    n = norm(x)
    assert abs(a) < 1e-8 * n and abs(b) < 1e-8 * n and abs(c + r.nu) < 1e-8 * n


def test_torus_frame_gives_torus_element():
    x = random_g2(3)
    r = g2_canonical_form(x)
    t = r.torus_frame()
    assert t.g2_adapted
    np.testing.assert_allclose(t.matrix_of(x), torus_element(r.lam, r.mu), atol=1e-12 * norm(x))


def test_canonical_is_deterministic():
    x = random_g2(77)
    assert np.array_equal(g2_canonical_form(x).frame.basis, g2_canonical_form(x.copy()).frame.basis)


def test_pick_unit_rule():
    space = np.array([[0.0, 0.6, 0.8, 0, 0, 0, 0], [0.0, -0.8, 0.6, 0, 0, 0, 0]])
    np.testing.assert_allclose(pick_unit(space), np.eye(7)[1])
    np.testing.assert_allclose(pick_unit(-space[:1]), space[0])


def test_classify_examples(E):
    c = classify_rank(wedge2(E[0], E[1]))
    assert c.rank == 2 and c.mixed
    c = classify_rank(phi_contract(E[0]))
    assert c.rank == 6 and c.in_lambda7 and not c.in_g2
    assert classify_rank(np.zeros((7, 7))).rank == 0


def test_no_rank_two_in_g2():
    rng = make_rng(8)
    ranks = set()
    worst = np.inf
    for _ in range(1000):
        x = random_g2(rng)
        s = np.linalg.svd(x, compute_uv=False)
        worst = min(worst, s[3] / s[0])
        ranks.add(numerical_rank(x)[0])
    assert ranks <= {4, 6}
    assert worst > 1e-8


def test_rank_four_kernel_certified():
    for seed in range(20):
        x = random_g2_frame(seed).form_from(g2_block(1.3, 0.0))
        c = classify_rank(x)
        assert c.rank == 4 and c.in_g2 and c.kernel_associative


def test_marginal_band_reported():
    x = so7_block(1.0, 1.0, 1e-9)
    rank, marginal = numerical_rank(x)
    assert marginal and rank == 4


def test_rank4_block_case_two():
    b = rank4_block_form(g2_block(1.0, 0.0))
    assert b.a**2 + b.b**2 + b.c**2 == pytest.approx(1.0)
    assert b.det_residual < 1e-9
    z = rank4_block_form(np.zeros((7, 7)))
    assert (z.a, z.b, z.c) == (0.0, 0.0, 0.0)


def test_rank4_block_random():
    rng = make_rng(4)
    for _ in range(50):
        lam = float(np.exp(rng.standard_normal()))
        x = random_g2_frame(rng).form_from(g2_block(lam, 0.0))
        b = rank4_block_form(x)
        assert b.frame.g2_adapted
        assert b.reconstruction_error < 1e-8 and b.det_residual < 1e-9
        assert b.a**2 + b.b**2 + b.c**2 == pytest.approx(lam**2)


def test_rank4_block_rejects_rank_six():
    with pytest.raises(ValueError):
        rank4_block_form(random_g2(1))


def test_maximal_torus():
    rep = maximal_torus_check(100, seed=3)
    assert rep.passed, str(rep)
    t1, t2 = torus_element(1, 0), torus_element(1, 1)
    assert norm(bracket(t1, t2)) < 1e-12
    assert is_in_g2(torus_element(2, 1))


def test_generic_skew_is_not_g2(rng):
    assert not is_in_g2(gaussian_skew(rng))
