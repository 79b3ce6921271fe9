import numpy as np
import pytest
from hypothesis import given

from g2algebra.cross import AssociativePlane, DegenerateInputError, cross, random_associative_plane
from g2algebra.splitting import bracket, is_in_g2, norm, phi_contract, project7, psi_2form, to_vec21, wedge2
from g2algebra.subalgebras import (NotAssociativeError, Subalgebra, coassoc_selfdual_check, lambda2_of_plane,
                                   principal_angles, proper_subspace_check, psi_of_plane,
                                   random_orthonormal_triple, random_plane_pair_disjoint,
                                   random_plane_pair_sharing, self_dual_forms, subspace_intersection,
                                   theta_intersect, theta_of_plane)

from conftest import seeds


@pytest.fixture
def P(E):
    return AssociativePlane(E[0], E[1], E[2])


def test_principal_angles_oracle(rng):
    """Compare with the cosine formula on well-separated subspaces."""
    a, b = rng.standard_normal((3, 10)), rng.standard_normal((4, 10))
    ang, _ = principal_angles(a, b)
    qa, _ = np.linalg.qr(a.T)
    qb, _ = np.linalg.qr(b.T)
    ref = np.arccos(np.clip(np.linalg.svd(qa.T @ qb, compute_uv=False), -1, 1))
    np.testing.assert_allclose(np.sort(ang), np.sort(ref), atol=1e-7)


def test_subspace_intersection_small_angles(E):
    a = E[:2]
    b = np.array([E[0], E[2]])
    np.testing.assert_allclose(np.abs(subspace_intersection(a, b)), E[:1], atol=1e-15)
    tilted = np.array([E[0] + 1e-9 * E[3], E[2]])
    assert len(subspace_intersection(a, tilted)) == 1


def test_lambda2_standard(P, E):
    l2 = lambda2_of_plane(P)
    np.testing.assert_array_equal(l2.basis[0], wedge2(E[1], E[2]))
    np.testing.assert_array_equal(l2.basis[1], wedge2(E[2], E[0]))
    c = l2.structure_constants
    np.testing.assert_allclose(c, -np.transpose(c, (1, 0, 2)), atol=1e-15)
    # with 2-forms stored as X(e_i, e_j) the commutator gives [v^w, w^u] = -(u^v)
    np.testing.assert_allclose(bracket(l2.basis[0], l2.basis[1]), -l2.basis[2], atol=1e-15)
    assert c[0, 1, 2] == pytest.approx(-1.0)
    assert l2.closure_residual < 1e-10


@given(seeds)
def test_lambda2_random_closure(seed):
    assert lambda2_of_plane(random_associative_plane(seed)).closure_residual < 1e-10


def test_psi_of_plane_standard(P, E):
    ps = psi_of_plane(P)
    np.testing.assert_allclose(ps.gram(), np.eye(3), atol=1e-15)
    np.testing.assert_array_equal(ps.basis[2], -0.5 * psi_2form(E[0], E[1]))
    assert ps.so3_deviation() < 1e-15


def test_psi_orientation_sign_matters(P):
    u, v, w = P.u, P.v, P.w
    flipped = Subalgebra.from_basis([0.5 * psi_2form(v, w), 0.5 * psi_2form(w, u), 0.5 * psi_2form(u, v)])
    assert flipped.so3_deviation() > 0.5


@given(seeds)
def test_psi_of_random_plane(seed):
    p = random_associative_plane(seed)
    ps = psi_of_plane(p)
    assert ps.closure_residual < 1e-9 and ps.so3_deviation() < 1e-9
    np.testing.assert_allclose(ps.gram(), np.eye(3), atol=1e-10)
    # bracket of basis elements through the main identity path agrees with the matrix commutator
    u, v, w = p.u, p.v, p.w
    direct = bracket(psi_2form(u, w), psi_2form(v, w))
    via_identity = -(w @ w) * psi_2form(u, v) - psi_2form(cross(u, w), cross(v, w))
    np.testing.assert_allclose(direct, via_identity, atol=1e-12)


def test_psi_of_plane_strictness(E):
    with pytest.raises(NotAssociativeError):
        psi_of_plane(E[[0, 1, 3]])


def test_non_associative_closure_fails():
    worst = min(psi_of_plane(random_orthonormal_triple(s), strict=False).closure_residual for s in range(100))
    assert worst > 0.01


def test_orthogonality_for_any_plane():
    for seed in range(50):
        t = random_orthonormal_triple(seed)
        l2 = lambda2_of_plane(t)
        ps = psi_of_plane(t, strict=False)
        assert np.abs(l2.coordinates() @ ps.coordinates().T).max() < 1e-10


def test_commutation_fails_off_associative():
    t = random_orthonormal_triple(0)
    d = theta_of_plane(t, strict=False)
    assert d.cross_bracket > 1e-3


def test_theta_standard(P):
    t = theta_of_plane(P)
    assert t.theta.dim == 6
    assert np.linalg.matrix_rank(t.theta.gram()) == 6
    assert t.cross_bracket < 1e-12
    assert t.theta.closure_residual < 1e-12


@given(seeds)
def test_theta_seven_part_is_plane(seed):
    p = random_associative_plane(seed)
    t = theta_of_plane(p)
    vecs = t.lambda7_vectors()
    assert len(vecs) == 3
    assert principal_angles(vecs, p.basis)[0].max() < 1e-6


def test_theta_alternative_span(P):
    t = theta_of_plane(P)
    alt = np.vstack([lambda2_of_plane(P).coordinates(), [to_vec21(phi_contract(x)) for x in P.basis]])
    assert principal_angles(t.theta.coordinates(), alt)[0].max() < 1e-9


def test_theta_intersect_fixed_pair(P, E):
    r = theta_intersect(P, np.array([-E[2], E[4], E[5]]))
    assert r.dim == 1
    assert r.generator_angle < 1e-12
    np.testing.assert_allclose(np.abs(r.plane_intersection[0]), E[2], atol=1e-15)
    assert r.pi14_residual < 1e-12


def test_theta_intersect_equal(P):
    r = theta_intersect(P, P)
    assert r.dim == 6 and r.equal_planes


def test_theta_intersect_random_pairs():
    rng = np.random.default_rng(3)
    for _ in range(20):
        p, q = random_plane_pair_disjoint(rng)
        assert theta_intersect(p, q).dim == 0
        p, q, v = random_plane_pair_sharing(rng)
        r = theta_intersect(p, q)
        assert r.dim == 1 and r.generator_angle < 1e-6 and r.pi14_residual < 1e-8
        assert abs(abs(r.plane_intersection[0] @ v) - 1) < 1e-12


def test_proper_subspaces(E):
    assert proper_subspace_check(E[:3]).passed
    assert proper_subspace_check(E[:1]).passed
    assert proper_subspace_check(E).passed
    assert proper_subspace_check(np.random.default_rng(1).standard_normal((5, 7))).passed
    with pytest.raises(DegenerateInputError):
        proper_subspace_check(np.array([E[0], E[0]]))


def test_self_dual_on_complement(P):
    rep = coassoc_selfdual_check(P)
    assert rep.passed, str(rep)
    f = P.complement()
    assert all(is_in_g2(x) for x in self_dual_forms(f, +1))
    assert not any(is_in_g2(x) for x in self_dual_forms(f, -1))


def test_self_dual_random():
    for seed in range(30):
        assert coassoc_selfdual_check(random_associative_plane(seed)).passed


def test_pi7_parts_nonzero(E):
    assert norm(project7(wedge2(E[0], E[1]))) == pytest.approx(norm(phi_contract(E[2])) / 3)
    assert norm(project7(psi_2form(E[0], E[1]))) > 0
