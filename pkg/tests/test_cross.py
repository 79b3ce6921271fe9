import numpy as np
import pytest
from hypothesis import given

from g2algebra.cross import (AssociativePlane, DegenerateInputError, Frame, complete_g2_frame, cross,
                             is_associative, orthonormalize, psi_vector, random_associative_plane,
                             random_g2_frame, triple_phi)
from g2algebra.tensors import PHI

from conftest import vectors


def brute_triple(u, v, w):
    total = 0.0
    for i in range(7):
        for j in range(7):
            for k in range(7):
                total += u[i] * v[j] * w[k] * PHI[i, j, k]
    return total


def test_cross_examples(E):
    np.testing.assert_array_equal(cross(E[0], E[1]), E[2])
    np.testing.assert_array_equal(cross(E[4], E[5]), -E[2])
    np.testing.assert_array_equal(cross(E[3], E[3]), 0)


def test_triple_and_psi_vector_examples(E):
    assert triple_phi(E[0], E[1], E[2]) == 1
    np.testing.assert_array_equal(psi_vector(E[3], E[4], E[5]), E[6])
    np.testing.assert_array_equal(psi_vector(E[0], E[1], E[3]), -E[6])


def test_triple_phi_integer_oracle(rng):
    for _ in range(20):
        u, v, w = rng.integers(-4, 5, size=(3, 7))
        assert triple_phi(u, v, w) == brute_triple(u, v, w)


@given(vectors, vectors)
def test_cross_norm_and_orthogonality(u, v):
    uv = cross(u, v)
    scale = max(1.0, (u @ u) * (v @ v))
    assert abs(uv @ uv - ((u @ u) * (v @ v) - (u @ v) ** 2)) <= 1e-10 * scale
    assert abs(uv @ u) <= 1e-10 * scale
    np.testing.assert_allclose(cross(v, u), -uv, atol=1e-12)


@given(vectors, vectors, vectors)
def test_iterated_cross(u, v, w):
    lhs = cross(u, cross(v, w))
    rhs = -(u @ v) * w + (u @ w) * v + psi_vector(u, v, w)
    scale = max(1.0, np.linalg.norm(u) * np.linalg.norm(v) * np.linalg.norm(w))
    assert np.linalg.norm(lhs - rhs) <= 1e-10 * scale
    same = cross(u, cross(u, w)) + (u @ u) * w - (u @ w) * u
    assert np.linalg.norm(same) <= 1e-10 * max(1.0, (u @ u) * np.linalg.norm(w))


def test_iterated_cross_totally_skew_for_orthogonal(rng):
    for _ in range(200):
        a, b, c = orthonormalize(rng.standard_normal((3, 7))) * rng.uniform(0.5, 3, size=(3, 1))
        t = cross(a, cross(b, c))
        np.testing.assert_allclose(cross(b, cross(a, c)), -t, atol=1e-12)
        np.testing.assert_allclose(cross(c, cross(b, a)), -t, atol=1e-12)
        np.testing.assert_allclose(cross(b, cross(c, a)), t, atol=1e-12)


def test_complete_standard_frame(E):
    f = complete_g2_frame(E[0], E[1], E[3])
    np.testing.assert_array_equal(f.basis, E)
    assert f.g2_adapted


def test_complete_frame_from_e2_e3(E):
    f = complete_g2_frame(E[1], E[2], E[3])
    np.testing.assert_array_equal(f.basis[2], E[0])
    assert f.g2_adapted and f.orth_error == 0


def test_complete_frame_rejects_associative_e4(E):
    with pytest.raises(DegenerateInputError):
        complete_g2_frame(E[0], E[1], E[2])
    with pytest.raises(DegenerateInputError):
        complete_g2_frame(E[0], E[0], E[3])


def test_adapted_frames_preserve_phi():
    for seed in range(50):
        f = random_g2_frame(seed)
        assert f.g2_adapted
        np.testing.assert_allclose(f.phi_components(), PHI, atol=1e-12)
        b = f.basis
        for i in range(7):
            for j in range(7):
                np.testing.assert_allclose(cross(b[i], b[j]), PHI[i, j] @ b, atol=1e-12)


def test_non_adapted_frame_flagged(E):
    f = Frame.from_vectors(E[[0, 1, 3, 2, 4, 5, 6]])
    assert not f.g2_adapted


def test_associativity_examples(E):
    assert is_associative(E[:3])
    assert is_associative(np.array([-E[2], E[4], E[5]]))
    t = is_associative(E[[0, 1, 3]])
    assert not t and t.plane is None
    np.testing.assert_allclose(t.psi_residual, 1.0)
    with pytest.raises(DegenerateInputError):
        is_associative(np.array([E[0], E[1], E[0] + E[1]]))


def test_associativity_is_basis_independent(rng, E):
    mix = rng.standard_normal((3, 3)) + 3 * np.eye(3)
    assert is_associative(mix @ E[:3])


def test_random_plane_determinism_and_invariants():
    assert np.array_equal(random_associative_plane(9).basis, random_associative_plane(9).basis)
    worst = 0.0
    for seed in range(1000):
        p = random_associative_plane(seed)
        b = p.basis
        worst = max(worst, np.abs(b @ b.T - np.eye(3)).max(), np.abs(cross(p.u, p.v) - p.w).max(), p.psi_residual())
    assert worst < 1e-10


def test_plane_complement_orientation():
    p = random_associative_plane(4)
    c = p.complement()
    assert np.linalg.det(np.vstack([p.basis, c])) == pytest.approx(1.0)
    with pytest.raises(DegenerateInputError):
        AssociativePlane(p.u, p.v, -p.w)
