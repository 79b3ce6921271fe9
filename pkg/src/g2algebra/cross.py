"""The 7-dimensional cross product, G2-adapted frames and associative 3-planes."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .rng import make_rng
from .tensors import PHI, PSI

EPS_ORTH = DEFAULT.orth
EPS_ASSOC = DEFAULT.assoc

# frame slots (0-based) fixed by e3 = e1 x e2, e5 = e1 x e4, e6 = e2 x e4, e7 = e3 x e4
ADAPTED_RELATIONS = ((0, 1, 2), (0, 3, 4), (1, 3, 5), (2, 3, 6))


class DegenerateInputError(ValueError):
    """Vectors that were required to be independent or orthonormal are not."""


def _vec(u) -> np.ndarray:
    u = np.asarray(u)
    if u.shape != (7,):
        raise ValueError(f"expected a 7-vector, got shape {u.shape}")
    return u


def cross(u, v) -> np.ndarray:
    """``(u x v)_k = u_p v_q phi_pqk``."""
    return np.einsum("p,q,pqk->k", _vec(u), _vec(v), PHI)


def triple_phi(u, v, w) -> float:
    """phi(u, v, w) = <u x v, w>."""
    return np.einsum("i,j,k,ijk->", _vec(u), _vec(v), _vec(w), PHI)[()]


def psi_vector(u, v, w) -> np.ndarray:
    """psi(u, v, w) with the last index raised: components u_i v_j w_k psi_ijkl."""
    return np.einsum("i,j,k,ijkl->l", _vec(u), _vec(v), _vec(w), PSI)


def psi4(u, v, w, y) -> float:
    return np.einsum("i,j,k,l,ijkl->", _vec(u), _vec(v), _vec(w), _vec(y), PSI)[()]


def orthonormalize(vectors, tol: float = 1e-10) -> np.ndarray:
    """Modified Gram-Schmidt with one re-orthogonalisation pass.

    Returns the orthonormal rows.  Raises DegenerateInputError when a vector
    is dependent on its predecessors (relative tolerance ``tol``).
    """
    vs = np.array(vectors, dtype=float, ndmin=2)
    out = []
    for x in vs:
        scale = np.linalg.norm(x)
        if scale == 0.0:
            raise DegenerateInputError("zero vector in span")
        y = x / scale
        for _ in range(2):
            for q in out:
                y = y - (q @ y) * q
        n = np.linalg.norm(y)
        if n <= tol:
            raise DegenerateInputError("input vectors are linearly dependent")
        out.append(y / n)
    return np.array(out)


def orthogonal_complement(rows) -> np.ndarray:
    """Orthonormal rows spanning the complement of the row span of ``rows``."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    _, s, vt = np.linalg.svd(rows, full_matrices=True)
    rank = int(np.sum(s > 1e-10 * max(s.max(initial=0.0), 1.0)))
    return vt[rank:]


@dataclass(frozen=True)
class Frame:
    """Ordered orthonormal frame; ``basis[i]`` is e_{i+1}.

    ``g2_adapted`` is computed from the cross-product relations at
    construction, never asserted by the caller.
    """

    basis: np.ndarray
    g2_adapted: bool
    orth_error: float
    adapted_error: float

    @classmethod
    def from_vectors(cls, vectors, tol: float = EPS_ORTH) -> "Frame":
        b = np.array(vectors, dtype=float)
        if b.shape != (7, 7):
            raise ValueError("a frame needs seven 7-vectors")
        orth = float(np.abs(b @ b.T - np.eye(7)).max())
        if orth > tol:
            raise DegenerateInputError(f"frame is not orthonormal (error {orth:.2e})")
        adapt = max(float(np.abs(cross(b[i], b[j]) - b[k]).max()) for i, j, k in ADAPTED_RELATIONS)
        b.setflags(write=False)
        return cls(b, adapt <= tol, orth, adapt)

    @classmethod
    def standard(cls) -> "Frame":
        return cls.from_vectors(np.eye(7))

    @property
    def vectors(self) -> tuple[np.ndarray, ...]:
        return tuple(self.basis)

    def matrix_of(self, x) -> np.ndarray:
        """Components X(e_i, e_j) of a 2-form in this frame."""
        return self.basis @ np.asarray(x) @ self.basis.T

    def form_from(self, m) -> np.ndarray:
        """Inverse of :meth:`matrix_of`."""
        return self.basis.T @ np.asarray(m) @ self.basis

    def phi_components(self) -> np.ndarray:
        """phi evaluated on frame triples; equals the standard phi iff the frame is adapted."""
        b = self.basis
        return np.einsum("ai,bj,ck,ijk->abc", b, b, b, PHI)

    @property
    def orientation(self) -> float:
        return float(np.linalg.det(self.basis))


def complete_g2_frame(e1, e2, e4, tol: float = EPS_ORTH) -> Frame:
    """Complete (e1, e2, e4) to the adapted frame (e1, e2, e1xe2, e4, e1xe4, e2xe4, (e1xe2)xe4)."""
    e1, e2, e4 = (np.asarray(_vec(x), dtype=float) for x in (e1, e2, e4))
    gram = np.array([[a @ b for b in (e1, e2, e4)] for a in (e1, e2, e4)])
    if np.abs(gram - np.eye(3)).max() > tol:
        raise DegenerateInputError("e1, e2, e4 must be orthonormal")
    e3 = cross(e1, e2)
    if abs(e4 @ e3) > tol:
        raise DegenerateInputError("e4 must be orthogonal to the associative span of e1, e2")
    frame = Frame.from_vectors([e1, e2, e3, e4, cross(e1, e4), cross(e2, e4), cross(e3, e4)], tol=10 * tol)
    if not frame.g2_adapted:
        raise DegenerateInputError("completed frame failed the adaptation check")
    return frame


@dataclass(frozen=True)
class AssociativePlane:
    """Oriented orthonormal basis (u, v, w) with w = u x v."""

    u: np.ndarray
    v: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        for x in (self.u, self.v, self.w):
            _vec(x)
        b = self.basis
        if np.abs(b @ b.T - np.eye(3)).max() > 10 * EPS_ORTH:
            raise DegenerateInputError("plane basis is not orthonormal")
        if np.abs(cross(self.u, self.v) - self.w).max() > 10 * EPS_ORTH:
            raise DegenerateInputError("plane basis is not closed under the cross product")

    @classmethod
    def from_pair(cls, u, v) -> "AssociativePlane":
        u, v = orthonormalize([u, v])
        return cls(u, v, cross(u, v))

    @property
    def basis(self) -> np.ndarray:
        return np.array([self.u, self.v, self.w], dtype=float)

    def psi_residual(self) -> float:
        return float(np.linalg.norm(psi_vector(self.u, self.v, self.w)))

    def projector(self) -> np.ndarray:
        b = self.basis
        return b.T @ b

    def complement(self) -> np.ndarray:
        """Orthonormal basis of the coassociative complement, oriented so that
        basis(P) followed by these rows has determinant +1."""
        c = orthogonal_complement(self.basis)
        if np.linalg.det(np.vstack([self.basis, c])) < 0:
            c = c.copy()
            c[-1] = -c[-1]
        return c


@dataclass(frozen=True)
class AssociativityTest:
    associative: bool
    plane: AssociativePlane | None
    psi_residual: float
    closure_residual: float

    def __bool__(self):
        return self.associative


def is_associative(vectors, tol: float = EPS_ASSOC) -> AssociativityTest:
    """Decide whether the span of three vectors is associative.

    The span is orthonormalised to (u, v, w).  Two criteria are measured:
    |psi(u, v, w)| and the distance of u x v from the span.  The plane is
    associative only if both are within ``tol``; the certified basis is then
    (u, v, u x v).
    """
    vs = np.array(vectors, dtype=float)
    if vs.shape != (3, 7):
        raise ValueError("need three 7-vectors")
    u, v, w = orthonormalize(vs)
    psi_res = float(np.linalg.norm(psi_vector(u, v, w)))
    uv = cross(u, v)
    span = np.array([u, v, w])
    closure = float(np.linalg.norm(uv - span.T @ (span @ uv)))
    ok = psi_res <= tol and closure <= tol
    plane = AssociativePlane(u, v, uv) if ok else None
    return AssociativityTest(ok, plane, psi_res, closure)


def random_orthonormal_pair(rng) -> tuple[np.ndarray, np.ndarray]:
    rng = make_rng(rng)
    while True:
        try:
            u, v = orthonormalize(rng.standard_normal((2, 7)))
            return u, v
        except DegenerateInputError:  # pragma: no cover - probability zero
            continue


def random_associative_plane(seed=None) -> AssociativePlane:
    """Gaussian pair, orthonormalised, closed up with the cross product."""
    u, v = random_orthonormal_pair(make_rng(seed))
    return AssociativePlane(u, v, cross(u, v))


def random_g2_frame(seed=None) -> Frame:
    """Random adapted frame: random associative plane plus a random unit e4 in its complement."""
    rng = make_rng(seed)
    p = random_associative_plane(rng)
    c = p.complement()
    x = rng.standard_normal(4) @ c
    return complete_g2_frame(p.u, p.v, x / np.linalg.norm(x))
