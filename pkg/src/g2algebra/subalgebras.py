"""The so(4) subalgebra Theta(P) attached to an associative 3-plane, and intersections.

Subspaces of 2-forms are handled in the 21 orthonormal coordinates of
:func:`g2algebra.splitting.to_vec21`, so principal angles between spans of
2-forms are the usual angles in R^21.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .cross import AssociativePlane, is_associative, orthonormalize, random_associative_plane
from .reports import Check, IdentityReport
from .rng import make_rng
from .splitting import (bracket, from_vec21, g2_residuals, lambda7_basis, lambda7_vector, norm,
                        phi_contract, project7, project14, psi_2form, to_vec21, wedge2)

SHARED_ANGLE = DEFAULT.shared_angle
MARGINAL_ANGLE = DEFAULT.marginal_angle
EQUAL_PLANE_ANGLE = DEFAULT.equal_plane_angle


class MarginalIntersectionError(RuntimeError):
    """A principal angle fell between the shared and the clearly-separated thresholds."""


class NotAssociativeError(ValueError):
    pass


def _orthonormal_rows(rows, rtol: float = 1e-10) -> np.ndarray:
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    if rows.size == 0:
        return rows.reshape(0, rows.shape[-1] if rows.ndim == 2 else 0)
    _, s, vt = np.linalg.svd(rows, full_matrices=False)
    return vt[s > rtol * max(s[0], 1e-300)]


def principal_angles(a, b) -> tuple[np.ndarray, np.ndarray]:
    """Principal angles between row spans of ``a`` and ``b`` plus the principal vectors in span(a).

    Angles are computed from sines (residuals of the principal vectors of
    ``a`` after projection onto span(b)), which keeps small angles accurate.
    """
    qa, qb = _orthonormal_rows(a), _orthonormal_rows(b)
    if len(qa) == 0 or len(qb) == 0:
        return np.zeros(0), np.zeros((0, qa.shape[1] if qa.ndim == 2 else 0))
    u, _, _ = np.linalg.svd(qa @ qb.T)
    k = min(len(qa), len(qb))
    vecs = (u.T @ qa)[:k]
    sines = np.linalg.norm(vecs - (vecs @ qb.T) @ qb, axis=1)
    cosines = np.abs(np.sum((vecs @ qb.T) ** 2, axis=1)) ** 0.5
    return np.arctan2(sines, cosines), vecs


def subspace_intersection(a, b, shared: float = SHARED_ANGLE, marginal: float = MARGINAL_ANGLE) -> np.ndarray:
    """Orthonormal rows spanning span(a) intersected with span(b)."""
    angles, vecs = principal_angles(a, b)
    bad = (angles >= shared) & (angles < marginal)
    if np.any(bad):
        raise MarginalIntersectionError(f"principal angle {angles[bad].min():.3e} rad is ambiguous")
    return vecs[angles < shared]


def _vec_rows(forms) -> np.ndarray:
    forms = list(forms)
    return np.array([to_vec21(f) for f in forms]) if forms else np.zeros((0, 21))


@dataclass(frozen=True)
class Subalgebra:
    """Basis of 2-forms with structure constants [B_i, B_j] = sum_k c_ijk B_k."""

    basis: np.ndarray
    structure_constants: np.ndarray
    closure_residual: float
    name: str = ""

    @classmethod
    def from_basis(cls, forms, name: str = "") -> "Subalgebra":
        forms = np.array(list(forms), dtype=float).reshape(-1, 7, 7)
        k = len(forms)
        coords = _vec_rows(forms).T  # 21 x k
        c = np.zeros((k, k, k))
        worst = 0.0
        for i in range(k):
            for j in range(k):
                br = to_vec21(bracket(forms[i], forms[j]))
                sol, *_ = np.linalg.lstsq(coords, br, rcond=None)
                c[i, j] = sol
                size = np.linalg.norm(br)
                err = np.linalg.norm(coords @ sol - br)
                worst = max(worst, err / size if size > 1e-12 else err)
        return cls(forms, c, float(worst), name)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self) -> np.ndarray:
        return _vec_rows(self.basis)

    def gram(self) -> np.ndarray:
        v = self.coordinates()
        return v @ v.T

    def so3_deviation(self) -> float:
        """Distance of the structure constants from the cyclic relations [X_i, X_j] = X_k."""
        eps = np.zeros((3, 3, 3))
        for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            eps[i, j, k], eps[j, i, k] = 1.0, -1.0
        return float(np.abs(self.structure_constants - eps).max())


def _plane(p, strict: bool) -> AssociativePlane | np.ndarray:
    if isinstance(p, AssociativePlane):
        return p
    rows = np.asarray(p, dtype=float)
    if rows.shape != (3, 7):
        raise ValueError("a plane is given by three 7-vectors")
    test = is_associative(rows)
    if test:
        return test.plane
    if strict:
        raise NotAssociativeError(f"plane is not associative (psi residual {test.psi_residual:.3e})")
    return orthonormalize(rows)


def _uvw(p) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if isinstance(p, AssociativePlane):
        return p.u, p.v, p.w
    return tuple(p)


def lambda2_of_plane(p) -> Subalgebra:
    """Basis (v^w, w^u, u^v) of the 2-forms on P."""
    u, v, w = _uvw(_plane(p, strict=False))
    return Subalgebra.from_basis([wedge2(v, w), wedge2(w, u), wedge2(u, v)], "Lambda2(P)")


def psi_of_plane(p, strict: bool = True) -> Subalgebra:
    """Basis (1/2 Psi_vw, 1/2 Psi_wu, -1/2 Psi_uv).

    With ``strict=False`` a non-associative orthonormal triple is accepted;
    this is how the failure of closure off associative planes is measured.
    """
    u, v, w = _uvw(_plane(p, strict))
    return Subalgebra.from_basis([0.5 * psi_2form(v, w), 0.5 * psi_2form(w, u), -0.5 * psi_2form(u, v)], "Psi(P)")


@dataclass(frozen=True)
class ThetaDecomposition:
    lambda2P: Subalgebra
    psiP: Subalgebra
    theta: Subalgebra
    cross_bracket: float
    cross_inner: float

    def lambda7_part(self) -> np.ndarray:
        """Orthonormal 2-form coordinates spanning Theta(P) intersected with Lambda^2_7."""
        return subspace_intersection(self.theta.coordinates(), lambda7_basis())

    def lambda7_vectors(self) -> np.ndarray:
        return np.array([lambda7_vector(from_vec21(r)) for r in self.lambda7_part()]).reshape(-1, 7)


def _cross_measures(a: Subalgebra, b: Subalgebra) -> tuple[float, float]:
    br = max((norm(bracket(x, y)) for x in a.basis for y in b.basis), default=0.0)
    ca = a.coordinates() / np.linalg.norm(a.coordinates(), axis=1)[:, None]
    cb = b.coordinates() / np.linalg.norm(b.coordinates(), axis=1)[:, None]
    ip = float(np.abs(ca @ cb.T).max())
    return float(br), ip


def theta_of_plane(p, tol: float = 1e-9, strict: bool = True) -> ThetaDecomposition:
    plane = _plane(p, strict)
    l2, ps = lambda2_of_plane(plane), psi_of_plane(plane, strict=strict)
    br, ip = _cross_measures(l2, ps)
    if strict and br > tol:
        raise RuntimeError(f"[Lambda2(P), Psi(P)] residual {br:.3e} exceeds {tol:.1e}")
    theta = Subalgebra.from_basis(np.concatenate([l2.basis, ps.basis]), "Theta(P)")
    return ThetaDecomposition(l2, ps, theta, br, ip)


def plane_basis(p) -> np.ndarray:
    return p.basis if isinstance(p, AssociativePlane) else orthonormalize(p)


@dataclass(frozen=True)
class ThetaIntersection:
    dim: int
    subalgebra: Subalgebra
    plane_intersection: np.ndarray
    generator_angle: float | None
    pi14_residual: float
    equal_planes: bool


def _angle(a, b) -> float:
    a, b = np.asarray(a, float), np.asarray(b, float)
    c = abs(a @ b) / (np.linalg.norm(a) * np.linalg.norm(b))
    s = np.linalg.norm(a / np.linalg.norm(a) - (a @ b) / (b @ b) * b / np.linalg.norm(a))
    return float(np.arctan2(s, c))


def theta_intersect(p, q) -> ThetaIntersection:
    """Theta(P) intersected with Theta(Q), checked against (P cap Q) _| phi."""
    bp, bq = plane_basis(p), plane_basis(q)
    angles, _ = principal_angles(bp, bq)
    tp = theta_of_plane(p)
    if np.all(angles < EQUAL_PLANE_ANGLE):
        return ThetaIntersection(6, tp.theta, bp, None, norm_pi14(tp.theta.basis), True)
    tq = theta_of_plane(q)
    rows = subspace_intersection(tp.theta.coordinates(), tq.theta.coordinates())
    shared = subspace_intersection(bp, bq)
    forms = [from_vec21(r) for r in rows]
    if len(forms) > 1:
        raise RuntimeError(f"intersection has dimension {len(forms)}; expected at most 1")
    angle = None
    if len(forms) == 1:
        if len(shared) != 1:
            raise RuntimeError("one-dimensional intersection but P and Q share no single direction")
        angle = _angle(to_vec21(forms[0]), to_vec21(phi_contract(shared[0])))
    sub = Subalgebra.from_basis(forms, "Theta(P) cap Theta(Q)")
    return ThetaIntersection(len(forms), sub, shared, angle, norm_pi14(forms), False)


def norm_pi14(forms) -> float:
    return max((norm(project14(f)) / norm(f) for f in forms), default=0.0)


def proper_subspace_check(vectors) -> IdentityReport:
    """dim of Lambda2(V) cap (V _| phi): zero for proper V, Lambda^2_7 for V = R^7."""
    vs = np.atleast_2d(np.asarray(vectors, dtype=float))
    q = orthonormalize(vs)  # raises on dependent input
    m = len(q)
    pairs = [wedge2(q[i], q[j]) for i in range(m) for j in range(i + 1, m)]
    contractions = [phi_contract(x) for x in q]
    inter = subspace_intersection(_vec_rows(pairs), _vec_rows(contractions))
    report = IdentityReport(f"Lambda2(V) cap V_|phi, dim V = {m}")
    if m < 7:
        report.add(Check("proper subspace", "proper V gives trivial intersection",
                         len(inter) == 0, float(len(inter)), 1, detail=f"dim {len(inter)}"))
    else:
        ang, _ = principal_angles(inter, lambda7_basis())
        dev = float(ang.max()) if len(ang) else np.inf
        report.add(Check("whole space", "V = R^7 gives Lambda^2_7",
                         len(inter) == 7 and dev < 1e-9, dev, 1, detail=f"dim {len(inter)}"))
    return report


def self_dual_forms(f, sign: float = 1.0) -> list[np.ndarray]:
    """(f12 + s f34, f13 + s f42, f14 + s f23) on an oriented orthonormal 4-frame."""
    w = lambda i, j: wedge2(f[i], f[j])
    return [w(0, 1) + sign * w(2, 3), w(0, 2) + sign * w(3, 1), w(0, 3) + sign * w(1, 2)]


def coassoc_selfdual_check(p, tol: float = 1e-9) -> IdentityReport:
    """Lambda^2_+ of the coassociative complement sits in g2; neither so(3) factor of Theta(P) does."""
    plane = _plane(p, strict=True)
    f = plane.complement()  # vol_P ^ vol_{P-perp} = vol
    plus = [max(g2_residuals(x)) / norm(x) for x in self_dual_forms(f, +1.0)]
    minus = [max(g2_residuals(x)) / norm(x) for x in self_dual_forms(f, -1.0)]
    report = IdentityReport("self-dual forms of the coassociative complement")
    note = "anti-self-dual forms also in g2" if max(minus) < tol else "anti-self-dual forms not in g2"
    if max(plus) >= tol and max(minus) < tol:
        note = "only the anti-self-dual forms lie in g2 for this orientation"
    report.add(Check("self-dual in g2", "Lambda2+(P-perp) subset g2", max(plus) < tol, max(plus), 3, detail=note))
    l2, ps = lambda2_of_plane(plane), psi_of_plane(plane)
    for sub in (l2, ps):
        pi7 = max(norm(project7(b)) / norm(b) for b in sub.basis)
        report.add(Check(f"{sub.name} not in g2", "so(3) factors of Theta(P) leave g2", pi7 > 1e-6, pi7, 3,
                         detail=f"largest 7-part {pi7:.3e}"))
    return report


def random_plane_pair_disjoint(rng, min_angle: float = 0.1) -> tuple[AssociativePlane, AssociativePlane]:
    """Two random associative planes whose principal angles all exceed ``min_angle``."""
    rng = make_rng(rng)
    while True:
        p, q = random_associative_plane(rng), random_associative_plane(rng)
        if principal_angles(p.basis, q.basis)[0].min() > min_angle:
            return p, q


def random_plane_pair_sharing(rng, min_angle: float = 0.1) -> tuple[AssociativePlane, AssociativePlane, np.ndarray]:
    """Two associative planes through a common random unit vector v, otherwise well separated."""
    rng = make_rng(rng)
    while True:
        v = rng.standard_normal(7)
        v /= np.linalg.norm(v)
        planes = []
        for _ in range(2):
            y = rng.standard_normal(7)
            y -= (y @ v) * v
            planes.append(AssociativePlane.from_pair(v, y))
        p, q = planes
        angles = principal_angles(p.basis, q.basis)[0]
        if np.sort(angles)[1] > min_angle:
            return p, q, v


def random_orthonormal_triple(rng) -> np.ndarray:
    """Orthonormal rows of a generic (hence non-associative) 3-plane."""
    return orthonormalize(make_rng(rng).standard_normal((3, 7)))
