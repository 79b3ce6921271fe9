"""Canonical forms of skew operators on R^7 and of elements of g2.

Spectra come from the symmetric positive semidefinite ``S = -X^2`` (real
arithmetic only).  Wherever an eigenspace has more than one admissible unit
vector, :func:`pick_unit` fixes the choice, so every frame returned here is
a deterministic function of the input matrix.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .cross import Frame, complete_g2_frame, cross, is_associative, orthogonal_complement
from .reports import Check, IdentityReport
from .rng import make_rng
from .splitting import (as_skew, bracket, g2_basis, g2_residuals, is_in_g2, is_in_lambda7,
                        norm, phi_contract, project7, project14, from_vec21)

RANK_RTOL = DEFAULT.rank
MARGINAL_RTOL = DEFAULT.marginal
CLUSTER_RTOL = DEFAULT.eigen_cluster
ROTATION_RTOL = DEFAULT.rotation
TIE_TOL = DEFAULT.tie


class NotInG2Error(ValueError):
    pass


class CanonicalFormError(RuntimeError):
    """An internal consistency check of the canonical-form construction failed."""


class RankTwoError(RuntimeError):
    """A g2 element measured at rank 2, which cannot happen in exact arithmetic."""


def _sign_fix(u: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(u) > 1e-12)
    if len(nz) and u[nz[0]] < 0:
        return -u
    return u


def pick_unit(space) -> np.ndarray:
    """Deterministic unit vector in the row span of ``space`` (orthonormal rows).

    Projects each standard basis vector onto the space, keeps the longest
    projection (lowest index on ties), normalises it and makes the first
    nonzero coordinate positive.
    """
    space = np.atleast_2d(space)
    lengths = np.linalg.norm(space, axis=0)  # |proj e_i| for each i
    best = lengths.max()
    i = int(np.flatnonzero(lengths >= best - TIE_TOL * max(best, 1.0))[0])
    u = space.T @ space[:, i]
    return _sign_fix(u / np.linalg.norm(u))


def _top_eigenspace(x: np.ndarray, rows: np.ndarray, scale: float) -> tuple[float, np.ndarray]:
    """Largest eigenvalue of -X^2 on span(rows) (X-invariant) and its eigenspace as rows.

    Clustering is done on singular values of the restriction rather than on
    their squares, so a block of size 1e-6 is not confused with the kernel.
    """
    r = rows @ x @ rows.T
    _, s, vt = np.linalg.svd(r)
    top = s[0]
    cluster = s >= top - CLUSTER_RTOL * scale
    return float(top * top), (rows.T @ vt[cluster].T).T


def _complement_in(space: np.ndarray, taken: np.ndarray) -> np.ndarray:
    """Orthonormal rows spanning the part of span(space) orthogonal to ``taken``."""
    p = space - (space @ taken.T) @ taken
    u, s, vt = np.linalg.svd(p, full_matrices=False)
    return vt[s > 1e-8]


@dataclass(frozen=True)
class SkewSpectrum:
    """Block invariants (lambda >= nu >= mu >= 0) with a frame realising them.

    Frame order: kernel vector, then the mu, nu and lambda planes, each as
    (x, X x / sigma).
    """

    lambdas: tuple[float, float, float]
    frame: Frame
    off_block: float

    @property
    def lam(self):
        return self.lambdas[0]

    @property
    def nu(self):
        return self.lambdas[1]

    @property
    def mu(self):
        return self.lambdas[2]

    def block_matrix(self) -> np.ndarray:
        return so7_block(*self.lambdas)


def so7_block(lam: float, nu: float, mu: float) -> np.ndarray:
    """The block-diagonal normal form with planes (mu, nu, lambda) after a zero slot."""
    m = np.zeros((7, 7))
    for k, s in zip((1, 3, 5), (mu, nu, lam)):
        m[k, k + 1], m[k + 1, k] = -s, s
    return m


def skew_canonical_form(x) -> SkewSpectrum:
    x = as_skew(x).astype(float)
    n = norm(x)
    if n == 0.0:
        return SkewSpectrum((0.0, 0.0, 0.0), Frame.standard(), 0.0)
    rows = np.eye(7)
    planes = []
    for _ in range(3):
        top, space = _top_eigenspace(x, rows, n)
        u = pick_unit(space)
        rest = _complement_in(rows, u[None, :])
        xu = rest.T @ (rest @ (x @ u))  # keep the partner inside the working subspace
        size = float(np.linalg.norm(xu))
        ut = xu / size if size > 1e-14 * n else pick_unit(rest)
        sigma = float(ut @ x @ u)
        if sigma < 0.0:  # only in the fallback branch, where sigma is at rounding level
            ut, sigma = -ut, -sigma
        planes.append((sigma, u, ut))
        rows = _complement_in(rows, np.array([u, ut]))
    planes.sort(key=lambda t: -t[0])
    (lam, ul, utl), (nu, un, utn), (mu, um, utm) = planes
    basis = [rows[0], um, utm, un, utn, ul, utl]
    frame = Frame.from_vectors(basis, tol=1e-9)
    off = float(np.abs(frame.matrix_of(x) - so7_block(lam, nu, mu)).max())
    return SkewSpectrum((lam, nu, mu), frame, off)


def lambda7_block(lam: float) -> np.ndarray:
    """Matrix of lam * (e1 _| phi) in an adapted frame: the third plane has the opposite orientation."""
    m = np.zeros((7, 7))
    for k, s in zip((1, 3, 5), (lam, lam, -lam)):
        m[k, k + 1], m[k + 1, k] = s, -s
    return m


def lambda7_canonical_form(u) -> tuple[float, Frame]:
    """For X = u _| phi: lambda = |u| and an adapted frame with e1 = u / lambda."""
    u = np.asarray(u, dtype=float)
    lam = float(np.linalg.norm(u))
    if lam == 0.0:
        return 0.0, Frame.standard()
    e1 = u / lam
    e2 = pick_unit(orthogonal_complement(e1[None, :]))
    e3 = cross(e1, e2)
    e4 = pick_unit(orthogonal_complement(np.array([e1, e2, e3])))
    frame = complete_g2_frame(e1, e2, e4)
    dev = np.abs(frame.matrix_of(phi_contract(u)) - lambda7_block(lam)).max()
    if dev > 1e-9 * lam:
        raise CanonicalFormError(f"7-part block pattern off by {dev:.2e}")
    return lam, frame


def g2_block(lam: float, mu: float) -> np.ndarray:
    """Normal form of a g2 element in an adapted frame (nu = lam - mu)."""
    nu = lam - mu
    m = np.zeros((7, 7))
    m[0, 1], m[1, 0] = -lam, lam
    m[3, 6], m[6, 3] = nu, -nu
    m[4, 5], m[5, 4] = -mu, mu
    return m


def torus_element(lam: float, mu: float) -> np.ndarray:
    """Element of the standard maximal torus: planes (mu, lam - mu, lam)."""
    return so7_block(lam, lam - mu, mu)


# relabelling e -> f taking g2_block to torus_element: f = sign * e[index]
TORUS_RELABEL = ((2, -1.0), (4, 1.0), (5, 1.0), (6, 1.0), (3, 1.0), (1, 1.0), (0, -1.0))


@dataclass(frozen=True)
class G2CanonicalForm:
    frame: Frame
    lam: float
    mu: float
    nu: float
    rank_class: int
    kernel_basis: np.ndarray
    membership_residual: float
    reconstruction_error: float
    constraint_residual: float
    marginal: bool = False
    rotated: bool = False

    def block_matrix(self) -> np.ndarray:
        return g2_block(self.lam, self.mu)

    def kernel_in_frame(self) -> tuple[int, ...]:
        """1-based frame slots spanning the kernel."""
        return {0: tuple(range(1, 8)), 4: (3, 5, 6), 6: (3,)}[self.rank_class]

    def torus_frame(self) -> Frame:
        """Adapted frame in which X takes the torus (so7-like) normal form."""
        b = self.frame.basis
        return Frame.from_vectors([s * b[i] for i, s in TORUS_RELABEL], tol=1e-9)


def _rank_class(lam: float, mu: float) -> tuple[int, bool]:
    if lam == 0.0:
        return 0, False
    ratio = mu / lam
    marginal = MARGINAL_RTOL <= ratio <= RANK_RTOL
    return (4 if ratio <= RANK_RTOL else 6), marginal


def g2_canonical_form(x, tol: float | None = None, check_membership: bool = True) -> G2CanonicalForm:
    """Adapted frame and invariants lambda = nu + mu of an element of g2.

    Follows the cross-product construction: e1 in the top eigenplane,
    e2 = X e1 / lambda, e3 = e1 x e2, e4 in the top eigenplane of X on the
    complement of span(e1, e2, e3), then e5, e6, e7 by cross products.  The
    entries X45, X46 vanish automatically; if either is numerically present
    the (e1, e2) plane is rotated to clear X45.
    """
    x = as_skew(x).astype(float)
    n = norm(x)
    res = max(g2_residuals(x))
    if tol is None:
        tol = 1e-9 * n
    if check_membership and not is_in_g2(x, tol):
        raise NotInG2Error(f"input is not in g2 (7-part norm {res:.3e}, tolerance {tol:.3e})")
    if n == 0.0:
        return G2CanonicalForm(Frame.standard(), 0.0, 0.0, 0.0, 0, np.eye(7), res, 0.0, 0.0)

    lam2, space = _top_eigenspace(x, np.eye(7), n)
    e1 = pick_unit(space)
    xe1 = x @ e1
    lam = float(np.linalg.norm(xe1))
    e2 = xe1 / lam
    e3 = cross(e1, e2)
    c = orthogonal_complement(np.array([e1, e2, e3]))
    _, space_c = _top_eigenspace(x, c, n)
    e4 = pick_unit(space_c)
    frame = complete_g2_frame(e1, e2, e4, tol=1e-9)
    m = frame.matrix_of(x)

    rotated = False
    if abs(m[3, 4]) > ROTATION_RTOL * n:
        alpha = np.arctan2(m[3, 4], m[3, 5])  # cot(alpha) = X46 / X45
        ca, sa = np.cos(alpha), np.sin(alpha)
        frame = complete_g2_frame(ca * e1 - sa * e2, sa * e1 + ca * e2, e4, tol=1e-9)
        m = frame.matrix_of(x)
        rotated = True

    nu = float(np.linalg.norm(x @ frame.basis[3]))
    mu = float(-m[4, 5])
    if abs(m[3, 6] - nu) > 1e-8 * n:
        raise CanonicalFormError(f"X47 = {m[3, 6]:.6g} differs from nu = {nu:.6g}")
    constraint = abs(lam - nu - mu)
    if constraint > 1e-8 * n:
        raise CanonicalFormError(f"lambda - nu - mu = {lam - nu - mu:.3e}")
    if mu <= 0.0 and -mu <= 1e-8 * n:
        mu = 0.0
    recon = float(np.linalg.norm(x - frame.form_from(g2_block(lam, mu))) / n)
    rank, marginal = _rank_class(lam, mu)
    kernel = frame.basis[[2, 4, 5]] if rank == 4 else frame.basis[[2]]
    return G2CanonicalForm(frame, lam, mu, nu, rank, kernel, res, recon, constraint, marginal, rotated)


def restriction_charpoly(x, result: G2CanonicalForm) -> np.ndarray:
    """Characteristic polynomial coefficients of X restricted to span(e4..e7)."""
    b = result.frame.basis[3:]
    return np.real(np.poly(b @ np.asarray(x) @ b.T))


@dataclass(frozen=True)
class Rank4Block:
    frame: Frame
    a: float
    b: float
    c: float
    det_residual: float
    reconstruction_error: float

    def y_matrix(self) -> np.ndarray:
        return kernel_block(self.a, self.b, self.c)


def kernel_block(a: float, b: float, c: float) -> np.ndarray:
    return np.array([[0, -a, -b, -c],
                     [a, 0, -c, b],
                     [b, c, 0, -a],
                     [c, -b, a, 0]], dtype=float)


def block_parameters(m) -> tuple[float, float, float]:
    """(a, b, c) read from the lower 4x4 block of a frame matrix, as in :func:`kernel_block`."""
    y = np.asarray(m)[3:, 3:]
    return float(y[1, 0]), float(y[2, 0]), float(y[3, 0])


def singular_values(x) -> np.ndarray:
    return np.linalg.svd(np.asarray(x, dtype=float), compute_uv=False)


def numerical_rank(x) -> tuple[int, bool]:
    """Rank with threshold 1e-8 sigma_max; also whether any value sits in the marginal band."""
    s = singular_values(x)
    if s[0] == 0.0:
        return 0, False
    rel = s / s[0]
    return int(np.sum(rel > RANK_RTOL)), bool(np.any((rel >= MARGINAL_RTOL) & (rel <= RANK_RTOL)))


def rank4_block_form(x) -> Rank4Block:
    """Adapted frame whose first three vectors span an associative plane in ker X."""
    x = as_skew(x).astype(float)
    n = norm(x)
    if not is_in_g2(x):
        raise NotInG2Error("rank4_block_form needs a g2 element")
    rank, _ = numerical_rank(x)
    if rank > 4:
        raise ValueError(f"rank {rank} > 4")
    if n == 0.0:
        return Rank4Block(Frame.standard(), 0.0, 0.0, 0.0, 0.0, 0.0)
    _, s, vt = np.linalg.svd(x)
    kernel = vt[rank:]
    e1 = pick_unit(kernel)
    e2 = pick_unit(_complement_in(kernel, e1[None, :]))
    e3 = cross(e1, e2)
    if np.linalg.norm(x @ e3) > 1e-8 * n:
        raise CanonicalFormError("e1 x e2 is not in the kernel")
    e4 = pick_unit(orthogonal_complement(np.array([e1, e2, e3])))
    frame = complete_g2_frame(e1, e2, e4, tol=1e-9)
    m = frame.matrix_of(x)
    y = m[3:, 3:]
    a, b, c = block_parameters(m)
    recon = float(np.linalg.norm(x - frame.form_from(np.block([[np.zeros((3, 3)), np.zeros((3, 4))],
                                                               [np.zeros((4, 3)), kernel_block(a, b, c)]]))) / n)
    q = (a * a + b * b + c * c) ** 2
    det_res = abs(np.linalg.det(y) - q) / q if q > 0 else abs(np.linalg.det(y))
    return Rank4Block(frame, a, b, c, float(det_res), recon)


@dataclass(frozen=True)
class RankClassification:
    rank: int
    marginal: bool
    singular_values: np.ndarray
    g2_residual: float
    lambda7_residual: float
    in_g2: bool
    in_lambda7: bool
    kernel_associative: bool | None = None
    block: Rank4Block | None = None

    @property
    def mixed(self) -> bool:
        return not (self.in_g2 or self.in_lambda7)


def classify_rank(x) -> RankClassification:
    x = as_skew(x).astype(float)
    n = norm(x)
    rank, marginal = numerical_rank(x)
    in_g2 = is_in_g2(x)
    in7 = is_in_lambda7(x)
    if in_g2 and rank == 2 and not marginal:
        raise RankTwoError("g2 element classified at rank 2")
    assoc = block = None
    if in_g2 and 0 < rank <= 4:
        block = rank4_block_form(x)
        _, _, vt = np.linalg.svd(x)
        assoc = bool(is_associative(vt[rank:rank + 3]))
    return RankClassification(rank, marginal, singular_values(x), max(g2_residuals(x)),
                              norm(project14(x)), in_g2, in7, assoc, block)


def maximal_torus_check(trials: int = 100, seed=None, tol: float = 1e-12) -> IdentityReport:
    """Check that the torus {planes (mu, lam - mu, lam)} is a maximal abelian subalgebra of g2."""
    rng = make_rng(seed)
    t1, t2 = torus_element(1.0, 0.0), torus_element(1.0, 1.0)
    report = IdentityReport("maximal torus")
    samples = [torus_element(2.0, 1.0), t1, t2] + [torus_element(*rng.standard_normal(2)) for _ in range(trials)]
    worst = max(max(g2_residuals(s)) / norm(s) for s in samples)
    report.add(Check("torus in g2", "t subset g2 (lam = nu + mu)", worst < 1e-9, worst, len(samples)))
    comm = max(norm(bracket(a, b)) for a in samples[:10] for b in samples[:10])
    report.add(Check("torus abelian", "t is abelian", comm < tol, comm, 100))

    basis = [from_vec21(r) for r in g2_basis()]
    op = np.array([np.concatenate([bracket(g, t1).ravel(), bracket(g, t2).ravel()]) for g in basis]).T
    _, s, vt = np.linalg.svd(op)
    null = vt[np.sum(s > 1e-10 * s[0]):]
    centraliser = [sum(cf * g for cf, g in zip(row, basis)) for row in null]
    span_t = np.array([t1.ravel(), t2.ravel()]).T
    qt, _ = np.linalg.qr(span_t)
    dev = 0.0
    for _ in range(trials):
        z = sum(rng.standard_normal() * g for g in centraliser)
        zv = z.ravel()
        dev = max(dev, float(np.linalg.norm(zv - qt @ (qt.T @ zv)) / np.linalg.norm(zv)))
    dev = max(dev, float(np.linalg.norm(t1.ravel() - qt @ (qt.T @ t1.ravel()))))
    report.add(Check("torus maximal", "centraliser of t in g2 is t",
                     len(null) == 2 and dev < 1e-9, dev, trials, detail=f"centraliser dim {len(null)}"))
    return report
