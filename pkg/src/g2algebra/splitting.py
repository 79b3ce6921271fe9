"""2-forms on R^7 and the splitting into the 7- and 14-dimensional pieces.

Conventions used throughout the package:

* a 2-form is a skew 7x7 array ``X`` with ``X[i, j] = X(e_i, e_j)``, so
  ``X(a, b) = a @ X @ b`` and ``(u ^ v)[i, j] = u_i v_j - u_j v_i``;
* ``X`` acts on vectors as ``u -> X @ u`` and the Lie bracket is the matrix
  commutator ``X @ Y - Y @ X``.  With this pairing ``[X, u _| phi] =
  (X u) _| phi`` for X in g2 and ``[u _| phi, v _| phi] = -u^v - 2 Psi_uv``;
* the inner product of 2-forms is the full contraction ``sum_ij A_ij B_ij``
  (so ``|e1^e2|^2 = 2`` and ``|Psi_{e1 e2}|^2 = 4``).  :func:`wedge_inner`
  is the Gram-determinant pairing of decomposable forms.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cross import cross, orthonormalize, psi4, psi_vector, triple_phi
from .reports import Check, IdentityReport
from .rng import gaussian_skew, make_rng
from .tensors import PHI, PSI, Form, hodge_star, wedge

SQRT6 = np.sqrt(6.0)
_IU = np.triu_indices(7, 1)


class NonSkewError(ValueError):
    pass


class MembershipDisagreement(RuntimeError):
    """The two g2 membership criteria gave contradictory answers (a bug)."""


def as_skew(x, rtol: float = 1e-9) -> np.ndarray:
    x = np.asarray(x)
    if x.shape != (7, 7):
        raise NonSkewError(f"expected a 7x7 matrix, got {x.shape}")
    scale = np.abs(x).max(initial=0.0)
    if np.abs(x + x.T).max(initial=0.0) > rtol * scale:
        raise NonSkewError("matrix is not skew-symmetric")
    return x


def wedge2(u, v) -> np.ndarray:
    u, v = np.asarray(u), np.asarray(v)
    return np.outer(u, v) - np.outer(v, u)


def phi_contract(u) -> np.ndarray:
    """The 2-form u _| phi, components u_p phi_pij."""
    return np.einsum("p,pij->ij", np.asarray(u), PHI)


def lambda7_vector(x) -> np.ndarray:
    """The u with pi_7(X) = u _| phi, namely u_p = X_ij phi_ijp / 6."""
    return np.einsum("ij,ijp->p", np.asarray(x), PHI) / 6.0


def inner(a, b) -> float:
    return float(np.sum(np.asarray(a) * np.asarray(b)))


def norm(a) -> float:
    return float(np.linalg.norm(np.asarray(a)))


def wedge_inner(u, v, w, y) -> float:
    """<u^v, w^y> as the Gram determinant <u,w><v,y> - <u,y><v,w>."""
    return float(np.dot(u, w) * np.dot(v, y) - np.dot(u, y) * np.dot(v, w))


def evaluate(x, a, b) -> float:
    """X(a, b)."""
    return float(np.asarray(a) @ np.asarray(x) @ np.asarray(b))


def to_vec21(x) -> np.ndarray:
    """Coordinates in which the Frobenius inner product is the dot product."""
    return np.sqrt(2.0) * np.asarray(x)[_IU]


def from_vec21(c) -> np.ndarray:
    m = np.zeros((7, 7))
    m[_IU] = np.asarray(c) / np.sqrt(2.0)
    return m - m.T


def project7(x) -> np.ndarray:
    x = as_skew(x)
    return phi_contract(lambda7_vector(x))


def project14(x) -> np.ndarray:
    x = as_skew(x)
    return x - phi_contract(lambda7_vector(x))


@dataclass(frozen=True)
class SplitForm2:
    part7: np.ndarray
    part14: np.ndarray

    @property
    def vector7(self) -> np.ndarray:
        return lambda7_vector(self.part7)


def split(x) -> SplitForm2:
    x = as_skew(x)
    p7 = project7(x)
    return SplitForm2(p7, x - p7)


def psi_map(x) -> np.ndarray:
    """The linear map X -> *(X ^ phi), components psi_ijpq X_pq / 2."""
    return 0.5 * np.einsum("ijpq,pq->ij", PSI, as_skew(x))


def psi_2form(u, v) -> np.ndarray:
    """Psi_uv = v _| u _| psi, components u_p v_q psi_pqij."""
    return np.einsum("p,q,pqij->ij", np.asarray(u), np.asarray(v), PSI)


def psi_2form_hodge(u, v) -> np.ndarray:
    """Psi_uv computed as *(u ^ v ^ phi) through the exterior algebra."""
    from .tensors import standard_phi

    return hodge_star(wedge(wedge(Form(1, u), Form(1, v)), standard_phi())).tensor()


def bracket(x, y) -> np.ndarray:
    x, y = np.asarray(x), np.asarray(y)
    return x @ y - y @ x


def g2_residuals(x) -> tuple[float, float]:
    """Both g2 membership residuals, normalised so each equals |pi_7 X|.

    The contraction criterion is X_pq phi_pqk = 0, the derivation criterion
    X_ip phi_pjk + X_jp phi_ipk + X_kp phi_ijp = 0.  On the 7-part they have
    Frobenius norms sqrt(6)|X_7| and 6|X_7| respectively.
    """
    x = as_skew(x)
    contraction = np.einsum("pq,pqk->k", x, PHI)
    derivation = (np.einsum("ip,pjk->ijk", x, PHI) + np.einsum("jp,ipk->ijk", x, PHI)
                  + np.einsum("kp,ijp->ijk", x, PHI))
    return norm(contraction) / SQRT6, norm(derivation) / 6.0


def is_in_g2(x, tol: float | None = None) -> bool:
    """Membership in the 14-dimensional piece (g2), default tolerance 1e-9 |X|."""
    x = as_skew(x)
    if tol is None:
        tol = 1e-9 * norm(x)
    r_contract, r_deriv = g2_residuals(x)
    a, b = r_contract <= tol, r_deriv <= tol
    if a != b and max(r_contract, r_deriv) > 10 * tol + 1e-12 * norm(x):
        raise MembershipDisagreement(
            f"contraction residual {r_contract:.3e} vs derivation residual {r_deriv:.3e}")
    return a and b


def is_in_lambda7(x, tol: float | None = None) -> bool:
    x = as_skew(x)
    if tol is None:
        tol = 1e-9 * norm(x)
    return norm(project14(x)) <= tol


def random_g2(seed=None) -> np.ndarray:
    """A g2 element: the 14-part of a Gaussian skew matrix."""
    return project14(gaussian_skew(make_rng(seed)))


@lru_cache(maxsize=None)
def _bases():
    units = []
    for i, j in zip(*_IU):
        m = np.zeros((7, 7))
        m[i, j], m[j, i] = 1.0, -1.0
        units.append(m)
    p14 = np.array([to_vec21(project14(m)) for m in units])
    u, s, _ = np.linalg.svd(p14.T)
    g2 = u[:, :14].T
    lam7 = np.array([to_vec21(phi_contract(np.eye(7)[k])) for k in range(7)]) / SQRT6
    for b in (g2, lam7):
        b.setflags(write=False)
    return g2, lam7


def g2_basis() -> np.ndarray:
    """Orthonormal basis of g2 as rows in 21-coordinates (see :func:`to_vec21`)."""
    return _bases()[0]


def lambda7_basis() -> np.ndarray:
    """Orthonormal basis e_k _| phi / sqrt(6) of the 7-part, as 21-coordinate rows."""
    return _bases()[1]


# --- identity suite for the bracket structure and Psi -----------------------

def random_orthogonal_triple(rng) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Mutually orthogonal u, v, w with Gaussian-random lengths."""
    g = rng.standard_normal((3, 7))
    q = orthonormalize(g)
    lengths = np.linalg.norm(g, axis=1)
    return tuple(q[i] * lengths[i] for i in range(3))


PSI_IDENTITY_ANCHORS = {
    "g2 bracket with 7-part": "[X, u_|phi] = X(u)_|phi, X in g2",
    "77 bracket": "[u_|phi, v_|phi] = -u^v - 2 Psi_uv",
    "77 bracket pi7": "pi7[u_|phi, v_|phi] = u^v - Psi_uv",
    "77 bracket pi14": "pi14[u_|phi, v_|phi] = -2u^v - Psi_uv",
    "pi7 of 77 bracket": "pi7[u_|phi, v_|phi] = (u x v)_|phi",
    "Psi split": "Psi_uv = -2(u^v)_7 + (u^v)_14",
    "Psi hodge": "Psi_uv = *(u ^ v ^ phi)",
    "Psi identity": "u^v = (u x v)_|phi + Psi_uv",
    "Psi inner product": "<Psi_uv,Psi_wy> = 4<u^v,w^y> - 2psi(u,v,w,y)",
    "Psi inner product b": "<Psi_uv, w^y> = 2 psi(u,v,w,y)",
    "identity 1": "(uxw)x(vxw) = 2phi(u,v,w)w - |w|^2 uxv",
    "identity 2": "Psi_(uxw)(vxw) = psi(u,v,w)^w + |w|^2u^v - phi w_|phi",
    "identity 3": "(uxw)^(vxw) = phi w_|phi + psi(u,v,w)^w + |w|^2 Psi_uv",
    "main identity": "[Psi_uw,Psi_vw] = -|w|^2 Psi_uv - Psi_(uxw)(vxw)",
    "g2 evaluation identity": "X(uxy,vxy) = |y|^2X(u,v) + X(y,(uxv)xy)",
}


def _rel(a, b, scale: float) -> float:
    d = np.linalg.norm(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))
    return float(d / scale) if scale > 0 else float(d)


def psi_identity_deviations(u, v, w, a, b, c, d, x) -> dict[str, float]:
    """Relative deviations of every bracket/Psi identity for one sample.

    ``u, v, w`` must be orthogonal; ``a, b, c, d`` are arbitrary vectors and
    ``x`` is an element of g2.  Each deviation is divided by the natural
    scale of the identity (product of the input norms).
    """
    nu, nv, nw = (np.linalg.norm(t) for t in (u, v, w))
    na, nb, nc, nd = (np.linalg.norm(t) for t in (a, b, c, d))
    nx = norm(x)
    ww = w @ w
    uphi, vphi = phi_contract(a), phi_contract(b)
    br = bracket(uphi, vphi)
    ab = wedge2(a, b)
    psi_ab = psi_2form(a, b)
    uxw, vxw = cross(u, w), cross(v, w)
    f, p = triple_phi(u, v, w), psi_vector(u, v, w)
    s2 = na * nb
    s4 = nu * nv * ww
    return {
        "g2 bracket with 7-part": _rel(bracket(x, uphi), phi_contract(x @ a), nx * na),
        "77 bracket": _rel(br, -ab - 2 * psi_ab, s2),
        "77 bracket pi7": _rel(project7(br), ab - psi_ab, s2),
        "77 bracket pi14": _rel(project14(br), -2 * ab - psi_ab, s2),
        "pi7 of 77 bracket": _rel(project7(br), phi_contract(cross(a, b)), s2),
        "Psi split": _rel(psi_ab, -2 * project7(ab) + project14(ab), s2),
        "Psi hodge": _rel(psi_ab, psi_2form_hodge(a, b), s2),
        "Psi identity": _rel(ab, phi_contract(cross(a, b)) + psi_ab, s2),
        "Psi inner product": _rel(inner(psi_ab, psi_2form(c, d)),
                                  4 * wedge_inner(a, b, c, d) - 2 * psi4(a, b, c, d), s2 * nc * nd),
        "Psi inner product b": _rel(inner(psi_ab, wedge2(c, d)), 2 * psi4(a, b, c, d), s2 * nc * nd),
        "identity 1": _rel(cross(uxw, vxw), 2 * f * w - ww * cross(u, v), s4),
        "identity 2": _rel(psi_2form(uxw, vxw), wedge2(p, w) + ww * wedge2(u, v) - f * phi_contract(w), s4),
        "identity 3": _rel(wedge2(uxw, vxw), f * phi_contract(w) + wedge2(p, w) + ww * psi_2form(u, v), s4),
        "main identity": _rel(bracket(psi_2form(u, w), psi_2form(v, w)),
                              -ww * psi_2form(u, v) - psi_2form(uxw, vxw), s4),
        "g2 evaluation identity": _rel(evaluate(x, uxw, vxw),
                                       ww * evaluate(x, u, v) + evaluate(x, w, cross(cross(u, v), w)),
                                       nx * s4),
    }


def verify_psi_identities(trials: int = 1000, seed=None, tol: float = 1e-9) -> IdentityReport:
    """Run every bracket/Psi identity on ``trials`` random samples.

    Each trial draws orthogonal (unnormalised) u, v, w, four free Gaussian
    vectors and a random g2 element.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = make_rng(seed)
    worst = {k: 0.0 for k in PSI_IDENTITY_ANCHORS}
    where = {k: None for k in PSI_IDENTITY_ANCHORS}
    for t in range(trials):
        u, v, w = random_orthogonal_triple(rng)
        a, b, c, d = rng.standard_normal((4, 7))
        x = project14(gaussian_skew(rng))
        for name, dev in psi_identity_deviations(u, v, w, a, b, c, d, x).items():
            if dev > worst[name]:
                worst[name] = dev
                if dev > tol and where[name] is None:
                    where[name] = (t,)
    report = IdentityReport(f"Psi and bracket identities ({trials} trials)")
    for name, anchor in PSI_IDENTITY_ANCHORS.items():
        report.add(Check(name, anchor, worst[name] < tol, worst[name], trials, where[name]))
    return report
