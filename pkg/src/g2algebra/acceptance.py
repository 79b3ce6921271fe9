"""The acceptance criteria as callable checks.

Each criterion returns a :class:`CriterionResult` whose ``residual`` is the
worst normalised deviation seen (or a count of mismatches for exact
criteria).  All randomness is derived from one seed through independent
child streams, one per criterion, so criteria can be run in any order.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import canonical as cf
from .cross import cross, is_associative, psi_vector, random_associative_plane, random_g2_frame
from .rng import DEFAULT_SEED, gaussian_skew, spawn
from .splitting import (inner, norm, phi_contract, project7, project14, psi_map, random_g2,
                        verify_psi_identities, wedge2)
from .subalgebras import (coassoc_selfdual_check, principal_angles, psi_of_plane, random_orthonormal_triple,
                          random_plane_pair_disjoint, random_plane_pair_sharing, theta_intersect,
                          theta_of_plane)
from .tensors import PHI_TERMS, PSI_TERMS, hodge_star, standard_phi, standard_psi, verify_contraction_identities

N_CRITERIA = 12


@dataclass(frozen=True)
class CriterionResult:
    number: int
    anchor: str
    residual: float
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"C{self.number:02d} {status} residual={self.residual:.3e} | {self.anchor}"
        return text + (f" | {self.detail}" if self.detail else "")


def _rel(a, b, scale) -> float:
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)) / scale)


def c01_exact_identities(rng=None) -> CriterionResult:
    t0 = time.perf_counter()
    rep = verify_contraction_identities()
    elapsed = time.perf_counter() - t0
    dev = max(c.deviation for c in rep.checks)
    counts = ",".join(str(c.count) for c in rep.checks)
    return CriterionResult(1, "exact phi/psi contraction identities, all index tuples",
                           dev, rep.passed and dev == 0 and elapsed < 1.0, f"tuples {counts}")


def c02_hodge_and_coefficients(rng=None) -> CriterionResult:
    phi, psi = standard_phi(), standard_psi()
    mismatches = int(hodge_star(phi) != psi)
    mismatches += sum(phi[idx] != c for c, idx in PHI_TERMS) + sum(psi[idx] != c for c, idx in PSI_TERMS)
    nonzero = int(np.count_nonzero(phi.coeffs)) + int(np.count_nonzero(psi.coeffs))
    mismatches += int(nonzero != 14)
    return CriterionResult(2, "*phi = psi and the fourteen coordinate coefficients",
                           float(mismatches), mismatches == 0, f"{len(PHI_TERMS) + len(PSI_TERMS)} terms")


def c03_cross_identities(rng, trials: int = 1000) -> CriterionResult:
    worst = 0.0
    for _ in range(trials):
        u, v, w = rng.standard_normal((3, 7))
        s = np.linalg.norm(u) * np.linalg.norm(v) * np.linalg.norm(w)
        worst = max(worst, _rel(cross(u, cross(v, w)), -(u @ v) * w + (u @ w) * v + psi_vector(u, v, w), s))
        su = (u @ u) * np.linalg.norm(w)
        worst = max(worst, _rel(cross(u, cross(u, w)), -(u @ u) * w + (u @ w) * u, su))
        a, b, c = (x * np.linalg.norm(y) for x, y in zip(np.linalg.qr(np.array([u, v, w]).T)[0].T, (u, v, w)))
        t = cross(a, cross(b, c))
        s3 = np.linalg.norm(a) * np.linalg.norm(b) * np.linalg.norm(c)
        for other in (-cross(b, cross(a, c)), -cross(c, cross(b, a)), -cross(a, cross(c, b)),
                      cross(b, cross(c, a)), cross(c, cross(a, b))):
            worst = max(worst, _rel(t, other, s3))
    return CriterionResult(3, "iterated cross product identities", worst, worst < 1e-10, f"{trials} trials")


def c04_projections(rng, trials: int = 1000) -> CriterionResult:
    worst = 0.0
    for _ in range(trials):
        x = gaussian_skew(rng)
        n = norm(x)
        x7, x14 = project7(x), project14(x)
        psi_x = 2 * psi_map(x)  # psi_ijpq X_pq
        v, w = rng.standard_normal((2, 7))
        devs = (
            _rel(project7(x7), x7, n), _rel(project14(x14), x14, n),
            norm(project7(x14)) / n, norm(project14(x7)) / n,
            abs(inner(x7, x14)) / n**2, _rel(x7 + x14, x, n),
            _rel(2 * psi_map(x7), -4 * x7, n), _rel(2 * psi_map(x14), 2 * x14, n),
            _rel(psi_x, -4 * x7 + 2 * x14, n),
            _rel(project7(wedge2(v, w)), phi_contract(cross(v, w)) / 3, np.linalg.norm(v) * np.linalg.norm(w)),
        )
        worst = max(worst, *devs)
    return CriterionResult(4, "projections onto the 7- and 14-parts and their eigen-identities",
                           worst, worst < 1e-10, f"{trials} skew matrices")


def rank4_g2_element(rng) -> np.ndarray:
    """g2 element of rank 4: the canonical matrix with mu = 0 in a random adapted frame."""
    frame = random_g2_frame(rng)
    return frame.form_from(cf.g2_block(float(np.exp(rng.standard_normal())), 0.0))


def c05_g2_canonical(rng, trials: int = 1000, rank4: int = 100) -> CriterionResult:
    t0 = time.perf_counter()
    worst = 0.0
    ranks = {0: 0, 4: 0, 6: 0}
    bad_rank = 0
    for _ in range(trials):
        x = random_g2(rng)
        n = norm(x)
        r = cf.g2_canonical_form(x)
        worst = max(worst, np.abs(r.frame.matrix_of(x) - r.block_matrix()).max() / n, r.constraint_residual / n)
        adapted_ok = r.frame.g2_adapted and r.frame.adapted_error < 1e-9
        matrix_ok = np.abs(r.frame.matrix_of(x) - r.block_matrix()).max() < 1e-8 * n
        constraint_ok = r.constraint_residual < 1e-9 * n
        rank, marginal = cf.numerical_rank(x)
        bad_rank += int(not (adapted_ok and matrix_ok and constraint_ok) or rank not in (0, 4, 6)
                        or rank != r.rank_class or marginal)
        ranks[r.rank_class] += 1
    kernels_ok = 0
    for _ in range(rank4):
        x = rank4_g2_element(rng)
        r = cf.g2_canonical_form(x)
        kernels_ok += int(r.rank_class == 4 and bool(is_associative(r.kernel_basis)))
        worst = max(worst, np.abs(r.frame.matrix_of(x) - r.block_matrix()).max() / norm(x))
    elapsed = time.perf_counter() - t0
    ok = bad_rank == 0 and kernels_ok == rank4 and elapsed < 10.0
    return CriterionResult(5, "g2 canonical form: adapted frame, block matrix, lambda = nu + mu, rank classes",
                           worst, ok, f"ranks 6:{ranks[6]} 4:{ranks[4]} 0:{ranks[0]}; "
                                       f"associative rank-4 kernels {kernels_ok}/{rank4}")


def c06_rank4_block(rng, trials: int = 200) -> CriterionResult:
    worst_det = worst_block = 0.0
    for k in range(trials):
        x = np.zeros((7, 7)) if k == 0 else rank4_g2_element(rng)
        b = cf.rank4_block_form(x)
        n = max(norm(x), 1e-300)
        y = b.frame.matrix_of(x)
        pattern = np.zeros((7, 7))
        pattern[3:, 3:] = b.y_matrix()
        worst_block = max(worst_block, np.abs(y - pattern).max() / n, b.reconstruction_error)
        worst_det = max(worst_det, b.det_residual)
    ok = worst_det < 1e-9 and worst_block < 1e-8
    return CriterionResult(6, "rank <= 4 kernel block form and det Y = (a^2+b^2+c^2)^2",
                           max(worst_det, worst_block), ok, f"{trials} elements")


def c07_bracket_psi(rng, trials: int = 1000) -> CriterionResult:
    rep = verify_psi_identities(trials, rng, tol=1e-9)
    worst = max(c.deviation for c in rep.checks)
    failing = [c.name for c in rep.checks if not c.passed]
    return CriterionResult(7, "bracket and Psi identities", worst, rep.passed,
                           f"{len(rep.checks)} identities" + (f"; failing {failing}" if failing else ""))


def c08_theta(rng, planes: int = 200, controls: int = 100) -> CriterionResult:
    worst = angle = 0.0
    dims_ok = True
    for _ in range(planes):
        p = random_associative_plane(rng)
        d = theta_of_plane(p)
        vecs = d.lambda7_vectors()
        dims_ok &= len(vecs) == 3
        angle = max(angle, float(principal_angles(vecs, p.basis)[0].max()))
        worst = max(worst, d.psiP.closure_residual, d.psiP.so3_deviation(), d.cross_bracket)
    smallest = min(psi_of_plane(random_orthonormal_triple(rng), strict=False).closure_residual
                   for _ in range(controls))
    ok = worst < 1e-9 and angle < 1e-6 and dims_ok and smallest > 0.01
    return CriterionResult(8, "Psi(P) is so(3), commutes with Lambda2(P), Theta(P) cap 7-part = P_|phi",
                           worst, ok, f"max angle to P {angle:.3e}; non-associative closure minimum {smallest:.3e}")


def c09_intersections(rng, pairs: int = 100) -> CriterionResult:
    worst = 0.0
    dims_disjoint = set()
    dims_shared = set()
    for _ in range(pairs):
        p, q = random_plane_pair_disjoint(rng)
        dims_disjoint.add(theta_intersect(p, q).dim)
        p, q, v = random_plane_pair_sharing(rng)
        r = theta_intersect(p, q)
        dims_shared.add(r.dim)
        if r.dim == 1:
            worst = max(worst, r.generator_angle, abs(abs(r.plane_intersection[0] @ v) - 1.0), r.pi14_residual)
    e = np.eye(7)
    fixed = theta_intersect(np.array([e[0], e[1], e[2]]), np.array([-e[2], e[4], e[5]]))
    fixed_ok = fixed.dim == 1 and fixed.generator_angle < 1e-6 and abs(abs(fixed.plane_intersection[0][2]) - 1) < 1e-12
    worst = max(worst, fixed.generator_angle or 0.0)
    ok = dims_disjoint == {0} and dims_shared == {1} and worst < 1e-6 and fixed_ok
    return CriterionResult(9, "Theta(P) cap Theta(Q) = (P cap Q)_|phi", worst, ok,
                           f"dims disjoint {sorted(dims_disjoint)} shared {sorted(dims_shared)}")


def c10_torus(rng) -> CriterionResult:
    rep = cf.maximal_torus_check(100, rng)
    worst = max(c.deviation for c in rep.checks)
    return CriterionResult(10, "maximal torus: abelian, inside g2, maximal", worst, rep.passed,
                           rep["torus maximal"].detail)


def c11_selfdual(rng, planes: int = 100) -> CriterionResult:
    worst = 0.0
    smallest_pi7 = np.inf
    ok = True
    for _ in range(planes):
        rep = coassoc_selfdual_check(random_associative_plane(rng))
        ok &= rep.passed
        worst = max(worst, rep["self-dual in g2"].deviation)
        smallest_pi7 = min(smallest_pi7, rep["Lambda2(P) not in g2"].deviation, rep["Psi(P) not in g2"].deviation)
    return CriterionResult(11, "self-dual forms on the coassociative complement lie in g2",
                           worst, bool(ok) and worst < 1e-9, f"smallest 7-part of a factor {smallest_pi7:.3e}")


CRITERIA = (c01_exact_identities, c02_hodge_and_coefficients, c03_cross_identities, c04_projections,
            c05_g2_canonical, c06_rank4_block, c07_bracket_psi, c08_theta, c09_intersections, c10_torus,
            c11_selfdual)


def run_criteria(seed: int = DEFAULT_SEED) -> list[CriterionResult]:
    """Criteria 1 to 11 with per-criterion child streams of ``seed``."""
    streams = spawn(seed, len(CRITERIA))
    return [f(rng) for f, rng in zip(CRITERIA, streams)]


def run_all(seed: int = DEFAULT_SEED) -> list[CriterionResult]:
    """All twelve criteria; the last reruns 1 to 11 and compares the report text byte for byte."""
    first = run_criteria(seed)
    second = run_criteria(seed)
    a = "\n".join(r.line() for r in first).encode()
    b = "\n".join(r.line() for r in second).encode()
    same = a == b
    return first + [CriterionResult(12, "determinism: identical report on rerun with the same seed",
                                    0.0 if same else 1.0, same, f"{len(a)} bytes compared")]
