"""Command-line interface.

Exit codes: 0 pass, 1 verification failure, 2 precondition failure,
3 marginal or ambiguous numerics.
"""
from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import acceptance
from . import canonical as cf
from .cross import is_associative, random_associative_plane
from .io import DocumentError, MatrixDocument, read_documents, write_documents
from .rng import DEFAULT_SEED, U64_MAX, gaussian_skew, make_rng
from .splitting import NonSkewError, g2_residuals, project14, to_vec21, verify_psi_identities
from .subalgebras import (MarginalIntersectionError, principal_angles, subspace_intersection, theta_intersect,
                          theta_of_plane)
from .tensors import PHI_TERMS, Form, verify_contraction_identities

EXIT_OK, EXIT_FAIL, EXIT_PRECONDITION, EXIT_MARGINAL = 0, 1, 2, 3


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value <= U64_MAX:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _fmt_vec(v) -> str:
    return "[" + ", ".join(f"{x: .10f}" for x in v) + "]"


def _load(path, kind: str) -> list[MatrixDocument]:
    docs = read_documents(path)
    if not docs:
        raise DocumentError("no documents in input")
    wrong = [d.kind for d in docs if d.kind != kind]
    if wrong:
        raise DocumentError(f"expected {kind} documents, found {wrong[0]}")
    return docs


def cmd_identities(args) -> int:
    phi = None
    if args.corrupt_phi:
        terms = [(-c, idx) if idx == tuple(args.corrupt_phi) else (c, idx) for c, idx in PHI_TERMS]
        if terms == PHI_TERMS:
            terms = PHI_TERMS + [(1, tuple(sorted(args.corrupt_phi)))]
        phi = Form.from_terms(3, terms)
    exact = verify_contraction_identities(phi=phi)
    print(exact)
    ok = exact.passed
    if args.trials > 0:
        rand = verify_psi_identities(args.trials, args.seed, tol=args.tol)
        print(rand)
        ok &= rand.passed
    return EXIT_OK if ok else EXIT_FAIL


def cmd_canonical(args) -> int:
    doc = _load(args.input, "skew7")[0]
    x = np.array(doc.data)
    fail = False
    if args.mode == "so7":
        spectrum = cf.skew_canonical_form(x)
        rank, marginal = cf.numerical_rank(x)
        lam, nu, mu = spectrum.lambdas
        print(f"lambda = {lam:.12g}\nnu = {nu:.12g}\nmu = {mu:.12g}\nrank = {rank}")
        print(f"off-block residual = {spectrum.off_block:.3e}")
        frame, block = spectrum.frame, spectrum.block_matrix()
        nx = max(np.linalg.norm(x), 1e-300)
        fail = spectrum.off_block > 1e-9 * nx
    else:
        gres = max(g2_residuals(x))
        try:
            r = cf.g2_canonical_form(x, tol=args.tol * np.linalg.norm(x) if args.tol else None)
        except cf.NotInG2Error as exc:
            print(f"precondition failed: {exc}", file=sys.stderr)
            print(f"g2 membership residual = {gres:.3e}")
            return EXIT_PRECONDITION
        case = {0: "zero", 4: "rank 4, associative kernel", 6: "rank 6"}[r.rank_class]
        print(f"g2 membership residual = {r.membership_residual:.3e}")
        print(f"lambda = {r.lam:.12g}\nnu = {r.nu:.12g}\nmu = {r.mu:.12g}")
        print(f"type: {case}; rank class {r.rank_class}")
        print(f"lambda - nu - mu = {r.lam - r.nu - r.mu:.3e}")
        print(f"reconstruction residual = {r.reconstruction_error:.3e}")
        print("kernel (frame slots " + ", ".join(map(str, r.kernel_in_frame())) + "):")
        for v in r.kernel_basis:
            print("  " + _fmt_vec(v))
        frame, block, marginal = r.frame, r.block_matrix(), r.marginal
        fail = r.reconstruction_error > 1e-8
    print("frame (rows e1..e7):")
    for v in frame.basis:
        print("  " + _fmt_vec(v))
    if args.output:
        write_documents([MatrixDocument("frame7", frame.basis, label=f"{args.mode} frame"),
                         MatrixDocument("skew7", block, label=f"{args.mode} block matrix")],
                        args.output, args.format)
    if fail:
        return EXIT_FAIL
    return EXIT_MARGINAL if marginal else EXIT_OK


def cmd_random(args) -> int:
    if args.count < 1:
        print("count must be >= 1", file=sys.stderr)
        return EXIT_PRECONDITION
    rng = make_rng(args.seed)
    docs = []
    for i in range(args.count):
        label = f"{args.kind} #{i}"
        if args.kind == "g2":
            docs.append(MatrixDocument("skew7", project14(gaussian_skew(rng)), label, args.seed))
        elif args.kind == "skew":
            docs.append(MatrixDocument("skew7", gaussian_skew(rng), label, args.seed))
        else:
            docs.append(MatrixDocument("plane3", random_associative_plane(rng).basis, label, args.seed))
    write_documents(docs, args.output, args.format)
    return EXIT_OK


def cmd_classify(args) -> int:
    status = EXIT_OK
    for doc in _load(args.input, "skew7"):
        x = np.array(doc.data)
        if doc.label:
            print(f"# {doc.label}")
        try:
            c = cf.classify_rank(x)
        except cf.RankTwoError as exc:
            print(f"rank-2 g2 element: {exc}")
            status = max(status, EXIT_FAIL)
            continue
        kind = "g2 (14-part)" if c.in_g2 else "7-part" if c.in_lambda7 else "mixed type"
        if np.linalg.norm(x) == 0:
            kind = "zero"
        print(f"rank = {c.rank}{' (marginal)' if c.marginal else ''}")
        print(f"type = {kind}")
        print(f"g2 residual = {c.g2_residual:.3e}; 7-part residual (14-part norm) = {c.lambda7_residual:.3e}")
        print("singular values = " + _fmt_vec(c.singular_values))
        if c.block is not None:
            print(f"kernel contains associative plane = {c.kernel_associative}")
            print(f"a, b, c = {c.block.a:.12g}, {c.block.b:.12g}, {c.block.c:.12g}")
            print(f"det Y - (a^2+b^2+c^2)^2 relative = {c.block.det_residual:.3e}")
            if not c.kernel_associative:
                status = max(status, EXIT_FAIL)
        if c.marginal:
            print("marginal singular value in [1e-10, 1e-8] x sigma_max", file=sys.stderr)
            status = EXIT_MARGINAL
    return status


def cmd_theta(args) -> int:
    docs = []
    for path in args.planes:
        docs.extend(_load(path, "plane3"))
    if len(docs) not in (1, 2):
        print("theta needs one or two plane3 documents", file=sys.stderr)
        return EXIT_PRECONDITION
    planes = []
    for d in docs:
        test = is_associative(np.array(d.data))
        if not test:
            print(f"plane is not associative: psi residual {test.psi_residual:.3e}, "
                  f"closure residual {test.closure_residual:.3e}")
            return EXIT_PRECONDITION
        planes.append(test.plane)
    if len(planes) == 1:
        t = theta_of_plane(planes[0])
        print("Theta(P) basis in 21 orthonormal coordinates:")
        for name, b in zip(("v^w", "w^u", "u^v", "Psi_vw/2", "Psi_wu/2", "-Psi_uv/2"), t.theta.basis):
            print(f"  {name:>9}: " + _fmt_vec(to_vec21(b)))
        print("structure constants c_ijk (nonzero entries):")
        c = t.theta.structure_constants
        for i, j, k in zip(*np.nonzero(np.abs(c) > 1e-12)):
            print(f"  c[{i + 1},{j + 1},{k + 1}] = {c[i, j, k]: .12f}")
        print(f"closure residual = {t.theta.closure_residual:.3e}")
        print(f"[Lambda2(P), Psi(P)] max norm = {t.cross_bracket:.3e}")
        vecs = t.lambda7_vectors()
        ang = principal_angles(vecs, planes[0].basis)[0]
        print(f"dim Theta(P) cap 7-part = {len(vecs)}; max angle to P = {ang.max():.3e}")
        ok = t.theta.closure_residual < 1e-9 and t.cross_bracket < 1e-9 and len(vecs) == 3 and ang.max() < 1e-6
        return EXIT_OK if ok else EXIT_FAIL
    p, q = planes
    try:
        shared = subspace_intersection(p.basis, q.basis)
        r = theta_intersect(p, q)
    except MarginalIntersectionError as exc:
        print(f"ambiguous: {exc}", file=sys.stderr)
        return EXIT_MARGINAL
    print(f"dim P cap Q = {len(shared)}")
    print(f"dim Theta(P) cap Theta(Q) = {r.dim}")
    if r.dim == 1:
        print("shared direction v = " + _fmt_vec(r.plane_intersection[0]))
        print(f"angle between generator and v_|phi = {r.generator_angle:.3e}")
        print(f"14-part of generator (relative) = {r.pi14_residual:.3e}")
    expected = 6 if r.equal_planes else len(shared)
    ok = r.dim == expected and (r.dim != 1 or r.generator_angle < 1e-6)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify_all(args) -> int:
    t0 = time.perf_counter()
    results = acceptance.run_all(args.seed)
    text = "".join(r.line() + "\n" for r in results)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    print(f"elapsed {time.perf_counter() - t0:.2f} s", file=sys.stderr)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="g2algebra", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        if seed:
            p.add_argument("--seed", type=_u64, default=DEFAULT_SEED)
        p.add_argument("--output", default=None, help="write documents or report here")
        p.add_argument("--format", choices=("dec", "hex"), default="dec")
        return p

    p = common(sub.add_parser("identities", help="exact and randomised identity checks"))
    p.add_argument("--trials", type=_nonneg, default=1000)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--corrupt-phi", type=int, nargs=3, metavar=("I", "J", "K"),
                   help="debug: flip the sign of one phi coefficient before checking")
    p.set_defaults(func=cmd_identities)

    p = common(sub.add_parser("canonical", help="canonical form of a 2-form"), seed=False)
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--mode", choices=("so7", "g2"), default="g2")
    p.add_argument("--tol", type=float, default=None, help="relative g2 membership tolerance")
    p.set_defaults(func=cmd_canonical)

    p = common(sub.add_parser("random", help="seeded random samples"))
    p.add_argument("kind", choices=("g2", "skew", "assoc-plane"))
    p.add_argument("--count", type=int, default=1)
    p.set_defaults(func=cmd_random)

    p = common(sub.add_parser("classify", help="rank and type of 2-forms"), seed=False)
    p.add_argument("input", nargs="?", default="-")
    p.set_defaults(func=cmd_classify)

    p = common(sub.add_parser("theta", help="Theta(P) and intersections"), seed=False)
    p.add_argument("planes", nargs="*", default=["-"])
    p.set_defaults(func=cmd_theta)

    p = common(sub.add_parser("verify-all", help="run every acceptance criterion"))
    p.set_defaults(func=cmd_verify_all)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DocumentError, NonSkewError, ValueError) as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
