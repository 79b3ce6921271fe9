"""Intersections of the so(4) subalgebras for random pairs of associative planes.

For each pair the script records the smallest principal angle between the
planes and the dimension of the intersection of their so(4) subalgebras.
Generic pairs are disjoint; pairs built to share a line give a
one-dimensional intersection spanned by that line contracted into phi.
"""
from __future__ import annotations

import argparse
from collections import Counter
from dataclasses import dataclass

import numpy as np

from g2algebra.cross import random_associative_plane
from g2algebra.rng import DEFAULT_SEED, make_rng
from g2algebra.subalgebras import plane_basis, principal_angles, random_plane_pair_sharing, theta_intersect


@dataclass(frozen=True)
class Config:
    pairs: int = 300
    seed: int = DEFAULT_SEED


def parse(argv=None) -> Config:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pairs", type=int, default=Config.pairs)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ns = ap.parse_args(argv)
    return Config(ns.pairs, ns.seed)


def main(argv=None) -> None:
    cfg = parse(argv)
    rng = make_rng(cfg.seed)
    dims, angles = Counter(), []
    for _ in range(cfg.pairs):
        p, q = random_associative_plane(rng), random_associative_plane(rng)
        a, _ = principal_angles(plane_basis(p), plane_basis(q))
        angles.append(a.min())
        dims[theta_intersect(p, q).dim] += 1
    shared_dims, gen_angles = Counter(), []
    for _ in range(cfg.pairs):
        p, q, _ = random_plane_pair_sharing(rng)
        res = theta_intersect(p, q)
        shared_dims[res.dim] += 1
        if res.generator_angle is not None:
            gen_angles.append(res.generator_angle)
    angles = np.array(angles)
    print(f"random pairs: {cfg.pairs}, seed: {cfg.seed}")
    print(f"  intersection dimensions: {dict(dims)}")
    print(f"  smallest principal angle: min {angles.min():.3e}, median {np.median(angles):.3e}")
    print(f"pairs sharing a line: intersection dimensions {dict(shared_dims)}")
    if gen_angles:
        print(f"  max angle between generator and line _| phi: {max(gen_angles):.3e}")


if __name__ == "__main__":
    main()
