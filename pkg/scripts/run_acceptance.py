"""Run the acceptance criteria in-process and print one line per criterion."""
from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass

from g2algebra.acceptance import run_all, run_criteria
from g2algebra.rng import DEFAULT_SEED


@dataclass(frozen=True)
class Config:
    seed: int = DEFAULT_SEED
    skip_determinism: bool = False


def parse(argv=None) -> Config:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--skip-determinism", action="store_true",
                    help="run C01-C11 only, without the rerun comparison")
    ns = ap.parse_args(argv)
    return Config(ns.seed, ns.skip_determinism)


def main(argv=None) -> int:
    cfg = parse(argv)
    start = time.perf_counter()
    results = run_criteria(cfg.seed) if cfg.skip_determinism else run_all(cfg.seed)
    for r in results:
        print(r.line())
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} passed in {time.perf_counter() - start:.1f}s",
          file=sys.stderr)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
