"""Evaluate every corpus theorem on many random interpreted systems.

Prints one line per variant with the number of points checked and any
counterexamples found (there should be none).
"""

import argparse
import random
import time
from dataclasses import dataclass

from lpltl.corpus import theorem_corpus
from lpltl.generate import SystemShape, random_system
from lpltl.semantics import validate_system, write_system
from lpltl.syntax import Variant, print_formula


@dataclass(frozen=True)
class SweepConfig:
    systems: int = 200
    seed: int = 0
    max_states: int = 4
    max_runs: int = 3
    max_agents: int = 2


def sweep(cfg: SweepConfig) -> int:
    rng = random.Random(cfg.seed)
    shape = SystemShape(cfg.max_states, cfg.max_runs, cfg.max_agents)
    corpus = [(name, d.conclusion, v) for name, d, v in theorem_corpus() if v is not Variant.LPLTL_G]
    failures = 0
    for variant in (Variant.LPLTL, Variant.LPLTL_STAR):
        t0 = time.perf_counter()
        points = 0
        for _ in range(cfg.systems):
            sys_ = random_system(rng, shape, variant)
            assert validate_system(sys_).ok
            for name, f, v in corpus:
                if v is Variant.LPLTL_STAR and variant is Variant.LPLTL:
                    continue
                for k, r in enumerate(sys_.runs):
                    for n in r.positions():
                        points += 1
                        if not sys_.truth(k, n, f):
                            failures += 1
                            print(f"counterexample: {name} = {print_formula(f)} at run {k} position {n}")
                            print(write_system(sys_))
        print(f"{variant.value:<8} {cfg.systems} systems, {points} points, {time.perf_counter() - t0:.2f}s")
    return failures


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--systems", type=int, default=SweepConfig.systems)
    p.add_argument("--seed", type=int, default=SweepConfig.seed)
    p.add_argument("--max-states", type=int, default=SweepConfig.max_states)
    p.add_argument("--max-runs", type=int, default=SweepConfig.max_runs)
    p.add_argument("--max-agents", type=int, default=SweepConfig.max_agents)
    a = p.parse_args()
    failures = sweep(SweepConfig(a.systems, a.seed, a.max_states, a.max_runs, a.max_agents))
    print(f"counterexamples: {failures}")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
