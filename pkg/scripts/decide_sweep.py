"""Run the satisfiability procedure on random formulas and tabulate its cost.

Every SAT answer is re-checked by evaluating the formula on the extracted
system; any disagreement is reported.
"""

import argparse
import random
import time
from collections import defaultdict
from dataclasses import dataclass

from lpltl.canon import ClosureTooLarge, decide
from lpltl.generate import FormulaShape, random_formula
from lpltl.semantics import validate_system
from lpltl.syntax import print_formula, subformulas


@dataclass(frozen=True)
class DecideConfig:
    formulas: int = 300
    depth: int = 4
    agents: int = 2
    seed: int = 0
    cap: int = 16


def run(cfg: DecideConfig) -> int:
    rng = random.Random(cfg.seed)
    shape = FormulaShape(depth=cfg.depth, agents=cfg.agents)
    by_size = defaultdict(lambda: {"sat": 0, "nomodel": 0, "atoms": 0, "states": 0, "secs": 0.0})
    skipped = bad = 0
    for _ in range(cfg.formulas):
        f = random_formula(rng, shape)
        try:
            t0 = time.perf_counter()
            cert = decide(f, cap=cfg.cap)
            secs = time.perf_counter() - t0
        except ClosureTooLarge:
            skipped += 1
            continue
        row = by_size[len(subformulas(f))]
        row["secs"] += secs
        row["atoms"] += cert.stats["atoms"]
        if cert.sat:
            row["sat"] += 1
            row["states"] += len(cert.system.states)
            if not (validate_system(cert.system).ok and cert.system.truth(cert.run, cert.position, f)):
                bad += 1
                print(f"unverified witness for {print_formula(f)}")
        else:
            row["nomodel"] += 1
    print(f"{'|Sub|':>5} {'SAT':>5} {'NOMODEL':>8} {'atoms/f':>9} {'states/SAT':>11} {'ms/f':>8}")
    for size in sorted(by_size):
        r = by_size[size]
        n = r["sat"] + r["nomodel"]
        states = r["states"] / r["sat"] if r["sat"] else 0.0
        print(f"{size:>5} {r['sat']:>5} {r['nomodel']:>8} {r['atoms'] / n:>9.1f} {states:>11.1f} {1000 * r['secs'] / n:>8.2f}")
    print(f"skipped (closure above cap): {skipped}; unverified witnesses: {bad}")
    return bad


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(DecideConfig()).items():
        p.add_argument(f"--{name}", type=int, default=default)
    cfg = DecideConfig(**vars(p.parse_args()))
    raise SystemExit(1 if run(cfg) else 0)


if __name__ == "__main__":
    main()
