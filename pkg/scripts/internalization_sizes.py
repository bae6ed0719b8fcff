"""Report derivation and term sizes produced by internalization on the corpus."""

import argparse
from dataclasses import dataclass

from lpltl.corpus import theorem_corpus
from lpltl.internalize import eliminate_necessitation, internalize, internalize_g
from lpltl.syntax import Variant, print_term, subterms


@dataclass(frozen=True)
class SizeConfig:
    agent: int = 1
    show_terms: bool = False


def table(cfg: SizeConfig) -> float:
    worst = 0.0
    print(f"{'entry':<16} {'variant':<8} {'source':>6} {'no-nec':>6} {'output':>6} {'ratio':>6} {'term':>5}")
    for name, d, v in theorem_corpus():
        if v is Variant.LPLTL_G:
            src = d
            res = internalize_g(d, cfg.agent)
        else:
            src = eliminate_necessitation(d) if v is Variant.LPLTL else d
            res = internalize(src, cfg.agent)
        ratio = len(res.derivation) / len(src)
        worst = max(worst, ratio)
        size = len(list(subterms(res.term)))
        print(f"{name:<16} {v.value:<8} {len(d):>6} {len(src):>6} {len(res.derivation):>6} {ratio:>6.1f} {size:>5}")
        if cfg.show_terms:
            print(f"    {print_term(res.term)}")
    print(f"largest output/input line ratio: {worst:.1f}")
    return worst


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--agent", type=int, default=1)
    p.add_argument("--show-terms", action="store_true")
    a = p.parse_args()
    table(SizeConfig(a.agent, a.show_terms))


if __name__ == "__main__":
    main()
