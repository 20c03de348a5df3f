"""Equilateral triangles of shrinking side: certified slices versus the two bounds.

For side s, eps and alpha fixed, the pair (0, 1) passes all three conditions
once eps > 2s, and the slice at alpha has diameter 1 + alpha for every s.  The
bound without the division by c goes to zero with s; the bound divided by c
does not.

    python scripts/bound_counterexample.py --eps 1/10 --alpha 1/20
"""

import argparse
from dataclasses import dataclass
from fractions import Fraction

from lipfree.certify import certify, derived_bound, valid_bound
from lipfree.corpus import equilateral


@dataclass
class Sweep:
    eps: Fraction = Fraction(1, 10)
    alpha: Fraction = Fraction(1, 20)
    sides: tuple = (Fraction(1), Fraction(1, 2), Fraction(1, 10), Fraction(1, 30), Fraction(1, 100), Fraction(1, 1000))


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--eps", type=Fraction, default=Sweep.eps)
    p.add_argument("--alpha", type=Fraction, default=Sweep.alpha)
    a = p.parse_args()
    cfg = Sweep(a.eps, a.alpha)
    print(f"eps={cfg.eps} alpha={cfg.alpha} pairs=((0,1),)")
    print(f"{'side':>8} {'certified':>9} {'diameter':>9} {'derived':>10} {'valid':>10}")
    for s in cfg.sides:
        M = equilateral(3, s)
        out = certify(M, [(0, 1)], cfg.alpha, cfg.eps)
        if not out.ok:
            print(f"{str(s):>8} {'no (' + out.condition + ')':>9}")
            continue
        print(f"{str(s):>8} {'yes':>9} {str(out.slice_diameter):>9} "
              f"{float(derived_bound(M, cfg.eps)):10.4g} {float(valid_bound(M, cfg.eps)):10.4g}")


if __name__ == "__main__":
    main()
