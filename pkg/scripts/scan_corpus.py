"""Search certificates over the curated corpus and compare slice diameters with both bounds.

    python scripts/scan_corpus.py --eps 1/2 1/10 --n-max 3
"""

import argparse
import json
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from lipfree.certify import derived_bound, search_certificate, valid_bound
from lipfree.corpus import curated


@dataclass
class CorpusRun:
    eps: list = field(default_factory=lambda: ["1/2", "1/10"])
    n_max: int = 3
    n_max_large: int = 2  # for spaces with more than 6 points
    only: list = field(default_factory=list)


def run(cfg: CorpusRun) -> list:
    rows = []
    for name, M in curated().items():
        if cfg.only and name not in cfg.only:
            continue
        for e in cfg.eps:
            eps = Fraction(e)
            t0 = time.perf_counter()
            res = search_certificate(M, eps, cfg.n_max if M.n <= 6 else cfg.n_max_large)
            c = res.certificate
            rows.append({
                "space": name, "n_points": M.n, "c": str(M.c), "D": str(M.D), "eps": e,
                "found": res.found, "examined": res.examined,
                "pairs": [list(p) for p in c.pairs] if c else None,
                "alpha": str(c.alpha) if c else None,
                "slice_diameter": str(c.slice_diameter) if c else None,
                "derived_bound": float(derived_bound(M, eps)),
                "valid_bound": float(valid_bound(M, eps)),
                "within_derived": bool(c and c.slice_diameter <= derived_bound(M, eps)),
                "seconds": round(time.perf_counter() - t0, 2),
            })
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--eps", nargs="+", default=CorpusRun().eps)
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--only", nargs="*", default=[])
    p.add_argument("--json", action="store_true", help="print rows as JSON")
    a = p.parse_args()
    cfg = CorpusRun(eps=a.eps, n_max=a.n_max, only=a.only)
    rows = run(cfg)
    if a.json:
        print(json.dumps({"config": asdict(cfg), "rows": rows}, indent=2))
        return
    print(f"{'space':20} {'eps':>5} {'found':>5} {'diam':>10} {'derived':>10} {'valid':>10}  ok")
    for r in rows:
        d = float(Fraction(r["slice_diameter"])) if r["found"] else float("nan")
        flag = "yes" if r["within_derived"] else ("NO" if r["found"] else "-")
        print(f"{r['space']:20} {r['eps']:>5} {str(r['found']):>5} {d:10.4g} "
              f"{r['derived_bound']:10.4g} {r['valid_bound']:10.4g}  {flag}")


if __name__ == "__main__":
    main()
