"""Command-line front end.  Every command prints one JSON report.

Exit status: 0 on success, 1 on a mathematical negative (no certificate, a
failed criterion), 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import arith
from .certify import certify, search_certificate
from .extension import inf_extension, lower_values, sup_extension, upper_values
from .freenorm import (
    NotNormOne,
    combination_norm,
    free_element_as_combination,
    free_norm,
    norm_one_cyclic_check,
    norm_one_weights,
)
from .metric import (
    FiniteMetricSpace,
    FreeElement,
    InvalidPair,
    MetricError,
    MoleculeCombination,
    ParseError,
    SchemaError,
    ZeroElement,
    load_csv,
    load_json,
)
from .potentials import SizeLimitExceeded, beta_from_pairs, compute_B, distinct_cycle_table, potentials_exist
from .slices import DEFAULT_ALPHA_GRID, EmptySlice, NotNormalized, SliceSpec, measure_slice, wstar_bdp_scan

SCHEMA_VERSION = "1"
COMMANDS = ("validate", "norm", "combo-check", "potentials", "extend", "slice-diam", "scan", "certify", "search")


@dataclass
class RunConfig:
    command: str
    input_path: str
    arithmetic: str = "rational"
    tolerance: float = 1e-9
    n_exact: int = 14
    n_pairs_max: int = 3
    alpha_grid: tuple = DEFAULT_ALPHA_GRID
    output_path: str | None = None
    base: int | None = None
    mu_path: str | None = None
    pairs_path: str | None = None
    weights: tuple | None = None
    values_path: str | None = None
    alpha: str | None = None
    eps: str | None = None
    n_max: int | None = None
    timings: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.n_exact < 1 or self.n_pairs_max < 1 or (self.n_max is not None and self.n_max < 1):
            raise ValueError("limits must be positive")


def num(x):
    """JSON form of a number: fixed-precision decimal, plus the exact fraction in rational mode."""
    out = {"decimal": arith.fmt(x)}
    if isinstance(x, Fraction):
        out["exact"] = str(x)
    return out


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def _load_space(cfg: RunConfig) -> FiniteMetricSpace:
    text = _read(cfg.input_path)
    if cfg.input_path.endswith(".csv"):
        return load_csv(text, base=cfg.base or 0)
    M = load_json(text)
    if cfg.base is not None:
        M = FiniteMetricSpace(M.labels, M.dist, cfg.base)
        if not 0 <= cfg.base < M.n:
            raise SchemaError("--base out of range")
    return M


def _load_json_arg(path: str | None, what: str):
    if path is None:
        raise SchemaError(f"--{what} is required for this command")
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}: {exc.msg}") from exc


def _load_mu(cfg, M) -> FreeElement:
    data = _load_json_arg(cfg.mu_path, "mu")
    if not isinstance(data, dict):
        raise SchemaError("mu must be an object mapping labels to coefficients")
    return FreeElement.from_mapping({M.index(k): v for k, v in data.items()}, M)


def _load_pairs(cfg, M) -> list:
    data = _load_json_arg(cfg.pairs_path, "pairs")
    if not isinstance(data, list) or not all(isinstance(p, list) and len(p) == 2 for p in data):
        raise SchemaError("pairs must be a list of [x, y] label pairs")
    return [(M.index(x), M.index(y)) for x, y in data]


def _need(value, flag):
    if value is None:
        raise SchemaError(f"--{flag} is required for this command")
    return arith.current().num(value)


def _lab(M, i):
    return M.labels[i]


def _fn(M, values):
    return {M.labels[i]: num(v) for i, v in enumerate(values)}


def _pairs_json(M, pairs):
    return [[_lab(M, x), _lab(M, y)] for x, y in pairs]


def _cmd_validate(cfg, M):
    return 0, {"n": M.n, "c": num(M.c), "D": num(M.D)}


def _cmd_norm(cfg, M):
    mu = _load_mu(cfg, M)
    res = free_norm(mu, M)
    out = {
        "value": num(res.value),
        "norming_function": _fn(M, res.dual_witness.values),
        "transport_plan": [
            {"from": _lab(M, u), "to": _lab(M, v), "mass": num(m)}
            for (u, v), m in sorted(res.primal_witness.items())
        ],
        "transport_cost": num(res.transport_cost(M)),
    }
    try:
        comb = free_element_as_combination(mu, M)
        out["molecule_decomposition"] = {"pairs": _pairs_json(M, comb.pairs),
                                         "weights": [num(w) for w in comb.weights]}
    except NotNormOne:
        out["molecule_decomposition"] = None
    return 0, out


def _cmd_combo(cfg, M):
    pairs = _load_pairs(cfg, M)
    ok = norm_one_cyclic_check(pairs, M)
    out = {"norm_one_possible": ok}
    if cfg.weights:
        comb = MoleculeCombination(tuple(pairs), tuple(cfg.weights))
        out["weights"] = [num(w) for w in comb.weights]
        out["combination_norm"] = num(combination_norm(comb, M))
    elif ok:
        w = norm_one_weights(pairs, M)
        out["weights"] = [num(x) for x in w]
        out["combination_norm"] = num(combination_norm(MoleculeCombination(tuple(pairs), w), M))
    return (0 if ok else 1), out


def _cmd_potentials(cfg, M):
    pairs = _load_pairs(cfg, M)
    bs = beta_from_pairs(M, pairs)
    bm = compute_B(bs)
    ok, pv = potentials_exist(bs)
    out = {
        "beta": [[num(x) for x in row] for row in bs.beta],
        "feasible": bm.feasible,
        "B": [[num(x) for x in row] for row in bm.B],
    }
    if ok:
        out["potential"] = [num(x) for x in pv.alpha]
        gaps = []
        table = distinct_cycle_table(bs, cfg.n_exact) if bs.n >= 2 else None
        for j in range(bs.n):
            for k in range(j + 1, bs.n):
                val, cyc = table.through(j, k)
                gaps.append({"j": j, "k": k, "gap": num(bm.B[j][k] + bm.B[k][j]),
                             "distinct_cycle": list(cyc), "distinct_sum": num(val)})
        out["pair_gaps"] = gaps
    else:
        out["negative_cycle"] = list(bm.negative_cycle)
        out["negative_cycle_sum"] = num(bs.cycle_sum(bm.negative_cycle))
    return (0 if ok else 1), out


def _cmd_extend(cfg, M):
    data = _load_json_arg(cfg.values_path, "values")
    if not isinstance(data, dict):
        raise SchemaError("values must be an object mapping labels to reals")
    f = {M.index(k): v for k, v in data.items()}
    return 0, {
        "upper": _fn(M, upper_values(f, M)),
        "lower": _fn(M, lower_values(f, M)),
        "upper_translated": _fn(M, inf_extension(f, M).values),
        "lower_translated": _fn(M, sup_extension(f, M).values),
    }


def _cmd_slice(cfg, M):
    mu = _load_mu(cfg, M)
    alpha = _need(cfg.alpha, "alpha")
    m = measure_slice(M, SliceSpec(mu, alpha))
    return 0, {
        "alpha": num(alpha),
        "diameter": num(m.diameter),
        "pair": [_lab(M, m.pair[0]), _lab(M, m.pair[1])],
        "f": _fn(M, m.f),
        "g": _fn(M, m.g),
        "boundary_only": m.boundary_only,
    }


def _cmd_scan(cfg, M):
    rep = wstar_bdp_scan(M, cfg.n_pairs_max, cfg.alpha_grid)

    def cand(e):
        return {"pairs": _pairs_json(M, e["pairs"]), "weights": [num(w) for w in e["weights"]],
                "alpha": num(e["alpha"]), "diameter": num(e["diameter"])}

    return 0, {
        "n_pairs_max": rep.n_pairs_max,
        "alpha_grid": [num(x) for x in rep.alpha_grid],
        "scanned": rep.scanned,
        "rejected_not_norm_one": rep.rejected,
        "candidates": [cand(e) for e in rep.candidates],
        "min_diameter": num(rep.min_diameter) if rep.min_diameter is not None else None,
        "argmin": cand(rep.argmin) if rep.argmin else None,
    }


def certificate_json(M, cert) -> dict:
    return {
        "eps": num(cert.eps),
        "alpha": num(cert.alpha),
        "pairs": _pairs_json(M, cert.pairs),
        "weights": [num(w) for w in cert.weights],
        "witnesses_a": [
            {"j": j, "k": k, "cycle": list(w["cycle"]), "sum": num(w["sum"]), "relaxed": num(w["relaxed"])}
            for (j, k), w in sorted(cert.witnesses_a.items())
        ],
        "witnesses_c": [
            {"x": _lab(M, x), "s": _lab(M, s), "t": _lab(M, t), "lp_min": num(v)}
            for x, (s, t, v) in sorted(cert.witnesses_c.items())
        ],
        "derived_bound": num(cert.derived_bound),
        "valid_bound": num(cert.valid_bound),
        "slice_alpha": num(cert.slice_alpha) if cert.slice_alpha is not None else None,
        "slice_diameter": num(cert.slice_diameter) if cert.slice_diameter is not None else None,
        "slice_boundary_only": cert.slice_boundary_only,
        "within_derived_bound": cert.within_derived_bound,
        "note": cert.note,
    }


def _jsonable(obj):
    if isinstance(obj, (Fraction, float, int)) and not isinstance(obj, bool):
        return num(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _cmd_certify(cfg, M):
    pairs = _load_pairs(cfg, M)
    out = certify(M, pairs, _need(cfg.alpha, "alpha"), _need(cfg.eps, "eps"), cfg.n_exact)
    if out.ok:
        return 0, {"certified": True, "certificate": certificate_json(M, out)}
    return 1, {"certified": False, "failed_condition": out.condition, "detail": _jsonable(out.detail)}


def _cmd_search(cfg, M):
    eps = _need(cfg.eps, "eps")
    n_max = cfg.n_max or cfg.n_pairs_max
    res = search_certificate(M, eps, n_max, n_exact=cfg.n_exact)
    out = {"eps": num(eps), "n_max": n_max, "examined": res.examined, "found": res.found}
    if res.found:
        out["certificate"] = certificate_json(M, res.certificate)
    else:
        out["near_misses"] = {
            cond: [{"margin": num(item[0]), "pairs": _pairs_json(M, item[1])} for item in items]
            for cond, items in res.near_misses.items()
        }
    if res.failures:
        out["soundness_failures"] = [_jsonable(f.detail) for f in res.failures]
    return (0 if res.found else 1), out


_DISPATCH = {
    "validate": _cmd_validate,
    "norm": _cmd_norm,
    "combo-check": _cmd_combo,
    "potentials": _cmd_potentials,
    "extend": _cmd_extend,
    "slice-diam": _cmd_slice,
    "scan": _cmd_scan,
    "certify": _cmd_certify,
    "search": _cmd_search,
}

_INPUT_ERRORS = (ParseError, SchemaError, MetricError, InvalidPair, ZeroElement, NotNormalized,
                 EmptySlice, SizeLimitExceeded, ValueError)


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Execute one command; returns (exit status, report)."""
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": cfg.command,
        "arithmetic": {"mode": cfg.arithmetic, "tol": cfg.tolerance},
    }
    t0 = time.perf_counter()
    with arith.arithmetic(cfg.arithmetic, cfg.tolerance):
        try:
            M = _load_space(cfg)
            report["input"] = {"path": cfg.input_path, "space": M.to_json()}
            status, result = _DISPATCH[cfg.command](cfg, M)
            report["result"] = result
        except _INPUT_ERRORS as exc:
            status = 2
            report["error"] = {"type": type(exc).__name__, "message": str(exc)}
    if cfg.timings:
        report["timings"] = {"wall_seconds": round(time.perf_counter() - t0, 6)}
    return status, report


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lipfree", description="Lipschitz-free space geometry on finite metric spaces")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", help="distance matrix as JSON or CSV")
    p.add_argument("--arith", choices=("rational", "float"), default="rational")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--n-exact", type=int, default=14)
    p.add_argument("--n-pairs-max", type=int, default=3)
    p.add_argument("--alpha-grid", type=str, default=None, help="comma-separated widths")
    p.add_argument("--base", type=int, default=None)
    p.add_argument("--mu", help="JSON object label -> coefficient")
    p.add_argument("--pairs", help="JSON list of [x, y] labels")
    p.add_argument("--weights", type=str, default=None, help="comma-separated weights for combo-check")
    p.add_argument("--values", help="JSON object label -> value on the subset")
    p.add_argument("--alpha", type=str)
    p.add_argument("--eps", type=str)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte-identity)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        grid = tuple(Fraction(x) for x in args.alpha_grid.split(",")) if args.alpha_grid else DEFAULT_ALPHA_GRID
        weights = tuple(Fraction(x) for x in args.weights.split(",")) if args.weights else None
        cfg = RunConfig(
            command=args.command, input_path=args.input, arithmetic=args.arith, tolerance=args.tol,
            n_exact=args.n_exact, n_pairs_max=args.n_pairs_max, alpha_grid=grid, output_path=args.out,
            base=args.base, mu_path=args.mu, pairs_path=args.pairs, weights=weights,
            values_path=args.values, alpha=args.alpha, eps=args.eps, n_max=args.n_max, timings=args.timings,
        )
    except (ValueError, ZeroDivisionError) as exc:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "error": {"type": "ParseError", "message": str(exc)}}))
        return 2
    status, report = run(cfg)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if cfg.output_path:
        Path(cfg.output_path).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
