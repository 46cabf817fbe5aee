"""Command-line front end.

    lrlab verify --m 2..4 --n 2..4 --k all --l all --format json
    lrlab lift --m 2 --n 2 --k 1 --l 1 --delta 0
    lrlab show --m 3 --n 2 --k 1 --l 1

Exit codes: 0 success, 1 verification failure (or no lift found), 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .connections import FormulaDomainViolation, descends, lift_solver, formula_matrices, ConnectionOperator
from .derivations import (Derivation, NoSolutionWithinBound, default_degree_bound, is_derivation,
                          standard_generators)
from .exactring import HypersurfaceRing, ParseError, parse_poly
from .matfac import brieskorn_factorization
from .report import SCHEMA, audit_for, dumps, format_text, verify_tuple

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
PARAM_MIN, PARAM_MAX = 2, 12
ENV_BOUND = "LRLAB_DEGREE_BOUND"


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    m_range: Tuple[int, int]
    n_range: Tuple[int, int]
    k: Optional[int]  # None means "all"
    l: Optional[int]
    degree_bound: Optional[int]  # None means 2(m+n) per instance
    output_format: str = "json"
    output_path: Optional[str] = None
    jobs: int = 1
    timings: bool = False

    def tuples(self) -> List[Tuple[int, int, int, int]]:
        out = []
        for m in range(self.m_range[0], self.m_range[1] + 1):
            for n in range(self.n_range[0], self.n_range[1] + 1):
                ks = range(1, m + 1) if self.k is None else [self.k]
                ls = range(1, n + 1) if self.l is None else [self.l]
                out.extend((m, n, k, l) for k in ks for l in ls)
        return out


def parse_range(text: str, name: str) -> Tuple[int, int]:
    try:
        if ".." in text:
            lo, hi = (int(t) for t in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise ConfigError(f"--{name}: expected an integer or a..b, got {text!r}") from None
    if lo > hi:
        raise ConfigError(f"--{name}: empty range {text!r}")
    if lo < PARAM_MIN or hi > PARAM_MAX:
        raise ConfigError(f"--{name}: values must lie in [{PARAM_MIN}, {PARAM_MAX}], got {text!r}")
    return lo, hi


def parse_kl(text: str, name: str) -> Optional[int]:
    if text == "all":
        return None
    try:
        v = int(text)
    except ValueError:
        raise ConfigError(f"--{name}: expected an integer or 'all', got {text!r}") from None
    if v < 1:
        raise ConfigError(f"--{name} must be >= 1")
    return v


def parse_bound(arg: Optional[str]) -> Optional[int]:
    raw = arg if arg is not None else os.environ.get(ENV_BOUND)
    if raw is None or raw == "":
        return None
    try:
        v = int(raw)
    except ValueError:
        raise ConfigError(f"degree bound must be an integer, got {raw!r}") from None
    if v < 1:
        raise ConfigError("degree bound must be >= 1")
    return v


def make_config(ns) -> RunConfig:
    m_range = parse_range(ns.m, "m")
    n_range = parse_range(ns.n, "n")
    k, l = parse_kl(ns.k, "k"), parse_kl(ns.l, "l")
    if k is not None and k > m_range[0]:
        raise ConfigError(f"--k {k} exceeds m={m_range[0]}")
    if l is not None and l > n_range[0]:
        raise ConfigError(f"--l {l} exceeds n={n_range[0]}")
    jobs = getattr(ns, "jobs", 1)
    if jobs < 1:
        raise ConfigError("--jobs must be >= 1")
    return RunConfig(m_range, n_range, k, l, parse_bound(ns.degree_bound), ns.format,
                     ns.out, jobs, getattr(ns, "timings", False))


def _single(cfg: RunConfig) -> Tuple[int, int, int, int]:
    if cfg.m_range[0] != cfg.m_range[1] or cfg.n_range[0] != cfg.n_range[1] or cfg.k is None or cfg.l is None:
        raise ConfigError("this command needs a single parameter tuple (integer --m --n --k --l)")
    return cfg.m_range[0], cfg.n_range[0], cfg.k, cfg.l


def _open_out(path: Optional[str]):
    if path is None:
        return None
    try:
        return open(path, "w", encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot write output file {path!r}: {exc}") from None


def _emit(text: str, fh):
    (fh or sys.stdout).write(text)


# -- verify ---------------------------------------------------------------------

def _verify_group(args):
    """All (k, l) for one (m, n): generators, syzygies and audit are shared."""
    m, n, kls, bound = args
    R = HypersurfaceRing(m, n)
    G = standard_generators(R)
    audit = audit_for(R, G)
    return [verify_tuple(m, n, k, l, bound, G=G, audit=audit) for k, l in kls]


def run_verify(cfg: RunConfig):
    groups = {}
    for m, n, k, l in cfg.tuples():
        groups.setdefault((m, n), []).append((k, l))
    work = [(m, n, kls, cfg.degree_bound) for (m, n), kls in sorted(groups.items())]
    if cfg.jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_verify_group, work))
    else:
        results = [_verify_group(w) for w in work]
    reports = [r for group in results for r in group]
    reports.sort(key=lambda r: (r.params["m"], r.params["n"], r.params["k"], r.params["l"]))
    return reports


def cmd_verify(cfg: RunConfig) -> int:
    fh = _open_out(cfg.output_path)
    try:
        reports = run_verify(cfg)
        ok = all(r.verdict for r in reports)
        if cfg.output_format == "json":
            doc = {
                "schema": SCHEMA,
                "config": {"m": list(cfg.m_range), "n": list(cfg.n_range),
                           "k": "all" if cfg.k is None else cfg.k,
                           "l": "all" if cfg.l is None else cfg.l,
                           "degree_bound": cfg.degree_bound},
                "reports": [r.to_dict(cfg.timings) for r in reports],
                "all_verified": ok,
            }
            _emit(dumps(doc), fh)
        else:
            blocks = [format_text(r, cfg.timings) for r in reports]
            blocks.append(f"{sum(r.verdict for r in reports)}/{len(reports)} parameter tuples verified")
            _emit("\n".join(blocks) + "\n", fh)
    finally:
        if fh:
            fh.close()
    return EXIT_OK if ok else EXIT_FAIL


# -- lift -----------------------------------------------------------------------

def parse_delta(text: str, R: HypersurfaceRing) -> Derivation:
    if text.strip() in ("0", "1", "2", "3"):
        return standard_generators(R)[int(text)]
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ConfigError(f"--delta: expected 0..3 or 'vx, vy, vz', got {text!r}")
    try:
        d = Derivation.from_values(R, [parse_poly(p) for p in parts])
    except ParseError as exc:
        raise ConfigError(f"--delta: {exc}") from None
    if not is_derivation(d):
        raise ConfigError(f"--delta: ({text}) does not preserve (f), so it is not a derivation of A")
    return d


def cmd_lift(cfg: RunConfig, delta: str) -> int:
    m, n, k, l = _single(cfg)
    R = HypersurfaceRing(m, n)
    mf = brieskorn_factorization(R, k, l)
    d = parse_delta(delta, R)
    bound = cfg.degree_bound or default_degree_bound(R)
    fh = _open_out(cfg.output_path)
    try:
        try:
            M = lift_solver(d, mf, bound)
        except NoSolutionWithinBound as exc:
            doc = {"schema": SCHEMA, "params": {"m": m, "n": n, "k": k, "l": l}, "derivation": str(d),
                   "degree_bound": bound, "found": False, "obstruction": str(exc)}
            _emit(dumps(doc) if cfg.output_format == "json" else f"no lift: {exc}\n", fh)
            return EXIT_FAIL
        ok = descends(ConnectionOperator(d, M), mf)
        if cfg.output_format == "json":
            doc = {"schema": SCHEMA, "params": {"m": m, "n": n, "k": k, "l": l}, "derivation": str(d),
                   "degree_bound": bound, "found": True, "matrix": str(M), "descends": ok}
            _emit(dumps(doc), fh)
        else:
            _emit(f"derivation {d}\nlift matrix {M}\ndescends: {ok}\n", fh)
    finally:
        if fh:
            fh.close()
    return EXIT_OK if ok else EXIT_FAIL


# -- show -----------------------------------------------------------------------

def cmd_show(cfg: RunConfig) -> int:
    m, n, k, l = _single(cfg)
    R = HypersurfaceRing(m, n)
    mf = brieskorn_factorization(R, k, l)
    G = standard_generators(R)
    lines = [f"ring: {R}", f"phi = {mf.phi}", f"psi = {mf.psi}"]
    lines += [f"delta{i} = {g}" for i, g in enumerate(G.gens)]
    lines.append("syzygies (coefficients on delta0..delta3):")
    lines += ["  (" + ", ".join(str(c) for c in rel) + ")" for rel in G.syz]
    try:
        mats = formula_matrices(mf)
        lines += [f"A{i} = {M}" for i, M in enumerate(mats)]
    except FormulaDomainViolation as exc:
        lines.append(f"A0..A3: formula domain violation ({', '.join(exc.entries)})")
    fh = _open_out(cfg.output_path)
    try:
        _emit("\n".join(lines) + "\n", fh)
    finally:
        if fh:
            fh.close()
    return EXIT_OK


# -- entry point ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lrlab", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, grid):
        p.add_argument("--m", required=True, help="integer or range a..b" if grid else "integer")
        p.add_argument("--n", required=True, help="integer or range a..b" if grid else "integer")
        p.add_argument("--k", default="all" if grid else None, required=not grid,
                       help="integer or 'all'" if grid else "integer")
        p.add_argument("--l", default="all" if grid else None, required=not grid,
                       help="integer or 'all'" if grid else "integer")
        p.add_argument("--degree-bound", default=None,
                       help=f"override the default 2(m+n); also read from ${ENV_BOUND}")
        p.add_argument("--format", choices=("json", "text"), default="json" if grid else "text")
        p.add_argument("--out", default=None, help="write output to PATH")

    v = sub.add_parser("verify", help="verify all checks on a parameter grid")
    common(v, True)
    v.add_argument("--jobs", type=int, default=1, help="worker processes")
    v.add_argument("--timings", action="store_true", help="include per-phase timings (not deterministic)")
    lf = sub.add_parser("lift", help="solve for a Leibniz lift of a derivation to W")
    common(lf, False)
    lf.add_argument("--delta", required=True, help="generator index 0..3 or 'vx, vy, vz'")
    sh = sub.add_parser("show", help="print the matrices, generators, syzygies and connection matrices")
    common(sh, False)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = make_config(ns)
        if ns.command == "verify":
            return cmd_verify(cfg)
        if ns.command == "lift":
            return cmd_lift(cfg, ns.delta)
        return cmd_show(cfg)
    except ConfigError as exc:
        print(f"lrlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
