"""Per-parameter verification reports (schema ``lrlab-report/1``)."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, Optional

from .connections import chern_report
from .derivations import (GeneratorSet, apply_poly, default_degree_bound, is_derivation,
                          standard_generators, reconcile_rho, relation_annihilates)
from .exactring import HypersurfaceRing
from .matfac import brieskorn_factorization, mf_defects

SCHEMA = "lrlab-report/1"
COUNTED = ("pass", "fail")


@dataclass
class VerificationReport:
    params: Dict[str, int]
    degree_bound: int
    checks: Dict[str, dict]
    audit: dict
    c1_representative: Optional[str]
    connection_source: Optional[str]
    timings_ms: Dict[str, float] = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        """True iff every check that is not skipped or a domain violation passes."""
        return all(c["status"] == "pass" for c in self.checks.values() if c["status"] in COUNTED)

    def to_dict(self, timings: bool = False) -> dict:
        out = {
            "schema": SCHEMA,
            "params": self.params,
            "degree_bound": self.degree_bound,
            "checks": self.checks,
            "audit": self.audit,
            "c1_representative": self.c1_representative,
            "connection_source": self.connection_source,
            "verdict": self.verdict,
        }
        if timings:
            out["timings_ms"] = self.timings_ms
        return out

    def failed(self):
        return sorted(k for k, c in self.checks.items() if c["status"] == "fail")


@contextmanager
def _timed(timings, phase):
    t0 = time.perf_counter()
    yield
    timings[phase] = round((time.perf_counter() - t0) * 1000, 3)


def generator_checks(G: GeneratorSet) -> Dict[str, dict]:
    R = G.ring
    checks = {}
    bad = [i for i, g in enumerate(G.gens) if not is_derivation(g)]
    checks["generators_are_derivations"] = ({"status": "pass"} if not bad else
                                            {"status": "fail", "failing_generators": bad})
    d0f = apply_poly(G[0], R.f)
    want = R.f * (2 * R.m * R.n)
    checks["delta0_f_equals_2mn_f"] = ({"status": "pass"} if d0f == want else
                                       {"status": "fail", "got": str(d0f)})
    bad_rel = [i for i, rel in enumerate(G.syz) if not relation_annihilates(rel, G.gens)]
    checks["syzygies"] = ({"status": "pass", "count": len(G.syz)} if not bad_rel and len(G.syz) else
                          {"status": "fail", "count": len(G.syz), "failing_relations": bad_rel})
    return checks


def audit_for(R: HypersurfaceRing, G: GeneratorSet) -> dict:
    """Audit of the printed data: the syzygy matrix and the printed form of d1."""
    printed = standard_generators(R, as_printed=True)
    return {
        "printed_delta1_is_derivation": is_derivation(printed[1]),
        "rho": reconcile_rho(G),
        "rho_with_printed_delta1": reconcile_rho(printed),
    }


def verify_tuple(m: int, n: int, k: int, l: int, degree_bound: Optional[int] = None,
                 G: Optional[GeneratorSet] = None, audit: Optional[dict] = None) -> VerificationReport:
    timings: Dict[str, float] = {}
    R = HypersurfaceRing(m, n)
    if degree_bound is None:
        degree_bound = default_degree_bound(R)
    with _timed(timings, "matrix_factorization"):
        mf = brieskorn_factorization(R, k, l)
        defects = mf_defects(mf)
    checks = {"mf_check": {"status": "pass"} if not defects else
              {"status": "fail", "defects": defects[:8]}}
    with _timed(timings, "generators_and_syzygies"):
        if G is None:
            G = standard_generators(R)
        checks.update(generator_checks(G))
    with _timed(timings, "rho_audit"):
        if audit is None:
            audit = audit_for(R, G)
    with _timed(timings, "connections"):
        chern = chern_report(mf, degree_bound, G)
    checks.update(chern["checks"])
    return VerificationReport(
        params={"m": m, "n": n, "k": k, "l": l},
        degree_bound=degree_bound,
        checks=checks,
        audit=audit,
        c1_representative=chern["c1_representative"],
        connection_source=chern["connection_source"],
        timings_ms=timings,
    )


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def format_text(rep: VerificationReport, timings: bool = False) -> str:
    p = rep.params
    head = f"(m,n,k,l) = ({p['m']},{p['n']},{p['k']},{p['l']})  degree_bound={rep.degree_bound}"
    lines = [head]
    for name in sorted(rep.checks):
        c = rep.checks[name]
        extra = ""
        if c["status"] == "fail":
            extra = "  " + json.dumps({k: v for k, v in c.items() if k != "status"}, sort_keys=True)[:200]
        lines.append(f"  {name:28s} {c['status']}{extra}")
    lines.append(f"  connection source: {rep.connection_source}")
    lines.append(f"  c1 representative: {rep.c1_representative if rep.c1_representative is not None else 'not established'}")
    if timings:
        lines.append("  timings (ms): " + ", ".join(f"{k}={v}" for k, v in sorted(rep.timings_ms.items())))
    lines.append(f"  verdict: {'VERIFIED' if rep.verdict else 'FAILED'}")
    return "\n".join(lines)
