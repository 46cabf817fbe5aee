"""Derivations of A = Q[x,y,z]/(x^m + y^n + z^2).

A derivation is stored by its values on x, y, z; it descends to A when
d(f) lies in (f).  Everything here is weighted homogeneous for the weights
wt(x) = 2n, wt(y) = 2m, wt(z) = mn, which keeps the linear systems in
:func:`represent` small.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exactring import (HypersurfaceRing, Poly, RingElem, RingMismatchError, VARS, _reduce,
                        basis_monomials, grevlex_key, partial)
from .grobner import FreeModuleElem, SubmoduleOracle, SyzygySet, syzygies_over_A
from .linsolve import SparseSystem


class NoSolutionWithinBound(Exception):
    def __init__(self, what: str, degree_bound: int):
        super().__init__(f"no solution for {what} with entries of total degree <= {degree_bound}")
        self.degree_bound = degree_bound


@dataclass(frozen=True)
class Derivation:
    ring: HypersurfaceRing
    vx: RingElem
    vy: RingElem
    vz: RingElem

    def __post_init__(self):
        for name in ("vx", "vy", "vz"):
            object.__setattr__(self, name, self.ring(getattr(self, name)))

    @classmethod
    def from_values(cls, R: HypersurfaceRing, values) -> "Derivation":
        vx, vy, vz = values
        return cls(R, vx, vy, vz)

    @classmethod
    def zero(cls, R: HypersurfaceRing) -> "Derivation":
        return cls(R, 0, 0, 0)

    @property
    def values(self) -> Tuple[RingElem, RingElem, RingElem]:
        return (self.vx, self.vy, self.vz)

    def __call__(self, a) -> RingElem:
        return apply(self, a)

    def _same(self, other: "Derivation"):
        if other.ring != self.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")

    def __add__(self, other: "Derivation"):
        self._same(other)
        return Derivation.from_values(self.ring, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other: "Derivation"):
        self._same(other)
        return Derivation.from_values(self.ring, [a - b for a, b in zip(self.values, other.values)])

    def __neg__(self):
        return Derivation.from_values(self.ring, [-a for a in self.values])

    def __rmul__(self, a):
        # a * d for a in A
        return Derivation.from_values(self.ring, [a * v for v in self.values])

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)

    def as_vector(self) -> FreeModuleElem:
        return FreeModuleElem(tuple(v.repr for v in self.values))

    def __str__(self):
        return "(" + ", ".join(str(v) for v in self.values) + ")"


def apply(d: Derivation, a) -> RingElem:
    """d(a) computed on the normal-form lift of ``a`` and reduced mod f."""
    R = d.ring
    p = R(a).repr
    total = Poly.zero()
    for v, var in zip(d.values, VARS):
        if v:
            dp = partial(p, var)
            if dp:
                total = total + v.repr * dp
    return RingElem(R, _reduce(total, R))


def apply_poly(d: Derivation, p: Poly) -> Poly:
    """d applied to a polynomial, without reduction."""
    total = Poly.zero()
    for v, var in zip(d.values, VARS):
        dp = partial(p, var)
        if dp and v:
            total = total + v.repr * dp
    return total


def is_derivation(d: Derivation) -> bool:
    """True iff d(f) = 0 in A."""
    fx, fy, fz = d.ring.gradient()
    return not _reduce(d.vx.repr * fx + d.vy.repr * fy + d.vz.repr * fz, d.ring).terms


def bracket(d1: Derivation, d2: Derivation) -> Derivation:
    d1._same(d2)
    return Derivation.from_values(
        d1.ring, [apply(d1, v2) - apply(d2, v1) for v1, v2 in zip(d1.values, d2.values)])


# -- weights ----------------------------------------------------------------

def mono_weight(mono, R: HypersurfaceRing) -> int:
    wx, wy, wz = R.weights()
    return mono[0] * wx + mono[1] * wy + mono[2] * wz


def homogeneous_parts(d: Derivation) -> Dict[int, Derivation]:
    """Split d into weighted-homogeneous derivations, keyed by weight.

    A term c*mu in the value on coordinate v has weight wt(mu) - wt(v).  Each
    part is again a derivation of A because f is weighted homogeneous.
    """
    R = d.ring
    wts = R.weights()
    parts: Dict[int, List[dict]] = defaultdict(lambda: [{}, {}, {}])
    for j, v in enumerate(d.values):
        for mono, c in v.repr.terms.items():
            parts[mono_weight(mono, R) - wts[j]][j][mono] = c
    return {w: Derivation.from_values(R, [RingElem(R, Poly._raw(t)) for t in vals])
            for w, vals in sorted(parts.items())}


def derivation_weight(d: Derivation) -> Optional[int]:
    parts = homogeneous_parts(d)
    if len(parts) == 1:
        return next(iter(parts))
    return None


def monomials_by_weight(R: HypersurfaceRing, degree_bound: int) -> Dict[int, list]:
    out: Dict[int, list] = defaultdict(list)
    for mono in basis_monomials(degree_bound):
        out[mono_weight(mono, R)].append(mono)
    for lst in out.values():
        lst.sort(key=grevlex_key)
    return out


# -- generators -------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorSet:
    gens: Tuple[Derivation, Derivation, Derivation, Derivation]
    syz: SyzygySet

    @property
    def ring(self) -> HypersurfaceRing:
        return self.gens[0].ring

    def __iter__(self):
        return iter(self.gens)

    def __getitem__(self, i):
        return self.gens[i]


def generator_derivations(R: HypersurfaceRing, as_printed: bool = False) -> Tuple[Derivation, ...]:
    """The derivations d0..d3 generating Der(A).

    d0 = 2nx dx + 2my dy + mnz dz,  d1 = m x^(m-1) dy - n y^(n-1) dx,
    d2 = -2z dx + m x^(m-1) dz,     d3 = -2z dy + n y^(n-1) dz.

    With ``as_printed`` the second term of d1 is placed on dz instead of dx.
    That variant does not satisfy d(f) in (f); it is kept for auditing.
    """
    m, n = R.m, R.n
    X = lambda e, c: Poly.monomial(e, 0, 0, c)
    Y = lambda e, c: Poly.monomial(0, e, 0, c)
    Z = lambda e, c: Poly.monomial(0, 0, e, c)
    d0 = (X(1, 2 * n), Y(1, 2 * m), Z(1, m * n))
    if as_printed:
        d1 = (0, X(m - 1, m), Y(n - 1, -n))
    else:
        d1 = (Y(n - 1, -n), X(m - 1, m), 0)
    d2 = (Z(1, -2), 0, X(m - 1, m))
    d3 = (0, Z(1, -2), Y(n - 1, n))
    return tuple(Derivation.from_values(R, v) for v in (d0, d1, d2, d3))


def standard_generators(R: HypersurfaceRing, as_printed: bool = False) -> GeneratorSet:
    gens = generator_derivations(R, as_printed)
    syz = syzygies_over_A([g.as_vector() for g in gens], R)
    return GeneratorSet(gens, syz)


def generator_weights(R: HypersurfaceRing) -> Tuple[int, int, int, int]:
    m, n = R.m, R.n
    return (0, 2 * m * n - 2 * m - 2 * n, m * n - 2 * n, m * n - 2 * m)


def combine(coeffs: Sequence, G: GeneratorSet) -> Derivation:
    R = G.ring
    out = Derivation.zero(R)
    for a, g in zip(coeffs, G.gens):
        a = R(a)
        if a:
            out = out + a * g
    return out


def relation_annihilates(rel: Sequence, gens: Sequence[Derivation]) -> bool:
    R = gens[0].ring
    total = Derivation.zero(R)
    for a, g in zip(rel, gens):
        total = total + R(a) * g
    return total.is_zero()


# -- representation in the generators ---------------------------------------

@dataclass(frozen=True)
class GeneratorCombination:
    coeffs: Tuple[RingElem, RingElem, RingElem, RingElem]

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coeffs) + ")"


def represent(d: Derivation, G: GeneratorSet, degree_bound: Optional[int] = None,
              graded: bool = True) -> GeneratorCombination:
    """Coefficients a_i of total degree <= degree_bound with sum a_i * G_i = d.

    Solved as an exact linear system in the unknown monomial coefficients.
    With ``graded`` the unknowns for each weighted-homogeneous part of d are
    restricted to the matching weight, which loses no solutions.
    """
    R = G.ring
    if d.ring != R:
        raise RingMismatchError(f"{d.ring} vs {R}")
    if degree_bound is None:
        degree_bound = default_degree_bound(R)
    if not is_derivation(d):
        raise ValueError(f"{d} is not a derivation of {R}")
    if graded:
        by_weight = monomials_by_weight(R, degree_bound)
        gw = generator_weights(R)
        total = [Poly.zero()] * 4
        for w, part in homogeneous_parts(d).items():
            unknowns = [(i, mono) for i in range(4) for mono in by_weight.get(w - gw[i], ())]
            sol = _solve_combination(part, G, unknowns, degree_bound)
            total = [a + b for a, b in zip(total, sol)]
    else:
        unknowns = [(i, mono) for i in range(4)
                    for mono in sorted(basis_monomials(degree_bound), key=grevlex_key)]
        total = _solve_combination(d, G, unknowns, degree_bound)
    comb = GeneratorCombination(tuple(RingElem(R, p) for p in total))
    if combine(comb.coeffs, G) != d:
        raise AssertionError("back-substitution failed")  # solver invariant
    return comb


def _solve_combination(d: Derivation, G: GeneratorSet, unknowns, degree_bound) -> List[Poly]:
    R = G.ring
    system = SparseSystem()
    eqs: Dict[tuple, dict] = defaultdict(dict)
    for col, (i, mono) in enumerate(unknowns):
        for j, v in enumerate(G.gens[i].values):
            if not v:
                continue
            for rm, c in _reduce(v.repr.mul_term(mono, 1), R).terms.items():
                row = eqs[(j, rm)]
                row[col] = row.get(col, 0) + c
    rhs = {(j, mono): c for j, v in enumerate(d.values) for mono, c in v.repr.terms.items()}
    for key in sorted(set(eqs) | set(rhs)):
        system.add(eqs.get(key, {}), rhs.get(key, 0))
        if not system.consistent:
            raise NoSolutionWithinBound(f"representation of {d}", degree_bound)
    sol = system.solve()
    out = [dict() for _ in range(4)]
    for col, val in sol.items():
        i, mono = unknowns[col]
        out[i][mono] = val
    return [Poly(t) for t in out]


def default_degree_bound(R: HypersurfaceRing) -> int:
    return 2 * (R.m + R.n)


# -- audit of the printed syzygy matrix --------------------------------------

def displayed_rho(R: HypersurfaceRing) -> List[List[Poly]]:
    """Rows of the displayed 4x4 syzygy matrix."""
    m, n = R.m, R.n
    x, y, z = (Poly.var(v) for v in VARS)
    X = lambda e, c=1: Poly.monomial(e, 0, 0, c)
    Y = lambda e, c=1: Poly.monomial(0, e, 0, c)
    return [
        [Y(n - 1), z, Poly.zero(), X(m - 1)],
        [2 * x, Poly.zero(), -2 * z, -2 * y],
        [Poly.zero(), n * x, Y(n - 1, n), -n * z],
        [-m * z, m * y, X(m - 1, -m), Poly.zero()],
    ]


def reconcile_rho(G: GeneratorSet) -> dict:
    """Test every row and column of the displayed syzygy matrix, under each of
    the 24 assignments of its entries to (d0, d1, d2, d3).

    A vector ``v`` under permutation ``p`` is the relation with coefficient
    ``v[t]`` on generator ``p[t]``.  Valid relations are cross-checked for
    membership in the span of the computed syzygies (plus f*A^4).
    """
    R = G.ring
    rho = displayed_rho(R)
    vectors = [("column", j, [rho[i][j] for i in range(4)]) for j in range(4)]
    vectors += [("row", i, list(rho[i])) for i in range(4)]
    oracle = SubmoduleOracle(
        [FreeModuleElem(tuple(c for c in rel)) for rel in G.syz]
        + [FreeModuleElem.unit(i, 4, R.f) for i in range(4)])
    entries = []
    for orientation, idx, vec in vectors:
        for perm in itertools.permutations(range(4)):
            rel = [Poly.zero()] * 4
            for t, gi in enumerate(perm):
                rel[gi] = vec[t]
            valid = relation_annihilates(rel, G.gens)
            entry = {"orientation": orientation, "index": idx + 1,
                     "permutation": list(perm), "valid": valid}
            if valid:
                entry["in_computed_span"] = oracle.contains(FreeModuleElem(tuple(rel)))
            entries.append(entry)
    identity = [e for e in entries if e["permutation"] == [0, 1, 2, 3]]
    return {
        "params": {"m": R.m, "n": R.n},
        "tested": len(entries),
        "valid": [e for e in entries if e["valid"]],
        "identity_assignment": {f"{e['orientation']}{e['index']}": e["valid"] for e in identity},
        "all_valid_in_computed_span": all(e.get("in_computed_span", True) for e in entries),
    }
