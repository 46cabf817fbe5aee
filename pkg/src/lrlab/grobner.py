"""Groebner bases for submodules of free modules over Q[x,y,z].

Module elements are handled internally as flat dicts keyed by
``(position, a, b, c)``; :class:`FreeModuleElem` is the public value type.
The default module order is position-over-term (e_1 > e_2 > ...) with grevlex
underneath.  Syzygies are read off a Groebner basis of the module generated
by the augmented vectors (g_i, e_i).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exactring import HypersurfaceRing, Poly, RingElem, _reduce

Term = Tuple[int, int, int, int]
Vec = Dict[Term, Fraction]

ORDERS = ("pot", "top")


@dataclass(frozen=True)
class FreeModuleElem:
    """Element of the free module Q[x,y,z]^rank."""

    components: Tuple[Poly, ...]

    def __post_init__(self):
        comps = tuple(c if isinstance(c, Poly) else Poly.const(c) for c in self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise ValueError("rank must be positive")

    @classmethod
    def of(cls, *components) -> "FreeModuleElem":
        return cls(tuple(components))

    @classmethod
    def unit(cls, i: int, rank: int, coeff: Poly | int = 1) -> "FreeModuleElem":
        comps = [Poly.zero()] * rank
        comps[i] = coeff if isinstance(coeff, Poly) else Poly.const(coeff)
        return cls(tuple(comps))

    @classmethod
    def zero(cls, rank: int) -> "FreeModuleElem":
        return cls(tuple(Poly.zero() for _ in range(rank)))

    @property
    def rank(self) -> int:
        return len(self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __add__(self, other: "FreeModuleElem"):
        _check_rank(self, other)
        return FreeModuleElem(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "FreeModuleElem"):
        _check_rank(self, other)
        return FreeModuleElem(tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self):
        return FreeModuleElem(tuple(-a for a in self.components))

    def scale(self, p) -> "FreeModuleElem":
        return FreeModuleElem(tuple(p * a for a in self.components))

    def __rmul__(self, p):
        if isinstance(p, (Poly, int, Fraction)):
            return self.scale(p)
        return NotImplemented

    def reduce_mod(self, R: HypersurfaceRing) -> "FreeModuleElem":
        return FreeModuleElem(tuple(_reduce(c, R) for c in self.components))

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.components) + ")"


def _check_rank(a: FreeModuleElem, b: FreeModuleElem):
    if a.rank != b.rank:
        raise ValueError(f"rank mismatch: {a.rank} vs {b.rank}")


@dataclass(frozen=True)
class ModuleBasis:
    generators: Tuple[FreeModuleElem, ...]
    order: str = "pot"

    def __post_init__(self):
        gens = tuple(g for g in self.generators if not g.is_zero())
        object.__setattr__(self, "generators", gens)
        if self.order not in ORDERS:
            raise ValueError(f"unknown module order {self.order!r}")
        if len({g.rank for g in gens}) > 1:
            raise ValueError("generators must share one rank")

    @property
    def rank(self) -> Optional[int]:
        return self.generators[0].rank if self.generators else None

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


@dataclass(frozen=True)
class SyzygySet:
    """Relations (one coefficient per generator) annihilating a generator list."""

    relations: Tuple[Tuple[Poly, ...], ...] = field(default_factory=tuple)

    def __len__(self):
        return len(self.relations)

    def __iter__(self):
        return iter(self.relations)


# -- internal vector arithmetic ------------------------------------------

def _pot_key(t: Term):
    p, a, b, c = t
    return (-p, a + b + c, -c, -b)


def _top_key(t: Term):
    p, a, b, c = t
    return (a + b + c, -c, -b, -p)


_KEYS = {"pot": _pot_key, "top": _top_key}


def _to_vec(v: FreeModuleElem) -> Vec:
    out = {}
    for i, comp in enumerate(v.components):
        for (a, b, c), k in comp.terms.items():
            out[(i, a, b, c)] = k
    return out


def _from_vec(vec: Vec, rank: int) -> FreeModuleElem:
    comps: List[dict] = [{} for _ in range(rank)]
    for (i, a, b, c), k in vec.items():
        comps[i][(a, b, c)] = k
    return FreeModuleElem(tuple(Poly._raw(d) for d in comps))


def _lead(vec: Vec, key) -> Term:
    return max(vec, key=key)


def _divides(s: Term, t: Term) -> bool:
    return s[0] == t[0] and s[1] <= t[1] and s[2] <= t[2] and s[3] <= t[3]


def _sub_multiple(target: Vec, g: Vec, shift: Tuple[int, int, int], coeff: Fraction):
    """target -= coeff * x^shift * g, in place."""
    da, db, dc = shift
    for (p, a, b, c), k in g.items():
        t = (p, a + da, b + db, c + dc)
        v = target.get(t, 0) - coeff * k
        if v:
            target[t] = v
        else:
            target.pop(t, None)


def _monic(vec: Vec, key) -> Vec:
    lc = vec[_lead(vec, key)]
    if lc == 1:
        return vec
    return {t: k / lc for t, k in vec.items()}


class _Reducer:
    """Generators with cached lead terms."""

    def __init__(self, vecs: Sequence[Vec], key):
        self.key = key
        self.vecs = list(vecs)
        self.leads = [_lead(v, key) for v in self.vecs]

    def find(self, t: Term) -> int:
        for i, s in enumerate(self.leads):
            if _divides(s, t):
                return i
        return -1

    def reduce(self, vec: Vec, full: bool = True, quotients: Optional[list] = None) -> Vec:
        p = dict(vec)
        rem: Vec = {}
        key = self.key
        while p:
            t = max(p, key=key)
            i = self.find(t)
            if i < 0:
                if not full:
                    rem.update(p)
                    return rem
                rem[t] = p.pop(t)
                continue
            s = self.leads[i]
            shift = (t[1] - s[1], t[2] - s[2], t[3] - s[3])
            coeff = p[t] / self.vecs[i][s]
            _sub_multiple(p, self.vecs[i], shift, coeff)
            if quotients is not None:
                q = quotients[i]
                q[shift] = q.get(shift, 0) + coeff
        return rem


def _spoly(f: Vec, lf: Term, g: Vec, lg: Term) -> Vec:
    lcm = (lf[0], max(lf[1], lg[1]), max(lf[2], lg[2]), max(lf[3], lg[3]))
    out = {}
    _sub_multiple(out, f, (lcm[1] - lf[1], lcm[2] - lf[2], lcm[3] - lf[3]), -1 / f[lf])
    _sub_multiple(out, g, (lcm[1] - lg[1], lcm[2] - lg[2], lcm[3] - lg[3]), 1 / g[lg])
    return out


def _lcm_term(s: Term, t: Term) -> Term:
    return (s[0], max(s[1], t[1]), max(s[2], t[2]), max(s[3], t[3]))


def _gb(vecs: List[Vec], key, rank: int) -> List[Vec]:
    """Buchberger completion followed by interreduction; returns monic reduced basis."""
    G: List[Vec] = []
    leads: List[Term] = []
    queue: list = []
    pending = set()

    def add(vec: Vec):
        vec = _monic(vec, key)
        lt = _lead(vec, key)
        j = len(G)
        G.append(vec)
        leads.append(lt)
        for i in range(j):
            if leads[i][0] == lt[0]:
                lcm = _lcm_term(leads[i], lt)
                heapq.heappush(queue, (lcm[1] + lcm[2] + lcm[3], j, i))
                pending.add((i, j))

    red = _Reducer([], key)
    for v in vecs:
        if not v:
            continue
        r = red.reduce(v)
        if r:
            add(r)
            red.vecs.append(G[-1])
            red.leads.append(leads[-1])

    while queue:
        _, j, i = heapq.heappop(queue)
        pending.discard((i, j))
        li, lj = leads[i], leads[j]
        if rank == 1 and li[1] * lj[1] == 0 and li[2] * lj[2] == 0 and li[3] * lj[3] == 0:
            continue  # coprime lead terms
        lcm = _lcm_term(li, lj)
        if any(k != i and k != j and _divides(leads[k], lcm)
               and (min(i, k), max(i, k)) not in pending
               and (min(j, k), max(j, k)) not in pending
               for k in range(len(G))):
            continue
        s = _spoly(G[i], li, G[j], lj)
        if not s:
            continue
        r = red.reduce(s)
        if r:
            add(r)
            red.vecs.append(G[-1])
            red.leads.append(leads[-1])

    # minimalize, then interreduce
    # lead terms are pairwise distinct: each new element was reduced by all earlier ones
    keep = [i for i, lt in enumerate(leads)
            if not any(j != i and _divides(leads[j], lt) for j in range(len(G)))]
    minimal = [G[i] for i in keep]
    out = []
    for i, g in enumerate(minimal):
        others = _Reducer(minimal[:i] + minimal[i + 1:], key)
        lt = _lead(g, key)
        tail = dict(g)
        lc = tail.pop(lt)
        r = others.reduce(tail)
        r[lt] = lc
        out.append(_monic(r, key))
    out.sort(key=lambda v: key(_lead(v, key)), reverse=True)
    return out


# -- public operations ---------------------------------------------------

def _as_basis(B) -> ModuleBasis:
    return B if isinstance(B, ModuleBasis) else ModuleBasis(tuple(B))


def divide(v: FreeModuleElem, B) -> Tuple[List[Poly], FreeModuleElem]:
    """Multivariate division of ``v`` by the generators of ``B``.

    Returns ``(quotients, remainder)`` with ``v = sum(q_i * B_i) + remainder``
    and no remainder term divisible by a generator's lead term.
    """
    B = _as_basis(B)
    if B.rank is not None and B.rank != v.rank:
        raise ValueError(f"rank mismatch: {v.rank} vs {B.rank}")
    key = _KEYS[B.order]
    red = _Reducer([_to_vec(g) for g in B.generators], key)
    quot: List[dict] = [{} for _ in B.generators]
    rem = red.reduce(_to_vec(v), quotients=quot)
    qs = [Poly({k: c for k, c in q.items() if c}) for q in quot]
    return qs, _from_vec(rem, v.rank)


def buchberger(B) -> ModuleBasis:
    """Reduced Groebner basis of the submodule generated by ``B``."""
    B = _as_basis(B)
    if not B.generators:
        return B
    key = _KEYS[B.order]
    out = _gb([_to_vec(g) for g in B.generators], key, B.rank)
    return ModuleBasis(tuple(_from_vec(v, B.rank) for v in out), B.order)


def is_groebner(B) -> bool:
    """True iff every S-pair of ``B`` reduces to zero."""
    B = _as_basis(B)
    key = _KEYS[B.order]
    red = _Reducer([_to_vec(g) for g in B.generators], key)
    n = len(red.vecs)
    for j in range(n):
        for i in range(j):
            if red.leads[i][0] != red.leads[j][0]:
                continue
            s = _spoly(red.vecs[i], red.leads[i], red.vecs[j], red.leads[j])
            if red.reduce(s):
                return False
    return True


def _augmented_gb(gens: Sequence[FreeModuleElem]):
    r = gens[0].rank
    s = len(gens)
    vecs = []
    for i, g in enumerate(gens):
        v = _to_vec(g)
        v[(r + i, 0, 0, 0)] = Fraction(1)
        vecs.append(v)
    return _gb(vecs, _pot_key, r + s), r, s


def _split_tag(vec: Vec, r: int, s: int) -> Tuple[Poly, ...]:
    comps: List[dict] = [{} for _ in range(s)]
    for (p, a, b, c), k in vec.items():
        if p >= r:
            comps[p - r][(a, b, c)] = k
    return tuple(Poly._raw(d) for d in comps)


class SubmoduleOracle:
    """Membership decisions for a fixed submodule, with certificates.

    The Groebner basis is computed once; ``contains`` uses plain division,
    ``certificate`` uses a basis of the augmented module so that quotients
    refer to the original generators.
    """

    def __init__(self, B):
        self.basis = _as_basis(B)
        self.gb = buchberger(self.basis)
        self._reducer = _Reducer([_to_vec(g) for g in self.gb.generators], _KEYS[self.basis.order])
        self._aug = None

    def contains(self, v: FreeModuleElem) -> bool:
        if v.is_zero():
            return True
        if self.basis.rank is not None and v.rank != self.basis.rank:
            raise ValueError(f"rank mismatch: {v.rank} vs {self.basis.rank}")
        return not self._reducer.reduce(_to_vec(v))

    def certificate(self, v: FreeModuleElem) -> Optional[List[Poly]]:
        """Coefficients c with v = sum(c_i * B_i), or None if v is not in the span."""
        gens = self.basis.generators
        if not gens:
            return [] if v.is_zero() else None
        if self._aug is None:
            G, r, s = _augmented_gb(gens)
            top = [g for g in G if _lead(g, _pot_key)[0] < r]
            self._aug = (_Reducer(top, _pot_key), r, s)
        red, r, s = self._aug
        rem = red.reduce(_to_vec(v), full=False)
        if any(t[0] < r for t in rem):
            return None
        return [-c for c in _split_tag(rem, r, s)]


def submodule_membership(v: FreeModuleElem, B) -> Tuple[bool, Optional[List[Poly]]]:
    """Decide ``v`` in span(B); on success also return reconstructing quotients."""
    oracle = SubmoduleOracle(B)
    if not oracle.contains(v):
        return False, None
    return True, oracle.certificate(v)


def syzygies(gens: Sequence[FreeModuleElem]) -> SyzygySet:
    """Generating set of polynomial-ring syzygies of ``gens``."""
    gens = list(gens)
    if not gens:
        return SyzygySet(())
    if len({g.rank for g in gens}) > 1:
        raise ValueError("generators must share one rank")
    G, r, s = _augmented_gb(gens)
    rels = [_split_tag(g, r, s) for g in G if _lead(g, _pot_key)[0] >= r]
    return SyzygySet(tuple(rels))


def syzygies_over_A(gens: Sequence[FreeModuleElem], R: HypersurfaceRing) -> SyzygySet:
    """Syzygies of ``gens`` over A = Q[x,y,z]/(f).

    Computes polynomial syzygies of ``gens`` together with f*e_1, ..., f*e_r,
    keeps the coefficients on ``gens`` and reduces them modulo f.
    """
    gens = list(gens)
    if not gens:
        return SyzygySet(())
    r = gens[0].rank
    f = R.f
    aug = gens + [FreeModuleElem.unit(i, r, f) for i in range(r)]
    full = syzygies(aug)
    seen = set()
    out = []
    for rel in full:
        proj = tuple(_reduce(c, R) for c in rel[:len(gens)])
        if all(c.is_zero() for c in proj) or proj in seen:
            continue
        seen.add(proj)
        out.append(proj)
    return SyzygySet(tuple(out))


def relation_holds(rel: Sequence, gens: Sequence[FreeModuleElem], R: Optional[HypersurfaceRing] = None) -> bool:
    """Check sum(rel_i * gens_i) == 0, exactly or modulo f when ``R`` is given."""
    total = FreeModuleElem.zero(gens[0].rank)
    for c, g in zip(rel, gens):
        c = c.repr if isinstance(c, RingElem) else c
        total = total + g.scale(c)
    if R is not None:
        total = total.reduce_mod(R)
    return total.is_zero()


def format_basis(B) -> str:
    """Debug dump, one generator per line in the polynomial text grammar."""
    return "\n".join(str(g) for g in _as_basis(B).generators)
