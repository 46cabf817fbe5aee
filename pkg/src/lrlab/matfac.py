"""Matrices over A, the 4x4 matrix factorizations of x^m + y^n + z^2, and
decidable membership in the image of phi.

W = coker(phi).  Because phi*psi = psi*phi = f*I and f is a nonzerodivisor,
a vector v lies in im(phi) over A exactly when psi*v vanishes modulo f.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .exactring import HypersurfaceRing, Poly, RingElem, RingMismatchError, _reduce
from .grobner import FreeModuleElem, SubmoduleOracle


class RingMatrix:
    """Dense matrix with entries in one hypersurface ring."""

    __slots__ = ("ring", "rows")

    def __init__(self, ring: HypersurfaceRing, rows: Sequence[Sequence]):
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and column")
        width = len(rows[0])
        out = []
        for row in rows:
            if len(row) != width:
                raise ValueError("ragged matrix")
            out.append(tuple(ring(e) for e in row))
        self.ring = ring
        self.rows: Tuple[Tuple[RingElem, ...], ...] = tuple(out)

    @classmethod
    def identity(cls, ring, size=4):
        return cls(ring, [[1 if i == j else 0 for j in range(size)] for i in range(size)])

    @classmethod
    def zeros(cls, ring, rows=4, cols=4):
        return cls(ring, [[0] * cols for _ in range(rows)])

    @classmethod
    def diag(cls, ring, entries):
        k = len(entries)
        return cls(ring, [[entries[i] if i == j else 0 for j in range(k)] for i in range(k)])

    @property
    def shape(self):
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j) -> Tuple[RingElem, ...]:
        return tuple(r[j] for r in self.rows)

    def map(self, fn) -> "RingMatrix":
        return RingMatrix(self.ring, [[fn(e) for e in r] for r in self.rows])

    def _check(self, other: "RingMatrix"):
        if other.ring != self.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")

    def __add__(self, other: "RingMatrix"):
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RingMatrix(self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "RingMatrix"):
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RingMatrix(self.ring, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return self.map(lambda e: -e)

    def __mul__(self, other):
        if isinstance(other, RingMatrix):
            self._check(other)
            return RingMatrix(self.ring, _matmul_poly(self.polys(), other.polys(), self.ring))
        if isinstance(other, (int, Fraction, RingElem)):
            return self.map(lambda e: e * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, RingElem)):
            return self.map(lambda e: other * e)
        return NotImplemented

    def apply(self, v: Sequence[RingElem]) -> Tuple[RingElem, ...]:
        """Matrix times column vector."""
        vv = [self.ring(e) for e in v]
        return tuple(sum((a * b for a, b in zip(row, vv)), self.ring.zero()) for row in self.rows)

    def trace(self) -> RingElem:
        return sum((self.rows[i][i] for i in range(min(self.shape))), self.ring.zero())

    def polys(self) -> List[List[Poly]]:
        return [[e.repr for e in r] for r in self.rows]

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.rows for e in r)

    def __eq__(self, other):
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return self.ring == other.ring and self.rows == other.rows

    def __hash__(self):
        return hash((self.ring, self.rows))

    def __str__(self):
        return format_matrix(self)

    def __repr__(self):
        return f"RingMatrix({format_matrix(self)})"


def _matmul_poly(P, Q, ring=None):
    n, k, m = len(P), len(Q), len(Q[0])
    if len(P[0]) != k:
        raise ValueError("shape mismatch")
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = Poly.zero()
            for t in range(k):
                if P[i][t] and Q[t][j]:
                    acc = acc + P[i][t] * Q[t][j]
            row.append(RingElem(ring, _reduce(acc, ring)) if ring is not None else acc)
        out.append(row)
    return out


def format_matrix(M: RingMatrix) -> str:
    return "[" + ", ".join("[" + ", ".join(str(e) for e in r) + "]" for r in M.rows) + "]"


@dataclass(frozen=True)
class MatrixFactorization:
    ring: HypersurfaceRing
    k: int
    l: int
    phi: RingMatrix
    psi: RingMatrix

    @property
    def params(self) -> Tuple[int, int, int, int]:
        return (self.ring.m, self.ring.n, self.k, self.l)


def _check_params(R: HypersurfaceRing, k: int, l: int):
    if not (1 <= k <= R.m):
        raise ValueError(f"k must satisfy 1 <= k <= m={R.m}, got {k}")
    if not (1 <= l <= R.n):
        raise ValueError(f"l must satisfy 1 <= l <= n={R.n}, got {l}")


def build_phi(R: HypersurfaceRing, k: int, l: int) -> RingMatrix:
    _check_params(R, k, l)
    m, n = R.m, R.n
    X = lambda e, c=1: Poly.monomial(e, 0, 0, c)
    Y = lambda e, c=1: Poly.monomial(0, e, 0, c)
    z = Poly.var("z")
    return RingMatrix(R, [
        [X(m - k), Y(n - l), 0, z],
        [Y(l), X(k, -1), z, 0],
        [z, 0, Y(n - l, -1), X(k, -1)],
        [0, z, X(m - k), Y(l, -1)],
    ])


def build_psi(R: HypersurfaceRing, k: int, l: int) -> RingMatrix:
    _check_params(R, k, l)
    m, n = R.m, R.n
    X = lambda e, c=1: Poly.monomial(e, 0, 0, c)
    Y = lambda e, c=1: Poly.monomial(0, e, 0, c)
    z = Poly.var("z")
    return RingMatrix(R, [
        [X(k), Y(n - l), z, 0],
        [Y(l), X(m - k, -1), 0, z],
        [0, z, Y(l, -1), X(k)],
        [z, 0, X(m - k, -1), Y(n - l, -1)],
    ])


def brieskorn_factorization(R: HypersurfaceRing, k: int, l: int) -> MatrixFactorization:
    return MatrixFactorization(R, k, l, build_phi(R, k, l), build_psi(R, k, l))


def mf_defects(mf: MatrixFactorization) -> List[dict]:
    """Entries where phi*psi or psi*phi differs from f*I in Q[x,y,z] (no reduction)."""
    f = mf.ring.f
    P, S = mf.phi.polys(), mf.psi.polys()
    out = []
    for name, prod in (("phi*psi", _matmul_poly(P, S)), ("psi*phi", _matmul_poly(S, P))):
        for i, row in enumerate(prod):
            for j, got in enumerate(row):
                want = f if i == j else Poly.zero()
                if got != want:
                    out.append({"product": name, "row": i + 1, "col": j + 1,
                                "got": str(got), "expected": str(want)})
    return out


def mf_check(mf: MatrixFactorization) -> bool:
    return not mf_defects(mf)


def _as_ring_vec(v, R) -> List[RingElem]:
    if isinstance(v, FreeModuleElem):
        return [R(c) for c in v.components]
    return [R(c) for c in v]


def column_in_image(v, mf: MatrixFactorization) -> bool:
    """Decide whether the rank-4 vector ``v`` lies in phi(A^4)."""
    vec = _as_ring_vec(v, mf.ring)
    if len(vec) != 4:
        raise ValueError("expected a rank-4 vector")
    return all(e.is_zero() for e in mf.psi.apply(vec))


def operator_zero_on_W(M: RingMatrix, mf: MatrixFactorization) -> bool:
    """An A-linear map on A^4 induces zero on coker(phi) iff psi*M = 0 in A."""
    return (mf.psi * M).is_zero()


def image_oracle(mf: MatrixFactorization) -> SubmoduleOracle:
    """Groebner-based membership in span(columns of phi, f*e_1..f*e_4) over Q[x,y,z]."""
    P = mf.phi.polys()
    cols = [FreeModuleElem(tuple(P[i][j] for i in range(4))) for j in range(4)]
    cols += [FreeModuleElem.unit(i, 4, mf.ring.f) for i in range(4)]
    return SubmoduleOracle(cols)
