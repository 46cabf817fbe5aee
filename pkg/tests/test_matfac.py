import random

import pytest
from hypothesis import given, settings, strategies as st

from lrlab.exactring import HypersurfaceRing, Poly, RingMismatchError, parse_poly
from lrlab.grobner import FreeModuleElem
from lrlab.matfac import (RingMatrix, brieskorn_factorization, build_phi, column_in_image,
                          image_oracle, mf_check, mf_defects, operator_zero_on_W)

GRID = [(m, n, k, l) for m in range(2, 7) for n in range(2, 7)
        for k in range(1, m + 1) for l in range(1, n + 1)]


def test_phi_example():
    R = HypersurfaceRing(3, 2)
    assert str(build_phi(R, 1, 1)) == "[[x^2, y, 0, z], [y, -x, z, 0], [z, 0, -y, -x], [0, z, x^2, -y]]"


def test_psi_example():
    R = HypersurfaceRing(2, 2)
    mf = brieskorn_factorization(R, 1, 1)
    assert str(mf.psi) == "[[x, y, z, 0], [y, -x, 0, z], [0, z, -y, x], [z, 0, -x, -y]]"


@pytest.mark.parametrize("m,n,k,l", [(2, 2, 3, 1), (2, 2, 0, 1), (3, 3, 1, 4)])
def test_out_of_range(m, n, k, l):
    with pytest.raises(ValueError):
        brieskorn_factorization(HypersurfaceRing(m, n), k, l)


def test_whole_grid_factorizes():
    assert all(mf_check(brieskorn_factorization(HypersurfaceRing(m, n), k, l))
               for m, n, k, l in GRID)


def test_perturbation_is_localized():
    R = HypersurfaceRing(3, 3)
    mf = brieskorn_factorization(R, 2, 1)
    rows = [list(r) for r in mf.phi.rows]
    rows[1][2] = rows[1][2] + R("x")
    bad = type(mf)(R, 2, 1, RingMatrix(R, rows), mf.psi)
    defects = mf_defects(bad)
    assert defects
    # phi*psi picks up row 2 only, psi*phi picks up column 3 only
    assert {d["row"] for d in defects if d["product"] == "phi*psi"} == {2}
    assert {d["col"] for d in defects if d["product"] == "psi*phi"} == {3}


def test_matrix_arithmetic():
    R = HypersurfaceRing(2, 2)
    I = RingMatrix.identity(R)
    mf = brieskorn_factorization(R, 1, 1)
    assert (mf.phi * mf.psi).is_zero()
    assert (mf.phi - mf.phi).is_zero()
    assert I.trace() == R(4)
    assert (2 * I)[0, 0] == R(2)
    assert RingMatrix.diag(R, [1, 2, 3, 4]).trace() == R(10)


def test_ring_mismatch():
    with pytest.raises(RingMismatchError):
        RingMatrix.identity(HypersurfaceRing(2, 2)) + RingMatrix.identity(HypersurfaceRing(2, 3))


class TestImage:
    def test_columns_in_image(self):
        mf = brieskorn_factorization(HypersurfaceRing(3, 2), 1, 1)
        for j in range(4):
            assert column_in_image(mf.phi.column(j), mf)

    def test_unit_vector_not_in_image(self):
        mf = brieskorn_factorization(HypersurfaceRing(3, 2), 1, 1)
        assert not column_in_image([1, 0, 0, 0], mf)

    def test_f_multiple(self):
        R = HypersurfaceRing(4, 3)
        mf = brieskorn_factorization(R, 2, 2)
        assert column_in_image([R.f, 0, 0, 0], mf)

    def test_rank_check(self):
        mf = brieskorn_factorization(HypersurfaceRing(2, 2), 1, 1)
        with pytest.raises(ValueError):
            column_in_image([0, 0, 0], mf)

    def test_operator_zero(self):
        R = HypersurfaceRing(3, 3)
        mf = brieskorn_factorization(R, 1, 2)
        assert operator_zero_on_W(mf.phi * RingMatrix.diag(R, ["x", "y", "z", 1]), mf)
        assert not operator_zero_on_W(RingMatrix.identity(R), mf)

    @given(st.integers(0, len(GRID) - 1), st.lists(st.sampled_from(["0", "1", "x", "y", "z", "x*y", "2*y*z"]),
                                                   min_size=4, max_size=4))
    @settings(max_examples=40, deadline=None)
    def test_image_closed_under_phi(self, idx, coeffs):
        m, n, k, l = GRID[idx]
        R = HypersurfaceRing(m, n)
        mf = brieskorn_factorization(R, k, l)
        v = mf.phi.apply([R(c) for c in coeffs])
        assert column_in_image(v, mf)

    @pytest.mark.parametrize("params", [(2, 2, 1, 1), (3, 2, 2, 1), (3, 3, 3, 2)])
    def test_agrees_with_groebner_oracle(self, params):
        m, n, k, l = params
        R = HypersurfaceRing(m, n)
        mf = brieskorn_factorization(R, k, l)
        oracle = image_oracle(mf)
        rng = random.Random(sum(params))
        pool = ["0", "1", "x", "y", "z", "x*z", "y^2", "-3*x*y", "1/2*z"]
        for trial in range(60):
            u = [R(rng.choice(pool)) for _ in range(4)]
            v = list(mf.phi.apply(u))
            if trial % 2:
                i = rng.randrange(4)
                v[i] = v[i] + R(rng.choice(pool[1:]))
            vec = FreeModuleElem(tuple(e.repr for e in v))
            assert column_in_image(v, mf) == oracle.contains(vec)
