import math

import numpy as np
import pytest

from conftest import random_admissible_partition, random_family
from lsplines.basis import build_basis
from lsplines.gram import (assemble, gram_for, inner_product, inverse_column,
                           quad_inner_product, solve)
from lsplines.operators import ExpGeneral, ExpSym, Linear, Trig
from lsplines.partition import make_partition, uniform


def test_linear_mass_matrix_entries():
    part = uniform(0, 1, 3)
    # 2h/3 and h/6 with h = 0.5
    assert inner_product(Linear(), part, 1, 1) == pytest.approx(1 / 3)
    assert inner_product(Linear(), part, 0, 1) == pytest.approx(1 / 12)
    assert inner_product(Linear(), part, 0, 2) == 0.0


def test_trig_diagonal_closed_form():
    part = uniform(0, math.pi / 2, 2)
    got = inner_product(Trig(1.0), part, 1, 1)  # <up, up> on one interval
    assert got == pytest.approx(math.pi / 4, abs=1e-14)
    assert got == pytest.approx(0.7853981633974483)


def test_exp_sym_off_diagonal_frozen_value():
    # int_0^1 sinh(u) sinh(1-u) du / sinh(1)^2, frozen from an independent
    # high-precision quadrature
    part = uniform(0, 1, 2)
    got = inner_product(ExpSym(1.0), part, 0, 1)
    assert got == pytest.approx(0.13318369960497631, abs=1e-15)


def test_quad_oracle_examples():
    part = uniform(0, 1, 3)
    assert quad_inner_product(Linear(), part, 1, 1) == pytest.approx(1 / 3, rel=1e-12)
    assert quad_inner_product(Linear(), part, 0, 2) == 0.0


def test_analytic_vs_quadrature_random(rng):
    for _ in range(60):
        fam = random_family(rng)
        part = random_admissible_partition(rng, fam, int(rng.integers(2, 7)),
                                           gap_lo=1e-6, gap_hi=50.0)
        i = int(rng.integers(0, part.n))
        j = min(i + int(rng.integers(0, 2)), part.n - 1)
        a = inner_product(fam, part, i, j)
        q = quad_inner_product(fam, part, i, j)
        assert abs(a - q) <= 1e-10 * (1 + abs(q))


def test_assemble_linear_example():
    basis = build_basis(Linear(), uniform(0, 1, 3))
    gs = assemble(basis)
    h = 0.5
    assert np.allclose(gs.d, [h / 3, 2 * h / 3, h / 3])
    assert np.allclose(gs.e, [h / 6, h / 6])
    assert np.all(gs.pivots > 0)


def test_assemble_two_ramps():
    basis = build_basis(ExpGeneral(2.0, -1.0), uniform(0, 1, 2))
    gs = assemble(basis)
    fam = basis.family
    iuu, iud, idd = (float(v) for v in fam.gram_cells(1.0))
    assert gs.d[0] == pytest.approx(idd)
    assert gs.d[1] == pytest.approx(iuu)
    assert gs.e[0] == pytest.approx(iud)


def test_positive_definite_on_wide_trig(rng):
    lam = 1.0
    for _ in range(10):
        part = random_admissible_partition(rng, Trig(lam), 8, gap_lo=0.5,
                                           gap_hi=3.0)
        gs = assemble(build_basis(Trig(lam), part))
        assert np.all(gs.pivots > 0)
        assert lam * part.diameter < math.pi


def test_symmetry_of_adjacent_entries(rng):
    for _ in range(20):
        fam = random_family(rng, lam_lo=1e-3, lam_hi=10.0)
        part = random_admissible_partition(rng, fam, 6)
        for i in range(part.n - 1):
            assert inner_product(fam, part, i, i + 1) == inner_product(fam, part, i + 1, i)


def test_solve_basics(rng):
    fam = ExpSym(1.0)
    part = random_admissible_partition(rng, fam, 9)
    gs = assemble(build_basis(fam, part))
    assert np.all(solve(gs, np.zeros(9)) == 0.0)
    for k in (0, 4, 8):
        ek = np.zeros(9)
        ek[k] = 1.0
        x = solve(gs, gs.matvec(ek))
        assert np.max(np.abs(x - ek)) <= 1e-10


def test_solve_residual_on_extreme_mesh(rng):
    gaps = 10.0 ** rng.uniform(-6, 0, size=30)
    part = make_partition(np.concatenate([[0], np.cumsum(gaps)]))
    gs = assemble(build_basis(Linear(), part))
    rhs = rng.standard_normal(31)
    x = solve(gs, rhs)
    assert np.max(np.abs(gs.matvec(x) - rhs)) <= 1e-10 * np.max(np.abs(rhs))


def test_inverse_column_against_dense(rng):
    for _ in range(15):
        fam = random_family(rng, lam_lo=1e-3, lam_hi=5.0)
        n = int(rng.integers(2, 9))
        part = random_admissible_partition(rng, fam, n, gap_lo=0.1, gap_hi=2.0)
        gs = assemble(build_basis(fam, part))
        dense_inv = np.linalg.inv(gs.dense())
        for j in range(n):
            col = inverse_column(gs, j)
            assert np.max(np.abs(col - dense_inv[:, j])) <= 1e-12 * np.max(np.abs(col))


def test_inverse_sign_alternation(rng):
    fam = Linear()
    part = random_admissible_partition(rng, fam, 7, gap_lo=0.2, gap_hi=1.5)
    gs = assemble(build_basis(fam, part))
    for j in range(7):
        col = inverse_column(gs, j)
        signs = np.sign(col)
        assert np.all(signs[:-1] * signs[1:] < 0)


def test_lambda_to_zero_consistency():
    part = uniform(0, 1, 11)
    lin = assemble(build_basis(Linear(), part))
    for fam in (ExpSym(1e-4), Trig(1e-4)):
        gs = assemble(build_basis(fam, part))
        assert np.max(np.abs(gs.d - lin.d)) <= 1e-6
        assert np.max(np.abs(gs.e - lin.e)) <= 1e-6


def test_scaling_law(rng):
    base = random_admissible_partition(rng, Linear(), 6, gap_lo=0.1, gap_hi=1.0)
    for sigma in (0.1, 10.0):
        scaled = make_partition(np.asarray(base.knots) * sigma)
        for fam, fam_s in [(ExpSym(2.0), ExpSym(2.0 / sigma)),
                           (Trig(1.2), Trig(1.2 / sigma)),
                           (ExpGeneral(1.5, -0.6), ExpGeneral(1.5 / sigma, -0.6 / sigma)),
                           (Linear(), Linear())]:
            g1 = assemble(build_basis(fam, base))
            g2 = assemble(build_basis(fam_s, scaled))
            assert np.allclose(g2.d, sigma * g1.d, rtol=1e-12)
            assert np.allclose(g2.e, sigma * g1.e, rtol=1e-12)
