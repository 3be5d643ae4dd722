import math

import numpy as np
import pytest

from conftest import random_admissible_partition, random_family
from lsplines.basis import (build_basis, eval_basis, eval_spline, make_spline,
                            spline_sup)
from lsplines.errors import OutOfDomain, TrigSingularInterval
from lsplines.operators import ExpSym, Linear, Trig
from lsplines.partition import make_partition, uniform


def test_linear_hat():
    basis = build_basis(Linear(), uniform(0, 1, 3))
    assert eval_basis(basis, 1, 0.5) == pytest.approx(1.0)
    assert eval_basis(basis, 1, 0.25) == pytest.approx(0.5)


def test_trig_hat_values():
    basis = build_basis(Trig(1.0), make_partition([0, math.pi / 2, math.pi * 0.9]))
    assert eval_basis(basis, 1, math.pi / 2) == pytest.approx(1.0)
    assert eval_basis(basis, 1, 0.0) == 0.0
    assert eval_basis(basis, 1, math.pi * 0.9) == 0.0
    want = math.sin(math.pi / 4) / math.sin(math.pi / 2)
    assert eval_basis(basis, 1, math.pi / 4) == pytest.approx(want, abs=1e-14)


def test_trig_singular_interval_propagates_index():
    with pytest.raises(TrigSingularInterval) as exc:
        build_basis(Trig(1.0), make_partition([0, 1, 1 + math.pi]))
    assert exc.value.interval_index == 1


def test_exp_sym_half_hat():
    basis = build_basis(ExpSym(2.0), uniform(0, 1, 2))
    want = math.sinh(1.0) / math.sinh(2.0)
    assert eval_basis(basis, 1, 0.5) == pytest.approx(want, abs=1e-15)
    assert eval_basis(basis, 1, 0.5) == pytest.approx(0.3240271368319427)


def test_cardinality_and_support(rng):
    for _ in range(25):
        fam = random_family(rng, lam_lo=1e-4, lam_hi=8.0)
        part = random_admissible_partition(rng, fam, int(rng.integers(2, 9)))
        basis = build_basis(fam, part)
        t = basis.knots
        for i in range(basis.n):
            for j in range(basis.n):
                assert eval_basis(basis, i, t[j]) == pytest.approx(
                    1.0 if i == j else 0.0, abs=1e-13)
            # outside the support the spline is exactly zero
            for x in rng.uniform(part.a, part.b, size=6):
                if not (t[max(i - 1, 0)] <= x <= t[min(i + 1, basis.n - 1)]):
                    assert eval_basis(basis, i, float(x)) == 0.0


def test_continuity_at_interior_knots(rng):
    for _ in range(20):
        fam = random_family(rng, lam_lo=1e-4, lam_hi=8.0)
        part = random_admissible_partition(rng, fam, int(rng.integers(3, 9)))
        basis = build_basis(fam, part)
        t, h = basis.knots, basis.lengths
        for k in range(1, basis.n - 1):
            for i in range(basis.n):
                left = (fam.up(h[k - 1], h[k - 1]) if i == k
                        else fam.down(h[k - 1], h[k - 1]) if i == k - 1 else 0.0)
                right = (fam.down(0.0, h[k]) if i == k
                         else fam.up(0.0, h[k]) if i == k + 1 else 0.0)
                assert abs(float(left) - float(right)) <= 1e-12


def test_partition_of_unity_linear_only(rng):
    part = random_admissible_partition(rng, Linear(), 7)
    basis = build_basis(Linear(), part)
    xs = rng.uniform(part.a, part.b, 40)
    total = sum(eval_basis(basis, i, xs) for i in range(basis.n))
    assert np.max(np.abs(total - 1.0)) <= 1e-12
    # for other families the sum interpolates 1 at knots but is not 1 inside
    fam = Trig(1.0)
    basis2 = build_basis(fam, make_partition([0, 1.2, 2.4]))
    x = 0.6
    total2 = sum(eval_basis(basis2, i, x) for i in range(3))
    interp = fam.down(0.6, 1.2) + fam.up(0.6, 1.2)  # kernel interpolant of 1
    assert total2 == pytest.approx(float(interp), abs=1e-13)
    assert abs(total2 - 1.0) > 1e-3


def test_trig_basis_sup_blowup():
    lam = 1.0
    part = make_partition([0, math.pi - 0.01, math.pi + 1])
    basis = build_basis(Trig(lam), part)
    xs = np.linspace(0, math.pi - 0.01, 30001)
    sup = float(np.max(eval_basis(basis, 1, xs)))
    assert sup == pytest.approx(1.0 / math.sin(math.pi - 0.01), rel=1e-5)
    sup0 = float(np.max(eval_basis(basis, 0, xs)))
    assert sup0 == pytest.approx(1.0 / math.sin(math.pi - 0.01), rel=1e-5)


def test_spline_eval_and_sup(rng):
    basis = build_basis(Linear(), uniform(0, 1, 3))
    sv = make_spline(basis, [0, 1, 0])
    assert eval_spline(sv, 0.125) == pytest.approx(0.25)
    assert spline_sup(sv) == pytest.approx(1.0)
    zero = make_spline(basis, [0, 0, 0])
    xs = rng.uniform(0, 1, 17)
    assert np.all(eval_spline(zero, xs) == 0.0)
    for i in range(3):
        e = np.zeros(3)
        e[i] = 1.0
        sv_i = make_spline(basis, e)
        assert eval_spline(sv_i, float(basis.knots[i])) == pytest.approx(1.0)


def test_spline_sup_matches_grid(rng):
    for _ in range(20):
        fam = random_family(rng, lam_lo=1e-3, lam_hi=5.0)
        part = random_admissible_partition(rng, fam, 6)
        basis = build_basis(fam, part)
        sv = make_spline(basis, rng.standard_normal(6))
        xs = np.linspace(part.a, part.b, 30001)
        grid = float(np.max(np.abs(eval_spline(sv, xs))))
        assert spline_sup(sv) >= grid - 1e-9
        assert spline_sup(sv) <= grid * (1 + 1e-4) + 1e-12


def test_out_of_domain():
    basis = build_basis(Linear(), uniform(0, 1, 3))
    with pytest.raises(OutOfDomain):
        eval_basis(basis, 0, -0.1)
    sv = make_spline(basis, [1, 2, 3])
    with pytest.raises(OutOfDomain):
        eval_spline(sv, 1.1)


def test_spline_json():
    basis = build_basis(ExpSym(1.5), uniform(0, 2, 3))
    sv = make_spline(basis, [1.0, -2.0, 0.5])
    obj = sv.to_json()
    assert obj["family"] == {"family": "exp_sym", "lambda": 1.5}
    assert obj["coeffs"] == [1.0, -2.0, 0.5]
    assert obj["knots"] == [0.0, 1.0, 2.0]
