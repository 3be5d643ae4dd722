"""Hat-normalized basis of the second-order L-spline space on a partition.

With n knots the space has dimension n and a cardinal basis B_i with
B_i(t_j) = delta_ij: B_i climbs the up-ramp of the interval left of t_i and
descends the down-ramp of the interval right of it.  The boundary splines are
half-hats.  Coefficients of a spline in this basis are exactly its knot values.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import OutOfDomain
from .partition import Partition


@dataclass(frozen=True)
class LBSplineBasis:
    family: object
    partition: Partition

    @property
    def n(self) -> int:
        return self.partition.n

    @cached_property
    def knots(self) -> np.ndarray:
        return self.partition.knots_array

    @cached_property
    def lengths(self) -> np.ndarray:
        return self.partition.lengths

    def interval_of(self, x):
        """Index k with x in [t_k, t_{k+1}]; knots resolve to the right interval."""
        idx = np.searchsorted(self.knots, x, side="right") - 1
        return np.clip(idx, 0, self.n - 2)

    def check_domain(self, x) -> None:
        x = np.asarray(x, dtype=float)
        if np.any(x < self.knots[0]) or np.any(x > self.knots[-1]):
            raise OutOfDomain(
                f"evaluation outside [{self.knots[0]:.6g}, {self.knots[-1]:.6g}]"
            )


def build_basis(family, partition: Partition) -> LBSplineBasis:
    """Validate interval lengths for the family and return the basis."""
    family.validate_lengths(partition.lengths)
    return LBSplineBasis(family, partition)


def eval_basis(basis: LBSplineBasis, i: int, x):
    """B_i(x); exactly zero outside [t_{i-1}, t_{i+1}]."""
    if not 0 <= i < basis.n:
        raise IndexError(f"basis index {i} out of range [0, {basis.n})")
    basis.check_domain(x)
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    k = basis.interval_of(x)
    t, h = basis.knots, basis.lengths
    u = x - t[k]
    fam = basis.family
    out = np.zeros_like(x)
    m_up = k == i - 1
    if np.any(m_up):
        out[m_up] = fam.up(u[m_up], h[k[m_up]])
    m_dn = k == i
    if np.any(m_dn):
        out[m_dn] = fam.down(u[m_dn], h[k[m_dn]])
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class SplineVector:
    """Spline as coefficients in the cardinal basis: s(t_i) = c_i."""

    basis: LBSplineBasis
    coeffs: tuple[float, ...]

    @cached_property
    def coeffs_array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=float)

    def __call__(self, x):
        return eval_spline(self, x)

    def to_json(self) -> dict:
        return {
            "knots": list(self.basis.partition.knots),
            "family": self.basis.family.to_json(),
            "coeffs": [float(c) for c in self.coeffs],
        }


def make_spline(basis: LBSplineBasis, coeffs) -> SplineVector:
    c = tuple(float(v) for v in coeffs)
    if len(c) != basis.n:
        raise ValueError(f"need {basis.n} coefficients, got {len(c)}")
    return SplineVector(basis, c)


def eval_spline(sv: SplineVector, x):
    """s(x) from the two basis splines active at x."""
    basis = sv.basis
    basis.check_domain(x)
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    k = basis.interval_of(x)
    t, h = basis.knots, basis.lengths
    u = x - t[k]
    c = sv.coeffs_array
    fam = basis.family
    out = c[k] * fam.down(u, h[k]) + c[k + 1] * fam.up(u, h[k])
    return float(out[0]) if scalar else out


def spline_sup(sv: SplineVector) -> float:
    """Exact sup-norm of the spline (per-interval closed-form amplitude)."""
    basis = sv.basis
    c = sv.coeffs_array
    vals = basis.family.sup_combination(c[:-1], c[1:], basis.lengths)
    return float(np.max(vals))
