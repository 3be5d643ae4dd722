"""Gram matrix of the hat basis and its tridiagonal factorization.

Entries <B_i, B_j> are assembled from the per-interval closed forms in
`operators`; adjacent supports make the matrix symmetric tridiagonal and the
basis's linear independence makes it positive definite.  Systems are solved
by an LDL^T-style factorization without pivoting (unconditionally stable for
SPD tridiagonal matrices) plus one step of iterative refinement, which keeps
residuals near machine level even on meshes with 6-decade gap ratios.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .basis import LBSplineBasis, build_basis
from .errors import NotPositiveDefinite
from .partition import Partition
from .quadrature import adaptive_integrate


@dataclass
class GramSystem:
    """Tridiagonal Gram matrix (diag d, off-diag e) with its factorization.

    Treat as immutable after assembly; `_ginv` is a lazily filled cache of
    G^{-1} columns for the kernel machinery.
    """

    d: np.ndarray
    e: np.ndarray
    subdiag_mult: np.ndarray   # l_i of the LDL^T factorization
    pivots: np.ndarray
    _ginv: np.ndarray | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return len(self.d)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = self.d.reshape(-1, *([1] * (x.ndim - 1))) * x
        y[:-1] += self.e.reshape(-1, *([1] * (x.ndim - 1))) * x[1:]
        y[1:] += self.e.reshape(-1, *([1] * (x.ndim - 1))) * x[:-1]
        return y

    def dense(self) -> np.ndarray:
        g = np.diag(self.d)
        idx = np.arange(self.n - 1)
        g[idx, idx + 1] = self.e
        g[idx + 1, idx] = self.e
        return g

    def ginv(self) -> np.ndarray:
        """All columns of G^{-1} (cached; symmetric)."""
        if self._ginv is None:
            self._ginv = solve(self, np.eye(self.n))
        return self._ginv


def inner_product(family, partition: Partition, i: int, j: int) -> float:
    """<B_i, B_j> by closed form; exact 0 for |i - j| >= 2."""
    n = partition.n
    for k in (i, j):
        if not 0 <= k < n:
            raise IndexError(f"basis index {k} out of range [0, {n})")
    if abs(i - j) >= 2:
        return 0.0
    h = partition.lengths
    fam = family
    fam.validate_lengths(h)
    if i == j:
        total = 0.0
        if i > 0:
            total += float(fam.gram_cells(h[i - 1])[0])
        if i < n - 1:
            total += float(fam.gram_cells(h[i])[2])
        return total
    k = min(i, j)
    return float(fam.gram_cells(h[k])[1])


def quad_inner_product(family, partition: Partition, i: int, j: int,
                       rel_tol: float = 1e-12) -> float:
    """Same integral via adaptive quadrature; the independent test oracle."""
    n = partition.n
    if abs(i - j) >= 2:
        return 0.0
    t = partition.knots_array
    h = partition.lengths
    fam = family
    fam.validate_lengths(h)
    total = 0.0
    if i == j:
        if i > 0:
            hh = h[i - 1]
            total += adaptive_integrate(lambda u: fam.up(u, hh) ** 2, 0.0, float(hh),
                                        rel_tol=rel_tol)
        if i < n - 1:
            hh = h[i]
            total += adaptive_integrate(lambda u: fam.down(u, hh) ** 2, 0.0, float(hh),
                                        rel_tol=rel_tol)
        return float(total)
    k = min(i, j)
    hh = h[k]
    return float(adaptive_integrate(lambda u: fam.down(u, hh) * fam.up(u, hh),
                                    0.0, float(hh), rel_tol=rel_tol))


def assemble(basis: LBSplineBasis) -> GramSystem:
    """Assemble and factor the Gram system; asserts positive definiteness."""
    h = basis.lengths
    iuu, iud, idd = basis.family.gram_cells(h)
    n = basis.n
    d = np.zeros(n)
    d[0] = idd[0]
    d[-1] = iuu[-1]
    if n > 2:
        d[1:-1] = iuu[:-1] + idd[1:]
    e = np.asarray(iud, dtype=float).copy()

    piv = np.empty(n)
    mult = np.empty(n - 1)
    piv[0] = d[0]
    for i in range(n - 1):
        if not piv[i] > 0:
            raise NotPositiveDefinite(f"pivot {i} is {piv[i]:.3g}")
        mult[i] = e[i] / piv[i]
        piv[i + 1] = d[i + 1] - e[i] * mult[i]
    if not piv[-1] > 0:
        raise NotPositiveDefinite(f"pivot {n - 1} is {piv[-1]:.3g}")
    return GramSystem(d=d, e=e, subdiag_mult=mult, pivots=piv)


def gram_for(family, partition: Partition) -> tuple[LBSplineBasis, GramSystem]:
    """Convenience: build the basis and its Gram system in one call."""
    basis = build_basis(family, partition)
    return basis, assemble(basis)


def _substitute(gs: GramSystem, rhs: np.ndarray) -> np.ndarray:
    y = np.array(rhs, dtype=float, copy=True)
    mult = gs.subdiag_mult
    for i in range(1, gs.n):
        y[i] -= mult[i - 1] * y[i - 1]
    y /= gs.pivots.reshape(-1, *([1] * (y.ndim - 1)))
    for i in range(gs.n - 2, -1, -1):
        y[i] -= mult[i] * y[i + 1]
    return y


def solve(gs: GramSystem, rhs) -> np.ndarray:
    """x with G x = rhs (rhs may be a matrix of columns); one refinement pass."""
    rhs = np.asarray(rhs, dtype=float)
    x = _substitute(gs, rhs)
    x += _substitute(gs, rhs - gs.matvec(x))
    return x


def inverse_column(gs: GramSystem, j: int) -> np.ndarray:
    """Column j of G^{-1}."""
    if not 0 <= j < gs.n:
        raise IndexError(f"column {j} out of range [0, {gs.n})")
    rhs = np.zeros(gs.n)
    rhs[j] = 1.0
    return solve(gs, rhs)
