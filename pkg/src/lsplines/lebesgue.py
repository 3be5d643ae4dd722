"""Exact sup-norm of the projector via its integral kernel.

P_S f(x) = int K(x,y) f(y) dy with K(x,y) = sum_ij B_i(x) (G^{-1})_ij B_j(y),
so the operator norm from C[a,b] to C[a,b] is the max over x of the Lebesgue
function Lambda(x) = int |K(x,.)| dy.  On each mesh interval K(x,.) is a
two-ramp kernel element with at most one sign change (disconjugacy), so the
integral of |K| splits at a closed-form root and uses the exact ramp
antiderivatives; no |.| quadrature error enters.

The argmax search samples 33 Chebyshev points per interval plus all knots and
then golden-sections the best candidates down to 1e-10*(b-a); a dense-grid
oracle covers the same quantities independently for tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import LBSplineBasis
from .gram import GramSystem
from .projector import TargetFunction

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class NormReport:
    """Projector norm with its witness data."""

    norm: float
    xstar: float
    method: str
    sample_x: np.ndarray
    sample_vals: np.ndarray
    kernel_roots: tuple[float, ...]

    def to_json(self) -> dict:
        return {
            "norm": self.norm,
            "xstar": self.xstar,
            "method": self.method,
            "kernel_roots": list(self.kernel_roots),
            "samples": {
                "x": [float(v) for v in self.sample_x],
                "lebesgue": [float(v) for v in self.sample_vals],
            },
        }


class _Engine:
    """Immutable precomputation shared by every Lambda evaluation."""

    def __init__(self, basis: LBSplineBasis, gs: GramSystem):
        self.basis = basis
        self.fam = basis.family
        self.t = basis.knots
        self.h = basis.lengths
        self.n = basis.n
        self.ginv = gs.ginv()
        self.iup_h = np.atleast_1d(self.fam.iup(self.h, self.h))
        self.idown_h = np.atleast_1d(self.fam.idown(self.h, self.h))

    def weights(self, x: np.ndarray) -> np.ndarray:
        """Rows w(x) = G^{-1} B(x): K(x, y) = sum_j w_j(x) B_j(y)."""
        k = self.basis.interval_of(x)
        u = x - self.t[k]
        bdn = self.fam.down(u, self.h[k])
        bup = self.fam.up(u, self.h[k])
        return bdn[:, None] * self.ginv[k] + bup[:, None] * self.ginv[k + 1]

    def lebesgue(self, x: np.ndarray) -> np.ndarray:
        self.basis.check_domain(x)
        x = np.atleast_1d(np.asarray(x, dtype=float))
        w = self.weights(x)
        p = w[:, :-1]
        q = w[:, 1:]
        hb = np.broadcast_to(self.h, p.shape)
        total = p * self.idown_h + q * self.iup_h
        with np.errstate(divide="ignore", invalid="ignore"):
            has_root = p * q < 0
            r = np.clip(self.fam.psi_root(p, q, hb), 0.0, hb)
            first = p * self.fam.idown(r, hb) + q * self.fam.iup(r, hb)
            vals = np.where(has_root,
                            np.abs(first) + np.abs(total - first),
                            np.abs(total))
        return vals.sum(axis=1)

    def kernel_roots(self, x: float) -> np.ndarray:
        """Sign-change locations of K(x, .), at most one per interval."""
        w = self.weights(np.asarray([x], dtype=float))[0]
        p, q = w[:-1], w[1:]
        mask = p * q < 0
        if not np.any(mask):
            return np.empty(0)
        with np.errstate(divide="ignore", invalid="ignore"):
            r = self.fam.psi_root(p[mask], q[mask], self.h[mask])
        roots = self.t[:-1][mask] + np.clip(r, 0.0, self.h[mask])
        return np.sort(roots)


def _get_engine(basis: LBSplineBasis, gs: GramSystem) -> _Engine:
    eng = getattr(gs, "_engine", None)
    if eng is None or eng.basis is not basis:
        eng = _Engine(basis, gs)
        gs._engine = eng
    return eng


def kernel_K(basis: LBSplineBasis, gs: GramSystem, x: float, y):
    """Kernel value K(x, y); vectorized over y."""
    eng = _get_engine(basis, gs)
    basis.check_domain(x)
    basis.check_domain(y)
    w = eng.weights(np.asarray([x], dtype=float))[0]
    y = np.asarray(y, dtype=float)
    scalar = y.ndim == 0
    y = np.atleast_1d(y)
    k = basis.interval_of(y)
    u = y - eng.t[k]
    out = w[k] * eng.fam.down(u, eng.h[k]) + w[k + 1] * eng.fam.up(u, eng.h[k])
    return float(out[0]) if scalar else out


def lebesgue_function(basis: LBSplineBasis, gs: GramSystem, x):
    """Lambda(x) = int |K(x, .)|; scalar or vectorized over x."""
    eng = _get_engine(basis, gs)
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        return float(eng.lebesgue(np.atleast_1d(x))[0])
    return eng.lebesgue(x)


def lebesgue_function_grid(basis: LBSplineBasis, gs: GramSystem, x: float,
                           pts_per_interval: int = 4096) -> float:
    """Independent Lambda oracle: trapezoid with root-aligned subdivision."""
    eng = _get_engine(basis, gs)
    basis.check_domain(x)
    w = eng.weights(np.asarray([x], dtype=float))[0]
    total = 0.0
    for k in range(basis.n - 1):
        a, b = eng.t[k], eng.t[k + 1]
        hk = eng.h[k]

        def psi(y):
            u = np.asarray(y, dtype=float) - a
            return w[k] * eng.fam.down(u, hk) + w[k + 1] * eng.fam.up(u, hk)

        grid = np.linspace(a, b, pts_per_interval + 1)
        vals = psi(grid)
        sign_flip = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        cuts = [a]
        for idx in sign_flip:
            lo, hi = grid[idx], grid[idx + 1]
            flo = vals[idx]
            for _ in range(64):
                mid = 0.5 * (lo + hi)
                fm = psi(mid)
                if (fm > 0) == (flo > 0):
                    lo, flo = mid, fm
                else:
                    hi = mid
            cuts.append(0.5 * (lo + hi))
        cuts.append(b)
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            if hi <= lo:
                continue
            npts = max(int(pts_per_interval * (hi - lo) / (b - a)), 64)
            yy = np.linspace(lo, hi, npts + 1)
            trap = getattr(np, "trapezoid", np.trapz)
            total += float(trap(np.abs(psi(yy)), yy))
    return total


def _golden_max(fun_batch, lo, hi, tol: float):
    """Golden-section maximize several brackets in lock-step.

    fun_batch maps an array of points (one per bracket) to their values;
    each iteration costs one batched evaluation.
    """
    lo = np.asarray(lo, dtype=float).copy()
    hi = np.asarray(hi, dtype=float).copy()
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1 = fun_batch(x1)
    f2 = fun_batch(x2)
    while np.max(hi - lo) > tol:
        left = f1 >= f2
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
        x_keep = np.where(left, x1, x2)
        f_keep = np.where(left, f1, f2)
        probe = np.where(left, hi - _INVPHI * (hi - lo), lo + _INVPHI * (hi - lo))
        f_new = fun_batch(probe)
        x1 = np.where(left, probe, x_keep)
        f1 = np.where(left, f_new, f_keep)
        x2 = np.where(left, x_keep, probe)
        f2 = np.where(left, f_keep, f_new)
    xm = 0.5 * (lo + hi)
    return xm, fun_batch(xm)


def projector_norm(basis: LBSplineBasis, gs: GramSystem, method: str = "analytic",
                   cheb_per_interval: int = 33, refine_top: int = 4) -> NormReport:
    """Maximize the Lebesgue function over [a, b].

    Per interval, Chebyshev-placed samples plus the knots seed the search;
    golden-section refinement tightens the best candidates to 1e-10*(b-a).
    """
    eng = _get_engine(basis, gs)
    t, h, n = eng.t, eng.h, basis.n
    span = t[-1] - t[0]

    if method == "grid-oracle":
        return _projector_norm_grid(basis, gs)
    if method != "analytic":
        raise ValueError(f"unknown method {method!r}")

    j = np.arange(cheb_per_interval)
    cheb = np.sort(np.cos((2 * j + 1) * math.pi / (2 * cheb_per_interval)))  # (-1, 1)
    mids = 0.5 * (t[:-1] + t[1:])
    rads = 0.5 * h
    # per-interval sample rows bracketed by the knots themselves
    rows = np.empty((n - 1, cheb_per_interval + 2))
    rows[:, 0] = t[:-1]
    rows[:, -1] = t[1:]
    rows[:, 1:-1] = mids[:, None] + rads[:, None] * cheb[None, :]
    xs = rows.ravel()
    vals = eng.lebesgue(xs).reshape(rows.shape)

    order = np.argsort(vals.max(axis=1))[::-1][:refine_top]
    los, his = [], []
    for k in order:
        ib = int(np.argmax(vals[k]))
        los.append(rows[k, max(ib - 1, 0)])
        his.append(rows[k, min(ib + 1, rows.shape[1] - 1)])
    xr, fr = _golden_max(lambda xa: eng.lebesgue(xa), np.array(los), np.array(his),
                         1e-10 * span)

    candidates_x = np.concatenate([xr, xs])
    candidates_v = np.concatenate([fr, vals.ravel()])
    ibest = int(np.argmax(candidates_v))
    xstar = float(candidates_x[ibest])
    norm = float(candidates_v[ibest])
    roots = eng.kernel_roots(xstar)
    grid_x, keep = np.unique(xs, return_index=True)
    return NormReport(norm=norm, xstar=xstar, method="analytic",
                      sample_x=grid_x, sample_vals=vals.ravel()[keep],
                      kernel_roots=tuple(float(r) for r in roots))


def _projector_norm_grid(basis: LBSplineBasis, gs: GramSystem,
                         x_per_interval: int = 128,
                         pts_per_interval: int = 2048) -> NormReport:
    """Brute-force norm: dense x-grid of grid-oracle Lambda values."""
    eng = _get_engine(basis, gs)
    t = eng.t
    xs = np.unique(np.concatenate([
        np.linspace(t[k], t[k + 1], x_per_interval) for k in range(basis.n - 1)
    ]))
    vals = np.array([lebesgue_function_grid(basis, gs, float(x), pts_per_interval)
                     for x in xs])
    ibest = int(np.argmax(vals))
    xstar = float(xs[ibest])
    return NormReport(norm=float(vals[ibest]), xstar=xstar, method="grid-oracle",
                      sample_x=xs, sample_vals=vals,
                      kernel_roots=tuple(float(r) for r in eng.kernel_roots(xstar)))


def extremal_witness(basis: LBSplineBasis, gs: GramSystem, mollify_width: float,
                     xstar: float | None = None,
                     report: NormReport | None = None) -> TargetFunction:
    """Mollified sign of K(x*, .): the norm's constructive lower-bound input.

    ||f||_inf = 1 and P_S f(x*) >= Lambda(x*) - O(width); width -> 0 recovers
    the Lebesgue value exactly.
    """
    if xstar is None:
        if report is None:
            raise ValueError("need xstar or a NormReport")
        xstar = report.xstar
    eng = _get_engine(basis, gs)
    roots = eng.kernel_roots(float(xstar))
    width = float(mollify_width)

    def f(y):
        y = np.asarray(y, dtype=float)
        s = np.sign(kernel_K(basis, gs, float(xstar), y))
        if roots.size:
            dist = np.min(np.abs(y[..., None] - roots[None, :]), axis=-1)
            return s * np.minimum(1.0, dist / width)
        return s

    breaks = []
    for r in roots:
        breaks.extend((r - width, r + width, r))
    breaks = tuple(b for b in sorted(breaks)
                   if basis.knots[0] < b < basis.knots[-1])
    return TargetFunction(f, tag=f"signature(x*={xstar:.6g}, w={width:.3g})",
                          sup_norm=1.0, breakpoints=breaks)


def witness_catalog(basis: LBSplineBasis, gs: GramSystem, report: NormReport,
                    widths=(1e-3, 1e-5)) -> list[TargetFunction]:
    """Extremal witnesses aimed at x* and at every knot."""
    span = basis.knots[-1] - basis.knots[0]
    targets = [float(report.xstar)] + [float(t) for t in basis.knots]
    out = []
    for w in widths:
        for x0 in targets:
            out.append(extremal_witness(basis, gs, w * span, xstar=x0))
    return out
