"""L2-orthogonal projection onto the spline space.

P_S f is characterized by the normal equations <f - P_S f, B_i> = 0; the
coefficients are G^{-1} applied to the moment vector m_i = int f B_i.  The
checks in this module (orthogonality residual, perturbation optimality) give
the projector its own independent verification surface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import LBSplineBasis, SplineVector, eval_spline, make_spline
from .gram import GramSystem, solve
from .quadrature import adaptive_integrate


@dataclass(frozen=True)
class TargetFunction:
    """Function to project: vectorized evaluator plus quadrature hints."""

    fn: object
    tag: str
    sup_norm: float | None = None
    breakpoints: tuple[float, ...] = ()

    def __call__(self, x):
        return self.fn(np.asarray(x, dtype=float))


def moments(basis: LBSplineBasis, f, rel_tol: float = 1e-11,
            abs_tol: float = 0.0) -> np.ndarray:
    """m_i = int f B_i dx, one adaptive pass per interval for both active ramps.

    abs_tol is an absolute budget for the whole domain, allocated to the
    intervals by length; pass the roundoff level of f for difference targets.
    """
    t, h = basis.knots, basis.lengths
    span = t[-1] - t[0]
    fam = basis.family
    breaks = getattr(f, "breakpoints", ())
    m = np.zeros(basis.n)
    for k in range(basis.n - 1):
        hk = h[k]

        def pair(u):
            fx = np.asarray(f(t[k] + u), dtype=float)
            return np.stack([fx * fam.down(u, hk), fx * fam.up(u, hk)])

        cuts = [b - t[k] for b in breaks if t[k] < b < t[k + 1]]
        down_int, up_int = adaptive_integrate(pair, 0.0, float(hk), rel_tol=rel_tol,
                                              breakpoints=cuts,
                                              abs_tol=abs_tol * float(hk) / span)
        m[k] += down_int
        m[k + 1] += up_int
    return m


def project(basis: LBSplineBasis, gs: GramSystem, f) -> SplineVector:
    """Best L2 approximation of f from the spline space."""
    return make_spline(basis, solve(gs, moments(basis, f)))


def _target_scale(basis: LBSplineBasis, f, sv: SplineVector | None = None) -> float:
    """Probe of max(|f|, |s|, 1): the roundoff unit of difference integrands."""
    xs = np.linspace(float(basis.knots[0]), float(basis.knots[-1]), 257)
    scale = float(np.max(np.abs(np.asarray(f(xs), dtype=float))))
    if sv is not None:
        scale = max(scale, float(np.max(np.abs(eval_spline(sv, xs)))))
    return max(scale, 1.0)


def residual_orthogonality(basis: LBSplineBasis, gs: GramSystem, f) -> float:
    """max_i |<f - P_S f, B_i>| recomputed by quadrature (diagnostic)."""
    sv = project(basis, gs, f)
    breaks = getattr(f, "breakpoints", ())

    def g(x):
        return np.asarray(f(x), dtype=float) - eval_spline(sv, x)

    span = float(basis.knots[-1] - basis.knots[0])
    noise = 64.0 * np.finfo(float).eps * _target_scale(basis, f, sv) * span
    resid = moments(basis, TargetFunction(g, "residual", breakpoints=tuple(breaks)),
                    abs_tol=noise)
    return float(np.max(np.abs(resid)))


def l2_distance(basis: LBSplineBasis, f, sv: SplineVector,
                rel_tol: float = 1e-10) -> float:
    """||f - s||_2 by adaptive quadrature of the squared difference."""
    breaks = getattr(f, "breakpoints", ())

    def g2(x):
        d = np.asarray(f(x), dtype=float) - eval_spline(sv, x)
        return d * d

    a, b = float(basis.knots[0]), float(basis.knots[-1])
    unit = np.finfo(float).eps * _target_scale(basis, f, sv)
    val = adaptive_integrate(g2, a, b, rel_tol=rel_tol,
                             breakpoints=tuple(breaks) + tuple(basis.knots[1:-1]),
                             abs_tol=64.0 * unit * unit * (b - a))
    return math.sqrt(max(float(val), 0.0))


@dataclass(frozen=True)
class L2CheckReport:
    base_distance: float
    worst_margin: float
    trials: int


def best_l2_check(basis: LBSplineBasis, gs: GramSystem, f, trials: int,
                  seed: int = 0) -> L2CheckReport:
    """Verify no coefficient perturbation beats the projection in L2.

    Margin of a trial is ||f - (P_S f + delta)||_2 - ||f - P_S f||_2, which
    must be >= 0 up to quadrature noise; the worst margin is reported.
    """
    sv = project(basis, gs, f)
    base = l2_distance(basis, f, sv)
    rng = np.random.default_rng(seed)
    c = sv.coeffs_array
    scale_ref = max(float(np.max(np.abs(c))), 1.0)
    worst = math.inf
    for _ in range(trials):
        mag = 10.0 ** rng.uniform(-6, 0)
        delta = rng.standard_normal(basis.n) * mag * scale_ref
        perturbed = make_spline(basis, c + delta)
        margin = l2_distance(basis, f, perturbed) - base
        worst = min(worst, margin)
    return L2CheckReport(base_distance=base, worst_margin=worst, trials=trials)


def catalog(a: float, b: float) -> list[TargetFunction]:
    """Stock test targets on [a, b]: constants, ramps, waves, bumps.

    Near-worst-case sign patterns come from the kernel machinery
    (`lebesgue.extremal_witness`) and are appended by callers that have a
    NormReport at hand.
    """
    span = b - a
    w1 = math.sqrt(2.0) * 3.0 * math.pi / span
    w2 = (1.0 + math.sqrt(5.0)) / 2.0 * 2.0 * math.pi / span

    def bump(center, width):
        return lambda x: np.exp(-((x - center) / width) ** 2)

    return [
        TargetFunction(lambda x: np.ones_like(x), "one", sup_norm=1.0),
        TargetFunction(lambda x: 2.0 * (x - a) / span - 1.0, "ramp", sup_norm=1.0),
        TargetFunction(lambda x: np.sin(w1 * (x - a)), "sin-sqrt2", sup_norm=1.0),
        TargetFunction(lambda x: np.cos(w2 * (x - a)), "cos-golden", sup_norm=1.0),
        TargetFunction(bump(a + 0.37 * span, 0.12 * span), "bump-wide", sup_norm=1.0),
        TargetFunction(bump(a + 0.71 * span, 0.03 * span), "bump-narrow", sup_norm=1.0),
    ]
