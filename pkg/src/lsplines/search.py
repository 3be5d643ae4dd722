"""Adversarial mesh search and the pi-limit interference study.

Near-extremal meshes for projector norms are strongly nonuniform, so random
sampling draws gaps from a heavy-tailed mixture (uniform plus log-uniform
ratios spanning six decades) and the optimizer runs derivative-free
coordinate ascent on interior knots from geometric and random restarts.
Budgets count norm evaluations so strategies stay comparable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import make_spline
from .gram import gram_for
from .lebesgue import projector_norm, witness_catalog
from .partition import Partition, make_partition, geometric, model_example
from .projector import catalog, project
from .operators import Trig

_GAP_DECADES = 6.0


@dataclass(frozen=True)
class SearchResult:
    """Best partition found, with the evaluation ledger for reproducibility."""

    family: dict
    knots: tuple[float, ...]
    norm: float
    evaluations: int
    trace: tuple[tuple[int, float], ...]
    seed: int

    def partition(self) -> Partition:
        return make_partition(self.knots)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "knots": list(self.knots),
            "norm": self.norm,
            "evaluations": self.evaluations,
            "trace": [[int(i), float(v)] for i, v in self.trace],
            "seed": self.seed,
        }


@dataclass(frozen=True)
class PiLimitRow:
    """One epsilon of the interference sweep on [0, pi/lambda].

    In the cardinal basis the projection coefficients are the knot values, so
    max_abs_coeff equals max_knot_value; the interference shows up as
    max_basis_sup diverging while both stay bounded and so does the norm.
    """

    eps: float
    m: int
    norm: float
    max_knot_value: float
    max_abs_coeff: float
    max_basis_sup: float

    def to_row(self) -> list[float]:
        return [self.eps, float(self.m), self.norm, self.max_knot_value,
                self.max_abs_coeff, self.max_basis_sup]

    CSV_HEADER = "eps,m,norm,max_knot_value,max_abs_coeff,max_basis_sup"


def heavy_tailed_gaps(rng: np.random.Generator, k: int) -> np.ndarray:
    """k positive gap weights: half uniform, half log-uniform over 6 decades."""
    uniform = rng.uniform(size=k)
    logu = 10.0 ** rng.uniform(-_GAP_DECADES, 0.0, size=k)
    pick = rng.uniform(size=k) < 0.5
    return np.where(pick, uniform, logu)


def random_partition(rng: np.random.Generator, family, a: float, b: float,
                     n: int, max_tries: int = 200) -> Partition:
    """Heavy-tailed random partition; resampled until family-admissible."""
    cap = family.interval_cap()
    for _ in range(max_tries):
        gaps = heavy_tailed_gaps(rng, n - 1)
        gaps = gaps / gaps.sum() * (b - a)
        if math.isfinite(cap) and np.max(gaps) >= cap * (1.0 - 1e-6):
            continue
        knots = a + np.concatenate(([0.0], np.cumsum(gaps)))
        knots[-1] = b
        try:
            return make_partition(knots)
        except Exception:
            continue
    raise RuntimeError(f"no admissible partition of [{a}, {b}] with n={n} found")


def partition_with_diameter(rng: np.random.Generator, a: float, n: int,
                            diameter: float) -> Partition:
    """Heavy-tailed partition whose largest gap equals `diameter` exactly."""
    gaps = heavy_tailed_gaps(rng, n - 1)
    gaps = gaps / np.max(gaps) * diameter
    knots = a + np.concatenate(([0.0], np.cumsum(gaps)))
    return make_partition(knots)


def _norm_of(family, partition: Partition):
    basis, gs = gram_for(family, partition)
    return projector_norm(basis, gs)


def random_campaign(family, a: float, b: float, n_range: tuple[int, int],
                    count: int, seed: int, on_sample=None) -> SearchResult:
    """Sample `count` heavy-tailed partitions and keep the largest norm."""
    rng = np.random.default_rng(seed)
    best_norm = -math.inf
    best_knots: tuple[float, ...] = ()
    trace: list[tuple[int, float]] = []
    for i in range(count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        part = random_partition(rng, family, a, b, n)
        rep = _norm_of(family, part)
        if on_sample is not None:
            on_sample(part, rep)
        if rep.norm > best_norm:
            best_norm = rep.norm
            best_knots = tuple(part.knots)
            trace.append((i + 1, best_norm))
    return SearchResult(family=family.to_json(), knots=best_knots, norm=best_norm,
                        evaluations=count, trace=tuple(trace), seed=seed)


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self) -> bool:
        if self.used >= self.limit:
            return False
        self.used += 1
        return True


def _golden_knot_search(family, knots: np.ndarray, i: int, lo: float, hi: float,
                        budget: _Budget, iters: int = 18):
    """Maximize the norm over knot i in (lo, hi); returns (best_t, best_norm)."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0

    def val(ti):
        if not budget.spend():
            return None
        knots[i] = ti
        return _norm_of(family, make_partition(knots)).norm

    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1 = val(x1)
    if f1 is None:
        return None, None
    f2 = val(x2)
    if f2 is None:
        return (x1, f1)
    for _ in range(iters):
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = val(x1)
            if f1 is None:
                break
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = val(x2)
            if f2 is None:
                break
    cands = [(f, x) for f, x in [(f1, x1), (f2, x2)] if f is not None]
    fb, xb = max(cands)
    return xb, fb


def _restart_partitions(rng, family, a, b, n, restarts):
    cap = family.interval_cap()
    parts = []
    for r in range(restarts):
        if r % 2 == 0:
            ratio = 10.0 ** rng.uniform(-3.0, 3.0)
            try:
                p = geometric(a, b, n, ratio)
                if not (math.isfinite(cap) and p.diameter >= cap * (1 - 1e-6)):
                    parts.append(p)
                    continue
            except Exception:
                pass
        parts.append(random_partition(rng, family, a, b, n))
    return parts


def maximize_norm(family, a: float, b: float, n: int, budget: int, seed: int,
                  restarts: int = 4, sweeps: int = 8) -> SearchResult:
    """Coordinate ascent on interior knots from geometric/random restarts.

    Cyclic golden-section line searches per knot; the best-norm trace is
    monotone and the budget counts norm evaluations across all restarts.
    """
    rng = np.random.default_rng(seed)
    bud = _Budget(budget)
    span = b - a
    pad = 1e-7 * span
    cap = family.interval_cap()

    best_norm = -math.inf
    best_knots: tuple[float, ...] = ()
    trace: list[tuple[int, float]] = []

    def consider(knots_tuple, norm):
        nonlocal best_norm, best_knots
        if norm > best_norm:
            best_norm = norm
            best_knots = knots_tuple
            trace.append((bud.used, norm))

    for part in _restart_partitions(rng, family, a, b, n, restarts):
        knots = np.array(part.knots)
        if not bud.spend():
            break
        cur = _norm_of(family, make_partition(knots)).norm
        consider(tuple(knots), cur)
        for _ in range(sweeps):
            improved = False
            for i in range(1, n - 1):
                lo = knots[i - 1] + pad
                hi = knots[i + 1] - pad
                if math.isfinite(cap):
                    lo = max(lo, knots[i + 1] - cap * (1 - 1e-9))
                    hi = min(hi, knots[i - 1] + cap * (1 - 1e-9))
                if not lo < hi:
                    continue
                old = knots[i]
                xb, fb = _golden_knot_search(family, knots, i, lo, hi, bud)
                if xb is None:
                    knots[i] = old
                    break
                if fb > cur + 1e-12:
                    cur = fb
                    knots[i] = xb
                    improved = True
                else:
                    knots[i] = old
                consider(tuple(knots), cur)
            if bud.used >= bud.limit or not improved:
                break
        if bud.used >= bud.limit:
            break

    return SearchResult(family=family.to_json(), knots=best_knots, norm=best_norm,
                        evaluations=bud.used, trace=tuple(trace), seed=seed)


def pi_limit_study(lam: float, epsilons, m: int, witness_widths=(1e-3, 1e-5),
                   side: str = "right") -> list[PiLimitRow]:
    """Interference sweep: one long interval approaching pi/lambda.

    Per epsilon: the full projector norm, the worst knot value over the
    witness catalog (all witnesses have sup-norm 1), and the basis blow-up
    1/sin(lambda*eps) of the long interval.
    """
    fam = Trig(lam)
    rows: list[PiLimitRow] = []
    for eps in sorted(epsilons, reverse=True):
        part = model_example(lam, eps, m, side=side)
        basis, gs = gram_for(fam, part)
        rep = projector_norm(basis, gs)
        targets = witness_catalog(basis, gs, rep, widths=witness_widths)
        targets += catalog(part.a, part.b)
        max_knot = 0.0
        for f in targets:
            sv = project(basis, gs, f)
            scale = f.sup_norm if f.sup_norm else 1.0
            max_knot = max(max_knot, float(np.max(np.abs(sv.coeffs_array))) / scale)
        basis_sup = float(np.max(fam.ramp_sup(part.lengths)))
        rows.append(PiLimitRow(eps=float(eps), m=m, norm=rep.norm,
                               max_knot_value=max_knot, max_abs_coeff=max_knot,
                               max_basis_sup=basis_sup))
    return rows
