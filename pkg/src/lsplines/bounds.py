"""Closed-form norm bounds and their comparison against computed norms.

The symmetric exponential family (and the linear baseline) have the exact
mesh-independent constant 3.  The trigonometric family is bounded in terms of
tau = lambda * d(partition) by a two-branch expression that blows up like
(8/pi)/(pi - tau)^2 as tau -> pi.  The general exponential family is known to
be uniformly bounded but with a non-constructive constant, and on the model
segment [0, pi/lambda] the knot values of any projection obey the 38/pi +
O(eps) bound; both are reported as qualitative flags here and charted
empirically in `search`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import TauOutOfRange
from .partition import Partition

EXACT_CAP = 3.0
SLACK_TOL = 1e-9


def _check_tau(tau: float) -> float:
    tau = float(tau)
    if not 0.0 < tau < math.pi:
        raise TauOutOfRange(f"need 0 < tau < pi, got {tau}")
    return tau


def trig_bound_small_branch(tau: float) -> float:
    """2(1-cos t)^2 / ((t - sin t) sin t): the formula for tau <= pi/2."""
    tau = _check_tau(tau)
    c = 1.0 - math.cos(tau)
    return 2.0 * c * c / ((tau - math.sin(tau)) * math.sin(tau))


def trig_bound_large_branch(tau: float) -> float:
    """2(1-cos t)^2 / ((t - sin t) sin^2 t): the formula for tau > pi/2."""
    tau = _check_tau(tau)
    c = 1.0 - math.cos(tau)
    s = math.sin(tau)
    return 2.0 * c * c / ((tau - math.sin(tau)) * s * s)


def trig_projector_bound(tau: float) -> float:
    """Mesh-diameter bound for the trig projector norm at tau = lambda*d."""
    tau = _check_tau(tau)
    if tau <= 0.5 * math.pi:
        return trig_bound_small_branch(tau)
    return trig_bound_large_branch(tau)


def trig_projector_bound_branches(tau: float) -> tuple[float, float]:
    """Both one-sided formulas (they agree at pi/2 since sin(pi/2) = 1)."""
    return trig_bound_small_branch(tau), trig_bound_large_branch(tau)


def trig_projector_bound_asymptotic(tau: float) -> float:
    """(8/pi)/(pi - tau)^2, the tau -> pi equivalent of the bound."""
    tau = _check_tau(tau)
    d = math.pi - tau
    return (8.0 / math.pi) / (d * d)


def exp_sym_sup_constant() -> float:
    """Exact sup over all partitions of the symmetric-exponential projector norm."""
    return EXACT_CAP


def linear_sup_constant() -> float:
    """Same constant for the k=2 polynomial baseline (broken lines)."""
    return EXACT_CAP


def knot_value_bound_constant() -> float:
    """38/pi: the eps-free part of the model-segment knot-value bound."""
    return 38.0 / math.pi


@lru_cache(maxsize=1)
def bound_is_monotone(samples: int = 4000) -> bool:
    """Numeric scan: is the trig bound nondecreasing on (0, pi)?

    Recorded once; check_bound relies on this to evaluate the bound only at
    tau = lambda*d + 1e-9 rather than minimizing over larger tau.
    """
    taus = np.linspace(1e-6, math.pi - 1e-6, samples)
    vals = np.array([trig_projector_bound(float(t)) for t in taus])
    return bool(np.all(np.diff(vals) >= -1e-12))


@dataclass(frozen=True)
class BoundReport:
    """One applicable bound compared against a computed norm."""

    tag: str
    family: dict
    knots: tuple[float, ...]
    diameter: float
    norm: float
    bound: float | None
    slack: float | None
    note: str = ""

    def to_json(self) -> dict:
        return {
            "tag": self.tag,
            "family": self.family,
            "knots": list(self.knots),
            "diameter": self.diameter,
            "norm": self.norm,
            "bound": self.bound,
            "slack": self.slack,
            "note": self.note,
        }


def check_bound(family, partition: Partition, norm_report,
                model_eps: float | None = None,
                knot_lebesgue_max: float | None = None) -> list[BoundReport]:
    """Every bound applicable to this (family, partition) with its slack.

    Slack must be >= -1e-9 for the quantitative tags (exp-sym-cap-3,
    linear-cap-3, trig-tau-bound); the qualitative tags carry no assertion.
    """
    norm = float(norm_report.norm)
    fam_json = family.to_json()
    base = dict(family=fam_json, knots=tuple(partition.knots),
                diameter=partition.diameter, norm=norm)
    out: list[BoundReport] = []
    kind = fam_json["family"]

    if kind in ("exp_sym", "linear"):
        tag = "exp-sym-cap-3" if kind == "exp_sym" else "linear-cap-3"
        out.append(BoundReport(tag=tag, bound=EXACT_CAP, slack=EXACT_CAP - norm, **base))
    elif kind == "trig":
        tau = family.lam * partition.diameter
        tau_eval = tau + 1e-9
        if tau_eval < math.pi:
            if not bound_is_monotone():  # pragma: no cover - recorded as monotone
                taus = np.linspace(tau_eval, math.pi - 1e-9, 512)
                bound = min(trig_projector_bound(float(s)) for s in taus)
            else:
                bound = trig_projector_bound(tau_eval)
            out.append(BoundReport(tag="trig-tau-bound", bound=bound,
                                   slack=bound - norm, **base))
    elif kind == "exp_general":
        out.append(BoundReport(tag="exp-general-uniform", bound=None, slack=None,
                               note="uniformly bounded; constant non-constructive",
                               **base))

    if model_eps is not None and kind == "trig":
        kb = knot_value_bound_constant()
        slack = None if knot_lebesgue_max is None else kb - float(knot_lebesgue_max)
        out.append(BoundReport(
            tag="knot-value-bound", bound=kb, slack=slack,
            note=f"knot values only; O(eps) term excluded, eps={model_eps:g}", **base))
        out.append(BoundReport(
            tag="pi-limit-finite", bound=None, slack=None,
            note="norm stays finite as the diameter approaches pi/lambda", **base))
    return out
