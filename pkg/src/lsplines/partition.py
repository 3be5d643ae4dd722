"""Knot partitions of a segment [a, b].

A partition stores only its knots; subinterval lengths and the diameter are
derived on demand so the two can never drift apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DegenerateInterval, EpsilonOutOfRange, InvalidRatio, NonMonotoneKnots

# Gaps smaller than this fraction of (b - a) are treated as duplicate knots;
# keeps Gram matrices numerically nonsingular at desk scale.
MIN_RELATIVE_GAP = 1e-13


@dataclass(frozen=True)
class Partition:
    """Strictly increasing knots t_0 < ... < t_{n-1} on [a, b]."""

    knots: tuple[float, ...]

    @property
    def n(self) -> int:
        return len(self.knots)

    @property
    def a(self) -> float:
        return self.knots[0]

    @property
    def b(self) -> float:
        return self.knots[-1]

    @cached_property
    def knots_array(self) -> np.ndarray:
        arr = np.asarray(self.knots, dtype=float)
        arr.setflags(write=False)
        return arr

    @cached_property
    def lengths(self) -> np.ndarray:
        h = np.diff(self.knots_array)
        h.setflags(write=False)
        return h

    @property
    def diameter(self) -> float:
        return float(np.max(self.lengths))

    def to_json(self) -> dict:
        return {"knots": list(self.knots)}

    @staticmethod
    def from_json(obj: dict) -> "Partition":
        return make_partition(obj["knots"])


def make_partition(knots) -> Partition:
    """Validate a knot list and build a Partition.

    Raises NonMonotoneKnots on duplicates, descending values, or gaps below
    MIN_RELATIVE_GAP * (b - a).
    """
    kn = [float(t) for t in knots]
    if len(kn) < 2:
        raise NonMonotoneKnots(0, "a partition needs at least 2 knots")
    span = kn[-1] - kn[0]
    if not span > 0:
        raise NonMonotoneKnots(0, "last knot must exceed the first")
    floor = MIN_RELATIVE_GAP * span
    for i in range(len(kn) - 1):
        if not kn[i + 1] - kn[i] > floor:
            raise NonMonotoneKnots(i)
    return Partition(tuple(kn))


def uniform(a: float, b: float, n: int) -> Partition:
    """n equally spaced knots on [a, b]."""
    if not b > a:
        raise DegenerateInterval(f"need a < b, got [{a}, {b}]")
    if n < 2:
        raise NonMonotoneKnots(0, "need n >= 2")
    return make_partition(np.linspace(a, b, n))


def geometric(a: float, b: float, n: int, ratio: float) -> Partition:
    """Knots with geometrically growing gaps, h_{i+1}/h_i = ratio.

    ratio = 1 degenerates to the uniform mesh.
    """
    if not b > a:
        raise DegenerateInterval(f"need a < b, got [{a}, {b}]")
    if n < 2:
        raise NonMonotoneKnots(0, "need n >= 2")
    if not ratio > 0:
        raise InvalidRatio(f"ratio must be > 0, got {ratio}")
    k = n - 1
    if ratio == 1.0:
        return uniform(a, b, n)
    # first gap g with g * (ratio^k - 1)/(ratio - 1) = b - a; work in logs for
    # extreme ratios
    powers = np.power(ratio, np.arange(k, dtype=float))
    gaps = (b - a) * powers / powers.sum()
    knots = a + np.concatenate(([0.0], np.cumsum(gaps)))
    knots[-1] = b
    return make_partition(knots)


def model_example(lam: float, epsilon: float, m: int, side: str = "right") -> Partition:
    """Partition of [0, pi/lam] with one interval of length pi/lam - epsilon.

    The remaining mass epsilon is split uniformly over m small subintervals
    placed on the requested side of the long interval.
    """
    if not lam > 0:
        raise EpsilonOutOfRange(f"need lambda > 0, got {lam}")
    top = math.pi / lam
    if not 0 < epsilon < top:
        raise EpsilonOutOfRange(f"need 0 < epsilon < pi/lambda = {top:.6g}, got {epsilon}")
    if m < 1:
        raise EpsilonOutOfRange(f"need m >= 1 small subintervals, got {m}")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    small = epsilon / m * np.ones(m)
    if side == "right":
        gaps = np.concatenate(([top - epsilon], small))
    else:
        gaps = np.concatenate((small, [top - epsilon]))
    knots = np.concatenate(([0.0], np.cumsum(gaps)))
    knots[-1] = top
    return make_partition(knots)
