"""Second-order constant-coefficient operators and their interval-local solutions.

Each family encodes the operator L, its two-dimensional kernel on an interval,
and the "ramp" kernel elements interpolating (0,1) / (1,0) at the interval
endpoints.  Everything is evaluated in the local coordinate u = x - t_left;
exponentials are factored so that no intermediate quantity can overflow and
the endpoint conditions hold to machine precision for any admissible lambda*h.

The per-interval quantities every other module needs are:

  up/down        ramp values
  iup/idown      running integrals of the ramps from 0 to c
  gram_cells     (int up^2, int up*down, int down^2) over a full interval
  psi_root       the unique zero of p*down + q*up when p*q < 0
  sup_combination  sup |p*down + q*up| over the interval

All methods broadcast over numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import TrigSingularInterval

# Below this value of lambda*h (resp. (lambda1-lambda2)*h/2) the closed-form
# Gram integrals cancel catastrophically; switch to the frozen Taylor series.
# Both branches agree with the quadrature oracle to better than 1e-12 here.
_SERIES_CUT = 0.02

# Trig intervals with lambda*h at or beyond pi - this margin are rejected: the
# two-point interpolation matrix is singular at exactly pi.
TRIG_MARGIN = 1e-9


def _phi1(w):
    """(e^w - 1)/w with the w -> 0 limit, elementwise."""
    w = np.asarray(w, dtype=float)
    out = np.ones_like(w)
    nz = w != 0
    out[nz] = np.expm1(w[nz]) / w[nz]
    return out


_GL16 = np.polynomial.legendre.leggauss(16)


def _gauss_integral(f, c):
    """int_0^c f for near-polynomial f via one 16-point Gauss panel, vectorized over c."""
    xi, wi = _GL16
    c = np.asarray(c, dtype=float)
    x = 0.5 * c[..., None] * (xi + 1.0)
    return 0.5 * c * (f(x) * wi).sum(axis=-1)


def _ediv(P, Q, sigma, h):
    """(e^P - e^Q)/sigma where P - Q = sigma*h and P, Q <= 0.

    Stable for every regime: expm1 form when the exponent gap is small,
    direct difference otherwise (no overflow since both exponents are <= 0).
    """
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    h = np.asarray(h, dtype=float)
    w = P - Q
    use_small = np.abs(w) < 0.5
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = (np.exp(P) - np.exp(Q)) / sigma
        small = np.exp(Q) * h * _phi1(np.where(use_small, w, 0.0))
    return np.where(use_small, small, direct)


@dataclass(frozen=True)
class Ramp:
    """One ramp of a hat spline: a kernel element with endpoint values (0,1) or (1,0)."""

    family: "object"
    h: float
    direction: str  # "up" | "down"

    def __call__(self, u):
        if self.direction == "up":
            return self.family.up(u, self.h)
        return self.family.down(u, self.h)

    @property
    def sup(self) -> float:
        return float(self.family.ramp_sup(self.h))


class _FamilyBase:
    """Shared plumbing; numeric content lives in the subclasses."""

    def ramp(self, h: float, direction: str) -> Ramp:
        if not h > 0:
            raise ValueError(f"interval length must be > 0, got {h}")
        if direction not in ("up", "down"):
            raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")
        self.validate_lengths([h])
        return Ramp(self, float(h), direction)

    def validate_lengths(self, h) -> None:
        """Raise TrigSingularInterval if any interval is inadmissible (trig only)."""

    def interval_cap(self) -> float:
        """Largest admissible interval length (inf except for the trig family)."""
        return math.inf

    def ramp_sup(self, h):
        """Exact sup of a ramp over [0, h]; direction-independent by symmetry."""
        return np.ones_like(np.asarray(h, dtype=float))

    def down(self, u, h):
        return self.up(np.asarray(h, dtype=float) - np.asarray(u, dtype=float), h)

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Linear(_FamilyBase):
    """L = D^2; the kernel is {1, u} and hats are the classical broken lines."""

    tag = "linear"

    def up(self, u, h):
        return np.asarray(u, dtype=float) / np.asarray(h, dtype=float)

    def down(self, u, h):
        return 1.0 - np.asarray(u, dtype=float) / np.asarray(h, dtype=float)

    def iup(self, c, h):
        c = np.asarray(c, dtype=float)
        return c * c / (2.0 * np.asarray(h, dtype=float))

    def idown(self, c, h):
        c = np.asarray(c, dtype=float)
        return c - c * c / (2.0 * np.asarray(h, dtype=float))

    def gram_cells(self, h):
        h = np.asarray(h, dtype=float)
        return h / 3.0, h / 6.0, h / 3.0

    def psi_root(self, p, q, h):
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return p * np.asarray(h, dtype=float) / (p - q)

    def sup_combination(self, p, q, h):
        return np.maximum(np.abs(p), np.abs(q))

    def ode_coefficients(self):
        return 0.0, 0.0

    def kernel_pair(self):
        return (lambda u: np.ones_like(np.asarray(u, dtype=float)),
                lambda u: np.asarray(u, dtype=float))

    def to_json(self) -> dict:
        return {"family": "linear"}


@dataclass(frozen=True)
class ExpSym(_FamilyBase):
    """L = D^2 - lam^2; kernel {cosh(lam u), sinh(lam u)} (tension splines)."""

    lam: float
    tag = "exp_sym"

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"need lambda > 0, got {self.lam}")

    def up(self, u, h):
        # sinh(lam u)/sinh(lam h) factored so both endpoint values are exact
        # and nothing overflows for large lam*h.
        u = np.asarray(u, dtype=float)
        h = np.asarray(h, dtype=float)
        lam = self.lam
        with np.errstate(divide="ignore", invalid="ignore"):
            val = np.exp(lam * (u - h)) * np.expm1(-2.0 * lam * u) / np.expm1(-2.0 * lam * h)
        return val

    def iup(self, c, h):
        # (cosh(lam c) - 1)/(lam sinh(lam h)), scaled by e^{-lam h}
        c = np.asarray(c, dtype=float)
        h = np.asarray(h, dtype=float)
        lam = self.lam
        e = np.expm1(-lam * c)
        return np.exp(lam * (c - h)) * e * e / (lam * (-np.expm1(-2.0 * lam * h)))

    def idown(self, c, h):
        # (cosh(lam h) - cosh(lam(h-c)))/(lam sinh(lam h)) as a pure product:
        # cosh A - cosh B = 2 sinh((A+B)/2) sinh((A-B)/2) removes the cancellation.
        c = np.asarray(c, dtype=float)
        h = np.asarray(h, dtype=float)
        lam = self.lam
        return (np.expm1(-lam * (2.0 * h - c)) * np.expm1(-lam * c)
                / (lam * (-np.expm1(-2.0 * lam * h))))

    def gram_cells(self, h):
        h = np.asarray(h, dtype=float)
        lam = self.lam
        z = lam * h
        z2 = z * z
        iuu_ser = h * (1.0 / 3 + z2 * (-2.0 / 45 + z2 * (2.0 / 315 + z2 * (-4.0 / 4725 + z2 * (2.0 / 18711)))))
        iud_ser = h * (1.0 / 6 + z2 * (-7.0 / 180 + z2 * (31.0 / 5040 + z2 * (-127.0 / 151200 + z2 * (73.0 / 684288)))))
        with np.errstate(divide="ignore", invalid="ignore"):
            em2 = np.expm1(-2.0 * z)
            iuu_ex = (-np.expm1(-4.0 * z) / lam - 4.0 * h * np.exp(-2.0 * z)) / (2.0 * em2 * em2)
            iud_ex = np.exp(-z) * (h * (1.0 + np.exp(-2.0 * z)) + em2 / lam) / (em2 * em2)
        small = z < _SERIES_CUT
        iuu = np.where(small, iuu_ser, iuu_ex)
        iud = np.where(small, iud_ser, iud_ex)
        return iuu, iud, iuu

    def psi_root(self, p, q, h):
        # p sinh(lam(h-u)) + q sinh(lam u) = 0  =>  e^{2 lam u} in closed form.
        # The log is taken as log1p of an exact product so the root loses no
        # precision when it sits near either interval end.
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        h = np.asarray(h, dtype=float)
        lam = self.lam
        z = lam * h
        with np.errstate(divide="ignore", invalid="ignore"):
            x = (p + q) * np.expm1(-z) / (q - p * np.exp(-z))
            return (z + np.log1p(x)) / (2.0 * lam)

    def sup_combination(self, p, q, h):
        # |psi| is convex on every sign-constant piece, so the sup sits at an endpoint.
        return np.maximum(np.abs(p), np.abs(q))

    def ode_coefficients(self):
        return -self.lam ** 2, 0.0

    def kernel_pair(self):
        lam = self.lam
        return (lambda u: np.cosh(lam * np.asarray(u, dtype=float)),
                lambda u: np.sinh(lam * np.asarray(u, dtype=float)))

    def to_json(self) -> dict:
        return {"family": "exp_sym", "lambda": self.lam}


@dataclass(frozen=True)
class ExpGeneral(_FamilyBase):
    """L = (D - lam1)(D - lam2) with lam2 < 0 < lam1; kernel {e^{lam1 u}, e^{lam2 u}}."""

    lam1: float
    lam2: float
    tag = "exp_general"

    def __post_init__(self):
        if not (self.lam2 < 0 < self.lam1):
            raise ValueError(f"need lambda2 < 0 < lambda1, got ({self.lam1}, {self.lam2})")

    def up(self, u, h):
        u = np.asarray(u, dtype=float)
        h = np.asarray(h, dtype=float)
        a = self.lam1 - self.lam2
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.exp(self.lam1 * (u - h)) * np.expm1(-a * u) / np.expm1(-a * h)

    def down(self, u, h):
        u = np.asarray(u, dtype=float)
        h = np.asarray(h, dtype=float)
        a = self.lam1 - self.lam2
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.exp(self.lam2 * u) * np.expm1(-a * (h - u)) / np.expm1(-a * h)

    def iup(self, c, h):
        # The closed form cancels when both exponents are tiny; there the ramp
        # itself is machine-exact and near-cubic, so one Gauss panel is exact.
        c = np.asarray(c, dtype=float)
        h = np.asarray(h, dtype=float)
        l1, l2 = self.lam1, self.lam2
        a = l1 - l2
        t1 = _ediv(l1 * (c - h), -l1 * h, l1, c)
        t2 = _ediv(l2 * c - l1 * h, -l1 * h, l2, c)
        closed = (t1 - t2) / (-np.expm1(-a * h))
        if np.any(a * h < 2.0 * _SERIES_CUT):
            quad = _gauss_integral(lambda x: self.up(x, np.asarray(h)[..., None]), c)
            return np.where(a * h < 2.0 * _SERIES_CUT, quad, closed)
        return closed

    def idown(self, c, h):
        c = np.asarray(c, dtype=float)
        h = np.asarray(h, dtype=float)
        l1, l2 = self.lam1, self.lam2
        a = l1 - l2
        t1 = _ediv(l2 * c, np.zeros_like(c), l2, c)
        t2 = _ediv(l1 * (c - h) + l2 * h, (l2 - l1) * h, l1, c)
        closed = (t1 - t2) / (-np.expm1(-a * h))
        if np.any(a * h < 2.0 * _SERIES_CUT):
            quad = _gauss_integral(lambda x: self.down(x, np.asarray(h)[..., None]), c)
            return np.where(a * h < 2.0 * _SERIES_CUT, quad, closed)
        return closed

    def gram_cells(self, h):
        h = np.asarray(h, dtype=float)
        l1, l2 = self.lam1, self.lam2
        a = l1 - l2
        s = l1 + l2
        z1 = l1 * h
        z2 = l2 * h
        m = 0.5 * (z1 + z2)
        n = 0.5 * (z1 - z2)
        n2 = n * n
        n4 = n2 * n2

        def series(mm):
            poly_m = (1.0 / 3 + mm * (-1.0 / 6 + mm * (1.0 / 15 + mm * (-1.0 / 45
                      + mm * (2.0 / 315 + mm * (-1.0 / 630 + mm / 2835))))))
            c2 = -2.0 / 45 + mm * (1.0 / 30 + mm * (-1.0 / 63 + mm * (11.0 / 1890 - mm / 567)))
            c4 = 2.0 / 315 + mm * (-1.0 / 189 + mm * (38.0 / 14175))
            return h * (poly_m + n2 * c2 + n4 * c4 - n4 * n2 * (4.0 / 4725))

        m2 = m * m
        iud_ser = h * (1.0 / 6 + m2 * (1.0 / 60 + m2 * (1.0 / 1680 + m2 / 90720))
                       + n2 * (-7.0 / 180 - m2 * (1.0 / 280 + m2 * 11.0 / 90720))
                       + n4 * (31.0 / 5040 + m2 * 239.0 / 453600)
                       - n4 * n2 * (127.0 / 151200))

        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            denom = np.expm1(-a * h) ** 2
            t1 = _ediv(np.zeros_like(h), -2.0 * z1, 2.0 * l1, h)
            t2 = _ediv(z2 - z1, -2.0 * z1, s, h)
            t3 = _ediv(2.0 * (z2 - z1), -2.0 * z1, 2.0 * l2, h)
            iuu_ex = (t1 - 2.0 * t2 + t3) / denom
            s1 = _ediv(2.0 * z2, np.zeros_like(h), 2.0 * l2, h)
            s2 = _ediv(2.0 * z2, z2 - z1, s, h)
            s3 = _ediv(2.0 * z2, 2.0 * (z2 - z1), 2.0 * l1, h)
            idd_ex = (s1 - 2.0 * s2 + s3) / denom
            a1 = _ediv(z2, -z1, s, h)
            a2 = _ediv(2.0 * z2 - z1, z2 - 2.0 * z1, s, h)
            b1 = _ediv(z2, z2 - 2.0 * z1, 2.0 * l1, h)
            b2 = _ediv(2.0 * z2 - z1, -z1, 2.0 * l2, h)
            iud_ex = (a1 + a2 - b1 - b2) / denom
        small = n < _SERIES_CUT
        iuu = np.where(small, series(m), iuu_ex)
        idd = np.where(small, series(-m), idd_ex)
        iud = np.where(small, iud_ser, iud_ex)
        return iuu, iud, idd

    def psi_root(self, p, q, h):
        # e^{(lam1-lam2) u} = (q - p e^{lam1 h})/(q - p e^{lam2 h}); log1p form
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        h = np.asarray(h, dtype=float)
        a = self.lam1 - self.lam2
        z1 = self.lam1 * h
        z2 = self.lam2 * h
        with np.errstate(divide="ignore", invalid="ignore"):
            x = (q * np.expm1(-z1) + p * np.expm1(z2)) / (q - p * np.exp(z2))
            return (z1 + np.log1p(x)) / a

    def sup_combination(self, p, q, h):
        # interior critical points are always local minima of |psi| here
        return np.maximum(np.abs(p), np.abs(q))

    def ode_coefficients(self):
        return self.lam1 * self.lam2, -(self.lam1 + self.lam2)

    def kernel_pair(self):
        l1, l2 = self.lam1, self.lam2
        return (lambda u: np.exp(l1 * np.asarray(u, dtype=float)),
                lambda u: np.exp(l2 * np.asarray(u, dtype=float)))

    def to_json(self) -> dict:
        return {"family": "exp_general", "lambda1": self.lam1, "lambda2": self.lam2}


@dataclass(frozen=True)
class Trig(_FamilyBase):
    """L = D^2 + lam^2; kernel {cos(lam u), sin(lam u)}.

    Ramps exist only while lam*h < pi; supremum of a ramp is 1/sin(lam h)
    once lam*h exceeds pi/2.
    """

    lam: float
    tag = "trig"

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"need lambda > 0, got {self.lam}")

    def validate_lengths(self, h) -> None:
        zs = self.lam * np.asarray(h, dtype=float)
        bad = np.nonzero(zs >= math.pi - TRIG_MARGIN)[0]
        if bad.size:
            i = int(bad[0])
            raise TrigSingularInterval(i, float(zs[i]))

    def interval_cap(self) -> float:
        return (math.pi - TRIG_MARGIN) / self.lam

    def up(self, u, h):
        u = np.asarray(u, dtype=float)
        h = np.asarray(h, dtype=float)
        lam = self.lam
        return np.sin(lam * u) / np.sin(lam * h)

    def down(self, u, h):
        u = np.asarray(u, dtype=float)
        h = np.asarray(h, dtype=float)
        lam = self.lam
        return np.sin(lam * (h - u)) / np.sin(lam * h)

    def iup(self, c, h):
        c = np.asarray(c, dtype=float)
        h = np.asarray(h, dtype=float)
        lam = self.lam
        s = np.sin(0.5 * lam * c)
        return 2.0 * s * s / (lam * np.sin(lam * h))

    def idown(self, c, h):
        c = np.asarray(c, dtype=float)
        h = np.asarray(h, dtype=float)
        lam = self.lam
        return (2.0 * np.sin(0.5 * lam * (2.0 * h - c)) * np.sin(0.5 * lam * c)
                / (lam * np.sin(lam * h)))

    def gram_cells(self, h):
        h = np.asarray(h, dtype=float)
        lam = self.lam
        z = lam * h
        z2 = z * z
        iuu_ser = h * (1.0 / 3 + z2 * (2.0 / 45 + z2 * (2.0 / 315 + z2 * (4.0 / 4725 + z2 * (2.0 / 18711)))))
        iud_ser = h * (1.0 / 6 + z2 * (7.0 / 180 + z2 * (31.0 / 5040 + z2 * (127.0 / 151200 + z2 * (73.0 / 684288)))))
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.sin(z)
            iuu_ex = (h - np.sin(2.0 * z) / (2.0 * lam)) / (2.0 * s * s)
            iud_ex = (s / lam - h * np.cos(z)) / (2.0 * s * s)
        small = z < _SERIES_CUT
        iuu = np.where(small, iuu_ser, iuu_ex)
        iud = np.where(small, iud_ser, iud_ex)
        return iuu, iud, iuu

    def ramp_sup(self, h):
        z = self.lam * np.asarray(h, dtype=float)
        return np.where(z > 0.5 * math.pi, 1.0 / np.sin(z), 1.0)

    @staticmethod
    def _cos_gap(p, q, z):
        """p*cos(z) - q without the q ~ p cancellation at small z."""
        s2 = np.sin(0.5 * z)
        return (p - q) - 2.0 * p * s2 * s2

    def psi_root(self, p, q, h):
        # psi*sin(lam h) = (q - p cos z) sin(lam u) + p sin z cos(lam u).
        # Measured from whichever end keeps the atan2 angle away from pi the
        # subtraction-free lane is exact; p*q < 0 guarantees one endpoint
        # value of each sign.
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        h = np.asarray(h, dtype=float)
        z = self.lam * h
        s = np.sin(z)
        from_left = np.arctan2(p * s, self._cos_gap(p, q, z)) / self.lam
        from_right = h - np.arctan2(q * s, self._cos_gap(q, p, z)) / self.lam
        return np.where(p > 0, from_left, from_right)

    def sup_combination(self, p, q, h):
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        z = self.lam * np.asarray(h, dtype=float)
        s = np.sin(z)
        A = -self._cos_gap(p, q, z)  # q - p cos z
        B = p * s
        R = np.hypot(A, B) / s
        phi = np.arctan2(B, A)
        peak = np.mod(0.5 * math.pi - phi, math.pi)
        inside = (peak > 0) & (peak < z)
        return np.where(inside, R, np.maximum(np.abs(p), np.abs(q)))

    def ode_coefficients(self):
        return self.lam ** 2, 0.0

    def kernel_pair(self):
        lam = self.lam
        return (lambda u: np.cos(lam * np.asarray(u, dtype=float)),
                lambda u: np.sin(lam * np.asarray(u, dtype=float)))

    def to_json(self) -> dict:
        return {"family": "trig", "lambda": self.lam}


def ramp(family, h: float, direction: str) -> Ramp:
    """Build the up or down ramp of one interval (Lagrange data in the kernel)."""
    return family.ramp(h, direction)


def ramp_sup(family, h: float, direction: str = "up") -> float:
    """Exact supremum of a ramp over its interval."""
    family.validate_lengths([h])
    return float(family.ramp_sup(h))


def family_from_json(obj: dict):
    kind = obj["family"]
    if kind == "linear":
        return Linear()
    if kind == "exp_sym":
        return ExpSym(float(obj["lambda"]))
    if kind == "exp_general":
        return ExpGeneral(float(obj["lambda1"]), float(obj["lambda2"]))
    if kind == "trig":
        return Trig(float(obj["lambda"]))
    raise ValueError(f"unknown family tag {kind!r}")
