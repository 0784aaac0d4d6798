"""Closed-form constants and admissibility conditions of the diameter bound.

Everything here is a pure function of scalar inputs.  Dimensions are the
intrinsic dimension ``m`` of the immersed manifold; ``alpha`` is the free
parameter in ``(0, 1)`` shared by the Sobolev constant and the diameter
constant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = [
    "AdmissibilityError",
    "AdmissibilityInput",
    "Admissibility",
    "ConstantsBundle",
    "CurvatureBound",
    "VOLUME_TOO_LARGE",
    "INJECTIVITY_TOO_SMALL",
    "ARCSIN_DOMAIN",
    "unit_ball_volume",
    "sobolev_constant",
    "rho0",
    "check_admissibility",
    "solve_delta",
    "diameter_constant",
    "optimal_alpha",
    "constants_bundle",
]

VOLUME_TOO_LARGE = "VOLUME_TOO_LARGE"
INJECTIVITY_TOO_SMALL = "INJECTIVITY_TOO_SMALL"
ARCSIN_DOMAIN = "ARCSIN_DOMAIN"


class AdmissibilityError(ValueError):
    """Raised when a constant is requested outside its domain."""

    def __init__(self, code, message):
        super().__init__(f"{code}: {message}")
        self.code = code


def _check_m(m, minimum=2):
    if int(m) != m or m < minimum:
        raise ValueError(f"dimension m must be an integer >= {minimum}, got {m!r}")
    return int(m)


def _check_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")
    return float(alpha)


@dataclass(frozen=True)
class CurvatureBound:
    """Upper bound ``K_N <= b**2`` on the ambient sectional curvature.

    ``kind`` is one of ``"positive"`` (``b`` real), ``"zero"`` or
    ``"imaginary"`` (``b = i * beta``, i.e. ``K_N <= -beta**2``).
    """

    kind: str
    magnitude: float = 0.0

    def __post_init__(self):
        if self.kind not in ("positive", "zero", "imaginary"):
            raise ValueError(f"unknown curvature bound kind {self.kind!r}")
        if self.kind == "zero":
            object.__setattr__(self, "magnitude", 0.0)
        elif not self.magnitude > 0:
            raise ValueError("curvature magnitude must be > 0 for non-zero bounds")

    @classmethod
    def positive(cls, b):
        return cls("positive", float(b))

    @classmethod
    def zero(cls):
        return cls("zero")

    @classmethod
    def imaginary(cls, beta):
        return cls("imaginary", float(beta))

    @property
    def b_squared(self):
        if self.kind == "positive":
            return self.magnitude**2
        if self.kind == "imaginary":
            return -self.magnitude**2
        return 0.0

    def to_dict(self):
        return {"kind": self.kind, "magnitude": self.magnitude}


@dataclass(frozen=True)
class AdmissibilityInput:
    m: int
    alpha: float
    bound: CurvatureBound
    volume: float
    inj_radius: float = math.inf

    def __post_init__(self):
        _check_m(self.m)
        _check_alpha(self.alpha)
        if not self.volume > 0:
            raise ValueError("volume must be > 0")
        if not self.inj_radius > 0:
            raise ValueError("injectivity radius must be > 0")


@dataclass(frozen=True)
class Admissibility:
    admissible: bool
    reason: str | None
    rho0: float | None
    volume_condition: float

    def to_dict(self):
        return {
            "admissible": self.admissible,
            "reason": self.reason,
            "rho0": self.rho0,
            "volume_condition": self.volume_condition,
        }


@dataclass(frozen=True)
class ConstantsBundle:
    m: int
    alpha: float
    c: float
    delta: float
    C: float
    admissibility: Admissibility | None = field(default=None)

    def to_dict(self):
        out = {"m": self.m, "alpha": self.alpha, "c": self.c, "delta": self.delta, "C": self.C}
        if self.admissibility is not None:
            out["admissibility"] = self.admissibility.to_dict()
        return out


def unit_ball_volume(m):
    """Volume of the unit ball in R^m, ``pi**(m/2) / Gamma(m/2 + 1)``."""
    m = _check_m(m, minimum=1)
    return math.pi ** (m / 2) / math.gamma(m / 2 + 1)


def sobolev_constant(m, beta):
    """Constant ``c(m, beta)`` of the submanifold Sobolev inequality.

    For ``m = 2`` this reduces to ``4 sqrt(pi) / (beta sqrt(1 - beta))``.
    """
    m = _check_m(m)
    beta = _check_alpha(beta)
    return (
        math.pi
        * 2.0 ** (m - 1)
        / beta
        * (1.0 - beta) ** (-1.0 / m)
        * (m / (m - 1))
        * unit_ball_volume(m) ** (-1.0 / m)
    )


def _volume_radius(m, volume, alpha):
    # (1 - alpha)^(-1/m) (Vol / omega_m)^(1/m)
    return (1.0 - alpha) ** (-1.0 / m) * (volume / unit_ball_volume(m)) ** (1.0 / m)


def rho0(m, bound, volume, alpha):
    """Radius ``rho_0`` entering the injectivity-radius condition.

    The real branch is ``arcsin(b x) / b``; zero and imaginary bounds use
    ``x`` itself (the ``b -> 0`` limit of the real branch).
    """
    m = _check_m(m)
    alpha = _check_alpha(alpha)
    x = _volume_radius(m, volume, alpha)
    if bound.kind != "positive":
        return x
    b = bound.magnitude
    arg = b * x
    if arg > 1.0:
        raise AdmissibilityError(ARCSIN_DOMAIN, f"arcsin argument {arg:.6g} exceeds 1")
    return math.asin(arg) / b


def check_admissibility(inp, strict_injectivity=False):
    """Evaluate the volume and injectivity-radius conditions.

    Returns a verdict rather than raising.  With ``strict_injectivity`` and a
    real bound, the injectivity check uses ``R >= pi / b`` instead of
    ``2 rho_0 <= R``.
    """
    m, alpha, bound = inp.m, inp.alpha, inp.bound
    x = _volume_radius(m, inp.volume, alpha)
    volume_condition = bound.b_squared * x**2
    if bound.kind == "positive" and volume_condition > 1.0:
        return Admissibility(False, VOLUME_TOO_LARGE, None, volume_condition)
    r0 = rho0(m, bound, inp.volume, alpha)
    if strict_injectivity and bound.kind == "positive":
        ok = inp.inj_radius >= math.pi / bound.magnitude
    else:
        ok = 2.0 * r0 <= inp.inj_radius
    if not ok:
        return Admissibility(False, INJECTIVITY_TOO_SMALL, r0, volume_condition)
    return Admissibility(True, None, r0, volume_condition)


def solve_delta(m, alpha, max_iter=200):
    """Largest ``delta`` for which the comparison function ``delta r**m`` is a
    subsolution, i.e. ``m d + d**((2m-3)/(m-1)) <= d**((m-1)/m) / c(m, alpha)``.

    Dividing by ``d**((m-1)/m)`` leaves ``m d**(1/m) + d**e - 1/c`` with
    ``e = (m**2 - m - 1) / (m (m - 1)) > 0``, which is strictly increasing,
    so the root is unique.  Bisection runs in log space on
    ``(1e-300, omega_m (1 - 1e-12))``.
    """
    m = _check_m(m)
    alpha = _check_alpha(alpha)
    inv_c = 1.0 / sobolev_constant(m, alpha)
    e = (m * m - m - 1) / (m * (m - 1))

    def g(d):
        return m * d ** (1.0 / m) + d**e - inv_c

    lo, hi = 1e-300, unit_ball_volume(m) * (1.0 - 1e-12)
    if g(hi) <= 0.0:
        return hi
    log_lo, log_hi = math.log(lo), math.log(hi)
    for _ in range(max_iter):
        mid = 0.5 * (log_lo + log_hi)
        if mid in (log_lo, log_hi):
            break
        if g(math.exp(mid)) <= 0.0:
            log_lo = mid
        else:
            log_hi = mid
    return math.exp(log_lo)


def diameter_constant(m, alpha):
    """``C(m, alpha) = 4 delta**(1 - m)``; equals ``576 pi / (alpha^2 (1 - alpha))`` for m = 2."""
    m = _check_m(m)
    return 4.0 * solve_delta(m, alpha) ** (1 - m)


def optimal_alpha(m, grid=999, tol=1e-9):
    """Minimise ``diameter_constant(m, .)`` over ``(0, 1)``.

    A uniform grid locates the basin, then the bracket is repeatedly zoomed
    by a factor of ten around the current best point.
    """
    m = _check_m(m)
    alphas = [(i + 1) / (grid + 1) for i in range(grid)]
    values = [diameter_constant(m, a) for a in alphas]
    k = min(range(grid), key=values.__getitem__)
    best, step = alphas[k], 1.0 / (grid + 1)
    while step > tol:
        candidates = [best + step * j / 10.0 for j in range(-10, 11)]
        candidates = [a for a in candidates if 0.0 < a < 1.0]
        best = min(candidates, key=lambda a: diameter_constant(m, a))
        step /= 10.0
    return best, diameter_constant(m, best)


def constants_bundle(m, alpha, bound=None, volume=None, inj_radius=math.inf):
    """All constants for ``(m, alpha)``, plus admissibility when a volume is given."""
    adm = None
    if volume is not None:
        bound = bound if bound is not None else CurvatureBound.zero()
        adm = check_admissibility(AdmissibilityInput(m, alpha, bound, volume, inj_radius))
    delta = solve_delta(m, alpha)
    return ConstantsBundle(
        m=int(m),
        alpha=float(alpha),
        c=sobolev_constant(m, alpha),
        delta=delta,
        C=4.0 * delta ** (1 - m),
        admissibility=adm,
    )
