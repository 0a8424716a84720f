"""Rotation hypersurfaces in euclidean space.

A hypersurface of revolution is described by an arclength profile curve
s -> (rho(s), h(s)) (distance to the axis and height); the surface point is
f(s, Theta) = (rho(s) Theta, h(s)) with Theta on the unit (m-1)-sphere.  The
principal curvatures split into one meridian curvature rho' h'' - h' rho'' and
m - 1 equal parallel curvatures h' / rho.  The default orientation is the one
in which the unit sphere profile has all curvatures +1 (inward normal); the
flip is exposed as a flag.

Alongside the pointwise geometry (curvature spectra, Gauss map, support
function) this module assembles the radial curvature-volume data consumed by
the hypothesis checkers, and a finite-difference harness for the divergence
identities satisfied by the Gauss-map and support components.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import comb, pi
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq
from scipy.special import gamma as _gamma

from .curvature import PrincipalSpectrum
from .oscillation import CoefficientProfile
from .stability import GeometricProfileData, hermite_blend

__all__ = [
    "ProfileCurve",
    "RotationHypersurface",
    "EquatorCrossings",
    "EnvelopeProbe",
    "JacobiIdentityResult",
    "cylinder",
    "catenoid",
    "sphere_profile",
    "surface_from_profile_csv",
    "unit_sphere_area",
    "principal_curvatures",
    "gauss_map",
    "equator_crossings",
    "support_function",
    "tangent_envelope_probe",
    "radial_data",
    "jacobi_identity_check",
]

ARCLENGTH_TOL = 1e-8


def unit_sphere_area(m: int) -> float:
    """Surface measure of the unit (m-1)-sphere in R^m."""
    return float(2.0 * pi ** (m / 2.0) / _gamma(m / 2.0))


def _c(n: int, k: int) -> float:
    return float(comb(n, k)) if 0 <= k <= n else 0.0


def _sym_two_value(mu, lam, m: int, j: int):
    """S_j of the multiset {mu} + {lam x (m-1)} in closed form."""
    mu = np.asarray(mu, dtype=float)
    lam = np.asarray(lam, dtype=float)
    if j < 0 or j > m:
        return np.zeros_like(lam)
    out = _c(m - 1, j) * lam**j
    if j >= 1:
        out = out + mu * _c(m - 1, j - 1) * lam ** (j - 1)
    return out


# ---------------------------------------------------------------------------
# Profile curves
# ---------------------------------------------------------------------------

def _fd4_first(y: np.ndarray, h: float) -> np.ndarray:
    d = np.empty_like(y)
    d[2:-2] = (-y[4:] + 8 * y[3:-1] - 8 * y[1:-3] + y[:-4]) / (12 * h)
    d[0] = (-25 * y[0] + 48 * y[1] - 36 * y[2] + 16 * y[3] - 3 * y[4]) / (12 * h)
    d[1] = (-3 * y[0] - 10 * y[1] + 18 * y[2] - 6 * y[3] + y[4]) / (12 * h)
    d[-2] = -(-3 * y[-1] - 10 * y[-2] + 18 * y[-3] - 6 * y[-4] + y[-5]) / (12 * h)
    d[-1] = -(-25 * y[-1] + 48 * y[-2] - 36 * y[-3] + 16 * y[-4] - 3 * y[-5]) / (12 * h)
    return d


def _fd4_second(y: np.ndarray, h: float) -> np.ndarray:
    d = np.empty_like(y)
    d[2:-2] = (-y[4:] + 16 * y[3:-1] - 30 * y[2:-2] + 16 * y[1:-3] - y[:-4]) / (12 * h**2)
    # second-order one-sided stencils at the two points near each edge
    d[0] = (2 * y[0] - 5 * y[1] + 4 * y[2] - y[3]) / h**2
    d[1] = (y[0] - 2 * y[1] + y[2]) / h**2
    d[-2] = (y[-1] - 2 * y[-2] + y[-3]) / h**2
    d[-1] = (2 * y[-1] - 5 * y[-2] + 4 * y[-3] - y[-4]) / h**2
    return d


@dataclass
class ProfileCurve:
    """Sampled arclength profile: distance to axis, height, and derivatives."""

    s_grid: np.ndarray
    rho: np.ndarray
    h: np.ndarray
    drho: np.ndarray
    dh: np.ndarray
    d2rho: np.ndarray
    d2h: np.ndarray

    def __post_init__(self):
        speed = self.drho**2 + self.dh**2
        worst = float(np.abs(speed - 1.0).max())
        if worst > ARCLENGTH_TOL:
            raise ValueError(
                f"profile is not arclength-parametrized: |rho'^2 + h'^2 - 1| up to {worst:.3g}"
            )
        interior = self.s_grid > self.s_grid[0] + 1e-12
        if np.any(self.rho[interior] <= 0.0):
            bad = self.s_grid[interior][np.argmax(self.rho[interior] <= 0.0)]
            raise ValueError(f"rho must be positive away from the pole; rho <= 0 at s = {bad:g}")

    @classmethod
    def from_samples(
        cls,
        s: np.ndarray,
        rho: np.ndarray,
        h: np.ndarray,
        drho: Optional[np.ndarray] = None,
        dh: Optional[np.ndarray] = None,
    ) -> "ProfileCurve":
        """Build from uniform samples; missing derivatives use 4th-order differences."""
        s = np.asarray(s, dtype=float)
        rho = np.asarray(rho, dtype=float)
        h = np.asarray(h, dtype=float)
        if s.size < 7:
            raise ValueError("need at least 7 samples")
        steps = np.diff(s)
        if np.any(steps <= 0):
            raise ValueError("arclength samples must be strictly increasing")
        if np.abs(steps - steps[0]).max() > 1e-9 * steps[0]:
            raise ValueError("arclength samples must be uniform")
        hstep = float(steps[0])
        drho = _fd4_first(rho, hstep) if drho is None else np.asarray(drho, dtype=float)
        dh = _fd4_first(h, hstep) if dh is None else np.asarray(dh, dtype=float)
        return cls(
            s_grid=s, rho=rho, h=h, drho=drho, dh=dh,
            d2rho=_fd4_second(rho, hstep), d2h=_fd4_second(h, hstep),
        )


@dataclass
class RotationHypersurface:
    """A hypersurface of revolution given by vectorized profile callables."""

    m: int
    name: str
    s_min: float
    s_max: float
    rho: Callable
    h: Callable
    drho: Callable
    dh: Callable
    d2rho: Callable
    d2h: Callable
    orientation: int = 1
    meridian_fn: Optional[Callable] = None   # closed-form curvature overrides
    parallel_fn: Optional[Callable] = None

    def check_range(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        if np.any(s < self.s_min - 1e-12) or np.any(s > self.s_max + 1e-12):
            raise ValueError(f"s out of range [{self.s_min:g}, {self.s_max:g}]")
        return s

    def with_orientation(self, sign: int) -> "RotationHypersurface":
        return replace(self, orientation=int(np.sign(sign)))

    def curvatures(self, s):
        """(meridian, parallel) principal curvatures in the chosen orientation."""
        s = self.check_range(s)
        if self.meridian_fn is not None and self.parallel_fn is not None:
            mu = np.asarray(self.meridian_fn(s), dtype=float)
            lam = np.asarray(self.parallel_fn(s), dtype=float)
        else:
            dr, dhh = self.drho(s), self.dh(s)
            mu = dr * self.d2h(s) - dhh * self.d2rho(s)
            r = np.asarray(self.rho(s), dtype=float)
            with np.errstate(divide="ignore", invalid="ignore"):
                lam = np.where(r > 1e-9, dhh / np.where(r > 1e-9, r, 1.0), self.d2h(s) / np.where(np.abs(dr) > 1e-9, dr, 1.0))
        return self.orientation * mu, self.orientation * lam

    def point(self, s: float, theta: np.ndarray) -> np.ndarray:
        s = float(self.check_range(s))
        theta = _unit_direction(theta, self.m)
        return np.concatenate([float(self.rho(np.asarray(s))) * theta, [float(self.h(np.asarray(s)))]])

    def profile(self, n: int = 801) -> ProfileCurve:
        s = np.linspace(self.s_min, self.s_max, n)
        return ProfileCurve(
            s_grid=s, rho=np.asarray(self.rho(s), dtype=float), h=np.asarray(self.h(s), dtype=float),
            drho=np.asarray(self.drho(s), dtype=float), dh=np.asarray(self.dh(s), dtype=float),
            d2rho=np.asarray(self.d2rho(s), dtype=float), d2h=np.asarray(self.d2h(s), dtype=float),
        )


def _unit_direction(theta, m: int) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (m,):
        raise ValueError(f"direction Theta must have {m} components")
    norm = float(np.linalg.norm(theta))
    if abs(norm - 1.0) > 1e-8:
        raise ValueError(f"direction Theta must be a unit vector; |Theta| = {norm:g}")
    return theta


# ---------------------------------------------------------------------------
# Built-in surfaces
# ---------------------------------------------------------------------------

def cylinder(m: int = 2, radius: float = 1.0, s_max: float = 20.0) -> RotationHypersurface:
    """rho = radius, h = s: flat meridians, parallel curvature 1/radius."""
    r0 = float(radius)
    if r0 <= 0:
        raise ValueError("radius must be positive")
    const = lambda c: (lambda s: np.full_like(np.asarray(s, dtype=float), c))
    return RotationHypersurface(
        m=m, name="cylinder", s_min=0.0, s_max=float(s_max),
        rho=const(r0), h=lambda s: np.asarray(s, dtype=float),
        drho=const(0.0), dh=const(1.0), d2rho=const(0.0), d2h=const(0.0),
        meridian_fn=const(0.0), parallel_fn=const(1.0 / r0),
    )


def catenoid(s_max: float = 40.0) -> RotationHypersurface:
    """The minimal surface of revolution, arclength from the waist circle.

    rho = sqrt(1 + s^2), h = arcsinh(s); the curvatures are -1/(1+s^2) along
    the meridian and +1/(1+s^2) along the parallel, so the mean curvature
    vanishes identically.
    """
    sq = lambda s: np.sqrt(1.0 + np.asarray(s, dtype=float) ** 2)
    return RotationHypersurface(
        m=2, name="catenoid", s_min=0.0, s_max=float(s_max),
        rho=sq,
        h=lambda s: np.arcsinh(np.asarray(s, dtype=float)),
        drho=lambda s: np.asarray(s, dtype=float) / sq(s),
        dh=lambda s: 1.0 / sq(s),
        d2rho=lambda s: (1.0 + np.asarray(s, dtype=float) ** 2) ** -1.5,
        d2h=lambda s: -np.asarray(s, dtype=float) * (1.0 + np.asarray(s, dtype=float) ** 2) ** -1.5,
        meridian_fn=lambda s: -1.0 / (1.0 + np.asarray(s, dtype=float) ** 2),
        parallel_fn=lambda s: 1.0 / (1.0 + np.asarray(s, dtype=float) ** 2),
    )


def sphere_profile(m: int = 2, radius: float = 1.0) -> RotationHypersurface:
    """Round sphere: rho = R sin(s/R), h = -R cos(s/R); all curvatures 1/R."""
    R = float(radius)
    if R <= 0:
        raise ValueError("radius must be positive")
    arr = lambda s: np.asarray(s, dtype=float)
    const = lambda c: (lambda s: np.full_like(arr(s), c))
    return RotationHypersurface(
        m=m, name="sphere", s_min=0.0, s_max=pi * R,
        rho=lambda s: R * np.sin(arr(s) / R),
        h=lambda s: -R * np.cos(arr(s) / R),
        drho=lambda s: np.cos(arr(s) / R),
        dh=lambda s: np.sin(arr(s) / R),
        d2rho=lambda s: -np.sin(arr(s) / R) / R,
        d2h=lambda s: np.cos(arr(s) / R) / R,
        meridian_fn=const(1.0 / R), parallel_fn=const(1.0 / R),
    )


def surface_from_profile_csv(path, m: int) -> RotationHypersurface:
    """Load a profile from CSV columns s, rho, h (optionally rho', h').

    Derivatives missing from the file are reconstructed by 4th-order centered
    differences on the uniform s grid; evaluation between samples uses cubic
    splines.
    """
    import csv as _csv

    rows = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(_csv.reader(fh), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                rows.append([float(cell) for cell in row])
            except ValueError:
                if lineno == 1:
                    continue
                raise ValueError(f"{path}: row {lineno}: expected numeric columns")
    if len(rows) < 7:
        raise ValueError(f"{path}: need at least 7 data rows")
    ncol = len(rows[0])
    if ncol not in (3, 5):
        raise ValueError(f"{path}: expected columns s,rho,h or s,rho,h,rho',h'")
    data = np.array(rows)
    curve = ProfileCurve.from_samples(
        data[:, 0], data[:, 1], data[:, 2],
        drho=data[:, 3] if ncol == 5 else None,
        dh=data[:, 4] if ncol == 5 else None,
    )
    s = curve.s_grid
    spl = {
        "rho": CubicSpline(s, curve.rho), "h": CubicSpline(s, curve.h),
        "drho": CubicSpline(s, curve.drho), "dh": CubicSpline(s, curve.dh),
        "d2rho": CubicSpline(s, curve.d2rho), "d2h": CubicSpline(s, curve.d2h),
    }
    return RotationHypersurface(
        m=m, name=str(path), s_min=float(s[0]), s_max=float(s[-1]), **spl
    )


# ---------------------------------------------------------------------------
# Pointwise operations
# ---------------------------------------------------------------------------

def principal_curvatures(surface: RotationHypersurface, s: float) -> PrincipalSpectrum:
    """Spectrum at arclength s: meridian curvature first, then the m-1 parallels."""
    mu, lam = surface.curvatures(float(s))
    k = np.concatenate([[float(mu)], np.full(surface.m - 1, float(lam))])
    return PrincipalSpectrum(surface.m, k)


def gauss_map(surface: RotationHypersurface, s: float, theta) -> np.ndarray:
    """Unit normal at (s, Theta): orientation * (-h'(s) Theta, rho'(s))."""
    s = float(surface.check_range(s))
    theta = _unit_direction(theta, surface.m)
    nu = np.concatenate([-float(surface.dh(np.asarray(s))) * theta, [float(surface.drho(np.asarray(s)))]])
    return surface.orientation * nu


def support_function(surface: RotationHypersurface, s, theta=None):
    """Support value <f, nu> at arclength s; independent of Theta by symmetry."""
    s = surface.check_range(s)
    if theta is not None:
        _unit_direction(theta, surface.m)
    u = surface.h(s) * surface.drho(s) - surface.rho(s) * surface.dh(s)
    return surface.orientation * np.asarray(u, dtype=float)


@dataclass
class EquatorCrossings:
    """Per-sample description of where the Gauss map can hit a fixed equator.

    At arclength s the normal component along the axis-orthogonal part of the
    direction ``a`` spans [-|h'| |a_perp|, |h'| |a_perp|], so the equator
    <a, nu> = 0 is hit at some Theta exactly when |a_axis rho'| lies inside
    that span; ``witness_cos`` records the cosine between Theta and a_perp
    realizing the crossing.
    """

    a: np.ndarray
    s: np.ndarray
    has_crossing: np.ndarray
    witness_cos: np.ndarray
    identically_zero: bool

    @property
    def fraction(self) -> float:
        return float(np.mean(self.has_crossing))


def equator_crossings(
    surface: RotationHypersurface, a, window, n: int = 512
) -> EquatorCrossings:
    """Scan a window of arclengths for Gauss-map crossings of the equator normal to a."""
    a = np.asarray(a, dtype=float)
    if a.shape != (surface.m + 1,):
        raise ValueError(f"direction a must have {surface.m + 1} components")
    norm = float(np.linalg.norm(a))
    if norm == 0.0:
        raise ValueError("direction a must be nonzero")
    a = a / norm
    s_lo, s_hi = float(window[0]), float(window[1])
    surface.check_range(np.array([s_lo, s_hi]))
    s = np.linspace(s_lo, s_hi, n)

    a_perp, a_ax = a[: surface.m], a[surface.m]
    p = float(np.linalg.norm(a_perp))
    axial = a_ax * np.asarray(surface.drho(s), dtype=float)
    dh = np.asarray(surface.dh(s), dtype=float)
    amp = np.abs(dh) * p

    scale = max(float(np.abs(axial).max()), float(amp.max()), 1.0)
    identically_zero = bool((np.abs(axial) + amp).max() <= 1e-12 * scale)
    has = np.abs(axial) <= amp + 1e-12 * scale
    if identically_zero:
        has = np.ones_like(has)
    with np.errstate(divide="ignore", invalid="ignore"):
        cosines = np.where(amp > 0, axial / np.where(amp > 0, dh * p, 1.0), np.nan)
    cosines = np.where(has & np.isfinite(cosines), np.clip(cosines, -1.0, 1.0), np.nan)
    return EquatorCrossings(
        a=a, s=s, has_crossing=has, witness_cos=cosines, identically_zero=identically_zero
    )


@dataclass
class EnvelopeProbe:
    """Scan result for whether a point q lies on some affine tangent plane.

    ``gap`` records, per sample, the distance of the shifted support value
    from the interval it must hit; q is covered where the gap is <= 0.
    """

    q: np.ndarray
    covered: bool
    witness_s: Optional[float]
    witness_cos: Optional[float]
    s: np.ndarray
    gap: np.ndarray


def tangent_envelope_probe(
    surface: RotationHypersurface, q, window, n: int = 1024
) -> EnvelopeProbe:
    """Decide whether q belongs to a tangent plane over the given arclength window.

    q lies on the tangent plane at (s, Theta) exactly when the shifted support
    function <f - q, nu> vanishes there.  For axis points the function is
    Theta-independent and the probe refines a sign change by bisection; in
    general the Theta-freedom contributes an interval of reachable values per
    sample and the probe checks whether it contains zero.
    """
    q = np.asarray(q, dtype=float)
    if q.shape != (surface.m + 1,):
        raise ValueError(f"point q must have {surface.m + 1} components")
    s_lo, s_hi = float(window[0]), float(window[1])
    surface.check_range(np.array([s_lo, s_hi]))
    s = np.linspace(s_lo, s_hi, n)

    q_perp, q_ax = q[: surface.m], q[surface.m]
    p = float(np.linalg.norm(q_perp))
    u = support_function(surface, s)
    center = u - surface.orientation * q_ax * np.asarray(surface.drho(s), dtype=float)
    dh = np.asarray(surface.dh(s), dtype=float)
    halfwidth = np.abs(dh) * p
    gap = np.abs(center) - halfwidth

    if p == 0.0:
        # Theta-independent shifted support: a zero shows up as a sign change.
        cfun = lambda x: float(
            support_function(surface, x) - surface.orientation * q_ax * float(surface.drho(np.asarray(x)))
        )
        sign = np.sign(center)
        flips = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
        exact = np.nonzero(sign == 0)[0]
        if flips.size:
            i = flips[0]
            witness_s = float(brentq(cfun, s[i], s[i + 1], xtol=1e-12))
        elif exact.size:
            witness_s = float(s[exact[0]])
        else:
            return EnvelopeProbe(q=q, covered=False, witness_s=None, witness_cos=None, s=s, gap=gap)
        return EnvelopeProbe(q=q, covered=True, witness_s=witness_s, witness_cos=None, s=s, gap=gap)

    covered_mask = gap <= 1e-12 * max(1.0, float(np.abs(center).max()))
    if not covered_mask.any():
        return EnvelopeProbe(q=q, covered=False, witness_s=None, witness_cos=None, s=s, gap=gap)
    idx = int(np.argmax(covered_mask))
    witness_s = float(s[idx])
    denom = surface.orientation * dh[idx] * p
    witness_cos = float(np.clip(-center[idx] / denom, -1.0, 1.0)) if denom != 0 else None
    return EnvelopeProbe(q=q, covered=True, witness_s=witness_s, witness_cos=witness_cos, s=s, gap=gap)


# ---------------------------------------------------------------------------
# Radial curvature-volume data
# ---------------------------------------------------------------------------

def radial_data(
    surface: RotationHypersurface,
    j: int,
    t_max: Optional[float] = None,
    r0: Optional[float] = None,
    assert_pole_chart: bool = False,
    with_exact_potential: bool = True,
    n_spectra: int = 32,
) -> GeometricProfileData:
    """Radial weights v_j, v_1 and the exact potential integrand of a surface.

    Over geodesic spheres of the radial distance s the weight is
    v_j(s) = omega_{m-1} rho(s)^{m-1} H_j(s).  Admitted are profiles whose
    meridians from the origin are minimizing: either a genuine pole
    (rho -> 0) or an asserted pole chart, and rho' > 0 on the sampled range
    (a sufficient condition; the cylinder is rejected here).  A positive
    ``r0`` freezes the curvature factor to its near-origin value on [0, r0/2]
    with a C^1 blend, which keeps the weight positive near the origin.
    """
    m = surface.m
    if not 0 <= j <= m - 2:
        raise ValueError(f"index j must satisfy 0 <= j <= {m - 2}, got {j}")
    t_max = float(t_max if t_max is not None else surface.s_max)
    if not surface.s_min < t_max <= surface.s_max + 1e-12:
        raise ValueError("t_max outside the profile range")

    probe_s = np.linspace(max(surface.s_min, 1e-8 * t_max), t_max, 1025)
    rho_near = float(surface.rho(np.asarray(probe_s[0])))
    rho_scale = float(np.abs(surface.rho(probe_s)).max())
    has_pole = rho_near <= 1e-6 * rho_scale
    if not has_pole and not assert_pole_chart:
        raise ValueError(
            "profile has rho(0) != 0; pass assert_pole_chart=True if the origin "
            "is a genuine pole chart for the radial distance"
        )
    interior = probe_s[probe_s > probe_s[0]]
    drho_vals = np.asarray(surface.drho(interior), dtype=float)
    if np.any(drho_vals <= 1e-12):
        bad = interior[np.argmax(drho_vals <= 1e-12)]
        raise ValueError(
            f"meridian-minimizing condition rho' > 0 fails at s = {bad:g}; "
            "this profile is not admitted for radial data"
        )

    omega = unit_sphere_area(m)
    orient = surface.orientation

    def spectrum_parts(t):
        mu, lam = surface.curvatures(t)
        return np.asarray(mu, dtype=float), np.asarray(lam, dtype=float)

    def h_of(t, order):
        mu, lam = spectrum_parts(t)
        return _sym_two_value(mu, lam, m, order) / _c(m, order)

    hj_vals = h_of(probe_s, j)
    if np.any(hj_vals <= 0.0):
        bad = probe_s[np.argmax(hj_vals <= 0.0)]
        raise ValueError(
            f"H_{j} must be positive for the radial weight; H_{j}({bad:g}) <= 0 "
            "(check orientation or the ellipticity hypotheses)"
        )

    hj_fn: Callable = lambda t: h_of(t, j)
    if r0:
        hj_fn = hermite_blend(float(hj_vals[0]), hj_fn, float(r0))

    def vj_fn(t, _hj=hj_fn):
        t = np.asarray(t, dtype=float)
        return omega * np.asarray(surface.rho(t), dtype=float) ** (m - 1) * _hj(t)

    def v1_fn(t):
        t = np.asarray(t, dtype=float)
        return omega * np.asarray(surface.rho(t), dtype=float) ** (m - 1) * h_of(t, 1)

    exact_fn = None
    if with_exact_potential:
        def exact_fn(t):
            t = np.asarray(t, dtype=float)
            mu, lam = spectrum_parts(t)
            S1 = _sym_two_value(mu, lam, m, 1)
            Sj1 = _sym_two_value(mu, lam, m, j + 1)
            Sj2 = _sym_two_value(mu, lam, m, j + 2)
            pot = S1 * Sj1 - (j + 2) * Sj2
            return omega * np.asarray(surface.rho(t), dtype=float) ** (m - 1) * pot

    hj1 = h_of(probe_s, j + 1)
    spread = float(hj1.max() - hj1.min())
    mean = float(hj1.mean())
    if spread <= 1e-10 * max(1.0, abs(mean)):
        hj1_const = 0.0 if abs(mean) <= 1e-12 else mean
    else:
        hj1_const = None

    v_j = CoefficientProfile.from_callable(
        vj_fn, t_max, inverse_tail=None, name=f"v_{j}[{surface.name}]"
    )
    sample_s = np.linspace(probe_s[0], t_max, n_spectra)
    spectra = tuple(principal_curvatures(surface, float(s)) for s in sample_s)
    return GeometricProfileData(
        m=m, j=j, Hj1_const=hj1_const, v_j=v_j, v_1=v1_fn,
        exact_potential=exact_fn, R0=float(r0 or 0.0), t_max=t_max,
        spectra=spectra, provenance=f"surface:{surface.name}(orientation={orient:+d})",
    )


# ---------------------------------------------------------------------------
# Divergence-identity harness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JacobiIdentityResult:
    """Both sides of a divergence identity at one point, and their difference."""

    identity: str
    lhs: float
    rhs: float

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)


def _fd5_derivative(fn: Callable, s: float, step: float) -> float:
    pts = s + step * np.array([-2.0, -1.0, 1.0, 2.0])
    f = np.array([float(fn(p)) for p in pts])
    return float((f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * step))


def jacobi_identity_check(
    surface: RotationHypersurface,
    a,
    s: float,
    theta,
    j: int,
    identity: str = "first",
    step: float = 0.01,
) -> JacobiIdentityResult:
    """Numerically verify a divergence identity of the Newton operator at one point.

    ``first`` checks the identity for the Gauss-map component <a, nu>:
        L_j <a, nu> = -(S_1 S_{j+1} - (j+2) S_{j+2}) <a, nu> - <grad S_{j+1}, a>;
    ``second`` the one for the support function <f, nu>, which carries the
    extra inhomogeneous term -(j+1) S_{j+1}.

    On a rotation hypersurface both functions split into a radial part and a
    first spherical harmonic in Theta, so L_j reduces to one-dimensional
    divergence expressions; the radial derivative is taken by a 4th-order
    centered difference (this is a verification harness, not a theorem).
    """
    m = surface.m
    if not 0 <= j <= m - 1:
        raise ValueError(f"index j must satisfy 0 <= j <= {m - 1}, got {j}")
    s = float(s)
    if not (surface.s_min + 2 * step <= s <= surface.s_max - 2 * step):
        raise ValueError("finite-difference stencil out of the profile range")
    theta = _unit_direction(theta, m)
    orient = surface.orientation

    def curz(t):
        mu, lam = surface.curvatures(np.asarray(t, dtype=float))
        return np.asarray(mu, dtype=float), np.asarray(lam, dtype=float)

    def p_meridian(t):
        _, lam = curz(t)
        return _c(m - 1, j) * lam**j

    def p_parallel(t):
        mu, lam = curz(t)
        out = _c(m - 2, j) * lam**j
        if j >= 1:
            out = out + mu * _c(m - 2, j - 1) * lam ** (j - 1)
        return out

    def potential_at(t):
        mu, lam = curz(t)
        S1 = _sym_two_value(mu, lam, m, 1)
        Sj1 = _sym_two_value(mu, lam, m, j + 1)
        Sj2 = _sym_two_value(mu, lam, m, j + 2)
        return S1 * Sj1 - (j + 2) * Sj2

    def sj1_at(t):
        mu, lam = curz(t)
        return _sym_two_value(mu, lam, m, j + 1)

    rho_pow = lambda t: float(surface.rho(np.asarray(t))) ** (m - 1)

    def radial_operator(phi_prime: Callable, at: float) -> float:
        flux = lambda t: rho_pow(t) * float(p_meridian(t)) * phi_prime(t)
        return _fd5_derivative(flux, at, step) / rho_pow(at)

    if identity == "first":
        a = np.asarray(a, dtype=float)
        if a.shape != (m + 1,):
            raise ValueError(f"direction a must have {m + 1} components")
        a_perp, a_ax = a[:m], a[m]
        p = float(np.linalg.norm(a_perp))
        y1 = float(a_perp @ theta) / p if p > 0 else 0.0

        phi0 = lambda t: orient * a_ax * float(surface.drho(np.asarray(t)))
        phi0p = lambda t: orient * a_ax * float(surface.d2rho(np.asarray(t)))
        phi1 = lambda t: -orient * p * float(surface.dh(np.asarray(t)))
        phi1p = lambda t: -orient * p * float(surface.d2h(np.asarray(t)))

        lhs = radial_operator(phi0p, s)
        if p > 0:
            angular = (m - 1) * float(p_parallel(s)) * phi1(s) / float(surface.rho(np.asarray(s))) ** 2
            lhs += (radial_operator(phi1p, s) - angular) * y1

        u_val = phi0(s) + phi1(s) * y1
        sj1_prime = _fd5_derivative(sj1_at, s, step)
        tangent_a = float(surface.drho(np.asarray(s))) * float(a_perp @ theta) + float(
            surface.dh(np.asarray(s))
        ) * a_ax
        rhs = -float(potential_at(s)) * u_val - sj1_prime * tangent_a
        return JacobiIdentityResult(identity="first", lhs=lhs, rhs=rhs)

    if identity == "second":
        u0 = lambda t: orient * (
            float(surface.h(np.asarray(t))) * float(surface.drho(np.asarray(t)))
            - float(surface.rho(np.asarray(t))) * float(surface.dh(np.asarray(t)))
        )
        u0p = lambda t: orient * (
            float(surface.h(np.asarray(t))) * float(surface.d2rho(np.asarray(t)))
            - float(surface.rho(np.asarray(t))) * float(surface.d2h(np.asarray(t)))
        )
        lhs = radial_operator(u0p, s)
        sj1_prime = _fd5_derivative(sj1_at, s, step)
        tangent_f = float(surface.rho(np.asarray(s))) * float(surface.drho(np.asarray(s))) + float(
            surface.h(np.asarray(s))
        ) * float(surface.dh(np.asarray(s)))
        rhs = -(j + 1) * float(sj1_at(s)) - float(potential_at(s)) * u0(s) - sj1_prime * tangent_f
        return JacobiIdentityResult(identity="second", lhs=lhs, rhs=rhs)

    raise ValueError(f"unknown identity {identity!r}, expected 'first' or 'second'")
