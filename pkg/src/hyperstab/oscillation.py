"""Solver and oscillation tests for the weighted radial equation

    (v(t) z'(t))' + A(t) v(t) z(t) = 0,    t > 0,

whose coefficient v may vanish at the origin.  The bounded-derivative start at
t = 0 is realized by a Picard iteration on the equivalent integral equation
over a thin initial layer; from the edge of the layer onward the first-order
system (z, w = v z') is integrated by an adaptive Runge-Kutta method with
dense output, which also drives zero bracketing and refinement.

Two one-sided oscillation tests are provided.  Both only ever answer
OSCILLATORY or INCONCLUSIVE: a failed test never claims that a solution is
free of zeros.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.interpolate import CubicSpline, PchipInterpolator
from scipy.optimize import brentq

__all__ = [
    "CoefficientProfile",
    "PotentialProfile",
    "CauchySolution",
    "ProbeResult",
    "CriterionResult",
    "solve_singular_cauchy",
    "solve_interior_cauchy",
    "find_zeros",
    "integral_divergence_probe",
    "criterion_nonintegrable",
    "criterion_integrable",
    "inverse_integral_from",
    "power_profile",
    "exp_profile",
    "constant_profile",
    "constant_potential",
    "potential_from_callable",
    "profile_from_csv",
]

DIVERGENT = "DIVERGENT"
CONVERGENT = "CONVERGENT"
INCONCLUSIVE = "INCONCLUSIVE"
OSCILLATORY = "OSCILLATORY"

DEFAULT_TOL = 1e-10
ZERO_XTOL = 1e-12      # bisection tolerance for zero locations
RATIO_MARGIN = 0.02    # stability margin around the threshold 1 of the ratio test
DIVERGENCE_RATIO = 0.95
CONVERGENCE_RATIO = 0.75
PROBE_WINDOWS = 8
_CHUNK_LENGTH = 4.0    # integration restarts this often to refresh error scales
_GRID_SUBDIV = 6       # dense-output samples stored per accepted solver step
_SCALE_FLOOR = 1e-290


def _cumtrapz(y: np.ndarray, x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(y)
    out[1:] = np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(x))
    return out


# ---------------------------------------------------------------------------
# Profiles
# ---------------------------------------------------------------------------

def _detection_grid(t_max: float) -> np.ndarray:
    lo = np.geomspace(t_max * 1e-8, t_max * 1e-2, 200)
    hi = np.linspace(t_max * 1e-2, t_max, 1201)
    return np.unique(np.concatenate([lo, hi]))


@dataclass
class CoefficientProfile:
    """Radial weight v(t) on (0, t_max].

    ``vanishes_at_zero`` records the singular-origin behaviour (v nondecreasing
    near 0 with v -> 0), ``locally_bounded_inverse`` that 1/v is bounded on
    compact subsets of (0, t_max].  ``inverse_tail``, when supplied, evaluates
    the exact remainder integral of 1/v from t to infinity and is used by the
    integrable-case ratio test; sampled profiles fall back to a geometric
    extrapolation of the last windows.
    """

    fn: Callable
    t_max: float
    vanishes_at_zero: bool
    locally_bounded_inverse: bool
    inverse_tail: Optional[Callable] = None
    name: str = "v"
    monotone_radius: float = 0.0
    grid: Optional[np.ndarray] = field(default=None, repr=False)

    def __call__(self, t):
        return np.asarray(self.fn(np.asarray(t, dtype=float)), dtype=float)

    @classmethod
    def from_callable(
        cls,
        fn: Callable,
        t_max: float,
        vanishes_at_zero: Optional[bool] = None,
        inverse_tail: Optional[Callable] = None,
        name: str = "v",
    ) -> "CoefficientProfile":
        if t_max <= 0:
            raise ValueError("t_max must be positive")
        grid = _detection_grid(t_max)
        vals = np.asarray(fn(grid), dtype=float)
        _validate_coefficient(vals, grid, name)
        if vanishes_at_zero is None:
            t_ref = min(1.0, t_max)
            v_ref = float(fn(np.asarray(t_ref)))
            v_near = float(fn(np.asarray(1e-8 * t_ref)))
            vanishes_at_zero = v_ref > 0 and v_near < 1e-6 * v_ref
        return cls(
            fn=fn,
            t_max=float(t_max),
            vanishes_at_zero=bool(vanishes_at_zero),
            locally_bounded_inverse=True,
            inverse_tail=inverse_tail,
            name=name,
            monotone_radius=_monotone_radius(vals, grid),
            grid=grid,
        )

    @classmethod
    def from_samples(
        cls,
        t: np.ndarray,
        values: np.ndarray,
        vanishes_at_zero: Optional[bool] = None,
        inverse_tail: Optional[Callable] = None,
        name: str = "v",
    ) -> "CoefficientProfile":
        t = np.asarray(t, dtype=float)
        values = np.asarray(values, dtype=float)
        _validate_sample_grid(t, values, name, nonnegative=True)
        interp = PchipInterpolator(t, values, extrapolate=False)
        t0, v0 = t[0], values[0]
        vanish = vanishes_at_zero
        if vanish is None:
            # infer from the leading samples: extrapolate linearly to t = 0 and
            # compare against the profile scale at t ~ 1 (heuristic; pass the
            # flag explicitly for slowly vanishing profiles)
            slope = (values[1] - v0) / (t[1] - t0)
            extrapolated = v0 - t0 * slope
            ref = values[min(int(np.searchsorted(t, min(1.0, t[-1]))), len(t) - 1)]
            vanish = bool(extrapolated <= 0.05 * max(ref, 1e-300))

        def fn(x, _interp=interp, _t0=t0, _v0=v0, _t1=t[-1], _v1=values[-1], _vanish=vanish):
            x = np.asarray(x, dtype=float)
            out = _interp(np.clip(x, _t0, _t1))
            out = np.where(x >= _t1, _v1, out)  # exact at the right endpoint
            below = x < _t0
            if np.any(below):
                out = np.where(below, (_v0 / _t0) * x if _vanish else _v0, out)
            return np.maximum(out, 0.0)

        _validate_coefficient(values, t, name)
        return cls(
            fn=fn,
            t_max=float(t[-1]),
            vanishes_at_zero=bool(vanish),
            locally_bounded_inverse=True,
            inverse_tail=inverse_tail,
            name=name,
            monotone_radius=_monotone_radius(values, t),
            grid=t,
        )


def _validate_coefficient(vals: np.ndarray, grid: np.ndarray, name: str) -> None:
    if not np.all(np.isfinite(vals)):
        raise ValueError(f"profile {name}: non-finite values on the evaluation grid")
    if np.any(vals < 0.0):
        i = int(np.argmax(vals < 0.0))
        raise ValueError(f"profile {name}: negative value {vals[i]:g} at t = {grid[i]:g}")
    positive = vals > 0.0
    if not positive.any():
        raise ValueError(f"profile {name}: identically zero on the evaluation grid")
    first_pos = int(np.argmax(positive))
    if not positive[first_pos:].all():
        i = first_pos + int(np.argmax(~positive[first_pos:]))
        raise ValueError(
            f"profile {name}: vanishes at interior point t = {grid[i]:g} "
            "(1/v must be locally bounded away from the origin)"
        )


def _monotone_radius(vals: np.ndarray, grid: np.ndarray) -> float:
    slack = 1e-12 * max(1.0, float(np.abs(vals).max()))
    bad = np.nonzero(np.diff(vals) < -slack)[0]
    if bad.size == 0:
        return float(grid[-1])
    return float(grid[bad[0]])


@dataclass
class PotentialProfile:
    """Nonnegative potential A(t) on (0, t_max].

    A profile that is identically zero is constructible (the constant solution
    is a legitimate solver case) but is rejected by the oscillation criteria.
    """

    fn: Callable
    t_max: float
    identically_zero: bool
    name: str = "A"

    def __call__(self, t):
        return np.asarray(self.fn(np.asarray(t, dtype=float)), dtype=float)

    @classmethod
    def from_callable(cls, fn: Callable, t_max: float, name: str = "A") -> "PotentialProfile":
        if t_max <= 0:
            raise ValueError("t_max must be positive")
        grid = _detection_grid(t_max)
        vals = np.asarray(fn(grid), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise ValueError(f"potential {name}: non-finite values on the evaluation grid")
        if np.any(vals < 0.0):
            i = int(np.argmax(vals < 0.0))
            raise ValueError(f"potential {name}: negative value {vals[i]:g} at t = {grid[i]:g}")
        return cls(fn=fn, t_max=float(t_max), identically_zero=bool(vals.max() == 0.0), name=name)

    @classmethod
    def from_samples(cls, t: np.ndarray, values: np.ndarray, name: str = "A") -> "PotentialProfile":
        t = np.asarray(t, dtype=float)
        values = np.asarray(values, dtype=float)
        _validate_sample_grid(t, values, name, nonnegative=True)
        interp = PchipInterpolator(t, values, extrapolate=False)

        def fn(x, _interp=interp, _t0=t[0], _v0=values[0], _t1=t[-1], _v1=values[-1]):
            x = np.asarray(x, dtype=float)
            out = _interp(np.clip(x, _t0, _t1))
            out = np.where(x >= _t1, _v1, out)
            return np.maximum(np.where(x < _t0, _v0, out), 0.0)

        return cls(fn=fn, t_max=float(t[-1]), identically_zero=bool(values.max() == 0.0), name=name)


def _validate_sample_grid(t: np.ndarray, values: np.ndarray, name: str, nonnegative: bool) -> None:
    if t.ndim != 1 or t.shape != values.shape or t.size < 2:
        raise ValueError(f"profile {name}: need matching 1-d abscissae and values, at least 2 rows")
    bad = np.nonzero(np.diff(t) <= 0.0)[0]
    if bad.size:
        raise ValueError(f"profile {name}: abscissae must be strictly increasing (row {bad[0] + 2})")
    if nonnegative and np.any(values < 0.0):
        i = int(np.argmax(values < 0.0))
        raise ValueError(f"profile {name}: negative value {values[i]:g} in row {i + 1}")


# ---------------------------------------------------------------------------
# Built-in profile families (carry exact tail integrals where they exist)
# ---------------------------------------------------------------------------

def power_profile(exponent: float, t_max: float, scale: float = 1.0) -> CoefficientProfile:
    """v(t) = scale * t**exponent."""
    if scale <= 0:
        raise ValueError("scale must be positive")
    p, c = float(exponent), float(scale)
    tail = None
    if p > 1:
        def tail(t, _p=p, _c=c):
            t = np.asarray(t, dtype=float)
            return t ** (1.0 - _p) / (_c * (_p - 1.0))
    return CoefficientProfile.from_callable(
        lambda t: c * np.power(t, p), t_max,
        vanishes_at_zero=p > 0, inverse_tail=tail, name=f"{c:g}*t^{p:g}",
    )


def exp_profile(rate: float, t_max: float, scale: float = 1.0) -> CoefficientProfile:
    """v(t) = scale * exp(rate * t)."""
    if scale <= 0:
        raise ValueError("scale must be positive")
    r, c = float(rate), float(scale)
    tail = None
    if r > 0:
        def tail(t, _r=r, _c=c):
            return np.exp(-_r * np.asarray(t, dtype=float)) / (_c * _r)
    return CoefficientProfile.from_callable(
        lambda t: c * np.exp(r * np.asarray(t, dtype=float)), t_max,
        vanishes_at_zero=False, inverse_tail=tail, name=f"{c:g}*exp({r:g}t)",
    )


def constant_profile(value: float, t_max: float) -> CoefficientProfile:
    if value <= 0:
        raise ValueError("a constant coefficient must be positive")
    c = float(value)
    return CoefficientProfile.from_callable(
        lambda t: np.full_like(np.asarray(t, dtype=float), c), t_max,
        vanishes_at_zero=False, name=f"{c:g}",
    )


def constant_potential(value: float, t_max: float) -> PotentialProfile:
    c = float(value)
    if c < 0:
        raise ValueError("potential must be nonnegative")
    return PotentialProfile.from_callable(
        lambda t: np.full_like(np.asarray(t, dtype=float), c), t_max, name=f"{c:g}"
    )


def potential_from_callable(fn: Callable, t_max: float, name: str = "A") -> PotentialProfile:
    return PotentialProfile.from_callable(fn, t_max, name=name)


def profile_from_csv(path, kind: str = "coefficient"):
    """Load a two-column CSV (t, value) with strictly increasing t.

    ``kind`` selects the profile type: "coefficient" for the weight v,
    "potential" for A.  A single non-numeric header row is tolerated.
    """
    rows, lines = [], []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                rows.append((float(row[0]), float(row[1])))
            except (ValueError, IndexError):
                if lineno == 1:
                    continue  # header
                raise ValueError(f"{path}: row {lineno}: expected two numeric columns")
            lines.append(lineno)
    if len(rows) < 2:
        raise ValueError(f"{path}: need at least two data rows")
    t = np.array([r[0] for r in rows])
    values = np.array([r[1] for r in rows])
    bad = np.nonzero(np.diff(t) <= 0.0)[0]
    if bad.size:
        raise ValueError(f"{path}: row {lines[bad[0] + 1]}: abscissae must be strictly increasing")
    if np.any(values < 0.0):
        i = int(np.argmax(values < 0.0))
        raise ValueError(f"{path}: row {lines[i]}: negative value {values[i]:g}")
    name = str(path)
    if kind == "coefficient":
        return CoefficientProfile.from_samples(t, values, name=name)
    if kind == "potential":
        return PotentialProfile.from_samples(t, values, name=name)
    raise ValueError(f"unknown profile kind {kind!r}")


# ---------------------------------------------------------------------------
# Dense solution storage
# ---------------------------------------------------------------------------

class _PiecewiseDense:
    """Dense (z, w) evaluator stitched from the layer spline and solver chunks."""

    def __init__(self, segments):
        # segments: list of (t_lo, t_hi, eval_fn); eval_fn maps a sorted array
        # of times to a (2, n) array of (z, w) values.
        self.segments = segments
        self.edges = np.array([seg[0] for seg in segments] + [segments[-1][1]])

    def __call__(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty((2, t.size))
        idx = np.clip(np.searchsorted(self.edges, t, side="right") - 1, 0, len(self.segments) - 1)
        for seg_id in np.unique(idx):
            mask = idx == seg_id
            out[:, mask] = np.asarray(self.segments[seg_id][2](t[mask]))
        return out


@dataclass
class CauchySolution:
    """A computed solution: samples of z and of the flux w = v z', with its zeros.

    The stored samples are dense-output evaluations of the adaptive integrator;
    ``evaluate`` interpolates (z, w) anywhere in the solved range at the
    integrator's own accuracy.
    """

    grid: np.ndarray
    z: np.ndarray
    w: np.ndarray
    zeros: np.ndarray
    start_kind: str  # "singular_origin" | "interior"
    v: CoefficientProfile
    A: PotentialProfile
    tol: float
    dense: _PiecewiseDense = field(repr=False)

    def evaluate(self, t):
        return self.dense(t)

    def flux_residual(self, t1: float, t2: float) -> float:
        """|w(t2) - w(t1) + integral of A v z over [t1, t2]| by adaptive quadrature."""
        import warnings

        from scipy.integrate import IntegrationWarning

        z1, w1 = self.dense(t1)[:, 0]
        z2, w2 = self.dense(t2)[:, 0]
        with warnings.catch_warnings():
            # sampled profiles have kinks at the nodes; quad bottoms out near
            # roundoff, which is far below the 10 * tol comparison scale
            warnings.simplefilter("ignore", IntegrationWarning)
            integral, _ = quad(
                lambda s: float(self.A(s)) * float(self.v(s)) * float(self.dense(s)[0, 0]),
                t1, t2, epsabs=1e-14, epsrel=1e-12, limit=200,
            )
        return abs(w2 - w1 + integral)

    def flux_residuals(self, n_checkpoints: int = 16):
        """Residuals of the flux identity over consecutive checkpoints, with local scales."""
        lo = self.grid[0] if self.start_kind == "interior" else max(self.grid[0], 1e-6 * self.grid[-1])
        pts = np.linspace(lo, self.grid[-1], n_checkpoints + 1)
        res, scales = [], []
        for t1, t2 in zip(pts[:-1], pts[1:]):
            res.append(self.flux_residual(t1, t2))
            w1 = abs(self.dense(t1)[1, 0])
            w2 = abs(self.dense(t2)[1, 0])
            scales.append(max(w1, w2, 1.0))
        return np.array(res), np.array(scales)

    def to_csv(self, path) -> None:
        """Write the stored samples as CSV columns t, z, flux."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "z", "flux"])
            for t, z, w in zip(self.grid, self.z, self.w):
                writer.writerow([format(t, ".17g"), format(z, ".17g"), format(w, ".17g")])


# ---------------------------------------------------------------------------
# Solvers
# ---------------------------------------------------------------------------

def _picard_layer(v: CoefficientProfile, A: PotentialProfile, z0: float, eps0: float, tol: float):
    """Solve the integral form of the singular start on [0, eps] by Picard iteration.

    The layer width is halved (at most 40 times) until the iteration contracts
    with factor <= 1/2 in the sup norm.  Returns the layer grid, z, and the
    inner integral of A v z (whose negative is the flux w).
    """
    eps = float(eps0)
    for _ in range(40):
        t = np.linspace(0.0, eps, 1025)
        vv = v(t)
        if np.any(vv[1:] <= 0.0):
            bad = t[1:][np.argmax(vv[1:] <= 0.0)]
            raise ValueError(f"v vanishes in the interior of the domain near t = {bad:g}")
        aa = A(t)
        z = np.full_like(t, float(z0))
        prev_delta = None
        converged = False
        contracts = True
        for _ in range(60):
            inner = _cumtrapz(aa * vv * z, t)
            g = np.zeros_like(t)
            g[1:] = inner[1:] / vv[1:]
            z_new = z0 - _cumtrapz(g, t)
            delta = float(np.max(np.abs(z_new - z)))
            z = z_new
            if delta <= max(tol * abs(z0), 1e-15):
                converged = True
                break
            if prev_delta is not None and delta > 0.5 * prev_delta:
                contracts = False
                break
            prev_delta = delta
        if converged and contracts:
            inner = _cumtrapz(aa * vv * z, t)
            return t, z, inner
        eps *= 0.5
    raise RuntimeError(
        f"Picard layer failed to contract with factor <= 1/2 down to width {eps:g}"
    )


def _subdivide(nodes: np.ndarray, k: int) -> np.ndarray:
    parts = [np.linspace(a, b, k + 1)[:-1] for a, b in zip(nodes[:-1], nodes[1:])]
    parts.append(nodes[-1:])
    return np.concatenate(parts)


def _integrate_chunks(v, A, t_start, y_start, t_max, tol, z_scale0, w_scale0):
    """Integrate (z, w) from t_start to t_max in chunks with refreshed error scales.

    Between chunks the absolute tolerance is re-anchored to the amplitude
    envelope observed over the previous chunk, so strongly damped solutions
    keep enough relative accuracy for zero location.  (A fixed absolute floor
    would swamp amplitudes that decay below it.)
    """
    vfn, Afn = v.fn, A.fn

    def rhs(t, y):
        vt = float(vfn(t))
        return (y[1] / vt, -float(Afn(t)) * vt * y[0])

    n_chunks = max(1, int(np.ceil((t_max - t_start) / _CHUNK_LENGTH)))
    edges = np.linspace(t_start, t_max, n_chunks + 1)
    az = max(abs(float(y_start[0])), z_scale0, _SCALE_FLOOR)
    # The flux scale can start at zero (e.g. z'(t0) = 0); anchor it to the
    # impedance scale of the equation so the error control stays meaningful.
    v0 = float(vfn(t_start))
    a0 = float(Afn(t_start))
    aw = max(abs(float(y_start[1])), w_scale0, az * v0 * max(np.sqrt(max(a0, 0.0)), 1e-8), _SCALE_FLOOR)

    rtol = max(tol, 1e-13)
    y = np.asarray(y_start, dtype=float)
    segments, ts, zs, ws = [], [], [], []
    for t_lo, t_hi in zip(edges[:-1], edges[1:]):
        res = solve_ivp(
            rhs, (t_lo, t_hi), y, method="DOP853",
            rtol=rtol, atol=np.array([1e-14 * az, 1e-14 * aw]),
            dense_output=True, first_step=min(0.02 * (t_hi - t_lo), 0.5),
        )
        if not res.success:
            raise RuntimeError(f"adaptive integration failed on [{t_lo:g}, {t_hi:g}]: {res.message}")
        tt = _subdivide(res.t, _GRID_SUBDIV)
        vals = res.sol(tt)
        segments.append((t_lo, t_hi, res.sol))
        start = 1 if ts else 0  # drop duplicated chunk boundary
        ts.append(tt[start:])
        zs.append(vals[0, start:])
        ws.append(vals[1, start:])
        az = max(float(np.abs(vals[0]).max()), _SCALE_FLOOR)
        aw = max(float(np.abs(vals[1]).max()), _SCALE_FLOOR)
        y = res.y[:, -1]
    return np.concatenate(ts), np.concatenate(zs), np.concatenate(ws), segments


def solve_singular_cauchy(
    v: CoefficientProfile,
    A: PotentialProfile,
    z0: float,
    t_max: Optional[float] = None,
    tol: float = DEFAULT_TOL,
) -> CauchySolution:
    """Solve with the bounded-derivative start z(0+) = z0 > 0 at the singular origin."""
    if z0 <= 0:
        raise ValueError("singular start requires z0 > 0")
    if not v.vanishes_at_zero:
        raise ValueError("singular start requires a coefficient with v(t) -> 0 as t -> 0+")
    if not v.locally_bounded_inverse:
        raise ValueError("coefficient must have locally bounded inverse away from the origin")
    t_max = float(t_max if t_max is not None else v.t_max)
    if t_max <= 0:
        raise ValueError("t_max must be positive")

    a = v.monotone_radius if v.monotone_radius > 0 else t_max
    eps0 = min(a / 10.0, 1e-3 * t_max)
    t_layer, z_layer, inner = _picard_layer(v, A, z0, eps0, tol)
    w_layer = -inner
    eps = t_layer[-1]

    z_spline = CubicSpline(t_layer, z_layer)
    w_spline = CubicSpline(t_layer, w_layer)
    layer_seg = (0.0, eps, lambda t: np.vstack([z_spline(t), w_spline(t)]))

    grid_c, z_c, w_c, segments = _integrate_chunks(
        v, A, eps, (z_layer[-1], w_layer[-1]), t_max, tol,
        z_scale0=float(np.abs(z_layer).max()),
        w_scale0=float(np.abs(w_layer).max()),
    )

    stride = max(1, len(t_layer) // 64)
    grid = np.concatenate([t_layer[::stride], grid_c[1:]])
    z = np.concatenate([z_layer[::stride], z_c[1:]])
    w = np.concatenate([w_layer[::stride], w_c[1:]])

    sol = CauchySolution(
        grid=grid, z=z, w=w, zeros=np.empty(0), start_kind="singular_origin",
        v=v, A=A, tol=tol, dense=_PiecewiseDense([layer_seg] + segments),
    )
    sol.zeros = find_zeros(sol)
    return sol


def solve_interior_cauchy(
    v: CoefficientProfile,
    A: PotentialProfile,
    t0: float,
    z0: float,
    zp0: float,
    t_max: Optional[float] = None,
    tol: float = DEFAULT_TOL,
) -> CauchySolution:
    """Solve from an interior point t0 with data z(t0) = z0 >= 0, z'(t0) = zp0.

    The degenerate start z0 = 0 is admitted provided zp0 != 0 (the solution is
    then normalized by its initial slope).
    """
    t_max = float(t_max if t_max is not None else v.t_max)
    if t0 < 0 or t0 >= t_max:
        raise ValueError("need 0 <= t0 < t_max")
    v0 = float(v(t0))
    if v0 <= 0:
        raise ValueError(f"v must be positive on [t0, t_max]; v({t0:g}) = {v0:g}")
    if z0 < 0 or (z0 == 0 and zp0 == 0):
        raise ValueError("interior start requires z0 > 0, or z0 = 0 with zp0 != 0")

    w0 = v0 * float(zp0)
    grid, z, w, segments = _integrate_chunks(
        v, A, float(t0), (float(z0), w0), t_max, tol,
        z_scale0=abs(z0) + abs(zp0) * min(1.0, t_max - t0),
        w_scale0=abs(w0),
    )
    sol = CauchySolution(
        grid=grid, z=z, w=w, zeros=np.empty(0), start_kind="interior",
        v=v, A=A, tol=tol, dense=_PiecewiseDense(segments),
    )
    sol.zeros = find_zeros(sol)
    return sol


def find_zeros(sol: CauchySolution) -> np.ndarray:
    """Ordered zeros of z: sign-change brackets on the stored grid, refined by bisection.

    Zeros are accepted only with a strict sign change; candidates without one
    are rejected as spurious.  The initial point of an interior start is not
    counted even when z starts at 0.
    """
    t, z = sol.grid, sol.z
    zfun = lambda x: float(sol.dense(x)[0, 0])
    zeros = []
    sign = np.sign(z)
    for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
        zeros.append(brentq(zfun, t[i], t[i + 1], xtol=ZERO_XTOL, rtol=8.9e-16))
    for i in np.nonzero(sign == 0)[0]:
        if 0 < i < len(t) - 1 and sign[i - 1] * sign[i + 1] < 0:
            zeros.append(float(t[i]))
    zeros = np.array(sorted(zeros))
    if zeros.size:
        keep = np.concatenate([[True], np.diff(zeros) > 10 * ZERO_XTOL])
        zeros = zeros[keep]
    return zeros


# ---------------------------------------------------------------------------
# Integral probes and oscillation criteria
# ---------------------------------------------------------------------------

@dataclass
class ProbeResult:
    """Doubling-window diagnosis of whether an integral to infinity diverges."""

    verdict: str
    edges: np.ndarray
    window_integrals: np.ndarray
    ratios: np.ndarray
    partial_sums: np.ndarray

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "edges": self.edges.tolist(),
            "window_integrals": self.window_integrals.tolist(),
            "ratios": self.ratios.tolist(),
            "partial_sums": self.partial_sums.tolist(),
        }


def _simpson(y: np.ndarray, x: np.ndarray) -> float:
    h = x[1] - x[0]
    return float(h / 3.0 * (y[0] + y[-1] + 4.0 * y[1::2].sum() + 2.0 * y[2:-1:2].sum()))


def integral_divergence_probe(
    g: Callable,
    t_max: float,
    n_windows: int = PROBE_WINDOWS,
    samples_per_window: int = 513,
) -> ProbeResult:
    """Classify the behaviour of the integral of g toward infinity from finite data.

    The domain (t_max / 2**n_windows, t_max] is split into doubling windows.
    DIVERGENT when the outermost four window masses hold steady (consecutive
    ratios >= 0.95, so the window mass is bounded below by a positive
    constant); CONVERGENT when they decay geometrically (ratios <= 0.75);
    INCONCLUSIVE otherwise, e.g. for slowly divergent integrands.
    """
    if n_windows < 5:
        raise ValueError("need at least 5 doubling windows")
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    edges = t_max / 2.0 ** np.arange(n_windows, -1, -1, dtype=float)
    integrals = np.empty(n_windows)
    for i, (a, b) in enumerate(zip(edges[:-1], edges[1:])):
        x = np.linspace(a, b, samples_per_window)
        y = np.asarray(g(x), dtype=float)
        if np.any(y < 0.0):
            bad = x[np.argmax(y < 0.0)]
            raise ValueError(f"probe integrand is negative at t = {bad:g}")
        integrals[i] = _simpson(y, x)

    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = integrals[1:] / integrals[:-1]
    ratios = np.where(np.isnan(ratios), 0.0, ratios)

    if integrals.max(initial=0.0) <= _SCALE_FLOOR:
        verdict = CONVERGENT
    else:
        last = ratios[-4:]
        if np.min(last) >= DIVERGENCE_RATIO:
            verdict = DIVERGENT
        elif np.max(last) <= CONVERGENCE_RATIO:
            verdict = CONVERGENT
        else:
            verdict = INCONCLUSIVE
    return ProbeResult(
        verdict=verdict, edges=edges, window_integrals=integrals,
        ratios=ratios, partial_sums=np.cumsum(integrals),
    )


@dataclass
class CriterionResult:
    """Outcome of a one-sided oscillation test, with its numeric trace."""

    criterion: str         # "nonintegrable" | "integrable"
    verdict: str           # OSCILLATORY | INCONCLUSIVE
    estimate: Optional[float]
    margin: Optional[float]
    trace_t: Optional[np.ndarray]
    trace_ratio: Optional[np.ndarray]
    detail: dict

    def as_dict(self) -> dict:
        out = {
            "criterion": self.criterion,
            "verdict": self.verdict,
            "estimate": self.estimate,
            "margin": self.margin,
            "detail": {
                k: (v.as_dict() if isinstance(v, ProbeResult) else v)
                for k, v in self.detail.items()
            },
        }
        if self.trace_t is not None:
            out["trace_points"] = int(self.trace_t.size)
        return out


def _require_criteria_potential(A: PotentialProfile) -> None:
    if A.identically_zero:
        raise ValueError("oscillation criteria require a potential that is not identically zero")


def criterion_nonintegrable(
    v: CoefficientProfile, A: PotentialProfile, t_max: Optional[float] = None
) -> CriterionResult:
    """Oscillation test for the case of non-integrable 1/v.

    OSCILLATORY when both the integral of 1/v and the integral of A v diverge
    (per the doubling-window probe); never claims non-oscillation.
    """
    _require_criteria_potential(A)
    t_max = float(t_max if t_max is not None else v.t_max)
    p_inv = integral_divergence_probe(lambda t: 1.0 / v(t), t_max)
    p_mass = integral_divergence_probe(lambda t: A(t) * v(t), t_max)
    verdict = OSCILLATORY if (p_inv.verdict == DIVERGENT and p_mass.verdict == DIVERGENT) else INCONCLUSIVE
    return CriterionResult(
        criterion="nonintegrable", verdict=verdict, estimate=None, margin=None,
        trace_t=None, trace_ratio=None,
        detail={"inverse_coefficient": p_inv, "potential_mass": p_mass},
    )


def _reverse_cumtrapz(y: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Trapezoid integrals from each node to the last, accumulated tail-first.

    Summing from the far end keeps small remainders at full relative accuracy;
    a forward cumulative sum would lose them to cancellation.
    """
    terms = 0.5 * (y[1:] + y[:-1]) * np.diff(x)
    out = np.zeros_like(y)
    out[:-1] = np.cumsum(terms[::-1])[::-1]
    return out


def inverse_integral_from(v: CoefficientProfile, t: np.ndarray, t_horizon: Optional[float] = None):
    """Remainder integral of 1/v from t to infinity.

    Uses the profile's exact tail when available; otherwise integrates
    numerically up to the horizon and extrapolates the remainder beyond it
    from the geometric decay of the last equal-width windows.
    Returns (values, info).
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if v.inverse_tail is not None:
        return np.asarray(v.inverse_tail(t), dtype=float), {"tail": "analytic"}

    horizon = float(t_horizon if t_horizon is not None else v.t_max)
    base = min(float(t.min()), horizon * 0.5)
    grid = np.linspace(base, horizon, 8001)
    rev = _reverse_cumtrapz(1.0 / v(grid), grid)
    to_horizon = np.interp(t, grid, rev)

    quarter = 0.25 * (horizon - base)
    j_b = float(np.interp(horizon - quarter, grid, rev))
    j_a = float(np.interp(horizon - 2 * quarter, grid, rev)) - j_b
    if j_a > 0 and j_b / j_a < 0.98:
        q = j_b / j_a
        tail = j_b * q / (1.0 - q)
        reliable = True
    else:
        tail = j_b  # crude cap: one more window's worth
        reliable = False
    return to_horizon + tail, {"tail": "geometric", "tail_value": float(tail), "tail_reliable": reliable}


def _trend_slope(t: np.ndarray, y: np.ndarray) -> float:
    if t.size < 8:
        return 0.0
    yy = np.log(np.maximum(y, _SCALE_FLOOR))
    return float(np.polyfit(np.log(t), yy, 1)[0])


def criterion_integrable(
    v: CoefficientProfile,
    A: PotentialProfile,
    T: float = 1.0,
    t_max: Optional[float] = None,
    margin: float = RATIO_MARGIN,
) -> CriterionResult:
    """Ratio test for the case of integrable 1/v.

    Evaluates R(t) = (integral of sqrt(A) from T to t) / (-1/2 log of the
    remainder integral of 1/v from t) and estimates its limit superior by the
    running maximum over the final decade of t.  OSCILLATORY when the estimate
    exceeds 1 by more than the stability margin and the trace is not in
    sustained decay; INCONCLUSIVE otherwise.  Borderline values are
    INCONCLUSIVE by design: the test is one-sided.
    """
    _require_criteria_potential(A)
    if T <= 0:
        raise ValueError("T must be positive")
    t_max = float(t_max if t_max is not None else v.t_max)
    probe = integral_divergence_probe(lambda t: 1.0 / v(t), t_max)
    if probe.verdict != CONVERGENT:
        raise ValueError(
            f"integrable-case test requires a convergent integral of 1/v (probe: {probe.verdict})"
        )
    t_end = t_max * (1.0 - 0.02)
    if T >= t_end:
        raise ValueError("T must lie well inside the domain")

    fine = np.linspace(T, t_end, 4001)
    num_cum = _cumtrapz(np.sqrt(np.maximum(A(fine), 0.0)), fine)

    remainder, tail_info = inverse_integral_from(v, fine, t_horizon=t_max)
    with np.errstate(divide="ignore"):
        denom = -0.5 * np.log(remainder)
    mask = (remainder > 0.0) & (remainder < 0.2) & (fine > T)
    detail: dict = {"inverse_probe": probe, **tail_info}
    if not np.any(mask):
        return CriterionResult(
            criterion="integrable", verdict=INCONCLUSIVE, estimate=None, margin=margin,
            trace_t=None, trace_ratio=None,
            detail={**detail, "note": "remainder integral too large over the whole domain"},
        )
    tt = fine[mask]
    ratio = num_cum[mask] / denom[mask]

    decade = tt >= tt[-1] / 10.0
    estimate = float(ratio[decade].max())
    slope = _trend_slope(tt[decade], np.maximum(ratio[decade], _SCALE_FLOOR))
    verdict = OSCILLATORY if (estimate > 1.0 + margin and slope > -0.05) else INCONCLUSIVE
    detail["trend_slope"] = slope

    if tail_info.get("tail") == "geometric":
        with np.errstate(divide="ignore"):
            denom_lo = -0.5 * np.log(np.maximum(remainder - tail_info["tail_value"], _SCALE_FLOOR))
        ok = denom_lo[mask] > 0.0
        if np.any(ok[decade]):
            ratio_lo = num_cum[mask] / np.where(ok, denom_lo[mask], np.inf)
            detail["estimate_no_tail"] = float(ratio_lo[decade].max())

    return CriterionResult(
        criterion="integrable", verdict=verdict, estimate=estimate, margin=margin,
        trace_t=tt, trace_ratio=ratio, detail=detail,
    )
