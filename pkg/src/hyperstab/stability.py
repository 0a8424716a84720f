"""Radial instability pipeline: weight smoothing, potential assembly,
growth-hypothesis verdicts, and annulus Rayleigh-quotient certificates.

The pipeline consumes radial curvature-volume data (from concrete rotation
hypersurfaces or synthetic batteries), checks the integral growth hypotheses,
builds the radial potential, and certifies nonpositivity of the bottom
Dirichlet eigenvalue of the stability operator on annuli between consecutive
zeros of the radial solution.  Every verdict is gated: no geometric conclusion
is emitted unless the hypothesis report and the oscillation verdict are both
affirmative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .curvature import ellipticity_certificate, lower_bound_constant
from .oscillation import (
    CONVERGENT,
    DIVERGENT,
    INCONCLUSIVE,
    OSCILLATORY,
    CauchySolution,
    CoefficientProfile,
    CriterionResult,
    PotentialProfile,
    ProbeResult,
    RATIO_MARGIN,
    criterion_integrable,
    criterion_nonintegrable,
    integral_divergence_probe,
    inverse_integral_from,
)

__all__ = [
    "GeometricProfileData",
    "HypothesisReport",
    "RayleighCertificate",
    "ConclusionRecord",
    "smoothing_kj",
    "hermite_blend",
    "potential_profile",
    "check_theorem1",
    "check_theorem2",
    "rayleigh_certificate",
    "certificates_beyond",
    "instability_verdict",
]

SATISFIED = "SATISFIED"
NOT_SATISFIED = "NOT_SATISFIED"
CERTIFICATE_TOL = 1e-8
_TINY = 1e-300


@dataclass
class GeometricProfileData:
    """Radial data feeding the hypothesis checkers.

    ``v_j`` is the weighted area of geodesic spheres (normalized curvature H_j
    integrated over them) as a solver-ready coefficient profile; ``v_1`` the
    corresponding H_1 integral as a plain radial map.  ``exact_potential``
    evaluates the sphere integral of the full stability potential, when known.
    ``Hj1_const`` is the constant value of H_{j+1} (0 in the vanishing-curvature
    mode, None when not constant).
    """

    m: int
    j: int
    Hj1_const: Optional[float]
    v_j: CoefficientProfile
    v_1: Callable
    exact_potential: Optional[Callable] = None
    R0: float = 0.0
    t_max: Optional[float] = None
    spectra: Optional[tuple] = None
    provenance: str = "synthetic"

    def __post_init__(self):
        if not 0 <= self.j <= self.m - 2:
            raise ValueError(f"index j must satisfy 0 <= j <= {self.m - 2}, got {self.j}")
        if self.t_max is None:
            self.t_max = self.v_j.t_max


# ---------------------------------------------------------------------------
# Weight smoothing
# ---------------------------------------------------------------------------

def hermite_blend(inner_value: float, outer: Callable, r0: float, floor_scale: float = 1e-6) -> Callable:
    """C^1 blend: constant ``inner_value`` on [0, r0/2], ``outer`` beyond r0.

    On [r0/2, r0] a cubic Hermite matches values and first derivatives of both
    branches; the blended values are clamped above a positive floor.
    """
    if r0 <= 0:
        raise ValueError("blend radius must be positive")
    a, b = 0.5 * r0, r0
    step = 1e-4 * r0
    p1 = float(outer(np.asarray(b)))
    d1 = (float(outer(np.asarray(b + step))) - float(outer(np.asarray(b - step)))) / (2 * step)
    floor = floor_scale * min(abs(inner_value), abs(p1)) if min(abs(inner_value), abs(p1)) > 0 else floor_scale

    def blended(t):
        t = np.asarray(t, dtype=float)
        x = np.clip((t - a) / (b - a), 0.0, 1.0)
        h00 = 2 * x**3 - 3 * x**2 + 1
        h01 = -2 * x**3 + 3 * x**2
        h11 = x**3 - x**2
        mid = inner_value * h00 + p1 * h01 + d1 * (b - a) * h11
        out = np.where(t <= a, inner_value, np.where(t >= b, outer(t), np.maximum(mid, floor)))
        return out

    return blended


def smoothing_kj(sj_radial: Callable, r0: float, m_minus_j: int) -> Callable:
    """Smooth positive blend: 1 near the origin, (m - j) * S_j(t) beyond r0.

    ``sj_radial`` must be positive beyond r0/2; the two branches are joined by
    a C^1 cubic on [r0/2, r0], clamped above a positive floor.
    """
    if r0 <= 0:
        raise ValueError("smoothing radius must be positive")
    probe = np.linspace(0.5 * r0, 4.0 * r0, 65)
    vals = np.asarray(sj_radial(probe), dtype=float)
    if np.any(vals <= 0.0):
        bad = probe[np.argmax(vals <= 0.0)]
        raise ValueError(f"S_j must be positive beyond r0/2; found nonpositive value at t = {bad:g}")
    outer = lambda t: m_minus_j * np.asarray(sj_radial(t), dtype=float)
    return hermite_blend(1.0, outer, r0)


# ---------------------------------------------------------------------------
# Potential assembly
# ---------------------------------------------------------------------------

def potential_profile(
    data: GeometricProfileData,
    mode: str = "lower_bound",
    constant_mode: str = "corrected",
) -> PotentialProfile:
    """Radial potential A(t) of the stability equation.

    ``exact`` divides the supplied sphere integral of the potential by v_j;
    ``lower_bound`` substitutes C * H_{j+1} * v_1(t) / v_j(t), with the constant
    C chosen by ``constant_mode`` ('paper' or 'corrected').
    """
    t_max = float(data.t_max)
    if mode == "exact":
        if data.exact_potential is None:
            raise ValueError("exact mode requires exact_potential data")
        exact = data.exact_potential
        fn = lambda t: np.asarray(exact(t), dtype=float) / data.v_j(t)
        return PotentialProfile.from_callable(fn, t_max, name=f"A_exact[{data.provenance}]")
    if mode == "lower_bound":
        if data.Hj1_const is None or data.Hj1_const <= 0:
            raise ValueError("lower_bound mode requires a positive constant H_{j+1}")
        C = lower_bound_constant(data.m, data.j, constant_mode) * data.Hj1_const
        v1 = data.v_1
        fn = lambda t: C * np.asarray(v1(t), dtype=float) / data.v_j(t)
        return PotentialProfile.from_callable(fn, t_max, name=f"A_lb[{constant_mode}]")
    raise ValueError(f"unknown potential mode {mode!r}, expected 'exact' or 'lower_bound'")


# ---------------------------------------------------------------------------
# Hypothesis reports
# ---------------------------------------------------------------------------

@dataclass
class HypothesisReport:
    """Structured verdict on the growth hypotheses, with numeric traces.

    ``conditions`` maps each sub-condition to a record with its verdict and an
    ``ok`` flag (True / False / None for inconclusive); ``overall`` is
    SATISFIED only when every sub-condition holds.
    """

    mode: str                       # "thm1_i" | "thm1_ii" | "thm2"
    overall: str                    # SATISFIED | NOT_SATISFIED | INCONCLUSIVE
    constant_mode: Optional[str]
    conditions: dict
    notes: list = field(default_factory=list)
    threshold: Optional[float] = None
    estimate: Optional[float] = None
    traces: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        def scrub(value):
            if isinstance(value, ProbeResult):
                return value.as_dict()
            if isinstance(value, CriterionResult):
                return value.as_dict()
            if isinstance(value, np.ndarray):
                return value.tolist()
            if isinstance(value, dict):
                return {k: scrub(v) for k, v in value.items()}
            return value

        return {
            "mode": self.mode,
            "overall": self.overall,
            "constant_mode": self.constant_mode,
            "conditions": scrub(self.conditions),
            "notes": list(self.notes),
            "threshold": self.threshold,
            "estimate": self.estimate,
        }


def _combine(conditions: dict) -> str:
    oks = [c["ok"] for c in conditions.values()]
    if all(ok is True for ok in oks):
        return SATISFIED
    if any(ok is False for ok in oks):
        return NOT_SATISFIED
    return INCONCLUSIVE


def _decade_estimate(t: np.ndarray, values: np.ndarray):
    mask = t >= t[-1] / 10.0
    estimate = float(values[mask].max())
    tt, vv = t[mask], np.maximum(values[mask], _TINY)
    slope = float(np.polyfit(np.log(tt), np.log(vv), 1)[0]) if tt.size >= 8 else 0.0
    return estimate, slope


def check_theorem1(
    data: GeometricProfileData,
    branch: str,
    constant_mode: str = "corrected",
    margin: float = RATIO_MARGIN,
) -> HypothesisReport:
    """Check the growth hypotheses in the constant nonzero H_{j+1} regime.

    Branch "i" requires both the integral of 1/v_j and the total H_1 mass
    (the integral of v_1, by the coarea reduction) to diverge.  Branch "ii"
    requires 1/v_j integrable and the limit superior of
    sqrt(v_1 v_j) * (remainder integral of 1/v_j) to exceed
    (1/2) * (C * H_{j+1})**(-1/2), with C chosen by ``constant_mode``.
    """
    if data.Hj1_const is None:
        raise ValueError("this check requires H_{j+1} constant; got non-constant data")
    if data.Hj1_const == 0:
        raise ValueError("this check requires H_{j+1} nonzero; use the vanishing-curvature check")
    if data.Hj1_const < 0:
        raise ValueError("H_{j+1} must be positive; flip the orientation of the data")
    if branch not in ("i", "ii"):
        raise ValueError(f"branch must be 'i' or 'ii', got {branch!r}")

    t_max = float(data.t_max)
    notes = [f"data: {data.provenance}", f"constant_mode: {constant_mode}"]
    conditions: dict = {}
    traces: dict = {}
    threshold = estimate = None

    p_inv = integral_divergence_probe(lambda t: 1.0 / data.v_j(t), t_max)
    traces["inverse_weight_probe"] = p_inv

    if branch == "i":
        conditions["inverse_weight_divergent"] = {
            "verdict": p_inv.verdict,
            "ok": {DIVERGENT: True, CONVERGENT: False}.get(p_inv.verdict),
        }
        p_v1 = integral_divergence_probe(lambda t: np.asarray(data.v_1(t), dtype=float), t_max)
        traces["mean_curvature_mass_probe"] = p_v1
        conditions["mean_curvature_mass_divergent"] = {
            "verdict": p_v1.verdict,
            "ok": {DIVERGENT: True, CONVERGENT: False}.get(p_v1.verdict),
        }
        mode = "thm1_i"
    else:
        conditions["inverse_weight_integrable"] = {
            "verdict": p_inv.verdict,
            "ok": {CONVERGENT: True, DIVERGENT: False}.get(p_inv.verdict),
        }
        C = lower_bound_constant(data.m, data.j, constant_mode) * data.Hj1_const
        threshold = 0.5 / np.sqrt(C)
        t_lo = max(1e-6 * t_max, 1e-6)
        tt = np.geomspace(t_lo, t_max * 0.98, 800)
        remainder, tail_info = inverse_integral_from(data.v_j, tt, t_horizon=t_max)
        G = np.sqrt(np.maximum(data.v_1(tt) * data.v_j(tt), 0.0)) * remainder
        estimate, slope = _decade_estimate(tt, G)
        traces["limsup_trace"] = {"t": tt, "value": G, **tail_info}
        if slope <= -0.05:
            ok = False
            verdict = "DECAYING"
        elif estimate > threshold * (1.0 + margin):
            ok = True
            verdict = "ABOVE_THRESHOLD"
        elif estimate < threshold * (1.0 - margin):
            ok = False
            verdict = "BELOW_THRESHOLD"
        else:
            ok = None
            verdict = "BORDERLINE"
        conditions["limsup_exceeds_threshold"] = {
            "verdict": verdict,
            "ok": ok,
            "estimate": float(estimate),
            "threshold": float(threshold),
            "trend_slope": float(slope),
        }
        mode = "thm1_ii"

    return HypothesisReport(
        mode=mode, overall=_combine(conditions), constant_mode=constant_mode,
        conditions=conditions, notes=notes,
        threshold=None if threshold is None else float(threshold),
        estimate=None if estimate is None else float(estimate),
        traces=traces,
    )


def check_theorem2(
    data: GeometricProfileData,
    branch: str = "auto",
    T: float = 1.0,
    margin: float = RATIO_MARGIN,
) -> HypothesisReport:
    """Check the vanishing H_{j+1} regime (rank condition plus oscillation tests).

    With H_{j+1} identically zero the branch-ii threshold degenerates, so the
    check runs the oscillation criteria directly on the exact radial potential:
    the non-integrable test when 1/v_j diverges, the ratio test when it
    converges (``branch`` forces one of them).  The rank condition is delegated
    to the ellipticity certificate when pointwise spectra are available.  The
    criteria are one-sided, so a failed test yields INCONCLUSIVE, never a
    refutation.
    """
    if data.Hj1_const is None or abs(data.Hj1_const) > 1e-12:
        raise ValueError("this check requires H_{j+1} identically zero")
    if branch not in ("auto", "i", "ii"):
        raise ValueError(f"branch must be 'auto', 'i' or 'ii', got {branch!r}")
    if data.exact_potential is None:
        raise ValueError("vanishing-curvature check requires exact potential data")

    t_max = float(data.t_max)
    notes = [f"data: {data.provenance}"]
    conditions: dict = {}
    traces: dict = {}

    if data.spectra:
        cert = ellipticity_certificate(data.spectra, data.j, mode="null_Sj1")
        conditions["rank_condition"] = {
            "verdict": cert.verdict,
            "ok": cert.verdict == "POSITIVE",
            "detail": cert.as_dict(),
        }
    else:
        notes.append("rank condition not checked: no pointwise spectra supplied")

    A = potential_profile(data, mode="exact")
    if A.identically_zero:
        notes.append("exact potential is identically zero: criteria not applicable")
        conditions["oscillation_criterion"] = {"verdict": INCONCLUSIVE, "ok": None}
        return HypothesisReport(
            mode="thm2", overall=_combine(conditions), constant_mode=None,
            conditions=conditions, notes=notes, traces=traces,
        )

    p_inv = integral_divergence_probe(lambda t: 1.0 / data.v_j(t), t_max)
    traces["inverse_weight_probe"] = p_inv
    use_branch = branch
    if branch == "auto":
        use_branch = "ii" if p_inv.verdict == CONVERGENT else "i"
        notes.append(f"branch selected automatically: {use_branch} (1/v_j probe: {p_inv.verdict})")

    if use_branch == "i":
        crit = criterion_nonintegrable(data.v_j, A, t_max)
    else:
        crit = criterion_integrable(data.v_j, A, T=T, t_max=t_max, margin=margin)
    traces["criterion"] = crit
    conditions["oscillation_criterion"] = {
        "verdict": crit.verdict,
        "ok": True if crit.verdict == OSCILLATORY else None,
        "criterion": crit.criterion,
        "estimate": crit.estimate,
    }

    return HypothesisReport(
        mode="thm2", overall=_combine(conditions), constant_mode=None,
        conditions=conditions, notes=notes,
        estimate=crit.estimate, traces=traces,
    )


# ---------------------------------------------------------------------------
# Rayleigh certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RayleighCertificate:
    """Annulus Rayleigh-quotient certificate between consecutive zeros T1 < T2.

    With the test function equal to the radial solution on the annulus and zero
    outside, integration by parts collapses the quotient's numerator
    Q = (m - j) * integral of ((z')^2 - A z^2) v to zero; Q / psi_scale is the
    numerical upper bound for the bottom Dirichlet eigenvalue of the annulus.
    """

    pair_index: int
    T1: float
    T2: float
    Q: float
    psi_scale: float
    lambda_bound: float
    m_minus_j: int
    denom: float  # integral of ((z')^2 + A z^2) v, the certificate scale

    @property
    def relative(self) -> float:
        return abs(self.Q) / max(self.m_minus_j * self.denom, _TINY)

    def passes(self, tol: float = CERTIFICATE_TOL) -> bool:
        return self.relative <= tol

    def to_dict(self) -> dict:
        return {
            "pair_index": self.pair_index,
            "T1": self.T1,
            "T2": self.T2,
            "Q": self.Q,
            "psi_scale": self.psi_scale,
            "lambda_bound": self.lambda_bound,
            "m_minus_j": self.m_minus_j,
            "denom": self.denom,
            "relative": self.relative,
            "passes": self.passes(),
        }


def _simpson(y: np.ndarray, x: np.ndarray) -> float:
    h = x[1] - x[0]
    return float(h / 3.0 * (y[0] + y[-1] + 4.0 * y[1::2].sum() + 2.0 * y[2:-1:2].sum()))


def rayleigh_certificate(
    v: CoefficientProfile,
    A: PotentialProfile,
    sol: CauchySolution,
    pair_index: int,
    m_minus_j: int = 1,
) -> RayleighCertificate:
    """Certificate for the annulus between the pair_index-th pair of consecutive zeros."""
    zeros = sol.zeros
    if pair_index < 0 or pair_index + 1 >= len(zeros):
        raise ValueError(
            f"too few zeros for pair {pair_index}: solution has {len(zeros)} zeros"
        )
    T1, T2 = float(zeros[pair_index]), float(zeros[pair_index + 1])
    t = np.linspace(T1, T2, 4001)
    z, w = sol.evaluate(t)
    vv = v(t)
    aa = A(t)
    zp = w / vv
    Q = m_minus_j * _simpson((zp**2 - aa * z**2) * vv, t)
    denom = _simpson((zp**2 + aa * z**2) * vv, t)
    psi_scale = _simpson(z**2 * vv, t)
    lambda_bound = Q / psi_scale if psi_scale > 0 else np.inf
    interior = sol.zeros[(sol.zeros > T1 + 10 * 1e-12) & (sol.zeros < T2 - 10 * 1e-12)]
    if interior.size:
        raise RuntimeError("zero pair is not consecutive: interior zero found")
    return RayleighCertificate(
        pair_index=pair_index, T1=T1, T2=T2, Q=Q,
        psi_scale=psi_scale, lambda_bound=lambda_bound,
        m_minus_j=m_minus_j, denom=denom,
    )


def certificates_beyond(
    v: CoefficientProfile,
    A: PotentialProfile,
    sol: CauchySolution,
    m_minus_j: int = 1,
    radius: float = 0.0,
    max_pairs: Optional[int] = None,
) -> list:
    """Certificates for every consecutive zero pair with T1 >= radius."""
    out = []
    for i in range(len(sol.zeros) - 1):
        if sol.zeros[i] < radius:
            continue
        out.append(rayleigh_certificate(v, A, sol, i, m_minus_j))
        if max_pairs is not None and len(out) >= max_pairs:
            break
    return out


# ---------------------------------------------------------------------------
# Final verdict
# ---------------------------------------------------------------------------

_CONCLUSIONS = {
    "thm1_i": (
        "Gauss map meets every equator outside every compact set: there is a "
        "divergent sequence of points whose unit normals lie on any fixed equator."
    ),
    "thm1_ii": (
        "Gauss map meets every equator outside every compact set: there is a "
        "divergent sequence of points whose unit normals lie on any fixed equator."
    ),
    "thm2": (
        "Tangent envelope covers the ambient space: outside every compact set "
        "the affine tangent planes fill all of euclidean space."
    ),
}


@dataclass(frozen=True)
class ConclusionRecord:
    """Gated final verdict: the geometric conclusion plus its evidence chain."""

    verdict: str                 # "CONCLUSION" | "NO_CONCLUSION"
    conclusion: Optional[str]
    evidence: dict

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "conclusion": self.conclusion, "evidence": self.evidence}


def instability_verdict(
    report: HypothesisReport,
    oscillation,
    certificates: Sequence[RayleighCertificate] | RayleighCertificate = (),
) -> ConclusionRecord:
    """Combine the hypothesis report, oscillation verdict, and certificates.

    ``oscillation`` may be a CriterionResult, a verdict string, or a computed
    solution (in which case oscillation means at least two zeros, hence one
    annulus).  The geometric conclusion is emitted only when every link is
    affirmative; any inconclusive link yields NO_CONCLUSION.
    """
    if isinstance(oscillation, CriterionResult):
        osc_verdict = oscillation.verdict
        osc_evidence = oscillation.as_dict()
    elif isinstance(oscillation, CauchySolution):
        osc_verdict = OSCILLATORY if len(oscillation.zeros) >= 2 else INCONCLUSIVE
        osc_evidence = {"zeros": oscillation.zeros.tolist()}
    else:
        osc_verdict = str(oscillation)
        osc_evidence = {"verdict": osc_verdict}

    if isinstance(certificates, RayleighCertificate):
        certificates = [certificates]
    certs = list(certificates)

    gates = {
        "hypotheses": report.overall == SATISFIED,
        "oscillation": osc_verdict == OSCILLATORY,
        "certificates": all(c.passes() for c in certs),
    }
    evidence = {
        "report": report.to_dict(),
        "oscillation": osc_evidence,
        "certificates": [c.to_dict() for c in certs],
        "gates": gates,
    }
    if all(gates.values()):
        return ConclusionRecord(
            verdict="CONCLUSION", conclusion=_CONCLUSIONS[report.mode], evidence=evidence
        )
    return ConclusionRecord(verdict="NO_CONCLUSION", conclusion=None, evidence=evidence)
