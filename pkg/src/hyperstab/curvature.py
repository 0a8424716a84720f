"""Pointwise curvature algebra for hypersurfaces.

Elementary symmetric functions of the principal curvatures, normalized mean
curvatures, the Newton tensor recursion, the classical trace identities it
satisfies, and the inequalities between consecutive mean curvatures.  All of
this is exact-at-heart linear algebra: geometry enters only through the
curvature spectrum or the shape operator supplied by the caller.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "PrincipalSpectrum",
    "CurvatureVector",
    "NewtonSequence",
    "TraceIdentityReport",
    "EllipticityCertificate",
    "elementary_symmetric",
    "elementary_symmetric_batch",
    "newton_sequence",
    "newton_sequence_from_spectrum",
    "trace_identities",
    "newton_inequality_gap",
    "jacobi_potential",
    "potential_lower_bound",
    "lower_bound_constant",
    "ellipticity_certificate",
]

# Tolerances shared by the pointwise checks.
UMBILIC_TOL = 1e-8   # max pairwise curvature spread treated as umbilical
RANK_TOL = 1e-8      # relative eigenvalue magnitude counting toward rank(A)
NULL_TOL = 1e-10     # relative size below which S_{j+1} counts as vanishing

_TINY = 1e-300


@dataclass(frozen=True)
class PrincipalSpectrum:
    """Principal curvatures k_1..k_m at a point of an m-dimensional hypersurface."""

    m: int
    k: np.ndarray

    def __post_init__(self):
        k = np.atleast_1d(np.asarray(self.k, dtype=float))
        object.__setattr__(self, "k", k)
        if self.m < 2:
            raise ValueError(f"dimension m must be >= 2, got {self.m}")
        if k.shape != (self.m,):
            raise ValueError(f"expected {self.m} principal curvatures, got shape {k.shape}")
        if not np.all(np.isfinite(k)):
            raise ValueError("principal curvatures must be finite")

    def flipped(self) -> "PrincipalSpectrum":
        """Spectrum in the opposite orientation (unit normal reversed)."""
        return PrincipalSpectrum(self.m, -self.k)

    def is_umbilical(self, tol: float = UMBILIC_TOL) -> bool:
        return float(self.k.max() - self.k.min()) <= tol


@dataclass(frozen=True)
class CurvatureVector:
    """Elementary symmetric values S_0..S_m and normalized curvatures H_0..H_m.

    The two sequences are tied by C(m, j) * H_j = S_j; in particular S_0 = H_0 = 1
    and 2 * S_2 equals the intrinsic scalar curvature of the hypersurface.
    """

    m: int
    S: np.ndarray
    H: np.ndarray

    @property
    def scalar_curvature(self) -> float:
        return 2.0 * float(self.S[2])


@dataclass(frozen=True)
class NewtonSequence:
    """Newton tensors P_0..P_m of a symmetric operator, as full matrices.

    P_0 is the identity, P_j = S_j I - A P_{j-1}, and P_m vanishes.  When the
    operator is diagonal the P_j are diagonal with entries S_j of the spectrum
    with the i-th eigenvalue removed.
    """

    m: int
    S: np.ndarray
    P: np.ndarray  # shape (m + 1, m, m)


def _symmetric_coefficients(k: np.ndarray) -> np.ndarray:
    """Coefficients of prod_i (1 + k_i x), i.e. S_0..S_m, by the stable recurrence."""
    k = np.asarray(k, dtype=float)
    m = k.size
    S = np.zeros(m + 1)
    S[0] = 1.0
    for ki in k:
        S[1:] += ki * S[:-1]
    return S


def elementary_symmetric(spectrum: PrincipalSpectrum) -> CurvatureVector:
    """All S_j and H_j of a curvature spectrum.

    Computed by expanding prod_i (1 + k_i x) coefficient by coefficient: O(m^2),
    numerically stable, and exact for integer inputs.
    """
    S = _symmetric_coefficients(spectrum.k)
    m = spectrum.m
    binoms = np.array([comb(m, j) for j in range(m + 1)], dtype=float)
    return CurvatureVector(m=m, S=S, H=S / binoms)


def elementary_symmetric_batch(k: np.ndarray) -> np.ndarray:
    """S_0..S_m for a batch of spectra, shape (n, m) -> (n, m + 1)."""
    k = np.asarray(k, dtype=float)
    if k.ndim != 2:
        raise ValueError("expected a 2-d batch of spectra")
    n, m = k.shape
    S = np.zeros((n, m + 1))
    S[:, 0] = 1.0
    for i in range(m):
        S[:, 1:] += k[:, i : i + 1] * S[:, :-1]
    return S


def _reduced_symmetric_all(k: np.ndarray) -> np.ndarray:
    """Matrix R with R[i, j] = S_j of the spectrum with k_i removed, j = 0..m-1."""
    k = np.asarray(k, dtype=float)
    m = k.size
    R = np.empty((m, m))
    for i in range(m):
        R[i] = _symmetric_coefficients(np.delete(k, i))
    return R


def newton_sequence(A: np.ndarray) -> NewtonSequence:
    """Newton tensors of a symmetric m x m form, by the matrix recursion."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    scale = float(np.linalg.norm(A))
    if float(np.linalg.norm(A - A.T)) > 1e-12 * max(1.0, scale):
        raise ValueError("shape operator must be symmetric")
    A = 0.5 * (A + A.T)
    m = A.shape[0]
    S = _symmetric_coefficients(np.linalg.eigvalsh(A))
    P = np.empty((m + 1, m, m))
    P[0] = np.eye(m)
    for j in range(1, m + 1):
        P[j] = S[j] * np.eye(m) - A @ P[j - 1]
    return NewtonSequence(m=m, S=S, P=P)


def newton_sequence_from_spectrum(spectrum: PrincipalSpectrum) -> NewtonSequence:
    """Newton tensors of a diagonal operator, assembled in the eigenbasis.

    P_j is diagonal with entries S_j of the spectrum with the i-th curvature
    removed; this path and the matrix recursion agree to roundoff and are
    cross-checked in the test suite.
    """
    m = spectrum.m
    S = _symmetric_coefficients(spectrum.k)
    R = _reduced_symmetric_all(spectrum.k)
    P = np.zeros((m + 1, m, m))
    for j in range(m):
        P[j] = np.diag(R[:, j])
    return NewtonSequence(m=m, S=S, P=P)


@dataclass(frozen=True)
class TraceIdentityReport:
    """Residuals of the five classical Newton-tensor identities at index j.

    ``trace``          |Tr P_j - (m - j) S_j|
    ``trace_weighted`` |Tr(A P_j) - (j + 1) S_{j+1}|
    ``trace_squared``  |Tr(A^2 P_j) - (S_1 S_{j+1} - (j + 2) S_{j+2})|
    ``commutator``     Frobenius norm of A P_j - P_j A
    ``eigenvector``    max_i |P_j e_i - S_j(A_i) e_i| over the eigenvectors of A
    """

    j: int
    trace: float
    trace_weighted: float
    trace_squared: float
    commutator: float
    eigenvector: float
    scale: float

    @property
    def residuals(self) -> np.ndarray:
        return np.array(
            [self.trace, self.trace_weighted, self.trace_squared, self.commutator, self.eigenvector]
        )

    @property
    def max_relative(self) -> float:
        return float(self.residuals.max() / max(self.scale, _TINY))

    def as_dict(self) -> dict:
        return {
            "j": self.j,
            "trace": self.trace,
            "trace_weighted": self.trace_weighted,
            "trace_squared": self.trace_squared,
            "commutator": self.commutator,
            "eigenvector": self.eigenvector,
            "scale": self.scale,
            "max_relative": self.max_relative,
        }


def trace_identities(A: np.ndarray, j: int) -> TraceIdentityReport:
    """Residual report for the five Newton-tensor identities at index j, 1 <= j <= m-1.

    The tensors are rebuilt on the norm-scaled operator in extended precision
    before the traces are compared (the identities are homogeneous, so the
    residuals rescale exactly); without this, the m recursion steps amplify
    roundoff by the operator norm to the m-th power and drown the comparison
    for larger matrices.  S_j always comes from the eigenvalues, so the two
    routes being compared stay independent.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if float(np.linalg.norm(A - A.T)) > 1e-12 * max(1.0, float(np.linalg.norm(A))):
        raise ValueError("shape operator must be symmetric")
    A = 0.5 * (A + A.T)
    m = A.shape[0]
    if not 1 <= j <= m - 1:
        raise ValueError(f"index j must satisfy 1 <= j <= {m - 1}, got {j}")

    norm = float(np.linalg.norm(A, 2))
    c = norm if norm > 0 else 1.0
    Ah = (A / c).astype(np.longdouble)
    eigvals, eigvecs = np.linalg.eigh(A / c)

    # Reference S_j from power sums of the scaled operator, in extended
    # precision: traces of matrix powers fed through the classical recurrence
    # k e_k = sum_i (-1)^{i-1} e_{k-i} p_i.  This route involves neither the
    # eigendecomposition (whose float64 accuracy would cap the residuals) nor
    # the tensor recursion under test.
    powers = np.eye(m, dtype=np.longdouble)
    p = np.zeros(m + 1, dtype=np.longdouble)
    for k in range(1, m + 1):
        powers = powers @ Ah
        p[k] = np.trace(powers)
    S = np.zeros(m + 2, dtype=np.longdouble)  # includes S_{m+1} = 0
    S[0] = 1.0
    for k in range(1, m + 1):
        acc = np.longdouble(0.0)
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * S[k - i] * p[i]
        S[k] = acc / k

    P = np.eye(m, dtype=np.longdouble)
    for i in range(1, j + 1):
        P = S[i] * np.eye(m, dtype=np.longdouble) - Ah @ P

    tr = np.trace(P)
    tr_target = (m - j) * S[j]
    trA = np.trace(Ah @ P)
    trA_target = (j + 1) * S[j + 1]
    trA2 = np.trace(Ah @ Ah @ P)
    trA2_target = S[1] * S[j + 1] - (j + 2) * S[j + 2]
    commutator = float(np.linalg.norm((Ah @ P - P @ Ah).astype(float)))

    reduced = _reduced_symmetric_all(eigvals)
    Pf = P.astype(float)
    eig_resid = 0.0
    for i in range(m):
        vec = eigvecs[:, i]
        eig_resid = max(eig_resid, float(np.linalg.norm(Pf @ vec - reduced[i, j] * vec)))

    # restore original units: each identity is homogeneous of a known degree
    d_j, d_j1, d_j2 = c**j, c ** (j + 1), c ** (j + 2)
    scale = max(
        abs(float(tr)) * d_j, abs(float(tr_target)) * d_j,
        abs(float(trA)) * d_j1, abs(float(trA_target)) * d_j1,
        abs(float(trA2)) * d_j2, abs(float(trA2_target)) * d_j2,
        float(np.linalg.norm((Ah @ P).astype(float))) * d_j1,
        float(np.abs(reduced[:, j]).max(initial=0.0)) * d_j,
    )
    return TraceIdentityReport(
        j=j,
        trace=abs(float(tr - tr_target)) * d_j,
        trace_weighted=abs(float(trA - trA_target)) * d_j1,
        trace_squared=abs(float(trA2 - trA2_target)) * d_j2,
        commutator=commutator * d_j1,
        eigenvector=eig_resid * d_j,
        scale=scale,
    )


def newton_inequality_gap(spectrum: PrincipalSpectrum, j: int) -> float:
    """H_j^2 - H_{j-1} H_{j+1} for 1 <= j <= m-1.

    The gap is reported unconditionally; nonnegativity is only guaranteed for
    real spectra, with equality exactly at umbilical points.
    """
    if not 1 <= j <= spectrum.m - 1:
        raise ValueError(f"index j must satisfy 1 <= j <= {spectrum.m - 1}, got {j}")
    H = elementary_symmetric(spectrum).H
    return float(H[j] ** 2 - H[j - 1] * H[j + 1])


def jacobi_potential(spectrum: PrincipalSpectrum, j: int) -> float:
    """Zeroth-order coefficient S_1 S_{j+1} - (j + 2) S_{j+2} of the stability operator."""
    if not 0 <= j <= spectrum.m - 2:
        raise ValueError(f"index j must satisfy 0 <= j <= {spectrum.m - 2}, got {j}")
    S = elementary_symmetric(spectrum).S
    return float(S[1] * S[j + 1] - (j + 2) * S[j + 2])


def lower_bound_constant(m: int, j: int, constant_mode: str = "corrected") -> float:
    """Constant C in the potential lower bound C * H_1 * H_{j+1}.

    ``paper``     (j + 1) * C(m + 1, j + 2);
    ``corrected`` (j + 1) * C(m, j + 1), the largest constant that the chain of
                  mean-curvature inequalities actually supports.  The first is
                  strictly larger for every admissible j and can exceed the
                  potential itself (equality case of the inequalities); it is
                  kept selectable for comparison runs.
    """
    if constant_mode == "paper":
        return float((j + 1) * comb(m + 1, j + 2))
    if constant_mode == "corrected":
        return float((j + 1) * comb(m, j + 1))
    raise ValueError(f"unknown constant_mode {constant_mode!r}, expected 'paper' or 'corrected'")


def potential_lower_bound(spectrum: PrincipalSpectrum, j: int, constant_mode: str = "corrected") -> float:
    """Lower bound C * H_1 * H_{j+1} for the stability potential, positive spectra only."""
    if not 0 <= j <= spectrum.m - 2:
        raise ValueError(f"index j must satisfy 0 <= j <= {spectrum.m - 2}, got {j}")
    if np.any(spectrum.k <= 0.0):
        raise ValueError("the potential lower bound requires all principal curvatures > 0")
    H = elementary_symmetric(spectrum).H
    C = lower_bound_constant(spectrum.m, j, constant_mode)
    return float(C * H[1] * H[j + 1])


@dataclass(frozen=True)
class EllipticityCertificate:
    """Verdict on the ellipticity hypotheses over a sample set of spectra."""

    verdict: str          # "POSITIVE" | "NEGATIVE"
    mode: str             # "elliptic_point" | "null_Sj1"
    j: int
    orientation: int      # +1: samples as given, -1: all spectra flipped
    checks: dict
    failures: tuple

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "mode": self.mode,
            "j": self.j,
            "orientation": self.orientation,
            "checks": dict(self.checks),
            "failures": list(self.failures),
        }


def _certificate_for_orientation(ks: np.ndarray, m: int, j: int, mode: str, tol: float, rank_tol: float):
    """Run all sub-checks on one orientation of the sample batch; return (checks, failures)."""
    n = ks.shape[0]
    S = elementary_symmetric_batch(ks)
    maxabs = np.abs(ks).max(axis=1)
    sj1_scale = comb(m, j + 1) * np.maximum(maxabs, 1.0) ** (j + 1)

    checks: dict = {}
    failures: list[str] = []

    if mode == "elliptic_point":
        definite = bool(np.any(np.all(ks > 0.0, axis=1)))
        checks["definite_sample_exists"] = definite
        if not definite:
            failures.append("no sample with all curvatures of one strict sign")
        nonvanishing = bool(np.all(np.abs(S[:, j + 1]) > tol * sj1_scale))
        checks["S_j1_nonvanishing"] = nonvanishing
        if not nonvanishing:
            failures.append("S_{j+1} vanishes (within tolerance) on some sample")
    elif mode == "null_Sj1":
        vanishing = bool(np.all(np.abs(S[:, j + 1]) <= tol * sj1_scale))
        checks["S_j1_vanishing"] = vanishing
        if not vanishing:
            failures.append("S_{j+1} is not identically zero on the samples")
        ranks = (np.abs(ks) > rank_tol * np.maximum(maxabs, _TINY)[:, None]).sum(axis=1)
        rank_ok = bool(np.all(ranks > j))
        checks["rank_exceeds_j"] = rank_ok
        checks["min_rank"] = int(ranks.min())
        if not rank_ok:
            failures.append(f"rank(A) > {j} fails (min rank {int(ranks.min())})")
    else:
        raise ValueError(f"unknown mode {mode!r}, expected 'elliptic_point' or 'null_Sj1'")

    # Operational ellipticity: P_1..P_j positive definite on every sample, plus
    # strict positivity of the mean curvatures H_1..H_j.
    operators_positive = True
    for row in range(n):
        reduced = _reduced_symmetric_all(ks[row])
        for i in range(1, j + 1):
            if reduced[:, i].min() <= 0.0:
                operators_positive = False
                break
        if not operators_positive:
            break
    checks["newton_operators_positive"] = operators_positive
    if not operators_positive:
        failures.append("some P_i (1 <= i <= j) fails positive definiteness")

    if j >= 1:
        curvatures_positive = bool(np.all(S[:, 1 : j + 1] > 0.0))
    else:
        curvatures_positive = True
    checks["mean_curvatures_positive"] = curvatures_positive
    if not curvatures_positive:
        failures.append("some H_i (1 <= i <= j) is not strictly positive")

    return checks, failures


def ellipticity_certificate(
    samples: Sequence[PrincipalSpectrum] | Iterable[PrincipalSpectrum],
    j: int,
    mode: str = "elliptic_point",
    tol: float = NULL_TOL,
    rank_tol: float = RANK_TOL,
) -> EllipticityCertificate:
    """Check the ellipticity hypotheses on a sample set of curvature spectra.

    ``elliptic_point``: some sample is definite and S_{j+1} vanishes nowhere;
    ``null_Sj1``: S_{j+1} vanishes everywhere and rank(A) > j everywhere.
    Both modes additionally require P_1..P_j positive definite and H_1..H_j > 0
    on every sample, trying the given orientation first and the flipped one if
    it fails.
    """
    samples = list(samples)
    if not samples:
        raise ValueError("sample set must be nonempty")
    m = samples[0].m
    for s in samples:
        if s.m != m:
            raise ValueError("inconsistent dimensions in the sample set")
    if not 0 <= j <= m - 1:
        raise ValueError(f"index j must satisfy 0 <= j <= {m - 1}, got {j}")

    ks = np.vstack([s.k for s in samples])
    best = None
    for orientation in (1, -1):
        checks, failures = _certificate_for_orientation(orientation * ks, m, j, mode, tol, rank_tol)
        if not failures:
            return EllipticityCertificate(
                verdict="POSITIVE", mode=mode, j=j, orientation=orientation,
                checks=checks, failures=(),
            )
        if best is None or len(failures) < len(best[2]):
            best = (orientation, checks, failures)
    orientation, checks, failures = best
    return EllipticityCertificate(
        verdict="NEGATIVE", mode=mode, j=j, orientation=orientation,
        checks=checks, failures=tuple(failures),
    )
