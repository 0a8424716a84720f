"""Numerical toolkit for the stability analysis of hypersurfaces via the
curvature algebra of Newton tensors, singular radial oscillation theory, and
Rayleigh-quotient certificates on annuli."""

from .curvature import (
    CurvatureVector,
    EllipticityCertificate,
    NewtonSequence,
    PrincipalSpectrum,
    TraceIdentityReport,
    elementary_symmetric,
    elementary_symmetric_batch,
    ellipticity_certificate,
    jacobi_potential,
    lower_bound_constant,
    newton_inequality_gap,
    newton_sequence,
    newton_sequence_from_spectrum,
    potential_lower_bound,
    trace_identities,
)
from .oscillation import (
    CauchySolution,
    CoefficientProfile,
    CriterionResult,
    PotentialProfile,
    ProbeResult,
    constant_potential,
    constant_profile,
    criterion_integrable,
    criterion_nonintegrable,
    exp_profile,
    find_zeros,
    integral_divergence_probe,
    potential_from_callable,
    power_profile,
    profile_from_csv,
    solve_interior_cauchy,
    solve_singular_cauchy,
)
from .stability import (
    ConclusionRecord,
    GeometricProfileData,
    HypothesisReport,
    RayleighCertificate,
    certificates_beyond,
    check_theorem1,
    check_theorem2,
    instability_verdict,
    potential_profile,
    rayleigh_certificate,
    smoothing_kj,
)
from .surfaces import (
    EnvelopeProbe,
    EquatorCrossings,
    ProfileCurve,
    RotationHypersurface,
    catenoid,
    cylinder,
    equator_crossings,
    gauss_map,
    jacobi_identity_check,
    principal_curvatures,
    radial_data,
    sphere_profile,
    support_function,
    surface_from_profile_csv,
    tangent_envelope_probe,
    unit_sphere_area,
)

__version__ = "0.1.0"
