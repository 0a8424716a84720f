"""Hypothesis checker, potential assembly, and Rayleigh certificate tests."""

import numpy as np
import pytest
from scipy.integrate import quad

from hyperstab import (
    GeometricProfileData,
    catenoid,
    certificates_beyond,
    check_theorem1,
    check_theorem2,
    constant_potential,
    constant_profile,
    criterion_integrable,
    exp_profile,
    instability_verdict,
    potential_profile,
    power_profile,
    radial_data,
    rayleigh_certificate,
    smoothing_kj,
    solve_interior_cauchy,
    solve_singular_cauchy,
    sphere_profile,
)


def exp_battery(t_max=20.0, H=1.0, m=3, j=1):
    return GeometricProfileData(
        m=m, j=j, Hj1_const=H,
        v_j=exp_profile(2.0, t_max),
        v_1=lambda t: np.exp(2.0 * np.asarray(t, dtype=float)),
        t_max=t_max,
    )


# ---------------------------------------------------------------------------
# smoothing
# ---------------------------------------------------------------------------

def test_smoothing_constant_branches_coincide():
    # S_j = 1/(m-j) makes both branches equal to 1 for any r0
    K = smoothing_kj(lambda t: np.full_like(np.asarray(t, dtype=float), 1 / 3), r0=2.0, m_minus_j=3)
    t = np.linspace(0.0, 8.0, 200)
    np.testing.assert_allclose(K(t), 1.0, atol=1e-14)


def test_smoothing_blend_endpoints_and_monotonicity():
    K = smoothing_kj(lambda t: np.ones_like(np.asarray(t, dtype=float)), r0=2.0, m_minus_j=2)
    assert float(K(1.0)) == pytest.approx(1.0, abs=1e-12)
    assert float(K(2.0)) == pytest.approx(2.0, abs=1e-12)
    blend = K(np.linspace(1.0, 2.0, 400))
    assert np.all(np.diff(blend) >= -1e-12)


def test_smoothing_c1_matching():
    sj = lambda t: 1.0 + 0.3 * np.asarray(t, dtype=float) ** 2
    r0, mj = 2.0, 2
    K = smoothing_kj(sj, r0, mj)
    # endpoint values match the two branches exactly
    assert float(K(r0 / 2)) == pytest.approx(1.0, abs=1e-12)
    assert float(K(r0)) == pytest.approx(mj * float(sj(r0)), abs=1e-12)
    # one-sided slopes agree across both seams (finite-difference comparison)
    h = 1e-5
    slope_in = (3 * float(K(r0)) - 4 * float(K(r0 - h)) + float(K(r0 - 2 * h))) / (2 * h)
    slope_out = (-3 * float(K(r0)) + 4 * float(K(r0 + h)) - float(K(r0 + 2 * h))) / (2 * h)
    assert slope_in == pytest.approx(slope_out, abs=1e-5)
    a = r0 / 2
    left_out = (-3 * float(K(a)) + 4 * float(K(a + h)) - float(K(a + 2 * h))) / (2 * h)
    assert left_out == pytest.approx(0.0, abs=1e-5)


def test_smoothing_rejects_nonpositive_tail():
    with pytest.raises(ValueError, match="positive beyond"):
        smoothing_kj(lambda t: 1.0 - np.asarray(t, dtype=float), r0=2.0, m_minus_j=2)


# ---------------------------------------------------------------------------
# potential assembly
# ---------------------------------------------------------------------------

def test_potential_lower_bound_constants():
    data = exp_battery()
    assert float(potential_profile(data, "lower_bound", "paper")(3.0)) == pytest.approx(8.0)
    assert float(potential_profile(data, "lower_bound", "corrected")(3.0)) == pytest.approx(6.0)


def test_potential_exact_on_catenoid():
    data = radial_data(catenoid(), 0, t_max=30.0, assert_pole_chart=True)
    A = potential_profile(data, "exact")
    t = np.array([0.5, 1.0, 4.0, 10.0])
    np.testing.assert_allclose(A(t), 2.0 / (1 + t**2) ** 2, atol=1e-12)


def test_potential_missing_data_errors():
    data = exp_battery()
    with pytest.raises(ValueError, match="exact_potential"):
        potential_profile(data, "exact")
    minimal = GeometricProfileData(
        m=2, j=0, Hj1_const=0.0, v_j=power_profile(1, 10.0),
        v_1=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
    )
    with pytest.raises(ValueError, match="positive constant"):
        potential_profile(minimal, "lower_bound")


def test_lower_bound_below_exact_on_sphere():
    # all curvatures positive: the corrected bound must not exceed the exact
    # potential, while the stated constant does (the recorded discrepancy)
    data = radial_data(sphere_profile(), 0, t_max=1.3)
    exact = potential_profile(data, "exact")
    corr = potential_profile(data, "lower_bound", "corrected")
    stated = potential_profile(data, "lower_bound", "paper")
    t = np.linspace(0.05, 1.25, 60)
    assert np.all(corr(t) <= exact(t) + 1e-10)
    assert np.all(stated(t) > exact(t) + 0.5)


# ---------------------------------------------------------------------------
# constant H_{j+1} hypothesis checks
# ---------------------------------------------------------------------------

def test_branch_ii_exponential_battery():
    data = exp_battery()
    rep_p = check_theorem1(data, branch="ii", constant_mode="paper")
    assert rep_p.overall == "SATISFIED"
    assert rep_p.estimate == pytest.approx(0.5, abs=1e-3)
    assert rep_p.threshold == pytest.approx(0.5 / np.sqrt(8.0), abs=1e-12)
    rep_c = check_theorem1(data, branch="ii", constant_mode="corrected")
    assert rep_c.overall == "SATISFIED"
    assert rep_c.threshold == pytest.approx(0.5 / np.sqrt(6.0), abs=1e-12)


def test_branch_ii_decaying_trace_never_satisfied():
    for c in (0.01, 1.0, 1e4):
        data = GeometricProfileData(
            m=3, j=1, Hj1_const=c, v_j=power_profile(2, 1e4),
            v_1=lambda t: 1.0 / np.asarray(t, dtype=float), t_max=1e4,
        )
        rep = check_theorem1(data, branch="ii")
        assert rep.overall == "NOT_SATISFIED"


def test_branch_i_divergence_requirements():
    data = GeometricProfileData(
        m=3, j=1, Hj1_const=1.0, v_j=power_profile(1, 1000.0),
        v_1=lambda t: 1.0 / np.asarray(t, dtype=float) ** 2, t_max=1000.0,
    )
    rep = check_theorem1(data, branch="i")
    assert rep.overall == "NOT_SATISFIED"
    assert rep.conditions["inverse_weight_divergent"]["ok"] is True
    assert rep.conditions["mean_curvature_mass_divergent"]["ok"] is False

    good = GeometricProfileData(
        m=3, j=1, Hj1_const=1.0, v_j=power_profile(1, 1000.0),
        v_1=lambda t: np.asarray(t, dtype=float), t_max=1000.0,
    )
    assert check_theorem1(good, branch="i").overall == "SATISFIED"


def test_branch_i_slow_divergence_is_inconclusive():
    # v_1 with borderline window decay: the probe refuses to call it, and the
    # overall verdict degrades honestly instead of guessing
    data = GeometricProfileData(
        m=3, j=1, Hj1_const=1.0, v_j=power_profile(1, 1000.0),
        v_1=lambda t: 1.0 / (np.asarray(t, dtype=float) * np.log(np.asarray(t, dtype=float) + 2.0)),
        t_max=1000.0,
    )
    rep = check_theorem1(data, branch="i")
    assert rep.overall == "INCONCLUSIVE"
    assert rep.conditions["mean_curvature_mass_divergent"]["ok"] is None


def test_theorem1_validation():
    data = exp_battery(H=0.0)
    with pytest.raises(ValueError, match="nonzero"):
        check_theorem1(data, branch="ii")
    with pytest.raises(ValueError, match="orientation"):
        check_theorem1(exp_battery(H=-1.0), branch="ii")
    with pytest.raises(ValueError, match="branch"):
        check_theorem1(exp_battery(), branch="iii")


def test_branch_ii_borderline_is_inconclusive():
    # H_{j+1} = 1/6 makes the corrected threshold coincide with the exact
    # limsup 1/2; the margin band must refuse to call it either way
    data = exp_battery(H=1 / 6)
    rep = check_theorem1(data, branch="ii", constant_mode="corrected")
    assert rep.overall == "INCONCLUSIVE"
    assert rep.conditions["limsup_exceeds_threshold"]["verdict"] == "BORDERLINE"


def test_orientation_gates():
    # j >= 1 weight requires positive curvature; the flipped round sphere fails
    from hyperstab import radial_data, sphere_profile

    with pytest.raises(ValueError, match="must be positive"):
        radial_data(sphere_profile(m=3).with_orientation(-1), 1, t_max=1.2)
    # j = 0 weight is orientation-free, but the constant-curvature checker
    # refuses the negative constant and points at the orientation
    data = radial_data(sphere_profile().with_orientation(-1), 0, t_max=1.2)
    assert data.Hj1_const == pytest.approx(-1.0)
    with pytest.raises(ValueError, match="orientation"):
        check_theorem1(data, branch="ii")


def test_threshold_monotone_in_curvature_constant():
    previous = None
    for H in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0):
        rep = check_theorem1(exp_battery(H=H), branch="ii")
        if previous is not None:
            assert rep.threshold < previous
        previous = rep.threshold
        # increasing H never flips SATISFIED to NOT_SATISFIED on this battery
        assert rep.overall == "SATISFIED"


# ---------------------------------------------------------------------------
# vanishing H_{j+1} checks
# ---------------------------------------------------------------------------

def test_theorem2_catenoid_inconclusive():
    data = radial_data(catenoid(), 0, t_max=30.0, assert_pole_chart=True)
    rep = check_theorem2(data)
    assert rep.overall == "INCONCLUSIVE"
    assert rep.conditions["oscillation_criterion"]["verdict"] == "INCONCLUSIVE"
    assert rep.conditions["rank_condition"]["ok"] is True


def test_theorem2_synthetic_exponential():
    v = exp_profile(2.0, 30.0)
    data = GeometricProfileData(
        m=2, j=0, Hj1_const=0.0, v_j=v,
        v_1=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
        exact_potential=lambda t: 2.0 * np.exp(2.0 * np.asarray(t, dtype=float)),
        t_max=30.0,
    )
    rep = check_theorem2(data)
    assert rep.overall == "SATISFIED"
    assert rep.conditions["oscillation_criterion"]["criterion"] == "integrable"


def test_theorem2_synthetic_linear():
    data = GeometricProfileData(
        m=2, j=0, Hj1_const=0.0, v_j=power_profile(1, 200.0),
        v_1=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
        exact_potential=lambda t: np.asarray(t, dtype=float),
        t_max=200.0,
    )
    rep = check_theorem2(data)
    assert rep.overall == "SATISFIED"
    assert rep.conditions["oscillation_criterion"]["criterion"] == "nonintegrable"


def test_theorem2_validation():
    data = exp_battery()
    with pytest.raises(ValueError, match="identically zero"):
        check_theorem2(data)
    no_pot = GeometricProfileData(
        m=2, j=0, Hj1_const=0.0, v_j=power_profile(1, 10.0),
        v_1=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
    )
    with pytest.raises(ValueError, match="exact potential"):
        check_theorem2(no_pot)


# ---------------------------------------------------------------------------
# Rayleigh certificates
# ---------------------------------------------------------------------------

def test_certificate_sinc_annulus():
    v = power_profile(2, 12.0)
    A = constant_potential(1.0, 12.0)
    sol = solve_singular_cauchy(v, A, z0=1.0)
    cert = rayleigh_certificate(v, A, sol, 0, m_minus_j=2)
    assert cert.T1 == pytest.approx(np.pi, abs=1e-6)
    assert cert.T2 == pytest.approx(2 * np.pi, abs=1e-6)
    assert abs(cert.Q) <= 1e-8 * 2 * cert.denom
    # independent quadrature oracle on the closed form sin(t)/t
    val, _ = quad(
        lambda t: ((np.cos(t) / t - np.sin(t) / t**2) ** 2 - (np.sin(t) / t) ** 2) * t**2,
        np.pi, 2 * np.pi, epsabs=1e-13,
    )
    assert val == pytest.approx(0.0, abs=1e-10)


def test_certificate_harmonic_annulus():
    v = constant_profile(1.0, 12.0)
    A = constant_potential(1.0, 12.0)
    sol = solve_interior_cauchy(v, A, t0=0.0, z0=0.0, zp0=1.0)
    cert = rayleigh_certificate(v, A, sol, 0)
    assert cert.passes()
    assert cert.psi_scale == pytest.approx(np.pi / 2, abs=1e-8)


def test_certificate_damped_annulus():
    v = exp_profile(2.0, 12.0)
    A = constant_potential(2.0, 12.0)
    sol = solve_interior_cauchy(v, A, t0=0.0, z0=0.0, zp0=1.0)
    cert = rayleigh_certificate(v, A, sol, 0)
    assert abs(cert.Q) <= 1e-8 * cert.denom


def test_certificate_every_battery_pair():
    batteries = [
        (power_profile(2, 35.0), constant_potential(1.0, 35.0), "singular", 2),
        (constant_profile(1.0, 35.0), constant_potential(1.0, 35.0), "interior", 1),
        (exp_profile(2.0, 35.0), constant_potential(2.0, 35.0), "interior", 1),
        (power_profile(1, 35.0), constant_potential(1.0, 35.0), "singular", 1),
    ]
    for v, A, kind, mj in batteries:
        if kind == "singular":
            sol = solve_singular_cauchy(v, A, z0=1.0)
        else:
            sol = solve_interior_cauchy(v, A, t0=0.0, z0=0.0, zp0=1.0)
        certs = certificates_beyond(v, A, sol, m_minus_j=mj)
        assert len(certs) >= 3
        for cert in certs:
            assert cert.passes(1e-8)


def test_certificate_errors():
    v = exp_profile(2.0, 50.0)
    A = constant_potential(1.0, 50.0)
    sol = solve_interior_cauchy(v, A, t0=0.0, z0=1.0, zp0=0.0)  # no zeros
    with pytest.raises(ValueError, match="too few zeros"):
        rayleigh_certificate(v, A, sol, 0)


# ---------------------------------------------------------------------------
# gate
# ---------------------------------------------------------------------------

def test_gate_requires_all_links():
    data = exp_battery()
    report = check_theorem1(data, branch="ii", constant_mode="corrected")
    A = potential_profile(data, "lower_bound", "corrected")
    sol = solve_interior_cauchy(data.v_j, A, t0=0.0, z0=1.0, zp0=0.0, t_max=20.0)
    certs = certificates_beyond(data.v_j, A, sol, m_minus_j=2)
    crit = criterion_integrable(data.v_j, A, T=1.0, t_max=20.0)

    full = instability_verdict(report, crit, certs)
    assert full.verdict == "CONCLUSION"
    assert "equator" in full.conclusion

    # any inconclusive link blocks the conclusion
    blocked = instability_verdict(report, "INCONCLUSIVE", certs)
    assert blocked.verdict == "NO_CONCLUSION"
    assert blocked.conclusion is None

    failed = check_theorem1(
        GeometricProfileData(
            m=3, j=1, Hj1_const=1.0, v_j=power_profile(2, 1e4),
            v_1=lambda t: 1.0 / np.asarray(t, dtype=float), t_max=1e4,
        ),
        branch="ii",
    )
    assert instability_verdict(failed, crit, certs).verdict == "NO_CONCLUSION"


def test_gate_accepts_solution_as_oscillation_evidence():
    data = exp_battery()
    report = check_theorem1(data, branch="ii")
    A = potential_profile(data, "lower_bound", "corrected")
    sol = solve_interior_cauchy(data.v_j, A, t0=0.0, z0=1.0, zp0=0.0, t_max=20.0)
    certs = certificates_beyond(data.v_j, A, sol, m_minus_j=2)
    rec = instability_verdict(report, sol, certs)
    assert rec.verdict == "CONCLUSION"


# ---------------------------------------------------------------------------
# coarea consistency
# ---------------------------------------------------------------------------

def test_coarea_total_mean_curvature_sphere():
    data = radial_data(sphere_profile(), 0, t_max=1.3)
    # radial integral of v_1 vs the area-weighted surface quadrature of H_1
    T = 1.2
    radial, _ = quad(lambda t: float(data.v_1(t)), 0.0, T, epsabs=1e-12)
    # independent route: parametrize the cap and integrate H_1 dA numerically
    s = np.linspace(1e-9, T, 20001)
    area_density = 2 * np.pi * np.sin(s)  # |f_s x f_theta| integrated over theta
    surface_integral = np.trapezoid(1.0 * area_density, s)
    assert radial == pytest.approx(surface_integral, rel=1e-6)
