"""Solver and criteria tests against closed-form oracles."""

import numpy as np
import pytest
from scipy.optimize import brentq

from hyperstab import (
    CoefficientProfile,
    PotentialProfile,
    constant_potential,
    constant_profile,
    criterion_integrable,
    criterion_nonintegrable,
    exp_profile,
    find_zeros,
    integral_divergence_probe,
    power_profile,
    profile_from_csv,
    potential_from_callable,
    solve_interior_cauchy,
    solve_singular_cauchy,
)


def bessel_j0(x, n_nodes=256):
    """Independent oracle: J0 via the trapezoid rule on its periodic integral form."""
    theta = np.arange(n_nodes) * np.pi / n_nodes
    return np.cos(np.outer(np.atleast_1d(x), np.sin(theta))).mean(axis=1)


def bessel_j0_zeros(n, t_hi=40.0):
    grid = np.linspace(0.5, t_hi, 4000)
    vals = bessel_j0(grid)
    zeros = []
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        zeros.append(brentq(lambda x: float(bessel_j0(x)[0]), grid[i], grid[i + 1], xtol=1e-14))
    return np.array(zeros[:n])


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------

def test_profile_flags():
    assert power_profile(2, 10.0).vanishes_at_zero
    assert power_profile(1, 10.0).vanishes_at_zero
    assert not exp_profile(2.0, 10.0).vanishes_at_zero
    assert not constant_profile(1.0, 10.0).vanishes_at_zero


def test_profile_interior_zero_rejected():
    # positive near the origin, dead on [4, 6]: 1/v unbounded in the interior
    def dead_zone(t):
        t = np.asarray(t, dtype=float)
        return np.where(t < 4.0, t, np.maximum(t - 6.0, 0.0))

    with pytest.raises(ValueError, match="vanishes at interior"):
        CoefficientProfile.from_callable(dead_zone, 10.0)


def test_potential_negative_rejected():
    with pytest.raises(ValueError, match="negative"):
        PotentialProfile.from_callable(lambda t: np.cos(np.asarray(t, dtype=float)), 10.0)


def test_zero_potential_flagged_not_rejected():
    A = constant_potential(0.0, 10.0)
    assert A.identically_zero


# ---------------------------------------------------------------------------
# singular solver
# ---------------------------------------------------------------------------

def test_singular_sinc():
    # (t^2 z')' + t^2 z = 0, z(0+) = 1  =>  z = sin t / t
    v = power_profile(2, 12.0)
    A = constant_potential(1.0, 12.0)
    sol = solve_singular_cauchy(v, A, z0=1.0)
    assert sol.start_kind == "singular_origin"
    assert sol.evaluate(np.pi / 2)[0, 0] == pytest.approx(2 / np.pi, abs=1e-8)
    np.testing.assert_allclose(sol.zeros[:3], [np.pi, 2 * np.pi, 3 * np.pi], atol=1e-6)


def test_singular_bessel():
    v = power_profile(1, 12.0)
    A = constant_potential(1.0, 12.0)
    sol = solve_singular_cauchy(v, A, z0=1.0)
    oracle = bessel_j0_zeros(3, t_hi=12.0)
    np.testing.assert_allclose(oracle, [2.404825557695773, 5.520078110286311, 8.653727912911013], atol=1e-10)
    np.testing.assert_allclose(sol.zeros[:3], oracle, atol=1e-6)
    # pointwise agreement with the series/integral oracle
    pts = np.linspace(0.3, 11.0, 40)
    np.testing.assert_allclose(sol.evaluate(pts)[0], bessel_j0(pts), atol=1e-8)


def test_singular_zero_potential_constant_solution():
    v = power_profile(2, 10.0)
    sol = solve_singular_cauchy(v, constant_potential(0.0, 10.0), z0=2.5)
    assert np.abs(sol.z - 2.5).max() < 1e-12
    assert np.abs(sol.w).max() < 1e-12
    assert len(sol.zeros) == 0


def test_singular_requires_vanishing_coefficient():
    with pytest.raises(ValueError, match="v\\(t\\) -> 0"):
        solve_singular_cauchy(constant_profile(1.0, 10.0), constant_potential(1.0, 10.0), z0=1.0)
    with pytest.raises(ValueError, match="z0 > 0"):
        solve_singular_cauchy(power_profile(2, 10.0), constant_potential(1.0, 10.0), z0=0.0)


# ---------------------------------------------------------------------------
# interior solver
# ---------------------------------------------------------------------------

def test_interior_damped_sine():
    # (e^{2t} z')' + 2 e^{2t} z = 0  <=>  z'' + 2 z' + 2 z = 0, (z, z') = (0, 1)
    v = exp_profile(2.0, 35.0)
    A = constant_potential(2.0, 35.0)
    sol = solve_interior_cauchy(v, A, t0=0.0, z0=0.0, zp0=1.0)
    np.testing.assert_allclose(sol.zeros[:10], np.pi * np.arange(1, 11), atol=1e-6)
    pts = np.linspace(0.5, 8.0, 30)
    np.testing.assert_allclose(sol.evaluate(pts)[0], np.exp(-pts) * np.sin(pts), atol=1e-10)


def test_interior_double_root_no_zeros():
    # z'' + 2 z' + z = 0 with (1, 0): z = (1 + t) e^{-t}, never vanishes
    v = exp_profile(2.0, 100.0)
    A = constant_potential(1.0, 100.0)
    sol = solve_interior_cauchy(v, A, t0=0.0, z0=1.0, zp0=0.0)
    assert len(sol.zeros) == 0
    pts = np.linspace(0.0, 90.0, 50)
    ref = (1 + pts) * np.exp(-pts)
    assert np.abs(sol.evaluate(pts)[0] - ref).max() < 1e-9


def test_interior_harmonic_spacing():
    v = constant_profile(1.0, 35.0)
    A = constant_potential(1.0, 35.0)
    sol = solve_interior_cauchy(v, A, t0=0.0, z0=0.0, zp0=1.0)
    spacing = np.diff(sol.zeros)
    np.testing.assert_allclose(spacing, np.pi, atol=1e-8)


def test_interior_validation():
    v = power_profile(2, 10.0)
    A = constant_potential(1.0, 10.0)
    with pytest.raises(ValueError, match="v must be positive"):
        solve_interior_cauchy(v, A, t0=0.0, z0=1.0, zp0=0.0)
    with pytest.raises(ValueError, match="z0 > 0"):
        solve_interior_cauchy(constant_profile(1.0, 10.0), A, t0=0.0, z0=0.0, zp0=0.0)


def test_singular_stiff_potential():
    # (t^2 z')' + C t^2 z = 0 with large C: the Picard layer must shrink until
    # it contracts, and zero locations stay accurate under rapid oscillation
    C = 1e4
    sol = solve_singular_cauchy(power_profile(2, 1.0), constant_potential(C, 1.0), z0=1.0)
    expected = np.pi * np.arange(1, 11) / np.sqrt(C)
    assert np.abs(sol.zeros[:10] - expected).max() <= 1e-8


# ---------------------------------------------------------------------------
# zeros, flux, scaling
# ---------------------------------------------------------------------------

def test_find_zeros_rejects_positive_solution():
    v = exp_profile(2.0, 50.0)
    sol = solve_interior_cauchy(v, constant_potential(1.0, 50.0), t0=0.0, z0=1.0, zp0=0.0)
    assert find_zeros(sol).size == 0


def test_flux_identity_on_subintervals():
    tol = 1e-10
    v = power_profile(2, 30.0)
    A = constant_potential(1.0, 30.0)
    sol = solve_singular_cauchy(v, A, z0=1.0, tol=tol)
    res, scales = sol.flux_residuals(16)
    assert (res / scales).max() <= 10 * tol


def test_scaling_covariance():
    A = constant_potential(1.0, 30.0)
    sol1 = solve_singular_cauchy(power_profile(2, 30.0), A, z0=1.0)
    scaled = CoefficientProfile.from_callable(
        lambda t: 137.0 * np.power(np.asarray(t, dtype=float), 2), 30.0
    )
    sol2 = solve_singular_cauchy(scaled, A, z0=1.0)
    pts = np.linspace(0.2, 29.0, 400)
    assert np.abs(sol1.evaluate(pts)[0] - sol2.evaluate(pts)[0]).max() <= 1e-9


def test_picard_layer_matches_interior_restart():
    v = power_profile(2, 30.0)
    A = constant_potential(1.0, 30.0)
    sol = solve_singular_cauchy(v, A, z0=1.0)
    eps = 0.02
    z_eps, w_eps = sol.evaluate(eps)[:, 0]
    restart = solve_interior_cauchy(v, A, t0=eps, z0=float(z_eps), zp0=float(w_eps / eps**2), t_max=30.0)
    pts = np.linspace(0.5, 29.0, 300)
    assert np.abs(sol.evaluate(pts)[0] - restart.evaluate(pts)[0]).max() <= 1e-8


# ---------------------------------------------------------------------------
# divergence probe
# ---------------------------------------------------------------------------

def test_probe_logarithmic_divergence():
    p = integral_divergence_probe(lambda t: 1.0 / t, 1000.0)
    assert p.verdict == "DIVERGENT"
    np.testing.assert_allclose(p.window_integrals, np.log(2.0), rtol=1e-8)


def test_probe_convergent():
    p = integral_divergence_probe(lambda t: 1.0 / t**2, 1000.0)
    assert p.verdict == "CONVERGENT"
    np.testing.assert_allclose(p.ratios, 0.5, rtol=1e-8)


def test_probe_slowly_divergent_is_inconclusive():
    p = integral_divergence_probe(lambda t: 1.0 / (t * np.log(t)), 1000.0)
    assert p.verdict == "INCONCLUSIVE"


def test_probe_rejects_negative():
    with pytest.raises(ValueError, match="negative"):
        integral_divergence_probe(lambda t: -np.ones_like(np.asarray(t, dtype=float)), 10.0)


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

def test_nonintegrable_criterion_battery():
    A1 = constant_potential(1.0, 100.0)
    assert criterion_nonintegrable(power_profile(1, 100.0), A1).verdict == "OSCILLATORY"
    assert criterion_nonintegrable(power_profile(2, 100.0), A1).verdict == "INCONCLUSIVE"
    decaying = potential_from_callable(lambda t: np.exp(-4.0 * np.asarray(t, dtype=float)), 100.0)
    assert criterion_nonintegrable(exp_profile(2.0, 100.0), decaying).verdict == "INCONCLUSIVE"


def test_integrable_criterion_sharp_cases():
    v = exp_profile(2.0, 100.0)
    above = criterion_integrable(v, constant_potential(2.0, 100.0), T=1.0)
    assert above.verdict == "OSCILLATORY"
    assert above.estimate == pytest.approx(np.sqrt(2.0), abs=0.05)
    at_threshold = criterion_integrable(v, constant_potential(1.0, 100.0), T=1.0)
    assert at_threshold.verdict == "INCONCLUSIVE"
    assert at_threshold.estimate == pytest.approx(1.0, abs=0.02)


def test_integrable_criterion_super_threshold_power():
    r = criterion_integrable(power_profile(2, 200.0), constant_potential(1.0, 200.0), T=1.0)
    assert r.verdict == "OSCILLATORY"
    assert r.estimate > 10


def test_integrable_criterion_on_sampled_profile():
    """Sampled profiles estimate the remainder integral by reverse accumulation
    plus a geometric tail; the result must track the analytic-tail path."""
    t = np.linspace(0.01, 100.0, 20000)
    sampled = CoefficientProfile.from_samples(t, np.exp(2 * t))
    analytic = exp_profile(2.0, 100.0)
    A2 = constant_potential(2.0, 100.0)
    r_sampled = criterion_integrable(sampled, A2, T=1.0)
    r_analytic = criterion_integrable(analytic, A2, T=1.0)
    assert r_sampled.verdict == "OSCILLATORY"
    assert r_sampled.detail["tail_reliable"]
    assert r_sampled.estimate == pytest.approx(r_analytic.estimate, abs=1e-4)
    # the sharp threshold case must stay inconclusive on the sampled path too
    r_flat = criterion_integrable(sampled, constant_potential(1.0, 100.0), T=1.0)
    assert r_flat.verdict == "INCONCLUSIVE"


def test_integrable_criterion_precondition():
    with pytest.raises(ValueError, match="convergent"):
        criterion_integrable(power_profile(1, 100.0), constant_potential(1.0, 100.0))


def test_criteria_reject_zero_potential():
    with pytest.raises(ValueError, match="not identically zero"):
        criterion_nonintegrable(power_profile(1, 10.0), constant_potential(0.0, 10.0))


def test_criterion_soundness_on_battery():
    """Whenever a criterion says OSCILLATORY the solver must find >= 3 zeros."""
    cases = [
        (power_profile(1, 40.0), constant_potential(1.0, 40.0), ("singular", 1.0)),
        (power_profile(2, 40.0), constant_potential(1.0, 40.0), ("singular", 1.0)),
        (exp_profile(2.0, 40.0), constant_potential(2.0, 40.0), ("interior", 1.0)),
        (exp_profile(2.0, 40.0), constant_potential(1.0, 40.0), ("interior", 1.0)),
    ]
    for v, A, (kind, z0) in cases:
        verdicts = [criterion_nonintegrable(v, A).verdict]
        try:
            verdicts.append(criterion_integrable(v, A, T=1.0).verdict)
        except ValueError:
            pass
        if kind == "singular":
            sol = solve_singular_cauchy(v, A, z0=z0)
        else:
            sol = solve_interior_cauchy(v, A, t0=0.0, z0=z0, zp0=0.0)
        if "OSCILLATORY" in verdicts:
            assert len(sol.zeros) >= 3
    # the non-oscillatory battery member must never be claimed oscillatory
    v, A = exp_profile(2.0, 100.0), constant_potential(1.0, 100.0)
    assert criterion_nonintegrable(v, A).verdict == "INCONCLUSIVE"
    assert criterion_integrable(v, A, T=1.0).verdict == "INCONCLUSIVE"


# ---------------------------------------------------------------------------
# CSV round trips
# ---------------------------------------------------------------------------

def test_solution_csv_roundtrip_bit_identical(tmp_path):
    # positive decaying solution so the reloaded columns form a valid weight
    v = exp_profile(2.0, 10.0)
    sol = solve_interior_cauchy(v, constant_potential(1.0, 10.0), t0=0.0, z0=1.0, zp0=0.0)
    path = tmp_path / "solution.csv"
    sol.to_csv(path)
    reloaded = profile_from_csv(path, kind="coefficient")
    np.testing.assert_array_equal(reloaded(sol.grid), sol.z)


def test_profile_csv_errors(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("t,v\n1.0,1.0\n0.5,2.0\n")
    with pytest.raises(ValueError, match="row 3"):
        profile_from_csv(bad)
    neg = tmp_path / "neg.csv"
    neg.write_text("t,v\n1.0,1.0\n2.0,-3.0\n")
    with pytest.raises(ValueError, match="row 3"):
        profile_from_csv(neg)


def test_zero_potential_csv_accepted_for_solver(tmp_path):
    path = tmp_path / "zero.csv"
    t = np.linspace(0.1, 10.0, 50)
    path.write_text("t,A\n" + "\n".join(f"{x},0.0" for x in t))
    A = profile_from_csv(path, kind="potential")
    assert A.identically_zero
    sol = solve_singular_cauchy(power_profile(2, 10.0), A, z0=1.0)
    assert np.abs(sol.z - 1.0).max() < 1e-10
    with pytest.raises(ValueError):
        criterion_nonintegrable(power_profile(2, 10.0), A)
