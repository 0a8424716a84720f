"""Config-driven command line front end.

Subcommands: verify-algebra | oscillate | check-theorem1 | check-theorem2 |
probe-gauss | probe-envelope.  Each run writes a JSON report plus CSV traces
and matplotlib figures into the output directory; the exit status is 0 for a
completed run regardless of verdict, 2 for configuration errors (enumerated
with field paths), and 1 for runtime failures.
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import figures as figs
from .curvature import (
    elementary_symmetric_batch,
    lower_bound_constant,
    newton_sequence,
    trace_identities,
)
from .oscillation import (
    INCONCLUSIVE,
    CoefficientProfile,
    PotentialProfile,
    constant_potential,
    constant_profile,
    criterion_integrable,
    criterion_nonintegrable,
    exp_profile,
    potential_from_callable,
    power_profile,
    profile_from_csv,
    solve_interior_cauchy,
    solve_singular_cauchy,
)
from .report import write_csv, write_json_report
from .stability import (
    GeometricProfileData,
    certificates_beyond,
    check_theorem1,
    check_theorem2,
    instability_verdict,
    potential_profile,
)
from .surfaces import (
    catenoid,
    cylinder,
    equator_crossings,
    radial_data,
    sphere_profile,
    support_function,
    surface_from_profile_csv,
    tangent_envelope_probe,
)

__all__ = ["RunConfig", "RunReport", "ConfigError", "load_config", "build_config", "load_profiles", "run", "main"]

SUBCOMMANDS = (
    "verify-algebra",
    "oscillate",
    "check-theorem1",
    "check-theorem2",
    "probe-gauss",
    "probe-envelope",
)


class ConfigError(ValueError):
    """Validation failure; ``errors`` enumerates offending fields by path."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass
class RunConfig:
    subcommand: str
    out_dir: Path
    seed: int | None = None
    constant_mode: str = "corrected"
    t_max: float | None = None
    tol: float = 1e-10
    figures: bool = True
    options: dict = field(default_factory=dict)

    def echo(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "out_dir": str(self.out_dir),
            "seed": self.seed,
            "constant_mode": self.constant_mode,
            "t_max": self.t_max,
            "tol": self.tol,
            "figures": self.figures,
            "options": self.options,
        }


@dataclass
class RunReport:
    config: dict
    stages: dict
    conclusion: dict | None
    outputs: list
    notes: list

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "stages": self.stages,
            "conclusion": self.conclusion,
            "outputs": [str(p) for p in self.outputs],
            "notes": self.notes,
        }


# ---------------------------------------------------------------------------
# Config loading and validation
# ---------------------------------------------------------------------------

def load_config(path) -> dict:
    with open(path) as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ConfigError(["config: top level must be a JSON object"])
    return raw


def _profile_from_spec(spec, t_max, path, errors, kind="coefficient"):
    if not isinstance(spec, dict):
        errors.append(f"{path}: expected an object with a 'kind' field")
        return None
    k = spec.get("kind")
    try:
        if k == "exp":
            if kind == "potential":
                fn = lambda t: spec.get("scale", 1.0) * np.exp(spec["rate"] * np.asarray(t, dtype=float))
                return potential_from_callable(fn, t_max)
            return exp_profile(float(spec["rate"]), t_max, scale=float(spec.get("scale", 1.0)))
        if k == "power":
            if kind == "potential":
                fn = lambda t: spec.get("scale", 1.0) * np.power(np.asarray(t, dtype=float), spec["exponent"])
                return potential_from_callable(fn, t_max)
            return power_profile(float(spec["exponent"]), t_max, scale=float(spec.get("scale", 1.0)))
        if k == "constant":
            value = float(spec["value"])
            return constant_potential(value, t_max) if kind == "potential" else constant_profile(value, t_max)
        if k == "csv":
            return profile_from_csv(spec["path"], kind=kind)
    except KeyError as exc:
        errors.append(f"{path}.{exc.args[0]}: required for kind '{k}'")
        return None
    except (ValueError, OSError) as exc:
        errors.append(f"{path}: {exc}")
        return None
    errors.append(f"{path}.kind: unknown kind {k!r} (expected exp|power|constant|csv)")
    return None


def _surface_from_spec(spec, path, errors):
    if not isinstance(spec, dict):
        errors.append(f"{path}: expected an object with a 'name' field")
        return None
    name = spec.get("name")
    try:
        if name == "catenoid":
            surf = catenoid(s_max=float(spec.get("s_max", 40.0)))
        elif name == "cylinder":
            surf = cylinder(m=int(spec.get("m", 2)), radius=float(spec.get("radius", 1.0)),
                            s_max=float(spec.get("s_max", 20.0)))
        elif name == "sphere":
            surf = sphere_profile(m=int(spec.get("m", 2)), radius=float(spec.get("radius", 1.0)))
        elif name == "csv":
            surf = surface_from_profile_csv(spec["path"], m=int(spec.get("m", 2)))
        else:
            errors.append(f"{path}.name: unknown surface {name!r} (expected catenoid|cylinder|sphere|csv)")
            return None
    except KeyError as exc:
        errors.append(f"{path}.{exc.args[0]}: required for surface '{name}'")
        return None
    except (ValueError, OSError) as exc:
        errors.append(f"{path}: {exc}")
        return None
    orientation = spec.get("orientation", 1)
    if orientation not in (1, -1):
        errors.append(f"{path}.orientation: must be 1 or -1")
        return None
    return surf.with_orientation(orientation)


def load_profiles(v_path=None, a_path=None, profile_path=None, m: int = 2) -> dict:
    """Load CSV profiles: two-column weight/potential files, three-column surface profile."""
    out = {}
    if v_path is not None:
        out["v"] = profile_from_csv(v_path, kind="coefficient")
    if a_path is not None:
        out["A"] = profile_from_csv(a_path, kind="potential")
    if profile_path is not None:
        out["surface"] = surface_from_profile_csv(profile_path, m=m)
    return out


def build_config(subcommand: str, raw: dict, overrides: dict | None = None) -> RunConfig:
    """Validate the raw config for a subcommand; collect errors with field paths."""
    raw = dict(raw or {})
    raw.update({k: v for k, v in (overrides or {}).items() if v is not None})
    errors: list[str] = []

    if subcommand not in SUBCOMMANDS:
        raise ConfigError([f"subcommand: unknown {subcommand!r}"])

    out_dir = Path(raw.get("out", "out"))
    seed = raw.get("seed")
    if seed is not None:
        try:
            seed = int(seed)
            if seed < 0:
                raise ValueError
        except (TypeError, ValueError):
            errors.append(f"{subcommand}.seed: must be a nonnegative integer")
    constant_mode = raw.get("constant_mode", "corrected")
    if constant_mode not in ("paper", "corrected"):
        errors.append(f"{subcommand}.constant_mode: must be 'paper' or 'corrected'")
    tol = raw.get("tol", 1e-10)
    try:
        tol = float(tol)
        if tol <= 0:
            raise ValueError
    except (TypeError, ValueError):
        errors.append(f"{subcommand}.tol: must be a positive real")
    t_max = raw.get("t_max")
    if t_max is not None:
        try:
            t_max = float(t_max)
            if t_max <= 0:
                raise ValueError
        except (TypeError, ValueError):
            errors.append(f"{subcommand}.t_max: must be a positive real")
    figures = bool(raw.get("figures", True))

    options: dict = {}
    if subcommand == "verify-algebra":
        if seed is None:
            errors.append("verify-algebra.seed: a fuzz seed is mandatory")
        options["samples"] = int(raw.get("samples", 1000))
        if options["samples"] <= 0:
            errors.append("verify-algebra.samples: must be positive")
        m_range = raw.get("m_range", [2, 10])
        if raw.get("m") is not None:
            m_range = [int(raw["m"]), int(raw["m"])]
        if (not isinstance(m_range, (list, tuple)) or len(m_range) != 2
                or int(m_range[0]) < 2 or int(m_range[1]) < int(m_range[0])):
            errors.append("verify-algebra.m_range: expected [lo, hi] with 2 <= lo <= hi")
        else:
            options["m_range"] = (int(m_range[0]), int(m_range[1]))

    elif subcommand == "oscillate":
        tm = t_max if t_max is not None else 10.0
        options["v"] = _profile_from_spec(raw.get("v", {"kind": "power", "exponent": 2}),
                                          tm, "oscillate.v", errors)
        options["A"] = _profile_from_spec(raw.get("A", {"kind": "constant", "value": 1.0}),
                                          tm, "oscillate.A", errors, kind="potential")
        start = raw.get("start", {"kind": "singular", "z0": 1.0})
        if not isinstance(start, dict) or start.get("kind") not in ("singular", "interior"):
            errors.append("oscillate.start.kind: must be 'singular' or 'interior'")
        options["start"] = start
        options["T"] = float(raw.get("T", 1.0))
        t_max = tm

    elif subcommand == "check-theorem1":
        m = int(raw.get("m", 3))
        j = int(raw.get("j", 1))
        if not 0 <= j <= m - 2:
            errors.append(f"check-theorem1.j: need 0 <= j <= m-2 (m = {m})")
        options["m"], options["j"] = m, j
        options["branch"] = raw.get("branch", "ii")
        if options["branch"] not in ("i", "ii"):
            errors.append("check-theorem1.branch: must be 'i' or 'ii'")
        tm = t_max if t_max is not None else 20.0
        options["Hj1"] = float(raw.get("Hj1", 1.0))
        options["v_j"] = _profile_from_spec(raw.get("v_j", {"kind": "exp", "rate": 2.0}),
                                            tm, "check-theorem1.v_j", errors)
        options["v_1_spec"] = raw.get("v_1", {"kind": "exp", "rate": 2.0})
        options["v_1"] = _profile_from_spec(options["v_1_spec"], tm, "check-theorem1.v_1", errors)
        options["T"] = float(raw.get("T", 1.0))
        options["certificate_radius"] = float(raw.get("certificate_radius", 0.0))
        t_max = tm

    elif subcommand == "check-theorem2":
        options["j"] = int(raw.get("j", 0))
        options["branch"] = raw.get("branch", "auto")
        if options["branch"] not in ("auto", "i", "ii"):
            errors.append("check-theorem2.branch: must be 'auto', 'i' or 'ii'")
        options["T"] = float(raw.get("T", 1.0))
        options["certificate_radius"] = float(raw.get("certificate_radius", 0.0))
        if "v_j" in raw:  # synthetic minimal data: v_j plus the exact potential A(t)
            tm = t_max if t_max is not None else 30.0
            options["v_j"] = _profile_from_spec(raw["v_j"], tm, "check-theorem2.v_j", errors)
            options["exact_A"] = _profile_from_spec(
                raw.get("exact_A", {"kind": "constant", "value": 1.0}),
                tm, "check-theorem2.exact_A", errors, kind="potential")
            options["m"] = int(raw.get("m", 2))
            if not 0 <= options["j"] <= options["m"] - 2:
                errors.append(f"check-theorem2.j: need 0 <= j <= m-2 (m = {options['m']})")
            t_max = tm
        else:
            options["surface"] = _surface_from_spec(raw.get("surface", {"name": "catenoid"}),
                                                    "check-theorem2.surface", errors)
            options["assert_pole_chart"] = bool(raw.get("assert_pole_chart", True))

    elif subcommand == "probe-gauss":
        options["surface"] = _surface_from_spec(raw.get("surface", {"name": "cylinder"}),
                                                "probe-gauss.surface", errors)
        if options["surface"] is not None:
            mp1 = options["surface"].m + 1
            direction = raw.get("direction", [1.0] + [0.0] * (mp1 - 1))
            if not isinstance(direction, (list, tuple)) or len(direction) != mp1:
                errors.append(f"probe-gauss.direction: expected {mp1} components")
            else:
                options["direction"] = [float(x) for x in direction]
            options["window"] = raw.get("window")
        options["samples"] = int(raw.get("samples", 512))

    elif subcommand == "probe-envelope":
        options["surface"] = _surface_from_spec(raw.get("surface", {"name": "catenoid"}),
                                                "probe-envelope.surface", errors)
        if options["surface"] is not None:
            mp1 = options["surface"].m + 1
            point = raw.get("point", [0.0] * mp1)
            if not isinstance(point, (list, tuple)) or len(point) != mp1:
                errors.append(f"probe-envelope.point: expected {mp1} components")
            else:
                options["point"] = [float(x) for x in point]
            options["window"] = raw.get("window")
        options["samples"] = int(raw.get("samples", 1024))

    if errors:
        raise ConfigError(errors)
    return RunConfig(
        subcommand=subcommand, out_dir=out_dir, seed=seed, constant_mode=constant_mode,
        t_max=t_max, tol=tol, figures=figures, options=options,
    )


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------

def _run_verify_algebra(cfg: RunConfig, out: Path):
    rng = np.random.default_rng(cfg.seed)
    n = cfg.options["samples"]
    m_lo, m_hi = cfg.options["m_range"]
    stages: dict = {}
    outputs: list = []

    worst_identity = 0.0
    worst_pm = 0.0
    residuals = np.empty(n)
    t0 = time.perf_counter()
    for i in range(n):
        m = int(rng.integers(m_lo, m_hi + 1))
        B = rng.standard_normal((m, m))
        A = 0.5 * (B + B.T)
        j = int(rng.integers(1, m))
        rep = trace_identities(A, j)
        residuals[i] = rep.max_relative
        worst_identity = max(worst_identity, rep.max_relative)
        seq = newton_sequence(A)
        norm = np.linalg.norm(A, 2)
        worst_pm = max(worst_pm, float(np.abs(seq.P[m]).max()) / max(norm, 1e-30) ** m)
    stages["trace_identities"] = {
        "samples": n, "max_relative_residual": worst_identity,
        "max_terminal_tensor_residual": worst_pm,
        "pass": bool(worst_identity <= 1e-10 and worst_pm <= 1e-10),
        "seconds": time.perf_counter() - t0,
    }

    ks = np.exp(rng.standard_normal((n, 5)))
    S = elementary_symmetric_batch(ks)
    from math import comb as _comb
    H = S / np.array([_comb(5, r) for r in range(6)], dtype=float)
    gaps = H[:, 1:-1] ** 2 - H[:, :-2] * H[:, 2:]
    stages["newton_inequalities"] = {
        "samples": n, "min_gap": float(gaps.min()), "pass": bool(gaps.min() >= -1e-12),
    }

    m_c = 5
    potential = S[:, 1] * S[:, 2] - 3.0 * S[:, 3]
    corr = lower_bound_constant(m_c, 1, "corrected") * H[:, 1] * H[:, 2]
    pap = lower_bound_constant(m_c, 1, "paper") * H[:, 1] * H[:, 2]
    scale = np.maximum(np.abs(potential), 1.0)
    violations = int(np.sum(potential - pap < -1e-10 * scale))
    stages["potential_bounds"] = {
        "corrected_min_margin": float(((potential - corr) / scale).min()),
        "paper_violations": violations,
        "pass": bool(((potential - corr) / scale).min() >= -1e-10),
    }

    outputs.append(write_csv(out / "identity_residuals.csv", ["sample", "max_relative"],
                             [np.arange(n), residuals]))
    if cfg.figures:
        outputs.append(figs.residual_figure(residuals, out / "identity_residuals.png",
                                            title="trace identity residuals"))
    return stages, None, outputs, []


def _solve_from_start(v, A, start: dict, t_max, tol):
    if start.get("kind") == "interior":
        return solve_interior_cauchy(
            v, A, t0=float(start.get("t0", 0.0)), z0=float(start.get("z0", 1.0)),
            zp0=float(start.get("zp0", 0.0)), t_max=t_max, tol=tol,
        )
    return solve_singular_cauchy(v, A, z0=float(start.get("z0", 1.0)), t_max=t_max, tol=tol)


def _run_oscillate(cfg: RunConfig, out: Path):
    v: CoefficientProfile = cfg.options["v"]
    A: PotentialProfile = cfg.options["A"]
    stages: dict = {}
    outputs: list = []
    notes: list = []

    sol = _solve_from_start(v, A, cfg.options["start"], cfg.t_max, cfg.tol)
    res, scales = sol.flux_residuals(8)
    stages["solve"] = {
        "start_kind": sol.start_kind, "zeros": sol.zeros.tolist(),
        "max_flux_residual": float((res / scales).max()),
    }
    sol.to_csv(out / "solution.csv")
    outputs.append(out / "solution.csv")
    outputs.append(write_csv(out / "zeros.csv", ["index", "t"],
                             [np.arange(len(sol.zeros)), sol.zeros]))

    if A.identically_zero:
        notes.append("potential identically zero: oscillation criteria not applicable")
    else:
        crit_n = criterion_nonintegrable(v, A, cfg.t_max)
        stages["criterion_nonintegrable"] = crit_n.as_dict()
        try:
            crit_i = criterion_integrable(v, A, T=cfg.options["T"], t_max=cfg.t_max)
            stages["criterion_integrable"] = crit_i.as_dict()
            if crit_i.trace_t is not None:
                outputs.append(write_csv(out / "ratio_trace.csv", ["t", "ratio"],
                                         [crit_i.trace_t, crit_i.trace_ratio]))
                if cfg.figures:
                    outputs.append(figs.ratio_figure(crit_i.trace_t, crit_i.trace_ratio,
                                                     out / "ratio_trace.png"))
        except ValueError as exc:
            notes.append(f"integrable-case test skipped: {exc}")

    if cfg.figures:
        outputs.append(figs.solution_figure(sol, out / "solution.png"))
    return stages, None, outputs, notes


def _run_check_theorem1(cfg: RunConfig, out: Path):
    opts = cfg.options
    data = GeometricProfileData(
        m=opts["m"], j=opts["j"], Hj1_const=opts["Hj1"],
        v_j=opts["v_j"], v_1=opts["v_1"], exact_potential=None,
        t_max=cfg.t_max, provenance="synthetic",
    )
    stages: dict = {}
    outputs: list = []
    notes: list = [f"constant_mode: {cfg.constant_mode}"]

    report = check_theorem1(data, branch=opts["branch"], constant_mode=cfg.constant_mode)
    stages["hypotheses"] = report.to_dict()
    trace = report.traces.get("limsup_trace")
    if trace is not None:
        outputs.append(write_csv(out / "limsup_trace.csv", ["t", "value"],
                                 [trace["t"], trace["value"]]))
        if cfg.figures:
            outputs.append(figs.ratio_figure(trace["t"], trace["value"], out / "limsup_trace.png",
                                             threshold=report.threshold, title="limsup trace"))

    conclusion = None
    if report.overall == "SATISFIED":
        A = potential_profile(data, mode="lower_bound", constant_mode=cfg.constant_mode)
        stages["potential"] = {"mode": "lower_bound", "constant_mode": cfg.constant_mode,
                               "A_at_1": float(A(1.0))}
        start = {"kind": "singular", "z0": 1.0} if data.v_j.vanishes_at_zero else \
            {"kind": "interior", "t0": 0.0, "z0": 1.0, "zp0": 0.0}
        sol = _solve_from_start(data.v_j, A, start, cfg.t_max, cfg.tol)
        sol.to_csv(out / "solution.csv")
        outputs.append(out / "solution.csv")
        if cfg.figures:
            outputs.append(figs.solution_figure(sol, out / "solution.png"))
        if opts["branch"] == "ii":
            crit = criterion_integrable(data.v_j, A, T=opts["T"], t_max=cfg.t_max)
        else:
            crit = criterion_nonintegrable(data.v_j, A, cfg.t_max)
        stages["criterion"] = crit.as_dict()
        certs = certificates_beyond(data.v_j, A, sol, m_minus_j=data.m - data.j,
                                    radius=opts["certificate_radius"], max_pairs=16)
        stages["certificates"] = [c.to_dict() for c in certs]
        if certs:
            outputs.append(write_csv(
                out / "certificates.csv",
                ["T1", "T2", "Q", "psi_scale", "lambda_bound"],
                [np.array([c.T1 for c in certs]), np.array([c.T2 for c in certs]),
                 np.array([c.Q for c in certs]), np.array([c.psi_scale for c in certs]),
                 np.array([c.lambda_bound for c in certs])],
            ))
        record = instability_verdict(report, crit, certs)
        conclusion = record.to_dict()
    else:
        record = instability_verdict(report, INCONCLUSIVE, [])
        conclusion = record.to_dict()
        notes.append("hypotheses not satisfied: pipeline stops at the gate")
    return stages, conclusion, outputs, notes


def _run_check_theorem2(cfg: RunConfig, out: Path):
    opts = cfg.options
    stages: dict = {}
    outputs: list = []
    notes: list = []

    if "surface" in opts:
        surface = opts["surface"]
        data = radial_data(surface, opts["j"], t_max=cfg.t_max,
                           assert_pole_chart=opts["assert_pole_chart"])
        notes.append(f"radial data from {data.provenance}")
    else:
        v_j = opts["v_j"]
        A_spec = opts["exact_A"]
        exact = lambda t: A_spec(t) * v_j(t)
        data = GeometricProfileData(
            m=opts["m"], j=opts["j"], Hj1_const=0.0, v_j=v_j,
            v_1=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
            exact_potential=exact, t_max=cfg.t_max, provenance="synthetic",
        )
        notes.append("synthetic minimal-type data")

    report = check_theorem2(data, branch=opts["branch"], T=opts["T"])
    stages["hypotheses"] = report.to_dict()
    crit = report.traces.get("criterion")
    if crit is not None and crit.trace_t is not None:
        outputs.append(write_csv(out / "ratio_trace.csv", ["t", "ratio"],
                                 [crit.trace_t, crit.trace_ratio]))
        if cfg.figures:
            outputs.append(figs.ratio_figure(crit.trace_t, crit.trace_ratio, out / "ratio_trace.png"))

    certs = []
    if report.overall == "SATISFIED":
        A = potential_profile(data, mode="exact")
        start = {"kind": "singular", "z0": 1.0} if data.v_j.vanishes_at_zero else \
            {"kind": "interior", "t0": 0.0, "z0": 1.0, "zp0": 0.0}
        sol = _solve_from_start(data.v_j, A, start, data.t_max, cfg.tol)
        sol.to_csv(out / "solution.csv")
        outputs.append(out / "solution.csv")
        if cfg.figures:
            outputs.append(figs.solution_figure(sol, out / "solution.png"))
        certs = certificates_beyond(data.v_j, A, sol, m_minus_j=data.m - data.j,
                                    radius=opts["certificate_radius"], max_pairs=16)
        stages["certificates"] = [c.to_dict() for c in certs]
    record = instability_verdict(report, crit if crit is not None else INCONCLUSIVE, certs)
    return stages, record.to_dict(), outputs, notes


def _run_probe_gauss(cfg: RunConfig, out: Path):
    surface = cfg.options["surface"]
    window = cfg.options.get("window") or (surface.s_min + 1e-3, surface.s_max)
    cross = equator_crossings(surface, cfg.options["direction"], window, n=cfg.options["samples"])
    stages = {
        "equator_crossings": {
            "direction": cross.a.tolist(),
            "window": [float(window[0]), float(window[1])],
            "fraction_with_crossing": cross.fraction,
            "identically_zero": cross.identically_zero,
            "divergent_sequence_exists": bool(cross.has_crossing[-64:].all()),
        }
    }
    outputs = [write_csv(out / "crossings.csv", ["s", "has_crossing", "witness_cos"],
                         [cross.s, cross.has_crossing.astype(float), cross.witness_cos])]
    if cfg.figures:
        outputs.append(figs.crossings_figure(cross, out / "crossings.png"))
    return stages, None, outputs, []


def _run_probe_envelope(cfg: RunConfig, out: Path):
    surface = cfg.options["surface"]
    window = cfg.options.get("window") or (surface.s_min + 1e-3, surface.s_max)
    probe = tangent_envelope_probe(surface, cfg.options["point"], window, n=cfg.options["samples"])
    support = support_function(surface, probe.s)
    stages = {
        "tangent_envelope": {
            "point": probe.q.tolist(),
            "window": [float(window[0]), float(window[1])],
            "covered": probe.covered,
            "witness_s": probe.witness_s,
            "witness_cos": probe.witness_cos,
        }
    }
    outputs = [write_csv(out / "envelope.csv", ["s", "support", "gap"],
                         [probe.s, support, probe.gap])]
    if cfg.figures:
        outputs.append(figs.envelope_figure(probe, out / "envelope.png"))
    return stages, None, outputs, []


_HANDLERS = {
    "verify-algebra": _run_verify_algebra,
    "oscillate": _run_oscillate,
    "check-theorem1": _run_check_theorem1,
    "check-theorem2": _run_check_theorem2,
    "probe-gauss": _run_probe_gauss,
    "probe-envelope": _run_probe_envelope,
}


def run(config: RunConfig) -> RunReport:
    """Execute one validated run and write its report, traces, and figures."""
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stages, conclusion, outputs, notes = _HANDLERS[config.subcommand](config, out)
    report = RunReport(
        config=config.echo(), stages=stages, conclusion=conclusion,
        outputs=[str(p) for p in outputs], notes=notes,
    )
    report_path = write_json_report(out / "report.json", report.to_dict())
    report.outputs.append(str(report_path))
    return report


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hyperstab",
        description="Curvature algebra checks, radial oscillation runs, and instability pipelines.",
    )
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", type=str, default=None, help="JSON config file")
    parser.add_argument("--out", type=str, default=None, help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="fuzz seed")
    parser.add_argument("--constant-mode", choices=("paper", "corrected"), default=None)
    parser.add_argument("--tmax", type=float, default=None, help="domain endpoint")
    parser.add_argument("--tol", type=float, default=None, help="solver tolerance")
    parser.add_argument("--no-figures", action="store_true", help="skip figure rendering")
    args = parser.parse_args(argv)

    try:
        raw = load_config(args.config) if args.config else {}
        overrides = {
            "out": args.out, "seed": args.seed, "constant_mode": args.constant_mode,
            "t_max": args.tmax, "tol": args.tol,
        }
        if args.no_figures:
            overrides["figures"] = False
        config = build_config(args.subcommand, raw, overrides)
    except ConfigError as exc:
        for err in exc.errors:
            print(f"config error: {err}")
        return 2
    except OSError as exc:
        print(f"config error: {exc}")
        return 2

    try:
        report = run(config)
    except Exception as exc:  # noqa: BLE001 - runtime failures exit nonzero
        print(f"run failed: {exc}")
        return 1

    if report.conclusion is not None:
        print(f"verdict: {report.conclusion['verdict']}")
        if report.conclusion.get("conclusion"):
            print(report.conclusion["conclusion"])
    for stage, payload in report.stages.items():
        if isinstance(payload, dict) and "verdict" in payload:
            print(f"{stage}: {payload['verdict']}")
        elif isinstance(payload, dict) and "overall" in payload:
            print(f"{stage}: {payload['overall']}")
        elif isinstance(payload, dict) and "pass" in payload:
            print(f"{stage}: {'PASS' if payload['pass'] else 'FAIL'}")
    print(f"report: {Path(config.out_dir) / 'report.json'}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
