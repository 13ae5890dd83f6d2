"""Run configuration, check orchestration, reports and point-cloud export.

A configuration is a JSON object::

    {
      "family": {"kind": "lawlor", "a": [1, 1], "psi": [0, 0]},
      "samples": {"seed": 0, "sigma_count": 200, "s_range": [-2, 2], "s_count": 41},
      "tolerances": {"lagrangian": 1e-9},
      "checks": ["lagrangian_st", "lagrangian_fs", "angle"],
      "meancurv": {"metric": "conformal-fubini-study", "levels": [32, 64, 128]}
    }

Exponential families use ``{"kind": "exponential", "lambda": [...], "C": c}``.
``samples.points`` replaces random sampling by explicit quadric points,
which is required when the quadric is not an ellipsoid.
"""

import copy
import csv
import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import ConfigError, SpecLagError
from .families import ExponentialFamily, LawlorFamily
from .meancurv import METRIC_KINDS, convergence_study
from .sigma import sigma_points, sigma_sample
from .verify import (
    DEFAULT_TOLERANCES,
    angle_constancy,
    condition_Im_residual,
    condition_r2_residual,
    det_identity_report,
    frame_pair_residual_split,
    lagrangian_residual,
)

CHECKS = (
    "lagrangian_st",
    "lagrangian_fs",
    "frame_split_st",
    "frame_split_fs",
    "condition_im",
    "condition_r2",
    "det_identity",
    "angle",
    "meancurv",
)
DEFAULT_CHECKS = ["lagrangian_st", "lagrangian_fs", "condition_im", "condition_r2", "det_identity", "angle"]
DEFAULT_SAMPLES = {"sigma_count": 200, "s_range": [-2.0, 2.0], "s_count": 41}
DEFAULT_MEANCURV = {
    "metric": "conformal-fubini-study",
    "levels": [32, 64, 128],
    "s_range": [-1.0, 1.0],
    "connection": False,
    "order_range": [1.5, 2.5],
}
_TOP_KEYS = {"family", "samples", "tolerances", "checks", "meancurv"}


@dataclass
class RunConfig:
    family: dict
    samples: dict
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    checks: list = field(default_factory=lambda: list(DEFAULT_CHECKS))
    meancurv: dict = field(default_factory=lambda: dict(DEFAULT_MEANCURV))

    def to_dict(self):
        return {
            "family": self.family,
            "samples": self.samples,
            "tolerances": self.tolerances,
            "checks": self.checks,
            "meancurv": self.meancurv,
        }


def _reject_unknown(section, allowed, path):
    if not isinstance(section, dict):
        raise ConfigError("expected an object", path)
    for key in section:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r}", f"{path}.{key}" if path else key)


def _real_list(values, path, n=None):
    if not isinstance(values, list) or not values:
        raise ConfigError("expected a non-empty list of numbers", path)
    for k, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not np.isfinite(v):
            raise ConfigError(f"not a finite number: {v!r}", f"{path}[{k}]")
    if n is not None and len(values) != n:
        raise ConfigError(f"expected {n} entries, got {len(values)}", path)
    return [float(v) for v in values]


def _number(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not np.isfinite(value):
        raise ConfigError(f"not a finite number: {value!r}", path)
    return float(value)


def _validate_family(fam):
    _reject_unknown(fam, {"kind", "a", "psi", "lambda", "C"}, "family")
    kind = fam.get("kind")
    if kind == "lawlor":
        _reject_unknown(fam, {"kind", "a", "psi"}, "family")
        a = _real_list(fam.get("a"), "family.a")
        for k, v in enumerate(a):
            if v <= 0:
                raise ConfigError(f"must be positive, got {v}", f"family.a[{k}]")
        psi = _real_list(fam.get("psi", [0.0] * len(a)), "family.psi", len(a))
        return {"kind": kind, "a": a, "psi": psi}
    if kind == "exponential":
        _reject_unknown(fam, {"kind", "lambda", "C"}, "family")
        lam = _real_list(fam.get("lambda"), "family.lambda")
        if "C" not in fam:
            raise ConfigError("missing", "family.C")
        C = _number(fam["C"], "family.C")
        if C == 0:
            raise ConfigError("must be nonzero", "family.C")
        for k, v in enumerate(lam):
            if v == 0:
                raise ConfigError("must be nonzero", f"family.lambda[{k}]")
            if v * (v + C) <= 0:
                raise ConfigError(f"lambda*(lambda+C) = {v * (v + C):g} must be positive", f"family.lambda[{k}]")
        return {"kind": kind, "lambda": lam, "C": C}
    raise ConfigError(f"unknown family kind {kind!r}", "family.kind")


def _validate_samples(samples, n):
    _reject_unknown(samples, {"seed", "sigma_count", "s_range", "s_count", "points"}, "samples")
    out = dict(DEFAULT_SAMPLES)
    out.update(samples)
    if "seed" not in samples:
        raise ConfigError("a seed is required", "samples.seed")
    if isinstance(out["seed"], bool) or not isinstance(out["seed"], int) or out["seed"] < 0:
        raise ConfigError("must be a non-negative integer", "samples.seed")
    for key in ("sigma_count", "s_count"):
        if isinstance(out[key], bool) or not isinstance(out[key], int) or out[key] < 1:
            raise ConfigError("must be a positive integer", f"samples.{key}")
    lo, hi = _real_list(out["s_range"], "samples.s_range", 2)
    if not hi >= lo:
        raise ConfigError("must be increasing", "samples.s_range")
    out["s_range"] = [lo, hi]
    if "points" in out:
        if not isinstance(out["points"], list) or not out["points"]:
            raise ConfigError("expected a non-empty list of points", "samples.points")
        out["points"] = [_real_list(p, f"samples.points[{k}]", n) for k, p in enumerate(out["points"])]
    return out


def parse_config(text):
    """Parse and validate a JSON configuration document.

    Unknown keys are rejected; omitted fields take their defaults.
    Errors are :class:`ConfigError` naming the offending field path.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from None
    _reject_unknown(raw, _TOP_KEYS, "")
    if "family" not in raw:
        raise ConfigError("missing", "family")
    family = _validate_family(raw["family"])
    n = len(family["a"] if family["kind"] == "lawlor" else family["lambda"])
    samples = _validate_samples(raw.get("samples", {}), n)

    tols = dict(DEFAULT_TOLERANCES)
    _reject_unknown(raw.get("tolerances", {}), set(DEFAULT_TOLERANCES), "tolerances")
    for key, value in raw.get("tolerances", {}).items():
        tols[key] = _number(value, f"tolerances.{key}")
        if tols[key] <= 0:
            raise ConfigError("must be positive", f"tolerances.{key}")

    checks = raw.get("checks", list(DEFAULT_CHECKS))
    if not isinstance(checks, list):
        raise ConfigError("expected a list", "checks")
    for k, name in enumerate(checks):
        if name not in CHECKS:
            raise ConfigError(f"unknown check {name!r}", f"checks[{k}]")

    mc = dict(DEFAULT_MEANCURV)
    _reject_unknown(raw.get("meancurv", {}), set(DEFAULT_MEANCURV), "meancurv")
    mc.update(raw.get("meancurv", {}))
    if mc["metric"] not in METRIC_KINDS:
        raise ConfigError(f"unknown metric {mc['metric']!r}", "meancurv.metric")
    mc["levels"] = [int(v) for v in _real_list(mc["levels"], "meancurv.levels")]
    mc["s_range"] = _real_list(mc["s_range"], "meancurv.s_range", 2)
    mc["order_range"] = _real_list(mc["order_range"], "meancurv.order_range", 2)
    if not isinstance(mc["connection"], bool):
        raise ConfigError("must be a boolean", "meancurv.connection")
    return RunConfig(family, samples, tols, list(checks), mc)


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def build_family(family):
    if family["kind"] == "lawlor":
        return LawlorFamily(np.array(family["a"]), np.array(family["psi"]))
    return ExponentialFamily(np.array(family["lambda"]), family["C"])


def sample_plan(config, family):
    """Quadric points and parameter values for a configuration."""
    smp = config.samples
    if "points" in smp:
        points = sigma_points(family.lam, family.C, smp["points"])
    else:
        points = sigma_sample(family.lam, family.C, smp["sigma_count"], smp["seed"])
    lo, hi = smp["s_range"]
    return points, np.linspace(lo, hi, smp["s_count"])


def meancurv_entry(family, mc):
    rows = convergence_study(family, mc["metric"], mc["levels"], mc["s_range"], mc["connection"])
    lo, hi = mc["order_range"]
    orders = [order for _, _, order in rows[1:]]
    return {
        "check": "meancurv",
        "metric": mc["metric"],
        "connection": mc["connection"],
        "levels": [{"h": h, "residual": res, "observed_order": order} for h, res, order in rows],
        "pass": bool(all(lo <= o <= hi for o in orders)),
    }


def _run_one(name, family, points, s, config):
    tols = config.tolerances
    if name == "lagrangian_st":
        return lagrangian_residual(family, "standard", points, s, tols["lagrangian"]).to_dict()
    if name == "lagrangian_fs":
        return lagrangian_residual(family, "fubini-study", points, s, tols["lagrangian"]).to_dict()
    if name in ("frame_split_st", "frame_split_fs"):
        form = "standard" if name.endswith("st") else "fubini-study"
        tangent, flow = frame_pair_residual_split(family, form, points, s, tols["lagrangian"])
        return {"check": name, "tangent_pairs": tangent.to_dict(), "flow_pairs": flow.to_dict(), "pass": tangent.passed and flow.passed}
    if name == "condition_im":
        return condition_Im_residual(family, s, tols["condition"]).to_dict()
    if name == "condition_r2":
        return condition_r2_residual(family, s, tols["condition"]).to_dict()
    if name == "det_identity":
        return det_identity_report(family, points, s, tols["identity"]).to_dict()
    if name == "angle":
        return angle_constancy(family, points, s, tols["angle"]).to_dict()
    if name == "meancurv":
        return meancurv_entry(family, config.meancurv)
    raise ConfigError(f"unknown check {name!r}", "checks")


def run_checks(config):
    """Execute the requested checks; failures of one check do not stop others.

    The report is deterministic for a given configuration apart from
    ``wall_time``.
    """
    start = time.perf_counter()
    family = build_family(config.family)
    results = []
    try:
        points, s = sample_plan(config, family)
    except SpecLagError as exc:
        points = s = None
        plan_error = str(exc)
    for name in config.checks:
        if points is None and name != "meancurv":
            results.append({"check": name, "error": plan_error, "pass": False})
            continue
        try:
            results.append(_run_one(name, family, points, s, config))
        except (SpecLagError, ValueError) as exc:
            results.append({"check": name, "error": f"{type(exc).__name__}: {exc}", "pass": False})
    return {
        "config": copy.deepcopy(config.to_dict()),
        "checks": results,
        "overall_pass": bool(all(r["pass"] for r in results)),
        "version": __version__,
        "wall_time": time.perf_counter() - start,
    }


def dump_report(report):
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def export_pointcloud(family, plan, path):
    """Write ``iota(x, s)`` for every (point, parameter) pair as CSV.

    Columns: ``x1..xn, s, re_z1, im_z1, ..., re_zn, im_zn``; rows ordered
    by point, then parameter.
    """
    points, s = plan
    X = np.array([p.x for p in points])
    s = np.asarray(s, dtype=float)
    omega = family.profiles(s).omega
    n = family.n
    header = [f"x{j + 1}" for j in range(n)] + ["s"]
    for j in range(n):
        header += [f"re_z{j + 1}", f"im_z{j + 1}"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for x in X:
            Z = x * omega
            for k, s_k in enumerate(s):
                row = list(x) + [s_k]
                for z in Z[k]:
                    row += [z.real, z.imag]
                writer.writerow([repr(float(v)) for v in row])
    return path
