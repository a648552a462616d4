"""Command-line driver: surface configs in, JSON reports or CSV tables out."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .ncalg import (
    NCPoly,
    SurfaceProfile,
    casimir_residual,
    paraboloid_profile,
    poisson_residuals,
    random_profile,
    relation_suite,
    sphere_profile,
)
from .reports import CheckReport, exact_report, numeric_report
from .scalars import DEFAULT_PARAMS, ScalarExpr

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# --------------------------------------------------------------------------
# config files

CONFIG_KEYS = ("name", "type", "builtin", "coeffs", "alpha_sq", "R_sq", "epsilon", "kappa", "lambda", "C", "kernel")
PARAM_KEYS = ("alpha_sq", "R_sq", "epsilon", "kappa", "lambda", "C")
REQUIRED = {
    "sphere-family": ("alpha_sq", "R_sq", "epsilon"),
    "paraboloid": ("epsilon",),
    "q-sphere": ("kappa", "R_sq", "epsilon"),
}


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class SurfaceConfig:
    name: str
    type: str
    builtin: str | None = None
    coeffs: tuple[Fraction, ...] = ()
    params: dict[str, Fraction] = field(default_factory=dict)
    kernel: str | None = None

    def values(self) -> dict:
        """Parameter values under the library's names (epsilon -> eps)."""
        out = {("eps" if k == "epsilon" else k): v for k, v in self.params.items() if k != "lambda"}
        if self.kernel is not None:
            out["kernel"] = self.kernel
        return out

    def profile(self) -> SurfaceProfile:
        from .maps import profile_builtin

        if self.type == "builtin":
            return profile_builtin(self.builtin, self.values())
        params = DEFAULT_PARAMS
        coeffs = tuple(ScalarExpr.const(c, params) for c in self.coeffs)
        s = SurfaceProfile(kind="polynomial", epsilon=ScalarExpr.param("eps", params), poly_coeffs=coeffs,
                           name=self.name)
        s.params = self.values()
        return s


def _number(text: str, line: int) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"malformed number {text.strip()!r}", line) from None


def parse_config(text: str) -> SurfaceConfig:
    """Parse the line-oriented ``key=value`` format; ``#`` starts a comment."""
    seen: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected key=value, got {line!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in seen:
            raise ConfigError(f"duplicate key {key!r} (first set on line {seen[key][1]})", lineno)
        seen[key] = (value, lineno)

    def at(key):
        return seen[key][1] if key in seen else None

    params = {k: _number(seen[k][0], seen[k][1]) for k in PARAM_KEYS if k in seen}
    coeffs: tuple[Fraction, ...] = ()
    if "coeffs" in seen:
        text_c, ln = seen["coeffs"]
        parts = [p for p in text_c.split(",")]
        if not text_c.strip() or any(not p.strip() for p in parts):
            raise ConfigError("coeffs must be a comma-separated list of numbers", ln)
        coeffs = tuple(_number(p, ln) for p in parts)
    has_builtin, has_coeffs = "builtin" in seen, "coeffs" in seen
    if has_builtin == has_coeffs:
        raise ConfigError("exactly one of 'builtin' and 'coeffs' must be given", at("builtin") or at("coeffs"))
    kind = seen["type"][0] if "type" in seen else ("builtin" if has_builtin else "polynomial")
    if kind not in ("builtin", "polynomial"):
        raise ConfigError(f"type must be 'builtin' or 'polynomial', got {kind!r}", at("type"))
    if (kind == "builtin") != has_builtin:
        raise ConfigError(f"type={kind} does not match the profile given", at("type"))
    builtin = seen["builtin"][0] if has_builtin else None
    if builtin is not None:
        if builtin not in REQUIRED:
            raise ConfigError(f"unknown builtin {builtin!r}; choose from {', '.join(REQUIRED)}", at("builtin"))
        for key in REQUIRED[builtin]:
            if key not in params:
                raise ConfigError(f"builtin {builtin} requires key {key!r}")
    kernel = seen["kernel"][0] if "kernel" in seen else None
    if kernel is not None:
        if builtin != "q-sphere":
            raise ConfigError("'kernel' applies only to builtin=q-sphere", at("kernel"))
        if kernel not in ("corrected", "literal"):
            raise ConfigError(f"kernel must be 'corrected' or 'literal', got {kernel!r}", at("kernel"))
    if "C" in params and builtin != "q-sphere":
        raise ConfigError("'C' applies only to builtin=q-sphere", at("C"))
    name = seen["name"][0] if "name" in seen else (builtin or "polynomial")
    return SurfaceConfig(name=name, type=kind, builtin=builtin, coeffs=coeffs, params=params, kernel=kernel)


def load_config(path: str) -> SurfaceConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text)


# --------------------------------------------------------------------------
# output


def fmt_number(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def to_json(obj, indent: int = 0) -> str:
    """JSON with every float printed at 17 significant digits."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, int, float, np.floating, np.integer)):
        return fmt_number(obj.item() if isinstance(obj, np.generic) else obj)
    if isinstance(obj, complex):
        return to_json({"re": obj.real, "im": obj.imag}, indent)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{to_json(str(k))}: {to_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [f"{inner}{to_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    return to_json(str(obj))


def to_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_number(v) if isinstance(v, (int, float, np.floating, np.integer)) else v for v in row])
    return buf.getvalue()


@dataclass
class Outcome:
    command: str
    reports: list[CheckReport]
    table: tuple[list[str], list[list]] | None = None
    default_format: str = "json"

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def render(self, fmt: str | None) -> str:
        fmt = fmt or self.default_format
        if fmt == "csv":
            if self.table is not None:
                return to_csv(*self.table)
            rows = [[r.check, ";".join(f"{k}={v}" for k, v in r.params.items()), r.status, r.max_deviation]
                    for r in self.reports]
            return to_csv(["check", "params", "status", "max_deviation"], rows)
        doc = {
            "command": self.command,
            "status": "pass" if self.passed else "fail",
            "reports": [r.as_dict() for r in self.reports],
        }
        return to_json(doc) + "\n"


# --------------------------------------------------------------------------
# argument helpers


class UsageError(ValueError):
    pass


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def parse_complex(text: str) -> complex:
    s = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number (a+bi): {text!r}") from None


def _seed() -> int:
    raw = os.environ.get("NCSURF_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"NCSURF_SEED must be an integer, got {raw!r}") from None


def _pmap(fn, tasks: list, jobs: int) -> list:
    """Run independent checks, in worker processes when jobs > 1; results keep task order."""
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, *zip(*tasks)))


def _flatten(items) -> list[CheckReport]:
    out = []
    for x in items:
        out.extend(x if isinstance(x, list) else [x])
    return out


def _config(args, required: bool = False) -> SurfaceConfig | None:
    if args.config is None:
        if required:
            raise UsageError(f"{args.group} {args.action} needs --config")
        return None
    return load_config(args.config)


def _spins(args, default=(2, Fraction(5, 2), 3)) -> list[Fraction]:
    return [args.k] if args.k is not None else [Fraction(k) for k in default]


def _alphas(cfg: SurfaceConfig | None) -> list:
    if cfg is None or "alpha_sq" not in cfg.params:
        return [1, 1j]
    a2 = cfg.params["alpha_sq"]
    if a2 == 1:
        return [1]
    if a2 == -1:
        return [1j]
    raise UsageError("the exact product law is checked for alpha_sq = 1 or -1")


# --------------------------------------------------------------------------
# verify


def _relation_task(name: str, s: SurfaceProfile, words: int, max_len: int, seed: int) -> CheckReport:
    result = relation_suite(s, words, max_len, random.Random(seed))
    fails = result["failures"]
    return CheckReport(
        "relations",
        {"profile": name, "words": words, "max_length": max_len, "seed": seed},
        "fail" if fails else "pass",
        float(len(fails)),
        details="; ".join(fails[:5]),
    )


def cmd_verify_algebra(args) -> Outcome:
    cfg = _config(args)
    seed = _seed()
    words = args.N or 500
    max_len = args.nmax or 8
    if cfg is not None:
        s = cfg.profile()
        if s.kind != "polynomial":
            raise UsageError(f"{cfg.name} has no exact polynomial profile")
        profiles = [(cfg.name, s)]
    else:
        rng = random.Random(seed)
        profiles = [("sphere-family", sphere_profile()), ("paraboloid", paraboloid_profile())]
        profiles += [(f"random-{i}", random_profile(rng)) for i in range(3)]
    tasks = [(name, s, words, max_len, seed + i) for i, (name, s) in enumerate(profiles)]
    reports = _pmap(_relation_task, tasks, args.jobs)
    if cfg is None or cfg.builtin == "sphere-family":
        reports.append(exact_report("casimir", {"profile": "sphere-family"}, casimir_residual(), NCPoly.zero()))
    for name, s in profiles:
        if name.startswith("random"):
            continue
        for label, residual in poisson_residuals(s).items():
            reports.append(exact_report("poisson", {"profile": name, "identity": label}, residual, NCPoly.zero(residual.params)))
    return Outcome("verify algebra", reports)


def _harmonic_task(n: int, m: int) -> list[CheckReport]:
    from . import harmonic

    out = harmonic.eigen_check(n, m) + [harmonic.norm_check(n, m)]
    if n >= 1:
        out += harmonic.anticomm_check(n, m)
    return out


def _gram_task(nmax: int) -> CheckReport:
    from .harmonic import gram_check

    return gram_check(nmax)


def cmd_verify_harmonic(args) -> Outcome:
    nmax = 4 if args.nmax is None else args.nmax
    tasks = [(n, m) for n in range(nmax + 1) for m in range(-n, n + 1)]
    reports = _flatten(_pmap(_harmonic_task, tasks, args.jobs))
    reports.append(_gram_task(nmax))
    return Outcome("verify harmonic", reports)


def _product_task(n1, m1, n2, m2, k, alpha, eps) -> CheckReport:
    from .harmonic import product_check

    return product_check(n1, m1, n2, m2, k, alpha, eps)


def cmd_verify_product(args) -> Outcome:
    cfg = _config(args)
    nmax = 3 if args.nmax is None else args.nmax
    eps = cfg.params.get("epsilon", Fraction(1)) if cfg else Fraction(1)
    tasks = []
    for k in _spins(args):
        for alpha in _alphas(cfg):
            for n1 in range(nmax + 1):
                for n2 in range(nmax + 1):
                    for m1 in range(-n1, n1 + 1):
                        for m2 in range(-n2, n2 + 1):
                            tasks.append((n1, m1, n2, m2, k, alpha, eps))
    return Outcome("verify product", _pmap(_product_task, tasks, args.jobs))


def _wigner_task(k, n, m, values, tol) -> CheckReport:
    from .rep import wigner_operator_check

    return wigner_operator_check(k, n, m, values, tol)


def cmd_verify_wigner(args) -> Outcome:
    cfg = _config(args)
    nmax = 3 if args.nmax is None else args.nmax
    tol = 1e-12 if args.tol is None else args.tol
    eps = float(cfg.params.get("epsilon", 1)) if cfg else 1.0
    tasks = []
    for k in _spins(args):
        for alpha in _alphas(cfg):
            values = {"alpha_sq": (alpha * alpha).real, "eps": eps}
            for n in range(min(nmax, int(2 * k)) + 1):
                for m in range(-n, n + 1):
                    tasks.append((k, n, m, values, tol))
    return Outcome("verify wigner-op", _pmap(_wigner_task, tasks, args.jobs))


# --------------------------------------------------------------------------
# representations and spectra


def cmd_rep_build(args) -> Outcome:
    from .rep import quantization_dimension, relation_residual, rep_surface, unitarity_defect

    cfg = _config(args, required=True)
    s = cfg.profile()
    values = cfg.values()
    lam = None
    if args.lam is not None:
        if args.lam.imag != 0:
            raise UsageError("the lattice offset lambda must be real")
        lam = args.lam.real
    elif "lambda" in cfg.params:
        lam = float(cfg.params["lambda"])
    tol = 1e-10 if args.tol is None else args.tol
    rep = rep_surface(s, values, lam=lam, truncation=args.N or 200)
    params = {"profile": cfg.name, "dim": rep.dim, "lambda": rep.lambda_offset,
              "boundary": f"{rep.boundary['low']}/{rep.boundary['high']}"}
    reports = [numeric_report("rep-relations", params, relation_residual(rep, s, values), tol),
               numeric_report("rep-unitarity", params, unitarity_defect(rep), tol)]
    if rep.boundary == {"low": "root", "high": "root"}:
        dim, exact = quantization_dimension(s, values)
        reports.append(CheckReport("quantization", {**params, "exact": exact}, "pass" if dim == rep.dim else "fail",
                                   float(abs(dim - rep.dim))))
    rows = [[int(m), float(u), float(rep.hop(int(m)).real), float(rep.hop(int(m)).imag)]
            for m, u in zip(rep.m_values, rep.diag)]
    return Outcome("rep build", reports, (["m", "x0", "hop_re", "hop_im"], rows))


def cmd_spectrum_crystal(args) -> Outcome:
    from .rep import rep_spin, rep_surface
    from .spectra import crystal_matrix, eigenvalues

    cfg = _config(args)
    tol = 1e-10 if args.tol is None else args.tol
    alpha_sq = float(cfg.params.get("alpha_sq", 1)) if cfg else 1.0
    eps = float(cfg.params.get("epsilon", 1)) if cfg else 1.0
    predicted = None
    if args.k is not None or cfg is None or cfg.builtin == "sphere-family":
        k = args.k
        if k is None:
            if cfg is None:
                raise UsageError("spectrum crystal needs --k or --config")
            r_sq = cfg.params["R_sq"] / cfg.params["epsilon"] ** 2
            twice = math.isqrt(int(4 * r_sq + 1)) - 1 if (4 * r_sq + 1).denominator == 1 else -1
            if twice < 0 or Fraction(twice * (twice + 2), 4) != r_sq:
                raise UsageError("R_sq is not eps^2 k(k+1) for a half-integer k; pass --k")
            k = Fraction(twice, 2)
        if alpha_sq < 0:
            raise UsageError("the crystal Hamiltonian needs a unitary representation (alpha_sq > 0)")
        rep = rep_spin(k, {"alpha_sq": alpha_sq, "eps": eps})
        js = [float(Fraction(t, 2)) for t in range(-int(2 * k), int(2 * k) + 1, 2)]
        predicted = np.sqrt(1 + 4 * alpha_sq) * eps * np.array(js)
        params = {"k": str(k), "alpha_sq": alpha_sq, "eps": eps}
    else:
        s = cfg.profile()
        rep = rep_surface(s, cfg.values(), truncation=args.N or 200)
        params = {"profile": cfg.name, "dim": rep.dim}
    t = crystal_matrix(rep)
    vals = eigenvalues(t)
    reports = []
    if predicted is not None:
        reports.append(numeric_report("crystal-closed-form", params, float(np.max(np.abs(vals - predicted))), tol))
    if len(vals) <= 400:
        dense = np.linalg.eigvalsh(t.dense())
        reports.append(numeric_report("crystal-dense-oracle", params, float(np.max(np.abs(vals - dense))), tol))
    rows = [[i, float(v)] + ([float(predicted[i])] if predicted is not None else []) for i, v in enumerate(vals)]
    header = ["index", "eigenvalue"] + (["predicted"] if predicted is not None else [])
    return Outcome("spectrum crystal", reports, (header, rows), default_format="csv")


def cmd_hyperboloid_modes(args) -> Outcome:
    from .spectra import BOUNDED, cn_sequence, exponent_estimate, tail_partial_sums

    cfg = _config(args)
    eps, rhat = 1.0, 1.0
    if cfg is not None:
        eps = float(cfg.params.get("epsilon", 1))
        if "R_sq" in cfg.params:
            rhat_sq = -float(cfg.params["R_sq"]) - eps * eps / 4
            if rhat_sq < 0:
                raise UsageError("hyperboloid modes need -R^2 - eps^2/4 >= 0")
            rhat = math.sqrt(rhat_sq)
    if args.lam is not None:
        lam = args.lam
    elif cfg is not None and "lambda" in cfg.params:
        lam = complex(float(cfg.params["lambda"]))
    else:
        lam = 0j
    m = args.m or 0
    N = args.N or 100000
    tol = 0.01 if args.tol is None else args.tol
    seq = cn_sequence(m, lam, eps, rhat, N)
    fit = exponent_estimate(seq)
    tail = tail_partial_sums(seq)
    params = {"m": m, "lambda": f"{lam.real}{lam.imag:+}i", "eps": eps, "Rhat": rhat, "N": N}
    extra = {"a": fit.a, "stderr": fit.stderr, "window": list(fit.window), "drift": fit.drift,
             "tail": tail.classification, "decade_ratio": tail.decade_ratio}
    mu = seq.mu
    if lam.imag == 0:
        dev = max(abs(fit.a.real + 0.5), abs(fit.a.imag - mu.real))
        expo = CheckReport("mode-exponent", params, "pass" if dev <= tol else "fail", dev,
                           details=f"expected a = -0.5{mu.real:+}i", extra=extra)
    else:
        ok = tail.classification == BOUNDED
        expo = CheckReport("mode-tail", params, "pass" if ok else "fail", tail.decade_ratio,
                           details=f"expected bounded, got {tail.classification}", extra=extra)
    reports = [expo, numeric_report("recursion-defect", params, seq.recursion_defect(), 1e-12)]
    step = max(1, len(seq.n) // 1000)
    logc = seq.log_c()
    rows = [[int(n), float(z.real), float(z.imag)] for n, z in zip(seq.n[::step], logc[::step])]
    return Outcome("hyperboloid modes", reports, (["n", "log_abs_c", "phase"], rows))


# --------------------------------------------------------------------------
# maps


def cmd_project_stereo(args) -> Outcome:
    from .maps import MobiusParams, classical_stereographic, cross_relation_defect, mobius_step, stereo_functions, stereo_rep

    cfg = _config(args)
    if cfg is not None and cfg.builtin != "sphere-family":
        raise UsageError("stereographic projection needs builtin=sphere-family")
    alpha_sq = float(cfg.params["alpha_sq"]) if cfg else 1.0
    r_sq = float(cfg.params["R_sq"]) if cfg else 1.0
    eps = float(cfg.params["epsilon"]) if cfg else 0.1
    tol = 1e-8 if args.tol is None else args.tol
    res = stereo_rep(alpha_sq, r_sq, eps, args.N or 400)
    params = {"alpha_sq": alpha_sq, "R_sq": r_sq, "eps": eps, "N": len(res.x)}
    p = MobiusParams.from_surface(alpha_sq, r_sq, eps)
    xs = res.x[np.isfinite(res.x)][:50]
    cross = max(cross_relation_defect(x, mobius_step(x, p), p) for x in xs)
    # eps = 0: g(|z|^2) and f(|z|^2) z reproduce (Z, alpha^2 (X + iY)) pointwise
    p0 = MobiusParams.from_surface(alpha_sq, r_sq, 0.0)
    R = math.sqrt(r_sq)
    z = np.linspace(0.05, 0.9, 40) * 2 * R * np.exp(0.3j)
    g, f = stereo_functions(np.abs(z) ** 2, p0)
    big_z, w = classical_stereographic(z, alpha_sq, R)
    classical = float(max(np.max(np.abs(g - big_z)), np.max(np.abs(f * z - alpha_sq * w))))
    reports = [
        numeric_report("stereo-relations", params, res.relation_residual, tol),
        numeric_report("stereo-casimir", params, res.casimir_residual, tol),
        numeric_report("stereo-spacing", params, res.spacing_defect, 1e-10),
        numeric_report("mobius-cross-relation", params, cross, 1e-12),
        numeric_report("classical-limit", {"alpha_sq": alpha_sq, "R_sq": r_sq}, classical, 1e-12),
    ]
    rows = [[i, float(x), float(j.real)] for i, (x, j) in enumerate(zip(res.x, np.diag(res.j_zero)))]
    return Outcome("project stereo", reports, (["site", "x", "j0"], rows))


def cmd_map_hom(args) -> Outcome:
    from .maps import hom_apply, holstein_primakoff, profile_builtin, rescaling_hom, topology_ratios
    from .rep import rep_surface

    cfg = _config(args)
    k = args.k if args.k is not None else Fraction(2)
    if k.denominator != 1 or k < 0:
        raise UsageError("the boson embedding needs an integer spin --k")
    eps = float(cfg.params.get("epsilon", 1)) if cfg else 1.0
    tol = 1e-10 if args.tol is None else args.tol
    spec = holstein_primakoff(int(k), eps)
    target = rep_surface(spec.target_profile, {"eps": eps}, truncation=args.N or 100)
    image = hom_apply(spec, target)
    u = np.linspace(0, (2 * int(k) + 1) * eps, 101)
    params = {"k": int(k), "eps": eps, "N": target.dim}
    reports = [
        numeric_report("hom-relations", params, image.residual, tol),
        numeric_report("hom-factorization", params, spec.factorization_defect(u), tol),
        numeric_report("hom-conjugation", params, spec.conjugation_defect(u), tol),
    ]
    sphere = profile_builtin("sphere-family", {"alpha_sq": 1, "R_sq": eps * eps * int(k) * (int(k) + 1), "eps": eps})
    r1, r2 = topology_ratios(rescaling_hom(sphere, sphere.params, 2.0))
    reports.append(numeric_report("topology-ratio", {"k": int(k), "eps": eps, "scale": 2.0}, abs(r1 - r2), 1e-9))
    return Outcome("map hom", reports)


def cmd_profile_show(args) -> Outcome:
    from .ncalg import bind_profile

    cfg = _config(args, required=True)
    s = cfg.profile()
    bound = bind_profile(s, cfg.values())
    lo, hi = bound.interval()
    a = lo if math.isfinite(lo) else (hi - 10 if math.isfinite(hi) else -5.0)
    b = hi if math.isfinite(hi) else (lo + 10 if math.isfinite(lo) else 5.0)
    n = args.N or 41
    u = np.linspace(a, b, n)
    rho = np.asarray(bound.rho(u), dtype=float)
    interior = rho[1:-1] if math.isfinite(lo) and math.isfinite(hi) else rho
    params = {"profile": cfg.name, "interval_low": lo if math.isfinite(lo) else "-inf",
              "interval_high": hi if math.isfinite(hi) else "inf", "eps": bound.epsilon}
    neg = float(max(0.0, -np.min(interior))) if len(interior) else 0.0
    report = numeric_report("profile-positive", params, neg, 0.0)
    rows = [[float(x), float(r)] for x, r in zip(u, rho)]
    return Outcome("profile show", [report], (["u", "rho"], rows), default_format="csv")


# --------------------------------------------------------------------------
# entry point

COMMANDS = {
    ("verify", "algebra"): cmd_verify_algebra,
    ("verify", "harmonic"): cmd_verify_harmonic,
    ("verify", "product"): cmd_verify_product,
    ("verify", "wigner-op"): cmd_verify_wigner,
    ("rep", "build"): cmd_rep_build,
    ("spectrum", "crystal"): cmd_spectrum_crystal,
    ("hyperboloid", "modes"): cmd_hyperboloid_modes,
    ("project", "stereo"): cmd_project_stereo,
    ("map", "hom"): cmd_map_hom,
    ("profile", "show"): cmd_profile_show,
}


def _add_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", metavar="PATH")
    p.add_argument("--nmax", type=int)
    p.add_argument("--k", type=parse_rational, metavar="RATIONAL")
    p.add_argument("--m", type=int)
    p.add_argument("--lambda", dest="lam", type=parse_complex, metavar="COMPLEX")
    p.add_argument("--N", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--jobs", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ncsurf", description="Checks and tables for noncommutative surfaces.")
    groups = parser.add_subparsers(dest="group", required=True, metavar="GROUP")
    by_group: dict[str, list[str]] = {}
    for group, action in COMMANDS:
        by_group.setdefault(group, []).append(action)
    for group, actions in by_group.items():
        g = groups.add_parser(group)
        sub = g.add_subparsers(dest="action", required=True, metavar="ACTION")
        for action in actions:
            _add_flags(sub.add_parser(action))
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    for flag in ("nmax", "N", "jobs"):
        v = getattr(args, flag)
        if v is not None and v < (1 if flag == "jobs" else 0):
            print(f"ncsurf: error: --{flag} must be nonnegative", file=sys.stderr)
            return EXIT_USAGE
    try:
        outcome = COMMANDS[(args.group, args.action)](args)
    except (ConfigError, UsageError) as exc:
        print(f"ncsurf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = outcome.render(args.format)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_PASS if outcome.passed else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
