"""Command line front end and the end-to-end pipeline.

Exit codes: 0 certificate (or all checks passed), 1 no certificate,
2 usage error, 3 domain or configuration error, 4 computation failure.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

from . import __version__
from .conformal import (
    AnnulusConfig,
    ConvergenceError,
    beta_from_point,
    greens_period,
    nonexistence_margin,
    slit_length,
    slit_radius,
)
from .critical import (
    HYPOTHESES,
    CriticalSolution,
    LiftError,
    Verdict,
    lift,
    solve_leading,
    verdict,
    verify_critical,
)
from .dims import CoverData
from .novikov import NovikovError, as_fraction, format_fraction
from .potential import (
    BulkParams,
    DomainError,
    HypothesisError,
    ModelParams,
    assemble,
    safe_cutoff,
    sample_admissible_tail,
)
from .svg import render_svg
from .tropical import TropicalConfig, curve_class_and_area, enumerate_type1, enumerate_type2

EXIT_OK, EXIT_NO_CERT, EXIT_USAGE, EXIT_DOMAIN, EXIT_FAILURE = 0, 1, 2, 3, 4


class ConfigError(DomainError):
    """A configuration field is missing or malformed; carries its path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _rational(doc, key, path: str, default=None) -> Fraction:
    """Read ``doc[key]`` as a rational; ``key`` may be a list index."""
    label = f"{path}[{key}]" if isinstance(key, int) else f"{path}.{key}"
    try:
        raw = doc[key]
    except (KeyError, IndexError):
        if default is None:
            raise ConfigError(label, "missing") from None
        return as_fraction(default)
    try:
        return as_fraction(raw)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(label, f"not a rational: {raw!r} ({exc})") from None


@dataclass(frozen=True)
class RunConfig:
    params: ModelParams
    cutoff: Fraction | str = "auto"
    tail_seed: int | None = None
    tropical: TropicalConfig | None = None
    certification_level: Fraction | str = "auto"

    def resolved_cutoff(self) -> Fraction:
        return safe_cutoff(self.params) if self.cutoff == "auto" else as_fraction(self.cutoff)

    def resolved_level(self) -> Fraction:
        if self.certification_level == "auto":
            return self.resolved_cutoff()
        return as_fraction(self.certification_level)

    @classmethod
    def default(cls) -> "RunConfig":
        return cls(ModelParams(5, 1, 2), tropical=TropicalConfig((-2, -1), (3, Fraction(5, 2)), 3))

    @classmethod
    def from_json(cls, doc: dict) -> "RunConfig":
        if not isinstance(doc, dict):
            raise ConfigError("$", "config must be an object")
        pdoc = doc.get("params")
        if not isinstance(pdoc, dict):
            raise ConfigError("params", "missing or not an object")
        sign = pdoc.get("sign_annulus", 1)
        if sign in ("+", "-"):
            sign = 1 if sign == "+" else -1
        if sign not in (1, -1):
            raise ConfigError("params.sign_annulus", f"must be +1 or -1, got {sign!r}")
        params = ModelParams(_rational(pdoc, "B", "params"), _rational(pdoc, "C", "params"),
                             _rational(pdoc, "a", "params"), sign)
        cutoff = doc.get("cutoff", "auto")
        if cutoff != "auto":
            cutoff = _rational(doc, "cutoff", "$")
        level = doc.get("certification_level", "auto")
        if level != "auto":
            level = _rational(doc, "certification_level", "$")
        seed = doc.get("tail_seed")
        if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
            raise ConfigError("tail_seed", f"must be an integer or null, got {seed!r}")
        trop = None
        if doc.get("tropical") is not None:
            tdoc = doc["tropical"]
            try:
                trop = TropicalConfig(
                    (_rational(tdoc["p_prime"], 0, "tropical.p_prime"), _rational(tdoc["p_prime"], 1, "tropical.p_prime")),
                    (_rational(tdoc["p_dprime"], 0, "tropical.p_dprime"), _rational(tdoc["p_dprime"], 1, "tropical.p_dprime")),
                    tdoc.get("weight_bound", 10))
            except (KeyError, TypeError, IndexError) as exc:
                raise ConfigError("tropical", f"malformed ({exc})") from None
        return cls(params, cutoff, seed, trop, level)

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "cutoff": self.cutoff if self.cutoff == "auto" else format_fraction(self.cutoff),
            "tail_seed": self.tail_seed,
            "tropical": None if self.tropical is None else self.tropical.to_json(),
            "certification_level": (self.certification_level if self.certification_level == "auto"
                                    else format_fraction(self.certification_level)),
        }


@dataclass
class Report:
    config: dict
    tropical: list | None = None
    potential: list = field(default_factory=list)
    solutions: list = field(default_factory=list)
    verdict: dict = field(default_factory=dict)
    timing: dict | None = None

    def to_json(self) -> dict:
        doc = {
            "config": self.config,
            "tropical": self.tropical,
            "potential": self.potential,
            "solutions": self.solutions,
            "verdict": self.verdict,
        }
        if self.timing is not None:
            doc["timing"] = self.timing
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, doc: dict) -> "Report":
        # solutions are parsed back to their typed form so a malformed record fails here
        sols = []
        for rec in doc.get("solutions", []):
            sol = CriticalSolution.from_json(rec["solution"])
            sols.append({**rec, "solution": sol.to_json()})
        return cls(doc["config"], doc.get("tropical"), doc.get("potential", []), sols,
                   doc.get("verdict", {}), doc.get("timing"))

    @classmethod
    def loads(cls, text: str) -> "Report":
        return cls.from_json(json.loads(text))

    @property
    def certificate(self) -> bool:
        return bool(self.verdict.get("certificate"))


def _complex_json(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


def tropical_table(cfg: TropicalConfig, params: ModelParams | None) -> list[dict]:
    rows = []
    for kind, curves in (("type1", enumerate_type1(cfg)), ("type2", enumerate_type2(cfg))):
        for c in curves:
            row = {"kind": kind, "label": c.label, "maslov_index": c.maslov_index, "curve": c.to_json()}
            if params is not None:
                cls, area = curve_class_and_area(c, params)
                row.update({"class": cls.label(), "area": format_fraction(area),
                            "boundary_monomial": list(cls.boundary_monomial)})
            rows.append(row)
    return rows


def potential_table(W) -> list[dict]:
    return [{"monomial": list(m), "coefficient": c.to_json()} for m, c in W]


def run_pipeline(config: RunConfig, timing: bool = False) -> Report:
    """tropical table -> assembly -> leading roots -> lifts -> verification -> verdict.

    Hypothesis failures become a no-certificate report; they never raise.
    """
    clock = {}
    t0 = time.perf_counter()
    report = Report(config.to_json())
    params = config.params
    try:
        params.validate()
    except HypothesisError as exc:
        report.verdict = Verdict(False, 0, Fraction(0), HYPOTHESES, [str(exc)]).to_json()
        report.verdict["failed_hypothesis"] = exc.inequality
        return report
    if config.tropical is not None:
        report.tropical = tropical_table(config.tropical, params)
    clock["tropical"] = time.perf_counter() - t0

    cutoff = config.resolved_cutoff()
    level = config.resolved_level()
    report.config["resolved_cutoff"] = format_fraction(cutoff)
    report.config["resolved_level"] = format_fraction(level)
    work = max(cutoff + params.B, safe_cutoff(params))
    tail = None
    if config.tail_seed is not None:
        tail = sample_admissible_tail(params, work, config.tail_seed)
    W0 = assemble(params, BulkParams.default(params, work), tail, work)
    report.potential = potential_table(W0)
    clock["assemble"] = time.perf_counter() - t0

    solutions = []
    for root in solve_leading(params):
        sol = lift(root, params, tail, cutoff)
        bulk = BulkParams.default(params, work, b1=sol.b1.with_cutoff(work))
        W = assemble(params, bulk, tail, work)
        checked = verify_critical(W, sol, params)
        solutions.append((root, sol, checked))
    clock["lift"] = time.perf_counter() - t0

    v = verdict([s for _, s, _ in solutions], params, level)
    vdoc = v.to_json()
    verified = [s for _, s, chk in solutions if chk >= level]
    if v.certificate and not verified:
        vdoc["certificate"] = False
        vdoc["verdict"] = "no certificate"
        vdoc["diagnostics"].append("no solution passed the four-partial verification")
    vdoc["verified_count"] = len(verified)
    report.verdict = vdoc
    report.solutions = [
        {"leading": {"x1": _complex_json(r[0]), "x2": _complex_json(r[1])},
         "solution": s.to_json(), "verified_valuation": format_fraction(chk)}
        for r, s, chk in solutions
    ]
    if timing:
        report.timing = {k: round(v, 6) for k, v in clock.items()}
    return report


# -- argument handling -------------------------------------------------------

def _load_config(args) -> RunConfig:
    if args.config:
        try:
            doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError("--config", str(exc)) from None
        except json.JSONDecodeError as exc:
            raise ConfigError("--config", f"invalid JSON: {exc}") from None
        cfg = RunConfig.from_json(doc)
    else:
        cfg = RunConfig.default()
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, tail_seed=args.seed)
    if getattr(args, "cutoff", None) is not None:
        cutoff = args.cutoff
        if cutoff != "auto":
            try:
                cutoff = as_fraction(cutoff)
            except (ValueError, ZeroDivisionError):
                raise ConfigError("--cutoff", f"not a rational: {args.cutoff!r}") from None
        cfg = replace(cfg, cutoff=cutoff)
    if getattr(args, "sign", None) is not None:
        p = cfg.params
        cfg = replace(cfg, params=ModelParams(p.B, p.C, p.a, 1 if args.sign == "+" else -1))
    return cfg


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def cmd_solve(args) -> int:
    cfg = _load_config(args)
    report = run_pipeline(cfg, timing=args.timing)
    _emit(report.dumps(), args.out)
    if "failed_hypothesis" in report.verdict:
        sys.stderr.write(f"domain error: {report.verdict['diagnostics'][0]}\n")
        return EXIT_DOMAIN
    return EXIT_OK if report.certificate else EXIT_NO_CERT


def cmd_tropical(args) -> int:
    cfg = _load_config(args)
    trop = cfg.tropical or RunConfig.default().tropical
    params = cfg.params
    try:
        params.validate()
    except HypothesisError:
        params = None
    rows = tropical_table(trop, params)
    if args.svg:
        curves = enumerate_type1(trop) + enumerate_type2(trop)
        render_svg(curves, args.svg)
    _emit(_dump({"config": trop.to_json(), "curves": rows}), args.out)
    return EXIT_OK


def cmd_potential(args) -> int:
    cfg = _load_config(args)
    params = cfg.params.validate()
    cutoff = cfg.resolved_cutoff()
    if cutoff < safe_cutoff(params):
        raise DomainError(f"cutoff {cutoff} is below the safe cutoff {safe_cutoff(params)}")
    tail = sample_admissible_tail(params, cutoff, cfg.tail_seed) if cfg.tail_seed is not None else None
    W = assemble(params, BulkParams.default(params, cutoff), tail, cutoff)
    doc = {"params": params.to_json(), "cutoff": format_fraction(cutoff),
           "safe_cutoff": format_fraction(safe_cutoff(params)), "terms": potential_table(W)}
    _emit(_dump(doc), args.out)
    return EXIT_OK


def cmd_dims(args) -> int:
    flags = [True] * args.orbifold + [False] * (args.l - args.orbifold)
    if args.orbifold > args.l:
        raise DomainError("--orbifold cannot exceed --l")
    try:
        data = CoverData(args.k, args.l, tuple(flags), args.chi, args.mu, args.crit)
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    _emit(_dump(data.report()), args.out)
    return EXIT_OK


def cmd_conformal(args) -> int:
    cfg = AnnulusConfig(args.r1, complex(args.a_re, args.a_im), args.r0)
    beta = beta_from_point(cfg)
    c, radius = slit_radius(cfg)
    period = greens_period(cfg, args.tol)
    rows = {
        "beta": beta, "c": c, "radius": radius, "abs_a": abs(cfg.a_point),
        "radius_error": abs(radius - abs(cfg.a_point)),
        "period": period, "period_error": abs(period - beta),
    }
    ok = rows["radius_error"] < 1e-12 and rows["period_error"] < 1e-6
    if cfg.r0 is not None:
        rows["margin"] = nonexistence_margin(cfg.r1, cfg.r0, beta)
        rows["slit_length"] = slit_length(cfg, args.tol)
        ok = ok and rows["margin"] > 0
    rows["all_checks_pass"] = ok
    _emit(_dump({"config": cfg.to_json(), "checks": rows}), args.out)
    return EXIT_OK if ok else EXIT_NO_CERT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symlag", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--out", help="write the document here instead of stdout")
        p.add_argument("--cutoff", help="p/q or auto")
        p.add_argument("--sign", choices=("+", "-"), help="sign of the annulus term")
        if seed:
            p.add_argument("--seed", type=int, help="seed of the admissible tail")

    p = sub.add_parser("solve", help="run the full pipeline")
    common(p)
    p.add_argument("--timing", action="store_true", help="include wall-clock timings in the report")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("tropical", help="enumerate Maslov-2 tropical curves")
    common(p, seed=False)
    p.add_argument("--svg", help="also draw the curves to this SVG file")
    p.set_defaults(func=cmd_tropical)

    p = sub.add_parser("potential", help="print the assembled potential")
    common(p)
    p.set_defaults(func=cmd_potential)

    p = sub.add_parser("dims", help="dimension calculator")
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--orbifold", type=int, default=0, help="how many interior points are orbifold points")
    p.add_argument("--mu", type=int, default=2)
    p.add_argument("--chi", type=int, default=1, help="Euler characteristic of the base surface")
    p.add_argument("--crit", type=int, default=0, help="number of branch points")
    p.add_argument("--out")
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("conformal", help="annulus Green's function checks")
    p.add_argument("--r1", type=float, default=0.25)
    p.add_argument("--a-re", type=float, default=0.5)
    p.add_argument("--a-im", type=float, default=0.0)
    p.add_argument("--r0", type=float, default=None)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--out")
    p.set_defaults(func=cmd_conformal)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, NovikovError) as exc:
        sys.stderr.write(f"domain error: {exc}\n")
        return EXIT_DOMAIN
    except (LiftError, ConvergenceError, ArithmeticError) as exc:
        sys.stderr.write(f"computation failure: {exc}\n")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
