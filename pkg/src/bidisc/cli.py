"""
Command-line front end.

    bidisc analyze --input gens.json [--json]
    bidisc demo --demo monomial [--json]
    bidisc sweep [--seed 42] [--samples 100]

Exit status: 0 on a completed run, 2 malformed input, 3 empty span,
4 invalid configuration, 5 a sweep residual above its bound.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import mandrekar
from .errors import EmptyInterior, EmptySpan, MalformedInput, WindowOverflow
from .fixtures import DEMO_WINDOWS, demo_generators
from .hardy_core import DegreeWindow, polynomial
from .mandrekar import Tolerances, analysis_report, beurling_verdict, identity_suite, sample_pairs
from .subspace import GeneratorSet

EXIT_OK = 0
EXIT_MALFORMED = 2
EXIT_EMPTY_SPAN = 3
EXIT_CONFIG = 4
EXIT_SWEEP_FAILED = 5

SWEEP_FIXTURES = ("full_space", "monomial", "blaschke")
SWEEP_SYMBOLS = {
    "z1": [(1, 0, 1.0)],
    "z2": [(0, 1, 1.0)],
    "1+z1z2": [(0, 0, 1.0), (1, 1, 1.0)],
}
SWEEP_WINDOW = DegreeWindow(12, 12, 0)


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: config error: {message}\n")
        raise SystemExit(EXIT_CONFIG)


@dataclass
class RunConfig:
    command: str
    input_path: Optional[Path] = None
    demo_name: Optional[str] = None
    d1: Optional[int] = None
    d2: Optional[int] = None
    margin: Optional[int] = None
    tolerances: Tolerances = field(default_factory=Tolerances)
    seed: int = 42
    samples: int = 100
    json_output: bool = False

    def validate(self):
        if self.command in ("analyze", "demo"):
            if (self.input_path is None) == (self.demo_name is None):
                raise ConfigError("give exactly one of --input or --demo")
            if self.command == "demo" and self.demo_name is None:
                raise ConfigError("demo needs --demo <name>")
        if self.demo_name is not None and self.demo_name not in DEMO_WINDOWS:
            raise ConfigError(f"unknown demo {self.demo_name!r}; choose from {', '.join(DEMO_WINDOWS)}")
        if self.samples < 1:
            raise ConfigError(f"--samples must be >= 1, got {self.samples}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"--seed must be an unsigned 64-bit integer, got {self.seed}")
        for name in ("d1", "d2", "margin"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ConfigError(f"--{name} must be nonnegative, got {v}")
        for name, v in self.tolerances.to_json().items():
            if not v > 0:
                raise ConfigError(f"tolerance {name} must be positive, got {v}")
        # margin <= min(d1, d2) whenever the flags pin enough of the window
        if self.margin is not None:
            given = [v for v in (self.d1, self.d2) if v is not None]
            if given and self.margin > min(given):
                raise ConfigError(f"--margin {self.margin} exceeds min(d1, d2) = {min(given)}")

    def window_over(self, base: DegreeWindow) -> DegreeWindow:
        d1 = base.d1 if self.d1 is None else self.d1
        d2 = base.d2 if self.d2 is None else self.d2
        margin = base.margin if self.margin is None else self.margin
        if margin > min(d1, d2):
            raise ConfigError(f"margin {margin} exceeds min(d1, d2) = {min(d1, d2)}")
        return DegreeWindow(d1, d2, margin)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="bidisc", description="Shift-invariant subspaces of truncated H^2 on the bidisc.")
    ap.add_argument("command", choices=["analyze", "demo", "sweep"])
    ap.add_argument("--input", type=Path, default=None, help="GeneratorSet JSON file")
    ap.add_argument("--demo", default=None, help="built-in fixture: " + ", ".join(DEMO_WINDOWS))
    ap.add_argument("--d1", type=int, default=None)
    ap.add_argument("--d2", type=int, default=None)
    ap.add_argument("--margin", type=int, default=None)
    ap.add_argument("--rank-tol", type=float, default=mandrekar.RANK_TOL)
    ap.add_argument("--dc-tol", type=float, default=mandrekar.DC_TOL)
    ap.add_argument("--inner-tol", type=float, default=mandrekar.INNER_TOL)
    ap.add_argument("--dist-tol", type=float, default=mandrekar.DIST_TOL)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--samples", type=int, default=100)
    ap.add_argument("--json", action="store_true", help="emit the JSON report on stdout")
    return ap


def parse_config(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    return RunConfig(
        command=args.command,
        input_path=args.input,
        demo_name=args.demo,
        d1=args.d1,
        d2=args.d2,
        margin=args.margin,
        tolerances=Tolerances(args.rank_tol, args.dc_tol, args.inner_tol, args.dist_tol),
        seed=args.seed,
        samples=args.samples,
        json_output=args.json,
    )


def load_generators(config: RunConfig) -> GeneratorSet:
    if config.demo_name is not None:
        window = config.window_over(DEMO_WINDOWS[config.demo_name])
        try:
            return demo_generators(config.demo_name, window)
        except WindowOverflow as exc:
            raise ConfigError(str(exc)) from None
    try:
        text = Path(config.input_path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedInput(f"cannot read {config.input_path}: {exc.strerror}") from None
    gens = GeneratorSet.loads(text)
    try:
        return gens.with_window(config.window_over(gens.window))
    except WindowOverflow as exc:
        raise ConfigError(str(exc)) from None


def cmd_analyze(config: RunConfig) -> dict:
    """Verdict pipeline plus identity sweep; returns the AnalysisReport dict."""
    config.validate()
    gens = load_generators(config)
    tols = config.tolerances
    try:
        result = beurling_verdict(gens, gens.window, tols)
    except EmptyInterior as exc:
        raise ConfigError(str(exc)) from None
    residuals = identity_suite(result.basis, result.phi.candidate, config.seed, config.samples, tols)
    return analysis_report(result, residuals, tols, config.seed)


def cmd_demo(config: RunConfig) -> dict:
    if config.demo_name is None:
        raise ConfigError("demo needs --demo <name>")
    return cmd_analyze(config)


def cmd_sweep(config: RunConfig) -> dict:
    """Seeded residual sweep over the Beurling demos and the Toeplitz-kernel identity."""
    config.validate()
    tols = config.tolerances
    rows = []

    def add(fixture, records):
        by_name = {}
        for name, residual, bound in records:
            by_name.setdefault(name, []).append((residual, bound))
        for name, pairs in by_name.items():
            rows.append(
                {
                    "fixture": fixture,
                    "identity": name,
                    "count": len(pairs),
                    "max_residual": max(r for r, _ in pairs),
                    "max_tail_bound": max(b for _, b in pairs),
                    "max_excess": max(r - b for r, b in pairs),
                    "passed": all(r <= b + tols.inner_tol for r, b in pairs),
                }
            )

    for name in SWEEP_FIXTURES:
        gens = demo_generators(name)
        result = beurling_verdict(gens, gens.window, tols)
        recs = identity_suite(result.basis, result.phi.candidate, config.seed, config.samples, tols)
        add(name, [(r.name, r.residual, r.tail_bound) for r in recs])

    window = config.window_over(SWEEP_WINDOW)
    points = [lam for lam, _ in sample_pairs(config.seed, config.samples)]
    for label, terms in SWEEP_SYMBOLS.items():
        phi = polynomial(terms, window)
        add(
            "toeplitz",
            [
                (
                    f"toeplitz_kernel[{label}]",
                    mandrekar.toeplitz_kernel_identity_check(phi, p, window),
                    mandrekar.toeplitz_tail_bound(phi, p, window),
                )
                for p in points
            ],
        )
    return {
        "seed": config.seed,
        "samples": config.samples,
        "tolerances": tols.to_json(),
        "toeplitz_window": window.to_json(),
        "rows": rows,
        "passed": all(r["passed"] for r in rows),
    }


# --------------------------------------------------------------------------
# rendering


def render_report(report: dict) -> str:
    w = report["window"]
    lines = [
        f"window (d1={w['d1']}, d2={w['d2']}, margin={w['margin']})  dim M = {report['dim']}",
        f"verdict: {report['verdict']}",
        f"  dc defect          {report['dc_defect']:.3e}",
        f"  wandering dim      {report['wandering_dim']}",
    ]
    if report["inner"] is not None:
        inner = report["inner"]
        lines.append(
            f"  phi innerness      origin {inner['origin']:.12f}  max off-origin {inner['max_offorigin']:.3e}"
            f"  inner={inner['is_inner']}"
        )
    if report["phi_route_agreement"] is not None:
        lines.append(f"  route agreement    {report['phi_route_agreement']:.3e}")
    if report["beurling_distance"] is not None:
        lines.append(f"  Beurling distance  {report['beurling_distance']:.3e}")
    if report["phi"] is not None:
        terms = sorted(report["phi"], key=lambda e: -(e[2] ** 2 + e[3] ** 2))[:6]
        shown = " + ".join(f"({re:.6g}{im:+.6g}j) z1^{m} z2^{n}" for m, n, re, im in terms)
        more = " + ..." if len(report["phi"]) > 6 else ""
        lines.append(f"  phi = {shown}{more}")
    worst = {}
    for rec in report["identity_residuals"]:
        worst[rec["name"]] = max(worst.get(rec["name"], 0.0), rec["residual"])
    lines.append("identity residuals (max over samples):")
    lines += [f"  {name:<28s} {val:.3e}" for name, val in worst.items()]
    return "\n".join(lines)


def render_sweep(summary: dict) -> str:
    lines = [f"{'fixture':<12s} {'identity':<28s} {'max resid':>10s} {'max bound':>10s}  ok"]
    for r in summary["rows"]:
        lines.append(
            f"{r['fixture']:<12s} {r['identity']:<28s} {r['max_residual']:10.3e} {r['max_tail_bound']:10.3e}  "
            f"{'yes' if r['passed'] else 'NO'}"
        )
    lines.append("all identities within bounds" if summary["passed"] else "RESIDUAL ABOVE BOUND")
    return "\n".join(lines)


def dumps(payload: dict) -> str:
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def main(argv=None) -> int:
    try:
        config = parse_config(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if config.command == "sweep":
            summary = cmd_sweep(config)
            sys.stdout.write(dumps(summary) if config.json_output else render_sweep(summary) + "\n")
            return EXIT_OK if summary["passed"] else EXIT_SWEEP_FAILED
        report = cmd_demo(config) if config.command == "demo" else cmd_analyze(config)
        sys.stdout.write(dumps(report) if config.json_output else render_report(report) + "\n")
        return EXIT_OK
    except MalformedInput as exc:
        sys.stderr.write(f"bidisc: malformed input: {exc}\n")
        return EXIT_MALFORMED
    except EmptySpan as exc:
        sys.stderr.write(f"bidisc: empty span: {exc}\n")
        return EXIT_EMPTY_SPAN
    except ConfigError as exc:
        sys.stderr.write(f"bidisc: config error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
