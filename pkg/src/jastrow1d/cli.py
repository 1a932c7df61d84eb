"""Command-line surface: two-body solve, alpha scan, CI reference, comparison.

One binary with subcommands sharing a flat configuration.  Precedence is
command-line flags over --config file values over built-in defaults; config
files are flat JSON objects keyed by the long flag names.  All JSON output
is pretty-printed with sorted keys and carries the schema version plus the
fully resolved configuration, so identical configurations produce
byte-identical files.

Exit codes: 0 success, 1 numerical/runtime failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import io
import json
import sys
from dataclasses import asdict, dataclass, replace

import numpy as np

from .ansatz import alpha_lower_bound, scan_alpha
from .ci import ci_ground_state
from .errors import NumericsError
from .interaction import KINDS, Interaction
from .twobody import solve_relative

SCHEMA_VERSION = 1

_FLAG_FIELDS = {
    "interaction": ("interaction", str),
    "g": ("g", float),
    "range-b": ("range_b", float),
    "particles": ("particles", int),
    "statistics": ("statistics", str),
    "orbitals": ("orbitals", int),
    "quad-order": ("quad_order", int),
    "alpha-min": ("alpha_min", float),
    "alpha-max": ("alpha_max", float),
    "alpha-steps": ("alpha_steps", int),
    "eigenvalues": ("eigenvalues", int),
}


@dataclass(frozen=True)
class RunConfig:
    interaction: str = "none"
    g: float = 1.0
    range_b: float = 0.1
    particles: int = 3
    statistics: str = "bosons"
    orbitals: int = 15
    quad_order: int = 64
    alpha_min: float = 0.7
    alpha_max: float = 1.1
    alpha_steps: int = 17
    eigenvalues: int = 4

    def to_interaction(self) -> Interaction:
        return Interaction(self.interaction, self.g, self.range_b)

    def parity(self) -> str:
        return "even" if self.statistics == "bosons" else "odd"

    def flag_dict(self) -> dict:
        values = asdict(self)
        return {flag: values[field] for flag, (field, _) in _FLAG_FIELDS.items()}


class UsageError(ValueError):
    pass


def _load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"--config: cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"--config: {path} is not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise UsageError(f"--config: {path} must hold a flat JSON object")
    out = {}
    for key, value in data.items():
        if key not in _FLAG_FIELDS:
            raise UsageError(f"--config: unknown key {key!r} (expected one of {sorted(_FLAG_FIELDS)})")
        field, cast = _FLAG_FIELDS[key]
        try:
            out[field] = cast(value)
        except (TypeError, ValueError) as exc:
            raise UsageError(f"--config: key {key!r} has invalid value {value!r}") from exc
    return out


def resolve_config(args: argparse.Namespace, command: str) -> RunConfig:
    """Layer flags over config-file values over defaults, then validate."""
    cfg = RunConfig()
    if args.config is not None:
        cfg = replace(cfg, **_load_config_file(args.config))
    overrides = {}
    for field, _ in _FLAG_FIELDS.values():
        value = getattr(args, field, None)
        if value is not None:
            overrides[field] = value
    cfg = replace(cfg, **overrides)
    _validate(cfg, command)
    return cfg


def _validate(cfg: RunConfig, command: str):
    def fail(flag: str, message: str):
        raise UsageError(f"--{flag}: {message}")

    if cfg.interaction not in KINDS:
        fail("interaction", f"unknown kind {cfg.interaction!r}; valid: {', '.join(KINDS)}")
    if cfg.interaction in ("soft_coulomb", "quasi1d_coulomb", "gaussian") and not cfg.range_b > 0:
        fail("range-b", f"must be positive for {cfg.interaction}, got {cfg.range_b}")
    if cfg.statistics not in ("bosons", "fermions"):
        fail("statistics", f"must be 'bosons' or 'fermions', got {cfg.statistics!r}")
    if not 2 <= cfg.particles <= 4:
        fail("particles", f"must be in [2, 4], got {cfg.particles}")
    if not 2 <= cfg.orbitals <= 64:
        fail("orbitals", f"must be in [2, 64], got {cfg.orbitals}")
    if command in ("ci", "compare") and cfg.orbitals > 20:
        fail("orbitals", f"must be <= 20 for CI commands, got {cfg.orbitals}")
    if cfg.statistics == "fermions" and cfg.orbitals < cfg.particles:
        fail("orbitals", f"fermions need at least {cfg.particles} orbitals, got {cfg.orbitals}")
    if not 20 <= cfg.quad_order <= 512:
        fail("quad-order", f"must be in [20, 512], got {cfg.quad_order}")
    if not 2 <= cfg.eigenvalues <= 16:
        fail("eigenvalues", f"must be in [2, 16], got {cfg.eigenvalues}")
    if command in ("scan", "minimize", "compare"):
        bound = alpha_lower_bound(cfg.particles)
        if not cfg.alpha_min > bound + 1e-3:
            fail("alpha-min", f"must exceed the normalizability bound {bound:.6f} "
                              f"for N={cfg.particles} by at least 1e-3, got {cfg.alpha_min}")
        if not cfg.alpha_max > cfg.alpha_min:
            fail("alpha-max", f"must exceed --alpha-min, got {cfg.alpha_max}")
        if cfg.alpha_steps < 3:
            fail("alpha-steps", f"must be >= 3, got {cfg.alpha_steps}")


def _json_block(payload: dict, cfg: RunConfig) -> str:
    body = {"schema_version": SCHEMA_VERSION, "config": cfg.flag_dict()}
    body.update(payload)
    return json.dumps(body, indent=2, sort_keys=True) + "\n"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _cmd_twobody(cfg: RunConfig, out: io.StringIO) -> int:
    sol = solve_relative(cfg.to_interaction(), cfg.orbitals, cfg.parity())
    m_lo = max(2, cfg.orbitals - 3)
    sol_lo = solve_relative(cfg.to_interaction(), m_lo, cfg.parity())
    out.write(_json_block({
        "energy_rel": sol.energy,
        "parity": sol.parity,
        "coefficients": [float(c) for c in sol.coeffs],
        "basis_convergence_delta": abs(sol.energy - sol_lo.energy),
        "basis_convergence_reference_m": m_lo,
    }, cfg))
    return 0


def _run_scan(cfg: RunConfig):
    sol = solve_relative(cfg.to_interaction(), cfg.orbitals, cfg.parity())
    return scan_alpha(cfg.particles, cfg.statistics, sol,
                      cfg.alpha_min, cfg.alpha_max, cfg.alpha_steps, cfg.quad_order)


def _scan_csv(result) -> str:
    lines = ["alpha,energy,log_norm,convergence_delta"]
    for alpha, est in result.points:
        lines.append(",".join(_fmt(v) for v in
                              (alpha, est.energy, est.log_norm, est.convergence_delta)))
    return "\n".join(lines) + "\n"


def _scan_summary(result, cfg: RunConfig) -> str:
    return _json_block({
        "alpha_star": result.alpha_star,
        "energy_star": result.energy_star,
        "boundary_minimum": result.boundary_minimum,
        "warnings": list(result.warnings),
    }, cfg)


def _cmd_scan(cfg: RunConfig, out: io.StringIO) -> int:
    result = _run_scan(cfg)
    out.write(_scan_csv(result))
    out.write(_scan_summary(result, cfg))
    return 0


def _cmd_minimize(cfg: RunConfig, out: io.StringIO) -> int:
    result = _run_scan(cfg)
    out.write(_scan_summary(result, cfg))
    return 0


def _ci_payload(cfg: RunConfig) -> dict:
    spectrum = ci_ground_state(cfg.to_interaction(), cfg.particles, cfg.orbitals,
                               cfg.statistics, cfg.eigenvalues)
    m_lo = max(cfg.particles, cfg.orbitals - 3)
    spectrum_lo = ci_ground_state(cfg.to_interaction(), cfg.particles, m_lo,
                                  cfg.statistics, 2)
    return {
        "energies": list(spectrum.energies),
        "gap": spectrum.gap,
        "dimension": spectrum.basis.dimension,
        "orbitals": cfg.orbitals,
        "particles": cfg.particles,
        "statistics": cfg.statistics,
        "interaction": {"kind": cfg.interaction, "g": cfg.g, "b": cfg.range_b},
        "m_convergence_delta": abs(spectrum.energies[0] - spectrum_lo.energies[0]),
        "m_convergence_reference_m": m_lo,
    }


def _cmd_ci(cfg: RunConfig, out: io.StringIO) -> int:
    out.write(_json_block(_ci_payload(cfg), cfg))
    return 0


def _cmd_compare(cfg: RunConfig, out: io.StringIO) -> int:
    """Scan plus CI on one configuration, with a text table mirroring the curve."""
    warnings = []
    scan_result = ci_data = None
    try:
        scan_result = _run_scan(cfg)
    except (NumericsError, ValueError) as exc:
        warnings.append(f"scan-failed: {exc}")
    try:
        ci_data = _ci_payload(cfg)
    except (NumericsError, ValueError) as exc:
        warnings.append(f"ci-failed: {exc}")

    table = ["  alpha        E_trial"]
    if scan_result is not None:
        for alpha, est in scan_result.points:
            table.append(f"  {alpha:<10.6f} {est.energy:.10f}")
    if ci_data is not None:
        table.append(f"  CI reference: E0 = {ci_data['energies'][0]:.10f}"
                     f" (gap {ci_data['gap']:.6f})")
    out.write("\n".join(table) + "\n")

    payload = {"warnings": warnings, "E_ci": None, "gap": None,
               "E_trial_min": None, "alpha_star": None,
               "delta": None, "delta_over_gap": None,
               "quad_convergence_delta": None, "ci_m_delta": None}
    if scan_result is not None:
        payload["E_trial_min"] = scan_result.energy_star
        payload["alpha_star"] = scan_result.alpha_star
        payload["quad_convergence_delta"] = max(p[1].convergence_delta for p in scan_result.points)
        payload["warnings"] = warnings + list(scan_result.warnings)
    if ci_data is not None:
        payload["E_ci"] = ci_data["energies"][0]
        payload["gap"] = ci_data["gap"]
        payload["ci_m_delta"] = ci_data["m_convergence_delta"]
    if scan_result is not None and ci_data is not None:
        delta = scan_result.energy_star - ci_data["energies"][0]
        payload["delta"] = delta
        payload["delta_over_gap"] = delta / ci_data["gap"]
        if delta < -1e-3:
            warnings.append("trial-below-ci: trial minimum fell materially below the CI reference")
            payload["warnings"] = warnings + list(scan_result.warnings)
    out.write(_json_block(payload, cfg))
    return 1 if any(w.endswith("-failed") or w.startswith("trial-below-ci") for w in warnings) else 0


_COMMANDS = {
    "twobody": _cmd_twobody,
    "scan": _cmd_scan,
    "minimize": _cmd_minimize,
    "ci": _cmd_ci,
    "compare": _cmd_compare,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jastrow1d",
        description="Pair-correlated trial wavefunctions vs exact diagonalization "
                    "for few particles in a 1D harmonic trap.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("twobody", "solve the relative two-particle problem"),
            ("scan", "energy of the trial wavefunction over an alpha grid (CSV + summary)"),
            ("minimize", "alpha scan reporting only the refined minimum"),
            ("ci", "configuration-interaction reference spectrum"),
            ("compare", "scan and CI on one configuration, with comparison report")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--interaction", choices=KINDS, default=None,
                       help="pair potential kind (default: none)")
        p.add_argument("--g", type=float, default=None, help="interaction strength (default: 1.0)")
        p.add_argument("--range-b", dest="range_b", type=float, default=None,
                       help="transverse/softening length b (default: 0.1)")
        p.add_argument("--particles", type=int, default=None, help="particle count N in [2,4] (default: 3)")
        p.add_argument("--statistics", choices=("bosons", "fermions"), default=None,
                       help="particle statistics (default: bosons)")
        p.add_argument("--orbitals", type=int, default=None, help="oscillator orbitals M (default: 15)")
        p.add_argument("--quad-order", dest="quad_order", type=int, default=None,
                       help="Gauss-Hermite order per axis (default: 64)")
        p.add_argument("--alpha-min", dest="alpha_min", type=float, default=None,
                       help="scan lower edge (default: 0.7)")
        p.add_argument("--alpha-max", dest="alpha_max", type=float, default=None,
                       help="scan upper edge (default: 1.1)")
        p.add_argument("--alpha-steps", dest="alpha_steps", type=int, default=None,
                       help="scan grid size (default: 17)")
        p.add_argument("--eigenvalues", type=int, default=None,
                       help="CI eigenvalue count k (default: 4)")
        p.add_argument("--config", default=None, help="flat JSON config file (flag names as keys)")
        p.add_argument("--output", default=None, help="write output to this path instead of stdout")
        p.add_argument("--emit-config", action="store_true",
                       help="print the resolved configuration as config-file JSON and exit")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args, args.command)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    out = io.StringIO()
    if args.emit_config:
        out.write(json.dumps(cfg.flag_dict(), indent=2, sort_keys=True) + "\n")
        code = 0
    else:
        try:
            code = _COMMANDS[args.command](cfg, out)
        except (NumericsError, np.linalg.LinAlgError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2

    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(out.getvalue())
    else:
        sys.stdout.write(out.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
