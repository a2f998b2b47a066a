"""Command-line front end.

Subcommands reproduce the library's headline results as CSV sweeps:

  design   solve the covert design for one configuration
  fig1     warden error probability and KL bound versus the power split
  fig2     effective SINR versus pilot count at the covertness-limited power
  fig3     optimal pilot count versus the covertness parameter
  sweep    closed-form detection metrics over an average-power grid
  verify   Monte Carlo versus closed-form consistency suite

Configuration files are INI-style: a [system] section for the physical
parameters plus one optional section per subcommand.  Every key has a
default, so all subcommands run with no config at all.  Power-valued
keys accept a `dBm` suffix (linear = 10^(dBm/10), milliwatt reference).
CSV output is deterministic for a fixed (config, seed): comma-separated,
LF line endings, 17 significant digits, and every row carries a hash of
the fully resolved configuration.
"""

import argparse
import configparser
import hashlib
import math
import sys
from typing import Dict, List, Optional, Sequence, Tuple

from .detection import covertness_lower_bound, kl_divergence, min_detection_error
from .link_model import PowerAllocation, SystemConfig, effective_sinr_equal_power, sinr
from .monte_carlo import (
    LikelihoodRatioTest,
    McConfig,
    Radiometer,
    TrialBudgetError,
    bob_estimation_diagnostics,
    count_detector_disagreements,
    simulate_bob_sinr,
    simulate_willie,
)
from .optimizer import SolverError, design, np_star, solve_rho_star

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_BUDGET = 4

DEFAULT_SEED = 12345

# keys interpreted as powers, eligible for dBm conversion
_POWER_KEYS = {"sigma_b2", "sigma_w2", "rho", "rho_min", "rho_max"}

# caption-fidelity annotation keys: accepted, warned about, never used
_ANNOTATION_KEYS = {"tau"}


def _grid(start: float, stop: float, step: float) -> List[float]:
    count = int(round((stop - start) / step)) + 1
    return [round(start + i * step, 12) for i in range(count)]


# defaults are typed and always linear-scale; the units flag applies only
# to values read from a config file
_SYSTEM_DEFAULTS: Dict[str, object] = {
    "n": 100,
    "lambda_ab": 1.0,
    "sigma_b2": 1.0,
    "sigma_w2": 1.0,
    "epsilon": 0.1,
}

_COMMAND_DEFAULTS: Dict[str, Dict[str, object]] = {
    "design": {},
    "fig1": {
        "rho": 0.05,
        "np_values": [20, 50],
        "eta_grid": _grid(0.05, 0.95, 0.05),
        "trials": 100_000,
    },
    "fig2": {"epsilon_values": [0.05, 0.1, 0.2]},
    "fig3": {"epsilon_grid": _grid(0.02, 0.30, 0.02), "n_values": [100, 200, 400]},
    "sweep": {"rho_min": 0.001, "rho_max": 1.0, "rho_points": 50, "n_p": 20},
    "verify": {"rho": 0.05, "n_p": 20, "trials": 200_000},
}

_VALID_KEYS: Dict[str, set] = {
    "system": set(_SYSTEM_DEFAULTS) | {"seed"},
    **{cmd: set(defaults) for cmd, defaults in _COMMAND_DEFAULTS.items()},
}


class ConfigError(ValueError):
    """Invalid or unknown configuration input; message names the field."""


def dbm_to_linear(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0)


def linear_to_dbm(linear: float) -> float:
    return 10.0 * math.log10(linear)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _parse_power(key: str, raw: str, units: str) -> float:
    text = raw.strip()
    is_dbm = units == "dbm"
    if text.lower().endswith("dbm"):
        text = text[:-3].strip()
        is_dbm = True
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"config key '{key}': cannot parse {raw!r} as a number")
    return dbm_to_linear(value) if is_dbm else value


def _parse_float(key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"config key '{key}': cannot parse {raw!r} as a number")


def _parse_int(key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"config key '{key}': cannot parse {raw!r} as an integer")


def _parse_list(key: str, raw: str, parse_item) -> List:
    items = [item.strip() for item in raw.split(",") if item.strip()]
    if not items:
        raise ConfigError(f"config key '{key}': empty list")
    return [parse_item(key, item) for item in items]


def _parse_grid(key: str, raw: str) -> List[float]:
    """start:stop:step inclusive grid, or a comma list."""
    if ":" in raw:
        parts = raw.split(":")
        if len(parts) != 3:
            raise ConfigError(f"config key '{key}': grid must be start:stop:step")
        start, stop, step = (_parse_float(key, p) for p in parts)
        if step <= 0 or stop < start:
            raise ConfigError(f"config key '{key}': grid bounds are not increasing")
        count = int(round((stop - start) / step)) + 1
        return [round(start + i * step, 12) for i in range(count)]
    return _parse_list(key, raw, lambda k, item: _parse_float(k, item))


def _read_config_file(path: Optional[str]) -> configparser.ConfigParser:
    parser = configparser.ConfigParser()
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                parser.read_file(handle)
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path!r}: {exc}")
        except configparser.Error as exc:
            raise ConfigError(f"malformed config file {path!r}: {exc}")
    return parser


def _collect_section(
    parser: configparser.ConfigParser, section: str, resolved: Dict[str, str]
) -> None:
    if not parser.has_section(section):
        return
    for key, raw in parser.items(section):
        if key in _ANNOTATION_KEYS:
            print(
                f"note: config key '{key}' is an annotation and is ignored",
                file=sys.stderr,
            )
            continue
        if key not in _VALID_KEYS[section]:
            raise ConfigError(f"unknown config key '{key}' in section [{section}]")
        resolved[key] = raw


def _parse_override(key: str, value: str, units: str) -> object:
    if key in _POWER_KEYS:
        return _parse_power(key, value, units)
    if key in ("n", "n_p", "trials", "rho_points", "seed"):
        return _parse_int(key, value)
    if key in ("np_values", "n_values"):
        return _parse_list(key, value, _parse_int)
    if key in ("eta_grid", "epsilon_grid"):
        return _parse_grid(key, value)
    if key == "epsilon_values":
        return _parse_list(key, value, lambda k, item: _parse_float(k, item))
    return _parse_float(key, value)


def resolve_run_config(args, command: str) -> Dict[str, object]:
    """Merge defaults, the config file, and CLI flags into typed values."""
    parser = _read_config_file(args.config)
    overrides: Dict[str, str] = {}
    _collect_section(parser, "system", overrides)
    _collect_section(parser, command, overrides)

    units = args.units
    resolved: Dict[str, object] = {"command": command, "units": units}
    resolved.update(_SYSTEM_DEFAULTS)
    resolved.update(_COMMAND_DEFAULTS[command])
    for key, value in overrides.items():
        resolved[key] = _parse_override(key, value, units)

    if args.seed is not None:
        resolved["seed"] = args.seed
    resolved.setdefault("seed", DEFAULT_SEED)
    if args.trials is not None:
        resolved["trials"] = args.trials
    return resolved


def system_config(resolved: Dict[str, object], **overrides) -> SystemConfig:
    values = {
        "n": resolved["n"],
        "lambda_ab": resolved["lambda_ab"],
        "sigma_b2": resolved["sigma_b2"],
        "sigma_w2": resolved["sigma_w2"],
        "epsilon": resolved["epsilon"],
    }
    values.update(overrides)
    try:
        return SystemConfig(**values)
    except ValueError as exc:
        raise ConfigError(str(exc))


def config_hash(resolved: Dict[str, object]) -> str:
    lines = []
    for key in sorted(resolved):
        value = resolved[key]
        if isinstance(value, list):
            text = ",".join(_fmt(item) for item in value)
        else:
            text = _fmt(value)
        lines.append(f"{key}={text}")
    digest = hashlib.sha256("\n".join(lines).encode("utf-8")).hexdigest()
    return digest[:12]


def _write_csv(out: Optional[str], header: Sequence[str], rows: List[Sequence]) -> None:
    text = ",".join(header) + "\n"
    for row in rows:
        text += ",".join(_fmt(cell) for cell in row) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _row_seed(base: int, index: int) -> int:
    return (base + index) % 2**64


def cmd_design(args) -> int:
    resolved = resolve_run_config(args, "design")
    cfg = system_config(resolved)
    result = design(cfg)
    digest = config_hash(resolved)

    rho_text = _fmt(result.rho_star)
    if args.units == "dbm":
        rho_text += f" ({_fmt(linear_to_dbm(result.rho_star))} dBm)"
    print(f"covert design for n={cfg.n}, epsilon={_fmt(cfg.epsilon)}")
    print(f"  rho_star          {rho_text}")
    print(f"  np_continuous     {_fmt(result.np_continuous)}")
    print(f"  np_star           {result.np_star}")
    print(f"  np_ceil/np_floor  {result.np_ceil}/{result.np_floor}")
    print(f"  gamma_eff_star    {_fmt(result.gamma_eff_star)}")
    print(f"  xi_star_achieved  {_fmt(result.xi_star_achieved)}")
    print(f"  config_hash       {digest}")

    if args.out is not None:
        header = [
            "n", "lambda_ab", "sigma_b2", "sigma_w2", "epsilon",
            "rho_star", "np_continuous", "np_star", "np_ceil", "np_floor",
            "gamma_eff_star", "xi_star_achieved", "config_hash",
        ]
        row = [
            cfg.n, cfg.lambda_ab, cfg.sigma_b2, cfg.sigma_w2, cfg.epsilon,
            result.rho_star, result.np_continuous, result.np_star,
            result.np_ceil, result.np_floor, result.gamma_eff_star,
            result.xi_star_achieved, digest,
        ]
        _write_csv(args.out, header, [row])
    return EXIT_OK


def cmd_fig1(args) -> int:
    resolved = resolve_run_config(args, "fig1")
    cfg = system_config(resolved)
    digest = config_hash(resolved)
    rho = resolved["rho"]
    trials = resolved["trials"]
    seed = resolved["seed"]

    rows = []
    index = 0
    for n_p in resolved["np_values"]:
        for eta in resolved["eta_grid"]:
            alloc = PowerAllocation(n=cfg.n, rho=rho, eta=eta, n_p=n_p)
            mc = McConfig(trials=trials, seed=_row_seed(seed, index))
            rates = simulate_willie(cfg, alloc, mc, LikelihoodRatioTest())
            bound = covertness_lower_bound(kl_divergence(cfg, alloc))
            rows.append([eta, n_p, rates.xi.value, rates.xi.std_err, bound, digest])
            index += 1
    _write_csv(
        args.out,
        ["eta", "n_p", "xi_lrt", "xi_lrt_stderr", "kl_bound", "config_hash"],
        rows,
    )
    return EXIT_OK


def cmd_fig2(args) -> int:
    resolved = resolve_run_config(args, "fig2")
    digest = config_hash(resolved)
    rows = []
    for epsilon in resolved["epsilon_values"]:
        cfg = system_config(resolved, epsilon=epsilon)
        rho = solve_rho_star(cfg)
        best, _, _ = np_star(cfg, rho)
        for n_p in range(1, cfg.n):
            gamma = effective_sinr_equal_power(cfg, rho, n_p)
            rows.append([epsilon, n_p, gamma, int(n_p == best), digest])
    _write_csv(
        args.out,
        ["epsilon", "n_p", "gamma_eff", "analytic_optimum", "config_hash"],
        rows,
    )
    return EXIT_OK


def cmd_fig3(args) -> int:
    resolved = resolve_run_config(args, "fig3")
    digest = config_hash(resolved)
    rows = []
    for n in resolved["n_values"]:
        for epsilon in resolved["epsilon_grid"]:
            cfg = system_config(resolved, n=n, epsilon=epsilon)
            rho = solve_rho_star(cfg)
            best, _, _ = np_star(cfg, rho)
            rows.append([epsilon, n, best, best / n, digest])
    _write_csv(
        args.out,
        ["epsilon", "n", "np_star", "np_star_over_n", "config_hash"],
        rows,
    )
    return EXIT_OK


def cmd_sweep(args) -> int:
    resolved = resolve_run_config(args, "sweep")
    cfg = system_config(resolved)
    digest = config_hash(resolved)
    n_p = resolved["n_p"]
    if not 1 <= n_p <= cfg.n - 1:
        raise ConfigError(f"config key 'n_p': must lie in [1, n-1], got {n_p}")
    lo, hi, points = resolved["rho_min"], resolved["rho_max"], resolved["rho_points"]
    if not (0 < lo < hi) or points < 2:
        raise ConfigError("config keys 'rho_min'/'rho_max'/'rho_points': invalid grid")

    rows = []
    for i in range(points):
        rho = lo + (hi - lo) * i / (points - 1)
        report = min_detection_error(cfg, rho)
        gamma = effective_sinr_equal_power(cfg, rho, n_p)
        rows.append([
            rho, report.d01, report.xi_lower_bound, report.tau_star,
            report.alpha, report.beta, report.xi_star, gamma, digest,
        ])
    _write_csv(
        args.out,
        ["rho", "d01", "xi_lower_bound", "tau_star", "alpha", "beta",
         "xi_star", "gamma_eff", "config_hash"],
        rows,
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    resolved = resolve_run_config(args, "verify")
    cfg = system_config(resolved)
    digest = config_hash(resolved)
    rho = resolved["rho"]
    n_p = resolved["n_p"]
    if not 1 <= n_p <= cfg.n - 1:
        raise ConfigError(f"config key 'n_p': must lie in [1, n-1], got {n_p}")
    mc = McConfig(trials=resolved["trials"], seed=resolved["seed"])
    alloc = PowerAllocation.equal_power(n=cfg.n, rho=rho, n_p=n_p)

    analytic = min_detection_error(cfg, rho)
    radiometer = Radiometer(threshold=analytic.tau_star)
    rates = simulate_willie(cfg, alloc, mc, radiometer)
    disagreements = count_detector_disagreements(
        cfg, alloc, mc, LikelihoodRatioTest(), radiometer
    )
    bob = simulate_bob_sinr(cfg, alloc, mc)
    bob_analytic = sinr(cfg, alloc)
    diag = bob_estimation_diagnostics(cfg, alloc, mc)

    def z_score(simulated: float, expected: float, std_err: float) -> float:
        return (simulated - expected) / std_err if std_err > 0 else 0.0

    checks: List[Tuple[str, float, float, float, float, bool]] = []

    def add_check(name, simulated, expected, std_err, max_z):
        z = z_score(simulated, expected, std_err)
        checks.append((name, simulated, expected, std_err, z, abs(z) <= max_z))

    add_check("radiometer_alpha", rates.alpha.value, analytic.alpha, rates.alpha.std_err, 3.0)
    add_check("radiometer_beta", rates.beta.value, analytic.beta, rates.beta.std_err, 3.0)
    add_check("radiometer_xi", rates.xi.value, analytic.xi_star, rates.xi.std_err, 3.0)
    checks.append((
        "lrt_vs_radiometer_disagreements",
        float(disagreements), 0.0, 0.0, float(disagreements), disagreements == 0,
    ))
    add_check("bob_sinr", bob.value, bob_analytic, bob.std_err, 4.0)
    add_check("bob_orthogonality_re", diag.orth_corr_re.value, 0.0, diag.orth_corr_re.std_err, 4.0)
    add_check("bob_orthogonality_im", diag.orth_corr_im.value, 0.0, diag.orth_corr_im.std_err, 4.0)

    rows = [
        [name, simulated, expected, std_err, z, int(passed), digest]
        for name, simulated, expected, std_err, z, passed in checks
    ]
    _write_csv(
        args.out,
        ["check", "simulated", "analytic", "std_err", "z_score", "passed",
         "config_hash"],
        rows,
    )
    return EXIT_OK if all(passed for *_, passed in checks) else EXIT_CHECK_FAILED


_COMMANDS = {
    "design": cmd_design,
    "fig1": cmd_fig1,
    "fig2": cmd_fig2,
    "fig3": cmd_fig3,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI config file path")
    common.add_argument("--out", help="CSV output path (default: stdout)")
    common.add_argument("--seed", type=int, help="Monte Carlo seed (u64)")
    common.add_argument("--trials", type=int, help="Monte Carlo trials per point")
    common.add_argument(
        "--units",
        choices=("linear", "dbm"),
        default="linear",
        help="interpretation of unsuffixed power values (default: linear)",
    )

    parser = argparse.ArgumentParser(
        prog="covertpilot",
        description="Pilot/data allocation design for covert wireless links",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("design", parents=[common], help="solve one covert design")
    sub.add_parser("fig1", parents=[common], help="warden error vs power split (CSV)")
    sub.add_parser("fig2", parents=[common], help="effective SINR vs pilot count (CSV)")
    sub.add_parser("fig3", parents=[common], help="optimal pilot count vs covertness (CSV)")
    sub.add_parser("sweep", parents=[common], help="detection metrics vs average power (CSV)")
    sub.add_parser("verify", parents=[common], help="Monte Carlo vs closed-form suite (CSV)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TrialBudgetError as exc:
        print(f"monte carlo budget refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
