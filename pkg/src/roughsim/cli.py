"""Config-driven batch front-end.

Subcommands: `simulate` (path sets), `smile` (implied-vol curves),
`price` (single European contract), `american` (bushy-tree exercise),
`validate` (named invariant suites), `bench` (timing tables).

Configuration comes from an optional JSON file (`--config`) merged with
command-line flags; flags win. Unknown config keys are rejected before
anything runs. Every run is deterministic given (config, seed) and the
emitted metadata embeds the config hash, the git revision and the scheme
tags that produced the artifact.

Exit codes: 0 success, 1 configuration error, 2 runtime/validation
failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from . import validation
from ._config import set_threads, get_threads
from .kernels import Grid, kernel_from_config
from .models import model_from_config
from .pricing import (
    MCConfig,
    conditional_bs_estimate,
    implied_vol,
    plain_mc_estimate,
    smile,
)
from .shocks import NoiseConfig, draw_shocks
from .trees import (
    TreeConfig,
    build_tree,
    call_payoff,
    put_payoff,
    tree_price_american,
)
from .volterra import (
    cholesky_exact_rl,
    hybrid_scheme_rl,
    rdonsker_volterra,
    save_binary,
    save_csv,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2
EXIT_IO = 3

_SIMULATE_SCHEMES = ("rdonsker_matched", "rdonsker_left", "hybrid", "cholesky")


class ConfigError(Exception):
    """Invalid configuration (bad file, unknown key, bad value)."""


# ----------------------------------------------------------------------
# config plumbing
# ----------------------------------------------------------------------

_SCHEMAS = {
    "simulate": {
        "kernel": {"type", "alpha", "hurst", "beta"},
        "mc": {"paths", "steps", "seed", "scheme", "method", "horizon"},
        "output": {"format", "prefix"},
    },
    "smile": {
        "model": {"type", "xi0", "nu", "hurst", "rho", "spot", "beta",
                  "eta", "kappa", "theta", "xi", "y0"},
        "mc": {"paths", "steps", "seed", "scheme", "method", "horizon",
               "antithetic", "variance_reduction"},
        "strikes": None,
        "payoff": None,
        "output": {"prefix"},
    },
    "price": {
        "model": {"type", "xi0", "nu", "hurst", "rho", "spot", "beta",
                  "eta", "kappa", "theta", "xi", "y0"},
        "mc": {"paths", "steps", "seed", "scheme", "method", "horizon",
               "antithetic", "variance_reduction"},
        "strike": None,
        "payoff": None,
    },
    "american": {
        "model": {"type", "xi0", "nu", "hurst", "rho", "spot", "beta",
                  "eta", "kappa", "theta", "xi", "y0"},
        "tree": {"depth", "rate", "dividend", "branching", "weights",
                 "horizon", "max_in_memory_bytes"},
        "strike": None,
        "payoff": None,
        "dump_tree": None,
    },
    "validate": {
        "hursts": None,
        "covariance_paths": None,
        "covariance_seeds": None,
        "martingale_paths": None,
        "suites": None,
    },
    "bench": {
        "schemes": None,
        "grid": None,
        "paths": None,
        "trials": None,
        "seed": None,
        "hurst": None,
    },
}


def _check_keys(config: dict, schema: dict, command: str) -> None:
    unknown = set(config) - set(schema)
    if unknown:
        raise ConfigError(
            f"unknown config keys for {command}: {sorted(unknown)}")
    for key, sub in schema.items():
        if sub is None or key not in config:
            continue
        if not isinstance(config[key], dict):
            raise ConfigError(f"config section {key!r} must be an object")
        bad = set(config[key]) - sub
        if bad:
            raise ConfigError(
                f"unknown keys in config section {key!r}: {sorted(bad)}")


def _load_config_file(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        config = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(config, dict):
        raise ConfigError("config file must hold a JSON object")
    return config


def _set_override(config: dict, section, key, value) -> None:
    if value is None:
        return
    if section is None:
        config[key] = value
    else:
        config.setdefault(section, {})[key] = value


def _config_hash(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def _git_revision() -> str:
    try:
        out = subprocess.run(
            ["git", "rev-parse", "--short", "HEAD"],
            capture_output=True, text=True, timeout=5,
            cwd=os.path.dirname(os.path.abspath(__file__)))
        if out.returncode == 0:
            return out.stdout.strip()
    except OSError:
        pass
    return "unknown"


def _metadata(command: str, config: dict, scheme_tags, runtime: float) -> dict:
    return {
        "command": command,
        "config_hash": _config_hash(config),
        "git_revision": _git_revision(),
        "scheme_tags": sorted(set(scheme_tags)),
        "threads": get_threads(),
        "runtime_seconds": runtime,
    }


def _parse_floats(text: str) -> list:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from exc


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")


def _write_json(path, payload) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True,
                                     default=_json_default) + "\n")


# ----------------------------------------------------------------------
# subcommand implementations
# ----------------------------------------------------------------------

def _build_mc_config(mc: dict, defaults: dict) -> MCConfig:
    merged = {**defaults, **mc}
    grid = Grid(int(merged["steps"]), float(merged["horizon"]))
    return MCConfig(
        num_paths=int(merged["paths"]), grid=grid,
        scheme=merged["scheme"],
        variance_reduction=merged.get("variance_reduction", "conditional_bs"),
        antithetic=bool(merged.get("antithetic", True)),
        seed=int(merged["seed"]), method=merged.get("method", "fft"))


def cmd_simulate(config: dict, out_dir: Path) -> dict:
    start = time.perf_counter()
    kernel_cfg = {"type": "rl", **config.get("kernel", {})}
    if kernel_cfg["type"] == "rl" and "alpha" not in kernel_cfg:
        kernel_cfg.setdefault("hurst", 0.3)
    mc = {"paths": 100, "steps": 256, "seed": 0, "horizon": 1.0,
          "scheme": "rdonsker_matched", "method": "fft",
          **config.get("mc", {})}
    output = {"format": "csv", "prefix": "paths", **config.get("output", {})}
    scheme = mc["scheme"]
    if scheme not in _SIMULATE_SCHEMES:
        raise ConfigError(f"unknown scheme {scheme!r}, "
                          f"choose from {_SIMULATE_SCHEMES}")
    if output["format"] not in ("csv", "binary"):
        raise ConfigError(f"unknown output format {output['format']!r}")
    try:
        kernel = kernel_from_config(dict(kernel_cfg))
        grid = Grid(int(mc["steps"]), float(mc["horizon"]))
        paths_n, seed = int(mc["paths"]), int(mc["seed"])
        if scheme in ("hybrid", "cholesky") and kernel.kind != "rl":
            raise ValueError(f"scheme {scheme!r} requires the "
                             "Riemann-Liouville kernel")
    except (ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc

    if scheme == "cholesky":
        paths = cholesky_exact_rl(kernel, grid, paths_n, seed)
    else:
        zeta = draw_shocks(NoiseConfig(distribution="gaussian",
                                       paths=paths_n, steps=grid.n,
                                       rho=0.0, seed=seed)).zeta
        if scheme == "hybrid":
            paths = hybrid_scheme_rl(kernel.hurst, zeta, grid, seed)
        else:
            mode = ("moment_matched" if scheme == "rdonsker_matched"
                    else "left_point")
            paths = rdonsker_volterra(kernel, "brownian", zeta, grid,
                                      eval_mode=mode, method=mc["method"])
            paths.seed = seed

    suffix = ".csv" if output["format"] == "csv" else ".bin"
    data_path = out_dir / (output["prefix"] + suffix)
    if output["format"] == "csv":
        save_csv(paths, data_path)
    else:
        save_binary(paths, data_path)
    meta = _metadata("simulate", config, [paths.scheme_tag],
                     time.perf_counter() - start)
    meta["artifact"] = str(data_path)
    meta["shape"] = [int(paths.num_paths), int(grid.n + 1)]
    _write_json(out_dir / (output["prefix"] + ".meta.json"), meta)
    return meta


def _model_and_mc(config: dict, mc_defaults: dict):
    try:
        if "model" not in config:
            raise ConfigError("missing config section 'model'")
        model = model_from_config(dict(config["model"]))
        mc_config = _build_mc_config(config.get("mc", {}), mc_defaults)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return model, mc_config


_MC_DEFAULTS = {"paths": 40_000, "steps": 256, "seed": 0, "horizon": 1.0,
                "scheme": "rdonsker_matched"}


def cmd_smile(config: dict, out_dir: Path) -> dict:
    start = time.perf_counter()
    model, mc_config = _model_and_mc(config, _MC_DEFAULTS)
    strikes = config.get("strikes", [0.8, 0.9, 0.95, 1.0, 1.05, 1.1, 1.2])
    payoff = config.get("payoff", "call")
    prefix = config.get("output", {}).get("prefix", "smile")
    try:
        strikes = np.asarray([float(k) for k in strikes])
        if payoff not in ("call", "put"):
            raise ConfigError(f"unknown payoff {payoff!r}")
        result = smile(model, mc_config, strikes, payoff=payoff)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    csv_path = out_dir / f"{prefix}.csv"
    rows = np.column_stack([result.strikes, result.prices, result.stderrs,
                            result.implied_vols])
    np.savetxt(csv_path, rows, delimiter=",", fmt="%.17g",
               header="strike,price,stderr,implied_vol", comments="")
    meta = _metadata("smile", config, [result.metadata["scheme"]],
                     time.perf_counter() - start)
    meta["artifact"] = str(csv_path)
    meta["pricing"] = {k: v for k, v in result.metadata.items()
                       if k not in ("model",)}
    _write_json(out_dir / f"{prefix}.meta.json", meta)
    return meta


def cmd_price(config: dict, out_dir: Path) -> dict:
    start = time.perf_counter()
    model, mc_config = _model_and_mc(config, _MC_DEFAULTS)
    strike = float(config.get("strike", 1.0))
    payoff = config.get("payoff", "call")
    if payoff not in ("call", "put"):
        raise ConfigError(f"unknown payoff {payoff!r}")
    if strike <= 0.0:
        raise ConfigError(f"strike must be positive, got {strike}")
    estimator = (conditional_bs_estimate
                 if mc_config.variance_reduction == "conditional_bs"
                 else plain_mc_estimate)
    price, stderr = estimator(model, mc_config, strike, payoff=payoff)
    call_equivalent = price if payoff == "call" else price + model.spot - strike
    try:
        vol = implied_vol(call_equivalent, model.spot, strike,
                          mc_config.grid.T)
    except ValueError:
        vol = float("nan")
    record = {
        "strike": strike, "payoff": payoff,
        "price": price, "stderr": stderr, "implied_vol": vol,
        "metadata": _metadata("price", config, [mc_config.scheme],
                              time.perf_counter() - start),
    }
    return record


def _dump_tree_csv(tree, path) -> None:
    with open(path, "w") as fh:
        fh.write("level,node,log_stock,stock,variance\n")
        for level in range(tree.depth + 1):
            xs = np.asarray(tree.log_stock[level])
            vs = np.asarray(tree.variance[level])
            for node in range(xs.shape[0]):
                fh.write(f"{level},{node},{float(xs[node])!r},"
                         f"{float(np.exp(xs[node]))!r},{float(vs[node])!r}\n")


def cmd_american(config: dict, out_dir: Path) -> dict:
    start = time.perf_counter()
    try:
        if "model" not in config:
            raise ConfigError("missing config section 'model'")
        model = model_from_config(dict(config["model"]))
        tree_cfg = {"depth": 10, "rate": 0.0, "dividend": 0.0,
                    "horizon": 1.0, **config.get("tree", {})}
        tree_config = TreeConfig(
            model=model, depth=int(tree_cfg["depth"]),
            rate=float(tree_cfg["rate"]),
            dividend=float(tree_cfg["dividend"]),
            horizon=float(tree_cfg["horizon"]),
            weights=tree_cfg.get("weights"),
            branching=tree_cfg.get("branching"),
            max_in_memory_bytes=int(tree_cfg.get("max_in_memory_bytes",
                                                 1 << 29)))
    except ConfigError:
        raise
    except (ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc
    strike = float(config.get("strike", 1.0))
    payoff_name = config.get("payoff", "put")
    if payoff_name not in ("call", "put"):
        raise ConfigError(f"unknown payoff {payoff_name!r}")
    dump = config.get("dump_tree")
    if dump and tree_config.depth > 6:
        raise ConfigError("--dump-tree is limited to depth <= 6")

    payoff = (call_payoff if payoff_name == "call" else put_payoff)(strike)
    tree = build_tree(tree_config)
    details = tree_price_american(tree, payoff, details=True)
    record = {
        "price": details["price"],
        "european_price": details["european_price"],
        "early_exercise_premium": details["early_exercise_premium"],
        "depth": details["depth"],
        "branching": details["branching"],
        "strike": strike,
        "payoff": payoff_name,
        "metadata": _metadata("american", config, [tree_config.weights],
                              time.perf_counter() - start),
    }
    record["metadata"]["exercise_counts"] = [
        int(c) for c in details["exercise_counts"]]
    if dump:
        dump_path = out_dir / (dump if isinstance(dump, str) else "tree.csv")
        _dump_tree_csv(tree, dump_path)
        record["metadata"]["tree_dump"] = str(dump_path)
    return record


def cmd_validate(config: dict, corrupt: float = 0.0) -> dict:
    hursts = tuple(config.get("hursts", validation.DEFAULT_HURSTS))
    hook = None
    if corrupt:
        def hook(weights):
            weights[0] *= 1.0 + corrupt
            return weights
    seeds = config.get("covariance_seeds")
    if seeds is not None:
        seeds = {name: int(seed) for name, seed in seeds.items()}
    try:
        report = validation.run_invariants(
            hursts=hursts,
            covariance_paths=int(config.get("covariance_paths",
                                            validation.COVARIANCE_PATHS)),
            martingale_paths=int(config.get("martingale_paths", 40_000)),
            covariance_seeds=seeds,
            suites=config.get("suites"),
            weight_hook=hook)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return report


def cmd_bench(config: dict) -> dict:
    schemes = tuple(config.get("schemes", bench_mod.BENCH_SCHEMES))
    grid = tuple(int(n) for n in config.get("grid", bench_mod.BENCH_GRID))
    unknown = set(schemes) - set(bench_mod.BENCH_SCHEMES)
    if unknown:
        raise ConfigError(f"unknown bench schemes: {sorted(unknown)}")
    return bench_mod.run_bench(
        schemes=schemes, grid=grid,
        paths=int(config.get("paths", 256)),
        trials=int(config.get("trials", 10)),
        hurst=float(config.get("hurst", 0.3)),
        seed=int(config.get("seed", 0)))


# ----------------------------------------------------------------------
# argument parsing
# ----------------------------------------------------------------------

def _add_model_flags(parser) -> None:
    parser.add_argument("--model", choices=("rbergomi", "gbergomi",
                                            "rheston_gjrs"))
    for flag in ("xi0", "nu", "hurst", "rho", "spot", "eta", "kappa",
                 "theta", "xi", "y0"):
        parser.add_argument(f"--{flag}", type=float)
    parser.add_argument("--beta-decay", type=float, dest="beta_decay")


def _add_mc_flags(parser) -> None:
    parser.add_argument("--paths", type=int)
    parser.add_argument("--steps", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--horizon", type=float)
    parser.add_argument("--scheme", choices=_SIMULATE_SCHEMES[:3])
    parser.add_argument("--method", choices=("fft", "naive"))
    parser.add_argument("--antithetic", action=argparse.BooleanOptionalAction,
                        default=None)
    parser.add_argument("--variance-reduction",
                        choices=("conditional_bs", "none"),
                        dest="variance_reduction")


def _model_overrides(config: dict, args) -> None:
    _set_override(config, "model", "type", args.model)
    for flag in ("xi0", "nu", "hurst", "rho", "spot", "eta", "kappa",
                 "theta", "xi", "y0"):
        _set_override(config, "model", flag, getattr(args, flag))
    _set_override(config, "model", "beta", args.beta_decay)


def _mc_overrides(config: dict, args) -> None:
    for flag in ("paths", "steps", "seed", "horizon", "scheme", "method",
                 "antithetic", "variance_reduction"):
        _set_override(config, "mc", flag, getattr(args, flag))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="roughsim",
        description="Rough-volatility simulation, smiles and tree pricing")
    parser.add_argument("--threads", type=int,
                        help="FFT worker cap (env: ROUGHSIM_THREADS)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate Volterra path sets")
    p.add_argument("--config")
    p.add_argument("--kernel", choices=("rl", "gamma", "powerlaw"))
    p.add_argument("--hurst", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--paths", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--horizon", type=float)
    p.add_argument("--scheme", choices=_SIMULATE_SCHEMES)
    p.add_argument("--method", choices=("fft", "naive"))
    p.add_argument("--format", choices=("csv", "binary"))
    p.add_argument("--prefix")
    p.add_argument("--output-dir", default=".")

    p = sub.add_parser("smile", help="implied-volatility curve via MC")
    p.add_argument("--config")
    _add_model_flags(p)
    _add_mc_flags(p)
    p.add_argument("--strikes", help="comma-separated strike list")
    p.add_argument("--payoff", choices=("call", "put"))
    p.add_argument("--prefix")
    p.add_argument("--output-dir", default=".")

    p = sub.add_parser("price", help="single European contract via MC")
    p.add_argument("--config")
    _add_model_flags(p)
    _add_mc_flags(p)
    p.add_argument("--strike", type=float)
    p.add_argument("--payoff", choices=("call", "put"))

    p = sub.add_parser("american", help="bushy-tree American pricing")
    p.add_argument("--config")
    _add_model_flags(p)
    p.add_argument("--depth", type=int)
    p.add_argument("--rate", type=float)
    p.add_argument("--dividend", type=float)
    p.add_argument("--horizon", type=float)
    p.add_argument("--branching", type=int)
    p.add_argument("--weights", choices=("moment_matched", "left_point"))
    p.add_argument("--strike", type=float)
    p.add_argument("--payoff", choices=("call", "put"))
    p.add_argument("--dump-tree", nargs="?", const="tree.csv",
                   dest="dump_tree", help="level-ordered node CSV (depth<=6)")
    p.add_argument("--output-dir", default=".")

    p = sub.add_parser("validate", help="run the named invariant suites")
    p.add_argument("--config")
    p.add_argument("--hursts", help="comma-separated Hurst grid")
    p.add_argument("--covariance-paths", type=int, dest="covariance_paths")
    p.add_argument("--martingale-paths", type=int, dest="martingale_paths")
    p.add_argument("--suites", help="comma-separated invariant suite names")
    p.add_argument("--corrupt-weight-table", type=float, default=0.0,
                   dest="corrupt",
                   help="fault-injection self-test: scale a weight-table "
                        "entry by (1+x); the run must fail by name")

    p = sub.add_parser("bench", help="median timing table per scheme")
    p.add_argument("--config")
    p.add_argument("--schemes", help="comma-separated scheme list")
    p.add_argument("--grid", help="comma-separated step counts")
    p.add_argument("--paths", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--hurst", type=float)
    return parser


def _assemble_config(args) -> dict:
    config = _load_config_file(args.config) if args.config else {}
    cmd = args.command
    if cmd == "simulate":
        _set_override(config, "kernel", "type", args.kernel)
        _set_override(config, "kernel", "hurst", args.hurst)
        _set_override(config, "kernel", "alpha", args.alpha)
        _set_override(config, "kernel", "beta", args.beta)
        for flag in ("paths", "steps", "seed", "horizon", "scheme", "method"):
            _set_override(config, "mc", flag, getattr(args, flag))
        _set_override(config, "output", "format", args.format)
        _set_override(config, "output", "prefix", args.prefix)
    elif cmd in ("smile", "price"):
        _model_overrides(config, args)
        _mc_overrides(config, args)
        if cmd == "smile":
            if args.strikes is not None:
                config["strikes"] = _parse_floats(args.strikes)
            _set_override(config, "output", "prefix", args.prefix)
        else:
            _set_override(config, None, "strike", args.strike)
        _set_override(config, None, "payoff", args.payoff)
    elif cmd == "american":
        _model_overrides(config, args)
        for flag in ("depth", "rate", "dividend", "horizon", "branching",
                     "weights"):
            _set_override(config, "tree", flag, getattr(args, flag))
        _set_override(config, None, "strike", args.strike)
        _set_override(config, None, "payoff", args.payoff)
        _set_override(config, None, "dump_tree", args.dump_tree)
    elif cmd == "validate":
        if args.hursts is not None:
            config["hursts"] = _parse_floats(args.hursts)
        if args.suites is not None:
            config["suites"] = [s.strip() for s in args.suites.split(",")
                                if s.strip()]
        _set_override(config, None, "covariance_paths", args.covariance_paths)
        _set_override(config, None, "martingale_paths", args.martingale_paths)
    elif cmd == "bench":
        if args.schemes is not None:
            config["schemes"] = [s.strip() for s in args.schemes.split(",")
                                 if s.strip()]
        if args.grid is not None:
            config["grid"] = [int(n) for n in _parse_floats(args.grid)]
        for flag in ("paths", "trials", "seed", "hurst"):
            _set_override(config, None, flag, getattr(args, flag))
    _check_keys(config, _SCHEMAS[cmd], cmd)
    return config


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.threads is not None:
            set_threads(args.threads)
        config = _assemble_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out_dir = Path(getattr(args, "output_dir", "."))
    try:
        if args.command == "simulate":
            report = cmd_simulate(config, out_dir)
        elif args.command == "smile":
            report = cmd_smile(config, out_dir)
        elif args.command == "price":
            report = cmd_price(config, out_dir)
        elif args.command == "american":
            report = cmd_american(config, out_dir)
        elif args.command == "validate":
            report = cmd_validate(config, corrupt=args.corrupt)
        else:
            report = cmd_bench(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    print(json.dumps(report, indent=2, sort_keys=True,
                     default=_json_default))
    if args.command == "validate" and not report["passed"]:
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
