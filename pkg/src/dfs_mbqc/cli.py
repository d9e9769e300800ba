"""``dfs-mbqc <command> [--config PATH] [--out PATH] [--seed N]``.

Exit codes: 0 success, 1 invalid configuration or input, 2 a check suite failed.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import checks
from .cluster import LatticeSpec
from .core import bloch_coordinates
from .jsonio import kraus_from_json
from .mbqc import chain_channel, run_transfer_chain
from .noise import NoiseSpec
from .tomography import (
    ChannelError,
    analytic_transfer_kraus,
    channel_distance,
    kraus_channel,
    kraus_completeness_error,
    process_tomography,
)

log = logging.getLogger("dfs_mbqc")

EXIT_OK, EXIT_INVALID, EXIT_CHECK_FAILED = 0, 1, 2
SWEEP_GAMMAS = [0.15, 0.5, 1.0, 5.0]


class ConfigError(ValueError):
    pass


def _noise_for(encoding: str, gamma_t: float) -> NoiseSpec:
    kind = "collective_dephasing" if encoding == "dfs" else "independent_dephasing"
    return NoiseSpec(kind, float(gamma_t))


def _write(out: str | None, text: str) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True) + "\n"


def cmd_transfer(cfg: dict, out: str | None, seed: int | None) -> int:
    encoding = cfg.get("encoding", "standard")
    if encoding not in ("standard", "dfs"):
        raise ConfigError(f"unknown encoding {encoding!r}")
    outcomes = cfg.get("outcomes", "forced-zero")
    if outcomes not in ("forced-zero", "random"):
        raise ConfigError(f"outcomes must be 'forced-zero' or 'random', got {outcomes!r}")
    seed = seed if seed is not None else cfg.get("seed", 0)
    record = run_transfer_chain(
        float(cfg.get("theta", 0.0)),
        float(cfg.get("phi", 0.0)),
        NoiseSpec.from_dict(cfg.get("noise", {})),
        encoding,
        int(cfg.get("chain", 3)),
        outcomes,
        rng=np.random.default_rng(seed),
        strategy=cfg.get("strategy", "joint"),
    )
    _write(out, _dump(record.to_dict()))
    return EXIT_OK


def _tomography_channel(cfg: dict, config_dir: Path):
    kind = cfg.get("channel", "standard-chain")
    gamma_t = float(cfg.get("gamma_t", 0.0))
    n = int(cfg.get("chain", 3))
    if kind == "standard-chain":
        return chain_channel(_noise_for("standard", gamma_t), "standard", n), gamma_t
    if kind == "dfs-chain":
        return chain_channel(_noise_for("dfs", gamma_t), "dfs", n), gamma_t
    if kind == "kraus-file":
        path = Path(cfg["kraus_path"])
        path = path if path.is_absolute() else config_dir / path
        kraus = kraus_from_json(json.loads(path.read_text()))
        if kraus_completeness_error(kraus) > 1e-8:
            raise ChannelError("user Kraus set is not trace preserving")
        return kraus_channel(kraus), None
    raise ConfigError(f"unknown channel {kind!r}")


def cmd_tomography(cfg: dict, out: str | None, seed: int | None, config_dir: Path = Path(".")) -> int:
    channel, gamma_t = _tomography_channel(cfg, config_dir)
    result = process_tomography(channel)
    doc = {"channel": cfg.get("channel", "standard-chain"), **result.to_dict()}
    if gamma_t is not None:
        doc["gamma_t"] = gamma_t
    if doc["channel"] == "standard-chain" and int(cfg.get("chain", 3)) == 3:
        doc["distance_to_analytic_kraus"] = channel_distance(
            kraus_channel(result.kraus), kraus_channel(analytic_transfer_kraus(gamma_t))
        )
    _write(out, _dump(doc))
    return EXIT_OK


def _grid(cfg: dict, key: str, default) -> list[float]:
    vals = cfg.get(key, default)
    if isinstance(vals, dict):
        vals = np.linspace(vals["start"], vals["stop"], int(vals["num"]), endpoint=vals.get("endpoint", True))
    vals = [float(v) for v in vals]
    if not vals:
        raise ConfigError(f"grid {key!r} is empty")
    return vals


def sweep_records(cfg: dict, workers: int = 1) -> list[dict]:
    gammas = _grid(cfg, "gamma_t", SWEEP_GAMMAS)
    if any(g < 0 for g in gammas):
        raise ConfigError("gamma_t values must be nonnegative")
    thetas = _grid(cfg, "theta", np.linspace(0, np.pi / 2, 7))
    phis = _grid(cfg, "phi", np.linspace(0, 2 * np.pi, 12, endpoint=False))
    encodings = cfg.get("encodings", ["standard", "dfs"])
    for e in encodings:
        if e not in ("standard", "dfs"):
            raise ConfigError(f"unknown encoding {e!r}")
    avg = {
        (e, g): process_tomography(chain_channel(_noise_for(e, g), e)).average_fidelity
        for e in encodings
        for g in gammas
    }
    points = [(g, e, t, p) for g in gammas for e in encodings for t in thetas for p in phis]

    def run(point):
        g, e, t, p = point
        rec = run_transfer_chain(t, p, _noise_for(e, g), e)
        x, y, z = bloch_coordinates(rec.logical_output)
        return {
            "theta": t,
            "phi": p,
            "gamma_t": g,
            "encoding": e,
            "bloch_x": x,
            "bloch_y": y,
            "bloch_z": z,
            "fidelity": rec.fidelity_vs_ideal,
            "avg_fidelity": avg[(e, g)],
        }

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        return list(pool.map(run, points))


def cmd_bloch_sweep(cfg: dict, out: str | None, seed: int | None, workers: int = 1) -> int:
    records = sweep_records(cfg, workers)
    _write(out, "".join(_dump(r) for r in records))
    return EXIT_OK


def _report(results: list[checks.CheckResult], out: str | None) -> int:
    for r in results:
        print(r.line())
    if out not in (None, "-"):
        Path(out).write_text(_dump({"checks": [r.to_dict() for r in results]}))
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def _stabilizer_results(cfg: dict) -> list[checks.CheckResult]:
    lattices = [LatticeSpec.from_dict(d) for d in cfg["lattices"]] if "lattices" in cfg else checks.DEFAULT_LATTICES
    return checks.stabilizer_suite(lattices, flip_kappa=cfg.get("inject") == "kappa-flip")


def _dfs3_results(cfg: dict, seed: int | None) -> list[checks.CheckResult]:
    seed = seed if seed is not None else cfg.get("seed", 0)
    return checks.dfs3_suite(int(cfg.get("samples", 100)), int(cfg.get("states", 10)), seed)


def cmd_stabilizer_check(cfg, out, seed) -> int:
    return _report(_stabilizer_results(cfg), out)


def cmd_dfs3_check(cfg, out, seed) -> int:
    return _report(_dfs3_results(cfg, seed), out)


def cmd_checks(cfg, out, seed) -> int:
    return _report(_stabilizer_results(cfg) + _dfs3_results(cfg, seed) + checks.readout_table_suite(), out)


COMMANDS = {
    "transfer": cmd_transfer,
    "tomography": cmd_tomography,
    "bloch-sweep": cmd_bloch_sweep,
    "dfs3-check": cmd_dfs3_check,
    "stabilizer-check": cmd_stabilizer_check,
    "checks": cmd_checks,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dfs-mbqc", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="JSON configuration file (defaults apply when omitted)")
    parser.add_argument("--out", help="output path ('-' or omitted: stdout)")
    parser.add_argument("--seed", type=int, help="overrides the config seed")
    parser.add_argument("--workers", type=int, default=1, help="threads for bloch-sweep")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


CONFIG_KEYS = {
    "transfer": {"encoding", "chain", "theta", "phi", "noise", "outcomes", "seed", "strategy"},
    "tomography": {"channel", "gamma_t", "chain", "kraus_path"},
    "bloch-sweep": {"gamma_t", "theta", "phi", "encodings"},
    "dfs3-check": {"samples", "states", "seed"},
    "stabilizer-check": {"lattices", "inject"},
    "checks": {"lattices", "inject", "samples", "states", "seed"},
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    config_dir = Path(".")
    try:
        cfg = {}
        if args.config:
            config_dir = Path(args.config).parent
            cfg = json.loads(Path(args.config).read_text())
            if not isinstance(cfg, dict):
                raise ConfigError("configuration must be a JSON object")
            unknown = set(cfg) - CONFIG_KEYS[args.command]
            if unknown:
                raise ConfigError(f"unknown {args.command} config keys {sorted(unknown)}")
        if args.command == "tomography":
            return cmd_tomography(cfg, args.out, args.seed, config_dir)
        if args.command == "bloch-sweep":
            return cmd_bloch_sweep(cfg, args.out, args.seed, args.workers)
        return COMMANDS[args.command](cfg, args.out, args.seed)
    except (ValueError, KeyError, TypeError, OSError) as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
