"""Command-line entry point: ``ringshaper run|sweep|bounds|verify``.

Exit codes: 0 success, 2 invalid config, 3 numerical resolution failure,
4 file-system error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import scenario
from .bounds import bounds_report
from .errors import ConfigurationError, DomainError, NormalizationError, ResolutionError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RESOLUTION = 3
EXIT_IO = 4

log = logging.getLogger("ringshaper")


def _parse_values(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigurationError(f"--values must be comma-separated numbers, got {text!r}")


def cmd_run(args) -> int:
    config = scenario.load_config(args.config)
    result = scenario.run_scenario(config)
    manifest = scenario.emit(result, args.out)
    s = result.summary
    print(f"I_stationary/||G|| = {s['I_stationary_normalized']:.6g}  "
          f"I_gs/||G|| = {s['I_gs_normalized']:.6g}  regime = {s['regime']}")
    print(f"manifest {manifest} sha256 {scenario.manifest_hash(manifest)}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = scenario.load_config(args.config)
    values = _parse_values(args.values) if args.values else None
    results = scenario.sweep(config, args.param, values)
    manifest = scenario.emit_sweep(results, args.out)
    for res in results:
        sp, s = res.sweep_point, res.summary
        print(f"{sp['param']}={sp['value']:g}  I_sp/||G||={s['I_stationary_normalized']:.6g}  "
              f"I_gs/||G||={s['I_gs_normalized']:.6g}  master_lower/||G||="
              f"{res.report.master_lower / s['G_norm']:.6g}")
    print(f"manifest {manifest} sha256 {scenario.manifest_hash(manifest)}")
    return EXIT_OK


def cmd_bounds(args) -> int:
    config = scenario.load_config(args.config)
    P = config.problem()
    report = bounds_report(P.G, P.g_profile, P.params)
    out = {"G_norm": P.G.norm(), "bounds": report.to_dict()}
    text = json.dumps(out, indent=2, sort_keys=True)
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            raise OSError(f"cannot write {args.out}: {exc}") from exc
    print(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    config = scenario.load_config(args.config)
    v = scenario.verify(args.phase, config)
    if v.stored is None:
        print(f"I = {v.recomputed!r} (no stored value to compare)")
        return EXIT_OK
    print(f"I recomputed = {v.recomputed!r}  stored = {v.stored!r}  relative error = {v.relative_error:.3g}")
    if not v.ok:
        log.error("stored and recomputed I differ by more than 1e-12")
        return EXIT_RESOLUTION
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ringshaper", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="design one scenario and write tables")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="ringshaper-out")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run a parameter sweep")
    p.add_argument("--config", required=True)
    p.add_argument("--param", help="swept key, e.g. WT_prime_m (default: [sweep] param)")
    p.add_argument("--values", help="comma-separated values (default: [sweep] values)")
    p.add_argument("--out", default="ringshaper-sweep")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bounds", help="report lower bounds without solving")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="recompute I from a stored phase table")
    p.add_argument("--phase", required=True)
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, DomainError) as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except (ResolutionError, NormalizationError) as exc:
        log.error("resolution error: %s", exc)
        return EXIT_RESOLUTION
    except OSError as exc:
        log.error("io error: %s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
