"""Command-line entry point: run configs, build figure data, run the gate."""

from __future__ import annotations

import argparse
import json
import sys

from . import acceptance, scenarios, transport


def _add_shared_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--out", metavar="DIR",
                        help="output directory (overrides the config)")
    parser.add_argument("--tol", type=float, metavar="TOL",
                        help="quadrature tolerance override")
    parser.add_argument("--threads", type=int, metavar="N",
                        help="worker threads; output is identical for any value")
    parser.add_argument("--stats", choices=(transport.STATS_FD,
                                            transport.STATS_BOLTZMANN),
                        help="reservoir statistics override")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fermichain",
        description="Noised bipartite chain: transport, entropy, and exchange "
                    "statistics with CSV output.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the scenario described by a JSON config")
    p_run.add_argument("config", help="path to a JSON config file")
    _add_shared_flags(p_run)

    p_fig = sub.add_parser("figure", help="build the data files for a named scenario")
    p_fig.add_argument("scenario_id", help="one of: %s" % ", ".join(scenarios.SCENARIOS))
    p_fig.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       dest="overrides",
                       help="override a config field (value parsed as JSON "
                            "when possible); repeatable")
    _add_shared_flags(p_fig)

    p_acc = sub.add_parser("accept", help="run the acceptance gate")
    p_acc.add_argument("--only", metavar="CRITERION",
                       help="run a single criterion, e.g. c3")
    p_acc.add_argument("--out", metavar="DIR",
                       help="also write acceptance.csv into DIR")
    return parser


def _apply_flag_overrides(data: dict, args: argparse.Namespace) -> dict:
    if args.out is not None:
        data["out_dir"] = args.out
    if args.tol is not None:
        data["tol"] = args.tol
    if args.threads is not None:
        data["threads"] = args.threads
    if args.stats is not None:
        data["stats"] = args.stats
    return data


def _parse_set_pairs(pairs) -> dict:
    out = {}
    for pair in pairs:
        key, sep, raw = pair.partition("=")
        if not sep or not key:
            raise scenarios.ConfigError(
                "--set needs KEY=VALUE, got '%s'" % pair)
        try:
            out[key] = json.loads(raw)
        except json.JSONDecodeError:
            out[key] = raw  # bare strings like fd need no quoting
    return out


def _run_and_write(data: dict, args: argparse.Namespace) -> int:
    cfg = scenarios.parse_config(_apply_flag_overrides(data, args))
    result = scenarios.run_scenario(cfg)
    paths = scenarios.write_result(result, cfg.out_dir, cfg.sig_digits)
    for path in paths:
        print("wrote %s" % path)
    for report in result.reports:
        print(report.line())
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            with open(args.config, "r", encoding="utf-8") as fh:
                try:
                    data = json.load(fh)
                except json.JSONDecodeError as exc:
                    raise scenarios.ConfigError(
                        "config file is not valid JSON: %s" % exc) from None
            if not isinstance(data, dict):
                raise scenarios.ConfigError("config must be a JSON object")
            return _run_and_write(data, args)
        if args.command == "figure":
            data = {"scenario": args.scenario_id}
            data.update(_parse_set_pairs(args.overrides))
            return _run_and_write(data, args)
        failures = acceptance.run_acceptance(only=args.only, out_dir=args.out)
        return 1 if failures else 0
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except scenarios.ConfigError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
