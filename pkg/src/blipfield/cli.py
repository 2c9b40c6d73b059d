"""``blipfield`` command line: run a named scenario and write its table."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .core import ConfigError, PreconditionError
from .scenarios import SCENARIOS, load_config, run_scenario

EXIT_OK, EXIT_CONFIG, EXIT_PRECONDITION = 0, 2, 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blipfield", description=__doc__)
    sub = parser.add_subparsers(dest="scenario", required=True)
    for name in SCENARIOS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, help="JSON scenario config")
        p.add_argument("--n", type=int)
        p.add_argument("--length", type=float)
        p.add_argument("--units", choices=("natural", "si"))
        p.add_argument("--t0", type=float)
        p.add_argument("--t1", type=float)
        p.add_argument("--samples", type=int)
        p.add_argument("--beta", type=float)
        p.add_argument("--out", type=str)
        p.add_argument("--format", choices=("csv", "json"))
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    overrides = {k: getattr(args, k) for k in
                 ("n", "length", "units", "t0", "t1", "samples", "beta", "out", "format")}
    try:
        data, base = {}, None
        if args.config is not None:
            try:
                data = json.loads(args.config.read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot load config: {exc}") from exc
            if not isinstance(data, dict):
                raise ConfigError("config must be a JSON object")
            base = args.config.parent
        cfg = load_config(data, overrides, base)
        result, path = run_scenario(args.scenario, cfg)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"{args.scenario}: {len(result.rows)} rows -> {path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
