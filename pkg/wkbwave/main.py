"""
Command-line entry point for wkbwave

    python -m wkbwave eigen|propagate|lorentz|validate --config <path> --out <dir>

Exit codes: 0 success, 2 configuration / validation error, 3 solver failure
"""
import argparse
import contextlib
import logging
import sys
from pathlib import Path
from typing import List, Optional

import yaml
from pydantic import ValidationError
from threadpoolctl import threadpool_limits

from wkbwave.commands import eigen, lorentz, propagate, validate
from wkbwave.config import settings
from wkbwave.exceptions import ConfigError, NonMonotone, OutOfWindow, WkbWaveError
from wkbwave.schemas.experiment import load_config

logger = logging.getLogger(__name__)

COMMANDS = {
    "eigen": eigen.run,
    "propagate": propagate.run,
    "lorentz": lorentz.run,
    "validate": validate.run,
}

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.app_name,
        description="WKB and spectral wave propagation in separable dispersive media",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.app_version}")
    parser.add_argument("command", choices=sorted(COMMANDS), help="experiment to run")
    parser.add_argument("--config", required=True, help="YAML experiment file")
    parser.add_argument("--out", default=None, help="output directory (default: output.directory or .)")
    parser.add_argument("--log-level", default=None, help="override WKBWAVE_LOG_LEVEL")
    return parser


def configure_logging(level: Optional[str] = None) -> None:
    logging.basicConfig(
        level=(level or settings.log_level).upper(),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    )


def _thread_cap():
    if settings.max_threads is None:
        return contextlib.nullcontext()
    return threadpool_limits(limits=settings.max_threads)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)

    try:
        config = load_config(args.config)
        out = Path(args.out or config.output.directory or ".")
        with _thread_cap():
            COMMANDS[args.command](config, out)
    except (ConfigError, ValidationError, yaml.YAMLError, NonMonotone, OutOfWindow, ValueError) as e:
        logger.error(f"{args.command}: configuration rejected: {e}")
        return EXIT_CONFIG
    except (WkbWaveError, ArithmeticError) as e:
        logger.error(f"{args.command}: solver failure: {e}")
        return EXIT_SOLVER
    except OSError as e:
        logger.error(f"{args.command}: cannot read or write: {e}")
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
