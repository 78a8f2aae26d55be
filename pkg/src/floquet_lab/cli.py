"""Command line entry point.

Verbs: run, sweep, verify, inspect. Exit codes: 0 ok, 2 config-error,
3 validation-error, 4 numerical-failure. Errors are printed to stderr as
one JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .config import load_config, load_config_file, validate_config
from .errors import ConfigError, NumericalFailure, ValidationError
from .runner import DEFAULT_VERIFY_SEED, RunManifest, run, sweep


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="floquet-lab",
        description="Kicked-system Floquet spectra, dynamics, scans and kernel checks.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output directory (overrides config)")
    common.add_argument("--threads", type=int, default=1, help="parallel sweep workers")
    common.add_argument("--seed", type=int, help="global seed override")

    p_run = sub.add_parser("run", parents=[common], help="execute one experiment config")
    p_run.add_argument("--config", required=True)

    p_sweep = sub.add_parser("sweep", parents=[common], help="execute a sweep config")
    p_sweep.add_argument("--config", required=True)

    p_verify = sub.add_parser("verify", parents=[common],
                              help="run the analytic-kernel verification suite")
    p_verify.add_argument("--config", help="optional verify-type config")

    p_inspect = sub.add_parser("inspect", help="pretty-print a config or manifest")
    p_inspect.add_argument("--config", required=True)
    return parser


def _fail(kind: str, code: int, exc: Exception) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": str(exc)}) + "\n")
    return code


def _print_manifest(manifest: RunManifest):
    sys.stdout.write(json.dumps(manifest.to_dict(), indent=2, sort_keys=True) + "\n")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.verb == "inspect":
            doc = load_config_file(args.config)
            if "experiment" in doc:
                doc = validate_config(doc).raw
            sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
            return 0

        if args.verb == "verify":
            if args.config:
                cfg = load_config(args.config)
                if cfg.experiment_type != "verify":
                    raise ValidationError(
                        "validation-error: verify verb requires a verify-type config"
                    )
            else:
                cfg = validate_config({"experiment": {"type": "verify", "params": {}}})
            manifest = run(cfg, out_dir=args.out or cfg.output_directory,
                           threads=args.threads, seed_override=args.seed)
            _print_manifest(manifest)
            return 0 if manifest.verify_passed else 4

        cfg = load_config(args.config)
        verb = sweep if args.verb == "sweep" else run
        manifest = verb(cfg, out_dir=args.out, threads=args.threads,
                        seed_override=args.seed)
        _print_manifest(manifest)
        if manifest.verify_passed is False:
            return 4
        return 0
    except ConfigError as exc:
        return _fail("config-error", 2, exc)
    except (ValidationError, ValueError) as exc:
        return _fail("validation-error", 3, exc)
    except (NumericalFailure, np.linalg.LinAlgError) as exc:
        return _fail("numerical-failure", 4, exc)


if __name__ == "__main__":
    sys.exit(main())
