"""Command-line surface: key generation, balise programming and
verification, and scenario execution.

Exit codes are a stable scripting contract: 0 success, 1 verification
failure, 2 input error, 3 simulation timeout.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import glob
import json
import os
import sys

from . import auth, codec
from .sim import deployment, scenario

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_INPUT_ERROR = 2
EXIT_TIMEOUT = 3


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_INPUT_ERROR


def _cmd_keygen(args: argparse.Namespace) -> int:
    keystore = auth.new_keystore(seed=args.seed)
    try:
        auth.save_keystore(keystore, args.out)
    except OSError as exc:
        return _fail(f"cannot write keystore: {exc}")
    print(args.out)
    return EXIT_OK


def _cmd_program(args: argparse.Namespace) -> int:
    fmt = codec.FORMATS[args.format]
    try:
        user = deployment.pack_payload(args.id, args.kind, args.loc, fmt)
        if args.mode == deployment.AUTH_AUTHENTICATED:
            if args.keystore is None:
                return _fail("authenticated mode requires --keystore")
            keystore = auth.load_keystore(args.keystore)
            bits = auth.encode_authenticated(
                user, keystore.keys_for(args.id), fmt)
        else:
            sb = int(args.sb, 0)
            bits = codec.encode_legacy(user, sb, fmt)
        deployment.save_telegram(args.out, bits, fmt)
    except (codec.CodecError, ValueError, OSError) as exc:
        return _fail(str(exc))
    print(args.out)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    try:
        keystore = auth.load_keystore(args.keystore)
        fmt, bits = deployment.load_telegram(args.telegram)
    except (OSError, ValueError) as exc:
        return _fail(str(exc))

    report = {"decode": "fail", "auth": "fail", "fields": None}
    code = EXIT_VERIFY_FAIL
    try:
        user = auth.verify_and_decode(
            bits * 3, keystore.keys_for(args.id), fmt)
        balise_id, kind, loc = deployment.parse_payload(user)
        report = {
            "decode": "ok",
            "auth": "pass",
            "fields": {"id": balise_id, "kind": kind, "loc_m": loc},
        }
        code = EXIT_OK
    except auth.AuthFailure:
        report["decode"] = "ok"  # telegram aligned; tag did not match
    except codec.CodecError:
        pass
    print(json.dumps(report))
    return code


def _run_one(config_path: str, out_dir: str,
             csv_name: str, summary_name: str) -> tuple[str, float | None, int, str]:
    """Run one scenario; returns (name, stop_error, exit_code, message)."""
    name = os.path.splitext(os.path.basename(config_path))[0]
    try:
        cfg = scenario.load_config(config_path)
        result = scenario.run_scenario(cfg)
    except scenario.SimTimeout as exc:
        return name, None, EXIT_TIMEOUT, str(exc)
    except (scenario.ConfigError, OSError, ValueError) as exc:
        return name, None, EXIT_INPUT_ERROR, str(exc)
    os.makedirs(out_dir, exist_ok=True)
    scenario.write_trajectory_csv(result, os.path.join(out_dir, csv_name))
    scenario.write_summary(result, os.path.join(out_dir, summary_name))
    return name, result.stop_error, EXIT_OK, ""


def _cmd_simulate(args: argparse.Namespace) -> int:
    if args.batch is None and args.config is None:
        return _fail("either a config path or --batch is required")

    if args.batch is None:
        name, err, code, message = _run_one(
            args.config, args.out, args.csv, args.summary)
        if code != EXIT_OK:
            print(f"error: {message}", file=sys.stderr)
            return code
        print(f"{err:.6f}")
        return EXIT_OK

    configs = sorted(glob.glob(os.path.join(args.batch, "*.json")))
    if not configs:
        return _fail(f"no scenario configs in {args.batch}")
    jobs = [
        (path, os.path.join(args.out,
                            os.path.splitext(os.path.basename(path))[0]),
         "trajectory.csv", "summary.json")
        for path in configs
    ]
    workers = min(len(jobs), os.cpu_count() or 1)
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_run_one, *zip(*jobs)))
    worst = EXIT_OK
    for name, err, code, message in results:
        if code == EXIT_OK:
            print(f"{name}\t{err:.6f}")
        else:
            print(f"{name}\terror: {message}", file=sys.stderr)
            worst = max(worst, code)
    return worst


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="balisim",
        description="Balise telegram codec, authentication, and stop-control "
                    "simulation tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a keystore file")
    p.add_argument("--out", required=True, help="keystore output path")
    p.add_argument("--seed", type=int, default=None,
                   help="deterministic test seed (omit for a random key)")
    p.set_defaults(func=_cmd_keygen)

    p = sub.add_parser("program", help="encode a telegram file for a balise")
    p.add_argument("--id", type=int, required=True, help="balise id (14-bit)")
    p.add_argument("--kind", choices=[deployment.KIND_FIXED,
                                      deployment.KIND_CONTROLLED],
                   default=deployment.KIND_FIXED)
    p.add_argument("--loc", type=float, required=True,
                   help="reported location in meters")
    p.add_argument("--format", choices=sorted(codec.FORMATS),
                   default="long")
    p.add_argument("--mode", choices=[deployment.AUTH_LEGACY,
                                      deployment.AUTH_AUTHENTICATED],
                   default=deployment.AUTH_AUTHENTICATED)
    p.add_argument("--keystore", help="keystore path (authenticated mode)")
    p.add_argument("--sb", default=hex(deployment.LEGACY_SB),
                   help="12-bit scrambling base for legacy mode")
    p.add_argument("--out", required=True, help="telegram output path")
    p.set_defaults(func=_cmd_program)

    p = sub.add_parser("verify", help="decode and authenticate a telegram file")
    p.add_argument("telegram", help="telegram file to check")
    p.add_argument("--keystore", required=True)
    p.add_argument("--id", type=int, required=True,
                   help="claimed balise id to verify against")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("simulate", help="run stop-control scenarios")
    p.add_argument("config", nargs="?", help="scenario config JSON")
    p.add_argument("--batch", help="directory of scenario configs to run")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--csv", default="trajectory.csv",
                   help="trajectory file name")
    p.add_argument("--summary", default="summary.json",
                   help="summary file name")
    p.set_defaults(func=_cmd_simulate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
