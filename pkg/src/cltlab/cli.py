"""Command-line front end: seeded sampling, verification suites, moment reports.

Exit codes: 0 success / all checks passed, 1 check failure, 2 bad
configuration, 3 internal error (e.g. the stabilization cap).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .config import (
    ConfigError,
    ProcessConfig,
    StabilizationCapError,
    block_factor_for_order,
)
from . import measures, stats, stationary
from .rng import RandomSource
from .verify import run_suite

EXIT_OK = 0
EXIT_CHECK_FAILURE = 1
EXIT_CONFIG = 2
EXIT_INTERNAL = 3


def _window(text: str) -> tuple[int, int]:
    try:
        lo_s, hi_s = text.split(":")
        lo, hi = int(lo_s), int(hi_s)
    except ValueError:
        raise ConfigError(f"window must be LO:HI, got {text!r}") from None
    if lo > hi:
        raise ConfigError(f"window must have lo <= hi, got {text!r}")
    return lo, hi


def _default_seed() -> int:
    env = os.environ.get("CLTLAB_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"CLTLAB_SEED must be an integer, got {env!r}") from None
    return 0


def _add_common(p: argparse.ArgumentParser):
    g = p.add_mutually_exclusive_group()
    g.add_argument(
        "--independence-order",
        "-N",
        type=int,
        default=None,
        metavar="N",
        help="requested independence order; picks the smallest usable block factor",
    )
    g.add_argument("--L", type=int, default=None, help="block factor (even, >= 6)")
    p.add_argument(
        "--seed",
        type=int,
        default=None,
        help="master seed (default: $CLTLAB_SEED if set, else 0)",
    )
    p.add_argument(
        "--replicates",
        type=int,
        default=None,
        help="number of replicates (checks with larger built-in minimums keep them)",
    )
    p.add_argument(
        "--window",
        type=_window,
        default=(1, 30),
        metavar="LO:HI",
        help="integer window of the process (default 1:30)",
    )
    p.add_argument("--format", choices=("csv", "json"), default=None, help="output format")
    p.add_argument("--threads", type=int, default=1, help="worker threads across replicates")


def _resolve(args) -> tuple[ProcessConfig, int, int | None]:
    if args.L is not None:
        L = args.L
    elif args.independence_order is not None:
        L = block_factor_for_order(args.independence_order)
    else:
        L = 6
    cfg = ProcessConfig(L=L)
    seed = args.seed if args.seed is not None else _default_seed()
    return cfg, seed, args.independence_order


def _fmt17(x: float) -> str:
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------


def cmd_sample(args) -> int:
    cfg, seed, order = _resolve(args)
    lo, hi = args.window
    count = args.replicates if args.replicates is not None else 10**5
    if count < 1:
        raise ConfigError(f"replicates must be >= 1, got {count}")
    values = stationary.sample_window_batch(lo, hi, seed, count, cfg=cfg)
    header = {
        "command": "sample",
        "L": cfg.L,
        "independence_order": order,
        "seed": seed,
        "window": f"{lo}:{hi}",
        "replicates": count,
        "threads": args.threads,
    }
    out = sys.stdout
    if (args.format or "csv") == "csv":
        items = " ".join(f"{k}={v}" for k, v in header.items() if v is not None)
        out.write(f"# {items}\n")
        out.write("replicate,k,x\n")
        ks = range(lo, hi + 1)
        for r in range(count):
            row = values[r]
            for i, k in enumerate(ks):
                out.write(f"{r},{k},{_fmt17(row[i])}\n")
    else:
        rows = [
            [r, k, float(values[r, k - lo])]
            for r in range(count)
            for k in range(lo, hi + 1)
        ]
        json.dump({"config": header, "rows": rows}, out, indent=2)
        out.write("\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg, seed, _ = _resolve(args)
    reports = run_suite(
        args.suite, seed=seed, replicates=args.replicates, cfg=cfg, threads=args.threads
    )
    ok = all(r.passed for r in reports)
    doc = {
        "command": "verify",
        "suite": args.suite,
        "seed": seed,
        "L": cfg.L,
        "passed": ok,
        "suites": [r.as_dict() for r in reports],
    }
    if (args.format or "json") == "csv":
        sys.stdout.write("suite,check,passed,statistic,threshold,count\n")
        for r in reports:
            for c in r.checks:
                sys.stdout.write(
                    f"{r.suite},{c.name},{int(c.passed)},{_fmt17(c.statistic)},"
                    f"{_fmt17(c.threshold)},{c.count}\n"
                )
    else:
        json.dump(doc, sys.stdout, indent=2)
        sys.stdout.write("\n")
    return EXIT_OK if ok else EXIT_CHECK_FAILURE


def _moments_reference(level: str, power: int, cfg: ProcessConfig, args) -> tuple:
    """Analytic reference for the requested moment, when one exists."""
    L = cfg.L
    if power % 2 == 1:
        return 0.0, "odd moments vanish by sign symmetry"
    if level == "mu_n":
        width = L**args.depth
        if power <= L - 1:
            return (
                stats.iid_uniform_sum_moment(width, power),
                "equals the iid value below order L",
            )
        if args.depth == 1:
            return stats.mu1_sum_moment(power, L), "exact level-1 block moment"
        return None, "no closed form at this depth and order"
    if level == "blocks":
        width = args.num_blocks * L**args.block_level
        norm = float(width) ** (power / 2.0)
        if power <= L - 1:
            return (
                stats.iid_uniform_sum_moment(width, power) / norm,
                "equals the iid value below order L",
            )
        if args.block_level == 1 and args.num_blocks == 2 and power <= 6:
            return (
                stats.two_block_sum_moment(power, L) / norm,
                "exact two-block moment",
            )
        return None, "no closed form for this block layout and order"
    # stationary
    n = args.window[1] - args.window[0] + 1
    if power == 2:
        return 1.0, "normalized variance is exactly 1"
    if power <= L - 1:
        return (
            stats.iid_uniform_sum_moment(n, power) / float(n) ** (power / 2.0),
            "equals the iid value below order L",
        )
    ref = stats.iid_uniform_sum_moment(n, power) / float(n) ** (power / 2.0)
    if power == L:
        return ref, "iid reference; the process sits strictly below it at order L"
    return ref, "iid reference; equality is not guaranteed above order L-1"


def cmd_moments(args) -> int:
    cfg, seed, _ = _resolve(args)
    power = int(args.power)
    if power < 1 or power > 8:
        raise ConfigError(f"power must be in 1..8, got {power}")
    count = args.replicates if args.replicates is not None else 10**5
    rng = RandomSource(seed, "cli-moments")
    if args.level == "mu_n":
        Y = measures.sample_mu(args.depth, rng, size=count, cfg=cfg)
        samples = Y.sum(axis=1)
        norm = 1.0
    elif args.level == "blocks":
        B = measures.sample_block_sequence(
            args.block_level, args.num_blocks, rng, size=count, cfg=cfg
        )
        width = B.shape[1]
        samples = B.sum(axis=1)
        norm = math.sqrt(width)
        samples = samples / norm
    else:
        lo, hi = args.window
        X = stationary.sample_window_batch(lo, hi, seed, count, cfg=cfg)
        samples = X.sum(axis=1) / math.sqrt(hi - lo + 1)
    est = stats.estimate_moment(samples, power)
    reference, kind = _moments_reference(args.level, power, cfg, args)
    doc = {
        "command": "moments",
        "level": args.level,
        "power": power,
        "seed": seed,
        "L": cfg.L,
        "replicates": count,
        "normalized": args.level != "mu_n",
        "estimate": {
            "value": est.value,
            "std_error": est.std_error,
            "count": est.count,
        },
        "reference": reference,
        "reference_kind": kind,
    }
    if args.level == "mu_n":
        doc["depth"] = args.depth
    if args.level == "blocks":
        doc["block_level"] = args.block_level
        doc["num_blocks"] = args.num_blocks
    if args.level == "stationary":
        doc["window"] = f"{args.window[0]}:{args.window[1]}"
    if (args.format or "json") == "csv":
        sys.stdout.write("level,power,value,std_error,count,reference\n")
        ref = "" if reference is None else _fmt17(reference)
        sys.stdout.write(
            f"{args.level},{power},{_fmt17(est.value)},{_fmt17(est.std_error)},"
            f"{est.count},{ref}\n"
        )
    else:
        json.dump(doc, sys.stdout, indent=2)
        sys.stdout.write("\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cltlab",
        description=(
            "Sample a strictly stationary, (L-1)-tuplewise independent "
            "sign-flip process and verify its distributional properties."
        ),
    )
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("sample", help="emit replicate,k,x rows for window samples")
    _add_common(ps)
    ps.set_defaults(fn=cmd_sample)

    pv = sub.add_parser("verify", help="run a named verification suite")
    _add_common(pv)
    pv.add_argument(
        "--suite",
        default="all",
        choices=("nu", "transforms", "mu", "stationary", "clt", "all"),
        help="which suite to run",
    )
    pv.set_defaults(fn=cmd_verify)

    pm = sub.add_parser("moments", help="estimate a sum moment with its reference")
    _add_common(pm)
    pm.add_argument(
        "--level",
        required=True,
        choices=("mu_n", "blocks", "stationary"),
        help="which construction to sample",
    )
    pm.add_argument("--power", type=int, required=True, help="moment order (1..8)")
    pm.add_argument("--depth", type=int, default=1, help="recursion depth for mu_n")
    pm.add_argument("--block-level", type=int, default=1, help="block depth for blocks")
    pm.add_argument("--num-blocks", type=int, default=2, help="blocks in the window")
    pm.set_defaults(fn=cmd_moments)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"cltlab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StabilizationCapError as exc:
        print(f"cltlab: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except BrokenPipeError:
        return EXIT_OK
    except Exception as exc:  # noqa: BLE001 - report, exit 3 per contract
        print(f"cltlab: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
