"""Batch command-line surface.

Exit codes: 0 success, 1 property/bound violation, 2 IO/capacity trouble,
64 usage errors. All output is line-oriented UTF-8 so the commands compose
in shell pipelines and CI scripts.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys
from dataclasses import dataclass

from . import construction, family, oracle, primes, verify
from .errors import (
    BoundViolation,
    CapExceeded,
    MultSidonError,
    PreconditionTooSmall,
    PreconditionViolated,
    SieveCapacityError,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_IO = 2
EXIT_USAGE = 64

CONFIG_ENV = "SIDON_CONFIG"
LEMMA4_SWEEP = (56, 64, 100, 137, 255)
ROSSER_SWEEP_LIMIT = 10**6


@dataclass
class Config:
    sieve_capacity: int = 2**31
    k_max: int = 14
    precision_digits: int = 30
    seed: int = 0

    def validate(self) -> None:
        if not 11 <= self.k_max <= 16:
            raise ValueError(f"k_max must be in [11, 16], got {self.k_max}")
        if self.precision_digits < 20:
            raise ValueError(f"precision_digits must be at least 20, got {self.precision_digits}")
        if self.sieve_capacity < 1 << 17:
            raise ValueError("sieve_capacity too small to be useful")

    @classmethod
    def load(cls) -> "Config":
        path = os.environ.get(CONFIG_ENV)
        if not path:
            cfg = cls()
            cfg.validate()
            return cfg
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**{k: int(v) for k, v in data.items()})
        cfg.validate()
        return cfg


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit 64 instead of argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_n(text: str) -> int:
    """Accept a decimal integer or a `2^k` literal."""
    m = re.fullmatch(r"2\^(\d+)", text.strip())
    if m:
        return 1 << int(m.group(1))
    return int(text)


def _parse_n_list(text: str) -> list[int]:
    return [parse_n(part) for part in text.split(",") if part.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="multsidon", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="build levels and write the sequence JSON")
    p_build.add_argument("--k-min", type=int, default=construction.K_MIN)
    p_build.add_argument("--k-max", type=int, required=True)
    p_build.add_argument("--out", required=True)
    p_build.set_defaults(func=cmd_build)

    p_verify = sub.add_parser("verify", help="Sidon-check a sequence JSON file")
    p_verify.add_argument("--in", dest="in_path", required=True)
    p_verify.set_defaults(func=cmd_verify)

    p_profile = sub.add_parser("profile", help="certify the density bound at given n")
    p_profile.add_argument("--n", type=_parse_n_list, required=True, help="comma-separated; 2^k literals allowed")
    p_profile.set_defaults(func=cmd_profile)

    p_gn = sub.add_parser("gn", help="exact maximum Sidon subset of [n]")
    p_gn.add_argument("--n", type=int, required=True)
    p_gn.set_defaults(func=cmd_gn)

    p_lemma = sub.add_parser("lemma", help="run a full property suite")
    p_lemma.add_argument("--which", type=int, choices=(1, 4, 5), required=True)
    p_lemma.set_defaults(func=cmd_lemma)
    return parser


def cmd_build(args, cfg: Config) -> int:
    if not construction.K_MIN <= args.k_min <= args.k_max <= cfg.k_max:
        print(
            f"error: need {construction.K_MIN} <= k-min <= k-max <= {cfg.k_max} (configured cap)",
            file=sys.stderr,
        )
        return EXIT_USAGE
    levels = tuple(
        construction.build_level(k, cfg.sieve_capacity) for k in range(args.k_min, args.k_max + 1)
    )
    seq = construction.SidonSequence(k_max=args.k_max, levels=levels, k_min=args.k_min)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(seq.to_json_dict(), fh, separators=(",", ":"))
    return EXIT_OK


def cmd_verify(args, cfg: Config) -> int:
    try:
        with open(args.in_path, encoding="utf-8") as fh:
            data = json.load(fh)
        seq = construction.SidonSequence.from_json_dict(data)
        members = construction.sequence_check_set(seq, cfg.sieve_capacity)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: malformed sequence input: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        result = verify.is_multiplicative_sidon(members)
    except ValueError as exc:
        print(f"error: malformed sequence input: {exc}", file=sys.stderr)
        return EXIT_IO
    if result.is_sidon:
        print("SIDON")
        return EXIT_OK
    print("VIOLATION {} {} {} {}".format(*result.witness))
    return EXIT_VIOLATION


def cmd_profile(args, cfg: Config) -> int:
    for n in args.n:
        if n < construction.MIN_PROFILE_N:
            print(f"error: n={n} is below 2^44", file=sys.stderr)
            return EXIT_USAGE
        if construction.level_bounds(n) > cfg.k_max:
            print(f"error: n={n} needs level {construction.level_bounds(n)} > cap {cfg.k_max}", file=sys.stderr)
            return EXIT_USAGE
    try:
        rows = construction.density_profile(
            args.n, cfg.sieve_capacity, cfg.k_max, cfg.precision_digits
        )
    except BoundViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    print(construction.density_csv(rows))
    return EXIT_OK


def cmd_gn(args, cfg: Config) -> int:
    if not 1 <= args.n <= oracle.MAX_EXACT_N:
        print(f"error: n must be in [1, {oracle.MAX_EXACT_N}]", file=sys.stderr)
        return EXIT_USAGE
    res = oracle.max_sidon_subset(args.n)
    print(f"{res.n},{res.g},{{{','.join(str(v) for v in res.witness)}}}")
    return EXIT_OK


def cmd_lemma(args, cfg: Config) -> int:
    if args.which == 1:
        failures = verify.lemma1_suite(count=500, seed=cfg.seed)
        print(f"lemma1: 500 rectangle-free incidence graphs, failures={len(failures)}")
        return EXIT_OK if not failures else EXIT_VIOLATION
    if args.which == 4:
        ok = True
        for s in LEMMA4_SWEEP:
            fam = family.build_family(range(1, s + 1))
            checks = (
                family.verify_intersection_bound(fam) is True,
                family.verify_rectangle_free(fam) is True,
                family.verify_size_bound(fam),
            )
            ok &= all(checks)
            print(
                f"lemma4: s={s} p={fam.p} alpha={fam.alpha} quads={len(fam)} "
                f"intersections={'ok' if checks[0] else 'FAIL'} "
                f"rectangles={'ok' if checks[1] else 'FAIL'} "
                f"size={'ok' if checks[2] else 'FAIL'}"
            )
        return EXIT_OK if ok else EXIT_VIOLATION
    failures = primes.rosser_sweep(ROSSER_SWEEP_LIMIT, cfg.sieve_capacity)
    print(f"lemma5: rosser sweep x in [2, {ROSSER_SWEEP_LIMIT}], failures={failures.size}")
    return EXIT_OK if failures.size == 0 else EXIT_VIOLATION


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = Config.load()
    except (OSError, ValueError) as exc:
        print(f"error: bad config: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        return args.func(args, cfg)
    except (PreconditionTooSmall, CapExceeded, PreconditionViolated) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BoundViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (SieveCapacityError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except MultSidonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
