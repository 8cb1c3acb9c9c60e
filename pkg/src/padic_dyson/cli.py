"""Command-line interface: haar, snf, simulate, generator, verify."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import PrecisionExhausted, SingularMatrix, TruncationTooSmall, InsufficientSamples
from .linalg import PAdicMatrix, singular_numbers, singular_numbers_minor_oracle
from .padic import is_prime
from .processes import (
    canonical_process,
    generator_A,
    generator_B,
    reflected_walk_simulate,
)
from .sampling import haar_gln_zp
from . import verify as V

SEED_ENV = "PADIC_DYSON_SEED"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    p: int | None = None
    N: int = 2
    t: Fraction | None = None
    precision: int | None = None
    seed: int = 0
    samples: int = 1
    record_times: tuple = ()
    K: int = 6
    output: str | None = None
    format: str = "json"
    threads: int = 1
    extra: dict = field(default_factory=dict)


# ---------------------------------------------------------------- parsing helpers

def parse_rational(text: str) -> Fraction:
    try:
        if "/" in text:
            a, b = text.split("/")
            return Fraction(int(a), int(b))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational a/b, got {text!r}") from None


def parse_times(text: str) -> tuple[float, ...]:
    try:
        times = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad time list {text!r}") from None
    if not times:
        raise argparse.ArgumentTypeError("empty time list")
    return times


def _seed(args) -> int:
    if args.seed is not None:
        seed = args.seed
    elif os.environ.get(SEED_ENV):
        try:
            seed = int(os.environ[SEED_ENV])
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer") from None
    else:
        seed = 0
    if not 0 <= seed < 2**64:
        raise UsageError("seed must be in [0, 2**64)")
    return seed


def _check_prime(p):
    if p is None:
        raise UsageError("--p is required")
    if not is_prime(p):
        raise UsageError(f"p={p} is not prime")


def _check_common(cfg: RunConfig):
    if cfg.N < 1:
        raise UsageError("N must be at least 1")
    if cfg.samples < 1:
        raise UsageError("samples must be at least 1")
    if cfg.threads < 1:
        raise UsageError("threads must be at least 1")
    times = cfg.record_times
    if any(x < 0 for x in times):
        raise UsageError("record times must be nonnegative")
    if any(a > b for a, b in zip(times, times[1:])):
        raise UsageError("record times must be sorted")
    if cfg.t is not None and not 0 < cfg.t < 1:
        raise UsageError("t must lie in (0, 1)")


def _resolve_t(cfg: RunConfig) -> Fraction:
    if cfg.t is not None:
        return cfg.t
    _check_prime(cfg.p)
    return Fraction(1, cfg.p)


def _emit(cfg: RunConfig, text: str):
    if not text.endswith("\n"):
        text += "\n"
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _config(args) -> RunConfig:
    cfg = RunConfig(
        command=args.command,
        p=getattr(args, "p", None),
        N=getattr(args, "n", 2),
        t=getattr(args, "t", None),
        precision=getattr(args, "precision", None),
        seed=_seed(args),
        samples=getattr(args, "samples", 1) or 1,
        record_times=tuple(getattr(args, "times", None) or ()),
        K=getattr(args, "k", 6),
        output=args.output,
        format=getattr(args, "format", "json"),
        threads=getattr(args, "threads", 1),
    )
    _check_common(cfg)
    if cfg.precision is not None and cfg.precision < 1:
        raise UsageError("precision must be at least 1")
    return cfg


# ---------------------------------------------------------------- commands

def cmd_haar(args) -> int:
    cfg = _config(args)
    _check_prime(cfg.p)
    if args.count < 1:
        raise UsageError("count must be at least 1")
    n = cfg.precision or 20
    mats = [haar_gln_zp(cfg.seed, i, cfg.p, cfg.N, n).to_json() for i in range(args.count)]
    _emit(cfg, _dumps(mats))
    return 0


def _read_matrix(path: str, p, precision) -> PAdicMatrix:
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        return PAdicMatrix.from_json(data)
    if isinstance(data, list):
        _check_prime(p)
        return PAdicMatrix.from_integers(data, p, precision or 20)
    raise UsageError("matrix file must hold a matrix object or a list of integer rows")


def cmd_snf(args) -> int:
    cfg = _config(args)
    if cfg.p is not None:
        _check_prime(cfg.p)
    try:
        A = _read_matrix(args.input, cfg.p, cfg.precision)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read matrix: {exc}") from None
    sn = singular_numbers(A)
    text = ",".join(map(str, sn))
    if args.oracle:
        orc = singular_numbers_minor_oracle(A)
        text = f"snf: {text}\noracle: {','.join(map(str, orc))}\nagree: {str(sn == orc).lower()}"
    _emit(cfg, text)
    return 0


def _simulate_one(job):
    which, N, param, times, seed, s, precision = job
    if which == "matrix":
        return canonical_process(N, param, times, seed, sample=s, precision=precision)
    return reflected_walk_simulate(N, param, times, seed, sample=s)


def cmd_simulate(args) -> int:
    cfg = _config(args)
    if args.which == "matrix":
        _check_prime(cfg.p)
        jobs = [("matrix", cfg.N, cfg.p, cfg.record_times, cfg.seed, s, cfg.precision) for s in range(cfg.samples)]
    else:
        t = _resolve_t(cfg)
        jobs = [("reflected", cfg.N, t, cfg.record_times, cfg.seed, s, None) for s in range(cfg.samples)]
    trajs = V.parallel_map(_simulate_one, jobs, cfg.threads)
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, delimiter=";", lineterminator="\n")
        w.writerow(["sample", "time", "signature"])
        for s, tr in enumerate(trajs):
            for tm, sig in zip(cfg.record_times, tr.states_at(cfg.record_times)):
                w.writerow([s, repr(tm), ",".join(map(str, sig))])
        _emit(cfg, buf.getvalue())
    else:
        out = {
            "process": args.which,
            "N": cfg.N,
            "times": list(cfg.record_times),
            "seed": cfg.seed,
            "trajectories": [tr.to_json() for tr in trajs],
            "states": [[list(x) for x in tr.states_at(cfg.record_times)] for tr in trajs],
        }
        _emit(cfg, _dumps(out))
    return 0


def cmd_generator(args) -> int:
    cfg = _config(args)
    if cfg.K < 0:
        raise UsageError("K must be nonnegative")
    if args.which == "A":
        _check_prime(cfg.p)
        G = generator_A(cfg.N, cfg.p, cfg.K, literal_prefactor=args.inject_prefactor_bug)
    else:
        G = generator_B(cfg.N, _resolve_t(cfg), cfg.K)
    _emit(cfg, G.to_csv())
    return 0


SUITES_ALL = ("lemma", "one-jump", "generators", "reflection", "theorem")


def _run_suite(suite: str, cfg: RunConfig, args) -> list:
    p, N, seed, threads = cfg.p, cfg.N, cfg.seed, cfg.threads
    alpha, pool = args.alpha, args.min_expected
    if suite == "lemma":
        return [V.verify_lemma(N, p, args.instances, V.derive_seed(seed, "lemma"), threads=threads)]
    if suite == "one-jump":
        return [V.verify_one_jump(N, p, cfg.K, cfg.samples, V.derive_seed(seed, "one-jump"), threads=threads)]
    if suite == "generators":
        return [V.verify_generators(N, p, cfg.K, literal_prefactor=args.inject_prefactor_bug)]
    if suite == "reflection":
        t = _resolve_t(cfg)
        return [V.verify_reflection_equivalence(N, t, args.tau, cfg.samples, V.derive_seed(seed, "reflection"),
                                                alpha=alpha, min_expected=pool, threads=threads)]
    if suite == "theorem":
        times = cfg.record_times or (0.5, 1.0)
        return [V.verify_theorem_multitime(N, p, times, cfg.samples, V.derive_seed(seed, "theorem"),
                                           alpha=alpha, min_expected=pool, threads=threads)]
    raise UsageError(f"unknown suite {suite}")


def cmd_verify(args) -> int:
    if args.samples is None:
        args.samples = 100_000
    cfg = _config(args)
    needs_p = args.suite != "reflection" or cfg.t is None
    if needs_p:
        _check_prime(cfg.p)
    if cfg.K < 0:
        raise UsageError("K must be nonnegative")
    suites = SUITES_ALL if args.suite == "all" else (args.suite,)
    reports = []
    for suite in suites:
        reports.extend(_run_suite(suite, cfg, args))
    ok = all(r.passed for r in reports)
    for r in reports:
        print(r.summary(), file=sys.stderr)
    _emit(cfg, _dumps({"suite": args.suite, "pass": ok, "reports": [r.to_json() for r in reports]}))
    return 0 if ok else 1


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="padic-dyson", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, samples=True):
        sp.add_argument("--p", type=int, help="prime")
        sp.add_argument("--n", type=int, default=2, help="matrix size / number of coordinates N")
        sp.add_argument("--seed", type=int, help=f"64-bit seed (fallback: ${SEED_ENV}, then 0)")
        sp.add_argument("--precision", type=int, help="p-adic digits (default: automatic)")
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--output", "-o", help="write to this file instead of stdout")
        if samples:
            sp.add_argument("--samples", type=int, default=None)

    sp = sub.add_parser("haar", help="sample Haar matrices in GL_N(Z_p)")
    common(sp, samples=False)
    sp.add_argument("--count", type=int, default=1)
    sp.set_defaults(func=cmd_haar)

    sp = sub.add_parser("snf", help="singular numbers of a matrix read from a JSON file")
    common(sp, samples=False)
    sp.add_argument("input")
    sp.add_argument("--oracle", action="store_true", help="also run the minor-determinant oracle")
    sp.set_defaults(func=cmd_snf)

    sp = sub.add_parser("simulate", help="simulate the matrix walk or the reflected walk")
    sp.add_argument("which", choices=("matrix", "reflected"))
    common(sp)
    sp.add_argument("--t", type=parse_rational, help="rational t in (0,1); default 1/p")
    sp.add_argument("--times", type=parse_times, required=True, help="comma-separated record times")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("generator", help="exact generator rows as CSV")
    sp.add_argument("which", choices=("A", "B"))
    common(sp, samples=False)
    sp.add_argument("--t", type=parse_rational)
    sp.add_argument("--k", type=int, default=6, help="truncate at |kappa| <= K")
    sp.add_argument("--inject-prefactor-bug", action="store_true", help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_generator)

    sp = sub.add_parser("verify", help="run verification suites; exit 0 iff all pass")
    sp.add_argument("suite", choices=SUITES_ALL + ("all",))
    common(sp)
    sp.add_argument("--t", type=parse_rational, help="reflection suite only")
    sp.add_argument("--k", type=int, default=6)
    sp.add_argument("--times", type=parse_times, help="theorem suite record times (default 0.5,1.0)")
    sp.add_argument("--tau", type=float, default=2.0, help="reflection suite time")
    sp.add_argument("--instances", type=int, default=10_000, help="lemma suite instance count")
    sp.add_argument("--alpha", type=float, default=V.ALPHA)
    sp.add_argument("--min-expected", type=float, default=V.MIN_EXPECTED)
    sp.add_argument("--inject-prefactor-bug", action="store_true", help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (PrecisionExhausted, SingularMatrix, TruncationTooSmall, InsufficientSamples, OSError) as exc:
        print(f"{parser.prog} {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
