"""Batch driver: verification commands, generator cache, structured reports.

Every command is deterministic for a fixed configuration; reports compare
byte-identically across runs.  Exit status is 0 only when every verdict in
the emitted report passes, 1 on a verification failure, and 2 for usage or
configuration errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import __version__
from .brylinski import build_Z_slice, verify_main_theorem
from .exactcore import TPoly
from .heisenberg import FockState
from .rootsys import RootSystemA, exponents_and_degrees
from .tanalog import verify_level1_identity
from .twistedfock import TwistedEngine, pbw_words, pbw_vector
from .walgebra import WGeneratorSet, choose_generators, expected_walg_dim, walg_graded_basis

CACHE_MAGIC = "wbryl-gencache 1"

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


class CacheError(Exception):
    pass


# ---------------------------------------------------------------------------
# generator cache file
# ---------------------------------------------------------------------------

def _mono_key(mono) -> str:
    return ",".join(f"{i}:{n}" for i, n in mono) if mono else "-"


def _parse_mono(text: str):
    if text == "-":
        return ()
    out = []
    for piece in text.split(","):
        i, n = piece.split(":")
        out.append((int(i), int(n)))
    return tuple(out)


def _frac_str(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def cache_body(gens: WGeneratorSet) -> str:
    lines = [CACHE_MAGIC, f"rank {gens.rank}", "degrees " + " ".join(map(str, gens.degrees))]
    for p in range(1, gens.rank + 1):
        state = gens.state(p)
        lines.append(f"generator {p} degree {gens.degree(p)}")
        for mono in sorted(state.terms):
            lines.append(f"term {_mono_key(mono)} {_frac_str(state.terms[mono])}")
        lines.append("end")
    return "\n".join(lines) + "\n"


def cache_checksum(body: str) -> str:
    return hashlib.sha256(body.encode()).hexdigest()


def save_generator_cache(path: Path, gens: WGeneratorSet) -> str:
    body = cache_body(gens)
    digest = cache_checksum(body)
    path.write_text(body + f"checksum {digest}\n")
    return digest


def load_generator_cache(path: Path) -> tuple[WGeneratorSet, str]:
    text = path.read_text()
    lines = text.splitlines()
    if not lines or lines[0] != CACHE_MAGIC:
        raise CacheError("unrecognized cache header")
    if not lines[-1].startswith("checksum "):
        raise CacheError("missing checksum line")
    digest = lines[-1].split(" ", 1)[1]
    body = "\n".join(lines[:-1]) + "\n"
    if cache_checksum(body) != digest:
        raise CacheError("cache checksum mismatch")
    rank = int(lines[1].split(" ", 1)[1])
    degrees = tuple(int(x) for x in lines[2].split(" ")[1:])
    rs = RootSystemA(rank)
    states = []
    idx = 3
    for p in range(1, rank + 1):
        header = lines[idx].split()
        if header[:2] != ["generator", str(p)]:
            raise CacheError(f"expected generator {p} record")
        idx += 1
        terms = {}
        while lines[idx] != "end":
            _, mono_text, frac_text = lines[idx].split(" ")
            num, den = frac_text.split("/")
            terms[_parse_mono(mono_text)] = Fraction(int(num), int(den))
            idx += 1
        idx += 1
        states.append(FockState(rs, rs.zero(), terms))
    return WGeneratorSet(rank, degrees, tuple(states)), digest


def obtain_generators(rank: int, cache: Path | None) -> tuple[WGeneratorSet, str]:
    """Load the generator set from cache if present, else compute (and save)."""
    if cache is not None and cache.exists():
        return load_generator_cache(cache)
    gens = choose_generators(RootSystemA(rank))
    digest = cache_checksum(cache_body(gens))
    if cache is not None:
        save_generator_cache(cache, gens)
    return gens, digest


# ---------------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------------

class Reporter:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def config(self, **fields) -> None:
        if self.fmt == "structured":
            record = {"kind": "config", **fields}
            print(json.dumps(record, sort_keys=True), file=self.stream)
        else:
            text = " ".join(f"{k}={v}" for k, v in sorted(fields.items()))
            print(f"# {text}", file=self.stream)

    def row(self, kind: str, **fields) -> None:
        if self.fmt == "structured":
            record = {"kind": kind, **fields}
            print(json.dumps(record, sort_keys=True), file=self.stream)
        else:
            cells = [kind] + [f"{k}={v}" for k, v in fields.items()]
            print("  ".join(cells), file=self.stream)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_lusztig(args) -> int:
    reporter = Reporter(args.format)
    reporter.config(command="lusztig", rank=args.rank, nmax=args.nmax, version=__version__)
    rows = verify_level1_identity(args.rank, args.nmax)
    failures = 0
    for row in rows:
        verdict = "pass" if row.matches else "fail"
        failures += not row.matches
        reporter.row(
            "lusztig",
            n=row.n,
            d="-",
            expected=str(row.product),
            actual=str(row.lusztig),
            verdict=verdict,
        )
    return EXIT_FAIL if failures else EXIT_PASS


def cmd_verify_identity(args) -> int:
    reporter = Reporter(args.format)
    reporter.config(
        command="verify-identity", rank=args.rank, nmax=args.nmax, version=__version__
    )
    rows = verify_level1_identity(args.rank, args.nmax)
    failures = 0
    for row in rows:
        verdict = "pass" if row.matches else "fail"
        failures += not row.matches
        reporter.row("identity", n=row.n, d="-", expected="equal", actual=verdict, verdict=verdict)
    return EXIT_FAIL if failures else EXIT_PASS


def cmd_wgen(args) -> int:
    reporter = Reporter(args.format)
    cache = Path(args.cache) if args.cache else None
    gens, digest = obtain_generators(args.rank, cache)
    _, degrees = exponents_and_degrees(args.rank)
    check_degree = args.check_degree if args.check_degree is not None else max(degrees)
    reporter.config(
        command="wgen",
        rank=args.rank,
        check_degree=check_degree,
        cache=str(cache) if cache else "-",
        generator_checksum=digest,
        version=__version__,
    )
    rs = RootSystemA(args.rank)
    failures = 0
    for d in range(check_degree + 1):
        actual = len(walg_graded_basis(rs, d))
        expected = expected_walg_dim(args.rank, d)
        verdict = "pass" if actual == expected else "fail"
        failures += actual != expected
        reporter.row("wdim", n="-", d=d, expected=expected, actual=actual, verdict=verdict)
    return EXIT_FAIL if failures else EXIT_PASS


def _warm_pbw_cache(engine: TwistedEngine, gens: WGeneratorSet, n_max: int, jobs: int) -> None:
    # populate the engine's memo tables in parallel; evaluation is pure, so
    # the later serial pass is unaffected and reports stay byte-identical
    words = [w for n in range(n_max + 1) for w in pbw_words(engine.rs.rank, n)]
    if jobs <= 1 or len(words) < 2:
        return
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        list(pool.map(lambda w: pbw_vector(engine, gens, w), words))


def cmd_verify_main(args) -> int:
    reporter = Reporter(args.format)
    cache = Path(args.cache) if args.cache else None
    gens, digest = obtain_generators(args.rank, cache)
    reporter.config(
        command="verify-main",
        rank=args.rank,
        nmax=args.nmax,
        dmax=args.dmax if args.dmax is not None else "-",
        cache=str(cache) if cache else "-",
        generator_checksum=digest,
        jobs=args.jobs,
        version=__version__,
    )
    engine = TwistedEngine(RootSystemA(args.rank))
    _warm_pbw_cache(engine, gens, args.nmax, args.jobs)
    report = verify_main_theorem(engine, gens, args.nmax, d_max=args.dmax)
    for cell in report.cells:
        verdict = "pass" if cell.passed else "fail"
        reporter.row(
            "cell",
            n=cell.n,
            d=cell.d,
            expected=cell.expected_graded,
            actual=cell.graded_dim,
            spans=("yes" if cell.subset_spans else "no"),
            contained=("yes" if cell.words_contained else "no"),
            verdict=verdict,
        )
    return EXIT_PASS if report.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wbryl",
        description="exact verification of t-analog identities, W-algebra "
        "generators and the Brylinski filtration for affine type A",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, nmax=True):
        p.add_argument("--rank", type=_positive_int, required=True, help="rank of the finite root system")
        if nmax:
            p.add_argument("--nmax", type=_nonneg_int, required=True, help="largest energy level checked")
        p.add_argument("--format", choices=("table", "structured"), default="table")

    p = sub.add_parser("lusztig", help="table of Lusztig polynomials vs the product expansion")
    common(p)
    p.set_defaults(func=cmd_lusztig)

    p = sub.add_parser("verify-identity", help="pass/fail per energy for the level-1 identity")
    common(p)
    p.set_defaults(func=cmd_verify_identity)

    p = sub.add_parser("wgen", help="compute generators and check graded dimensions")
    common(p, nmax=False)
    p.add_argument("--check-degree", type=_nonneg_int, default=None)
    p.add_argument("--cache", default=None, help="generator cache file path")
    p.set_defaults(func=cmd_wgen)

    p = sub.add_parser("verify-main", help="Brylinski filtration report per (n, d) cell")
    common(p)
    p.add_argument("--dmax", type=_nonneg_int, default=None)
    p.add_argument("--cache", default=None, help="generator cache file path")
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.set_defaults(func=cmd_verify_main)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, CacheError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
