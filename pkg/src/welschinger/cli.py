"""Command-line front end.

Values go to stdout, diagnostics and progress to stderr.  Vectors use the
comma encoding (``3,0,1`` is ``3e_1 + e_3``; ``0`` is the zero vector).
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .cache import MemoCache
from .diagram import MarkingType, complex_mult, dump_line, enumerate_marked, real_mult
from .invariants import congruence_report, crosscheck, gw, max_r, w3, welschinger2, welschinger_table
from .natvec import ZERO, NatSeq, iweight, parse_natseq, unit
from .recursion import Engine


class CliError(Exception):
    pass


@dataclass
class CliConfig:
    cache: Path | None = None
    strict_2r: bool = True
    threads: int = 1
    format: str = "plain"
    verbose: int = 0

    def __post_init__(self):
        if self.threads < 1:
            raise CliError(f"--threads must be at least 1, got {self.threads}")
        if self.cache is not None:
            parent = self.cache.parent if str(self.cache.parent) else Path(".")
            if self.cache.exists() and not os.access(self.cache, os.R_OK):
                raise CliError(f"cache file {self.cache} is not readable")
            if not self.cache.exists() and not os.access(parent, os.W_OK):
                raise CliError(f"cache file {self.cache} cannot be created")


def _natseq(text: str) -> NatSeq:
    try:
        return parse_natseq(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="welschinger", description=__doc__.splitlines()[0])
    p.add_argument("--cache", type=Path, help="FLOORCACHE file, read on start and appended on exit")
    p.add_argument("--strict-2r", action=argparse.BooleanOptionalAction, default=True,
                   help="use 2r' in the per-block bound of the S_w sets (default); "
                        "--no-strict-2r uses the single r' form")
    p.add_argument("--threads", type=int, default=1, help="worker count (default 1)")
    p.add_argument("--format", choices=("plain", "tsv"), default="plain")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("gw", help="N^{alpha,beta}(d); plain gw(d) without vectors")
    s.add_argument("-d", type=_positive, required=True)
    s.add_argument("--alpha", type=_natseq)
    s.add_argument("--beta", type=_natseq)

    s = sub.add_parser("welschinger", help="W_2(d,r) or the whole row for d")
    s.add_argument("-d", type=_positive, required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("-r", type=int)
    g.add_argument("--table", action="store_true")

    s = sub.add_parser("w3", help="W_3(d)")
    s.add_argument("-d", type=_positive, required=True)

    s = sub.add_parser("enumerate", help="list marked floor diagrams of a type")
    s.add_argument("--alpha", type=_natseq, default=ZERO)
    s.add_argument("--beta", type=_natseq, default=ZERO)
    s.add_argument("--gamma", type=_natseq, default=ZERO)
    s.add_argument("--delta", type=_natseq, default=ZERO)
    s.add_argument("--all-real-types", type=_positive, metavar="D",
                   help="merge the types (0,(D-2i)e1,0,ie1) behind W_2(D,r), summing multiplicities")
    s.add_argument("--mult", type=int, metavar="R", help="add the mu^R_R column")

    s = sub.add_parser("crosscheck", help="oracle vs recursion for every key up to degree d")
    s.add_argument("-d", type=_positive, required=True)

    s = sub.add_parser("congruence", help="divisibility and mod-4 checks up to degree d")
    s.add_argument("-d", type=_positive, required=True)
    s.add_argument("--mod4-max", type=_positive, help="last degree for the mod-4 check (default d)")

    s = sub.add_parser("cache", help="inspect or manage the cache file")
    s.add_argument("action", choices=("stats", "clear", "export", "import"))
    s.add_argument("path", nargs="?", type=Path)
    return p


def _emit(cfg: CliConfig, *fields) -> None:
    sep = "\t" if cfg.format == "tsv" else " "
    print(sep.join(str(f) for f in fields))


def _progress(cfg: CliConfig):
    if cfg.verbose:
        return lambda msg: print(msg, file=sys.stderr, flush=True)
    return None


def cmd_gw(args, cfg: CliConfig, engine: Engine) -> int:
    if args.alpha is None and args.beta is None:
        _emit(cfg, gw(args.d, engine))
        return 0
    a = args.alpha if args.alpha is not None else ZERO
    b = args.beta if args.beta is not None else ZERO
    got = iweight(a) + iweight(b)
    if got != args.d:
        raise CliError(f"degree mismatch: I*alpha + I*beta = {got}, but -d {args.d}")
    _emit(cfg, engine.N(a, b))
    return 0


def cmd_welschinger(args, cfg: CliConfig, engine: Engine) -> int:
    if args.table:
        _emit(cfg, *welschinger_table(args.d, engine, cfg.threads, _progress(cfg)))
        return 0
    if not 0 <= args.r <= max_r(args.d):
        raise CliError(f"r={args.r} out of range: 0 <= r <= {max_r(args.d)} for d={args.d}")
    _emit(cfg, welschinger2(args.d, args.r, engine))
    return 0


def cmd_w3(args, cfg: CliConfig, engine: Engine) -> int:
    _emit(cfg, w3(args.d, engine))
    return 0


def cmd_enumerate(args, cfg: CliConfig, engine: Engine) -> int:
    if args.all_real_types:
        d = args.all_real_types
        types = [MarkingType(ZERO, unit(1, d - 2 * i), ZERO, unit(1, i)) for i in range(d // 2 + 1)]
    else:
        try:
            types = [MarkingType(args.alpha, args.beta, args.gamma, args.delta)]
        except ValueError as exc:
            raise CliError(f"malformed type: {exc}") from None
    rows: dict[tuple, list] = {}
    for t in types:
        if args.mult is not None:
            top = 2 * t.d - 1 + sum(t.beta) + 2 * sum(t.delta)
            if not 0 <= 2 * args.mult <= top:
                raise CliError(f"--mult {args.mult} out of range for type {t}")
        for m in enumerate_marked(t, cfg.threads):
            row = rows.get(m.canon)
            if row is None:
                rows[m.canon] = [dump_line(m), complex_mult(m), 0]
                row = rows[m.canon]
            if args.mult is not None:
                row[2] += real_mult(m, args.mult)
    for canon in sorted(rows):
        line, muc, mur = rows[canon]
        fields = [line, f"muC={muc}"]
        if args.mult is not None:
            fields.append(f"muR{args.mult}={mur}")
        if cfg.format == "tsv":
            print("\t".join(fields))
        else:
            print(" ".join(fields))
    return 0


def _report(rep, cfg: CliConfig) -> int:
    for e in rep.entries:
        if cfg.format == "tsv":
            print("\t".join(["PASS" if e.passed else "FAIL", e.check, e.label, str(e.value),
                             e.path, f"{e.seconds:.4f}"]))
        else:
            print(e.line())
    print(rep.summary(), file=sys.stderr)
    return 0 if rep.ok else 1


def cmd_crosscheck(args, cfg: CliConfig, engine: Engine) -> int:
    return _report(crosscheck(args.d, engine, workers=cfg.threads, progress=_progress(cfg)), cfg)


def cmd_congruence(args, cfg: CliConfig, engine: Engine) -> int:
    return _report(congruence_report(args.d, engine, args.mod4_max, _progress(cfg)), cfg)


def cmd_cache(args, cfg: CliConfig, engine: Engine) -> int:
    cache = engine.cache
    if args.action == "stats":
        for k, v in cache.stats().items():
            _emit(cfg, k, v)
        if cfg.cache is not None:
            _emit(cfg, "file", cfg.cache)
        return 0
    if args.action == "clear":
        cache.clear()
        if cfg.cache is not None and cfg.cache.exists():
            cfg.cache.unlink()
        return 0
    if args.path is None:
        raise CliError(f"cache {args.action} needs a path")
    if args.action == "export":
        cache.export(args.path)
        _emit(cfg, "exported", len(cache), args.path)
    else:
        n = cache.load(args.path)
        _emit(cfg, "imported", n, args.path)
    return 0


COMMANDS = {
    "gw": cmd_gw,
    "welschinger": cmd_welschinger,
    "w3": cmd_w3,
    "enumerate": cmd_enumerate,
    "crosscheck": cmd_crosscheck,
    "congruence": cmd_congruence,
    "cache": cmd_cache,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = CliConfig(args.cache, args.strict_2r, args.threads, args.format, args.verbose)
        cache = MemoCache(cfg.cache)
        engine = Engine(cache, strict_2r=cfg.strict_2r)
        status = COMMANDS[args.cmd](args, cfg, engine)
        if args.cmd == "cache" and args.action == "clear":
            return status
        if args.cmd == "cache" and args.action == "import":
            cache.save()
            return status
        n = cache.flush()
        if n and cfg.verbose:
            print(f"cache: appended {n} records to {cfg.cache}", file=sys.stderr)
        return status
    except (CliError, ValueError, OSError, ArithmeticError, RuntimeError) as exc:
        print(f"welschinger: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
