"""Top-level invariants: W_2, N, W_3, oracle cross-checks and congruence reports."""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Iterator

from .diagram import InconsistencyError, MarkingType, complex_mult, enumerate_marked, real_mult
from .natvec import ZERO, NatSeq, format_natseq, norm, unit, vectors_of_iweight
from .recursion import Engine, default_engine

__all__ = [
    "Entry",
    "InvariantReport",
    "max_r",
    "welschinger2",
    "welschinger_table",
    "gw",
    "w3",
    "valid_keys",
    "crosscheck",
    "congruence_report",
]

Key = tuple[NatSeq, NatSeq, NatSeq, NatSeq, int]


@dataclass
class Entry:
    """One check: ``path`` is ``oracle``, ``recursion`` or ``both-agree``."""

    check: str
    label: str
    passed: bool
    value: object
    path: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.check} {self.label} | {self.value}"


@dataclass
class InvariantReport:
    d_min: int
    d_max: int
    entries: list[Entry] = field(default_factory=list)
    values: dict[tuple, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(e.passed for e in self.entries)

    def failures(self) -> list[Entry]:
        return [e for e in self.entries if not e.passed]

    def lines(self) -> list[str]:
        return [e.line() for e in self.entries]

    def summary(self) -> str:
        bad = len(self.failures())
        return f"{len(self.entries) - bad}/{len(self.entries)} checks passed for d={self.d_min}..{self.d_max}"


def _engine(engine: Engine | None) -> Engine:
    return engine if engine is not None else default_engine()


def max_r(d: int) -> int:
    return (3 * d - 1) // 2


def welschinger2(d: int, r: int, engine: Engine | None = None) -> int:
    if d < 1:
        raise ValueError(f"degree must be positive, got {d}")
    if not 0 <= r <= max_r(d):
        raise ValueError(f"r={r} out of range 0..{max_r(d)} for d={d}")
    return _engine(engine).W2(d, r)


def welschinger_table(d: int, engine: Engine | None = None, threads: int = 1,
                      progress: Callable[[str], None] | None = None) -> list[int]:
    """``[W_2(d,0), ..., W_2(d, (3d-1)//2)]``; cells may be filled concurrently."""
    eng = _engine(engine)
    rs = range(max_r(d) + 1)

    def cell(r: int) -> int:
        v = welschinger2(d, r, eng)
        if progress:
            progress(f"W_2({d},{r}) = {v}")
        return v

    if threads <= 1:
        return [cell(r) for r in rs]
    with ThreadPoolExecutor(threads) as pool:
        return list(pool.map(cell, rs))


def gw(d: int, engine: Engine | None = None) -> int:
    if d < 1:
        raise ValueError(f"degree must be positive, got {d}")
    return _engine(engine).N(ZERO, unit(1, d))


def w3(d: int, engine: Engine | None = None) -> int:
    if d < 1:
        raise ValueError(f"degree must be positive, got {d}")
    v = _engine(engine).W3(ZERO, unit(1, d))
    if d % 2 == 0 and v != 0:
        raise InconsistencyError(f"W_3({d}) came out {v}, but it vanishes in even degree")
    return -v if ((d - 1) * (d - 2) // 2) % 2 else v


# --------------------------------------------------------------------------
# cross-check against the diagram oracle


def valid_keys(d: int) -> Iterator[Key]:
    """Every key ``(alpha, beta, gamma, delta, r)`` of degree ``d``, odd or not."""
    for wa in range(d + 1):
        for wb in range(d - wa + 1):
            rest = d - wa - wb
            if rest % 2:
                continue
            for wg in range(rest // 2 + 1):
                wd = rest // 2 - wg
                for a, b, g, dl in product(vectors_of_iweight(wa), vectors_of_iweight(wb),
                                           vectors_of_iweight(wg), vectors_of_iweight(wd)):
                    top = 2 * d - 1 + norm(b) + 2 * norm(dl)
                    for r in range(top // 2 + 1):
                        yield a, b, g, dl, r


def _key_label(key: Key) -> str:
    a, b, g, dl, r = key
    return "r={} alpha={} beta={} gamma={} delta={}".format(r, *map(format_natseq, (a, b, g, dl)))


def _recursion_value(fn, *args):
    try:
        return fn(*args)
    except (ArithmeticError, RuntimeError, ValueError) as exc:
        return f"{type(exc).__name__}({exc})"


def _compare(check: str, label: str, oracle: int, rec, seconds: float) -> Entry:
    if oracle == rec:
        return Entry(check, label, True, oracle, "both-agree", seconds)
    return Entry(check, label, False, f"oracle={oracle} recursion={rec}", "oracle,recursion", seconds)


def crosscheck(d_max: int, engine: Engine | None = None, d_min: int = 1,
               keys: Iterable[Key] | None = None, workers: int = 1,
               progress: Callable[[str], None] | None = None) -> InvariantReport:
    """Compare ``oracle_C`` with ``C_rec`` and ``oracle_N`` with ``N_rec``.

    By default every valid key with ``d_min <= d <= d_max`` is checked; pass
    ``keys`` to restrict to a sample.  Diagrams are enumerated once per
    marking type and reused for all r.  For each type the summed complex
    multiplicity is also compared with ``N(alpha + 2 gamma, beta + 2 delta)``;
    when ``gamma = delta = 0`` this is the N cross-check itself.
    """
    eng = _engine(engine)
    rep = InvariantReport(d_min, d_max)
    if keys is None:
        keys = [k for d in range(d_min, d_max + 1) for k in valid_keys(d)]

    by_type: dict[tuple, list[int]] = {}
    for a, b, g, dl, r in keys:
        by_type.setdefault((a, b, g, dl), []).append(r)

    for (a, b, g, dl), rs in by_type.items():
        t = MarkingType(a, b, g, dl)
        t0 = time.perf_counter()
        diagrams = enumerate_marked(t, workers)
        enum_time = time.perf_counter() - t0
        for r in rs:
            t0 = time.perf_counter()
            ov = sum(real_mult(m, r) for m in diagrams)
            rv = _recursion_value(eng.C, a, b, g, dl, r)
            rep.entries.append(_compare(f"C d={t.d}", _key_label((a, b, g, dl, r)), ov, rv,
                                        enum_time + time.perf_counter() - t0))
            rep.values[("C", a, b, g, dl, r)] = rv
        t0 = time.perf_counter()
        na, nb = a + g * 2, b + dl * 2
        ov = sum(complex_mult(m) for m in diagrams)
        rv = _recursion_value(eng.N, na, nb)
        if g == ZERO and dl == ZERO:
            check, label = f"N d={t.d}", f"alpha={format_natseq(a)} beta={format_natseq(b)}"
            rep.values[("N", a, b)] = rv
        else:
            check, label = f"muC-sum d={t.d}", _key_label((a, b, g, dl, 0))[4:]
        rep.entries.append(_compare(check, label, ov, rv, enum_time + time.perf_counter() - t0))
        if progress:
            progress(f"type {t}: {len(diagrams)} diagrams, r in {rs[0]}..{rs[-1]}")
    return rep


# --------------------------------------------------------------------------
# congruences


def congruence_report(d_max: int, engine: Engine | None = None, mod4_max: int | None = None,
                      progress: Callable[[str], None] | None = None) -> InvariantReport:
    """Check ``2^[(d-1)/2] | gw(d)`` and ``W_2(d,0) = gw(d) mod 4``.

    The mod-4 comparison runs for ``d <= mod4_max`` (default ``d_max``).
    """
    eng = _engine(engine)
    mod4_max = d_max if mod4_max is None else mod4_max
    rep = InvariantReport(1, d_max)
    for d in range(1, d_max + 1):
        t0 = time.perf_counter()
        n = gw(d, eng)
        k = (d - 1) // 2
        rep.values[("gw", d)] = n
        rep.entries.append(Entry("div2", f"d={d} 2^{k}", n % 2**k == 0, n, "recursion",
                                 time.perf_counter() - t0))
        if progress:
            progress(f"gw({d}) = {n}")
    for d in range(1, mod4_max + 1):
        t0 = time.perf_counter()
        n = rep.values[("gw", d)]
        w = welschinger2(d, 0, eng)
        rep.values[("W2", d, 0)] = w
        rep.entries.append(Entry("mod4", f"d={d}", (w - n) % 4 == 0, f"W2={w} gw={n}", "recursion",
                                 time.perf_counter() - t0))
        if progress:
            progress(f"W_2({d},0) = {w}")
    return rep
