"""Finitely supported vectors of nonnegative integers and exact coefficients.

A :class:`NatSeq` models an element of N^infinity: entry ``i`` (1-based) is the
multiplicity of ``e_i``.  Storage is a trimmed tuple, so equality, hashing and
the lexicographic order all come from :class:`tuple`.
"""
from __future__ import annotations

from math import comb, prod
from typing import Iterable, Iterator, Sequence

__all__ = [
    "NatSeq",
    "unit",
    "norm",
    "iweight",
    "ipow",
    "geq",
    "is_odd",
    "binom",
    "multinom",
    "vec_multinom",
    "parse_natseq",
    "format_natseq",
    "subvectors",
    "vectors_of_iweight",
]


class NatSeq(tuple):
    """Trimmed tuple of nonnegative integers, index 1 first.

    ``+`` and ``-`` act componentwise (not as tuple concatenation).
    Ordering is the inherited tuple order, which on trimmed sequences is the
    lexicographic order with shorter sequences padded by zeros.
    """

    __slots__ = ()

    def __new__(cls, entries: Iterable[int] = ()) -> "NatSeq":
        vals = [int(x) for x in entries]
        if any(x < 0 for x in vals):
            raise ValueError(f"negative entry in {vals}")
        while vals and vals[-1] == 0:
            vals.pop()
        return super().__new__(cls, vals)

    @classmethod
    def _raw(cls, vals: Sequence[int]) -> "NatSeq":
        # caller guarantees nonnegative, trimmed
        return tuple.__new__(cls, vals)

    def entry(self, i: int) -> int:
        """Coordinate ``(self)_i`` with 1-based ``i``; zero past the support."""
        if i < 1:
            raise IndexError("NatSeq indices start at 1")
        return tuple.__getitem__(self, i - 1) if i <= len(self) else 0

    def __add__(self, other: "NatSeq") -> "NatSeq":  # type: ignore[override]
        a, b = (self, other) if len(self) >= len(other) else (other, self)
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return NatSeq._raw(out)

    __radd__ = __add__

    def __sub__(self, other: "NatSeq") -> "NatSeq":
        if len(other) > len(self):
            raise ValueError(f"{format_natseq(self)} - {format_natseq(other)} is negative")
        out = list(self)
        for i, x in enumerate(other):
            out[i] -= x
            if out[i] < 0:
                raise ValueError(f"{format_natseq(self)} - {format_natseq(other)} is negative")
        while out and out[-1] == 0:
            out.pop()
        return NatSeq._raw(out)

    def __mul__(self, c: int) -> "NatSeq":  # type: ignore[override]
        if c < 0:
            raise ValueError("scalar must be nonnegative")
        return NatSeq._raw([c * x for x in self]) if c else ZERO

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"NatSeq({format_natseq(self)})"

    def __str__(self) -> str:
        return format_natseq(self)


ZERO = NatSeq()


def unit(i: int, times: int = 1) -> NatSeq:
    """``times * e_i``."""
    if i < 1:
        raise ValueError("unit vectors are indexed from 1")
    if times == 0:
        return ZERO
    return NatSeq([0] * (i - 1) + [times])


def norm(a: NatSeq) -> int:
    return sum(a)


def iweight(a: NatSeq) -> int:
    return sum(i * x for i, x in enumerate(a, 1))


def ipow(a: NatSeq) -> int:
    return prod(i**x for i, x in enumerate(a, 1))


def geq(a: NatSeq, b: NatSeq) -> bool:
    """Componentwise ``a >= b``."""
    if len(b) > len(a):
        return False
    return all(x >= y for x, y in zip(a, b))


def is_odd(a: NatSeq) -> bool:
    return all(x == 0 for x in a[1::2])


def binom(a: int, b: int) -> int:
    """Binomial coefficient, zero unless ``0 <= b <= a``."""
    if b < 0 or b > a:
        return 0
    return comb(a, b)


def multinom(a: int, parts: Sequence[int]) -> int:
    """Product of successive binomials ``C(a - b_1 - ... - b_{i-1}, b_i)``.

    The parts need not sum to ``a``; any out-of-range factor gives 0.
    """
    out = 1
    for b in parts:
        c = binom(a, b)
        if c == 0:
            return 0
        out *= c
        a -= b
    return out


def vec_multinom(a: NatSeq, parts: Sequence[NatSeq]) -> int:
    """Coordinatewise product of :func:`multinom`."""
    out = 1
    for i, ai in enumerate(a):
        col = [p[i] if i < len(p) else 0 for p in parts]
        out *= multinom(ai, col)
        if out == 0:
            return 0
    # coordinates beyond the support of ``a`` must be zero in every part
    for p in parts:
        if len(p) > len(a):
            return 0
    return out


def parse_natseq(text: str) -> NatSeq:
    """Parse the comma-separated encoding, e.g. ``"3,0,1"``; ``"0"`` is zero."""
    if not text or any(c not in "0123456789," for c in text):
        raise ValueError(f"malformed vector {text!r}: expected digits and commas")
    fields = text.split(",")
    if any(f == "" for f in fields):
        raise ValueError(f"malformed vector {text!r}: empty field")
    return NatSeq(int(f) for f in fields)


def format_natseq(a: NatSeq) -> str:
    return ",".join(map(str, a)) if a else "0"


def subvectors(bound: NatSeq, max_iweight: int | None = None) -> Iterator[NatSeq]:
    """All ``v`` with ``0 <= v <= bound`` componentwise, optionally ``Iv <= max_iweight``.

    Yielded in increasing lexicographic order.
    """
    cap = iweight(bound) if max_iweight is None else max_iweight
    n = len(bound)
    cur = [0] * n

    def rec(i: int, budget: int) -> Iterator[NatSeq]:
        if i == n:
            yield NatSeq(cur)
            return
        top = min(bound[i], budget // (i + 1))
        for x in range(top + 1):
            cur[i] = x
            yield from rec(i + 1, budget - x * (i + 1))
        cur[i] = 0

    yield from rec(0, cap)


def vectors_of_iweight(w: int) -> list[NatSeq]:
    """Every ``v`` with ``Iv = w``, i.e. the integer partitions of ``w`` as multiplicity vectors."""
    out: list[NatSeq] = []
    cur = [0] * w

    def rec(rest: int, largest: int) -> None:
        if rest == 0:
            out.append(NatSeq(cur))
            return
        for k in range(min(rest, largest), 0, -1):
            cur[k - 1] += 1
            rec(rest - k, k)
            cur[k - 1] -= 1

    rec(w, w)
    return sorted(out)
