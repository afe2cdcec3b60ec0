"""Caporaso-Harris type recursions for N, C and W3 over a shared memo cache.

Index-set elements are tuples of blocks; blocks are plain tuples so that the
lexicographic order (with vectors compared as trimmed tuples) and equality
used by the sigma coefficients come for free:

* CH / S3 block:     ``(d, k, a, b)``
* S_w primed block:  ``(d, k, r, a, b, g, dl)``
* tilde primed:      ``(d, k, r, g, dl)``
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterator, Sequence

from .cache import MemoCache
from .natvec import (
    NatSeq,
    ZERO,
    is_odd,
    iweight,
    multinom,
    norm,
    subvectors,
    unit,
    vec_multinom,
)

__all__ = [
    "InvalidKeyError",
    "TerminationError",
    "NonIntegralError",
    "SwTerm",
    "SwTildeTerm",
    "enum_S",
    "enum_Sw",
    "enum_Sw_tilde",
    "enum_S3",
    "sigma",
    "sigma_prime",
    "sigma_prime_excl",
    "E_set",
    "theta",
    "Engine",
    "default_engine",
    "N_rec",
    "C_rec",
    "W3_rec",
]

E1 = unit(1)


class InvalidKeyError(ValueError):
    pass


class TerminationError(RuntimeError):
    """A recursive call failed to decrease the termination measure."""


class NonIntegralError(ArithmeticError):
    pass


# --------------------------------------------------------------------------
# index sets


def _add(vs: Sequence[NatSeq]) -> NatSeq:
    out = ZERO
    for v in vs:
        out = out + v
    return out


def _run_factorials(blocks: Sequence) -> int:
    """Product of factorials of the multiplicities of equal blocks."""
    counts: dict = {}
    for b in blocks:
        counts[b] = counts.get(b, 0) + 1
    out = 1
    for c in counts.values():
        out *= factorial(c)
    return out


STOP = object()

# Vectors inside the index-set searches are packed into ints, one 16-bit slot
# per coordinate.  With the top bit of every slot set in the bound,
# ``(bound | H) - x`` clears a guard bit exactly where ``x`` exceeds the bound.
_SLOT = 16


def _pack(v: NatSeq) -> int:
    return sum(x << (_SLOT * i) for i, x in enumerate(v))


def _guard(bound: NatSeq) -> tuple[int, int]:
    h = sum(1 << (_SLOT * i + _SLOT - 1) for i in range(len(bound)))
    return _pack(bound) | h, h


def _multisets(cands: Sequence, keys: Sequence, fits, init) -> Iterator[tuple]:
    """Nondecreasing tuples over ``cands`` accepted by the budget callback.

    ``fits(budget, keys[i])`` returns the new budget, None to skip the
    candidate, or ``STOP`` when no later candidate can fit either (candidates
    are sorted by degree).  Every prefix, the empty one included, is yielded
    with its budget.
    """
    n = len(cands)

    def rec(start: int, chosen: list, budget) -> Iterator[tuple]:
        yield tuple(chosen), budget
        for i in range(start, n):
            nb = fits(budget, keys[i])
            if nb is None:
                continue
            if nb is STOP:
                break
            chosen.append(cands[i])
            yield from rec(i, chosen, nb)
            chosen.pop()

    return rec(0, [], init)


@lru_cache(maxsize=None)
def _ch_candidates(top: int, A: NatSeq, B: NatSeq, odd_only: bool) -> tuple:
    """Sorted CH-type blocks plus their packed ``(d, a, b - e_k)`` keys."""
    out = []
    for b in subvectors(B, top):
        ib = iweight(b)
        for k in range(1, top - ib + 1):
            if odd_only and k % 2 == 0:
                continue
            for a in subvectors(A, top - ib - k):
                out.append((iweight(a) + ib + k, k, a, b + unit(k)))
    out.sort()
    keys = tuple((c[0], _pack(c[2]), _pack(c[3] - unit(c[1]))) for c in out)
    return tuple(out), keys


def _ch_search(top: int, A: NatSeq, B: NatSeq, odd_only: bool) -> Iterator[tuple]:
    """Block multisets with ``sum d_i <= top``, ``sum a_i <= A``, ``sum (b_i - e_k) = B``.

    Yields ``(blocks, sum d_i, sum a_i)``.
    """
    cands, keys = _ch_candidates(top, A, B, odd_only)
    ga, ha = _guard(A)
    gb, hb = _guard(B)
    pb = _pack(B)

    def fits(budget, c):
        dd, aa, bb = budget
        dd += c[0]
        if dd > top:
            return STOP
        aa += c[1]
        if (ga - aa) & ha != ha:
            return None
        bb += c[2]
        if (gb - bb) & hb != hb:
            return None
        return dd, aa, bb

    for blocks, (dd, _, bb) in _multisets(cands, keys, fits, (0, 0, 0)):
        if bb == pb:
            yield blocks, dd, _add([blk[2] for blk in blocks])


@lru_cache(maxsize=None)
def enum_S(d: int, A: NatSeq, B: NatSeq) -> tuple[tuple, ...]:
    """Every element of ``S(d, l, A, B)`` for all ``l``, as sorted block tuples.

    Blocks ``(d_i, k_i, a_i, b_i)`` with ``sum d_i = d - 1``, ``sum a_i <= A``,
    ``b_i >= e_{k_i}``, ``sum (b_i - e_{k_i}) = B`` and ``I a_i + I b_i = d_i``.
    """
    if d < 1:
        return ()
    return tuple(blocks for blocks, dd, _ in _ch_search(d - 1, A, B, False) if dd == d - 1)


def _excess(d: int, b: NatSeq, dl: NatSeq, r: int) -> int:
    return 2 * d - 1 + norm(b) + 2 * norm(dl) - 2 * r


def _r_ok(d: int, b: NatSeq, dl: NatSeq, r: int, strict_2r: bool) -> bool:
    base = 2 * d - 1 + norm(b) + 2 * norm(dl)
    return base - (2 * r if strict_2r else r) >= 0


@dataclass(frozen=True)
class SwTerm:
    unprimed: tuple  # blocks (d, k, gamma_i, delta_i)
    primed: tuple  # blocks (d, k, r, alpha, beta, gamma, delta)


@dataclass(frozen=True)
class SwTildeTerm:
    unprimed: tuple
    primed: tuple  # single block (d, k, r, gamma, delta)


@lru_cache(maxsize=None)
def _sw_candidates(d: int, r: int, alpha: NatSeq, beta: NatSeq, gamma: NatSeq, delta: NatSeq,
                   strict_2r: bool) -> tuple:
    top = d - 1
    out = []
    for b in subvectors(beta, top):
        ib = iweight(b)
        for k in range(1, top - ib + 1, 2):
            bp = b + unit(k)
            for a in subvectors(alpha, top - ib - k):
                ia = iweight(a)
                rest = top - ib - k - ia
                for g in subvectors(gamma, rest // 2):
                    ig = iweight(g)
                    for dl in subvectors(delta, (rest - 2 * ig) // 2):
                        dp = ia + ib + k + 2 * ig + 2 * iweight(dl)
                        for rp in range(r + 1):
                            if not _r_ok(dp, bp, dl, rp, strict_2r):
                                break
                            out.append((dp, k, rp, a, bp, g, dl))
    out.sort()
    keys = tuple((c[0], c[2], _pack(c[3]), _pack(c[4] - unit(c[1])), _pack(c[5]), _pack(c[6]))
                 for c in out)
    return tuple(out), keys


def enum_Sw(r: int, alpha: NatSeq, beta: NatSeq, gamma: NatSeq, delta: NatSeq,
            d: int | None = None, strict_2r: bool = True, block_filter=None) -> Iterator[SwTerm]:
    """Elements of ``S_w(l, m, r, alpha, beta, gamma, delta)`` over all ``l, m``.

    ``d`` defaults to ``I alpha + I beta + 2 I gamma + 2 I delta``.  With
    ``strict_2r`` the per-block bound is ``2d'-1+|b'+2dl'|-2r' >= 0``;
    otherwise the single-``r'`` form ``... - r' >= 0`` is used.
    ``block_filter`` may drop primed candidate blocks up front.
    """
    if d is None:
        d = iweight(alpha) + iweight(beta) + 2 * iweight(gamma) + 2 * iweight(delta)
    cands, keys = _sw_candidates(d, r, alpha, beta, gamma, delta, strict_2r)
    if block_filter is not None:
        kept = [i for i, c in enumerate(cands) if block_filter(c)]
        cands = tuple(cands[i] for i in kept)
        keys = tuple(keys[i] for i in kept)
    top = d - 1
    ga, ha = _guard(alpha)
    gb, hb = _guard(beta)
    gg, hg = _guard(gamma)
    ge, he = _guard(delta)
    pb = _pack(beta)

    def fits(budget, c):
        dd, rr, aa, bb, g, e = budget
        dd += c[0]
        if dd > top:
            return STOP
        rr += c[1]
        if rr > r:
            return None
        aa += c[2]
        if (ga - aa) & ha != ha:
            return None
        bb += c[3]
        if (gb - bb) & hb != hb:
            return None
        g += c[4]
        if (gg - g) & hg != hg:
            return None
        e += c[5]
        if (ge - e) & he != he:
            return None
        return dd, rr, aa, bb, g, e

    for primed, (dd, rr, _, bb, _, _) in _multisets(cands, keys, fits, (0, 0, 0, 0, 0, 0)):
        if bb != pb or (d - dd + 1) % 2:
            continue
        D = (d - dd + 1) // 2
        d_rem = delta - _add([p[6] for p in primed])
        # sum over unprimed blocks of (2 d_i - 1 + |delta_i|) is 2 D - 2 + |d_rem|
        if 2 * D - 2 + norm(d_rem) + rr != r:
            continue
        g_rem = gamma - _add([p[5] for p in primed])
        for un in enum_S(D, g_rem, d_rem):
            yield SwTerm(un, primed)


def enum_Sw_tilde(r: int, alpha: NatSeq, beta: NatSeq, gamma: NatSeq, delta: NatSeq,
                  d: int | None = None, strict_2r: bool = True) -> Iterator[SwTildeTerm]:
    """Elements of ``S~_w(l, r, alpha, beta, gamma, delta)`` over all ``l``."""
    if d is None:
        d = iweight(alpha) + iweight(beta) + 2 * iweight(gamma) + 2 * iweight(delta)
    base = iweight(alpha) + iweight(beta)
    for k in range(1, (d - base) // 2 + 1):
        for x in subvectors(delta):
            dl1 = x + unit(k)
            for g in subvectors(gamma):
                dp = base + 2 * iweight(g) + 2 * iweight(dl1)
                if dp > d - 2 or (d - dp) % 2:
                    continue
                D = (d - dp) // 2
                d_rem = delta - x
                rp = r - (2 * D - 2 + norm(d_rem))
                if rp < 0 or not _r_ok(dp, beta, dl1, rp, strict_2r):
                    continue
                for un in enum_S(D, gamma - g, d_rem):
                    yield SwTildeTerm(un, ((dp, k, rp, g, dl1),))


def enum_S3(alpha: NatSeq, beta: NatSeq) -> Iterator[tuple]:
    """Elements of ``S_3(l, alpha, beta)`` over all ``l``."""
    d = iweight(alpha) + iweight(beta)
    for blocks, dd, used in _ch_search(d - 1, alpha, beta, True):
        if len(blocks) + norm(alpha - used) == 3 * d - 3 * dd - 2:
            yield blocks


def sigma(blocks: Sequence) -> int:
    return _run_factorials(blocks)


def sigma_prime(term: SwTerm) -> int:
    return _run_factorials(term.primed)


def sigma_prime_excl(term: SwTerm, j: int) -> int:
    """sigma' computed with primed block ``j`` (0-based) removed."""
    if not 0 <= j < len(term.primed):
        raise IndexError(f"no primed block {j}")
    return _run_factorials(term.primed[:j] + term.primed[j + 1:])


def E_set(term: SwTerm) -> list[int]:
    """Indices ``j`` with ``b'_j >= e_{k'_j}`` and primed excess exactly 1."""
    out = []
    for j, (dp, k, rp, a, b, g, dl) in enumerate(term.primed):
        if b.entry(k) >= 1 and _excess(dp, b, dl, rp) == 1:
            out.append(j)
    return out


# --------------------------------------------------------------------------
# engine


def _measure_lt(a: tuple, b: tuple) -> bool:
    return a < b


class Engine:
    """Memoized evaluation of N, C and W3.

    ``strict_2r`` selects the per-block bound in the S_w / S~_w sets (see
    :func:`enum_Sw`).  One engine may be shared by several threads.
    """

    def __init__(self, cache: MemoCache | None = None, strict_2r: bool = True,
                 check_termination: bool = True):
        self.cache = cache if cache is not None else MemoCache()
        self.strict_2r = strict_2r
        self.check_termination = check_termination
        self._local = threading.local()

    # -- termination bookkeeping -------------------------------------------

    def _enter(self, table: str, measure: tuple) -> None:
        if not self.check_termination:
            return
        stack = getattr(self._local, "stack", None)
        if stack is None:
            stack = self._local.stack = []
        if stack and stack[-1][0] == table and not _measure_lt(measure, stack[-1][1]):
            raise TerminationError(
                f"{table} call with measure {measure} does not decrease {stack[-1][1]}"
            )
        stack.append((table, measure))

    def _leave(self) -> None:
        if self.check_termination:
            self._local.stack.pop()

    def _memo(self, table: str, key: tuple, measure: tuple, compute) -> int:
        v = self.cache.get(table, key)
        if v is not None:
            return v
        self.cache.begin(table, key)
        self._enter(table, measure)
        try:
            total = compute()
        except BaseException:
            self.cache.abort(table, key)
            raise
        finally:
            self._leave()
        if isinstance(total, Fraction):
            if total.denominator != 1:
                self.cache.abort(table, key)
                raise NonIntegralError(f"{table}{key} evaluated to {total}")
            total = total.numerator
        return self.cache.put(table, key, int(total))

    # -- relative Gromov-Witten ---------------------------------------------

    def N(self, alpha: NatSeq, beta: NatSeq) -> int:
        d = iweight(alpha) + iweight(beta)
        if d < 1:
            raise InvalidKeyError(f"N needs positive degree, got alpha={alpha} beta={beta}")
        return self._memo("N", (alpha, beta), (d, norm(beta)), lambda: self._N(alpha, beta, d))

    def _N(self, alpha: NatSeq, beta: NatSeq, d: int) -> Fraction:
        if alpha == E1 and beta == ZERO:
            return Fraction(1)
        total = Fraction(0)
        for k, c in enumerate(beta, 1):
            if c:
                total += k * self.N(alpha + unit(k), beta - unit(k))
        top = 2 * d - 2 + norm(beta)
        for s in enum_S(d, alpha, beta):
            coeff = multinom(top, [2 * di - 1 + norm(bi) for di, _, _, bi in s])
            if not coeff:
                continue
            coeff *= vec_multinom(alpha, [ai for _, _, ai, _ in s])
            if not coeff:
                continue
            for di, ki, ai, bi in s:
                coeff *= bi.entry(ki) * ki * self.N(ai, bi)
                if not coeff:
                    break
            if coeff:
                total += Fraction(coeff, sigma(s))
        return total

    # -- Welschinger relative numbers --------------------------------------

    def C(self, alpha: NatSeq, beta: NatSeq, gamma: NatSeq, delta: NatSeq, r: int) -> int:
        d = iweight(alpha) + iweight(beta) + 2 * iweight(gamma) + 2 * iweight(delta)
        if d < 1:
            raise InvalidKeyError("C needs positive degree")
        if r < 0 or _excess(d, beta, delta, r) < 0:
            raise InvalidKeyError(
                f"C key alpha={alpha} beta={beta} gamma={gamma} delta={delta} r={r} "
                "has negative excess"
            )
        if not (is_odd(alpha) and is_odd(beta)):
            return 0
        key = (alpha, beta, gamma, delta, r)
        return self._memo("C", key, (r, d, norm(beta)), lambda: self._C(*key, d))

    def _theta(self, un: tuple, r_set: int, alpha: NatSeq, gamma: NatSeq,
               primed_alphas: Sequence[NatSeq] | None, primed_gammas: Sequence[NatSeq],
               primed_rs: Sequence[int]) -> int:
        parts = [2 * di - 1 + norm(dli) for di, _, _, dli in un] + list(primed_rs)
        out = multinom(r_set, parts)
        if not out:
            return 0
        if primed_alphas is not None:
            out *= vec_multinom(alpha, primed_alphas)
        out *= vec_multinom(gamma, [gi for _, _, gi, _ in un] + list(primed_gammas))
        if not out:
            return 0
        for di, ki, gi, dli in un:
            out *= (
                (-1) ** di * dli.entry(ki) * ki * 2 ** (2 * di - 2 + norm(gi) + norm(dli))
                * self.N(gi, dli)
            )
        return out

    def theta(self, term, r_set: int, alpha: NatSeq, gamma: NatSeq) -> int:
        if isinstance(term, SwTildeTerm):
            (_, _, rp, g, _), = term.primed
            return self._theta(term.unprimed, r_set, alpha, gamma, None, [g], [rp])
        return self._theta(
            term.unprimed, r_set, alpha, gamma,
            [p[3] for p in term.primed], [p[5] for p in term.primed], [p[2] for p in term.primed],
        )

    def _block_value(self, blk: tuple) -> int:
        dp, k, rp, a, b, g, dl = blk
        return b.entry(k) * self.C(a, b, g, dl, rp)

    def _C(self, alpha, beta, gamma, delta, r, d) -> Fraction:
        if d == 1 and gamma == ZERO and delta == ZERO:
            if (alpha, beta, r) == (E1, ZERO, 0) or (alpha, beta, r) == (ZERO, E1, 1):
                return Fraction(1)
        X = _excess(d, beta, delta, r)
        strict = self.strict_2r
        total = Fraction(0)
        if X > 0:
            for k in range(1, len(beta) + 1, 2):
                if beta.entry(k):
                    total += self.C(alpha + unit(k), beta - unit(k), gamma, delta, r)
            for s in enum_Sw(r, alpha, beta, gamma, delta, d, strict):
                coeff = multinom(X - 1, [_excess(p[0], p[4], p[6], p[2]) for p in s.primed])
                if not coeff:
                    continue
                coeff *= self.theta(s, r, alpha, gamma)
                if not coeff:
                    continue
                for blk in s.primed:
                    coeff *= self._block_value(blk)
                    if not coeff:
                        break
                if coeff:
                    total += Fraction(coeff, sigma(s.unprimed) * sigma_prime(s))
            return total

        # zero excess
        for k, c in enumerate(delta, 1):
            if c:
                total += k * self.C(alpha, beta, gamma + unit(k), delta - unit(k), r - 1)
        for K in range(1, len(beta) + 1, 2):
            if not beta.entry(K):
                continue
            for s in enum_Sw(r - 1, alpha, beta - unit(K), gamma, delta, d, strict):
                coeff = K * self.theta(s, r - 1, alpha, gamma)
                for blk in s.primed:
                    if not coeff:
                        break
                    coeff *= self._block_value(blk)
                if coeff:
                    total += Fraction(coeff, sigma(s.unprimed) * sigma_prime(s))
        for s in enum_Sw(r - 1, alpha, beta, gamma, delta, d, strict):
            js = E_set(s)
            if not js:
                continue
            th = self.theta(s, r - 1, alpha, gamma)
            if not th:
                continue
            for j in js:
                dp, k, rp, a, b, g, dl = s.primed[j]
                coeff = th * k * self.C(a + unit(k), b - unit(k), g, dl, rp)
                for i, blk in enumerate(s.primed):
                    if not coeff:
                        break
                    if i != j:
                        coeff *= self._block_value(blk)
                if coeff:
                    total += Fraction(coeff, sigma(s.unprimed) * sigma_prime_excl(s, j))
        for s in enum_Sw_tilde(r - 1, alpha, beta, gamma, delta, d, strict):
            th = self.theta(s, r - 1, alpha, gamma)
            if not th:
                continue
            (dp, k, rp, g1, dl1), = s.primed
            free_gamma = gamma - g1 - _add([gi for _, _, gi, _ in s.unprimed])
            coeff = th * 2 ** (norm(free_gamma) + 1) * dl1.entry(k) * k
            coeff *= self.C(alpha, beta, g1, dl1, rp)
            if coeff:
                total -= Fraction(coeff, sigma(s.unprimed))
        return total

    # -- W3 ------------------------------------------------------------------

    def W3(self, alpha: NatSeq, beta: NatSeq) -> int:
        d = iweight(alpha) + iweight(beta)
        if d < 1:
            raise InvalidKeyError("W3 needs positive degree")
        if not (is_odd(alpha) and is_odd(beta)):
            raise InvalidKeyError("W3 is defined for odd vectors only")
        return self._memo("W3", (alpha, beta), (d, norm(beta)), lambda: self._W3(alpha, beta, d))

    def _W3(self, alpha: NatSeq, beta: NatSeq, d: int) -> Fraction:
        if alpha == E1 and beta == ZERO:
            return Fraction(1)
        total = Fraction(0)
        for k in range(1, len(beta) + 1, 2):
            if beta.entry(k):
                total += self.W3(alpha + unit(k), beta - unit(k))
        top2 = 3 * d - norm(alpha) + norm(beta)
        if top2 % 2:
            raise NonIntegralError(f"3d-|alpha|+|beta| is odd for alpha={alpha} beta={beta}")
        for s in enum_S3(alpha, beta):
            parts = []
            for di, _, ai, bi in s:
                p2 = 3 * di - norm(ai) + norm(bi)
                if p2 % 2:
                    raise NonIntegralError(f"odd multinomial argument in block {(di, ai, bi)}")
                parts.append(p2 // 2)
            coeff = multinom(top2 // 2 - 1, parts)
            if not coeff:
                continue
            coeff *= vec_multinom(alpha, [ai for _, _, ai, _ in s])
            for di, ki, ai, bi in s:
                if not coeff:
                    break
                coeff *= bi.entry(ki) * self.W3(ai, bi)
            if coeff:
                coeff *= self.W2(d - sum(b[0] for b in s), 0)
                total += Fraction(coeff, sigma(s))
        return total

    def W2(self, d: int, r: int) -> int:
        """``sum_i C(0, (d-2i) e_1, 0, i e_1; r)``."""
        return sum(self.C(ZERO, unit(1, d - 2 * i), ZERO, unit(1, i), r) for i in range(d // 2 + 1))


_default: Engine | None = None


def default_engine() -> Engine:
    global _default
    if _default is None:
        _default = Engine()
    return _default


def N_rec(alpha: NatSeq, beta: NatSeq) -> int:
    return default_engine().N(alpha, beta)


def C_rec(alpha: NatSeq, beta: NatSeq, gamma: NatSeq, delta: NatSeq, r: int) -> int:
    return default_engine().C(alpha, beta, gamma, delta, r)


def W3_rec(alpha: NatSeq, beta: NatSeq) -> int:
    return default_engine().W3(alpha, beta)


def theta(term, r: int, alpha: NatSeq, gamma: NatSeq, engine: Engine | None = None) -> int:
    """Theta coefficient of an S_w or S~_w element; N values come from ``engine``."""
    return (engine or default_engine()).theta(term, r, alpha, gamma)
