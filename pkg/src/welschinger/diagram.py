"""Marked floor diagrams: brute-force enumeration and multiplicities.

A marked diagram is stored by label.  Since every floor and every internal
edge is marked, and every end-edge has exactly one of (source, edge) marked,
the labelling pins down the whole graph; the tuple of per-label descriptors is
therefore a canonical form and equivalence of marked diagrams is plain
equality of these tuples.

Descriptors (labels are 1-based):

* ``("F",)``                       a floor
* ``("I", tail, head, weight)``    an internal edge between two floor labels
* ``("E", head, weight)``          a marked end-edge entering floor ``head``
* ``("S", head, weight)``          a marked source whose edge enters ``head``

The partial order used for markings makes an element smaller than everything
downstream of it along the orientation: a source and its end-edge lie below
the floor they enter, and an internal edge lies between its tail and head.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterator

from .natvec import NatSeq, ZERO, format_natseq, ipow, iweight, norm

__all__ = [
    "InconsistencyError",
    "MarkingType",
    "MarkedDiagram",
    "FloorDiagram",
    "enumerate_marked",
    "enumerate_floor_diagrams",
    "complex_mult",
    "r_pairs",
    "real_involution",
    "real_mult",
    "oracle_N",
    "oracle_C",
    "dump_line",
]


class InconsistencyError(ArithmeticError):
    """An identity that must hold for valid inputs failed (e.g. inexact division)."""


def _exact_div(num: int, den: int, what: str) -> int:
    q, rem = divmod(num, den)
    if rem:
        raise InconsistencyError(f"{what}: {num} not divisible by {den}")
    return q


@dataclass(frozen=True)
class MarkingType:
    alpha: NatSeq = ZERO
    beta: NatSeq = ZERO
    gamma: NatSeq = ZERO
    delta: NatSeq = ZERO

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "gamma", "delta"):
            v = getattr(self, name)
            if not isinstance(v, NatSeq):
                object.__setattr__(self, name, NatSeq(v))
        if self.d < 1:
            raise ValueError(f"marking type {self} has degree {self.d} < 1")

    @property
    def d(self) -> int:
        return (
            iweight(self.alpha)
            + iweight(self.beta)
            + 2 * iweight(self.gamma)
            + 2 * iweight(self.delta)
        )

    @property
    def n(self) -> int:
        return (
            2 * self.d
            - 1
            + norm(self.alpha)
            + norm(self.beta)
            + 2 * norm(self.gamma)
            + 2 * norm(self.delta)
        )

    def source_weights(self) -> list[int]:
        """Weights of the sources at labels ``1 .. |alpha| + 2|gamma|``."""
        out = []
        for k, c in enumerate(self.alpha, 1):
            out += [k] * c
        for k, c in enumerate(self.gamma, 1):
            out += [k] * (2 * c)
        return out

    def marked_end_counts(self) -> dict[int, int]:
        """Number of marked end-edges of each weight, ``beta_k + 2 delta_k``."""
        out: dict[int, int] = {}
        for k in range(1, max(len(self.beta), len(self.delta)) + 1):
            c = self.beta.entry(k) + 2 * self.delta.entry(k)
            if c:
                out[k] = c
        return out

    def __str__(self) -> str:
        return "({})".format(
            ";".join(format_natseq(v) for v in (self.alpha, self.beta, self.gamma, self.delta))
        )


@dataclass(frozen=True)
class FloorDiagram:
    """Unmarked diagram: floors ``0..d-1``, internal ``(tail, head, w)``, ends ``(head, w)``."""

    d: int
    internal_edges: tuple[tuple[int, int, int], ...]
    end_edges: tuple[tuple[int, int], ...]

    def check(self) -> None:
        d = self.d
        div = [0] * d
        for t, h, w in self.internal_edges:
            if w < 1 or t == h:
                raise InconsistencyError(f"bad internal edge {(t, h, w)}")
            div[t] -= w
            div[h] += w
        for h, w in self.end_edges:
            if w < 1:
                raise InconsistencyError(f"bad end-edge {(h, w)}")
            div[h] += w
        if any(x != 1 for x in div):
            raise InconsistencyError(f"floor divergences {div} are not all 1")
        if sum(w for _, w in self.end_edges) != d:
            raise InconsistencyError("end-edge weights do not sum to the degree")
        if len(self.internal_edges) != d - 1:
            raise InconsistencyError("floors do not form a tree")
        # connectivity by union-find
        parent = list(range(d))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for t, h, _ in self.internal_edges:
            parent[find(t)] = find(h)
        if len({find(x) for x in range(d)}) != 1:
            raise InconsistencyError("floor diagram is disconnected")

    @cached_property
    def canonical(self) -> tuple:
        """Isomorphism invariant: minimum over roots of a rooted canonical string."""
        nbrs: list[list[tuple[int, int, int]]] = [[] for _ in range(self.d)]
        for t, h, w in self.internal_edges:
            nbrs[t].append((h, +1, w))
            nbrs[h].append((t, -1, w))
        ends: list[list[int]] = [[] for _ in range(self.d)]
        for h, w in self.end_edges:
            ends[h].append(w)

        def rooted(v: int, parent: int) -> tuple:
            kids = sorted(
                (direction, w, rooted(u, v)) for u, direction, w in nbrs[v] if u != parent
            )
            return (tuple(sorted(ends[v])), tuple(kids))

        return min(rooted(v, -1) for v in range(self.d))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FloorDiagram):
            return NotImplemented
        return self.canonical == other.canonical

    def __hash__(self) -> int:
        return hash(self.canonical)


@dataclass(frozen=True)
class MarkedDiagram:
    mtype: MarkingType
    canon: tuple

    @property
    def n(self) -> int:
        return len(self.canon)

    def kind(self, label: int) -> str:
        return self.canon[label - 1][0]

    def floors(self) -> list[int]:
        return [i for i, x in enumerate(self.canon, 1) if x[0] == "F"]

    def edges(self) -> Iterator[tuple[int, int]]:
        """``(label or 0, weight)`` for every edge; label 0 when only the source is marked."""
        for i, x in enumerate(self.canon, 1):
            if x[0] == "I":
                yield i, x[3]
            elif x[0] == "E":
                yield i, x[2]
            elif x[0] == "S":
                yield 0, x[2]

    def adjacent(self, a: int, b: int) -> bool:
        """Vertex/edge adjacency between the elements labelled ``a`` and ``b``."""
        for v, e in ((a, b), (b, a)):
            if self.canon[v - 1][0] != "F":
                continue
            x = self.canon[e - 1]
            if x[0] == "I" and v in (x[1], x[2]):
                return True
            if x[0] == "E" and x[1] == v:
                return True
        return False

    def underlying(self) -> FloorDiagram:
        floors = self.floors()
        idx = {lab: i for i, lab in enumerate(floors)}
        internal = []
        ends = []
        for x in self.canon:
            if x[0] == "I":
                internal.append((idx[x[1]], idx[x[2]], x[3]))
            elif x[0] in "ES":
                ends.append((idx[x[1]], x[2]))
        return FloorDiagram(len(floors), tuple(internal), tuple(ends))

    def relabel(self, perm: dict[int, int]) -> tuple:
        """Descriptor tuple after moving label ``i`` to ``perm.get(i, i)``."""
        def p(i: int) -> int:
            return perm.get(i, i)

        out: list = [None] * self.n
        for i, x in enumerate(self.canon, 1):
            if x[0] == "F":
                y = x
            elif x[0] == "I":
                y = ("I", p(x[1]), p(x[2]), x[3])
            else:
                y = (x[0], p(x[1]), x[2])
            out[p(i) - 1] = y
        return tuple(out)

    def check(self) -> None:
        """Verify every marking axiom; raises :class:`InconsistencyError`."""
        t = self.mtype
        if self.n != t.n:
            raise InconsistencyError("wrong number of marks")
        floors = set(self.floors())
        for i, x in enumerate(self.canon, 1):
            ends = x[1:3] if x[0] == "I" else x[1:2] if x[0] in "ES" else ()
            if any(v not in floors for v in ends):
                raise InconsistencyError(f"label {i} does not attach to floors")
        fd = self.underlying()
        fd.check()
        if fd.d != t.d:
            raise InconsistencyError("wrong degree")
        sw = t.source_weights()
        for i, x in enumerate(self.canon, 1):
            if i <= len(sw):
                if x[0] != "S" or x[2] != sw[i - 1]:
                    raise InconsistencyError(f"label {i} must be a source of weight {sw[i - 1]}")
            elif x[0] == "S":
                raise InconsistencyError(f"label {i} is an unprescribed source")
            # order compatibility
            if x[0] == "I" and not (x[1] < i < x[2]):
                raise InconsistencyError(f"internal edge {i} breaks the order")
            if x[0] in "ES" and not (i < x[1]):
                raise InconsistencyError(f"end element {i} breaks the order")
        counts: dict[int, int] = {}
        for x in self.canon:
            if x[0] == "E":
                counts[x[2]] = counts.get(x[2], 0) + 1
        if counts != t.marked_end_counts():
            raise InconsistencyError("wrong marked end-edge counts")


# --------------------------------------------------------------------------
# enumeration


def _search(t: MarkingType, state: tuple, depth_limit: int | None = None) -> Iterator:
    """Depth-first extension of a partial marking.

    ``state`` is ``(desc, pending, open_out, floors, internal, ends_left, comp)``
    where ``comp`` maps each floor label to a representative of its piece;
    yields completed descriptor tuples, or partial states once ``depth_limit``
    labels have been placed.
    """
    n, d = t.n, t.d
    sw = t.source_weights()
    desc, pending, open_out, floors, internal, ends_left, comp = state
    i = len(desc) + 1
    if depth_limit is not None and i > depth_limit:
        yield ("partial", state)
        return
    if i > n:
        if not pending and floors == d and all(v == 0 for v in open_out.values()):
            yield ("done", _freeze(desc))
        return

    def go(new_desc, new_pending, new_open, f, e, el, c=comp):
        yield from _search(t, (new_desc, new_pending, new_open, f, e, el, c), depth_limit)

    if i <= len(sw):
        w = sw[i - 1]
        yield from go(desc + [["S", None, w]], pending + [i], open_out, floors, internal, ends_left)
        return

    # a marked end-edge
    for k in sorted(ends_left):
        if ends_left[k]:
            el = dict(ends_left)
            el[k] -= 1
            yield from go(desc + [["E", None, k]], pending + [i], open_out, floors, internal, el)
    # an internal edge out of an earlier floor
    if internal < d - 1:
        for f, rem in sorted(open_out.items()):
            for w in range(1, rem + 1):
                no = dict(open_out)
                no[f] = rem - w
                yield from go(
                    desc + [["I", f, None, w]], pending + [i], no, floors, internal + 1, ends_left
                )
    # a floor absorbing a nonempty set of pending strands
    if floors < d:
        for size in range(1, len(pending) + 1):
            for chosen in combinations(pending, size):
                # two strands out of one connected piece would close a cycle
                pieces = [comp[desc[lab - 1][1]] for lab in chosen if desc[lab - 1][0] == "I"]
                if len(set(pieces)) != len(pieces):
                    continue
                win = 0
                nd = [list(x) for x in desc]
                for lab in chosen:
                    x = nd[lab - 1]
                    if x[0] == "I":
                        x[2] = i
                        win += x[3]
                    else:
                        x[1] = i
                        win += x[2]
                rest = [p for p in pending if p not in chosen]
                no = dict(open_out)
                no[i] = win - 1
                merged = set(pieces)
                nc = {f: (i if c in merged else c) for f, c in comp.items()}
                nc[i] = i
                yield from go(nd + [["F"]], rest, no, floors + 1, internal, ends_left, nc)


def _freeze(desc: list) -> tuple:
    return tuple(tuple(x) for x in desc)


def _initial_state(t: MarkingType) -> tuple:
    return ([], [], {}, 0, 0, t.marked_end_counts(), {})


def _finish_partial(args: tuple) -> list[tuple]:
    t, state = args
    return [c for tag, c in _search(t, state) if tag == "done"]


def enumerate_marked(t: MarkingType, workers: int = 1) -> list[MarkedDiagram]:
    """All marked floor diagrams of type ``t`` up to equivalence, sorted by canonical form.

    With ``workers > 1`` the search is split after a few labels and the
    subtrees are processed in separate processes; output is identical.
    """
    if workers <= 1:
        canons = [c for tag, c in _search(t, _initial_state(t)) if tag == "done"]
    else:
        depth = min(t.n, len(t.source_weights()) + 3)
        partial = []
        canons = []
        for tag, x in _search(t, _initial_state(t), depth_limit=depth):
            if tag == "partial":
                partial.append((t, x))
            else:
                canons.append(x)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(_finish_partial, partial):
                canons.extend(chunk)
    if len(set(canons)) != len(canons):
        raise InconsistencyError("enumeration produced a duplicate marked diagram")
    return [MarkedDiagram(t, c) for c in sorted(canons)]


def _int_partitions(n: int, largest: int | None = None) -> Iterator[list[int]]:
    largest = n if largest is None else largest
    if n == 0:
        yield []
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _int_partitions(n - k, k):
            yield [k] + rest


def enumerate_floor_diagrams(d: int) -> list[FloorDiagram]:
    """Floor diagrams of degree ``d`` and genus 0 up to isomorphism.

    Every diagram admits a marking with all end-edges marked, so stripping
    the markings of types ``(0, beta, 0, 0)`` over all ``I beta = d`` reaches
    each isomorphism class.
    """
    if d < 1:
        raise ValueError("degree must be positive")
    seen: dict[tuple, FloorDiagram] = {}
    for parts in _int_partitions(d):
        beta = [0] * parts[0]
        for k in parts:
            beta[k - 1] += 1
        for md in enumerate_marked(MarkingType(beta=NatSeq(beta))):
            fd = md.underlying()
            seen.setdefault(fd.canonical, fd)
    return [seen[k] for k in sorted(seen)]


# --------------------------------------------------------------------------
# multiplicities


def complex_mult(m: MarkedDiagram) -> int:
    t = m.mtype
    num = 1
    for _, w in m.edges():
        num *= w * w
    den = ipow(t.alpha) ** 2 * ipow(t.beta) * ipow(t.gamma) ** 4 * ipow(t.delta) ** 2
    return _exact_div(num, den, "complex multiplicity")


def _check_r(t: MarkingType, r: int) -> None:
    if r < 0 or 2 * t.d - 1 + norm(t.beta) + 2 * norm(t.delta) - 2 * r < 0:
        raise ValueError(f"r={r} out of range for type {t}")


def r_pairs(t: MarkingType, r: int) -> list[tuple[int, int]]:
    """Consecutive label pairs ``(i, i+1)`` carrying conjugate constraints."""
    _check_r(t, r)
    a = norm(t.alpha)
    pairs = [(a + 2 * k - 1, a + 2 * k) for k in range(1, norm(t.gamma) + 1)]
    pairs += [(t.n - 2 * k + 1, t.n - 2 * k + 2) for k in range(1, r + 1)]
    return pairs


def _swapped_pairs(m: MarkedDiagram, r: int) -> list[tuple[int, int]]:
    return [(i, j) for i, j in r_pairs(m.mtype, r) if not m.adjacent(i, j)]


def real_involution(m: MarkedDiagram, r: int) -> dict[int, int]:
    """The involution as a label permutation (identity entries omitted)."""
    perm: dict[int, int] = {}
    for i, j in _swapped_pairs(m, r):
        perm[i] = j
        perm[j] = i
    return perm


def real_mult(m: MarkedDiagram, r: int) -> int:
    """Signed r-real multiplicity; zero unless the diagram is r-real with even edges swapped."""
    t = m.mtype
    pairs = _swapped_pairs(m, r)
    im = {x for p in pairs for x in p}
    perm = real_involution(m, r)
    if m.relabel(perm) != m.canon:
        return 0
    swapped_ends: dict[int, int] = {}
    for lab in im:
        x = m.canon[lab - 1]
        if x[0] == "E":
            swapped_ends[x[2]] = swapped_ends.get(x[2], 0) + 1
    want = {k: 2 * c for k, c in enumerate(t.delta, 1) if c}
    if swapped_ends != want:
        return 0
    # even-weight edges must be exchanged by the involution; an edge whose
    # source is marked travels with that source
    for lab, x in enumerate(m.canon, 1):
        w = x[3] if x[0] == "I" else x[2] if x[0] in "ES" else 1
        if w % 2 == 0 and lab not in im:
            return 0
    floors_in_im = sum(1 for lab in im if m.canon[lab - 1][0] == "F")
    sign = -1 if (floors_in_im // 2) % 2 else 1
    cut = t.n - 2 * r
    num = 1
    for lab, w in m.edges():
        if lab > cut:
            num *= w
    return sign * _exact_div(num, ipow(t.delta), "real multiplicity")


def oracle_N(alpha: NatSeq, beta: NatSeq, workers: int = 1) -> int:
    t = MarkingType(alpha=alpha, beta=beta)
    return sum(complex_mult(m) for m in enumerate_marked(t, workers))


def oracle_C(
    alpha: NatSeq, beta: NatSeq, gamma: NatSeq, delta: NatSeq, r: int, workers: int = 1
) -> int:
    t = MarkingType(alpha, beta, gamma, delta)
    _check_r(t, r)
    return sum(real_mult(m, r) for m in enumerate_marked(t, workers))


def dump_line(m: MarkedDiagram) -> str:
    """One-line text form: ``d=.. floors=.. internal=[..] ends=[..] marks=[..]``."""
    internal = []
    ends = []
    marks = []
    for lab, x in enumerate(m.canon, 1):
        if x[0] == "F":
            marks.append("F")
        elif x[0] == "I":
            marks.append(f"I{len(internal)}")
            internal.append(f"({x[1]},{x[2]},{x[3]})")
        else:
            marks.append(f"{x[0]}{len(ends)}")
            ends.append(f"({x[1]},{x[2]},{1 if x[0] == 'E' else 0})")
    return "d={} floors={} internal=[{}] ends=[{}] marks=[{}]".format(
        m.mtype.d,
        len(m.floors()),
        ";".join(internal),
        ";".join(ends),
        ",".join(marks),
    )
