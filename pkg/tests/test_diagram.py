from collections import Counter
from itertools import product

import pytest

from welschinger.diagram import (
    FloorDiagram,
    InconsistencyError,
    MarkedDiagram,
    MarkingType,
    complex_mult,
    dump_line,
    enumerate_floor_diagrams,
    enumerate_marked,
    oracle_C,
    oracle_N,
    r_pairs,
    real_involution,
    real_mult,
)
from welschinger.natvec import ZERO, is_odd, unit, vectors_of_iweight
from welschinger.recursion import Engine

from reference_values import CUBIC_COLUMNS


def types_of_degree(d):
    for wa in range(d + 1):
        for wb in range(d - wa + 1):
            rest = d - wa - wb
            if rest % 2:
                continue
            for wg in range(rest // 2 + 1):
                yield from (
                    MarkingType(a, b, g, dl)
                    for a, b, g, dl in product(
                        vectors_of_iweight(wa), vectors_of_iweight(wb),
                        vectors_of_iweight(wg), vectors_of_iweight(rest // 2 - wg),
                    )
                )


SMALL_TYPES = [t for d in (1, 2, 3) for t in types_of_degree(d)]


def r_range(t):
    return range((2 * t.d - 1 + sum(t.beta) + 2 * sum(t.delta)) // 2 + 1)


def test_marking_type_basics():
    t = MarkingType(unit(1), unit(1, 2), unit(2), unit(1))
    assert t.d == 1 + 2 + 4 + 2
    assert t.n == 2 * 9 - 1 + 1 + 2 + 2 + 2
    assert t.source_weights() == [1, 2, 2]
    assert t.marked_end_counts() == {1: 4}
    with pytest.raises(ValueError):
        MarkingType()


def test_floor_diagram_counts():
    # frozen from the enumerator; d=1,2 are easy to confirm by hand
    assert [len(enumerate_floor_diagrams(d)) for d in range(1, 6)] == [1, 2, 8, 45, 284]


def test_floor_diagram_check_rejects():
    FloorDiagram(2, ((0, 1, 1),), ((0, 2),)).check()
    with pytest.raises(InconsistencyError):
        FloorDiagram(2, ((0, 1, 2),), ((0, 2),)).check()
    with pytest.raises(InconsistencyError):
        FloorDiagram(2, (), ((0, 1), (1, 1))).check()
    with pytest.raises(InconsistencyError):
        FloorDiagram(1, (), ((0, 0), (0, 1))).check()


def test_floor_diagram_isomorphism():
    a = FloorDiagram(3, ((0, 2, 1), (1, 2, 1)), ((0, 2), (1, 2)))
    b = FloorDiagram(3, ((1, 2, 1), (0, 2, 1)), ((1, 2), (0, 2)))
    assert a == b and hash(a) == hash(b)
    assert len(set(enumerate_floor_diagrams(4))) == 45


@pytest.mark.parametrize("t", SMALL_TYPES, ids=str)
def test_marked_diagrams_valid_and_distinct(t):
    ms = enumerate_marked(t)
    assert len({m.canon for m in ms}) == len(ms)
    for m in ms:
        m.check()
        mu = complex_mult(m)
        assert isinstance(mu, int) and mu > 0


@pytest.mark.parametrize("t", SMALL_TYPES, ids=str)
def test_complex_sum_identity(t):
    eng = Engine()
    total = sum(complex_mult(m) for m in enumerate_marked(t))
    assert total == eng.N(t.alpha + t.gamma * 2, t.beta + t.delta * 2)


@pytest.mark.parametrize("t", SMALL_TYPES, ids=str)
def test_involution(t):
    for r in r_range(t):
        pairs = r_pairs(t, r)
        assert len(pairs) == sum(t.gamma) + r
        assert all(j == i + 1 for i, j in pairs)
        for m in enumerate_marked(t):
            perm = real_involution(m, r)
            assert all(perm[perm[i]] == i for i in perm)
            once = MarkedDiagram(t, m.relabel(perm))
            assert once.relabel(perm) == m.canon


@pytest.mark.parametrize("t", [t for t in SMALL_TYPES if not (is_odd(t.alpha) and is_odd(t.beta))], ids=str)
def test_odd_vanishing(t):
    for r in r_range(t):
        assert oracle_C(t.alpha, t.beta, t.gamma, t.delta, r) == 0


def test_r_out_of_range():
    with pytest.raises(ValueError):
        oracle_C(ZERO, unit(1, 3), ZERO, ZERO, 5)
    with pytest.raises(ValueError):
        oracle_C(ZERO, unit(1, 3), ZERO, ZERO, -1)


def test_small_oracle_values():
    assert oracle_N(unit(1), ZERO) == 1
    assert oracle_N(ZERO, unit(1, 3)) == 12
    assert oracle_N(ZERO, unit(1, 4)) == 620
    assert [oracle_C(ZERO, unit(1, 3), ZERO, ZERO, r) + oracle_C(ZERO, unit(1), ZERO, unit(1), r)
            for r in range(5)] == [8, 6, 4, 2, 0]
    assert oracle_C(unit(3), ZERO, ZERO, ZERO, 0) == 3
    assert [oracle_C(ZERO, ZERO, unit(2), ZERO, r) for r in range(4)] == [18, 4, -2, -8]
    assert [oracle_C(ZERO, unit(1, 2), unit(1), ZERO, r) for r in range(4)] == [144, 80, 40, 16]


def cubic_columns():
    cols = {}
    for i in (0, 1):
        t = MarkingType(ZERO, unit(1, 3 - 2 * i), ZERO, unit(1, i))
        for m in enumerate_marked(t):
            col = cols.setdefault(m.canon, [complex_mult(m)] + [0] * 5)
            assert col[0] == complex_mult(m)
            for r in range(5):
                col[1 + r] += real_mult(m, r)
    return cols


def test_cubic_table():
    cols = cubic_columns()
    assert len(cols) == 9
    assert Counter(tuple(c) for c in cols.values()) == Counter(CUBIC_COLUMNS)
    assert sorted(c[0] for c in cols.values()) == [1] * 8 + [4]


def test_workers_do_not_change_output():
    t = MarkingType(ZERO, unit(1, 4))
    assert [m.canon for m in enumerate_marked(t, 1)] == [m.canon for m in enumerate_marked(t, 2)]


def test_dump_line_format():
    (m,) = enumerate_marked(MarkingType(alpha=unit(1)))
    assert dump_line(m) == "d=1 floors=1 internal=[] ends=[(2,1,0)] marks=[S0,F]"
    for m in enumerate_marked(MarkingType(beta=unit(1, 3))):
        line = dump_line(m)
        assert line.startswith("d=3 floors=3 internal=[")
        assert line.count("F") == 3


def test_marked_check_rejects():
    t = MarkingType(beta=unit(1, 2))
    good = enumerate_marked(t)[0]
    bad = MarkedDiagram(t, tuple(reversed(good.canon)))
    with pytest.raises(InconsistencyError):
        bad.check()
