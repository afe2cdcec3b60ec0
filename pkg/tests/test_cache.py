import threading

import pytest
from hypothesis import given, strategies as st

from welschinger.cache import HEADER, CacheConflictError, CacheFormatError, MemoCache
from welschinger.natvec import ZERO, NatSeq, unit
from welschinger.recursion import Engine

vecs = st.lists(st.integers(0, 5), max_size=4).map(NatSeq)


@given(vecs, vecs, vecs, vecs, st.integers(0, 9), st.integers(-10**20, 10**20))
def test_record_roundtrip(a, b, g, dl, r, v):
    for table, key in (("C", (a, b, g, dl, r)), ("N", (a, b)), ("W3", (a, b))):
        line = MemoCache.format_record(table, key, v)
        assert MemoCache.parse_record(line) == (table, key, v)


def test_record_layout():
    line = MemoCache.format_record("C", (ZERO, unit(1, 3), ZERO, ZERO, 2), 4)
    assert line == "C 2 0 3 0 0 4"
    assert MemoCache.format_record("N", (unit(3), unit(1, 2)), 9) == "N 0,0,1 2 9"


@pytest.mark.parametrize("line", ["X 1 2 3", "N 1 2", "C -1 0 1 0 0 5", "N 1,a 0 3", "C 1 0 1 0 0"])
def test_bad_records(line):
    with pytest.raises(CacheFormatError):
        MemoCache.parse_record(line)


def test_load_reports_line_number(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text(f"{HEADER}\nN 1 0 1\nbogus\n")
    with pytest.raises(CacheFormatError, match="line 3"):
        MemoCache(p)
    p.write_text("FLOORCACHE 2\n")
    with pytest.raises(CacheFormatError, match="line 1"):
        MemoCache(p)


def test_no_overwrite():
    c = MemoCache()
    c.put("N", (ZERO, unit(1)), 1)
    c.put("N", (ZERO, unit(1)), 1, source="oracle")
    assert c.provenance["N"][(ZERO, unit(1))] == "both-agree"
    with pytest.raises(CacheConflictError):
        c.put("N", (ZERO, unit(1)), 2)


def test_flush_export_load(tmp_path):
    p = tmp_path / "cache.txt"
    eng = Engine(MemoCache(p))
    w = [eng.W2(4, r) for r in range(6)]
    n = eng.cache.flush()
    assert n == len(eng.cache) > 0
    assert p.read_text().startswith(HEADER + "\n")
    assert eng.cache.flush() == 0

    again = MemoCache(p)
    assert again.tables == eng.cache.tables
    eng2 = Engine(again)
    assert [eng2.W2(4, r) for r in range(6)] == w
    assert again.misses == 0  # served entirely from the file

    out = tmp_path / "export.txt"
    eng.cache.export(out)
    assert MemoCache(out).tables == eng.cache.tables


def test_conflicting_file(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text(f"{HEADER}\nN 1 0 1\nN 1 0 2\n")
    with pytest.raises(CacheConflictError):
        MemoCache(p)


def test_in_progress_is_per_thread():
    c = MemoCache()
    key = (ZERO, unit(1))
    c.begin("N", key)
    errors = []

    def other():
        try:
            c.begin("N", key)
            c.put("N", key, 1)
        except Exception as exc:
            errors.append(exc)

    t = threading.Thread(target=other)
    t.start()
    t.join()
    assert not errors
    assert c.put("N", key, 1) == 1


def test_clear_and_stats():
    c = MemoCache()
    c.put("W3", (unit(1), ZERO), 1)
    assert c.stats()["W3"] == 1
    c.clear()
    assert len(c) == 0
