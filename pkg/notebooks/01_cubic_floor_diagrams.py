# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.3'
# ---

# %% [markdown]
# # Floor diagrams of plane cubics
#
# A floor diagram is a weighted oriented tree whose non-source vertices
# ("floors") have divergence 1.  Marking it by the point conditions turns
# curve counting into a finite enumeration.  Here we list the marked
# diagrams of degree 3 and watch both the complex count (12 rational cubics
# through 8 points) and the real counts `W_2(3, r) = 8 - 2r` fall out.

# %%
from collections import Counter

from welschinger.diagram import (
    MarkingType,
    complex_mult,
    dump_line,
    enumerate_floor_diagrams,
    enumerate_marked,
    real_mult,
)
from welschinger.natvec import ZERO, unit

# %% [markdown]
# Unmarked diagrams first.  The counts grow quickly but stay small enough to
# eyeball for d <= 3.

# %%
for d in range(1, 6):
    print(d, len(enumerate_floor_diagrams(d)))

for fd in enumerate_floor_diagrams(2):
    print(fd.internal_edges, fd.end_edges)

# %% [markdown]
# Marked diagrams of type `(0, 3e_1, 0, 0)`: all three unbounded ends are
# marked, so every element of the diagram carries a label.

# %%
cubic = MarkingType(beta=unit(1, 3))
ms = enumerate_marked(cubic)
for m in ms:
    print(dump_line(m), complex_mult(m))
print("N(3) =", sum(complex_mult(m) for m in ms))

# %% [markdown]
# For Welschinger numbers the diagrams of type `(0, e_1, 0, e_1)` join in,
# where one pair of ends is complex-conjugate.  Both types share their
# marked diagrams, so we merge them by canonical form and add up the real
# multiplicities.  Each column below is one diagram: `muC` then `muR_0..4`.

# %%
cols = {}
for i in (0, 1):
    t = MarkingType(ZERO, unit(1, 3 - 2 * i), ZERO, unit(1, i))
    for m in enumerate_marked(t):
        col = cols.setdefault(m.canon, [complex_mult(m)] + [0] * 5)
        for r in range(5):
            col[1 + r] += real_mult(m, r)

for row in zip(*cols.values()):
    print(" ".join(f"{x:3d}" for x in row))

# %%
print([sum(c[1 + r] for c in cols.values()) for r in range(5)])
print(Counter(tuple(c) for c in cols.values()).most_common(3))
