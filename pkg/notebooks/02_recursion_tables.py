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
# # Recursion versus enumeration
#
# Enumeration stops being practical around degree 5.  The recursive
# formulas reach degree 9 in seconds to minutes, and for small degrees we
# can check them key by key against the diagrams.

# %%
import time

from welschinger import Engine, MemoCache
from welschinger.invariants import crosscheck, gw, max_r, w3, welschinger2

eng = Engine(MemoCache())

# %% [markdown]
# Every key `(alpha, beta, gamma, delta, r)` of degree at most 3, odd or
# not, compared on both paths.

# %%
rep = crosscheck(3, eng)
print(rep.summary())
print("\n".join(rep.lines()[:10]))

# %% [markdown]
# The bound inside the recursion's index sets can be read with `r'` or
# `2r'`.  Only one reading survives the comparison.

# %%
loose = crosscheck(3, Engine(MemoCache(), strict_2r=False))
print(loose.summary())
for e in loose.failures()[:6]:
    print(e.line())

# %% [markdown]
# Gromov-Witten numbers of the plane.

# %%
for d in range(1, 10):
    t0 = time.perf_counter()
    print(d, gw(d, eng), f"{time.perf_counter() - t0:.2f}s")

# %% [markdown]
# Welschinger rows.  Positivity fails at the end of the d = 7 row.

# %%
for d in range(1, 8):
    t0 = time.perf_counter()
    row = [welschinger2(d, r, eng) for r in range(max_r(d) + 1)]
    print(d, row, f"{time.perf_counter() - t0:.1f}s")

# %% [markdown]
# Invariants of real projective 3-space; the even degrees vanish, and the
# recursion has to produce those zeros on its own.

# %%
print([w3(d, eng) for d in range(1, 10)])
