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
# # Congruences between complex and real counts
#
# Two facts to look at: a growing power of 2 divides `gw(d)`, and
# `W_2(d, 0)` agrees with `gw(d)` modulo 4.

# %%
from welschinger import Engine, MemoCache
from welschinger.invariants import congruence_report, max_r, welschinger2

eng = Engine(MemoCache())
rep = congruence_report(9, eng, mod4_max=6)
print("\n".join(rep.lines()))
print(rep.summary())

# %% [markdown]
# The 2-adic valuation of every entry of a row, next to the exponent
# `(d-1)//2` of the guaranteed factor.

# %%
def v2(n):
    if n == 0:
        return None
    k = 0
    while n % 2 == 0:
        n //= 2
        k += 1
    return k


for d in range(3, 7):
    row = [welschinger2(d, r, eng) for r in range(max_r(d) + 1)]
    print(d, (d - 1) // 2, [v2(x) for x in row])
