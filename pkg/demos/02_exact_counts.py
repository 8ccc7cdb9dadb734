#!/usr/bin/env python3
"""Exact class counts at fixed primes, checked against the polynomials."""
from posetk import (
    BudgetExceeded,
    PosetSystem,
    chain,
    compute_k,
    count_k,
    count_k_system,
    figure_poset,
)

# The oracle enumerates the group and sums fixed points (Burnside),
# so it is exact but exponential in the number of relations.
for q in (2, 3, 5):
    print(f"chain 4 at q={q}:  {count_k(chain(4), q)}")

# Polynomial and oracle must agree wherever both are available.
P = figure_poset()
poly = compute_k(P).poly
for q in (2, 3, 5, 7):
    exact = count_k(P, q)
    print(f"figure poset at q={q}:  oracle {exact}  poly {poly.eval_at_q(q)}")
    assert exact == poly.eval_at_q(q)

# Fiber counts for a marked system (poset, maximal element, antichain):
# the ingredient the reduction calculus works with.
S = PosetSystem(chain(4), 4, frozenset({1}))
print("system (chain 4, m=4, A={1}) at q=2:", count_k_system(S, 2))

# The budget guards against runaway enumerations and reports what a run
# would need.
try:
    count_k(chain(9), 7)
except BudgetExceeded as exc:
    print(f"refused: needs {exc.required} elements, budget {exc.budget}")
