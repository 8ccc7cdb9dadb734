#!/usr/bin/env python3
"""Class-count polynomials in t = q - 1 for a few pattern groups."""
from posetk import (
    antichain,
    chain,
    compute_k,
    disjoint_union,
    dual,
    figure_poset,
    transitive_closure,
)

# The full upper unitriangular group U_n comes from the n-chain.
for n in range(1, 7):
    res = compute_k(chain(n))
    print(f"chain {n}:  k = {res.poly}  [{res.status}]")

# An antichain gives an abelian group of diagonal-free matrices: one class
# per element, so the polynomial is constant 1.
print("antichain 5:", compute_k(antichain(5)).poly)

# Counts multiply over connected components.
P = disjoint_union(chain(3), chain(2))
res = compute_k(P)
k3 = compute_k(chain(3)).poly
k2 = compute_k(chain(2)).poly
print("chain 3 + chain 2 disjoint:", res.poly)
print("product of the factors:  ", k3 * k2)
assert res.poly.coeffs == (k3 * k2).coeffs

# Dualizing the poset flips the matrices across the antidiagonal and
# preserves every class count.
V = transitive_closure([(1, 3), (2, 3)], 3)
print("V poset:     ", compute_k(V).poly)
print("dual of V:   ", compute_k(dual(V)).poly)

# The five-element running example: a 4-chain with one extra cover.
fig = figure_poset()
res = compute_k(fig)
print("figure poset:", res.poly, f"[{res.status}]")
print("  at q=2 ->", res.poly.eval_at_q(2), "   at q=3 ->", res.poly.eval_at_q(3))
