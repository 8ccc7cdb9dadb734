#!/usr/bin/env python3
"""How a class count is derived: traces, guarantees, and the fallback."""
from posetk import (
    Engine,
    chain,
    compute_k,
    reducibility_guarantees,
    trace_has_fallback,
    transitive_closure,
)


def rules_used(trace, acc=None):
    acc = set() if acc is None else acc
    acc.add(trace.get("rule"))
    for child in trace.get("children", ()):
        rules_used(child, acc)
    return acc


# Every result carries a derivation trace: which reduction fired where.
res = compute_k(chain(5))
print("chain 5:", res.poly)
print("rules in the trace:", sorted(r for r in rules_used(res.trace) if r))
print("used numeric fallback:", trace_has_fallback(res.trace))

# Structural guarantees: for some poset shapes the reduction provably
# terminates without ever sampling the oracle.
for pairs, n, name in [
    ([(1, 2), (2, 3), (3, 4)], 4, "chain 4"),
    ([(1, 3), (2, 3), (3, 4)], 4, "Y up"),
    ([(1, 2), (1, 3)], 3, "V down"),
]:
    P = transitive_closure(pairs, n)
    g = reducibility_guarantees(P)
    print(f"{name}: guaranteed={g['guaranteed']} via {g['theorem']}")

# An engine instance memoizes across posets, so related computations
# share work.  Proven and interpolated results live in separate tables;
# only proven ones are ever reported as proven.
eng = Engine()
eng.compute_k(chain(6))
res7 = eng.compute_k(chain(7))
print("chain 7 after warming with chain 6:", res7.status, "degree", res7.poly.degree)
