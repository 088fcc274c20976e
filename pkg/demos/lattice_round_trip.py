"""
From a lattice vector to a special function and back
====================================================

Take a period of C^(tensor 2), build its special function through the
exponential, and read the period back off as a residue.  Two choices of the
separating polynomial u give the same function.
"""

from andersonsf import FieldParams, residue_at_j, sf_check, sf_from_lattice, tensor_generator
from andersonsf.special_fn import relative_residual

P = FieldParams.for_q(3)
g = tensor_generator(P, 2)
lam = residue_at_j(g)
print("lambda valuations:", [x.val for x in lam])

ws = {}
for u in [(0, 1), (0, 1, 1)]:
    w = sf_from_lattice(g.E, lam, u)
    ws[u] = w
    back = residue_at_j(w)
    print(f"u = {list(u)}: cancellation {w.source['cancellation']}, "
          f"round trip {relative_residual([a - b for a, b in zip(back, lam)], lam)}, "
          f"sf_check {sf_check(g.E, w).residual}, max pole order {w.max_pole_order()}")

a, b = ws.values()
print("difference between the two u:", relative_residual([x - y for x, y in zip(a.comps, b.comps)], a.comps))
