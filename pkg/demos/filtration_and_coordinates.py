"""
Pole-order filtration and coordinate changes
============================================
"""

from andersonsf import FieldParams, anderson_thakur_omega, carlitz, direct_sum, filtration_ranks
from andersonsf.special_fn import coordinate_change_check, direct_sum_basis, prolongation_basis, tensor_generator
from andersonsf.tmodule import TauMatrixPoly, identity, zeros
from andersonsf.base_arith import CinfNum

P = FieldParams.for_q(3)
om = anderson_thakur_omega(P)

for n in (1, 2, 3):
    w = om if n == 1 else tensor_generator(P, n, omega=om.comps[0])
    print(f"C^{n}:", filtration_ranks(w.E, [w]))

for k in (1, 2):
    basis = prolongation_basis(P, k, omega=om.comps[0])
    print(f"rho_{k}:", filtration_ranks(basis[0].E, basis))

# residues move by M_0 when coordinates change by M = 1 + E_12 tau
E = direct_sum(carlitz(P), carlitz(P))
e12 = zeros(P, 2)
e12[0][1] = CinfNum.one(P)
M = TauMatrixPoly([identity(P, 2), e12])
for w in direct_sum_basis(E, [[om], [om]]):
    r = coordinate_change_check(E, M, w)
    print("coordinate change:", r.residual, r.detail)
