"""
Exponential coefficients and the period lattice
================================================
"""

from andersonsf import FieldParams, carlitz, carlitz_period, carlitz_tensor, exp_coeffs, lattice_member
from andersonsf.base_arith import CinfNum

P = FieldParams.for_q(2)

C = carlitz(P)
ec = exp_coeffs(C, 10)
print("v(e_i):", ec.vals())
print("functional residuals:", ec.residuals)  # inf means exactly zero

pi = carlitz_period(P)
for label, x in [("pi", pi), ("theta*pi", CinfNum.theta(P) * pi), ("pi/theta", pi * CinfNum.theta(P).inv())]:
    ok, res = lattice_member(ec, [x])
    print(f"  exp({label}) == 0 ? {ok}  (residual {res})")

# the tensor square has 2x2 coefficients; e_1 comes from a short Neumann series
E = carlitz_tensor(P, 2)
e = exp_coeffs(E, 4)
print(E, "valuations", e.vals())
