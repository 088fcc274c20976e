"""
The Anderson-Thakur function and the Carlitz period
====================================================

omega is stored by its principal parts at theta, theta^q, theta^(q^2), ...
Its residue at theta is the Carlitz period.
"""

from andersonsf import CinfNum, FieldParams, TateSeries, anderson_thakur_omega, carlitz_period
from andersonsf.base_arith import cinf_to_text
from andersonsf.special_fn import relative_residual, sf_check

P = FieldParams.for_q(3)
print(P)

W = anderson_thakur_omega(P)
om = W.comps[0]
print("poles tracked:", om.nparts, " tail bound:", om.tail_bound)

# residues at the outer poles become tiny
for i in range(4):
    print(f"  residue at theta^(q^{i}) has valuation {om.parts[i][0].val}")

pi = carlitz_period(P)
print("period  :", cinf_to_text(pi.with_rel_prec(12)))
print("residue :", cinf_to_text(om.residue().with_rel_prec(12)))

# twisting moves every pole one step outwards and multiplies by (t - theta)
lin = TateSeries(P, [-CinfNum.theta(P), CinfNum.one(P)])
print("twist identity, digits of agreement:", relative_residual([om.twist() - om * lin], [om]))
print("special function check:", sf_check(W.E, W).residual)

# value at t = 0 is lambda_theta
disk = om.expand_on_disk(8)
print("omega(0):", cinf_to_text(disk.coeffs[0].with_rel_prec(8)))
