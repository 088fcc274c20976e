"""Special functions, residues and periods of Anderson F_q[t]-modules, computed
exactly in a truncated model of C_inf."""

from .base_arith import CinfNum, FieldParams, PrecisionError, kth_root, lambda_theta
from .exp_lattice import ExpCoeffs, carlitz_period, exp_coeffs, exp_eval, lattice_member
from .special_fn import (SpecialFunction, anderson_thakur_omega, coordinate_change_check, filtration_ranks,
                         prolongation_basis, residue_at_j, sf_check, sf_from_lattice, standard_basis,
                         tensor_generator)
from .tate_mero import HorizonError, MeroJRep, TateSeries, expand_on_disk, gauss_norm, holomorphy_check
from .tmodule import (TauMatrixPoly, TModule, carlitz, carlitz_tensor, direct_sum, prolongation,
                      user_defined)

__all__ = [
    "CinfNum", "FieldParams", "PrecisionError", "kth_root", "lambda_theta",
    "ExpCoeffs", "carlitz_period", "exp_coeffs", "exp_eval", "lattice_member",
    "SpecialFunction", "anderson_thakur_omega", "coordinate_change_check", "filtration_ranks",
    "prolongation_basis", "residue_at_j", "sf_check", "sf_from_lattice", "standard_basis", "tensor_generator",
    "HorizonError", "MeroJRep", "TateSeries", "expand_on_disk", "gauss_norm", "holomorphy_check",
    "TauMatrixPoly", "TModule", "carlitz", "carlitz_tensor", "direct_sum", "prolongation", "user_defined",
]
