"""
Dirichlet characters, character sums, Hecke-type coefficients and the
twist-ratio Dirichlet polynomial.
"""
from .characters import DirichletCharacter, all_characters, character_from_spec, group_exponent, unit_group
from .dirichlet_poly import DirichletPolynomial
from .hecke import (
    HeckeCoefficients,
    load_coefficients,
    random_hecke_coefficients,
    recursion_holds,
    save_coefficients,
)
from .sums import (
    c_chi,
    c_chi_direct,
    character_family,
    gauss_sum,
    orthogonality_check,
    ramanujan_c,
    ramanujan_c_direct,
)
from .twist_ratio import FEReport, build_D, check_fe, fe_instance, oracle_twist_ratio, reflection_factor

__all__ = [
    'DirichletCharacter', 'all_characters', 'character_from_spec', 'group_exponent', 'unit_group',
    'DirichletPolynomial',
    'HeckeCoefficients', 'load_coefficients', 'save_coefficients', 'random_hecke_coefficients',
    'recursion_holds',
    'ramanujan_c', 'ramanujan_c_direct', 'c_chi', 'c_chi_direct', 'gauss_sum',
    'character_family', 'orthogonality_check',
    'FEReport', 'build_D', 'check_fe', 'fe_instance', 'oracle_twist_ratio', 'reflection_factor',
]
