"""Critical-point analysis of the even-theta-constant functional on the
genus-two Siegel upper half-space and its symmetric strata."""

from .core import (Characteristic, MoebiusElement, RationalValue, RootOfUnity,
                   SiegelPoint, SymplecticTransform, TruncationPolicy,
                   make_siegel_point, symplectic_compose)
from .theta import (ThetaValue, dedekind_eta, enumerate_even_characteristics,
                    jacobi_theta, theta_const, theta_deriv)
from .functional import (big_f, f_d2, f_d3, f_z2, grad_big_f,
                         inverse_binary_addition_check, j_invariant, small_f,
                         theta_prym_split)
from .modular import (apply_symplectic, embed_d2, embed_d3, embed_z2,
                      genus1_reduce, gottschling_membership,
                      modular_equivalent, reduce_to_gottschling,
                      strata_homomorphism, z2_pair_transform)
from .stationarity import (cayley_to_ball, linearize_symmetric_action,
                           transport_stabilizer, verify_stationary)
from .search import (CriticalPointRecord, GridSpec, classify,
                     genus1_critical_points, grid_scan, hessian_signature,
                     refine_critical, scan_and_classify, strata_search)
from .strata import (bolza_family, d3_extremal_point, d3_extremal_sigma,
                     reference_curve, verify_family_inclusions,
                     z2_known_critical_points)
from .curves_euler import (BranchPointSet, D3Match, MassTerm,
                           fourth_point_forced, full_moduli_euler,
                           genus1_euler, mass_formula, match_d3_normal_form,
                           mobius_equivalent_configs, rosenhain_branch_points,
                           strata_euler)

__version__ = "0.1.0"
