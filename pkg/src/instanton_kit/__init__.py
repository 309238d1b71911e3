"""Exact computations for instanton sheaves: Chern characters on rank-one Fano
threefolds, walls on the (alpha, s)-slice, line-bundle monads on P^n, ADHM data
and the associated quiver representations."""

from .exact import HomogPoly, PolyMatrix, frac, fmt
from .fano import (P3, Q3, PRESETS, ChernCharacter, FanoThreefold, IntegratedVector,
                   D_functor_character, acyclic_extension_character, euler_characteristic,
                   instanton_vector, line_bundle, tensor_line_bundle, twist_character, untwist,
                   variety)
from .stability import (INFINITY, central_charge, in_quiver_region, in_region_U, lambda_slope,
                        mu_slope, nu_slope, slope_chain_check)
from .wall_engine import (chamber_of, enumerate_candidates, instanton_wall_constant, lattice_constraints,
                          quadric_monad_counts, walls)
from .monads import (CohomologyTable, LineBundleComplex, bott_line, cohomology_table,
                     complex_character, hypercohomology, instanton_predicate, perverse_shape_check,
                     verify_complex)
from .adhm import ADHMData, build_monad, check_adhm, fiberwise_check, framing_check, git_stable
from .quiver import QuiverRep, from_monad, subrep_search, theta_pairing, theta_vector

__version__ = "0.1.0"
