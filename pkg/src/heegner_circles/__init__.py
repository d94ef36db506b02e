"""Lattice points on hyperbolic circles around class-number-one Heegner
points: exact enumeration, counting identities, angular equidistribution
statistics, and shifted norm-pair counts."""

from .quadfield import (AlgebraicInt, Discriminant, all_fields, b_indicator,
                        chi, enumerate_norm, factorize, field, kronecker,
                        omega_pair, r_count, r_star, residue_m, v_k)
from .halfplane import (UnimodularMatrix, apply_mobius, arithmetic_radius,
                        cosh_distance, disc_map, integer_coords,
                        split_coordinates)
from .circles import (CirclePoint, Radius, SplitPair, angles,
                      brute_force_matrices, enumerate_pairs, lattice_points,
                      pairs_to_matrices, radii_up_to)
from .equidist import (DiscrepancyReport, circle_discrepancy,
                       circle_problem_sum, discrepancy_report, et_bound,
                       sharp_factorization_check, survey)
from .bnumbers import (Classification, ProgressionSpec, build_progression,
                       b_star_count, classify, shifted_count, sifted_count)

__all__ = [name for name in dir() if not name.startswith("_")]
