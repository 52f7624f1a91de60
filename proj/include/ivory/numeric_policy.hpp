#pragma once

namespace ivory {

/// Central record of every tolerance used by the library. All comparisons are
/// relative to the scale of the operands unless noted otherwise.
struct NumericPolicy {
  /// Relative bound on ||HL - L^T H|| for self-adjointness tests.
  double self_adjoint_tol = 1e-10;
  /// Relative bound on ||P^2 - P|| for projections.
  double idempotent_tol = 1e-12;
  /// Singular values below rank_threshold * sigma_max count as zero.
  double rank_threshold = 1e-10;
  /// Relative residual allowed for S*S against the restricted matrix.
  double sqrt_residual_tol = 1e-10;
  /// Relative bound on |<x, g x>| for quadric membership.
  double membership_tol = 1e-10;
  /// Up-to-scale equality of projective representatives.
  double scale_equality_tol = 1e-9;
  /// Condition-number bound on a concatenated image/kernel basis.
  double basis_condition_bound = 1e12;
  /// |<x,x>| below isotropic_tol * ||x||^2 * ||H|| counts as isotropic.
  double isotropic_tol = 1e-12;
  /// |det(g0^-1 - tP)| below this (scaled) at reported singular parameters.
  double singular_param_tol = 1e-8;
  /// Relative residual of L*basis outside span(basis) for restriction.
  double invariant_subspace_tol = 1e-9;
  /// Default central-difference step for the path-derivative check.
  double fd_step = 1e-5;
  /// Minimum max-abs coordinate of a projective point representative.
  double normalization_floor = 1e-12;
  /// Smallest eigenvalue gap treated as leaving the square-root domain.
  double sqrt_spectrum_tol = 1e-12;
};

inline const NumericPolicy& default_policy() {
  static const NumericPolicy policy{};
  return policy;
}

}  // namespace ivory
