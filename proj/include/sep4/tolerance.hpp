#pragma once

namespace sep4 {

// Numerical thresholds shared by every module. Relative thresholds are
// measured against the largest eigenvalue or singular value in play.
struct ToleranceConfig {
  double tol_herm = 1e-10;     // absolute asymmetry accepted and symmetrized away
  double tol_psd = 1e-9;       // eigenvalue >= -tol_psd * lambda_max counts as nonnegative
  double tol_rank = 1e-9;      // eigenvalue > tol_rank * lambda_max counts toward the rank
  double tol_orth = 1e-10;
  double tol_recon = 1e-9;
  double tol_product = 1e-8;   // sigma_2 / sigma_1 of every flattening
  double tol_chow = 1e-8;      // |F| on the rms-normalized Pluecker vector

  // Throws Error(kInvalidArgument) on NaN, Inf or negative entries.
  void validate() const;
};

}  // namespace sep4
