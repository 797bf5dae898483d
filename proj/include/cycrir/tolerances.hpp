#pragma once

namespace cycrir {

// Default numerical tolerances. Every classification/search entry point
// accepts overrides; these are the documented defaults.

/// Relative threshold for stripping near-zero leading coefficients
/// (scaled by the largest coefficient magnitude).
inline constexpr double kTolCoeffRel = 1e-12;

/// Root residual contract: |p(r)| <= kTolResidual * max|coeffs| * max(1,|r|)^deg.
inline constexpr double kTolResidual = 1e-8;

/// Minimum allowed distance between numerator and denominator roots.
inline constexpr double kTolCancel = 1e-7;

/// Absolute band around the imaginary axis for stability classification.
inline constexpr double kTolAxis = 1e-9;

/// Stabilization margin: "stabilizes" means all roots have Re < -margin.
inline constexpr double kMarginReq = 1e-6;

/// Absolute bisection tolerance on rho in stabilizer searches.
inline constexpr double kRhoBisectTol = 1e-4;

}  // namespace cycrir
