#pragma once

#include "sketchls/dense_core.hpp"
#include "sketchls/sketch.hpp"
#include "sketchls/solver.hpp"

namespace sketchls {

/// SC1: sigma_min^2(S U_A) >= 1/sqrt(2).
inline constexpr double kSc1Threshold = 0.70710678118654752440;
/// Absolute slack on the SC1 threshold; SC2 uses the same value relative to R^2.
inline constexpr double kStructuralSlack = 1e-12;
/// Relative slack on the deterministic accuracy bounds.
inline constexpr double kBoundSlack = 1e-10;

struct StructuralReport {
	double sc1_value;  // sigma_min^2(S U_A)
	bool sc1_holds;
	double sc2_value;  // ||U_A^T S^T S B_perp||_F^2
	bool sc2_holds;    // sc2_value <= eps R^2 / 2
	double epsilon;
	double residual_sq;

	bool both_hold() const noexcept { return sc1_holds && sc2_holds; }
};

/// Exponent on epsilon in the gamma-conditioned solution bound.
enum class GammaBoundForm {
	Linear,        // eps * kappa^2 * (gamma^-2 - 1) * ||X_opt||_F^2
	SquaredEpsilon,  // eps^2 * kappa^2 * (gamma^-2 - 1) * ||X_opt||_F^2
};

struct BoundReport {
	double residual_value;  // ||A x_tilde - B||_F^2
	double residual_limit;  // (1 + eps) R^2
	bool residual_bound_holds;
	double solution_bound_value;  // ||X_opt - x_tilde||_F^2
	double solution_bound_limit;  // eps R^2 / sigma_min^2(A)
	bool solution_bound_holds;
	double gamma;                 // ||U_A U_A^T B||_F / ||B||_F
	double gamma_bound_limit;
	bool gamma_bound_holds;
};

/// Per-problem quantities reused across trials of check_bounds.
struct BoundContext {
	SpectralSummary spectrum;
	double b_norm_sq;
	double x_opt_norm_sq;
	double gamma;
	double residual_floor;  // absolute round-off floor on the residual comparison
	double solution_floor;  // absolute round-off floor on the solution comparison
};

StructuralReport check_structural(const SketchPlan& plan, const OrthonormalBasis& q, const DenseMatrix& b_perp,
                                  double epsilon, double residual_sq);

BoundContext make_bound_context(const DenseMatrix& a, const DenseMatrix& b, const LstsqSolution& exact);

BoundReport check_bounds(const BoundContext& ctx, const DenseMatrix& a, const DenseMatrix& b,
                         const LstsqSolution& exact, const DenseMatrix& x_tilde, double epsilon,
                         GammaBoundForm form = GammaBoundForm::Linear);

BoundReport check_bounds(const DenseMatrix& a, const DenseMatrix& b, const LstsqSolution& exact,
                         const SketchSolution& sol, double epsilon, GammaBoundForm form = GammaBoundForm::Linear);

/// True when SC1 and SC2 hold but one of the two accuracy bounds fails.
bool implication_violated(const StructuralReport& sr, const BoundReport& br) noexcept;

} // namespace sketchls
