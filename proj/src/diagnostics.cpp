#include "sketchls/diagnostics.hpp"

#include <cmath>
#include <limits>

namespace sketchls {

StructuralReport check_structural(const SketchPlan& plan, const OrthonormalBasis& q, const DenseMatrix& b_perp,
                                  double epsilon, double residual_sq) {
	if (q.q().rows() != plan.n_source_rows() || b_perp.rows() != plan.n_source_rows())
		throw Error(ErrorCode::DimensionError, "basis / residual rows do not match the plan");
	if (!(epsilon > 0.0 && epsilon < 1.0))
		throw Error(ErrorCode::InvalidParameter, "epsilon must lie in (0, 1)");

	const Eigen::MatrixXd sq = apply_sketch(plan, q.q().eigen());
	const Eigen::MatrixXd sb = apply_sketch(plan, b_perp.eigen());

	// With s < r the sketched basis has a zero singular value.
	double sc1 = 0.0;
	if (sq.rows() >= sq.cols()) {
		const double smin = detail::singular_values(sq).minCoeff();
		sc1 = smin * smin;
	}
	const double sc2 = (sq.transpose() * sb).squaredNorm();

	StructuralReport rep{};
	rep.sc1_value = sc1;
	rep.sc1_holds = sc1 >= kSc1Threshold - kStructuralSlack;
	rep.sc2_value = sc2;
	rep.sc2_holds = sc2 <= epsilon * residual_sq / 2.0 + kStructuralSlack * residual_sq;
	rep.epsilon = epsilon;
	rep.residual_sq = residual_sq;
	return rep;
}

BoundContext make_bound_context(const DenseMatrix& a, const DenseMatrix& b, const LstsqSolution& exact) {
	BoundContext ctx{};
	ctx.spectrum = spectral_extremes(a);
	ctx.b_norm_sq = b.frobenius_norm_sq();
	ctx.x_opt_norm_sq = exact.x_opt.frobenius_norm_sq();
	// ||U U^T B||_F = ||A X_opt||_F = ||B - B_perp||_F.
	const double in_span = (b.eigen() - exact.b_perp.eigen()).norm();
	ctx.gamma = ctx.b_norm_sq > 0.0 ? std::min(1.0, in_span / std::sqrt(ctx.b_norm_sq)) : 1.0;

	const double b_norm = std::sqrt(ctx.b_norm_sq);
	const double scale = b_norm + a.eigen().norm() * std::sqrt(ctx.x_opt_norm_sq);
	ctx.residual_floor = 1e-18 * scale * scale;
	const double kappa = std::isfinite(ctx.spectrum.kappa) ? ctx.spectrum.kappa : 0.0;
	const double x_scale =
	    std::sqrt(ctx.x_opt_norm_sq) + (ctx.spectrum.sigma_min > 0.0 ? b_norm / ctx.spectrum.sigma_min : 0.0);
	ctx.solution_floor = 1e-18 * kappa * kappa * x_scale * x_scale;
	return ctx;
}

BoundReport check_bounds(const BoundContext& ctx, const DenseMatrix& a, const DenseMatrix& b,
                         const LstsqSolution& exact, const DenseMatrix& x_tilde, double epsilon,
                         GammaBoundForm form) {
	if (a.rows() != b.rows() || x_tilde.rows() != a.cols() || x_tilde.cols() != b.cols() ||
	    exact.x_opt.rows() != x_tilde.rows() || exact.x_opt.cols() != x_tilde.cols())
		throw Error(ErrorCode::DimensionError, "inconsistent shapes in check_bounds");
	const double r2 = exact.residual_sq;

	BoundReport rep{};
	rep.residual_value = (a.eigen() * x_tilde.eigen() - b.eigen()).squaredNorm();
	rep.residual_limit = (1.0 + epsilon) * r2;
	rep.residual_bound_holds = rep.residual_value <= rep.residual_limit + kBoundSlack * r2 + ctx.residual_floor;

	rep.solution_bound_value = (exact.x_opt.eigen() - x_tilde.eigen()).squaredNorm();
	const double smin = ctx.spectrum.sigma_min;
	rep.solution_bound_limit = smin > 0.0 ? epsilon * r2 / (smin * smin) : std::numeric_limits<double>::infinity();
	rep.solution_bound_holds = rep.solution_bound_value <=
	                           rep.solution_bound_limit * (1.0 + kBoundSlack) + ctx.solution_floor;

	rep.gamma = ctx.gamma;
	const double eps_factor = form == GammaBoundForm::Linear ? epsilon : epsilon * epsilon;
	if (ctx.gamma > 0.0) {
		const double excess = std::max(0.0, 1.0 / (ctx.gamma * ctx.gamma) - 1.0);
		const double kappa = ctx.spectrum.kappa;
		rep.gamma_bound_limit = eps_factor * kappa * kappa * excess * ctx.x_opt_norm_sq;
	} else {
		rep.gamma_bound_limit = std::numeric_limits<double>::infinity();
	}
	rep.gamma_bound_holds = rep.solution_bound_value <=
	                        rep.gamma_bound_limit * (1.0 + kBoundSlack) + ctx.solution_floor;
	return rep;
}

BoundReport check_bounds(const DenseMatrix& a, const DenseMatrix& b, const LstsqSolution& exact,
                         const SketchSolution& sol, double epsilon, GammaBoundForm form) {
	return check_bounds(make_bound_context(a, b, exact), a, b, exact, sol.x_tilde, epsilon, form);
}

bool implication_violated(const StructuralReport& sr, const BoundReport& br) noexcept {
	return sr.both_hold() && !(br.residual_bound_holds && br.solution_bound_holds);
}

} // namespace sketchls
