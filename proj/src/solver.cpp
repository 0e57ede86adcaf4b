#include "sketchls/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace sketchls {

AccuracyTarget::AccuracyTarget(double epsilon, double delta) : epsilon_(epsilon), delta_(delta) {
	if (!(epsilon > 0.0 && epsilon < 1.0))
		throw Error(ErrorCode::InvalidParameter, "epsilon must lie in (0, 1)");
	if (!(delta > 0.0 && delta < 1.0))
		throw Error(ErrorCode::InvalidParameter, "delta must lie in (0, 1)");
}

double sample_size_constant() noexcept {
	const double gap = 1.0 - 1.0 / std::numbers::sqrt2;
	return 144.0 / (gap * gap);
}

std::uint64_t required_samples(std::size_t r, double beta, const AccuracyTarget& target) {
	if (r == 0) throw Error(ErrorCode::InvalidParameter, "rank must be at least 1");
	if (!(beta > 0.0 && beta <= 1.0)) throw Error(ErrorCode::InvalidParameter, "beta must lie in (0, 1]");
	const double rd = static_cast<double>(r);
	const double concentration = sample_size_constant() * std::log(rd / target.delta());
	const double markov = 1.0 / (target.delta() * target.epsilon());
	const double s = (rd / beta) * std::max(concentration, markov);
	if (!std::isfinite(s) || s >= 0x1.0p63)
		throw Error(ErrorCode::InvalidParameter, "sample count overflows: " + std::to_string(s));
	// Guard against 1/(delta*eps) landing one ulp above an integer.
	return static_cast<std::uint64_t>(std::ceil(s * (1.0 - 1e-12)));
}

SketchSolution sketched_lstsq(const DenseMatrix& a, const DenseMatrix& b, SketchPlan plan) {
	if (a.rows() != b.rows())
		throw Error(ErrorCode::DimensionError, "a and b row counts differ");
	if (a.rows() != plan.n_source_rows())
		throw Error(ErrorCode::DimensionError, "plan does not match the number of rows");
	if (plan.n_samples() < a.cols())
		throw Error(ErrorCode::InvalidSampleCount, "need s >= r (s = " + std::to_string(plan.n_samples()) +
		                                               ", r = " + std::to_string(a.cols()) + ")");
	const Eigen::MatrixXd sa = apply_sketch(plan, a.eigen());
	const Eigen::MatrixXd sb = apply_sketch(plan, b.eigen());
	Eigen::MatrixXd x = detail::full_rank_lstsq(sa, sb, ErrorCode::SketchRankDeficient);
	const double sketched_r2 = (sa * x - sb).squaredNorm();
	return SketchSolution{DenseMatrix(std::move(x)), std::move(plan), sketched_r2};
}

SketchSolution sketched_lstsq(const DenseMatrix& a, const DenseMatrix& b, const SamplingDistribution& p,
                              std::size_t s, RngStream& rng) {
	if (a.rows() != p.size())
		throw Error(ErrorCode::DimensionError, "distribution length does not match the number of rows");
	if (s < a.cols())
		throw Error(ErrorCode::InvalidSampleCount,
		            "need s >= r (s = " + std::to_string(s) + ", r = " + std::to_string(a.cols()) + ")");
	return sketched_lstsq(a, b, build_sketch(p, s, rng));
}

bool is_zero_residual(double residual_sq, double b_norm_sq) noexcept {
	return residual_sq <= kZeroResidualRel * b_norm_sq;
}

double accuracy_ratio(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& x_tilde,
                      const LstsqSolution& exact) {
	if (a.cols() != x_tilde.rows() || b.cols() != x_tilde.cols() || a.rows() != b.rows())
		throw Error(ErrorCode::DimensionError, "x_tilde shape does not match the problem");
	const double residual = (a.eigen() * x_tilde.eigen() - b.eigen()).squaredNorm();
	const double b_norm_sq = b.frobenius_norm_sq();
	if (is_zero_residual(exact.residual_sq, b_norm_sq)) {
		return residual <= kConsistentResidualRel * b_norm_sq ? 1.0 : std::numeric_limits<double>::infinity();
	}
	return residual / exact.residual_sq;
}

} // namespace sketchls
