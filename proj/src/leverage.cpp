#include "sketchls/leverage.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sketchls {

double stable_sum(std::span<const double> values) noexcept {
	// Neumaier's variant of Kahan summation.
	double sum = 0.0;
	double comp = 0.0;
	for (double v : values) {
		const double t = sum + v;
		if (std::abs(sum) >= std::abs(v))
			comp += (sum - t) + v;
		else
			comp += (v - t) + sum;
		sum = t;
	}
	return sum + comp;
}

LeverageProfile::LeverageProfile(std::vector<double> scores, std::size_t rank)
	: scores_(std::move(scores)), coherence_(0.0), rank_(rank) {
	const std::size_t n = scores_.size();
	if (n == 0 || rank == 0 || rank > n)
		throw Error(ErrorCode::DimensionError, "leverage profile needs 1 <= r <= N");
	for (double s : scores_) {
		if (!(s >= 0.0 && s <= 1.0 + 1e-12))
			throw Error(ErrorCode::InvalidParameter, "leverage score outside [0, 1]: " + std::to_string(s));
	}
	const double total = stable_sum(scores_);
	if (std::abs(total - static_cast<double>(rank)) > 1e-8)
		throw Error(ErrorCode::InvalidParameter,
		            "leverage scores sum to " + std::to_string(total) + ", expected " + std::to_string(rank));
	coherence_ = *std::max_element(scores_.begin(), scores_.end());
	if (coherence_ < static_cast<double>(rank) / static_cast<double>(n) - 1e-12)
		throw Error(ErrorCode::InvalidParameter, "coherence below r/N");
}

SamplingDistribution::SamplingDistribution(std::vector<double> probs, std::optional<double> beta)
	: probs_(std::move(probs)), beta_(beta) {
	if (probs_.empty())
		throw Error(ErrorCode::DimensionError, "empty distribution");
	for (double p : probs_) {
		if (!(p >= 0.0 && p <= 1.0))
			throw Error(ErrorCode::InvalidParameter, "probability outside [0, 1]: " + std::to_string(p));
	}
	const double total = stable_sum(probs_);
	if (std::abs(total - 1.0) > 1e-12)
		throw Error(ErrorCode::InvalidParameter, "probabilities sum to " + std::to_string(total));
	if (beta_ && !(*beta_ > 0.0 && *beta_ <= 1.0))
		throw Error(ErrorCode::InvalidParameter, "beta annotation must lie in (0, 1]");
}

SamplingDistribution SamplingDistribution::uniform(std::size_t n) {
	if (n == 0) throw Error(ErrorCode::DimensionError, "empty distribution");
	return SamplingDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

LeverageProfile leverage_scores(const OrthonormalBasis& basis) {
	const Eigen::MatrixXd& q = basis.q().eigen();
	std::vector<double> scores(static_cast<std::size_t>(q.rows()));
	for (Eigen::Index i = 0; i < q.rows(); ++i)
		scores[static_cast<std::size_t>(i)] = q.row(i).squaredNorm();
	return LeverageProfile(std::move(scores), basis.source_rank());
}

LeverageProfile leverage_scores(const DenseMatrix& a) {
	return leverage_scores(orthonormal_basis(a));
}

SamplingDistribution leverage_distribution(const LeverageProfile& profile) {
	const auto scores = profile.scores();
	const double total = stable_sum(scores);
	std::vector<double> probs(scores.size());
	std::transform(scores.begin(), scores.end(), probs.begin(), [total](double s) { return s / total; });
	return SamplingDistribution(std::move(probs), 1.0);
}

double misestimation_beta(const SamplingDistribution& candidate, const LeverageProfile& profile) {
	if (candidate.size() != profile.size())
		throw Error(ErrorCode::DimensionError, "distribution and profile lengths differ");
	const double r = static_cast<double>(profile.rank());
	const auto scores = profile.scores();
	double beta = 1.0;
	for (std::size_t i = 0; i < scores.size(); ++i) {
		if (scores[i] <= kZeroLeverage) continue;
		if (candidate[i] <= 0.0)
			throw Error(ErrorCode::UnsupportedRow,
			            "row " + std::to_string(i) + " has leverage " + std::to_string(scores[i]) +
			                " but zero sampling probability");
		beta = std::min(beta, candidate[i] * r / scores[i]);
	}
	return beta;
}

SamplingDistribution blended_distribution(const SamplingDistribution& lev, double alpha) {
	if (!(alpha >= 0.0 && alpha <= 1.0))
		throw Error(ErrorCode::InvalidParameter, "alpha must lie in [0, 1]");
	const double floor = alpha / static_cast<double>(lev.size());
	std::vector<double> probs(lev.size());
	for (std::size_t i = 0; i < lev.size(); ++i)
		probs[i] = (1.0 - alpha) * lev[i] + floor;
	std::optional<double> beta;
	if (lev.beta() && alpha < 1.0) beta = (1.0 - alpha) * *lev.beta();
	return SamplingDistribution(std::move(probs), beta);
}

} // namespace sketchls
