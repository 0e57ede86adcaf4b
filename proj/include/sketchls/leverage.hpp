#pragma once

#include "sketchls/dense_core.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace sketchls {

/// Row leverage scores of a full-rank N x r matrix.
///
/// scores[i] is the squared norm of row i of any orthonormal basis of col(A).
/// Construction checks the standard identities: every score lies in
/// [0, 1], the scores sum to r, and the coherence (max score) lies in [r/N, 1].
class LeverageProfile {
public:
	LeverageProfile(std::vector<double> scores, std::size_t rank);

	std::span<const double> scores() const noexcept { return scores_; }
	double coherence() const noexcept { return coherence_; }
	std::size_t rank() const noexcept { return rank_; }
	std::size_t size() const noexcept { return scores_.size(); }

private:
	std::vector<double> scores_;
	double coherence_;
	std::size_t rank_;
};

/// Probability vector over rows, with an optional misestimation factor
/// annotation relative to some reference leverage profile.
class SamplingDistribution {
public:
	explicit SamplingDistribution(std::vector<double> probs, std::optional<double> beta = std::nullopt);

	static SamplingDistribution uniform(std::size_t n);

	std::span<const double> probs() const noexcept { return probs_; }
	double operator[](std::size_t i) const { return probs_[i]; }
	std::size_t size() const noexcept { return probs_.size(); }
	std::optional<double> beta() const noexcept { return beta_; }

private:
	std::vector<double> probs_;
	std::optional<double> beta_;
};

/// Scores at or below this are treated as zero leverage when computing beta.
inline constexpr double kZeroLeverage = 1e-12;

LeverageProfile leverage_scores(const DenseMatrix& a);
LeverageProfile leverage_scores(const OrthonormalBasis& basis);

/// p_i = l_i / sum(l); annotated with beta = 1.
SamplingDistribution leverage_distribution(const LeverageProfile& profile);

/// Largest beta with p_i * r / l_i >= beta on every positive-leverage row, clamped to 1.
/// Throws UnsupportedRow when a row with positive leverage has zero probability.
double misestimation_beta(const SamplingDistribution& candidate, const LeverageProfile& profile);

/// (1 - alpha) * lev + alpha * uniform. Every entry is at least alpha / N.
SamplingDistribution blended_distribution(const SamplingDistribution& lev, double alpha);

/// Compensated sum; distribution invariants are checked to 1e-12 at N ~ 1e5.
double stable_sum(std::span<const double> values) noexcept;

} // namespace sketchls
