#pragma once

#include "sketchls/dense_core.hpp"
#include "sketchls/leverage.hpp"
#include "sketchls/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sketchls {

/// A realized row-sampling sketch S (s x N), stored as the drawn row indices
/// (0-based, with repetition) and their rescaling weights 1/sqrt(s p_i).
/// S is never materialized.
class SketchPlan {
public:
	SketchPlan(std::size_t n_source_rows, std::vector<std::size_t> draws, std::vector<double> draw_probs,
	           std::vector<std::size_t> zero_probability_rows, std::uint64_t source_probs_digest);

	std::size_t n_source_rows() const noexcept { return n_source_rows_; }
	std::size_t n_samples() const noexcept { return draws_.size(); }
	std::span<const std::size_t> draws() const noexcept { return draws_; }
	std::span<const double> weights() const noexcept { return weights_; }
	std::span<const double> draw_probs() const noexcept { return draw_probs_; }
	/// Rows that had probability zero when the plan was built (sorted).
	std::span<const std::size_t> zero_probability_rows() const noexcept { return zero_rows_; }
	std::uint64_t source_probs_digest() const noexcept { return digest_; }

	friend bool operator==(const SketchPlan&, const SketchPlan&) = default;

private:
	std::size_t n_source_rows_;
	std::vector<std::size_t> draws_;
	std::vector<double> draw_probs_;
	std::vector<double> weights_;
	std::vector<std::size_t> zero_rows_;
	std::uint64_t digest_;
};

/// FNV-1a over the IEEE-754 bytes of the probabilities.
std::uint64_t distribution_digest(const SamplingDistribution& p) noexcept;

/// i.i.d. draws from Multi(p) by inverse CDF with binary search.
/// Rows with zero probability are never returned.
std::vector<std::size_t> multinomial_draws(const SamplingDistribution& p, std::size_t s, RngStream& rng);

SketchPlan build_sketch(const SamplingDistribution& p, std::size_t s, RngStream& rng);

/// Row t of the result is weights[t] * m(draws[t], :).
DenseMatrix apply_sketch(const SketchPlan& plan, const DenseMatrix& m);
Eigen::MatrixXd apply_sketch(const SketchPlan& plan, const Eigen::MatrixXd& m);

/// ||S x||^2 = sum_t weights[t]^2 x[draws[t]]^2.
double sketched_norm_sq(const SketchPlan& plan, std::span<const double> x);

/// (SA)^T (SB) = (1/s) sum_t a(xi_t,:)^T b(xi_t,:) / p_{xi_t}; unbiased for a^T b.
DenseMatrix approx_matmul(const DenseMatrix& a, const DenseMatrix& b, const SamplingDistribution& p,
                          std::size_t s, RngStream& rng);

} // namespace sketchls
