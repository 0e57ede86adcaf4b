#include "sketchls/sketch.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace sketchls {

namespace {

void require_samples(std::size_t s) {
	if (s == 0) throw Error(ErrorCode::InvalidSampleCount, "sample count must be at least 1");
}

} // namespace

SketchPlan::SketchPlan(std::size_t n_source_rows, std::vector<std::size_t> draws, std::vector<double> draw_probs,
                       std::vector<std::size_t> zero_probability_rows, std::uint64_t source_probs_digest)
	: n_source_rows_(n_source_rows),
	  draws_(std::move(draws)),
	  draw_probs_(std::move(draw_probs)),
	  zero_rows_(std::move(zero_probability_rows)),
	  digest_(source_probs_digest) {
	require_samples(draws_.size());
	if (draw_probs_.size() != draws_.size())
		throw Error(ErrorCode::DimensionError, "one probability per draw required");
	const double s = static_cast<double>(draws_.size());
	weights_.resize(draws_.size());
	for (std::size_t t = 0; t < draws_.size(); ++t) {
		if (draws_[t] >= n_source_rows_)
			throw Error(ErrorCode::DimensionError, "draw index " + std::to_string(draws_[t]) + " out of range");
		if (!(draw_probs_[t] > 0.0))
			throw Error(ErrorCode::UnsupportedRow, "drawn row has zero probability");
		weights_[t] = 1.0 / std::sqrt(s * draw_probs_[t]);
	}
	std::sort(zero_rows_.begin(), zero_rows_.end());
}

std::uint64_t distribution_digest(const SamplingDistribution& p) noexcept {
	std::uint64_t h = 0xcbf29ce484222325ull;
	for (double v : p.probs()) {
		auto bits = std::bit_cast<std::uint64_t>(v);
		for (int k = 0; k < 8; ++k) {
			h ^= bits & 0xffu;
			h *= 0x100000001b3ull;
			bits >>= 8;
		}
	}
	return h;
}

std::vector<std::size_t> multinomial_draws(const SamplingDistribution& p, std::size_t s, RngStream& rng) {
	require_samples(s);
	const auto probs = p.probs();
	std::vector<double> cdf(probs.size());
	double running = 0.0;
	std::size_t last_positive = 0;
	for (std::size_t i = 0; i < probs.size(); ++i) {
		running += probs[i];
		cdf[i] = running;
		if (probs[i] > 0.0) last_positive = i;
	}
	const double total = running;

	std::vector<std::size_t> draws(s);
	for (auto& d : draws) {
		const double u = rng.uniform01() * total;
		// First row whose cumulative mass exceeds u; zero-width rows are skipped.
		auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
		std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
		d = std::min(idx, last_positive);
	}
	return draws;
}

SketchPlan build_sketch(const SamplingDistribution& p, std::size_t s, RngStream& rng) {
	std::vector<std::size_t> draws = multinomial_draws(p, s, rng);
	std::vector<double> draw_probs(draws.size());
	for (std::size_t t = 0; t < draws.size(); ++t) draw_probs[t] = p[draws[t]];
	std::vector<std::size_t> zero_rows;
	for (std::size_t i = 0; i < p.size(); ++i)
		if (p[i] == 0.0) zero_rows.push_back(i);
	return SketchPlan(p.size(), std::move(draws), std::move(draw_probs), std::move(zero_rows),
	                  distribution_digest(p));
}

Eigen::MatrixXd apply_sketch(const SketchPlan& plan, const Eigen::MatrixXd& m) {
	if (static_cast<std::size_t>(m.rows()) != plan.n_source_rows())
		throw Error(ErrorCode::DimensionError, "matrix has " + std::to_string(m.rows()) + " rows, plan expects " +
		                                           std::to_string(plan.n_source_rows()));
	const auto draws = plan.draws();
	const auto weights = plan.weights();
	Eigen::MatrixXd out(static_cast<Eigen::Index>(draws.size()), m.cols());
	for (Eigen::Index j = 0; j < m.cols(); ++j)
		for (std::size_t t = 0; t < draws.size(); ++t)
			out(static_cast<Eigen::Index>(t), j) = weights[t] * m(static_cast<Eigen::Index>(draws[t]), j);
	return out;
}

DenseMatrix apply_sketch(const SketchPlan& plan, const DenseMatrix& m) {
	return DenseMatrix(apply_sketch(plan, m.eigen()));
}

double sketched_norm_sq(const SketchPlan& plan, std::span<const double> x) {
	if (x.size() != plan.n_source_rows())
		throw Error(ErrorCode::DimensionError, "vector length does not match plan");
	for (std::size_t i : plan.zero_probability_rows())
		if (x[i] != 0.0)
			throw Error(ErrorCode::UnsupportedRow,
			            "coordinate " + std::to_string(i) + " is nonzero but had zero sampling probability");
	const auto draws = plan.draws();
	const auto weights = plan.weights();
	double acc = 0.0;
	for (std::size_t t = 0; t < draws.size(); ++t) {
		const double v = weights[t] * x[draws[t]];
		acc += v * v;
	}
	return acc;
}

DenseMatrix approx_matmul(const DenseMatrix& a, const DenseMatrix& b, const SamplingDistribution& p,
                          std::size_t s, RngStream& rng) {
	if (a.rows() != b.rows() || a.rows() != p.size())
		throw Error(ErrorCode::DimensionError, "approx_matmul needs a.rows == b.rows == len(p)");
	const SketchPlan plan = build_sketch(p, s, rng);
	const Eigen::MatrixXd sa = apply_sketch(plan, a.eigen());
	const Eigen::MatrixXd sb = apply_sketch(plan, b.eigen());
	return DenseMatrix(sa.transpose() * sb);
}

} // namespace sketchls
