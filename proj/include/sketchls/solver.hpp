#pragma once

#include "sketchls/dense_core.hpp"
#include "sketchls/leverage.hpp"
#include "sketchls/sketch.hpp"

#include <cstdint>

namespace sketchls {

/// epsilon and delta, both strictly inside (0, 1).
class AccuracyTarget {
public:
	AccuracyTarget(double epsilon, double delta);

	double epsilon() const noexcept { return epsilon_; }
	double delta() const noexcept { return delta_; }

private:
	double epsilon_;
	double delta_;
};

struct SketchSolution {
	DenseMatrix x_tilde;
	SketchPlan plan;
	double sketched_residual_sq; // ||SA x_tilde - SB||_F^2
};

/// C = 144 / (1 - 1/sqrt(2))^2 ~ 1678.587.
double sample_size_constant() noexcept;

/// ceil((r / beta) * max(C ln(r / delta), 1 / (delta eps))). Not clipped to N.
std::uint64_t required_samples(std::size_t r, double beta, const AccuracyTarget& target);

/// Solves min ||SAX - SB||_F with S = RandSample(s, p).
/// Throws SketchRankDeficient when SA is not full column rank for the realized plan.
SketchSolution sketched_lstsq(const DenseMatrix& a, const DenseMatrix& b, const SamplingDistribution& p,
                              std::size_t s, RngStream& rng);

/// Same solve for a plan that was drawn elsewhere.
SketchSolution sketched_lstsq(const DenseMatrix& a, const DenseMatrix& b, SketchPlan plan);

/// R^2 below kZeroResidualRel * ||B||_F^2 is treated as an exactly consistent system.
inline constexpr double kZeroResidualRel = 1e-20;
/// In that regime the sketched residual must be below this (relative to ||B||_F^2) for ratio 1.
inline constexpr double kConsistentResidualRel = 1e-12;

bool is_zero_residual(double residual_sq, double b_norm_sq) noexcept;

/// ||A x_tilde - B||_F^2 / R^2. Consistent systems report 1 or +inf (see is_zero_residual).
double accuracy_ratio(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& x_tilde,
                      const LstsqSolution& exact);

} // namespace sketchls
